"""
Packet stream ingestion and utterance segmentation.

A capture is the plain concatenation of acquisition frames for one session.
Dropped frames are detected from the sequence counter and filled by repeating
the last received sample of every channel; utterances touching a filled sample
are flagged. Repeated or late frames, which do not move the counter forward,
are dropped.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from emgcore.configs import AcquisitionConfig
from emgcore.errors import InvalidConfig, OutOfBounds
from emgcore.types import Condition, Recording, Utterance, Word
from utils import get_logger

from .frames import SEQ_MODULUS, code_to_microvolts, parse_frames

logger = get_logger(__name__)

MAX_FORWARD_STEP = SEQ_MODULUS // 2


@dataclass(frozen=True)
class PromptEvent:
    batch_id: str
    prompt_index: int
    word: Word
    onset_sample: int

    def __post_init__(self):
        object.__setattr__(self, "word", Word(self.word))


@dataclass(frozen=True)
class Gap:
    """lost frames missing after the frame numbered after_seq; filled samples start at start_sample."""

    after_seq: int
    lost: int
    start_sample: int

    @property
    def stop_sample(self):
        return self.start_sample + self.lost


def _in_order(seqs):
    """
    Mask of the frames that move the sequence counter forward.

    A step of 0, or of more than half the counter range, is a repeated or late
    frame; it is dropped and the next frame is compared with the last kept one.
    """
    steps = (seqs[1:] - seqs[:-1]) % SEQ_MODULUS
    keep = np.ones(seqs.size, dtype=bool)
    if ((steps >= 1) & (steps <= MAX_FORWARD_STEP)).all():
        return keep
    last = int(seqs[0])
    for i in range(1, seqs.size):
        step = (int(seqs[i]) - last) % SEQ_MODULUS
        if 1 <= step <= MAX_FORWARD_STEP:
            last = int(seqs[i])
            continue
        keep[i] = False
        kind = "repeated" if step == 0 else "out-of-order"
        logger.warning(f"Dropping {kind} frame seq {int(seqs[i])} at frame {i} (last kept seq {last})")
    return keep


def ingest_packet_stream(data, cfg):
    """
    Decodes a packet capture into a continuous recording.

    Args:
        data: Concatenated frame bytes
        cfg: AcquisitionConfig (frames carry n_channels_recorded samples)

    Returns:
        Tuple (Recording over all recorded channels in microvolts, list of Gap)

    Raises:
        BadMagic: At the byte offset of the first corrupt frame boundary
        ShortFrame: If the capture ends inside a frame
    """
    seqs, codes = parse_frames(data, cfg.n_channels_recorded)
    keep = _in_order(seqs)
    if not keep.all():
        seqs, codes = seqs[keep], codes[keep]
    if seqs.size == 0:
        return Recording(np.zeros((cfg.n_channels_recorded, 0)), cfg.sample_rate), []

    lost = (seqs[1:] - seqs[:-1] - 1) % SEQ_MODULUS
    repeats = np.append(lost + 1, 1)
    filled = np.repeat(codes, repeats, axis=0)
    # stream index of every received frame
    positions = np.concatenate([[0], np.cumsum(repeats[:-1])])

    gaps = [
        Gap(after_seq=int(seqs[i]), lost=int(lost[i]), start_sample=int(positions[i] + 1))
        for i in np.flatnonzero(lost)
    ]
    for gap in gaps:
        logger.warning(f"Gap after seq {gap.after_seq}: {gap.lost} frame(s) lost, "
                       f"samples [{gap.start_sample}, {gap.stop_sample}) held at the last value")
    return Recording(code_to_microvolts(filled, cfg).T, cfg.sample_rate), gaps


def validate_schedule(schedule, proto, sample_rate):
    """
    Checks that onsets are strictly increasing and at least one prompt period apart.

    Raises:
        InvalidConfig: Naming the first offending event
    """
    period = proto.prompt_period_samples(sample_rate)
    for previous, event in zip(schedule, schedule[1:]):
        if event.onset_sample <= previous.onset_sample:
            raise InvalidConfig(f"[ingest] onsets must increase: {event} follows {previous}")
        if event.onset_sample - previous.onset_sample < period:
            raise InvalidConfig(f"[ingest] {event} starts {event.onset_sample - previous.onset_sample} samples "
                                f"after the previous prompt, expected at least {period}")


def segment_utterances(stream, schedule, cfg, acquisition=None, session_id="S1", gaps=()):
    """
    Cuts one utterance per prompt event out of a continuous recording.

    Args:
        stream: Recording over the recorded channels
        schedule: Prompt events
        cfg: ProtocolConfig
        acquisition: AcquisitionConfig selecting the active channels (defaults if None)
        session_id: Session the utterances belong to
        gaps: Gaps reported by ingest_packet_stream, used to flag utterances

    Returns:
        List of Utterance, in schedule order

    Raises:
        OutOfBounds: If an event's articulation interval leaves the stream
    """
    acquisition = acquisition or AcquisitionConfig()
    length = cfg.articulation_samples(stream.sample_rate)
    utterances = []
    for event in schedule:
        start, stop = event.onset_sample, event.onset_sample + length
        if start < 0 or stop > stream.n_samples:
            raise OutOfBounds(f"[ingest] {event} needs samples [{start}, {stop}) "
                              f"but the stream has {stream.n_samples}", event)
        flagged = any(g.start_sample < stop and start < g.stop_sample for g in gaps)
        utterances.append(Utterance(
            word=event.word,
            recording=stream.slice(start, stop, channels=acquisition.active_channels),
            session_id=session_id,
            batch_id=event.batch_id,
            prompt_index=event.prompt_index,
            flagged=flagged,
        ))
    n_flagged = sum(u.flagged for u in utterances)
    if n_flagged:
        logger.warning(f"Session {session_id}: {n_flagged} utterance(s) overlap dropped frames and are flagged")
    return utterances


def schedule_to_dict(session_id, condition, schedule):
    return {
        "session_id": session_id,
        "condition": Condition(condition).value,
        "events": [
            {"batch": e.batch_id, "index": e.prompt_index, "word": e.word.name, "onset_sample": e.onset_sample}
            for e in schedule
        ],
    }


def load_schedule(path):
    """
    Reads a schedule document {session_id, condition, events: [{batch, index, word, onset_sample}]}.

    Returns:
        Tuple (session_id, Condition, list of PromptEvent)

    Raises:
        InvalidConfig: On malformed documents
    """
    with open(path, "r", encoding="utf-8") as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidConfig(f"[ingest] {path}: invalid JSON: {e}") from e
    try:
        events = [
            PromptEvent(
                batch_id=str(e["batch"]),
                prompt_index=int(e["index"]),
                word=Word.from_name(e["word"]) if isinstance(e["word"], str) else Word(int(e["word"])),
                onset_sample=int(e["onset_sample"]),
            )
            for e in document.get("events", [])
        ]
        return str(document["session_id"]), Condition.from_name(document.get("condition", "vocalized")), events
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidConfig(f"[ingest] {path}: malformed schedule: {e}") from e
