"""
Packet capture emitter.

Turns one session of a dataset back into the continuous frame stream the
acquisition front end would have produced: every utterance followed by a rest
of baseline noise, on all recorded channels, plus the matching schedule
document. Ingesting the pair reproduces the session exactly.
"""
import numpy as np

from ingest.core import PromptEvent, schedule_to_dict
from ingest.frames import emit_frames, microvolts_to_code

from .generator import _rng

_REST = 3


def emit_capture(d, session_id, acq, proto, seed=0, rest_noise_uv=5.0, drop_frames=()):
    """
    Args:
        d: Dataset holding the session
        session_id: Session to emit
        acq: AcquisitionConfig (recorded and active channels)
        proto: ProtocolConfig (articulation and rest durations)
        seed: Seed of the rest-period and inactive-channel noise
        rest_noise_uv: Noise standard deviation outside the utterances
        drop_frames: Stream sample indices whose frames are left out

    Returns:
        Tuple (capture bytes, schedule document)
    """
    period = proto.prompt_period_samples(acq.sample_rate)
    active = list(acq.active_channels)
    dropped = np.asarray(sorted(drop_frames), dtype=np.int64)
    chunks = []
    schedule = []
    # one prompt period at a time keeps memory at the size of the byte stream
    for k, i in enumerate(d.indices_where(session_id=session_id)):
        u = d.utterances[i]
        onset = k * period
        block = rest_noise_uv * _rng(seed, _REST, k).standard_normal((acq.n_channels_recorded, period))
        block[active, :u.recording.n_samples] = u.recording.samples
        seqs = np.arange(onset, onset + period)
        keep = ~np.isin(seqs, dropped)
        chunks.append(emit_frames(seqs[keep], microvolts_to_code(block, acq).T[keep]))
        schedule.append(PromptEvent(u.batch_id, u.prompt_index, u.word, onset))
    return b"".join(chunks), schedule_to_dict(session_id, d.condition, schedule)
