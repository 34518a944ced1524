"""
Synthetic EMG session generator.

Signal model per utterance and channel, in microvolts:

    baseline Gaussian noise
    + envelope(word, channel) x band-limited (20-250 Hz) Gaussian carrier
    + 50 Hz powerline sinusoid with a random phase

Sessions after the first are seen through a perturbed channel mixing (adjacent
channel rotations and gain jitter) scaled by repositioning_strength, which
stands in for the neckband being put back on at a slightly different place.
Samples are quantized onto the 24-bit ADC grid.

Every random draw comes from a generator seeded by the config seed plus the
position of what it generates, so the output does not depend on thread count
or generation order.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import signal

from emgcore.errors import InvalidConfig
from emgcore.types import Condition, Dataset, Recording, Utterance, Word
from ingest.frames import code_to_microvolts, microvolts_to_code
from utils import get_logger

logger = get_logger(__name__)

CARRIER_BAND_HZ = (20.0, 250.0)
POWERLINE_HZ = 50.0
CONDITION_SNR_DB = {Condition.VOCALIZED: 10.0, Condition.SILENT: 3.0}

# generator stream tags
_ORDER, _UTTERANCE, _SESSION = 0, 1, 2


@dataclass(frozen=True)
class ClassTemplate:
    """Activation bump of one word on one channel; times in seconds from the prompt."""

    onset_s: float
    duration_s: float
    gain: float


def default_templates(n_channels):
    """
    Per-word activation signatures.

    Each word drives its own subset of channels at full gain (the others at a
    low residual gain) with its own onset and duration, all inside the first
    1.2 s of the articulation.

    Returns:
        Dictionary Word -> tuple of ClassTemplate, one per channel
    """
    templates = {}
    for word in Word:
        onset = 0.1 + 0.12 * (word % 4)
        duration = 0.5 + 0.15 * (word // 4)
        templates[word] = tuple(
            ClassTemplate(onset, duration, 1.0 if (c + 3 * word) % 8 < 3 else 0.15)
            for c in range(n_channels)
        )
    return templates


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    condition: Condition = Condition.VOCALIZED
    snr_db: float = 10.0
    baseline_uv: float = 5.0
    powerline_amp_uv: float = 20.0
    repositioning_strength: float = 0.5
    class_templates: dict | None = None

    def __post_init__(self):
        object.__setattr__(self, "condition", Condition.from_name(getattr(self.condition, "value", self.condition)))
        if not math.isfinite(self.snr_db):
            raise InvalidConfig(f"[synth] snr_db must be finite, got {self.snr_db}")
        if not 0.0 <= self.repositioning_strength <= 1.0:
            raise InvalidConfig(f"[synth] repositioning_strength must lie in [0, 1], got {self.repositioning_strength}")
        if self.baseline_uv < 0 or self.powerline_amp_uv < 0:
            raise InvalidConfig("[synth] baseline_uv and powerline_amp_uv must be >= 0")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidConfig(f"[synth] seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.class_templates is not None:
            templates = {
                Word.from_name(w) if isinstance(w, str) else Word(w):
                    tuple(t if isinstance(t, ClassTemplate) else ClassTemplate(*t) for t in per_channel)
                for w, per_channel in self.class_templates.items()
            }
            if set(templates) != set(Word):
                raise InvalidConfig("[synth] class_templates must define every word")
            object.__setattr__(self, "class_templates", templates)

    @classmethod
    def for_condition(cls, condition, seed=0, **overrides):
        """Config with the default SNR of a condition (10 dB vocalized, 3 dB silent)."""
        condition = Condition.from_name(getattr(condition, "value", condition))
        overrides.setdefault("snr_db", CONDITION_SNR_DB[condition])
        return cls(seed=seed, condition=condition, **overrides)

    def templates(self, n_channels, articulation_s):
        templates = self.class_templates or default_templates(n_channels)
        for word, per_channel in templates.items():
            if len(per_channel) != n_channels:
                raise InvalidConfig(f"[synth] {word.name} template has {len(per_channel)} channels, expected {n_channels}")
            for t in per_channel:
                if t.onset_s < 0 or t.duration_s <= 0 or t.onset_s + t.duration_s > articulation_s:
                    raise InvalidConfig(f"[synth] {word.name} template {t} does not fit in {articulation_s} s")
        return templates


def _rng(*key):
    return np.random.default_rng([int(k) for k in key])


def carrier_filter(sample_rate):
    """Band-limiting filter of the activation carrier; a high-pass when the band reaches Nyquist."""
    low, high = CARRIER_BAND_HZ
    if high < sample_rate / 2:
        return signal.butter(4, [low, high], btype="bandpass", output="sos", fs=sample_rate)
    return signal.butter(4, low, btype="highpass", output="sos", fs=sample_rate)


def envelope(template, n_samples, sample_rate):
    """Raised-cosine bump over [onset, onset + duration), scaled by the template gain."""
    t = np.arange(n_samples) / sample_rate
    phase = (t - template.onset_s) / template.duration_s
    inside = (phase >= 0) & (phase < 1)
    return np.where(inside, template.gain * 0.5 * (1.0 - np.cos(2 * np.pi * phase)), 0.0)


def session_mixing(n_channels, strength, seed, session_index):
    """
    Channel mixing matrix of a session.

    Session 0 is the reference placement (identity). Later sessions rotate
    every adjacent channel pair by an angle up to strength x 45 degrees and
    jitter channel gains by up to strength x 30 %. Strength 0 gives the
    identity for every session.
    """
    mixing = np.eye(n_channels)
    if session_index == 0 or strength == 0:
        return mixing
    rng = _rng(seed, _SESSION, session_index)
    angles = rng.uniform(-np.pi / 4, np.pi / 4, size=n_channels - 1) * strength
    for c, angle in enumerate(angles):
        rotation = np.eye(n_channels)
        rotation[c, c] = rotation[c + 1, c + 1] = np.cos(angle)
        rotation[c, c + 1] = -np.sin(angle)
        rotation[c + 1, c] = np.sin(angle)
        mixing = rotation @ mixing
    gains = 1.0 + strength * rng.uniform(-0.3, 0.3, size=n_channels)
    return gains[:, None] * mixing


def quantize(samples_uv, acq):
    """Snaps microvolt values onto the ADC code grid."""
    return code_to_microvolts(microvolts_to_code(samples_uv, acq), acq)


def prompt_order(proto, seed, session_index, batch_index):
    """Randomized word order of one batch: reps_per_batch copies of every word, never sorted."""
    rng = _rng(seed, _ORDER, session_index, batch_index)
    words = np.repeat(np.arange(proto.n_words), proto.reps_per_batch)
    while True:
        order = rng.permutation(words)
        if np.any(np.diff(order) < 0):
            return [Word(int(w)) for w in order]


def _utterance_samples(word, key, sc, acq, proto, templates, carrier, mixing):
    rate = acq.sample_rate
    n_channels = acq.n_active
    n_samples = proto.articulation_samples(rate)
    rng = _rng(sc.seed, _UTTERANCE, *key)

    activation_rms = sc.baseline_uv * 10.0 ** (sc.snr_db / 20.0)
    # per-utterance articulation variability
    shift_s = rng.uniform(-0.05, 0.05)
    strength = rng.lognormal(0.0, 0.2)

    carrier_noise = signal.sosfilt(carrier, rng.standard_normal((n_channels, n_samples)), axis=-1)
    carrier_noise /= carrier_noise.std(axis=-1, keepdims=True)
    bumps = np.stack([
        envelope(ClassTemplate(max(t.onset_s + shift_s, 0.0), t.duration_s, t.gain), n_samples, rate)
        for t in templates[word]
    ])
    muscle = activation_rms * strength * bumps * carrier_noise
    baseline = sc.baseline_uv * rng.standard_normal((n_channels, n_samples))
    t = np.arange(n_samples) / rate
    powerline = sc.powerline_amp_uv * np.sin(2 * np.pi * POWERLINE_HZ * t + rng.uniform(0, 2 * np.pi))
    return quantize(mixing @ (muscle + baseline) + powerline, acq)


def session_ids(proto):
    return [f"S{s + 1}" for s in range(proto.n_sessions)]


def batch_ids(proto):
    return [str(b + 1) for b in range(proto.batches_per_session)]


def build_dataset(proto, acq, condition, make_samples, seed, threads=1):
    """
    Lays out sessions, batches and randomized prompts and fills in samples.

    Args:
        proto: ProtocolConfig
        acq: AcquisitionConfig
        condition: Condition of the dataset
        make_samples: Callable (word, (session, batch, prompt) indices) -> channels x samples array
        seed: Seed of the prompt orders
        threads: Worker threads; the result does not depend on it

    Returns:
        Dataset
    """
    plan = []
    for s, session_id in enumerate(session_ids(proto)):
        for b, batch_id in enumerate(batch_ids(proto)):
            for p, word in enumerate(prompt_order(proto, seed, s, b)):
                plan.append((word, (s, b, p), session_id, batch_id))

    def make(item):
        word, key, session_id, batch_id = item
        return Utterance(word, Recording(make_samples(word, key), acq.sample_rate), session_id, batch_id, key[2])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            utterances = list(pool.map(make, plan))
    else:
        utterances = [make(item) for item in plan]
    return Dataset(tuple(utterances), condition, acq, proto)


def generate_dataset(proto, acq, sc, threads=1):
    """
    Generates a labeled synthetic dataset with the shape of the recording protocol.

    Args:
        proto: ProtocolConfig
        acq: AcquisitionConfig
        sc: SynthConfig
        threads: Worker threads; the result does not depend on it

    Returns:
        Dataset of proto.total_utterances utterances

    Raises:
        InvalidConfig: On templates that do not fit the protocol
    """
    templates = sc.templates(acq.n_active, proto.articulation_s)
    carrier = carrier_filter(acq.sample_rate)
    mixings = [session_mixing(acq.n_active, sc.repositioning_strength, sc.seed, s) for s in range(proto.n_sessions)]
    logger.info(f"Generating {proto.total_utterances} synthetic utterance(s): {sc.condition.value}, "
                f"snr {sc.snr_db} dB, repositioning {sc.repositioning_strength}, seed {sc.seed}")

    def make_samples(word, key):
        return _utterance_samples(word, key, sc, acq, proto, templates, carrier, mixings[key[0]])

    return build_dataset(proto, acq, sc.condition, make_samples, sc.seed, threads)


def shuffle_labels_within_batches(d, seed):
    """
    Label-permuted control: words are reassigned at random inside every batch.

    Per-batch label counts are unchanged, but labels no longer depend on the signals.
    """
    rng = np.random.default_rng([int(seed), _ORDER])
    shuffled = list(d.utterances)
    for session_id in d.session_ids():
        for batch_id in d.batch_ids(session_id):
            rows = d.indices_where(session_id=session_id, batch_id=batch_id)
            words = [d.utterances[i].word for i in rows]
            for i, j in zip(rows, rng.permutation(len(rows))):
                shuffled[i] = d.utterances[i].with_word(words[j])
    return d.replace_utterances(shuffled)
