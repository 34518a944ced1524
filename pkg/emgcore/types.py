"""
Domain value types: words, recordings, utterances, datasets and feature vectors.

All types are immutable after construction. Sample arrays are stored read-only
as float32 microvolts, the precision of the on-disk batch files.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .configs import AcquisitionConfig, ProtocolConfig
from .errors import InvalidConfig


class Word(enum.IntEnum):
    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3
    FORWARD = 4
    BACKWARD = 5
    GO = 6
    STOP = 7

    @classmethod
    def from_name(cls, name):
        try:
            return cls[str(name).strip().upper()]
        except KeyError as e:
            raise InvalidConfig(f"[core] unknown word '{name}'") from e


class Condition(enum.Enum):
    VOCALIZED = "vocalized"
    SILENT = "silent"

    @classmethod
    def from_name(cls, name):
        try:
            return cls(str(name).strip().lower())
        except ValueError as e:
            raise InvalidConfig(f"[core] unknown condition '{name}'") from e


def _frozen_array(values, dtype):
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Recording:
    """Channels x samples matrix of microvolt values at a fixed sample rate."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.ndim == 1:
            samples = samples[np.newaxis, :]
        if samples.ndim != 2:
            raise InvalidConfig(f"[core] recording must be 2-D (channels x samples), got shape {samples.shape}")
        if not np.isfinite(samples).all():
            raise InvalidConfig("[core] recording contains non-finite values")
        if self.sample_rate <= 0:
            raise InvalidConfig(f"[core] sample_rate must be > 0, got {self.sample_rate}")
        object.__setattr__(self, "samples", _frozen_array(samples, np.float32))

    @property
    def n_channels(self):
        return self.samples.shape[0]

    @property
    def n_samples(self):
        return self.samples.shape[1]

    def slice(self, start, stop, channels=None):
        """Returns samples [start, stop) of the given channels (all by default)."""
        rows = self.samples if channels is None else self.samples[list(channels)]
        return Recording(rows[:, start:stop], self.sample_rate)

    def same_as(self, other):
        """Element-wise, bit-exact comparison."""
        return (self.sample_rate == other.sample_rate
                and self.samples.shape == other.samples.shape
                and np.array_equal(self.samples, other.samples))


@dataclass(frozen=True, eq=False)
class Utterance:
    word: Word
    recording: Recording
    session_id: str
    batch_id: str
    prompt_index: int
    flagged: bool = False

    def __post_init__(self):
        object.__setattr__(self, "word", Word(self.word))

    def same_as(self, other):
        return (self.word == other.word
                and self.session_id == other.session_id
                and self.batch_id == other.batch_id
                and self.prompt_index == other.prompt_index
                and self.flagged == other.flagged
                and self.recording.same_as(other.recording))

    def with_word(self, word):
        return Utterance(word, self.recording, self.session_id, self.batch_id, self.prompt_index, self.flagged)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Labeled utterances of one condition, in session / batch / prompt order."""

    utterances: tuple[Utterance, ...]
    condition: Condition = Condition.VOCALIZED
    acquisition: AcquisitionConfig = field(default_factory=AcquisitionConfig)
    protocol: ProtocolConfig = field(default_factory=ProtocolConfig)

    def __post_init__(self):
        object.__setattr__(self, "utterances", tuple(self.utterances))
        object.__setattr__(self, "condition", Condition(self.condition))

    def __len__(self):
        return len(self.utterances)

    def labels(self):
        return np.array([int(u.word) for u in self.utterances], dtype=np.int64)

    def session_ids(self):
        """Distinct session identifiers in first-seen order."""
        return list(dict.fromkeys(u.session_id for u in self.utterances))

    def batch_ids(self, session_id):
        """Distinct batch identifiers of a session in first-seen order."""
        return list(dict.fromkeys(u.batch_id for u in self.utterances if u.session_id == session_id))

    def indices_where(self, session_id=None, batch_id=None):
        return np.array([
            i for i, u in enumerate(self.utterances)
            if (session_id is None or u.session_id == session_id)
            and (batch_id is None or u.batch_id == batch_id)
        ], dtype=np.int64)

    def subset(self, indices):
        return Dataset(tuple(self.utterances[i] for i in indices), self.condition, self.acquisition, self.protocol)

    def replace_utterances(self, utterances):
        return Dataset(tuple(utterances), self.condition, self.acquisition, self.protocol)

    def same_as(self, other):
        return (self.condition == other.condition
                and self.acquisition == other.acquisition
                and self.protocol == other.protocol
                and len(self) == len(other)
                and all(a.same_as(b) for a, b in zip(self.utterances, other.utterances)))


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Flat per-utterance features, laid out channel-major, then window, then feature index."""

    values: np.ndarray
    layout: tuple[int, int, int]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        layout = tuple(int(n) for n in self.layout)
        if len(layout) != 3 or int(np.prod(layout)) != values.size:
            raise InvalidConfig(f"[core] feature layout {layout} does not match {values.size} values")
        if not np.isfinite(values).all():
            raise InvalidConfig("[core] feature vector contains non-finite values")
        object.__setattr__(self, "values", _frozen_array(values, np.float64))
        object.__setattr__(self, "layout", layout)

    def __len__(self):
        return self.values.size

    def block(self, channel):
        """Window x feature block of one channel."""
        return self.values.reshape(self.layout)[channel]
