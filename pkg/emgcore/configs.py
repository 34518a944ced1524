"""
Acquisition, protocol and pipeline configuration.

Each section of the application config file maps onto one frozen dataclass.
Invariants are checked on construction and reported as InvalidConfig.
"""
from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

from .errors import InvalidConfig


def _check(condition, message):
    if not condition:
        raise InvalidConfig(f"[config] {message}")


@dataclass(frozen=True)
class AcquisitionConfig:
    """Front-end settings: rate in samples/s, amplifier gain, reference voltage in volts."""

    sample_rate: float = 500.0
    gain: float = 12.0
    vref: float = 2.4
    n_channels_recorded: int = 16
    active_channels: tuple[int, ...] = tuple(range(14))

    def __post_init__(self):
        object.__setattr__(self, "active_channels", tuple(int(c) for c in self.active_channels))
        _check(self.sample_rate > 0, f"sample_rate must be > 0, got {self.sample_rate}")
        _check(self.gain > 0, f"gain must be > 0, got {self.gain}")
        _check(self.vref > 0, f"vref must be > 0, got {self.vref}")
        _check(self.n_channels_recorded >= 1, "n_channels_recorded must be >= 1")
        _check(len(self.active_channels) >= 1, "at least one active channel is required")
        _check(len(set(self.active_channels)) == len(self.active_channels),
               f"active_channels must be distinct, got {self.active_channels}")
        _check(all(0 <= c < self.n_channels_recorded for c in self.active_channels),
               f"active_channels must lie in [0, {self.n_channels_recorded})")

    @property
    def n_active(self):
        return len(self.active_channels)

    @property
    def full_scale_uv(self):
        return self.vref / self.gain * 1e6


@dataclass(frozen=True)
class ProtocolConfig:
    """Prompting protocol: words, timing in seconds, and the session/batch hierarchy."""

    n_words: int = 8
    articulation_s: float = 4.0
    rest_s: float = 1.0
    reps_per_batch: int = 20
    batches_per_session: int = 7
    n_sessions: int = 3

    def __post_init__(self):
        _check(self.n_words == 8, f"the vocabulary has exactly 8 words, got n_words={self.n_words}")
        _check(self.articulation_s > 0, "articulation_s must be > 0")
        _check(self.rest_s >= 0, "rest_s must be >= 0")
        for name in ("reps_per_batch", "batches_per_session", "n_sessions"):
            _check(getattr(self, name) >= 1, f"{name} must be >= 1")

    @property
    def utterances_per_batch(self):
        return self.n_words * self.reps_per_batch

    @property
    def utterances_per_session(self):
        return self.batches_per_session * self.utterances_per_batch

    @property
    def total_utterances(self):
        return self.n_sessions * self.utterances_per_session

    def articulation_samples(self, sample_rate):
        return int(round(self.articulation_s * sample_rate))

    def prompt_period_samples(self, sample_rate):
        return int(round((self.articulation_s + self.rest_s) * sample_rate))


@dataclass(frozen=True)
class PipelineConfig:
    """Preprocessing and feature settings; frequencies in Hz, durations in seconds."""

    hp_order: int = 4
    hp_cutoff_hz: float = 20.0
    notch_hz: float = 50.0
    notch_q: float = 30.0
    analysis_s: float = 1.4
    window_s: float = 0.2
    n_windows: int = 7
    wavelet: str = "db4"
    dwt_level: int = 3
    band_edges_hz: tuple[float, ...] = (20.0, 60.0, 120.0, 200.0, 250.0)
    taper: str = "boxcar"
    apply_filters: bool = True

    def __post_init__(self):
        object.__setattr__(self, "band_edges_hz", tuple(float(e) for e in self.band_edges_hz))
        _check(self.hp_order >= 1, "hp_order must be >= 1")
        _check(self.n_windows >= 1, "n_windows must be >= 1")
        _check(self.window_s > 0, "window_s must be > 0")
        _check(math.isclose(self.n_windows * self.window_s, self.analysis_s, rel_tol=1e-9),
               f"n_windows x window_s must equal analysis_s "
               f"({self.n_windows} x {self.window_s} != {self.analysis_s})")
        _check(self.dwt_level >= 1, "dwt_level must be >= 1")
        _check(len(self.band_edges_hz) >= 2, "band_edges_hz needs at least two edges")
        _check(all(a < b for a, b in zip(self.band_edges_hz, self.band_edges_hz[1:])),
               f"band_edges_hz must be strictly increasing, got {self.band_edges_hz}")
        _check(self.band_edges_hz[0] >= 0, "band edges must be non-negative")

    @property
    def n_bands(self):
        return len(self.band_edges_hz) - 1

    @property
    def features_per_window(self):
        return 9 + 2 + 6 + self.n_bands

    def window_samples(self, sample_rate):
        return int(round(self.window_s * sample_rate))

    def analysis_samples(self, sample_rate):
        return self.n_windows * self.window_samples(sample_rate)

    def check_rate(self, sample_rate):
        """Checks the invariants that depend on the acquisition rate."""
        _check(self.band_edges_hz[-1] <= sample_rate / 2,
               f"max band edge {self.band_edges_hz[-1]} Hz exceeds Nyquist {sample_rate / 2} Hz")
        _check(0 < self.hp_cutoff_hz < sample_rate / 2, "hp_cutoff_hz must lie in (0, Nyquist)")
        _check(0 < self.notch_hz < sample_rate / 2, "notch_hz must lie in (0, Nyquist)")


def from_dict(cls, values):
    """
    Builds a config dataclass from a plain dictionary (one config file section).

    Args:
        cls: Dataclass type to build
        values: Dictionary of field values; missing fields take defaults

    Returns:
        Instance of cls

    Raises:
        InvalidConfig: On unknown keys or broken invariants
    """
    values = dict(values or {})
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(values) - names)
    if unknown:
        raise InvalidConfig(f"[config] unknown {cls.__name__} keys: {unknown}")
    try:
        return cls(**values)
    except TypeError as e:
        raise InvalidConfig(f"[config] {cls.__name__}: {e}") from e


def _plain(value):
    if isinstance(value, enum.Enum):
        return value.name.lower()
    if dataclasses.is_dataclass(value):
        return [_plain(v) for v in dataclasses.astuple(value)]
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {_plain(k): _plain(v) for k, v in value.items()}
    return value


def to_dict(config):
    """Converts a config dataclass into a JSON-serializable dictionary."""
    return {f.name: _plain(getattr(config, f.name)) for f in dataclasses.fields(config)}
