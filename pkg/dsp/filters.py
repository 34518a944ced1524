"""
IIR filter design and zero-phase filtering.

Filters are kept as cascades of second-order sections. Designs are checked for
stability on construction and are immutable afterwards, so one design can be
shared by every channel and every thread.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from emgcore.errors import InvalidCenter, InvalidCutoff, TooShort, UnstableFilter
from emgcore.types import Recording


@dataclass(frozen=True, eq=False)
class BiquadCascade:
    """Second-order sections, one row (b0, b1, b2, 1, a1, a2) per section."""

    sos: np.ndarray
    kind: str
    frequency_hz: float
    sample_rate: float
    order: int | None = None
    q: float | None = None

    def __post_init__(self):
        sos = np.array(self.sos, dtype=np.float64, copy=True).reshape(-1, 6)
        sos = sos / sos[:, 3:4]
        radii = pole_radii(sos)
        if not np.all(radii < 1.0):
            raise UnstableFilter(f"[dsp] {self.kind} design has pole radius {radii.max():.6f} >= 1")
        sos.setflags(write=False)
        object.__setattr__(self, "sos", sos)

    @property
    def n_sections(self):
        return self.sos.shape[0]

    @property
    def padlen(self):
        return 3 * (2 * self.n_sections + 1)


def pole_radii(sos):
    """Largest pole magnitude of every section."""
    sos = np.asarray(getattr(sos, "sos", sos), dtype=np.float64).reshape(-1, 6)
    return np.array([np.abs(np.roots(section[3:])).max(initial=0.0) for section in sos])


def design_highpass(order=4, cutoff_hz=20.0, sample_rate=500.0):
    """
    Butterworth high-pass via the bilinear transform with frequency pre-warping.

    Args:
        order: Filter order of a single pass
        cutoff_hz: -3 dB frequency
        sample_rate: Samples per second

    Returns:
        BiquadCascade

    Raises:
        InvalidCutoff: Unless 0 < cutoff_hz < sample_rate / 2
    """
    if not 0 < cutoff_hz < sample_rate / 2:
        raise InvalidCutoff(f"[dsp] high-pass cutoff {cutoff_hz} Hz outside (0, {sample_rate / 2}) Hz")
    sos = signal.butter(order, cutoff_hz, btype="highpass", output="sos", fs=sample_rate)
    return BiquadCascade(sos, "highpass", float(cutoff_hz), float(sample_rate), order=int(order))


def design_notch(center_hz=50.0, q=30.0, sample_rate=500.0):
    """
    Single-biquad notch with zeros on the unit circle at center_hz and -3 dB width center_hz / q.

    Raises:
        InvalidCenter: Unless 0 < center_hz < sample_rate / 2 and q > 0
    """
    if not 0 < center_hz < sample_rate / 2:
        raise InvalidCenter(f"[dsp] notch center {center_hz} Hz outside (0, {sample_rate / 2}) Hz")
    if not q > 0:
        raise InvalidCenter(f"[dsp] notch quality factor must be > 0, got {q}")
    b, a = signal.iirnotch(center_hz, q, fs=sample_rate)
    return BiquadCascade(signal.tf2sos(b, a), "notch", float(center_hz), float(sample_rate), q=float(q))


def frequency_response(f, freqs_hz):
    """Complex response of one pass at the given frequencies."""
    _, h = signal.sosfreqz(f.sos, worN=np.atleast_1d(np.asarray(freqs_hz, dtype=np.float64)), fs=f.sample_rate)
    return h


def magnitude_db(f, freqs_hz):
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(np.abs(frequency_response(f, freqs_hz)))


def filt_zero_phase(f, x):
    """
    Forward-backward filtering along the last axis.

    The input is extended at both ends by an odd (point-reflected) extension of
    length 3 x (2 x sections + 1); the extension is discarded afterwards. The
    effective magnitude is |H|^2 and the phase is zero.

    Args:
        f: BiquadCascade
        x: Signal, samples along the last axis

    Returns:
        Filtered float64 array of the same shape

    Raises:
        TooShort: If the signal is not longer than the extension
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] <= f.padlen:
        raise TooShort(f"[dsp] zero-phase filtering needs more than {f.padlen} samples, got {x.shape[-1]}")
    return signal.sosfiltfilt(np.array(f.sos), x, axis=-1, padtype="odd", padlen=f.padlen)


def preprocess(r, cfg, filters=None):
    """
    Zero-phase high-pass then zero-phase notch, channel by channel.

    Args:
        r: Recording
        cfg: PipelineConfig
        filters: Optional (highpass, notch) designs to reuse

    Returns:
        Recording of the same shape
    """
    highpass, notch = filters or design_filters(cfg, r.sample_rate)
    out = filt_zero_phase(notch, filt_zero_phase(highpass, r.samples))
    return Recording(out, r.sample_rate)


FILTER_DESIGNERS = {
    "highpass": design_highpass,
    "notch": design_notch,
}


def design_filters(cfg, sample_rate):
    """The (high-pass, notch) pair described by a PipelineConfig."""
    return (FILTER_DESIGNERS["highpass"](cfg.hp_order, cfg.hp_cutoff_hz, sample_rate),
            FILTER_DESIGNERS["notch"](cfg.notch_hz, cfg.notch_q, sample_rate))
