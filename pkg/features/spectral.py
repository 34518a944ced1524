"""
Periodogram and frequency-domain window features.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from emgcore.errors import LengthMismatch

SPECTRAL_FEATURES = ("mean_freq_hz", "peak_freq_hz", "total_power", "mean_power", "sm2", "sm3")


def band_feature_names(n_bands):
    return tuple(f"band_ratio_{i + 1}" for i in range(n_bands))


@dataclass(frozen=True, eq=False)
class Psd:
    """One-sided power spectral density; power has the frequency bins on its last axis."""

    freqs_hz: np.ndarray
    power: np.ndarray

    @property
    def df(self):
        return float(self.freqs_hz[1] - self.freqs_hz[0]) if self.freqs_hz.size > 1 else 0.0


def periodogram(x, sample_rate, window_len=None, taper="boxcar"):
    """
    One-sided periodogram with density scaling along the last axis.

    With the default rectangular taper, power[k] = c_k |DFT(x)[k]|^2 / (N fs),
    c_k = 1 at DC and Nyquist and 2 elsewhere, so sum(power) x df equals the
    mean square of x. No detrending is applied.

    Args:
        x: Window (or stack of windows)
        sample_rate: Samples per second
        window_len: Expected window length; checked when given
        taper: Window name understood by scipy.signal.get_window

    Returns:
        Psd

    Raises:
        LengthMismatch: If window_len is given and differs from the input length
    """
    x = np.asarray(x, dtype=np.float64)
    if window_len is not None and x.shape[-1] != window_len:
        raise LengthMismatch(f"[features] periodogram expects {window_len} samples, got {x.shape[-1]}")
    freqs, power = signal.periodogram(x, fs=sample_rate, window=taper, detrend=False,
                                      return_onesided=True, scaling="density", axis=-1)
    return Psd(freqs_hz=freqs, power=power)


def freq_features(p, band_edges):
    """
    Computes [mean_freq, peak_freq, total_power, mean_power, sm2, sm3, band ratios...].

    Moments are normalized raw spectral moments sum(f^n P) / sum(P). Band i
    integrates [edge_i, edge_i+1); the last band also includes its upper edge.
    When the spectrum is all zero, every ratio, mean and moment is 0.

    Args:
        p: Psd
        band_edges: Increasing band edges in Hz

    Returns:
        Array of shape p.power.shape[:-1] + (6 + len(band_edges) - 1,)
    """
    f = p.freqs_hz
    power = np.asarray(p.power, dtype=np.float64)
    df = p.df
    total = power.sum(axis=-1)
    nonzero = total > 0
    safe_total = np.where(nonzero, total, 1.0)

    def normalized(weights):
        return np.where(nonzero, (power * weights).sum(axis=-1) / safe_total, 0.0)

    total_power = total * df
    columns = [
        normalized(f),
        f[np.argmax(power, axis=-1)],
        total_power,
        total_power / f.size,
        normalized(f ** 2),
        normalized(f ** 3),
    ]
    edges = list(band_edges)
    for i, (lo, hi) in enumerate(zip(edges, edges[1:])):
        last = i == len(edges) - 2
        in_band = (f >= lo) & ((f <= hi) if last else (f < hi))
        band_power = power[..., in_band].sum(axis=-1)
        columns.append(np.where(nonzero, band_power / safe_total, 0.0))
    return np.stack(columns, axis=-1)
