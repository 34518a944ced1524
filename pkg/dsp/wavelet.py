"""
Multi-level discrete wavelet transform.

Cascaded analysis filter bank (standard 8-tap db4 decomposition pair by
default) with symmetric half-sample extension and downsampling by two per
level. Coefficient counts per level are floor((n + taps - 1) / 2):
100 -> 53 -> 30 -> 18 for db4.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pywt

from emgcore.errors import TooShort

BOUNDARY_MODE = "symmetric"


@dataclass(frozen=True, eq=False)
class DwtResult:
    """approx is the deepest approximation; details[k] holds level k + 1."""

    approx: np.ndarray
    details: tuple[np.ndarray, ...]
    mode: str = BOUNDARY_MODE

    @property
    def levels(self):
        return len(self.details)

    def detail(self, level):
        return self.details[level - 1]


def dwt_db4(x, levels=3, wavelet="db4"):
    """
    Decomposes a window (samples along the last axis) into approximation and detail coefficients.

    Args:
        x: Window, or any array with samples along the last axis
        levels: Decomposition depth
        wavelet: Wavelet name understood by PyWavelets

    Returns:
        DwtResult

    Raises:
        TooShort: If fewer than 2 ** levels samples are given
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] < 2 ** levels:
        raise TooShort(f"[dsp] {levels}-level DWT needs at least {2 ** levels} samples, got {x.shape[-1]}")
    coeffs = pywt.wavedec(x, wavelet, mode=BOUNDARY_MODE, level=levels, axis=-1)
    # wavedec orders [cA_n, cD_n, ..., cD_1]
    return DwtResult(approx=coeffs[0], details=tuple(reversed(coeffs[1:])))


def filter_length(wavelet="db4"):
    return pywt.Wavelet(wavelet).dec_len
