"""
Signal Processing Package for Silent Speech Decoder

Zero-phase high-pass and notch filtering, analysis-window extraction, window
splitting and the db4 discrete wavelet transform.

Filter designs are registered in FILTER_DESIGNERS so the pipeline can build
them by name.
"""
from .filters import (FILTER_DESIGNERS, BiquadCascade, design_filters, design_highpass, design_notch, filt_zero_phase,
                      frequency_response, magnitude_db, pole_radii, preprocess)
from .wavelet import DwtResult, dwt_db4
from .windows import analysis_window, split_windows

__all__ = [
    "BiquadCascade", "design_filters", "design_highpass", "design_notch", "filt_zero_phase",
    "frequency_response", "magnitude_db", "pole_radii", "preprocess",
    "DwtResult", "dwt_db4", "analysis_window", "split_windows", "FILTER_DESIGNERS",
]
