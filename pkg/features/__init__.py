"""
Features Package for Silent Speech Decoder

Per-window features (9 time-domain, 2 wavelet, 6 spectral plus one ratio per
frequency band) and per-utterance feature vectors.

Feature groups are registered in FEATURE_GROUPS, in the order they appear
inside a window's block.
"""
from .core import feature_names, featurize_dataset, featurize_utterance, window_feature_names, window_features
from .spectral import Psd, freq_features, periodogram
from .time_domain import time_features, zero_crossing_rate
from .wavelet_stats import wavelet_features

FEATURE_GROUPS = {
    "time": time_features,
    "wavelet": wavelet_features,
    "freq": freq_features,
}

__all__ = [
    "FEATURE_GROUPS", "Psd", "feature_names", "featurize_dataset", "featurize_utterance",
    "freq_features", "periodogram", "time_features", "wavelet_features", "window_feature_names",
    "window_features", "zero_crossing_rate",
]
