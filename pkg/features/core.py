"""
Per-window feature assembly and per-utterance feature vectors.

A window's 21 values are laid out as the time, wavelet and frequency groups of
FEATURE_GROUPS in that order; a FeatureVector concatenates them channel-major,
then window, then feature.
"""
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from dsp.filters import design_filters, preprocess
from dsp.windows import analysis_window, split_windows
from emgcore.types import FeatureVector
from utils import get_logger

from .spectral import SPECTRAL_FEATURES, band_feature_names, freq_features, periodogram
from .time_domain import TIME_FEATURES, time_features
from .wavelet_stats import WAVELET_FEATURES, wavelet_features

logger = get_logger(__name__)


def window_feature_names(cfg):
    return TIME_FEATURES + WAVELET_FEATURES + SPECTRAL_FEATURES + band_feature_names(cfg.n_bands)


def feature_names(n_channels, cfg):
    """
    Column names for a flattened feature vector, e.g. "ch00_w1_rms".

    Args:
        n_channels: Number of active channels
        cfg: PipelineConfig

    Returns:
        List of n_channels x n_windows x features_per_window names
    """
    per_window = window_feature_names(cfg)
    return [
        f"ch{c:02d}_w{w + 1}_{name}"
        for c in range(n_channels)
        for w in range(cfg.n_windows)
        for name in per_window
    ]


def window_features(windows, sample_rate, cfg):
    """
    Computes all per-window features along the last axis.

    Args:
        windows: Array of windows, samples on the last axis (e.g. channels x windows x samples)
        sample_rate: Samples per second
        cfg: PipelineConfig

    Returns:
        Array of shape windows.shape[:-1] + (features_per_window,)

    Raises:
        LengthMismatch: If the windows are not window_s x sample_rate samples long
    """
    windows = np.asarray(windows, dtype=np.float64)
    psd = periodogram(windows, sample_rate, window_len=cfg.window_samples(sample_rate), taper=cfg.taper)
    return np.concatenate([
        time_features(windows),
        wavelet_features(windows, levels=cfg.dwt_level, wavelet=cfg.wavelet),
        freq_features(psd, cfg.band_edges_hz),
    ], axis=-1)


def featurize_utterance(u, cfg):
    """
    Feature vector of one (already preprocessed) utterance.

    Only the first analysis_s seconds are used, split into n_windows windows.

    Args:
        u: Utterance or Recording
        cfg: PipelineConfig

    Returns:
        FeatureVector with layout (channels, n_windows, features_per_window)

    Raises:
        TooShort: If the recording is shorter than the analysis interval
        LengthMismatch: Propagated from window splitting
    """
    rec = analysis_window(u, cfg)
    windows = split_windows(rec, cfg)
    values = window_features(windows, rec.sample_rate, cfg)
    return FeatureVector(values.reshape(-1), values.shape)


def featurize_dataset(d, cfg, threads=1):
    """
    Featurizes every utterance of a dataset, in dataset order.

    When cfg.apply_filters is set, each utterance is high-pass and notch
    filtered over its full length before the analysis window is taken. Every
    utterance is handled on its own, so no statistic crosses utterances.

    Args:
        d: Dataset
        cfg: PipelineConfig
        threads: Worker threads; the result does not depend on it

    Returns:
        Tuple (feature matrix utterances x features, label vector)
    """
    rate = d.acquisition.sample_rate
    cfg.check_rate(rate)
    filters = design_filters(cfg, rate) if cfg.apply_filters else None
    n_features = d.acquisition.n_active * cfg.n_windows * cfg.features_per_window

    def featurize_one(u):
        rec = preprocess(u.recording, cfg, filters) if filters else u.recording
        return featurize_utterance(rec, cfg).values

    logger.debug(f"Featurizing {len(d)} utterance(s) with {threads} thread(s), filters={'on' if filters else 'off'}")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(featurize_one, d.utterances))
    else:
        rows = [featurize_one(u) for u in d.utterances]
    X = np.vstack(rows) if rows else np.empty((0, n_features))
    return X, d.labels()
