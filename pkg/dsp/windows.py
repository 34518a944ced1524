"""
Analysis-window extraction and non-overlapping window splitting.
"""
import numpy as np

from emgcore.errors import LengthMismatch, TooShort
from emgcore.types import Recording


def analysis_window(u, cfg):
    """
    Keeps the first analysis_s seconds of every channel (700 samples at 500 SPS).

    Args:
        u: Utterance (or Recording)
        cfg: PipelineConfig

    Returns:
        Recording of analysis_s x sample_rate samples

    Raises:
        TooShort: If the recording is shorter than the analysis interval
    """
    rec = getattr(u, "recording", u)
    n = cfg.analysis_samples(rec.sample_rate)
    if rec.n_samples < n:
        raise TooShort(f"[dsp] analysis window needs {n} samples, recording has {rec.n_samples}")
    return rec.slice(0, n)


def split_windows(r, cfg):
    """
    Splits a recording into n_windows consecutive windows of window_s seconds.

    Args:
        r: Recording of exactly n_windows x window_len samples
        cfg: PipelineConfig

    Returns:
        Array of shape (channels, n_windows, window_len); window k covers
        samples [k x window_len, (k + 1) x window_len)

    Raises:
        LengthMismatch: If the length is not n_windows x window_len
    """
    samples = np.asarray(getattr(r, "samples", r))
    if samples.ndim == 1:
        samples = samples[np.newaxis, :]
    sample_rate = getattr(r, "sample_rate", None)
    window_len = cfg.window_samples(sample_rate) if sample_rate else samples.shape[-1] // cfg.n_windows
    expected = cfg.n_windows * window_len
    if samples.shape[-1] != expected:
        raise LengthMismatch(f"[dsp] expected {cfg.n_windows} x {window_len} = {expected} samples, got {samples.shape[-1]}")
    return samples.reshape(samples.shape[0], cfg.n_windows, window_len)
