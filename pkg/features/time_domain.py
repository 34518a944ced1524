"""
Time-domain window statistics.

All functions work along the last axis, so a (channels, windows, samples)
block is handled in one call.
"""
import numpy as np

from emgcore.errors import TooShort

TIME_FEATURES = ("rms", "max", "min", "std", "var", "mean", "p25", "p75", "zcr")


def zero_crossing_rate(x):
    """
    Fraction of consecutive-sample pairs with a strict sign change.

    Zero samples inherit the sign of the previous nonzero sample; leading zeros
    have no sign and never count as a crossing.
    """
    x = np.asarray(x, dtype=np.float64)
    signs = np.sign(x)
    positions = np.broadcast_to(np.arange(x.shape[-1]), x.shape)
    last_nonzero = np.maximum.accumulate(np.where(signs != 0, positions, 0), axis=-1)
    held = np.take_along_axis(signs, last_nonzero, axis=-1)
    crossings = np.count_nonzero(held[..., 1:] * held[..., :-1] < 0, axis=-1)
    return crossings / (x.shape[-1] - 1)


def time_features(x):
    """
    Computes [rms, max, min, std, var, mean, p25, p75, zcr] along the last axis.

    Variance and standard deviation are population statistics (divide by N);
    percentiles interpolate linearly between order statistics.

    Args:
        x: Window (or stack of windows), at least 2 samples long

    Returns:
        Array of shape x.shape[:-1] + (9,)

    Raises:
        TooShort: For windows shorter than 2 samples
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] < 2:
        raise TooShort(f"[features] time features need at least 2 samples, got {x.shape[-1]}")
    mean = x.mean(axis=-1)
    var = x.var(axis=-1)
    p25, p75 = np.percentile(x, [25.0, 75.0], axis=-1, method="linear")
    return np.stack([
        np.sqrt(np.mean(x * x, axis=-1)),
        x.max(axis=-1),
        x.min(axis=-1),
        np.sqrt(var),
        var,
        mean,
        p25,
        p75,
        zero_crossing_rate(x),
    ], axis=-1)
