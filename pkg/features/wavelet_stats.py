"""
Wavelet statistics: mean and population standard deviation of the deepest
detail coefficients (level 3 for the default pipeline).
"""
import numpy as np

from dsp.wavelet import dwt_db4

WAVELET_FEATURES = ("d3_mean", "d3_std")


def wavelet_features(x, levels=3, wavelet="db4"):
    """
    Returns:
        Array of shape x.shape[:-1] + (2,)

    Raises:
        TooShort: Propagated from the transform
    """
    details = dwt_db4(x, levels=levels, wavelet=wavelet).detail(levels)
    return np.stack([details.mean(axis=-1), details.std(axis=-1)], axis=-1)
