"""
Brute-force reference implementations used by the tests.

Nothing here calls into the package or into the library routines the package
relies on: sums are loops, the DFT is explicit and the wavelet transform is a
direct convolution over an explicitly extended signal.
"""
import math

import numpy as np

# Daubechies 4 (8-tap) decomposition low-pass filter.
DB4_DEC_LO = np.array([
    -0.010597401784997278,
    0.032883011666982945,
    0.030841381835986965,
    -0.18703481171888114,
    -0.02798376941698385,
    0.6308807679295904,
    0.7148465705525415,
    0.23037781330885523,
])
# Quadrature mirror: hi[k] = (-1)**(k + 1) * lo[F - 1 - k]
DB4_DEC_HI = np.array([(-1) ** (k + 1) * DB4_DEC_LO[len(DB4_DEC_LO) - 1 - k] for k in range(len(DB4_DEC_LO))])


def symmetric_extend(x, pad):
    """Half-sample symmetric extension: ..., x1, x0 | x0, x1, ... | ..., x[-1], x[-2]."""
    x = list(x)
    return np.array(x[:pad][::-1] + x + x[::-1][:pad], dtype=np.float64)


def dwt_step(x, lo=DB4_DEC_LO, hi=DB4_DEC_HI):
    """One analysis stage: filter the extended signal, keep every second output starting at index F."""
    taps = len(lo)
    n_out = (len(x) + taps - 1) // 2
    ext = symmetric_extend(x, taps - 1)
    approx, detail = [], []
    for o in range(n_out):
        m = taps + 2 * o
        approx.append(sum(lo[j] * ext[m - j] for j in range(taps)))
        detail.append(sum(hi[j] * ext[m - j] for j in range(taps)))
    return np.array(approx), np.array(detail)


def dwt(x, levels=3):
    """Returns (deepest approximation, [detail level 1, ..., detail level n])."""
    details = []
    approx = np.asarray(x, dtype=np.float64)
    for _ in range(levels):
        approx, detail = dwt_step(approx)
        details.append(detail)
    return approx, details


def percentile(x, p):
    s = sorted(float(v) for v in x)
    pos = p / 100.0 * (len(s) - 1)
    lo = math.floor(pos)
    hi = min(lo + 1, len(s) - 1)
    return s[lo] + (pos - lo) * (s[hi] - s[lo])


def zcr(x):
    crossings = 0
    previous_sign = 0
    for value in x:
        sign = int(value > 0) - int(value < 0)
        if sign == 0:
            continue
        if previous_sign and sign != previous_sign:
            crossings += 1
        previous_sign = sign
    return crossings / (len(x) - 1)


def time_features(x):
    n = len(x)
    mean = sum(x) / n
    var = sum((v - mean) ** 2 for v in x) / n
    return [
        math.sqrt(sum(v * v for v in x) / n),
        max(x),
        min(x),
        math.sqrt(var),
        var,
        mean,
        percentile(x, 25),
        percentile(x, 75),
        zcr(x),
    ]


def wavelet_features(x, levels=3):
    _, details = dwt(x, levels)
    d = details[levels - 1]
    mean = sum(d) / len(d)
    return [mean, math.sqrt(sum((v - mean) ** 2 for v in d) / len(d))]


def periodogram(x, sample_rate):
    """One-sided rectangular-window density from an explicit DFT; returns (freqs, power)."""
    n = len(x)
    freqs, power = [], []
    for k in range(n // 2 + 1):
        re = sum(x[t] * math.cos(2 * math.pi * k * t / n) for t in range(n))
        im = -sum(x[t] * math.sin(2 * math.pi * k * t / n) for t in range(n))
        scale = 1.0 if k == 0 or (n % 2 == 0 and k == n // 2) else 2.0
        freqs.append(k * sample_rate / n)
        power.append(scale * (re * re + im * im) / (n * sample_rate))
    return np.array(freqs), np.array(power)


def freq_features(freqs, power, band_edges):
    total = float(sum(power))
    df = freqs[1] - freqs[0]
    if total == 0:
        return [0.0, float(freqs[0]), 0.0, 0.0, 0.0, 0.0] + [0.0] * (len(band_edges) - 1)
    peak = max(range(len(power)), key=lambda k: (power[k], -k))
    out = [
        sum(f * p for f, p in zip(freqs, power)) / total,
        float(freqs[peak]),
        total * df,
        total * df / len(freqs),
        sum(f ** 2 * p for f, p in zip(freqs, power)) / total,
        sum(f ** 3 * p for f, p in zip(freqs, power)) / total,
    ]
    for i in range(len(band_edges) - 1):
        lo, hi = band_edges[i], band_edges[i + 1]
        last = i == len(band_edges) - 2
        band = sum(p for f, p in zip(freqs, power) if f >= lo and (f <= hi if last else f < hi))
        out.append(band / total)
    return out


def window_features(x, sample_rate=500.0, band_edges=(20.0, 60.0, 120.0, 200.0, 250.0)):
    freqs, power = periodogram(x, sample_rate)
    return time_features(x) + wavelet_features(x) + freq_features(freqs, power, band_edges)


def sine(freq_hz, n_samples, sample_rate=500.0, amplitude=1.0, phase=0.0):
    t = np.arange(n_samples) / sample_rate
    return amplitude * np.sin(2 * np.pi * freq_hz * t + phase)
