"""R-peak detection and the inverse R-R interval (HRV) series."""

from __future__ import annotations

import numpy as np
from scipy.ndimage import median_filter, uniform_filter1d

REFRACTORY_S = 0.2
ENVELOPE_S = 0.02
BASELINE_S = 2.0
MAD_FACTOR = 8.0
# floor relative to the strongest envelope value, guards against pure-noise triggers
RELATIVE_FLOOR = 0.3


def _envelope(ecg, fs):
    width = max(1, int(round(ENVELOPE_S * fs)))
    pad = min(width + 1, ecg.size - 1)
    # mirror padding so a beat at either end is not counted twice
    padded = np.pad(ecg, pad, mode="reflect")
    d = np.diff(padded)
    env = uniform_filter1d(d * d, size=width, mode="nearest")
    return env[pad:pad + ecg.size]


def detect_rpeaks(ecg, fs: float) -> np.ndarray:
    """Ascending sample indices of R peaks.

    A squared-derivative envelope is compared with a rolling
    ``median + k * MAD`` threshold; each supra-threshold run contributes
    its largest ECG sample, and peaks closer than 200 ms keep the taller.
    A flat trace yields no peaks.
    """
    x = np.asarray(ecg, dtype=float)
    if not 100 <= fs <= 1000:
        raise ValueError(f"sampling rate {fs} Hz outside [100, 1000]")
    if x.ndim != 1 or x.size < 2 * fs:
        raise ValueError("ECG needs at least two seconds of samples")
    if not np.all(np.isfinite(x)):
        raise ValueError("ECG contains non-finite samples")
    env = _envelope(x, fs)
    if not np.any(env > 0):
        return np.zeros(0, dtype=int)
    window = max(3, int(round(BASELINE_S * fs)) | 1)
    med = median_filter(env, size=window, mode="reflect")
    mad = median_filter(np.abs(env - med), size=window, mode="reflect")
    threshold = np.maximum(med + MAD_FACTOR * 1.4826 * mad, RELATIVE_FLOOR * env.max())
    above = env > threshold
    if not above.any():
        return np.zeros(0, dtype=int)
    edges = np.flatnonzero(np.diff(np.r_[0, above.astype(int), 0]))
    starts, stops = edges[::2], edges[1::2]
    reach = int(round(ENVELOPE_S * fs))
    candidates = []
    for a, b in zip(starts, stops):
        lo, hi = max(0, a - reach), min(x.size, b + reach)
        candidates.append(lo + int(np.argmax(x[lo:hi])))
    refractory = REFRACTORY_S * fs
    peaks: list[int] = []
    for c in sorted(set(candidates)):
        if peaks and c - peaks[-1] < refractory:
            if x[c] > x[peaks[-1]]:
                peaks[-1] = c
            continue
        peaks.append(c)
    return np.asarray(peaks, dtype=int)


def hrv_signal(rpeaks, fs: float) -> np.ndarray:
    """Instantaneous heart rate in Hz, one value per R-R interval."""
    p = np.asarray(rpeaks, dtype=float)
    if p.size < 3:
        raise ValueError(f"HRV needs at least three R peaks, got {p.size}")
    rr = np.diff(p) / fs
    if np.any(rr <= 0):
        raise ValueError("R peaks must be strictly increasing")
    return 1.0 / rr
