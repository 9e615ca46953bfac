"""Six-level periodized Daubechies decomposition."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import pywt

LEVELS = 6


@dataclass(frozen=True)
class WaveletSpec:
    family: str = "db4"
    levels: int = LEVELS
    mode: str = "periodization"

    def __post_init__(self):
        if self.family not in ("db4", "db8"):
            raise ValueError(f"unsupported wavelet {self.family!r}")
        h = np.asarray(pywt.Wavelet(self.family).dec_lo)
        if abs(np.sum(h**2) - 1.0) > 1e-10 or abs(np.sum(h) - np.sqrt(2.0)) > 1e-10:
            raise ValueError(f"{self.family} filter is not orthonormal")

    @property
    def filter(self) -> np.ndarray:
        return np.asarray(pywt.Wavelet(self.family).dec_lo)


def _check_signal(signal, spec: WaveletSpec) -> np.ndarray:
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1 or x.size < 2**spec.levels:
        raise ValueError(f"signal needs at least {2 ** spec.levels} samples")
    if not np.all(np.isfinite(x)):
        raise ValueError("signal contains non-finite samples")
    return x


def wavedec(signal, spec: WaveletSpec) -> list[np.ndarray]:
    """Full pyramid ``[A_L, D_L, ..., D_1]``."""
    x = _check_signal(signal, spec)
    with warnings.catch_warnings():
        # short signals relative to the filter only trigger boundary-effect warnings
        warnings.simplefilter("ignore", UserWarning)
        return pywt.wavedec(x, spec.family, mode=spec.mode, level=spec.levels)


def waverec(coeffs, spec: WaveletSpec) -> np.ndarray:
    return pywt.waverec(coeffs, spec.family, mode=spec.mode)


def dwt_decompose(signal, spec: WaveletSpec) -> list[np.ndarray]:
    """Detail subbands ``D1 .. D6`` (finest first); the approximation is dropped."""
    coeffs = wavedec(signal, spec)
    return list(reversed(coeffs[1:]))
