"""Discrete Fourier features for fixed-length windows.

The contract is the plain unnormalized forward transform

    X_k = sum_t x_t * exp(-2*pi*i*k*t/w),   k = 0 .. floor(w/2),

of which only the non-redundant half spectrum is kept. ``dft`` computes
exactly that. ``sliding_ri_columns`` evaluates selected coefficients for
every sliding window of a series through an incremental prefix-sum
scheme; it must agree with the direct transform to within 1e-6 and is
what keeps per-series transform cost sub-quadratic in the series length.

Real and imaginary parts are addressed as interleaved columns: column
``2k`` is the real part of coefficient ``k`` and column ``2k + 1`` the
imaginary part.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NumericInputError, SelectionError, ShapeError, WindowLengthError
from .ts import DEFAULT_EPSILON, znormalize_rows


@dataclass(frozen=True, eq=False)
class FourierCoefficients:
    """Half spectrum of one window: parallel real and imaginary parts."""

    reals: np.ndarray
    imags: np.ndarray
    w: int

    @property
    def m(self) -> int:
        """Number of retained coefficients, floor(w/2) + 1."""
        return int(self.reals.shape[0])

    def interleaved(self) -> np.ndarray:
        """Columns [real_0, imag_0, real_1, imag_1, ...] as one vector."""
        out = np.empty(2 * self.m)
        out[0::2] = self.reals
        out[1::2] = self.imags
        return out


def dft(window) -> FourierCoefficients:
    """Half-spectrum DFT of one (already normalized) window."""
    x = np.asarray(window, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ShapeError("dft expects a 1-D window of length >= 2")
    if not np.all(np.isfinite(x)):
        raise NumericInputError("dft input must be finite")
    spec = np.fft.rfft(x)
    reals = spec.real.copy()
    imags = spec.imag.copy()
    imags[0] = 0.0
    if x.size % 2 == 0:
        imags[-1] = 0.0  # Nyquist bin of a real signal is purely real
    return FourierCoefficients(reals, imags, int(x.size))


def coefficient_subset(fc: FourierCoefficients, indices) -> np.ndarray:
    """Pick out ``[("real", k) | ("imag", k), ...]`` values in order."""
    out = np.empty(len(indices))
    for j, (kind, k) in enumerate(indices):
        if kind not in ("real", "imag"):
            raise SelectionError(f"unknown coefficient kind {kind!r}")
        if not 0 <= k < fc.m:
            raise SelectionError(f"coefficient index {k} out of range for m={fc.m}")
        out[j] = fc.reals[k] if kind == "real" else fc.imags[k]
    return out


def column_index(kind: str, k: int) -> int:
    if kind not in ("real", "imag"):
        raise SelectionError(f"unknown coefficient kind {kind!r}")
    return 2 * k + (kind == "imag")


def column_label(col: int):
    return ("imag" if col & 1 else "real", col >> 1)


def window_ri_matrix(windows: np.ndarray, epsilon: float = DEFAULT_EPSILON) -> np.ndarray:
    """Z-normalize rows of ``windows`` and return interleaved spectra.

    Output has shape ``(rows, 2 * (floor(w/2) + 1))`` with columns in
    ``column_index`` order.
    """
    w = windows.shape[1]
    spec = np.fft.rfft(znormalize_rows(windows, epsilon), axis=1)
    out = np.empty((windows.shape[0], 2 * spec.shape[1]))
    out[:, 0::2] = spec.real
    out[:, 1::2] = spec.imag
    out[:, 1] = 0.0
    if w % 2 == 0:
        out[:, -1] = 0.0
    return out


@lru_cache(maxsize=4096)
def _phase_atom(w: int, k: int) -> np.ndarray:
    """exp(-2*pi*i*k*t/w) for t = 0..w-1; cached, read-only."""
    t = np.arange(w)
    atom = np.exp(-2j * np.pi * k * t / w)
    atom.flags.writeable = False
    return atom


def _prefix(arr: np.ndarray) -> np.ndarray:
    out = np.zeros(arr.shape[:-1] + (arr.shape[-1] + 1,), dtype=arr.dtype)
    np.cumsum(arr, axis=-1, out=out[..., 1:])
    return out


def sliding_ri_columns(
    series, w: int, columns, epsilon: float = DEFAULT_EPSILON
) -> np.ndarray:
    """Selected spectrum columns of every z-normalized sliding window.

    ``series`` may be one series ``(n,)`` or a stack ``(N, n)`` of
    equal-length series; the result has a matching leading shape with a
    trailing ``(n - w + 1, len(columns))`` block.

    Per-window normalization is folded into the transform: subtracting
    the window mean leaves coefficients k >= 1 unchanged and zeroes
    coefficient 0, so each unnormalized coefficient is divided by the
    window deviation afterwards. Flat windows map to all-zero rows.
    """
    x = np.asarray(series, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    n = x.shape[1]
    if not 2 <= w <= n:
        raise WindowLengthError(f"window length {w} invalid for series length {n}")
    nw = n - w + 1

    p1 = _prefix(x)
    p2 = _prefix(x * x)
    mu = (p1[:, w:] - p1[:, :nw]) / w
    var = (p2[:, w:] - p2[:, :nw]) / w - mu * mu
    sd = np.sqrt(np.maximum(var, 0.0))
    flat = sd <= epsilon
    denom = np.where(flat, 1.0, sd)

    m = w // 2 + 1
    cols = list(columns)
    spectra = {}
    for k in sorted({c >> 1 for c in cols}):
        if not 0 <= k < m:
            raise SelectionError(f"coefficient index {k} out of range for m={m}")
        if k == 0:
            continue  # centered windows have an exactly-zero DC term
        phase = np.tile(_phase_atom(w, k), n // w + 1)[:n]
        seg = _prefix(x * phase)
        seg = seg[:, w:] - seg[:, :nw]
        spectra[k] = seg * np.conj(phase[:nw])

    out = np.zeros((x.shape[0], nw, len(cols)))
    for j, col in enumerate(cols):
        k = col >> 1
        if k == 0:
            continue
        if col & 1 and w % 2 == 0 and k == m - 1:
            continue  # Nyquist imaginary part is identically zero
        part = spectra[k].imag if col & 1 else spectra[k].real
        out[:, :, j] = np.where(flat, 0.0, part / denom)
    return out[0] if single else out
