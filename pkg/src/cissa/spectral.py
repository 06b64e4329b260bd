"""Second-moment estimation and the eigenstructure of the circulant matrix.

The circulant matrix built from the lag-window autocovariances is
diagonalised by the Fourier basis, so its eigenvalues are a spectral density
estimate on the grid ``w_k = (k - 1) / L`` and its eigenvectors are known in
closed form. Frequency indices are 1-based throughout the public API.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._checks import as_series
from .errors import NumericError, ParameterError

#: Largest imaginary residue of the eigenvalue transform, relative to max|lambda|.
IMAG_TOL = 1e-8


def n_frequencies(L: int) -> int:
    """Number of distinct frequencies ``floor(L/2) + 1`` on the grid of size `L`."""
    return L // 2 + 1


def frequencies(L: int) -> np.ndarray:
    """Normalised frequencies ``(k - 1) / L`` for ``k = 1..L`` in cycles per sample."""
    return np.arange(L, dtype=np.float64) / L


def autocovariances(x, L: int) -> np.ndarray:
    """
    Estimate the autocovariances of `x` at lags ``0..L-1``.

    Each lag ``m`` is averaged over its ``T - m`` available products. The
    series is not demeaned, so any level or trend loads on the zero
    frequency.

    Parameters
    ----------
    x : array_like
        Real series of length ``T``.
    L : int
        Window length. Must satisfy ``1 < L < T``.

    Returns
    -------
    gamma : ndarray, shape (L,)
    """
    x = as_series(x)
    T = x.size
    if isinstance(L, (bool, np.bool_)) or int(L) != L or not 1 < L < T:
        raise ParameterError(f"window length must satisfy 1<L<T, got L={L!r} with T={T}")
    L = int(L)
    gamma = np.empty(L)
    for m in range(L):
        gamma[m] = np.dot(x[: T - m], x[m:]) / (T - m)
    return gamma


def circulant_row(gamma) -> np.ndarray:
    """
    First row of the circulant second-moment matrix.

    ``c[m] = ((L - m) / L) * gamma[m] + (m / L) * gamma[L - m]``, which is
    symmetric (``c[m] == c[L - m]``) by construction.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    L = gamma.size
    if gamma.ndim != 1 or L < 2:
        raise ParameterError("gamma must be a vector with at least two lags")
    m = np.arange(1, L)
    c = np.empty(L)
    c[0] = gamma[0]
    # Forward and mirrored terms are the same pair of products, so summing
    # them in a fixed order makes c[m] and c[L - m] bitwise equal.
    fwd = (L - m) * gamma[1:]
    back = m * gamma[:0:-1]
    c[1:] = np.where(m <= L - m, fwd + back, back + fwd) / L
    return c


def psd(c) -> np.ndarray:
    """
    Eigenvalues of the circulant matrix with first row `c`.

    ``lambda_k = sum_m c[m] exp(i 2 pi m (k - 1) / L)`` for ``k = 1..L``.
    The transform of a symmetric row is real; the imaginary residue is
    checked and discarded.

    Raises
    ------
    NumericError
        If the imaginary residue exceeds ``IMAG_TOL * max|lambda|``, which
        means the row was not symmetric.
    """
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 1 or c.size < 2:
        raise ParameterError("circulant row must be a vector of length >= 2")
    # The sign of the exponent does not matter for a symmetric row.
    lam = np.fft.fft(c)
    scale = np.max(np.abs(lam.real))
    resid = np.max(np.abs(lam.imag))
    if resid > IMAG_TOL * max(scale, np.finfo(float).tiny):
        raise NumericError(
            f"eigenvalues have imaginary residue {resid:.3g} "
            f"(max|lambda|={scale:.3g}); circulant row is not symmetric"
        )
    return lam.real.copy()


@dataclass(frozen=True)
class FrequencyEigenpair:
    """Real and imaginary parts of the unit eigenvector at frequency index `k`."""

    k: int
    re: np.ndarray
    im: np.ndarray

    @property
    def L(self) -> int:
        return self.re.size

    @property
    def frequency(self) -> float:
        return (self.k - 1) / self.L

    @property
    def weight(self) -> float:
        """Multiplicity of the conjugate group: 1 at zero and Nyquist, else 2."""
        return 1.0 if self.k == 1 or 2 * (self.k - 1) == self.L else 2.0

    def projector(self) -> np.ndarray:
        """Dense ``L x L`` projector onto the conjugate pair (real-valued)."""
        return self.weight * (np.outer(self.re, self.re) + np.outer(self.im, self.im))


def eigenpair(k: int, L: int) -> FrequencyEigenpair:
    """
    Closed-form eigenvector of any ``L x L`` circulant matrix at index `k`.

    ``u_k[j] = L**-0.5 * exp(-i 2 pi (j - 1)(k - 1) / L)``, split into real
    and imaginary parts. Only indices ``1..floor(L/2)+1`` are served since
    the others are complex conjugates of these.
    """
    if int(k) != k or not 1 <= k <= n_frequencies(L):
        raise ParameterError(f"frequency index must satisfy 1<=k<={n_frequencies(L)}, got {k!r}")
    k = int(k)
    phase = 2.0 * np.pi * np.arange(L) * (k - 1) / L
    s = 1.0 / np.sqrt(L)
    re = s * np.cos(phase)
    im = -s * np.sin(phase)
    if k == 1 or 2 * (k - 1) == L:
        # exact zeros / +-1 where the closed form is exact
        im = np.zeros(L)
        re = s * (np.ones(L) if k == 1 else np.where(np.arange(L) % 2 == 0, 1.0, -1.0))
    return FrequencyEigenpair(k=k, re=re, im=im)
