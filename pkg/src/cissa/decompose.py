"""Exact decomposition of a series into components at the frequencies ``(k-1)/L``."""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.fft import irfft, next_fast_len, rfft
from scipy.signal import fftconvolve

from ._checks import as_series, check_window
from .errors import ParameterError
from .extension import ExtensionMode, extend
from .spectral import autocovariances, circulant_row, eigenpair, n_frequencies, psd

logger = logging.getLogger(__name__)

MIN_LENGTH = 12


@dataclass(frozen=True)
class Decomposition:
    """
    Output of :func:`cissa`.

    Attributes
    ----------
    Z : ndarray, shape (T, F)
        Column ``k - 1`` is the component at frequency ``(k - 1) / L``.
    psd : ndarray, shape (L,)
        Eigenvalues of the circulant matrix, i.e. the spectral density
        estimate at ``(k - 1) / L`` for ``k = 1..L``.
    L : int
        Window length.
    mode : ExtensionMode
        Boundary strategy used.
    """

    Z: np.ndarray
    psd: np.ndarray
    L: int
    mode: ExtensionMode = field(default_factory=ExtensionMode)

    def __post_init__(self):
        if self.Z.ndim != 2 or self.Z.shape[1] != n_frequencies(self.L):
            raise ParameterError(
                f"Z must have floor(L/2)+1={n_frequencies(self.L)} columns, got shape {self.Z.shape}"
            )
        if self.psd.shape != (self.L,):
            raise ParameterError(f"psd must have L={self.L} entries, got shape {self.psd.shape}")

    @property
    def T(self) -> int:
        return self.Z.shape[0]

    @property
    def F(self) -> int:
        return self.Z.shape[1]

    @property
    def frequencies(self) -> np.ndarray:
        """Frequencies of the columns of `Z`, cycles per sample."""
        return np.arange(self.F) / self.L

    @property
    def negative_psd(self) -> np.ndarray:
        """1-based indices ``k <= F`` whose eigenvalue estimate is negative."""
        return np.flatnonzero(self.psd[: self.F] < 0) + 1

    def reconstruct(self, ks) -> np.ndarray:
        """Sum of the components with 1-based indices `ks`."""
        idx = np.asarray(list(ks), dtype=int) - 1
        return self.Z[:, idx].sum(axis=1)


def conjugate_group(k: int, L: int) -> tuple[int, ...]:
    """Eigen-indices sharing the frequency of `k`: ``(1,)``, ``(k, L+2-k)`` or the Nyquist singleton."""
    if not 1 <= k <= n_frequencies(L):
        raise ParameterError(f"frequency index must satisfy 1<=k<={n_frequencies(L)}, got {k}")
    if k == 1 or 2 * (k - 1) == L:
        return (k,)
    return (k, L + 2 - k)


def hankelize(A) -> np.ndarray:
    """
    Average an ``L x N`` matrix over its antidiagonals.

    Element ``t`` of the result (0-based) is the mean of ``A[i, t - i]``
    over the valid ``i``: there are ``t + 1`` terms at the start,
    ``L`` in the middle and ``L + N - 1 - t`` at the end.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ParameterError(f"hankelize expects a matrix, got {A.ndim} dimensions")
    L, N = A.shape
    if L > N:
        raise ParameterError(f"hankelize expects rows <= columns, got {L}x{N}")
    out = np.zeros(L + N - 1)
    for i in range(L):
        out[i : i + N] += A[i]
    return out / _antidiagonal_counts(L, N)


def _antidiagonal_counts(L: int, N: int) -> np.ndarray:
    n = L + N - 1
    t = np.arange(n)
    return np.minimum(np.minimum(t + 1, n - t), min(L, N)).astype(np.float64)


def trajectory_matrix(x, L: int) -> np.ndarray:
    """``L x N`` matrix whose column ``j`` is ``x[j : j + L]`` (a read-only view)."""
    x = np.asarray(x, dtype=np.float64)
    return np.lib.stride_tricks.sliding_window_view(x, L).T


def component_series(x, L: int, k: int, method: str = "fft") -> np.ndarray:
    """
    Elementary reconstructed component of `x` at frequency index `k`.

    Computes ``H(P_k X)`` where ``X`` is the trajectory matrix of `x` and
    ``P_k`` the real projector onto the conjugate eigenvector pair at
    frequency ``(k - 1) / L``.

    With ``method="fft"`` the trajectory matrix is never formed: the
    projection of every column onto ``u_k`` is a sliding DFT bin and the
    antidiagonal sums of the rank-one products are a second convolution.
    ``method="direct"`` forms ``X`` and uses the rank-2 factorisation of
    ``P_k``; it costs ``O(L N)`` and serves as a cross-check.
    """
    x = as_series(x)
    T = x.size
    if not 1 < L <= T - L + 1:
        raise ParameterError(f"window length must satisfy 1<L<=N=T-L+1, got L={L} with T={T}")
    pair = eigenpair(k, L)
    if method == "direct":
        X = trajectory_matrix(x, L)
        proj = pair.weight * (np.outer(pair.re, pair.re @ X) + np.outer(pair.im, pair.im @ X))
        return hankelize(proj)
    if method != "fft":
        raise ParameterError(f"unknown method {method!r}; use 'fft' or 'direct'")

    N = T - L + 1
    if k == 1:
        # projection onto the constant vector: window means, spread back out
        kern = np.ones(L)
        coef = fftconvolve(fftconvolve(x, kern, mode="valid"), kern, mode="full")
    else:
        g = np.exp(2j * np.pi * (k - 1) * np.arange(L) / L)
        # a[n] = sum_j conj(g[j]) x[n + j]  (correlation, hence the reversed kernel)
        a = fftconvolve(x, np.conj(g[::-1]), mode="valid")
        # s[t] = sum_i g[i] a[t - i] collects each antidiagonal of u u^H X
        coef = fftconvolve(a, g, mode="full").real
    return pair.weight * coef / (L * _antidiagonal_counts(L, N))


def _fejer_response(L: int, k: int, n: int, num2=None) -> np.ndarray:
    """
    Frequency response on the ``rfft`` grid of size `n` of the kernel
    ``(L - |d|) cos(2 pi (k-1) d / L)``, ``|d| < L``.

    It is the Fejer kernel ``sin^2(L phi/2) / sin^2(phi/2)`` averaged over
    the shifts ``phi = nu -+ theta``. Writing ``phi = 2 pi r / (n L)`` with
    integer ``r = m L -+ (k-1) n`` lets the sine arguments be reduced
    exactly; the numerator ``sin^2(pi r / n)`` does not depend on `k` and
    may be passed in as `num2`.
    """
    m = np.arange(n // 2 + 1, dtype=np.int64)
    if num2 is None:
        num2 = np.sin(np.pi * np.mod(m * L, n) / n) ** 2
    out = np.zeros(m.size)
    for sign in (-1, 1):
        r = np.mod(m * L + sign * (k - 1) * n, 2 * n * L)
        den = np.sin(np.pi * r / (n * L))
        peak = np.mod(r, n * L) == 0
        den[peak] = 1.0
        fej = num2 / (den * den)
        fej[peak] = float(L * L)
        out += fej
    return 0.5 * out


def _interior_components(x, L: int, lo: int, hi: int, ks, map_fn) -> np.ndarray:
    """
    Components restricted to samples ``lo..hi-1`` lying where diagonal
    averaging uses a full window (``L-1 <= t <= N-1``), one row per `k`.

    There each component is the symmetric filter
    ``(w / L^2) sum_d (L - |d|) cos(theta d) x[t + d]``, applied through a
    single shared FFT of `x`; no wrap-around reaches the retained samples.
    """
    T = x.size
    if not (L - 1 <= lo and hi <= T - L + 1):
        raise ParameterError("requested samples are outside the full-window range")
    n = next_fast_len(T, real=True)
    spec = rfft(x, n)
    m = np.arange(n // 2 + 1, dtype=np.int64)
    num2 = np.sin(np.pi * np.mod(m * L, n) / n) ** 2
    out = np.empty((len(ks), hi - lo))

    def one(i_k):
        i, k = i_k
        w = 1.0 if k == 1 or 2 * (k - 1) == L else 2.0
        y = irfft(spec * _fejer_response(L, k, n, num2), n)
        out[i] = (w / (L * L)) * y[lo:hi]

    for _ in map_fn(one, enumerate(ks)):
        pass
    return out


def _default_workers() -> int:
    raw = os.environ.get("CISSA_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ParameterError(f"CISSA_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ParameterError("CISSA_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def cissa(
    x,
    L: int,
    mode=None,
    *,
    method: str = "fft",
    workers: int | None = None,
    moments: str = "original",
) -> Decomposition:
    """
    Decompose `x` into ``floor(L/2) + 1`` components at frequencies ``(k-1)/L``.

    The components add up to `x` exactly (to rounding).

    Parameters
    ----------
    x : array_like
        Real series of length ``T >= 12``.
    L : int
        Window length, ``1 < L < T/2``.
    mode : ExtensionMode, str or int, optional
        Boundary extension: ``"ar"`` (default), ``"mirror"`` or ``"none"``;
        the integer codes 0, 1, 2 are accepted as well.
    method : {"fft", "direct"}
        How each component is computed; see :func:`component_series`.
    workers : int, optional
        Threads used for the per-frequency work. Defaults to the
        ``CISSA_THREADS`` environment variable (0 means all cores).
    moments : {"original", "extended"}
        Series the autocovariances are estimated from. Extension points are
        predictions, and mirroring flips the phase of every oscillation at
        the boundary, which leaks power into neighbouring frequencies; the
        default therefore uses the observed samples only. Components are
        always computed on the extended series.

    Returns
    -------
    Decomposition
    """
    x = as_series(x)
    T = x.size
    if T < MIN_LENGTH:
        raise ParameterError(f"series must have at least {MIN_LENGTH} samples, got {T}")
    L = check_window(L, T)
    mode = ExtensionMode.coerce(mode)

    if moments not in ("original", "extended"):
        raise ParameterError(f"moments must be 'original' or 'extended', got {moments!r}")
    ext = extend(x, L, mode)
    xe = ext.values
    lam = psd(circulant_row(autocovariances(x if moments == "original" else xe, L)))
    F = n_frequencies(L)
    lo, hi = ext.offset, ext.offset + T

    ks = range(1, F + 1)
    n_workers = _default_workers() if workers is None else max(1, int(workers))

    def run(map_fn):
        if method == "fft" and lo >= L - 1:
            return _interior_components(xe, L, lo, hi, ks, map_fn)
        return np.array(list(map_fn(lambda k: component_series(xe, L, k, method=method)[lo:hi], ks)))

    if n_workers > 1 and F > 1:
        with ThreadPoolExecutor(max_workers=min(n_workers, F)) as pool:
            rows = run(pool.map)
    else:
        rows = run(map)
    # rows are frequencies; the transpose is a column-major T x F view
    Z = rows.T

    dec = Decomposition(Z=Z, psd=lam, L=L, mode=mode)
    neg = dec.negative_psd
    if neg.size:
        logger.info("%d negative eigenvalue estimate(s), first at k=%d", neg.size, neg[0])
    return dec
