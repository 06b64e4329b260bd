import numpy as np

from .errors import InputError, ParameterError


def as_series(x, name="x"):
    """Return `x` as a contiguous 1-d float64 array, rejecting non-finite values."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.reshape(-1)
    if arr.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise InputError(f"{name} contains a non-finite value at sample {bad + 1}")
    return np.ascontiguousarray(arr)


def check_window(L, T):
    """Validate the window length against the series length: 1 < L < T/2."""
    if isinstance(L, (bool, np.bool_)) or int(L) != L:
        raise ParameterError(f"window length L must be an integer, got {L!r}")
    L = int(L)
    if not (1 < L and 2 * L < T):
        raise ParameterError(
            f"window length must satisfy 1<L<T/2, got L={L} with T={T}"
        )
    return L
