"""Boundary extension of a series before decomposition.

Samples near both ends appear in few cells of the trajectory matrix, so
their reconstruction rests on few values. Extending the series by one
window length on each side moves every observed sample into the part of the
matrix where diagonal averaging uses a full window.

Three strategies are available:

* ``ar``: fit an AR(p) model to the first differences by Burg's method,
  forecast and backcast ``L`` differences and integrate them from the
  end points.
* ``mirror``: reflect the series about its end points.
* ``none``: leave the series as is.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._checks import as_series, check_window
from .errors import NumericError, ParameterError

# Burg recursion stops once the prediction error energy falls below this
# fraction of the initial energy (error amplitude ~1e-13 relative).
_BURG_FLOOR = 1e-26


class ExtensionKind(str, enum.Enum):
    AR = "ar"
    MIRROR = "mirror"
    NONE = "none"


# H codes of the original cissa() interface
_H_CODES = {0: ExtensionKind.AR, 1: ExtensionKind.MIRROR, 2: ExtensionKind.NONE}


@dataclass(frozen=True)
class ExtensionMode:
    """
    Boundary strategy plus an optional AR order.

    When `ar_order` is None the AR order defaults to ``floor(T / 3)``.
    """

    kind: ExtensionKind = ExtensionKind.AR
    ar_order: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ExtensionKind(self.kind))
        if self.ar_order is not None:
            if int(self.ar_order) != self.ar_order or self.ar_order < 1:
                raise ParameterError(f"AR order must be a positive integer, got {self.ar_order!r}")
            object.__setattr__(self, "ar_order", int(self.ar_order))

    @classmethod
    def coerce(cls, mode) -> "ExtensionMode":
        """Accept an ExtensionMode, a kind name ('ar', 'mirror', 'none') or an H code 0/1/2."""
        if mode is None:
            return cls()
        if isinstance(mode, cls):
            return mode
        if isinstance(mode, ExtensionKind):
            return cls(mode)
        if isinstance(mode, (int, np.integer)) and not isinstance(mode, bool):
            if int(mode) not in _H_CODES:
                raise ParameterError(f"extension code must be 0 (AR), 1 (mirror) or 2 (none), got {mode}")
            return cls(_H_CODES[int(mode)])
        if isinstance(mode, str):
            try:
                return cls(ExtensionKind(mode.lower()))
            except ValueError:
                pass
        raise ParameterError(f"unknown extension mode {mode!r}; use ar, mirror or none")

    def order_for(self, T: int) -> int:
        return self.ar_order if self.ar_order is not None else T // 3


@dataclass(frozen=True)
class ExtendedSeries:
    values: np.ndarray
    offset: int
    original_length: int

    @property
    def original(self) -> np.ndarray:
        return self.values[self.offset : self.offset + self.original_length]


@dataclass(frozen=True)
class ARModel:
    """AR coefficients for the demeaned series together with the removed mean."""

    coeffs: np.ndarray
    mean: float

    @property
    def order(self) -> int:
        return self.coeffs.size


def fit_ar(d, p: int) -> ARModel:
    """
    Fit a demeaned AR(p) model with Burg's recursion.

    The coefficients follow ``y[t] = sum_i coeffs[i] * y[t - 1 - i] + e[t]``
    with ``y = d - mean``. Burg's reflection coefficients are bounded by one
    in modulus, so the fitted filter is stable.

    If the demeaned series has zero energy the coefficients are all zero.
    If it becomes perfectly predictable before order `p` is reached, the
    remaining coefficients are left at zero.
    """
    d = as_series(d, "d")
    p = int(p)
    if p < 1:
        raise ParameterError(f"AR order must be positive, got {p}")
    if d.size <= p + 1:
        raise ParameterError(
            f"series of length {d.size} is too short for AR order {p}; "
            "lower it with ar_order_override"
        )
    mean = float(d.mean())
    y = d - mean
    a = np.zeros(p + 1)
    a[0] = 1.0
    f = y[1:].copy()
    b = y[:-1].copy()
    den0 = 2.0 * np.dot(y, y)
    if den0 == 0.0:
        return ARModel(np.zeros(p), mean)
    for m in range(1, p + 1):
        den = np.dot(f, f) + np.dot(b, b)
        if den <= _BURG_FLOOR * den0:
            break
        k = -2.0 * np.dot(f, b) / den
        if not np.isfinite(k):
            raise NumericError(f"Burg recursion broke down at order {m}")
        k = min(1.0, max(-1.0, k))
        a[1 : m + 1] = a[1 : m + 1] + k * a[m - 1 :: -1][:m]
        f, b = (f + k * b)[1:], (b + k * f)[:-1]
    return ARModel(-a[1:], mean)


def forecast_ar(d, model: ARModel, h: int) -> np.ndarray:
    """
    Forecast `h` steps ahead from the end of `d`.

    The recursion runs on demeaned values seeded with the last ``order``
    observations and the mean is added back.
    """
    d = as_series(d, "d")
    h = int(h)
    if h < 0:
        raise ParameterError("horizon must be non-negative")
    p = model.order
    if d.size < p:
        raise ParameterError(f"need at least {p} observations to seed the forecast, got {d.size}")
    if h == 0:
        return np.empty(0)
    # buffer holds seed values in reverse chronological order after reversal
    buf = np.empty(p + h)
    buf[:p] = d[d.size - p :] - model.mean
    rev = model.coeffs[::-1]
    for i in range(h):
        buf[p + i] = np.dot(rev, buf[i : p + i])
    return buf[p:] + model.mean


def backcast_ar(d, model: ARModel, h: int) -> np.ndarray:
    """
    Predict `h` values preceding ``d[0]``, nearest first.

    A stationary process and its time reversal share the autocovariances,
    so the forward model is applied to the reversed series.
    """
    d = as_series(d, "d")
    return forecast_ar(d[::-1], model, h)


def extend(x, L: int, mode=None) -> ExtendedSeries:
    """
    Extend `x` by `L` samples on both sides (none for mode ``none``).

    Parameters
    ----------
    x : array_like
        Series of length ``T``.
    L : int
        Window length, ``1 < L < T/2``; also the extension length.
    mode : ExtensionMode, str or int, optional
        Boundary strategy. Defaults to AR with order ``floor(T / 3)``.
    """
    x = as_series(x)
    T = x.size
    L = check_window(L, T)
    mode = ExtensionMode.coerce(mode)

    if mode.kind is ExtensionKind.NONE:
        return ExtendedSeries(x.copy(), 0, T)

    if mode.kind is ExtensionKind.MIRROR:
        left = x[:L][::-1]
        right = x[::-1][:L]
    else:
        p = mode.order_for(T)
        d = np.diff(x)
        if d.size <= p + 1:
            raise ParameterError(
                f"series of length {T} is too short for AR order {p} on its differences; "
                "lower it with ar_order_override"
            )
        try:
            model = fit_ar(d, p)
        except NumericError as exc:
            raise NumericError(f"AR fit for boundary extension failed: {exc}") from None
        fwd = forecast_ar(d, model, L)
        bwd = backcast_ar(d, model, L)
        right = x[-1] + np.cumsum(fwd)
        left = (x[0] - np.cumsum(bwd))[::-1]
        if not (np.all(np.isfinite(right)) and np.all(np.isfinite(left))):
            side = "right" if not np.all(np.isfinite(right)) else "left"
            raise NumericError(f"AR extension produced non-finite values at the {side} boundary")

    values = np.concatenate([left, x, right])
    return ExtendedSeries(values, L, T)
