"""Grouping of frequency components into signals.

Four strategies are supported, mirroring the four forms of the grouping
argument of the original ``group()`` function:

==================  =====================================================
``Economic(s)``     trend, business cycle and seasonal bands for data with
                    ``s`` observations per year
``Manual(groups)``  user supplied sets of frequency indices
``CumulativeShare`` fewest largest-share frequencies reaching a fraction
``PsdPercentile``   frequencies whose psd exceeds an empirical percentile
==================  =====================================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .decompose import Decomposition
from .errors import NumericError, ParameterError
from .spectral import n_frequencies

ECONOMIC_NAMES = ("trend", "cycle", "seasonal")


@dataclass(frozen=True)
class Economic:
    per_year: int

    def __post_init__(self):
        if isinstance(self.per_year, bool) or int(self.per_year) != self.per_year or self.per_year < 1:
            raise ParameterError(f"observations per year must be a positive integer, got {self.per_year!r}")
        object.__setattr__(self, "per_year", int(self.per_year))


@dataclass(frozen=True)
class Manual:
    groups: tuple

    def __post_init__(self):
        groups = tuple(tuple(_as_index(k) for k in g) for g in self.groups)
        if not groups:
            raise ParameterError("manual grouping needs at least one group")
        for i, g in enumerate(groups, 1):
            if not g:
                raise ParameterError(f"group {i} is empty")
        seen = {}
        for i, g in enumerate(groups, 1):
            for k in g:
                if k in seen and seen[k] != i:
                    raise ParameterError(f"index k={k} appears in groups {seen[k]} and {i}; groups must be disjoint")
                if k in seen:
                    raise ParameterError(f"index k={k} repeated in group {i}")
                seen[k] = i
        object.__setattr__(self, "groups", groups)


@dataclass(frozen=True)
class CumulativeShare:
    fraction: float

    def __post_init__(self):
        if not 0.0 < self.fraction < 1.0:
            raise ParameterError(f"cumulative share must lie in (0, 1), got {self.fraction!r}")


@dataclass(frozen=True)
class PsdPercentile:
    q: float

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ParameterError(f"percentile must lie in (0, 1), got {self.q!r}")


GroupingSpec = Union[Economic, Manual, CumulativeShare, PsdPercentile]


def _as_index(k) -> int:
    if isinstance(k, (bool, np.bool_)) or int(k) != k:
        raise ParameterError(f"frequency indices must be integers, got {k!r}")
    return int(k)


def coerce_spec(spec) -> GroupingSpec:
    """
    Interpret a grouping argument.

    Besides the spec classes, the forms of the original interface are
    accepted: a positive integer (observations per year), a sequence of
    index sequences, a number in (0, 1) (cumulative share) or a number in
    (-1, 0) (percentile, given with negative sign).
    """
    if isinstance(spec, (Economic, Manual, CumulativeShare, PsdPercentile)):
        return spec
    if isinstance(spec, (bool, np.bool_)):
        raise ParameterError("grouping argument cannot be a boolean")
    if isinstance(spec, (int, np.integer)):
        return Economic(int(spec))
    if isinstance(spec, (float, np.floating)):
        v = float(spec)
        if v.is_integer() and v > 0:
            return Economic(int(v))
        if 0 < v < 1:
            return CumulativeShare(v)
        if -1 < v < 0:
            return PsdPercentile(-v)
        raise ParameterError(f"numeric grouping argument {v} is not in (0,1), (-1,0) or a positive integer")
    if isinstance(spec, Sequence) and not isinstance(spec, str):
        return Manual(tuple(g if isinstance(g, Sequence) else (g,) for g in spec))
    raise ParameterError(f"cannot interpret grouping argument {spec!r}")


@dataclass(frozen=True)
class GroupingResult:
    """
    Reconstructed group series.

    Attributes
    ----------
    rc : ndarray, shape (T, G)
    sh : ndarray, shape (G,)
        Share of the psd per group, as a fraction.
    kg : tuple of tuple of int
        1-based frequency indices of each group.
    names : tuple of str
    """

    rc: np.ndarray
    sh: np.ndarray
    kg: tuple
    names: tuple

    @property
    def G(self) -> int:
        return self.rc.shape[1]


def shares(lam) -> np.ndarray:
    """
    Share of the total psd attributed to each of the ``floor(L/2)+1`` frequencies.

    Interior frequencies count twice (the eigenvalue and its conjugate
    twin); the zero and Nyquist frequencies once.
    """
    lam = np.asarray(lam, dtype=np.float64)
    L = lam.size
    F = n_frequencies(L)
    total = lam.sum()
    if not total > 0:
        raise NumericError(f"total psd is {total:.6g}; shares need a positive spectrum")
    s = 2.0 * lam[:F]
    s[0] = lam[0]
    if L % 2 == 0:
        s[F - 1] = lam[F - 1]
    return s / total


def economic_bands(L: int, per_year: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """
    Trend, business-cycle and seasonal index sets for an economic series.

    Trend holds periods longer than 8 years, the cycle periods from 1.5 to
    8 years (both ends included) and the seasonal set the harmonics
    ``j / per_year`` for ``j = 1..floor(per_year / 2)``.
    """
    s = Economic(per_year).per_year
    if L % s != 0:
        raise ParameterError(f"window length L={L} must be a multiple of the observations per year s={s}")
    if L < 2 * s:
        raise ParameterError(f"window length L={L} must be at least 2*s={2 * s}")
    ks = np.arange(1, n_frequencies(L) + 1)
    # integer forms of w < 1/(8s) and 1/(8s) <= w <= 1/(1.5s), with w = (k-1)/L
    j = ks - 1
    trend = ks[8 * s * j < L]
    cycle = ks[(8 * s * j >= L) & (3 * s * j <= 2 * L)]
    seasonal = np.array([h * L // s + 1 for h in range(1, s // 2 + 1)], dtype=int)
    return tuple(map(int, trend)), tuple(map(int, cycle)), tuple(map(int, seasonal))


def _check_indices(kg, F: int):
    for g in kg:
        for k in g:
            if not 1 <= k <= F:
                raise ParameterError(f"frequency index k={k} outside 1..{F}")


def _assemble(dec: Decomposition, kg, names, sh_all) -> GroupingResult:
    T = dec.T
    rc = np.zeros((T, len(kg)))
    sh = np.zeros(len(kg))
    for g, ks in enumerate(kg):
        if ks:
            idx = np.asarray(ks) - 1
            rc[:, g] = dec.Z[:, idx].sum(axis=1)
            sh[g] = sh_all[idx].sum()
    return GroupingResult(rc=rc, sh=sh, kg=tuple(tuple(g) for g in kg), names=tuple(names))


def nearest_rank(q: float, n: int) -> int:
    """``ceil(q * n)`` evaluated on the decimal value of `q` (no float round-off)."""
    return math.ceil(Fraction(repr(float(q))) * n)


def group(dec: Decomposition, spec) -> GroupingResult:
    """
    Group the components of `dec` according to `spec`.

    Parameters
    ----------
    dec : Decomposition
    spec : GroupingSpec or grouping argument accepted by :func:`coerce_spec`

    Returns
    -------
    GroupingResult
    """
    spec = coerce_spec(spec)
    F = dec.F
    sh_all = shares(dec.psd)

    if isinstance(spec, Economic):
        kg = economic_bands(dec.L, spec.per_year)
        return _assemble(dec, kg, ECONOMIC_NAMES, sh_all)

    if isinstance(spec, Manual):
        _check_indices(spec.groups, F)
        names = [f"group{i}" for i in range(1, len(spec.groups) + 1)]
        return _assemble(dec, spec.groups, names, sh_all)

    if isinstance(spec, CumulativeShare):
        # stable sort keeps ascending k among equal shares
        order = np.argsort(-sh_all, kind="stable")
        cum = np.cumsum(sh_all[order])
        hit = np.flatnonzero(cum >= spec.fraction)
        n = hit[0] + 1 if hit.size else F
        kg = (tuple(int(k) for k in order[:n] + 1),)
        return _assemble(dec, kg, ("selected",), sh_all)

    lam = dec.psd[:F]
    threshold = np.sort(lam)[nearest_rank(spec.q, F) - 1]
    sel = np.flatnonzero(lam > threshold) + 1
    if sel.size == 0:
        raise ParameterError(f"no frequency has psd above the {spec.q:g} percentile ({threshold:.6g})")
    return _assemble(dec, (tuple(int(k) for k in sel),), ("selected",), sh_all)


def reconstruct_manual(dec: Decomposition, index_sets) -> GroupingResult:
    """Group with user-given index sets; same as ``group(dec, Manual(index_sets))``."""
    return group(dec, Manual(tuple(index_sets)))
