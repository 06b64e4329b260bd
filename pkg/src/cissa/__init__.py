"""Circulant singular spectrum analysis: exact frequency decomposition of time series."""

__version__ = "0.1.0"

from .decompose import Decomposition, cissa, component_series, hankelize  # noqa: E402
from .errors import CissaError, InputError, NumericError, ParameterError  # noqa: E402
from .extension import ExtensionMode, extend  # noqa: E402
from .grouping import (  # noqa: E402
    CumulativeShare,
    Economic,
    GroupingResult,
    Manual,
    PsdPercentile,
    economic_bands,
    group,
    shares,
)

__all__ = [
    "CissaError",
    "CumulativeShare",
    "Decomposition",
    "Economic",
    "ExtensionMode",
    "GroupingResult",
    "InputError",
    "Manual",
    "NumericError",
    "ParameterError",
    "PsdPercentile",
    "cissa",
    "component_series",
    "economic_bands",
    "extend",
    "group",
    "hankelize",
    "shares",
]
