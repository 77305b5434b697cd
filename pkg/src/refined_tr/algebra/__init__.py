"""Exact arithmetic layer."""

from .atoms import INF, AtomMonomial, Point
from .factored import FR, FactoredRational
from .poly import Poly
from .rational import Q, parse_rational, rational_str
from .series import LaurentSeries, antiderivative, limit_at, residue_at, series_at

__all__ = [
    "INF", "AtomMonomial", "Point", "FR", "FactoredRational", "Poly", "Q",
    "parse_rational", "rational_str", "LaurentSeries", "antiderivative",
    "limit_at", "residue_at", "series_at",
]
