"""Rationals extended by a single point at infinity."""

from __future__ import annotations

from functools import total_ordering

from .linalg import as_fraction


@total_ordering
class _Infinity:
    """The absorbing element: inf + x = inf, min(inf, x) = x."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("inf")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, k):
        if k == 0:
            raise ValueError("0 * inf is undefined")
        if k < 0:
            raise ValueError("negative multiples of inf are not in the extended rationals")
        return self

    __rmul__ = __mul__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def ext(x):
    """Parse an extended rational: "inf" or anything accepted by ``as_fraction``."""
    if x is INF or (isinstance(x, str) and x.strip().lower() in {"inf", "∞"}):
        return INF
    return as_fraction(x)


def is_inf(x) -> bool:
    return x is INF


def ext_min(xs):
    """Minimum of extended rationals; the minimum of an empty family is INF."""
    out = INF
    for x in xs:
        if x is not INF and (out is INF or x < out):
            out = x
    return out
