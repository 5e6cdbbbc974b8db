"""Exact linear algebra over the rationals.

Vectors are tuples. Integer tuples are used wherever a vector is only
meaningful up to positive scaling (rays, inequality normals); Fractions
are used where the actual value matters (points, matrix entries).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and "p/q" strings into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def qvec(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_fraction(x) for x in xs)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to a primitive integer vector.

    The zero vector maps to the integer zero vector.
    """
    denom = 1
    for x in v:
        if isinstance(x, Fraction) and x.denominator != 1:
            denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def rref(rows: Iterable[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and their pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        pv = prow[c]
        if pv != 1:
            prow = m[r] = [x / pv for x in prow]
        # rows are sparse here, so only touch the pivot row's support
        support = [(j, prow[j]) for j in range(c, len(prow)) if prow[j]]
        for i, row in enumerate(m):
            f = row[c]
            if i != r and f:
                for j, y in support:
                    row[j] -= f * y
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Iterable[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Iterable[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Integer basis of {x : <row, x> = 0 for all rows}."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(primitive(v))
    return basis


class Subspace:
    """A linear subspace of Q^n stored through a canonical echelon basis.

    ``reduce`` maps a vector to the unique representative of its class
    modulo the subspace having zeros in all pivot coordinates.
    """

    __slots__ = ("dim", "basis", "pivots", "free")

    def __init__(self, vectors: Iterable[Sequence], dim: int):
        red, pivots = rref(vectors, dim)
        self.dim = dim
        self.basis = red
        self.pivots = pivots
        pset = set(pivots)
        self.free = [c for c in range(dim) if c not in pset]

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, v: Sequence) -> list:
        out = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = out[p]
            if c != 0:
                out = [x - c * y for x, y in zip(out, row)]
        return out

    def contains(self, v: Sequence) -> bool:
        return is_zero(self.reduce(v))

    def canonical_basis(self) -> tuple[tuple[int, ...], ...]:
        return tuple(primitive(r) for r in self.basis)

    def quotient_matrix(self) -> list[list[Fraction]]:
        """Matrix of the projection Q^n -> Q^n / W in free-coordinate form."""
        rows = []
        for f in self.free:
            row = [Fraction(0)] * self.dim
            row[f] = Fraction(1)
            for brow, p in zip(self.basis, self.pivots):
                row[p] -= brow[f]
            rows.append(row)
        return rows

    def lift(self, coords: Sequence) -> tuple[Fraction, ...]:
        """Inverse of the quotient projection on canonical representatives."""
        v = [Fraction(0)] * self.dim
        for f, x in zip(self.free, coords):
            v[f] = Fraction(x)
        return tuple(v)
