"""Subgroups of Z^k in row Hermite normal form."""
from __future__ import annotations

from dataclasses import dataclass


def _xgcd(a: int, b: int):
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hermite_rows(rows, k: int) -> tuple:
    """Row-style HNF of the lattice spanned by ``rows``; zero rows dropped.

    Pivots are positive and entries above a pivot are reduced into
    ``[0, pivot)``, which makes the basis unique.
    """
    rows = [list(r) for r in rows if any(r)]
    basis = []
    col = 0
    while rows and col < k:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in rows if not r[col]]
        piv = nz[0]
        for r in nz[1:]:
            g, x, y = _xgcd(piv[col], r[col])
            a, b = piv[col] // g, r[col] // g
            new_piv = [x * p + y * q for p, q in zip(piv, r)]
            other = [b * p - a * q for p, q in zip(piv, r)]
            piv = new_piv
            if any(other):
                rest.append(other)
        if piv[col] < 0:
            piv = [-p for p in piv]
        basis.append(piv)
        rows = rest
        col += 1
    # reduce above pivots
    for i, r in enumerate(basis):
        c = next(j for j, x in enumerate(r) if x)
        for b in basis[:i]:
            q = b[c] // r[c]
            if q:
                for j in range(k):
                    b[j] -= q * r[j]
    return tuple(tuple(r) for r in basis)


@dataclass(frozen=True)
class IntegerLattice:
    k: int
    basis: tuple

    @classmethod
    def generated_by(cls, vectors, k: int) -> "IntegerLattice":
        return cls(k, hermite_rows(vectors, k))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, v) -> bool:
        v = list(v)
        for r in self.basis:
            c = next(j for j, x in enumerate(r) if x)
            if v[c] % r[c]:
                return False
            q = v[c] // r[c]
            v = [a - q * b for a, b in zip(v, r)]
        return not any(v)

    def __str__(self):
        if not self.basis:
            return "0"
        return "<" + ",".join("(" + ",".join(map(str, r)) + ")" for r in self.basis) + ">"

    def index_in_rank_one(self) -> int | None:
        """n with the lattice equal to nZ, for k = 1."""
        if self.k != 1:
            raise ValueError("rank-one lattices only")
        return self.basis[0][0] if self.basis else None
