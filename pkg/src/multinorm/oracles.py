"""Independent cross-checks for the standard-complex computations.

These never touch the cochain machinery: the cyclic answer comes from
the 2-periodic resolution of a cyclic group, products are assembled by
the integral Kunneth formula on invariant-factor lists, and the degree-2
check uses the abelianization read off the Cayley table.
"""

from __future__ import annotations

from math import gcd

from .groups import FiniteGroup
from .intlinalg import IntMatrix, smith_normal_form, subquotient


def cyclic_tate_invariants(n: int, degree: int):
    """Invariant factors of the Tate cohomology of a cyclic group of
    order n with trivial integer coefficients, from the 2-periodic
    resolution ... -> Z[G] -(t-1)-> Z[G] -N-> Z[G] -(t-1)-> ...

    Equivariant cochains on each step form a rank-1 lattice; the induced
    maps alternate between 0 (from t - 1) and multiplication by n (from
    the norm), so every even degree is ker(0)/im(n) and every odd degree
    is ker(n)/im(0).
    """
    if n == 1:
        return ()
    zero = IntMatrix.from_rows([[0]])
    norm = IntMatrix.from_rows([[n]])
    if degree % 2 == 0:
        pres = subquotient(zero, norm)
    else:
        pres = subquotient(norm, zero)
    return pres.invariant_factors


class FgAbelian:
    """Invariant data of a finitely generated abelian group: free rank
    plus torsion invariant factors."""

    def __init__(self, free_rank=0, torsion=()):
        self.free_rank = free_rank
        self.torsion = tuple(d for d in torsion if d > 1)

    def __eq__(self, other):
        return (self.free_rank == other.free_rank
                and sorted(self.torsion) == sorted(other.torsion))

    def __repr__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def direct_sum(self, other):
        return FgAbelian(self.free_rank + other.free_rank,
                         self.torsion + other.torsion)

    def tensor(self, other):
        torsion = [gcd(a, b) for a in self.torsion for b in other.torsion]
        torsion += list(self.torsion) * other.free_rank
        torsion += list(other.torsion) * self.free_rank
        return FgAbelian(self.free_rank * other.free_rank, torsion)

    def tor(self, other):
        return FgAbelian(0, [gcd(a, b)
                             for a in self.torsion for b in other.torsion])


def cyclic_positive_table(n: int, top: int):
    """H^i(C_n, Z) for i = 0..top as FgAbelian values."""
    out = [FgAbelian(free_rank=1)]
    for i in range(1, top + 1):
        out.append(FgAbelian(torsion=(n,)) if i % 2 == 0 else FgAbelian())
    return out


def kunneth_product_table(table_a, table_b):
    """Positive-degree integral cohomology of a product from the factor
    tables: H^n = sum_(p+q=n) H^p (x) H^q + sum_(p+q=n+1) Tor(H^p, H^q)."""
    top = min(len(table_a), len(table_b)) - 1
    out = []
    for nn in range(top + 1):
        total = FgAbelian()
        for p in range(nn + 1):
            q = nn - p
            total = total.direct_sum(table_a[p].tensor(table_b[q]))
        for p in range(nn + 2):
            q = nn + 1 - p
            if p < len(table_a) and q < len(table_b):
                total = total.direct_sum(table_a[p].tor(table_b[q]))
        out.append(total)
    return out


def abelianization_invariants(group: FiniteGroup):
    """Invariant factors of G^ab via the Smith form of the relation matrix
    of the generators x_g subject to x_g + x_h = x_(gh)."""
    n = group.order
    rows = []
    for a in range(n):
        for b in range(n):
            row = [0] * n
            row[a] += 1
            row[b] += 1
            row[group.mul(a, b)] -= 1
            if any(row):
                rows.append(row)
    if not rows:
        return ()
    snf = smith_normal_form(IntMatrix.from_rows(rows).transpose())
    return tuple(snf.invariant_factors())
