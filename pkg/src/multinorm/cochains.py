"""Equivariant cochains of the standard complete resolution.

For a finite group G the resolution has X_i = Z[G^(i+1)] in degrees
i >= 0 (diagonal translation action) and X_(-i) = Hom(X_(i-1), Z) in
negative degrees, a free Z-module on starred tuples (s_1*, ..., s_i*)
with g . (s_1*, ...) = ((g s_1)*, ...).  Differentials:

    d(g_0, ..., g_(i+1)) = sum_j (-1)^j (..omit j..)          X_(i+1) -> X_i
    d(s_1*, ..., s_i*)   = sum_(j=1..i+1) sum_(g in G) (-1)^j
                           (s_1*, .., g* at slot j, .., s_i*) X_(-i) -> X_(-i-1)
    d(g_0)               = sum_s s*                            X_0 -> X_(-1)

Both actions are free, so an equivariant cochain is determined by its
values on orbit representatives whose first coordinate is the identity;
those representatives, ordered lexicographically, are the basis used by
every matrix in this package.

The module also builds an explicit equivariant contracting homotopy k
with d k + k d = |G| . id, obtained by averaging the cone contraction
over the group:

    k(g_0, ..., g_i)   = sum_(g in G) (g, g_0, ..., g_i)
    k(s*)              = (s)
    k(s_1*, ..., s_i*) = -(s_2*, ..., s_i*)        for i >= 2

On cochain matrices the identity reads S D + D S = |G| I; it is cheap to
verify and certifies that the cycle lattice in each degree equals the
saturation of the boundary lattice, which is what lets cohomology be
read off one Smith normal form of the incoming differential.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegreeCapExceeded, RankOverflow
from .gmodules import GModule, trivial_module
from .groups import FiniteGroup
from .intlinalg import (
    AbelianGroupPresentation,
    IntMatrix,
    presentation_from_boundaries,
)

DEFAULT_DEGREE_CAP = 4
DEFAULT_RANK_CAP = 1 << 20


@dataclass(frozen=True)
class CochainSpace:
    """Basis data for the equivariant cochains in one degree."""

    group: FiniteGroup
    module: GModule
    degree: int
    free_len: int     # coordinates beyond the forced leading identity
    n_reps: int

    @property
    def rank(self) -> int:
        return self.n_reps * self.module.rank

    def rep_free_coords(self, index: int):
        n = self.group.order
        out = []
        for _ in range(self.free_len):
            out.append(index % n)
            index //= n
        return tuple(reversed(out))

    def rep_index(self, free_coords) -> int:
        n = self.group.order
        idx = 0
        for x in free_coords:
            idx = idx * n + x
        return idx


def cochain_space(group: FiniteGroup, module: GModule, degree: int,
                  degree_cap: int = DEFAULT_DEGREE_CAP,
                  rank_cap: int = DEFAULT_RANK_CAP) -> CochainSpace:
    if abs(degree) > degree_cap:
        raise DegreeCapExceeded(
            f"degree {degree} exceeds cap {degree_cap}")
    free_len = degree if degree >= 0 else -degree - 1
    n_reps = group.order ** free_len
    if n_reps * module.rank > rank_cap:
        raise RankOverflow(
            f"cochain rank {n_reps * module.rank} exceeds cap {rank_cap}")
    return CochainSpace(group, module, degree, free_len, n_reps)


class _BlockBuilder:
    """Accumulates module-rank blocks into a sparse matrix."""

    def __init__(self, module: GModule, n_block_rows, n_block_cols):
        self.module = module
        self.m = module.rank
        self.rows = n_block_rows * self.m
        self.cols = n_block_cols * self.m
        self.rowdata = {}

    def add_scalar_block(self, br, bc, sign):
        # trivial action: sign * identity block
        m = self.m
        for u in range(m):
            r = br * m + u
            c = bc * m + u
            row = self.rowdata.setdefault(r, {})
            s = row.get(c, 0) + sign
            if s:
                row[c] = s
            else:
                del row[c]

    def add_action_block(self, br, bc, sign, g):
        if self.module.is_trivial:
            self.add_scalar_block(br, bc, sign)
            return
        m = self.m
        act = self.module.act(g)
        for u in range(m):
            row = None
            for v in range(m):
                a = act[u][v]
                if a:
                    if row is None:
                        row = self.rowdata.setdefault(br * m + u, {})
                    c = bc * m + v
                    s = row.get(c, 0) + sign * a
                    if s:
                        row[c] = s
                    else:
                        del row[c]
        # drop rows emptied by cancellation
        r0 = br * m
        for u in range(m):
            r = r0 + u
            if r in self.rowdata and not self.rowdata[r]:
                del self.rowdata[r]

    def build(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols,
                         {r: d for r, d in self.rowdata.items() if d})


def differential_matrix(group: FiniteGroup, module: GModule, degree: int,
                        degree_cap: int = DEFAULT_DEGREE_CAP,
                        rank_cap: int = DEFAULT_RANK_CAP) -> IntMatrix:
    """Matrix of the cochain differential C^degree -> C^(degree+1),
    on orbit-representative bases (rows indexed by the target)."""
    src = cochain_space(group, module, degree, degree_cap, rank_cap)
    dst = cochain_space(group, module, degree + 1, degree_cap, rank_cap)
    n = group.order
    cay, inv = group.cayley, group.inverse
    e = group.identity
    builder = _BlockBuilder(module, dst.n_reps, src.n_reps)

    if degree >= 0:
        # rows: reps (e, w_1, ..., w_(degree+1)); faces omit one slot
        i = degree
        for ridx in range(dst.n_reps):
            w = (e,) + dst.rep_free_coords(ridx)
            sign = 1
            for j in range(i + 2):
                face = w[:j] + w[j + 1:]
                t = face[0]
                if t == e:
                    cidx = src.rep_index(face[1:])
                    builder.add_scalar_block(ridx, cidx, sign)
                else:
                    ti = inv[t]
                    row = cay[ti]
                    cidx = src.rep_index(tuple(row[x] for x in face[1:]))
                    builder.add_action_block(ridx, cidx, sign, t)
                sign = -sign
    elif degree == -1:
        # norm seam: (D f)(g_0) = sum_s f(s*) = (sum_s action(s)) f(e*)
        for s in range(n):
            builder.add_action_block(0, 0, 1, s)
    else:
        # degree = -k-1 <= -2; rows are reps of X_(-k), k = -degree - 1
        k = -degree - 1
        for ridx in range(dst.n_reps):
            w = (e,) + dst.rep_free_coords(ridx)   # starred k-tuple
            for j in range(1, k + 2):
                sign = -1 if j % 2 else 1
                for g in range(n):
                    tup = w[:j - 1] + (g,) + w[j - 1:]
                    t = tup[0]
                    if t == e:
                        cidx = src.rep_index(tup[1:])
                        builder.add_scalar_block(ridx, cidx, sign)
                    else:
                        ti = inv[t]
                        row = cay[ti]
                        cidx = src.rep_index(tuple(row[x] for x in tup[1:]))
                        builder.add_action_block(ridx, cidx, sign, t)
    return builder.build()


def homotopy_matrix(group: FiniteGroup, module: GModule, degree: int,
                    degree_cap: int = DEFAULT_DEGREE_CAP,
                    rank_cap: int = DEFAULT_RANK_CAP) -> IntMatrix:
    """Matrix of the averaged contracting homotopy C^degree -> C^(degree-1),
    (S f)(x) = f(k x), rows indexed by the target degree - 1 reps."""
    src = cochain_space(group, module, degree, degree_cap, rank_cap)
    dst = cochain_space(group, module, degree - 1, degree_cap, rank_cap)
    n = group.order
    cay, inv = group.cayley, group.inverse
    e = group.identity
    builder = _BlockBuilder(module, dst.n_reps, src.n_reps)

    if degree - 1 >= 0:
        # k(w) = sum_g (g, w): term g contributes action(g) at rep of
        # g^-1 (g, w) = (e, g^-1, g^-1 w_1, ...)
        for ridx in range(dst.n_reps):
            w = (e,) + dst.rep_free_coords(ridx)
            for g in range(n):
                gi = inv[g]
                row = cay[gi]
                cidx = src.rep_index(tuple(row[x] for x in w))
                builder.add_action_block(ridx, cidx, 1, g)
    elif degree - 1 == -1:
        # k(s*) = (s): evaluated at the rep e*, value f((e))
        builder.add_scalar_block(0, 0, 1)
    else:
        # degree - 1 = -k <= -2: k(e*, w_2*, ..., w_k*) = -(w_2*, ..., w_k*)
        for ridx in range(dst.n_reps):
            w = dst.rep_free_coords(ridx)      # (w_2, ..., w_k)
            t = w[0]
            if t == e:
                cidx = src.rep_index(w[1:])
                builder.add_scalar_block(ridx, cidx, -1)
            else:
                ti = inv[t]
                row = cay[ti]
                cidx = src.rep_index(tuple(row[x] for x in w[1:]))
                builder.add_action_block(ridx, cidx, -1, t)
    return builder.build()


@dataclass
class CohomologyGroup:
    """A Tate cohomology group with explicit cocycle generators."""

    group: FiniteGroup
    module: GModule
    degree: int
    space: CochainSpace
    presentation: AbelianGroupPresentation
    d_in: IntMatrix
    d_out: IntMatrix

    @property
    def invariant_factors(self):
        return self.presentation.invariant_factors

    def generators(self):
        return self.presentation.generators()

    def order(self):
        return self.presentation.order()

    def __repr__(self):
        invs = list(self.invariant_factors)
        desc = " + ".join(f"Z/{d}" for d in invs) if invs else "0"
        return (f"H^{self.degree}({self.group.name}, {self.module.name})"
                f" = {desc}")


_COH_CACHE = {}


def cohomology(group: FiniteGroup, module: GModule, degree: int,
               degree_cap: int = DEFAULT_DEGREE_CAP,
               rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyGroup:
    """Tate cohomology in one degree, with generator lifts.

    Requires degrees degree-1 .. degree+1 inside the cap.  The homotopy
    identity S D + D S = |G| I is verified on the middle degree; it
    proves the cycle lattice is the saturation of the boundary lattice,
    so the presentation comes from one SNF of the incoming differential.
    """
    key = (id(group), id(module), degree)
    hit = _COH_CACHE.get(key)
    if hit is not None and hit[0] is group and hit[1] is module:
        return hit[2]
    space = cochain_space(group, module, degree, degree_cap, rank_cap)
    d_in = differential_matrix(group, module, degree - 1, degree_cap, rank_cap)
    d_out = differential_matrix(group, module, degree, degree_cap, rank_cap)
    comp = d_out.matmul(d_in)
    if not comp.is_zero():
        raise AssertionError(
            f"d.d != 0 at degree {degree} for {group.name}")
    s_mid = homotopy_matrix(group, module, degree, degree_cap, rank_cap)
    s_up = homotopy_matrix(group, module, degree + 1, degree_cap, rank_cap)
    ident = s_up.matmul(d_out).add(d_in.matmul(s_mid))
    expected = IntMatrix.identity(space.rank, scale=group.order)
    if not ident.equals(expected):
        raise AssertionError(
            f"contracting homotopy identity failed at degree {degree} "
            f"for {group.name}")
    pres = presentation_from_boundaries(d_in)
    for gen in pres.generators():
        if d_out.mul_vec(gen):
            raise AssertionError("generator is not a cocycle")
    result = CohomologyGroup(group, module, degree, space, pres, d_in, d_out)
    _COH_CACHE[key] = (group, module, result)
    return result


def cohomology_trivial(group: FiniteGroup, degree: int,
                       degree_cap: int = DEFAULT_DEGREE_CAP,
                       rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyGroup:
    return cohomology(group, trivial_module(group), degree,
                      degree_cap, rank_cap)


def complex_is_exactly_composable(group: FiniteGroup, module: GModule,
                                  lo: int, hi: int,
                                  degree_cap: int = DEFAULT_DEGREE_CAP,
                                  rank_cap: int = DEFAULT_RANK_CAP) -> bool:
    """d . d == 0 for every adjacent pair of differentials with degrees
    in [lo, hi], including the norm seam."""
    mats = {i: differential_matrix(group, module, i, degree_cap, rank_cap)
            for i in range(lo, hi)}
    for i in range(lo, hi - 1):
        if not mats[i + 1].matmul(mats[i]).is_zero():
            return False
    return True
