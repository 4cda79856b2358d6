"""Cup-product pairings between opposite-degree Tate groups.

For cocycles a on the degree -i space and b on the degree +i space of
the trivial-coefficient standard complex, the pairing evaluates

    <a, b> = sum over (s_1, ..., s_i) in G^i of
             a(s_1*, ..., s_i*) . b(s_i, ..., s_1, e)      modulo |G|,

an element of H^0(G, Z) = Z/|G|.  Perfectness is decided exactly by
checking that both induced maps into the character groups are
injective and the two sides have equal order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cochains import (
    DEFAULT_DEGREE_CAP,
    DEFAULT_RANK_CAP,
    CohomologyGroup,
    cochain_space,
    cohomology,
)
from .errors import NotAProduct
from .gmodules import trivial_module
from .groups import FiniteGroup
from .intlinalg import FinAb, IntMatrix, is_injective_map
from .transfers import inflation_from_factor, residuation_to_factor

_TENSOR_CACHE = {}


def _pairing_tensor(group: FiniteGroup, i: int):
    """Sparse dict (rep_minus, rep_plus) -> multiplicity over all i-tuples."""
    key = (id(group), i)
    hit = _TENSOR_CACHE.get(key)
    if hit is not None and hit[0] is group:
        return hit[1]
    n = group.order
    cay, inv = group.cayley, group.inverse
    e = group.identity
    triv = trivial_module(group)
    minus = cochain_space(group, triv, -i)
    plus = cochain_space(group, triv, i)
    counts = {}

    def tuples(depth, acc):
        if depth == 0:
            s = acc
            lead = cay[inv[s[0]]]
            rm = minus.rep_index(tuple(lead[x] for x in s[1:]))
            rev = s[::-1]
            lead2 = cay[inv[rev[0]]]
            rp = plus.rep_index(tuple(lead2[x] for x in rev[1:] + (e,)))
            keypair = (rm, rp)
            counts[keypair] = counts.get(keypair, 0) + 1
            return
        for g in range(n):
            tuples(depth - 1, acc + (g,))

    tuples(i, ())
    _TENSOR_CACHE[key] = (group, counts)
    return counts


def cup_value(group: FiniteGroup, i: int, a_vec: dict, b_vec: dict) -> int:
    """<a, b> mod |G| for cochain vectors on the degree -i / +i bases."""
    counts = _pairing_tensor(group, i)
    total = 0
    for (rm, rp), c in counts.items():
        av = a_vec.get(rm, 0)
        if av:
            bv = b_vec.get(rp, 0)
            if bv:
                total += c * av * bv
    return total % group.order


@dataclass
class PairingTable:
    """Values of a bilinear pairing on generator pairs, mod ``modulus``."""

    modulus: int
    left_mods: tuple
    right_mods: tuple
    values: list                      # left x right ints in [0, modulus)
    left: CohomologyGroup = None
    right: CohomologyGroup = None
    kind: str = "cup"

    def __post_init__(self):
        n = self.modulus
        for li, dl in enumerate(self.left_mods):
            for ri, er in enumerate(self.right_mods):
                v = self.values[li][ri]
                assert (dl * v) % n == 0 and (er * v) % n == 0, \
                    "pairing value incompatible with generator orders"

    def value(self, li, ri):
        return self.values[li][ri]


def cup_pairing(group: FiniteGroup, i: int,
                degree_cap: int = DEFAULT_DEGREE_CAP,
                rank_cap: int = DEFAULT_RANK_CAP) -> PairingTable:
    """The pairing H^-i(G, Z) x H^i(G, Z) -> Z/|G| on generators."""
    assert i >= 1
    triv = trivial_module(group)
    left = cohomology(group, triv, -i, degree_cap, rank_cap)
    right = cohomology(group, triv, i, degree_cap, rank_cap)
    values = [[cup_value(group, i, a, b) for b in right.generators()]
              for a in left.generators()]
    return PairingTable(group.order, left.invariant_factors,
                        right.invariant_factors, values, left, right)


@dataclass
class PerfectnessCertificate:
    perfect: bool
    left_order: int
    right_order: int
    left_to_dual_matrix: list
    right_to_dual_matrix: list
    left_kernel_invariants: list
    right_kernel_invariants: list


def is_perfect(table: PairingTable) -> PerfectnessCertificate:
    """Both induced maps into the opposite character groups must be
    bijections; with finite groups that reduces to injectivity both
    ways plus equality of orders."""
    n = table.modulus
    lmods, rmods = table.left_mods, table.right_mods
    lorder = 1
    for d in lmods:
        lorder *= d
    rorder = 1
    for d in rmods:
        rorder *= d
    # left -> Hom(right, Q/Z): generator l maps to (v * e_r / n)_r in (+) Z/e_r
    l2d = [[(table.values[li][ri] * er) // n for li in range(len(lmods))]
           for ri, er in enumerate(rmods)]
    r2d = [[(table.values[li][ri] * dl) // n for ri in range(len(rmods))]
           for li, dl in enumerate(lmods)]
    ok_l, inv_l = _injective(l2d, lmods, rmods)
    ok_r, inv_r = _injective(r2d, rmods, lmods)
    perfect = ok_l and ok_r and lorder == rorder
    return PerfectnessCertificate(perfect, lorder, rorder, l2d, r2d,
                                  inv_l, inv_r)


def _injective(dense, src_mods, dual_mods):
    if not src_mods:
        return True, []
    mat = IntMatrix.from_rows(dense) if dense else IntMatrix.zeros(0, 0)
    if not dual_mods:
        # the dual target is trivial: injective iff the source is
        return len(src_mods) == 0, list(src_mods)
    ok, invs = is_injective_map(mat, FinAb(tuple(src_mods)),
                                FinAb(tuple(dual_mods)))
    return ok, invs


def composite_pairing_alpha(g: FiniteGroup, i: int,
                            degree_cap: int = DEFAULT_DEGREE_CAP,
                            rank_cap: int = DEFAULT_RANK_CAP) -> PairingTable:
    """For G = G1 x G2: the blockwise pairing on
    (H^-i(G1) + H^-i(G2)) x (H^i(G1) + H^i(G2)) with values pushed into
    Z/|G| by the degree-0 corestrictions (multiplication by the index of
    each factor)."""
    ps = g.product_structure
    if ps is None:
        raise NotAProduct(f"{g.name} carries no product structure")
    n = g.order
    tables = [cup_pairing(ps.left, i, degree_cap, rank_cap),
              cup_pairing(ps.right, i, degree_cap, rank_cap)]
    cofactor = [ps.right.order, ps.left.order]   # [G : G_j]
    left_mods = tables[0].left_mods + tables[1].left_mods
    right_mods = tables[0].right_mods + tables[1].right_mods
    values = [[0] * len(right_mods) for _ in range(len(left_mods))]
    lo = ro = 0
    for j, t in enumerate(tables):
        for li in range(len(t.left_mods)):
            for ri in range(len(t.right_mods)):
                values[lo + li][ro + ri] = \
                    (cofactor[j] * t.values[li][ri]) % n
        lo += len(t.left_mods)
        ro += len(t.right_mods)
    return PairingTable(n, left_mods, right_mods, values, kind="alpha")


@dataclass
class AdjointnessReport:
    group_name: str
    degree: int
    entries: list = field(default_factory=list)
    passed: bool = True

    def add(self, factor, f_index, psi_index, lhs, rhs):
        ok = lhs == rhs
        self.entries.append({
            "factor": factor, "f": f_index, "psi": psi_index,
            "lhs": lhs, "rhs": rhs, "ok": ok,
        })
        if not ok:
            self.passed = False


def verify_adjointness(g: FiniteGroup, i: int,
                       degree_cap: int = DEFAULT_DEGREE_CAP,
                       rank_cap: int = DEFAULT_RANK_CAP) -> AdjointnessReport:
    """For G = G1 x G2 and every generator pair, compare

        < f, Inf_j(psi) >_G   and   [G : G_j] . < Rsd_j(f), psi >_(G_j)

    in Z/|G|, for f in H^-i(G, Z) and psi in H^i(G_j, Z)."""
    ps = g.product_structure
    if ps is None:
        raise NotAProduct(f"{g.name} carries no product structure")
    assert i >= 2, "the adjoint pair needs degree at least 2"
    n = g.order
    triv = trivial_module(g)
    minus = cohomology(g, triv, -i, degree_cap, rank_cap)
    report = AdjointnessReport(g.name, i)
    for side, factor in (("left", ps.left), ("right", ps.right)):
        plus_factor = cohomology(factor, trivial_module(factor), i,
                                 degree_cap, rank_cap)
        if not plus_factor.invariant_factors:
            continue
        inf = inflation_from_factor(g, side, i, degree_cap, rank_cap)
        rsd = residuation_to_factor(g, side, -i, degree_cap, rank_cap)
        index = n // factor.order
        for fi, fvec in enumerate(minus.generators()):
            rsd_f = rsd.cochain_matrix.mul_vec(fvec)
            for pi, psi in enumerate(plus_factor.generators()):
                inf_psi = inf.cochain_matrix.mul_vec(psi)
                lhs = cup_value(g, i, fvec, inf_psi)
                rhs = (index * cup_value(factor, i, rsd_f, psi)) % n
                report.add(side, fi, pi, lhs, rhs)
    return report
