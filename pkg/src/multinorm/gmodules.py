"""Modules over a finite group: free Z-lattices with an integer matrix
action, plus fixed points, coinvariants and short exact sequences.

Only finite-rank lattices are supported; action matrices must define a
homomorphism into GL(rank, Z).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FixedSequenceNotExact, NotNormal, UnsupportedModule
from .groups import FiniteGroup, GroupSurjection, Subgroup
from .intlinalg import (
    IntMatrix,
    kernel_basis,
    smith_normal_form,
    solve,
)


def _mat_mul_dense(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(k))
                       for j in range(m)) for i in range(n))


def _identity_dense(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n))
                 for i in range(n))


class GModule:
    """A Z^rank lattice with a left action of a finite group, given by
    one integer matrix per group element (dense row tuples)."""

    __slots__ = ("group", "rank", "action", "is_trivial", "name")

    def __init__(self, group: FiniteGroup, rank: int, action,
                 name="A", validate=True):
        self.group = group
        self.rank = rank
        self.action = tuple(tuple(tuple(row) for row in m) for m in action)
        self.name = name
        ident = _identity_dense(rank)
        self.is_trivial = all(m == ident for m in self.action)
        if validate and not self.is_trivial:
            assert len(self.action) == group.order
            assert self.action[group.identity] == ident, \
                "identity must act as the identity matrix"
            for a in group.elements():
                for b in group.elements():
                    lhs = _mat_mul_dense(self.action[a], self.action[b])
                    if lhs != self.action[group.mul(a, b)]:
                        raise UnsupportedModule(
                            f"action is not a homomorphism at ({a},{b})")

    def act(self, g: int):
        return self.action[g]

    def act_vec(self, g: int, vec: dict) -> dict:
        if self.is_trivial:
            return dict(vec)
        m = self.action[g]
        out = {}
        for j, x in vec.items():
            for i in range(self.rank):
                c = m[i][j]
                if c:
                    s = out.get(i, 0) + c * x
                    if s:
                        out[i] = s
                    else:
                        del out[i]
        return out

    def __repr__(self):
        return f"GModule({self.name}, rank={self.rank} over {self.group.name})"


_TRIVIAL_CACHE = {}


def trivial_module(group: FiniteGroup, rank: int = 1) -> GModule:
    key = (id(group), rank)
    mod = _TRIVIAL_CACHE.get(key)
    if mod is None or mod[0] is not group:
        ident = _identity_dense(rank)
        mod = (group, GModule(group, rank, [ident] * group.order,
                              name="Z" if rank == 1 else f"Z^{rank}",
                              validate=False))
        _TRIVIAL_CACHE[key] = mod
    return mod[1]


def permutation_module(group: FiniteGroup, stabilizer: Subgroup) -> GModule:
    """Z[G/K']: free lattice on the left cosets of K', permuted by G."""
    cay = group.cayley
    coset_of = {}
    cosets = []
    for x in group.elements():
        if x in coset_of:
            continue
        members = sorted(cay[x][k] for k in stabilizer.elements)
        idx = len(cosets)
        cosets.append(members[0])
        for y in members:
            coset_of[y] = idx
    rank = len(cosets)
    action = []
    for g in group.elements():
        m = [[0] * rank for _ in range(rank)]
        for c, rep in enumerate(cosets):
            m[coset_of[cay[g][rep]]][c] = 1
        action.append(m)
    return GModule(group, rank, action,
                   name=f"Z[{group.name}/{stabilizer.order}]", validate=False)


def regular_module(group: FiniteGroup) -> GModule:
    from .groups import trivial_subgroup
    return permutation_module(group, trivial_subgroup(group))


@dataclass
class ModuleHom:
    """An equivariant lattice map between modules over the same group."""

    source: GModule
    target: GModule
    matrix: IntMatrix

    def __post_init__(self):
        assert self.matrix.rows == self.target.rank
        assert self.matrix.cols == self.source.rank
        for g in self.source.group.elements():
            lhs = self.matrix.matmul(
                IntMatrix.from_rows(self.source.act(g)))
            rhs = IntMatrix.from_rows(self.target.act(g)).matmul(self.matrix)
            if not lhs.equals(rhs):
                raise UnsupportedModule(
                    f"map is not equivariant at group element {g}")


def augmentation_hom(perm: GModule) -> ModuleHom:
    """Z[G/K'] -> Z summing coordinates."""
    triv = trivial_module(perm.group)
    return ModuleHom(perm, triv,
                     IntMatrix.from_rows([[1] * perm.rank]))


class _SaturatedLattice:
    """A saturated sublattice of Z^m with exact coordinate maps."""

    def __init__(self, basis_cols, ambient):
        self.ambient = ambient
        self.rank = len(basis_cols)
        self.incl = IntMatrix.from_columns(basis_cols, ambient)
        snf = smith_normal_form(self.incl)
        assert snf.rank == self.rank and all(d == 1 for d in snf.diag), \
            "basis must span a saturated lattice"
        urows = snf.u_rows(range(self.rank))
        umat = IntMatrix(self.rank, ambient,
                         {i: urows[i] for i in range(self.rank) if urows[i]})
        vcols = snf.v_cols(range(self.rank))
        vmat = IntMatrix.from_columns(
            [vcols[j] for j in range(self.rank)], self.rank)
        self.coords = vmat.matmul(umat)   # coords @ incl == identity

    def express(self, mat: IntMatrix) -> IntMatrix:
        """Coordinates of columns of mat, which must lie in the lattice."""
        out = self.coords.matmul(mat)
        if not self.incl.matmul(out).equals(mat):
            raise UnsupportedModule("vectors do not lie in the sublattice")
        return out


def fixed_points(module: GModule, subgroup: Subgroup):
    """Basis of the H-fixed sublattice A^H, returned as the inclusion
    matrix rank(A) x rank(A^H)."""
    if module.is_trivial:
        return IntMatrix.identity(module.rank)
    m = module.rank
    stacked_rows = {}
    r = 0
    for h in subgroup.elements:
        act = module.act(h)
        for i in range(m):
            row = {}
            for j in range(m):
                v = act[i][j] - (1 if i == j else 0)
                if v:
                    row[j] = v
            if row:
                stacked_rows[r] = row
            r += 1
    stacked = IntMatrix(r, m, stacked_rows)
    basis = kernel_basis(stacked)
    return IntMatrix.from_columns(basis, m)


def fixed_module(module: GModule, surj: GroupSurjection):
    """(A^H as a module over the quotient, inclusion matrix A^H -> A)."""
    h = surj.kernel
    if not h.is_normal:
        raise NotNormal("fixed-point module needs a normal subgroup")
    incl = fixed_points(module, h)
    if module.is_trivial:
        return trivial_module(surj.quotient, module.rank), incl
    lat = _SaturatedLattice([incl.column(j) for j in range(incl.cols)],
                            module.rank)
    action = []
    for q in surj.quotient.elements():
        rep = surj.reps[q]
        moved = IntMatrix.from_rows(module.act(rep)).matmul(incl)
        action.append(lat.express(moved).to_dense())
    sub = GModule(surj.quotient, incl.cols, action,
                  name=f"({module.name})^H")
    return sub, incl


def coinvariant_module(module: GModule, surj: GroupSurjection):
    """(A_H = A / I_H A as a module over the quotient, projection A -> A_H).

    Raises UnsupportedModule if the quotient lattice has torsion.
    """
    h = surj.kernel
    if not h.is_normal:
        raise NotNormal("coinvariants need a normal subgroup")
    if module.is_trivial:
        return trivial_module(surj.quotient, module.rank), \
            IntMatrix.identity(module.rank)
    m = module.rank
    cols = []
    for hh in h.elements:
        act = module.act(hh)
        for j in range(m):
            col = {}
            for i in range(m):
                v = act[i][j] - (1 if i == j else 0)
                if v:
                    col[i] = v
            if col:
                cols.append(col)
    span = IntMatrix.from_columns(cols, m)
    snf = smith_normal_form(span)
    if any(d != 1 for d in snf.diag):
        raise UnsupportedModule(
            f"coinvariant lattice has torsion {snf.invariant_factors()}")
    r = snf.rank
    rank_q = m - r
    urows = snf.u_rows(range(r, m))
    proj = IntMatrix(rank_q, m,
                     {i: urows[r + i] for i in range(rank_q) if urows[r + i]})
    ucols = snf.uinv_cols(range(r, m))
    section = IntMatrix.from_columns([ucols[r + i] for i in range(rank_q)], m)
    action = []
    for q in surj.quotient.elements():
        rep = surj.reps[q]
        x = proj.matmul(IntMatrix.from_rows(module.act(rep))).matmul(section)
        action.append(x.to_dense())
    quo_mod = GModule(surj.quotient, rank_q, action,
                      name=f"({module.name})_H")
    # the action must genuinely descend: X proj == proj act(rep)
    for q in surj.quotient.elements():
        rep = surj.reps[q]
        lhs = IntMatrix.from_rows(quo_mod.act(q)).matmul(proj)
        rhs = proj.matmul(IntMatrix.from_rows(module.act(rep)))
        assert lhs.equals(rhs), "coinvariant action failed to descend"
    return quo_mod, proj


@dataclass
class ShortExactSequence:
    """0 -> A -> B -> C -> 0 of modules over one group, with the
    inclusion and projection as explicit equivariant matrices."""

    sub: GModule
    mid: GModule
    quot: GModule
    incl: ModuleHom
    proj: ModuleHom

    def __post_init__(self):
        assert self.incl.source is self.sub and self.incl.target is self.mid
        assert self.proj.source is self.mid and self.proj.target is self.quot
        comp = self.proj.matrix.matmul(self.incl.matrix)
        if not comp.is_zero():
            raise FixedSequenceNotExact("proj . incl != 0", witness=comp)
        # injectivity of incl and exactness im(incl) = ker(proj)
        ker = kernel_basis(self.incl.matrix)
        if ker:
            raise FixedSequenceNotExact("inclusion is not injective",
                                        witness=ker[0])
        kerp = kernel_basis(self.proj.matrix)
        if len(kerp) != self.sub.rank:
            raise FixedSequenceNotExact(
                "rank of ker(proj) differs from rank of the submodule",
                witness=len(kerp))
        for vec in kerp:
            try:
                solve(self.incl.matrix, vec)
            except Exception as exc:
                raise FixedSequenceNotExact(
                    "ker(proj) is not contained in im(incl)",
                    witness=vec) from exc
        # surjectivity of proj
        snf = smith_normal_form(self.proj.matrix)
        if snf.rank != self.quot.rank or any(d != 1 for d in snf.diag):
            raise FixedSequenceNotExact("projection is not surjective",
                                        witness=snf.diagonal())

    def section(self) -> IntMatrix:
        """An integer right inverse of proj (not equivariant in general)."""
        cols = []
        for i in range(self.quot.rank):
            cols.append(solve(self.proj.matrix, {i: 1}))
        return IntMatrix.from_columns(cols, self.mid.rank)


def augmentation_ideal_sequence(group: FiniteGroup, surj: GroupSurjection):
    """0 -> I -> Z[G/H] -> Z -> 0 over G, where I is the augmentation
    ideal of the quotient's permutation module (H acts trivially)."""
    perm = permutation_module(group, surj.kernel)
    rank = perm.rank
    # basis of I: e_c - e_c0 for cosets c != c0, c0 the identity coset
    c0 = 0
    cols = []
    for c in range(rank):
        if c == c0:
            continue
        cols.append({c: 1, c0: -1})
    incl = IntMatrix.from_columns(cols, rank)
    lat = _SaturatedLattice(cols, rank)
    action = []
    for g in group.elements():
        moved = IntMatrix.from_rows(perm.act(g)).matmul(incl)
        action.append(lat.express(moved).to_dense())
    ideal = GModule(group, rank - 1, action, name="I")
    aug = augmentation_hom(perm)
    return ShortExactSequence(
        sub=ideal, mid=perm, quot=aug.target,
        incl=ModuleHom(ideal, perm, incl),
        proj=aug,
    )
