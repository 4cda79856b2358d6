"""Transfer maps between Tate cohomology groups, as explicit matrices on
equivariant cochains plus the induced maps in invariant coordinates.

Conventions for a surjection q: G -> Q with kernel H:

  inflation    (degree i >= 1)   (inf f)(g_0, ..., g_i) = f(q g_0, ..., q g_i)
  deflation    (degree i <= -1)  sums f over all preimage tuples of the
                                 starred arguments, landing in A^H; in
                                 degree 0 it is induced by the identity
                                 (supported when H acts trivially)
  residuation  (degree i <= -2)  fixes the minimum preimage of the first
                                 starred argument and sums over full
                                 preimages of the rest, landing in A_H
  restriction  (any degree)      positive degrees restrict the arguments
                                 to the subgroup; negative degrees expand
                                 each starred argument over a right
                                 transversal of the subgroup
  corestriction (degree 0 only)  multiplication by the subgroup index

The degree-0 corestriction and the cup products in pairings.py only
ever use the trivial module.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .cochains import (
    DEFAULT_DEGREE_CAP,
    DEFAULT_RANK_CAP,
    CohomologyGroup,
    _BlockBuilder,
    cochain_space,
    cohomology,
    differential_matrix,
)
from .errors import DegreeOutOfRange, NotNormal, UnsupportedModule
from .gmodules import (
    GModule,
    ModuleHom,
    ShortExactSequence,
    coinvariant_module,
    fixed_module,
    trivial_module,
)
from .groups import FiniteGroup, GroupSurjection, Subgroup
from .intlinalg import IntMatrix, induced_map, smith_normal_form

_SUBGROUP_MODULE_CACHE = {}
_SUBGROUP_GROUP_CACHE = {}


def subgroup_as_group(h: Subgroup) -> FiniteGroup:
    key = (id(h.parent), h.elements)
    hit = _SUBGROUP_GROUP_CACHE.get(key)
    if hit is not None and hit[0] is h.parent:
        return hit[1]
    grp = h.as_group()
    _SUBGROUP_GROUP_CACHE[key] = (h.parent, grp)
    return grp


def restricted_module(module: GModule, h: Subgroup) -> GModule:
    """The same lattice viewed over the subgroup (on its own indices)."""
    key = (id(module), h.elements)
    hit = _SUBGROUP_MODULE_CACHE.get(key)
    if hit is not None and hit[0] is module:
        return hit[1]
    grp = subgroup_as_group(h)
    if module.is_trivial:
        mod = trivial_module(grp, module.rank)
    else:
        mod = GModule(grp, module.rank,
                      [module.act(x) for x in h.elements],
                      name=f"{module.name}|H", validate=False)
    _SUBGROUP_MODULE_CACHE[key] = (module, mod)
    return mod


@dataclass
class CohomologyMap:
    """A map of Tate cohomology groups carried at both levels."""

    kind: str
    source: CohomologyGroup
    target: CohomologyGroup
    cochain_matrix: IntMatrix
    abstract_matrix: IntMatrix

    def apply_class(self, abstract):
        vec = [sum(self.abstract_matrix.get(i, j) * x
                   for j, x in enumerate(abstract))
               for i in range(self.abstract_matrix.rows)]
        return self.target.presentation.reduce_abstract(vec)

    def __repr__(self):
        return (f"{self.kind}: {self.source!r} -> {self.target!r}")


def _finish(kind, source, target, cochain_matrix) -> CohomologyMap:
    abstract = induced_map(cochain_matrix,
                           source.presentation, target.presentation)
    return CohomologyMap(kind, source, target, cochain_matrix, abstract)


def _right_transversal(g: FiniteGroup, h: Subgroup):
    """Minimum-index representatives of the right cosets H\\g."""
    seen = {}
    reps = []
    members = h.elements
    for x in g.elements():
        if x in seen:
            continue
        coset = sorted(g.mul(k, x) for k in members)
        for y in coset:
            seen[y] = True
        reps.append(coset[0])
    return reps


# -- restriction ---------------------------------------------------------


def restriction(g: FiniteGroup, h: Subgroup, module: GModule, degree: int,
                degree_cap: int = DEFAULT_DEGREE_CAP,
                rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyMap:
    """Res: H^i(G, A) -> H^i(H, A)."""
    hgrp = subgroup_as_group(h)
    hmod = restricted_module(module, h)
    source = cohomology(g, module, degree, degree_cap, rank_cap)
    target = cohomology(hgrp, hmod, degree, degree_cap, rank_cap)
    src_space = source.space
    dst_space = target.space
    cay, inv = g.cayley, g.inverse
    e = g.identity
    builder = _BlockBuilder(module, dst_space.n_reps, src_space.n_reps)
    elems = h.elements
    if degree >= 0:
        # an H-representative tuple is already a G-representative tuple
        for ridx in range(dst_space.n_reps):
            coords = dst_space.rep_free_coords(ridx)
            gcoords = tuple(elems[x] for x in coords)
            builder.add_scalar_block(ridx, src_space.rep_index(gcoords), 1)
    else:
        k = -degree
        reps = _right_transversal(g, h)
        for ridx in range(dst_space.n_reps):
            coords = (e,) + tuple(elems[x]
                                  for x in dst_space.rep_free_coords(ridx))
            for ss in iproduct(reps, repeat=k):
                tup = tuple(cay[t][s] for t, s in zip(coords, ss))
                t0 = tup[0]
                row = cay[inv[t0]]
                cidx = src_space.rep_index(tuple(row[x] for x in tup[1:]))
                builder.add_action_block(ridx, cidx, 1, t0)
    return _finish("Res", source, target, builder.build())


# -- inflation -------------------------------------------------------------


def inflation_along(surj: GroupSurjection, module: GModule,
                    quotient_module: GModule, incl: IntMatrix, degree: int,
                    degree_cap: int = DEFAULT_DEGREE_CAP,
                    rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyMap:
    """Inf: H^i(Q, A^H) -> H^i(G, A) for i >= 1, along q: G -> Q."""
    if degree < 1:
        raise DegreeOutOfRange(f"inflation needs degree >= 1, got {degree}")
    if not surj.kernel.is_normal:
        raise NotNormal("inflation kernel must be normal")
    g, q = surj.group, surj.quotient
    source = cohomology(q, quotient_module, degree, degree_cap, rank_cap)
    target = cohomology(g, module, degree, degree_cap, rank_cap)
    qmap = surj.mapping
    # blocks are incl: rank(A^H) -> rank(A); build directly
    rowdata = {}
    ma, mq = module.rank, quotient_module.rank
    incl_entries = [(i, j, incl.get(i, j)) for i in range(ma)
                    for j in range(mq) if incl.get(i, j)]
    dst_space = target.space
    src_space = source.space
    for ridx in range(dst_space.n_reps):
        coords = dst_space.rep_free_coords(ridx)
        cidx = src_space.rep_index(tuple(qmap[x] for x in coords))
        for i, j, v in incl_entries:
            rowdata.setdefault(ridx * ma + i, {})[cidx * mq + j] = v
    mat = IntMatrix(dst_space.rank, src_space.rank, rowdata)
    return _finish("Inf", source, target, mat)


def inflation(g: FiniteGroup, h: Subgroup, degree: int,
              module: GModule = None,
              degree_cap: int = DEFAULT_DEGREE_CAP,
              rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyMap:
    """Inf: H^i(G/H, A^H) -> H^i(G, A) for the canonical quotient."""
    if module is None:
        module = trivial_module(g)
    surj = GroupSurjection.from_subgroup(g, h)
    qmod, incl = fixed_module(module, surj)
    return inflation_along(surj, module, qmod, incl, degree,
                           degree_cap, rank_cap)


# -- corestriction in degree 0 ---------------------------------------------


def corestriction_deg0(g: FiniteGroup, h: Subgroup,
                       degree_cap: int = DEFAULT_DEGREE_CAP,
                       rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyMap:
    """Cor: H^0(H, Z) -> H^0(G, Z), multiplication by the index [G:H]."""
    hgrp = subgroup_as_group(h)
    source = cohomology(hgrp, trivial_module(hgrp), 0, degree_cap, rank_cap)
    target = cohomology(g, trivial_module(g), 0, degree_cap, rank_cap)
    mat = IntMatrix.from_rows([[h.index]])
    return _finish("Cor0", source, target, mat)


# -- deflation ---------------------------------------------------------------


def deflation_along(surj: GroupSurjection, module: GModule, degree: int,
                    degree_cap: int = DEFAULT_DEGREE_CAP,
                    rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyMap:
    """Def: H^i(G, A) -> H^i(Q, A^H) for i <= 0."""
    if degree > 0:
        raise DegreeOutOfRange(f"deflation needs degree <= 0, got {degree}")
    if not surj.kernel.is_normal:
        raise NotNormal("deflation kernel must be normal")
    g, q = surj.group, surj.quotient
    source = cohomology(g, module, degree, degree_cap, rank_cap)
    if degree == 0:
        # induced by the identity; supported when the kernel acts
        # trivially, so that A = A^H as lattices
        if not all(module.act(k) == module.act(g.identity)
                   for k in surj.kernel.elements):
            raise UnsupportedModule(
                "degree-0 deflation needs the kernel to act trivially")
        if module.is_trivial:
            qmod = trivial_module(q, module.rank)
        else:
            qmod = GModule(q, module.rank,
                           [module.act(surj.reps[x]) for x in q.elements()],
                           name=f"({module.name})^H")
        target = cohomology(q, qmod, degree, degree_cap, rank_cap)
        mat = IntMatrix.identity(module.rank)
        return _finish("Def", source, target, mat)

    qmod, incl = fixed_module(module, surj)
    target = cohomology(q, qmod, degree, degree_cap, rank_cap)
    coords = _lattice_coords(incl)
    k = -degree
    cay, inv = g.cayley, g.inverse
    src_space, dst_space = source.space, target.space
    ma, mf = module.rank, qmod.rank
    rowdata = {}
    kernel_elems = surj.kernel.elements
    for ridx in range(dst_space.n_reps):
        alphas = dst_space.rep_free_coords(ridx)
        fibers = [kernel_elems] + [surj.preimages[a] for a in alphas]
        acc = {}   # column-block -> accumulated m x m integer block rows
        for tup in iproduct(*fibers):
            t0 = tup[0]
            row = cay[inv[t0]]
            cidx = src_space.rep_index(tuple(row[x] for x in tup[1:]))
            block = acc.get(cidx)
            if block is None:
                block = [[0] * ma for _ in range(ma)]
                acc[cidx] = block
            act = module.act(t0)
            for u in range(ma):
                bu = block[u]
                au = act[u]
                for v in range(ma):
                    if au[v]:
                        bu[v] += au[v]
        for cidx, block in acc.items():
            fixed_block = _express_block(coords, incl, block)
            for u in range(mf):
                for v in range(ma):
                    val = fixed_block[u][v]
                    if val:
                        rowdata.setdefault(ridx * mf + u,
                                           {})[cidx * ma + v] = val
    mat = IntMatrix(dst_space.rank, src_space.rank, rowdata)
    return _finish("Def", source, target, mat)


def deflation(g: FiniteGroup, h: Subgroup, degree: int,
              module: GModule = None,
              degree_cap: int = DEFAULT_DEGREE_CAP,
              rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyMap:
    if module is None:
        module = trivial_module(g)
    return deflation_along(GroupSurjection.from_subgroup(g, h), module,
                           degree, degree_cap, rank_cap)


def _lattice_coords(incl: IntMatrix) -> IntMatrix:
    """Exact coordinates for a saturated column lattice (coords @ incl = I)."""
    snf = smith_normal_form(incl)
    r = incl.cols
    if snf.rank != r or any(d != 1 for d in snf.diag):
        raise AssertionError("column lattice is not saturated")
    urows = snf.u_rows(range(r))
    umat = IntMatrix(r, incl.rows, {i: urows[i] for i in range(r) if urows[i]})
    vcols = snf.v_cols(range(r))
    vmat = IntMatrix.from_columns([vcols[j] for j in range(r)], r)
    return vmat.matmul(umat)


def _express_block(coords: IntMatrix, incl: IntMatrix, block):
    """Rewrite an integer block with columns in the lattice of incl in
    lattice coordinates, verifying exactness."""
    bmat = IntMatrix.from_rows(block)
    out = coords.matmul(bmat)
    if not incl.matmul(out).equals(bmat):
        raise AssertionError(
            "deflation values must land in the fixed sublattice")
    return out.to_dense()


# -- residuation --------------------------------------------------------------


def residuation_along(surj: GroupSurjection, module: GModule, degree: int,
                      degree_cap: int = DEFAULT_DEGREE_CAP,
                      rank_cap: int = DEFAULT_RANK_CAP,
                      first_slot_rep: int = None) -> CohomologyMap:
    """Rsd: H^i(G, A) -> H^i(Q, A_H) for i <= -2.

    ``first_slot_rep`` overrides the canonical (minimum-index) kernel
    representative used for the first starred slot; the resulting
    cochain matrix does not depend on the choice."""
    if degree > -2:
        raise DegreeOutOfRange(
            f"residuation needs degree <= -2, got {degree}")
    if not surj.kernel.is_normal:
        raise NotNormal("residuation kernel must be normal")
    g, q = surj.group, surj.quotient
    source = cohomology(g, module, degree, degree_cap, rank_cap)
    qmod, proj = coinvariant_module(module, surj)
    target = cohomology(q, qmod, degree, degree_cap, rank_cap)
    k = -degree
    cay, inv = g.cayley, g.inverse
    src_space, dst_space = source.space, target.space
    ma, mp = module.rank, qmod.rank
    ghat = surj.reps[q.identity]      # fixed preimage of the first slot
    if first_slot_rep is not None:
        assert surj.mapping[first_slot_rep] == q.identity
        ghat = first_slot_rep
    lead = cay[inv[ghat]]
    pa = module.act(ghat)
    # block applied to every term: proj @ action(ghat)
    pblock = [[sum(proj.get(u, t) * pa[t][v] for t in range(ma))
               for v in range(ma)] for u in range(mp)]
    rowdata = {}
    for ridx in range(dst_space.n_reps):
        alphas = dst_space.rep_free_coords(ridx)
        fibers = [surj.preimages[a] for a in alphas]
        counts = {}
        for tup in iproduct(*fibers):
            cidx = src_space.rep_index(tuple(lead[x] for x in tup))
            counts[cidx] = counts.get(cidx, 0) + 1
        for cidx, cnt in counts.items():
            for u in range(mp):
                row = None
                for v in range(ma):
                    val = cnt * pblock[u][v]
                    if val:
                        if row is None:
                            row = rowdata.setdefault(ridx * mp + u, {})
                        row[cidx * ma + v] = row.get(cidx * ma + v, 0) + val
    mat = IntMatrix(dst_space.rank, src_space.rank,
                    {r: {c: v for c, v in d.items() if v}
                     for r, d in rowdata.items() if d})
    return _finish("Rsd", source, target, mat)


def residuation(g: FiniteGroup, h: Subgroup, degree: int,
                module: GModule = None,
                degree_cap: int = DEFAULT_DEGREE_CAP,
                rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyMap:
    if module is None:
        module = trivial_module(g)
    return residuation_along(GroupSurjection.from_subgroup(g, h), module,
                             degree, degree_cap, rank_cap)


# -- connecting map -----------------------------------------------------------


def connecting_map(ses: ShortExactSequence, degree: int,
                   degree_cap: int = DEFAULT_DEGREE_CAP,
                   rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyMap:
    """The coboundary H^i(G, C) -> H^(i+1)(G, A) of a short exact
    sequence 0 -> A -> B -> C -> 0, for i <= -1.

    Built as (coords of A in B) . d_B . (a section of B -> C), applied
    blockwise; on cocycles this is the usual zig-zag."""
    if degree > -1:
        raise DegreeOutOfRange(
            f"connecting map implemented for degree <= -1, got {degree}")
    grp = ses.mid.group
    source = cohomology(grp, ses.quot, degree, degree_cap, rank_cap)
    target = cohomology(grp, ses.sub, degree + 1, degree_cap, rank_cap)
    d_mid = differential_matrix(grp, ses.mid, degree, degree_cap, rank_cap)
    section = ses.section()
    coords = _lattice_coords(ses.incl.matrix)
    src_space = cochain_space(grp, ses.mid, degree, degree_cap, rank_cap)
    dst_space = cochain_space(grp, ses.mid, degree + 1, degree_cap, rank_cap)
    sec_full = _blockdiag(section, src_space.n_reps)
    coords_full = _blockdiag(coords, dst_space.n_reps)
    mat = coords_full.matmul(d_mid).matmul(sec_full)
    return _finish("Connecting", source, target, mat)


def _blockdiag(block: IntMatrix, copies: int) -> IntMatrix:
    rowdata = {}
    br, bc = block.rows, block.cols
    for t in range(copies):
        for i, r in block.rowdata.items():
            rowdata[t * br + i] = {t * bc + j: v for j, v in r.items()}
    return IntMatrix(copies * br, copies * bc, rowdata)


# -- convenience: the maps the product pipeline uses -------------------------


def restriction_trivial(g, h, degree, **caps):
    return restriction(g, h, trivial_module(g), degree, **caps)


def inflation_from_factor(g: FiniteGroup, side: str, degree: int,
                          degree_cap: int = DEFAULT_DEGREE_CAP,
                          rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyMap:
    """Inf: H^i(G_j, Z) -> H^i(G, Z) along the projection of a direct
    product onto one factor."""
    surj = (GroupSurjection.onto_left_factor(g) if side == "left"
            else GroupSurjection.onto_right_factor(g))
    factor = surj.quotient
    return inflation_along(surj, trivial_module(g), trivial_module(factor),
                           IntMatrix.identity(1), degree,
                           degree_cap, rank_cap)


def residuation_to_factor(g: FiniteGroup, side: str, degree: int,
                          degree_cap: int = DEFAULT_DEGREE_CAP,
                          rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyMap:
    """Rsd: H^i(G, Z) -> H^i(G_j, Z) along the factor projection."""
    surj = (GroupSurjection.onto_left_factor(g) if side == "left"
            else GroupSurjection.onto_right_factor(g))
    return residuation_along(surj, trivial_module(g), degree,
                             degree_cap, rank_cap)


def deflation_to_factor(g: FiniteGroup, side: str, degree: int,
                        degree_cap: int = DEFAULT_DEGREE_CAP,
                        rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyMap:
    surj = (GroupSurjection.onto_left_factor(g) if side == "left"
            else GroupSurjection.onto_right_factor(g))
    return deflation_along(surj, trivial_module(g), degree,
                           degree_cap, rank_cap)


def module_hom_map(hom: ModuleHom, degree: int,
                   degree_cap: int = DEFAULT_DEGREE_CAP,
                   rank_cap: int = DEFAULT_RANK_CAP) -> CohomologyMap:
    """The map H^i(G, A) -> H^i(G, B) induced by an equivariant lattice
    map A -> B, applied blockwise to cochain values."""
    grp = hom.source.group
    source = cohomology(grp, hom.source, degree, degree_cap, rank_cap)
    target = cohomology(grp, hom.target, degree, degree_cap, rank_cap)
    space = cochain_space(grp, hom.source, degree, degree_cap, rank_cap)
    mat = _blockdiag(hom.matrix, space.n_reps)
    return _finish("ModuleHom", source, target, mat)
