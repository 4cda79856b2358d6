"""Finite groups as dense integer index tables.

Elements are 0..n-1.  A group is its Cayley table plus located identity
and inverses; subgroups are sorted element lists, quotients carry an
explicit projection map.  Everything is immutable after construction so
downstream cohomology code can key caches on object identity.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InvalidSubgroup, NotAGroup, NotNormal, TooLarge

DEFAULT_ORDER_CAP = 10000

# Associativity is checked exhaustively up to this order, sampled above.
EXHAUSTIVE_ASSOC_LIMIT = 64
ASSOC_SAMPLES = 20000


@dataclass(frozen=True)
class ProductStructure:
    """Direct-product bookkeeping: factor groups with embeddings and
    projections expressed as element-index tables."""

    left: "FiniteGroup"
    right: "FiniteGroup"
    embed_left: tuple
    embed_right: tuple
    proj_left: tuple
    proj_right: tuple


class FiniteGroup:
    """A finite group on indices 0..order-1 with a materialized Cayley table."""

    __slots__ = ("order", "cayley", "identity", "inverse", "name",
                 "product_structure", "labels", "_element_orders")

    def __init__(self, cayley, name="G", product_structure=None,
                 labels=None, _validated=False):
        cayley = tuple(tuple(row) for row in cayley)
        if not _validated:
            _validate_table(cayley)
        self.cayley = cayley
        self.order = len(cayley)
        self.identity = _find_identity(cayley)
        self.inverse = _find_inverses(cayley, self.identity)
        self.name = name
        self.product_structure = product_structure
        self.labels = labels
        self._element_orders = None

    # -- basic queries -------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.cayley[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        row = self.cayley[g]
        return self.cayley[row[x]][self.inverse[g]]

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, a: int) -> int:
        e = self.identity
        x, k = a, 1
        while x != e:
            x = self.cayley[x][a]
            k += 1
        return k

    def element_orders(self):
        if self._element_orders is None:
            self._element_orders = tuple(self.element_order(a) for a in self.elements())
        return self._element_orders

    def exponent(self) -> int:
        return math.lcm(*self.element_orders())

    def is_abelian(self) -> bool:
        cay = self.cayley
        return all(cay[a][b] == cay[b][a]
                   for a in self.elements() for b in range(a))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def _validate_table(cayley):
    n = len(cayley)
    if n == 0:
        raise NotAGroup("empty table")
    for i, row in enumerate(cayley):
        if len(row) != n:
            raise NotAGroup(f"row {i} has length {len(row)}, expected {n}")
        for v in row:
            if not (isinstance(v, int) and 0 <= v < n):
                raise NotAGroup(f"entry {v!r} in row {i} out of range")
    # Identity and inverses first: cheap, and their failures give the
    # clearest witnesses.
    e = _find_identity(cayley)
    for a in range(n):
        if not any(cayley[a][b] == e and cayley[b][a] == e for b in range(n)):
            raise NotAGroup(f"element {a} has no two-sided inverse", witness=a)
    if n <= EXHAUSTIVE_ASSOC_LIMIT:
        triples = ((a, b, c) for a in range(n) for b in range(n) for c in range(n))
    else:
        rng = random.Random(0x5eed)
        triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                   for _ in range(ASSOC_SAMPLES))
    for a, b, c in triples:
        if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]]:
            raise NotAGroup(f"associativity fails at ({a},{b},{c})",
                            witness=(a, b, c))


def _find_identity(cayley):
    n = len(cayley)
    for e in range(n):
        if all(cayley[e][x] == x and cayley[x][e] == x for x in range(n)):
            return e
    raise NotAGroup("no two-sided identity")


def _find_inverses(cayley, e):
    n = len(cayley)
    inv = [None] * n
    for a in range(n):
        for b in range(n):
            if cayley[a][b] == e and cayley[b][a] == e:
                inv[a] = b
                break
        if inv[a] is None:
            raise NotAGroup(f"element {a} has no two-sided inverse", witness=a)
    return tuple(inv)


# -- constructors ------------------------------------------------------


def from_cayley_table(table, name="G") -> FiniteGroup:
    """Validate a square table and wrap it as a group."""
    return FiniteGroup(table, name=name)


def compose_perms(p, q):
    """(p*q)(i) = p(q(i)): apply q first."""
    return tuple(p[i] for i in q)


def from_permutations(degree: int, generators: Sequence[Sequence[int]],
                      name: Optional[str] = None,
                      order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Group generated by permutations of 0..degree-1, as a Cayley table.

    Elements are indexed in breadth-first discovery order starting from
    the identity, which makes the numbering deterministic.
    """
    gens = []
    for g in generators:
        g = tuple(g)
        if sorted(g) != list(range(degree)):
            raise NotAGroup(f"generator {g!r} is not a permutation of 0..{degree - 1}")
        gens.append(g)
    ident = tuple(range(degree))
    index = {ident: 0}
    elems = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose_perms(p, g)
                if q not in index:
                    if len(elems) >= order_cap:
                        raise TooLarge(
                            f"closure exceeds order cap {order_cap}")
                    index[q] = len(elems)
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    n = len(elems)
    cayley = [[index[compose_perms(a, b)] for b in elems] for a in elems]
    return FiniteGroup(cayley, name=name or f"perm{degree}<{n}>",
                       labels=tuple(elems), _validated=True)


def direct_product(g1: FiniteGroup, g2: FiniteGroup,
                   name: Optional[str] = None,
                   order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Direct product with (x, y) packed as x*|G2| + y."""
    n1, n2 = g1.order, g2.order
    if n1 * n2 > order_cap:
        raise TooLarge(f"product order {n1 * n2} exceeds cap {order_cap}")
    cay1, cay2 = g1.cayley, g2.cayley
    cayley = [[cay1[x1][x2] * n2 + cay2[y1][y2]
               for x2 in range(n1) for y2 in range(n2)]
              for x1 in range(n1) for y1 in range(n2)]
    # The comprehension above iterates (x1,y1) then (x2,y2) in packed order.
    structure_name = name or f"{g1.name}x{g2.name}"
    ps = ProductStructure(
        left=g1,
        right=g2,
        embed_left=tuple(x * n2 + g2.identity for x in range(n1)),
        embed_right=tuple(g1.identity * n2 + y for y in range(n2)),
        proj_left=tuple(z // n2 for z in range(n1 * n2)),
        proj_right=tuple(z % n2 for z in range(n1 * n2)),
    )
    return FiniteGroup(cayley, name=structure_name,
                       product_structure=ps, _validated=True)


# -- subgroups and quotients ------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple
    is_normal: bool = field(compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def contains(self, x: int) -> bool:
        return x in self.element_set()

    def element_set(self):
        return frozenset(self.elements)

    def as_group(self) -> FiniteGroup:
        """The subgroup as a standalone group on its own indices 0..|H|-1."""
        pos = {g: i for i, g in enumerate(self.elements)}
        cay = self.parent.cayley
        table = [[pos[cay[a][b]] for b in self.elements] for a in self.elements]
        return FiniteGroup(table, name=f"{self.parent.name}|sub{self.order}",
                           _validated=True)


def _closure(g: FiniteGroup, seeds) -> list:
    # Closure under products alone; inverses come for free in a finite group.
    cay = g.cayley
    members = {g.identity}
    members.update(seeds)
    frontier = sorted(members)
    while frontier:
        current = sorted(members)
        new = set()
        for a in frontier:
            row = cay[a]
            for b in current:
                c = row[b]
                if c not in members:
                    new.add(c)
                c = cay[b][a]
                if c not in members:
                    new.add(c)
        members.update(new)
        frontier = sorted(new)
    return sorted(members)


def _is_normal(g: FiniteGroup, elements) -> bool:
    members = set(elements)
    return all(g.conj(x, h) in members for x in g.elements() for h in elements)


def subgroup_generated(g: FiniteGroup, seeds: Sequence[int]) -> Subgroup:
    """Smallest subgroup containing the seed elements."""
    for s in seeds:
        if not (0 <= s < g.order):
            raise InvalidSubgroup(f"seed {s} out of range")
    elems = _closure(g, seeds)
    return Subgroup(g, tuple(elems), _is_normal(g, elems))


def subgroup_from_elements(g: FiniteGroup, elements: Sequence[int]) -> Subgroup:
    """Wrap an element list as a subgroup, verifying closure."""
    elems = sorted(set(elements))
    members = set(elems)
    if g.identity not in members:
        raise InvalidSubgroup("identity missing")
    for a in elems:
        if not (0 <= a < g.order):
            raise InvalidSubgroup(f"element {a} out of range")
        if g.inverse[a] not in members:
            raise InvalidSubgroup(f"inverse of {a} missing")
        for b in elems:
            if g.cayley[a][b] not in members:
                raise InvalidSubgroup(f"product {a}*{b} escapes the subgroup")
    return Subgroup(g, tuple(elems), _is_normal(g, elems))


def trivial_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, (g.identity,), True)


def full_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, tuple(g.elements()), True)


@dataclass(frozen=True)
class QuotientGroup:
    parent: FiniteGroup
    kernel: Subgroup
    cosets: tuple           # coset reps, one per quotient element
    quotient: FiniteGroup
    projection: tuple       # parent element -> quotient element index


def quotient(g: FiniteGroup, h: Subgroup) -> QuotientGroup:
    """Quotient by a normal subgroup.  Coset representatives are the
    minimum element index per coset, and cosets are numbered by sorted
    representative, so the layout is deterministic."""
    if h.parent is not g:
        raise InvalidSubgroup("subgroup belongs to a different group")
    if not h.is_normal:
        raise NotNormal(f"subgroup of order {h.order} is not normal")
    cay = g.cayley
    seen = {}
    reps = []
    for x in g.elements():
        if x in seen:
            continue
        coset = sorted(cay[x][k] for k in h.elements)
        for y in coset:
            seen[y] = coset[0]
        reps.append(coset[0])
    reps.sort()
    rep_index = {r: i for i, r in enumerate(reps)}
    projection = tuple(rep_index[seen[x]] for x in g.elements())
    table = [[projection[cay[a][b]] for b in reps] for a in reps]
    q = FiniteGroup(table, name=f"{g.name}/{h.order}", _validated=True)
    return QuotientGroup(g, h, tuple(reps), q, projection)


def all_subgroups(g: FiniteGroup, max_generators: int = 3) -> list:
    """Every subgroup reachable by closing a generator set of bounded
    size.  Complete for the small groups used here (all their subgroups
    are at most 3-generated)."""
    found = {}
    triv = trivial_subgroup(g)
    found[triv.elements] = triv
    singles = []
    for a in g.elements():
        s = subgroup_generated(g, [a])
        if s.elements not in found:
            found[s.elements] = s
        singles.append(a)
    if max_generators >= 2:
        for i, a in enumerate(singles):
            for b in singles[i + 1:]:
                s = subgroup_generated(g, [a, b])
                if s.elements not in found:
                    found[s.elements] = s
    if max_generators >= 3:
        base = list(found.values())
        for s in base:
            for c in g.elements():
                if c not in s.element_set():
                    t = subgroup_generated(g, list(s.elements) + [c])
                    if t.elements not in found:
                        found[t.elements] = t
    return sorted(found.values(), key=lambda s: (s.order, s.elements))


def normal_subgroups(g: FiniteGroup) -> list:
    return [s for s in all_subgroups(g) if s.is_normal]


@dataclass(frozen=True)
class GroupSurjection:
    """A surjective homomorphism q: G -> Q with its kernel and fibers.

    ``reps`` holds the minimum-index preimage of each quotient element,
    which fixes deterministic coset representatives everywhere a single
    preimage has to be chosen.
    """

    group: FiniteGroup
    quotient: FiniteGroup
    mapping: tuple        # G element -> Q element
    kernel: Subgroup
    preimages: tuple      # per Q element, sorted tuple of G elements
    reps: tuple           # per Q element, min preimage

    @classmethod
    def from_quotient(cls, qg: QuotientGroup) -> "GroupSurjection":
        nq = qg.quotient.order
        pre = [[] for _ in range(nq)]
        for x in qg.parent.elements():
            pre[qg.projection[x]].append(x)
        return cls(qg.parent, qg.quotient, qg.projection, qg.kernel,
                   tuple(tuple(p) for p in pre),
                   tuple(p[0] for p in pre))

    @classmethod
    def from_subgroup(cls, g: FiniteGroup, h: Subgroup) -> "GroupSurjection":
        return cls.from_quotient(quotient(g, h))

    @classmethod
    def from_mapping(cls, g: FiniteGroup, q: FiniteGroup,
                     mapping) -> "GroupSurjection":
        mapping = tuple(mapping)
        for a in g.elements():
            for b in g.elements():
                if mapping[g.mul(a, b)] != q.mul(mapping[a], mapping[b]):
                    raise NotAGroup(
                        f"mapping is not a homomorphism at ({a},{b})")
        if set(mapping) != set(q.elements()):
            raise NotAGroup("mapping is not surjective")
        pre = [[] for _ in range(q.order)]
        for x in g.elements():
            pre[mapping[x]].append(x)
        kernel = subgroup_from_elements(g, pre[q.identity])
        return cls(g, q, mapping, kernel,
                   tuple(tuple(p) for p in pre),
                   tuple(p[0] for p in pre))

    @classmethod
    def onto_left_factor(cls, g: FiniteGroup) -> "GroupSurjection":
        ps = g.product_structure
        return cls.from_mapping(g, ps.left, ps.proj_left)

    @classmethod
    def onto_right_factor(cls, g: FiniteGroup) -> "GroupSurjection":
        ps = g.product_structure
        return cls.from_mapping(g, ps.right, ps.proj_right)


# -- named groups and the JSON description format ---------------------


def _cyclic(n: int) -> FiniteGroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, name=f"C{n}", _validated=True)


def _quaternion8() -> FiniteGroup:
    # Units +-1,+-i,+-j,+-k encoded as axis + 4*(sign<0), axes 1,i,j,k.
    def mul(a, b):
        sa, xa = divmod(a, 4)
        sb, xb = divmod(b, 4)
        sign = (sa + sb) % 2
        if xa == 0:
            x = xb
        elif xb == 0:
            x = xa
        elif xa == xb:
            x, sign = 0, (sign + 1) % 2
        else:
            # i*j=k, j*k=i, k*i=j, reversed order flips the sign
            x = ({1, 2, 3} - {xa, xb}).pop()
            if (xa, xb) not in ((1, 2), (2, 3), (3, 1)):
                sign = (sign + 1) % 2
        return x + 4 * sign

    table = [[mul(a, b) for b in range(8)] for a in range(8)]
    return FiniteGroup(table, name="Q8", _validated=True)


def _builtin(name: str) -> FiniteGroup:
    if name.startswith("C") and name[1:].isdigit():
        n = int(name[1:])
        if not 1 <= n <= 64:
            raise NotAGroup(f"cyclic order {n} outside supported range 1..64")
        return _cyclic(n)
    if name == "V4":
        return direct_product(_cyclic(2), _cyclic(2), name="V4")
    if name == "S3":
        return from_permutations(3, [(1, 2, 0), (1, 0, 2)], name="S3")
    if name == "D4":
        return from_permutations(4, [(1, 2, 3, 0), (3, 2, 1, 0)], name="D4")
    if name == "Q8":
        return _quaternion8()
    if name == "A4":
        return from_permutations(4, [(1, 2, 0, 3), (0, 2, 3, 1)], name="A4")
    raise NotAGroup(f"unknown group name {name!r}")


def named_group(name: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Resolve a built-in name.  Factors joined by 'x' build direct
    products left to right: 'V4xC2', 'C2xC2xC2'.

    >>> named_group("S3").order
    6
    >>> named_group("V4xC2").exponent()
    2
    """
    parts = name.split("x")
    g = _builtin(parts[0])
    for part in parts[1:]:
        g = direct_product(g, _builtin(part), order_cap=order_cap)
    g.name = name
    return g


def group_from_json(obj, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Build a group from the documented JSON description format.

    {"kind": "named",   "name": "V4"}
    {"kind": "cayley",  "table": [[0,1],[1,0]]}
    {"kind": "perm",    "degree": 3, "generators": [[1,2,0],[1,0,2]]}
    {"kind": "product", "left": {...}, "right": {...}}
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj.get("kind")
    if kind == "named":
        return named_group(obj["name"], order_cap=order_cap)
    if kind == "cayley":
        return from_cayley_table(obj["table"])
    if kind == "perm":
        return from_permutations(obj["degree"], obj["generators"],
                                 order_cap=order_cap)
    if kind == "product":
        return direct_product(group_from_json(obj["left"], order_cap),
                              group_from_json(obj["right"], order_cap),
                              order_cap=order_cap)
    raise NotAGroup(f"unknown group description kind {kind!r}")
