"""Group construction, subgroups, quotients, products."""

from itertools import permutations

import pytest

from multinorm.errors import InvalidSubgroup, NotAGroup, NotNormal, TooLarge
from multinorm.groups import (
    direct_product,
    from_cayley_table,
    from_permutations,
    group_from_json,
    named_group,
    normal_subgroups,
    quotient,
    subgroup_from_elements,
    subgroup_generated,
    trivial_subgroup,
)


def test_z2_table():
    g = from_cayley_table([[0, 1], [1, 0]])
    assert g.order == 2 and g.identity == 0 and g.inverse == (0, 1)


def test_no_inverse_rejected():
    with pytest.raises(NotAGroup):
        from_cayley_table([[0, 1], [1, 1]])


def test_associativity_witness():
    # a latin square with identity that is not associative
    table = [[0, 1, 2, 3, 4],
             [1, 0, 3, 4, 2],
             [2, 4, 0, 1, 3],
             [3, 2, 4, 0, 1],
             [4, 3, 1, 2, 0]]
    with pytest.raises(NotAGroup) as exc:
        from_cayley_table(table)
    assert exc.value.witness is not None


def test_s3_from_enumerated_table():
    # oracle: enumerate the permutations of 3 letters and compose them
    perms = sorted(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(3))] for q in perms]
             for p in perms]
    g = from_cayley_table(table)
    assert g.order == 6
    assert not g.is_abelian()


def test_from_permutations_cyclic():
    g = from_permutations(3, [(1, 2, 0)])
    assert g.order == 3
    assert g.is_abelian()


def test_from_permutations_s3():
    g = from_permutations(3, [(1, 2, 0), (1, 0, 2)])
    assert g.order == 6 and not g.is_abelian()


def test_from_permutations_a6():
    g = from_permutations(6, [(1, 2, 0, 3, 4, 5), (0, 2, 3, 4, 5, 1)])
    assert g.order == 360


def test_order_cap():
    with pytest.raises(TooLarge):
        from_permutations(6, [(1, 2, 0, 3, 4, 5), (0, 2, 3, 4, 5, 1)],
                          order_cap=100)


def test_direct_product_klein():
    g = direct_product(named_group("C2"), named_group("C2"))
    assert g.order == 4
    assert g.exponent() == 2


def test_product_projection_section():
    g1, g2 = named_group("S3"), named_group("C4")
    g = direct_product(g1, g2)
    ps = g.product_structure
    for x in g1.elements():
        assert ps.proj_left[ps.embed_left[x]] == x
    for y in g2.elements():
        assert ps.proj_right[ps.embed_right[y]] == y
    # embeddings commute elementwise
    for x in g1.elements():
        for y in g2.elements():
            a, b = ps.embed_left[x], ps.embed_right[y]
            assert g.mul(a, b) == g.mul(b, a)
    # projections are homomorphisms
    for a in g.elements():
        for b in g.elements():
            assert ps.proj_left[g.mul(a, b)] == \
                g1.mul(ps.proj_left[a], ps.proj_left[b])


def test_v4xv4():
    g = named_group("V4xV4")
    assert g.order == 16 and g.exponent() == 2


def test_subgroup_identity_seed():
    g = named_group("V4")
    assert subgroup_generated(g, [g.identity]).order == 1


def test_subgroup_of_v4():
    g = named_group("V4")
    s = subgroup_generated(g, [1])
    assert s.order == 2 and s.is_normal


def test_subgroup_idempotent_monotone():
    g = named_group("D4")
    s = subgroup_generated(g, [2])
    again = subgroup_generated(g, list(s.elements))
    assert again.elements == s.elements
    bigger = subgroup_generated(g, list(s.elements) + [1])
    assert set(s.elements) <= set(bigger.elements)


def test_subgroup_from_elements_validates():
    g = named_group("C4")
    with pytest.raises(InvalidSubgroup):
        subgroup_from_elements(g, [0, 1])


def test_quotient_by_full_group():
    g = named_group("S3")
    q = quotient(g, subgroup_generated(g, list(g.elements())))
    assert q.quotient.order == 1


def test_quotient_by_trivial():
    g = named_group("S3")
    q = quotient(g, trivial_subgroup(g))
    assert q.quotient.order == 6
    assert list(q.projection) == list(g.elements())


def test_quotient_c2c4_mod_c2():
    g = named_group("C2xC4")
    h = subgroup_generated(g, [4])   # the C2 factor: (1, 0) packed as 4
    q = quotient(g, h)
    assert q.quotient.order == 4
    assert q.quotient.exponent() == 4   # cyclic of order 4
    # projection is a homomorphism
    for a in g.elements():
        for b in g.elements():
            assert q.projection[g.mul(a, b)] == \
                q.quotient.mul(q.projection[a], q.projection[b])
    # kernel is exactly h
    ker = [x for x in g.elements()
           if q.projection[x] == q.quotient.identity]
    assert tuple(ker) == h.elements


def test_quotient_requires_normal():
    g = named_group("S3")
    t = next(x for x in g.elements() if g.element_order(x) == 2)
    h = subgroup_generated(g, [t])   # order 2, generated by a transposition
    assert not h.is_normal
    with pytest.raises(NotNormal):
        quotient(g, h)


def test_normal_subgroup_lists():
    assert [s.order for s in normal_subgroups(named_group("S3"))] == [1, 3, 6]
    assert [s.order for s in normal_subgroups(named_group("Q8"))] == \
        [1, 2, 4, 4, 4, 8]


def test_named_groups():
    for name, order in [("C2", 2), ("C8", 8), ("V4", 4), ("S3", 6),
                        ("D4", 8), ("Q8", 8), ("A4", 12), ("V4xC2", 8)]:
        assert named_group(name).order == order


def test_json_group_format():
    g = group_from_json({"kind": "named", "name": "V4"})
    assert g.order == 4
    g = group_from_json({"kind": "cayley", "table": [[0, 1], [1, 0]]})
    assert g.order == 2
    g = group_from_json({"kind": "perm", "degree": 3,
                         "generators": [[1, 2, 0], [1, 0, 2]]})
    assert g.order == 6
    g = group_from_json({"kind": "product",
                         "left": {"kind": "named", "name": "V4"},
                         "right": {"kind": "named", "name": "C2"}})
    assert g.order == 8
