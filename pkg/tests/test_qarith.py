"""Places of Q, Hilbert symbols, multiquadratic decomposition data."""

import random
from fractions import Fraction

import pytest

from multinorm.qarith import (
    PlaceOfQ,
    QuadraticTuple,
    critical_places,
    factorize,
    hilbert_product,
    hilbert_symbol,
    is_square_qp,
    local_norm_product_certificate,
    multiquadratic_decomposition,
    multiquadratic_galois_group,
    phi_value,
    phi_witness,
    sha_of_multiquadratic,
    triple_failure_report,
)

INF = PlaceOfQ.infinite()


def P(p):
    return PlaceOfQ.finite(p)


def _random_nonzero_rational(rng, bound):
    num = 0
    while num == 0:
        num = rng.randint(-bound, bound)
    den = rng.randint(1, bound)
    return Fraction(num, den)


# -- local squares -------------------------------------------------------


def test_square_examples():
    assert is_square_qp(4, P(7))
    assert is_square_qp(17, P(13))         # 17 = 4 mod 13 = 2^2
    assert not is_square_qp(5, P(2))       # 5 mod 8 != 1
    assert is_square_qp(17, P(2))          # 17 = 1 mod 8
    assert not is_square_qp(-1, INF)
    assert is_square_qp(Fraction(9, 4), P(5))
    assert not is_square_qp(7, P(7))


def test_rational_squares_are_everywhere_square():
    rng = random.Random(0)
    for _ in range(50):
        x = _random_nonzero_rational(rng, 40) ** 2
        for v in [INF, P(2), P(3), P(5), P(13)]:
            assert is_square_qp(x, v)


# -- Hilbert symbols -------------------------------------------------------


def test_symbol_examples():
    assert hilbert_symbol(-1, -1, INF) == -1
    assert hilbert_symbol(2, 5, P(5)) == -1
    for v in [P(2), P(13), P(17), INF]:
        assert hilbert_symbol(13, 17, v) == 1
    assert hilbert_symbol(-1, -1, P(2)) == -1
    assert hilbert_symbol(2, 7, P(7)) == 1   # 2 = 9 mod 7 is a square


def test_symbol_symmetric_and_bimultiplicative():
    rng = random.Random(4)
    places = [INF, P(2), P(3), P(5), P(7), P(13)]
    for _ in range(200):
        a = _random_nonzero_rational(rng, 50)
        b = _random_nonzero_rational(rng, 50)
        c = _random_nonzero_rational(rng, 50)
        v = rng.choice(places)
        assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
        assert hilbert_symbol(a * c, b, v) == \
            hilbert_symbol(a, b, v) * hilbert_symbol(c, b, v)


def test_norm_values_have_trivial_symbol():
    # x = u^2 - b w^2 is a norm from Q_v(sqrt b), so (x, b)_v = 1
    rng = random.Random(8)
    places = [INF, P(2), P(3), P(5), P(7), P(11), P(17)]
    for _ in range(200):
        b = 0
        while b == 0 or is_square_qp(abs(b), INF) and int(abs(b) ** 0.5) ** 2 == abs(b):
            b = rng.randint(-30, 30)
        u, w = rng.randint(-20, 20), rng.randint(-20, 20)
        x = u * u - b * w * w
        if x == 0:
            continue
        for v in places:
            assert hilbert_symbol(x, b, v) == 1, (x, b, str(v))


def test_reciprocity_fuzz_500():
    rng = random.Random(20260808)
    for _ in range(500):
        a = _random_nonzero_rational(rng, 10000)
        b = _random_nonzero_rational(rng, 10000)
        assert hilbert_product(a, b) == 1, (a, b)


# -- multiquadratic decomposition -------------------------------------------


def test_tuple_validation():
    with pytest.raises(ValueError):
        QuadraticTuple((4,))           # not squarefree
    with pytest.raises(ValueError):
        QuadraticTuple((2, 3, 6))      # dependent mod squares
    QuadraticTuple((13, 17))


def test_decomposition_examples():
    t = QuadraticTuple((13, 17))
    assert multiquadratic_decomposition(t, P(13)).subgroup.order == 2
    assert multiquadratic_decomposition(t, INF).subgroup.order == 1
    t2 = QuadraticTuple((3, 5))
    assert multiquadratic_decomposition(t2, P(2)).subgroup.order == 4
    ta, tb = QuadraticTuple((2, 5)), QuadraticTuple((-1, 3))
    assert multiquadratic_decomposition(ta, INF).subgroup.order == 1
    assert multiquadratic_decomposition(tb, INF).subgroup.order == 2


def test_unramified_places_cyclic():
    rng = random.Random(5)
    t = QuadraticTuple((13, 17))
    for p in (3, 7, 11, 19, 23, 29):
        dec = multiquadratic_decomposition(t, P(p))
        assert dec.subgroup.order <= 2, p
        # and the subgroup is cyclic by construction in an order-4 group


def test_critical_places():
    t = QuadraticTuple((13, 17))
    assert [str(v) for v in critical_places(t)] == ["inf", "2", "13", "17"]
    assert [str(v) for v in critical_places(QuadraticTuple((3, 5)))] == \
        ["inf", "2", "3", "5"]
    assert [str(v) for v in critical_places(QuadraticTuple((5, 29)))] == \
        ["inf", "2", "5", "29"]


def test_sha_of_multiquadratic_key_values():
    assert sha_of_multiquadratic(
        QuadraticTuple((13, 17))).kernel_invariant_factors == [2]
    assert sha_of_multiquadratic(
        QuadraticTuple((5, 29))).kernel_invariant_factors == [2]
    assert sha_of_multiquadratic(
        QuadraticTuple((3, 5))).kernel_invariant_factors == []
    for a in (5, -3, 13):
        assert sha_of_multiquadratic(
            QuadraticTuple((a,))).kernel_invariant_factors == []


def test_sha_trivial_iff_some_place_has_full_decomposition():
    seen_nontrivial = seen_trivial = False
    squarefree = [n for n in range(2, 51) if
                  all(e == 1 for e in factorize(n).values())]
    for a in squarefree:
        for b in squarefree:
            if a >= b:
                continue
            try:
                t = QuadraticTuple((a, b))
            except ValueError:
                continue
            full = any(
                multiquadratic_decomposition(t, v).subgroup.order == 4
                for v in critical_places(t))
            sha = sha_of_multiquadratic(t).kernel_invariant_factors
            assert (sha == []) == full, (a, b, sha, full)
            seen_nontrivial |= bool(sha)
            seen_trivial |= not sha
    assert seen_nontrivial and seen_trivial


# -- the biquadratic character ------------------------------------------------


def test_phi_kills_squares():
    rng = random.Random(2)
    for _ in range(30):
        x = rng.randint(1, 60) ** 2
        assert phi_value(13, 17, x) == 1


def test_phi_multiplicative():
    rng = random.Random(3)
    for _ in range(40):
        x = rng.randint(-100, 100) or 1
        y = rng.randint(-100, 100) or 1
        assert phi_value(13, 17, x * y) == \
            phi_value(13, 17, x) * phi_value(13, 17, y)


def test_phi_witness_exists():
    w = phi_witness(13, 17, 200)
    assert w is not None and abs(w) <= 200
    assert phi_value(13, 17, w) == -1


# -- the triple failure report -------------------------------------------------


def test_local_norm_products_full_at_critical_places():
    for v in [INF, P(2), P(13), P(17)]:
        cert = local_norm_product_certificate((13, 17, 221), v)
        assert cert["full"], cert


def test_triple_failure_report():
    rep = triple_failure_report(seed=20260808, samples=100)
    assert rep["multinorm_fails"]
    assert rep["witness"] is not None and abs(rep["witness"]) <= 200
    assert rep["witness_chi"] == -1
    assert all(c["full"] for c in rep["local_norm_product_full"])
    for check in rep["character_kills_norms"]:
        assert check["all_killed"] and check["samples"] >= 100
    assert rep["norm_product_index_lower_bound"] == 2


def test_triple_report_deterministic():
    a = triple_failure_report(seed=11, samples=25)
    b = triple_failure_report(seed=11, samples=25)
    assert a == b


def test_galois_group_packing_matches_products():
    # concatenated tuples give the packed product of the factor groups
    t12 = QuadraticTuple((13, 17))
    t34 = QuadraticTuple((5, 29))
    tall = QuadraticTuple((13, 17, 5, 29))
    from multinorm.groups import direct_product
    g = direct_product(multiquadratic_galois_group(t12),
                       multiquadratic_galois_group(t34))
    assert multiquadratic_galois_group(tall).cayley == g.cayley
