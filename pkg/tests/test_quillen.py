import random

import pytest

from modp.quillen import (
    SWRing,
    binom_mod2,
    h_value,
    quillen_dim,
    quillen_presentation,
    spin11_compare,
    spin11_explicit_presentation,
    spin11_lower_bound_ring,
    theta_sequence,
)


def test_binom_mod2():
    assert binom_mod2(-1, 0) == 1
    assert binom_mod2(4, 2) == 0
    assert binom_mod2(5, 2) == 0
    assert binom_mod2(3, 1) == 1
    rows = [[binom_mod2(m, k) for k in range(m + 1)] for m in range(8)]
    # Pascal mod 2
    for m in range(1, 8):
        for k in range(1, m):
            assert rows[m][k] == (rows[m - 1][k - 1] + rows[m - 1][k]) % 2


def test_wu_formula_small_cases():
    sw = SWRing(9, so=False)
    assert sw.sq(1, sw.w(2)) == sw.w(3) + sw.w(1) * sw.w(2)
    assert sw.sq(0, sw.w(5)) == sw.w(5)
    assert sw.sq(2, sw.w(3)) == sw.w(5) + sw.w(1) * sw.w(4) + sw.w(2) * sw.w(3)


def test_unstable_axioms():
    sw = SWRing(8, so=False)
    rng = random.Random(3)
    for _ in range(25):
        d = rng.randrange(2, 9)
        terms = {}
        for mono in sw.ring.monomials_of_degree(d):
            if rng.random() < 0.4:
                terms[mono] = 1
        f = sw.ring.from_terms(terms)
        if f.is_zero():
            continue
        assert sw.sq(0, f) == f
        assert sw.sq(d, f) == f * f
        assert sw.sq(d + 1, f).is_zero()
        assert sw.sq(d + 3, f).is_zero()


def test_cartan_formula_randomized():
    sw = SWRing(7, so=False)
    rng = random.Random(5)
    for _ in range(15):
        da, db = rng.randrange(1, 5), rng.randrange(1, 5)
        fa = sw.ring.from_terms({m: 1 for m in sw.ring.monomials_of_degree(da)
                                 if rng.random() < 0.5})
        fb = sw.ring.from_terms({m: 1 for m in sw.ring.monomials_of_degree(db)
                                 if rng.random() < 0.5})
        if fa.is_zero() or fb.is_zero():
            continue
        for i in range(0, da + db + 1):
            total = sw.ring.zero()
            for a in range(i + 1):
                total = total + sw.sq(a, fa) * sw.sq(i - a, fb)
            assert sw.sq(i, fa * fb) == total, (i, da, db)


def test_sq_rejects_inhomogeneous():
    sw = SWRing(5)
    with pytest.raises(ValueError, match="homogeneous"):
        sw.sq(1, sw.w(2) + sw.w(3))


def test_h_table():
    assert h_value(11) == 6
    assert h_value(10) == 5
    assert h_value(16) == 7
    assert h_value(9) == 4
    assert h_value(3) == 2


def test_theta_sequence():
    thetas = theta_sequence(11)
    assert len(thetas) == 6
    assert [t.degree() for t in thetas] == [2, 3, 5, 9, 17, 33]
    sw = SWRing(11, so=True)
    assert thetas[1] == sw.w(3)  # Sq^1 w_2 with w_1 = 0
    assert thetas[2] == sw.w(5) + sw.w(2) * sw.w(3)
    assert theta_sequence(12)[4].degree() == 17


def test_quillen_presentation_degrees():
    qp = quillen_presentation(11)
    assert qp.extra_degree == 64
    assert sorted(qp.series().denominator) == sorted(list(range(2, 12)) + [64])
    qp10 = quillen_presentation(10)
    assert qp10.extra_degree == 32


def test_quillen_dims():
    assert quillen_dim(11, 0) == 1
    assert quillen_dim(11, 2) == 0  # w_2 is killed by theta_0
    assert quillen_dim(11, 32) == 26


def test_quillen_regularity_to_34():
    for n in (10, 11):
        for d in range(35):
            quillen_dim(n, d)  # raises on series / linear-algebra mismatch


def test_spin11_lower_bound_ring_dimensions():
    low = spin11_lower_bound_ring()
    series = low.series()
    for d in range(0, 34):
        assert low.dim_degree(d) == series.coefficient(d)


def test_explicit_presentation_matches_quillen_to_34():
    explicit = spin11_explicit_presentation()
    for d in range(35):
        assert explicit.dim_degree(d) == quillen_dim(11, d), d


def test_spin11_compare():
    rep = spin11_compare()
    assert rep.D_top == rep.D_low == rep.D_explicit == 26
    assert rep.D_dR_lower == rep.D_low + 1
    assert rep.D_dR_lower > rep.D_top
    assert "strict inequality" in rep.verdict


def test_extra_generator_contributes_one_class_at_weight_16():
    # the weight-16 invariant generator adds exactly one dimension on top
    # of the symmetric classes, matching the +1 in the degree-32 report
    from modp.groupdata import Series
    with_top = Series([1], (2, 3, 4, 5, 16))
    without = Series([1], (2, 3, 4, 5))
    assert with_top.coefficient(16) == without.coefficient(16) + 1
