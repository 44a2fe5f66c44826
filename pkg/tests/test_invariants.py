import pytest

from modp.exactalg import PolyRing
from modp.groupdata import GroupSpec, fundamental_degrees
from modp.invariants import (
    ClaimedPresentation,
    brute_invariant_dimension,
    brute_invariant_dimension_stacked,
    classical_action,
    classical_claimed,
    eta,
    lemma_inv2_check,
    mu,
    nakajima_claimed,
    presentation_hilbert,
    spin_action,
    spin_claimed,
    symmetric_quotient_action,
    verify_presentation,
    _degree_products,
)


def test_spin7_generator_counts():
    a = spin_action(7)
    trans = [n for n, _ in a.generators if n.startswith("s(")]
    eps = [n for n, _ in a.generators if n.startswith("eps")]
    assert len(trans) == 3 and len(eps) == 3


def test_spin12_eps_pair_count():
    a = spin_action(12)
    assert sum(1 for n, _ in a.generators if "*" in n) == 5


def test_spin_action_preconditions():
    with pytest.raises(ValueError):
        spin_action(11, p=3)
    with pytest.raises(ValueError):
        spin_action(5)


def test_generators_are_involutions():
    for action in (spin_action(7), spin_action(8), classical_action("B", 2, 3),
                   classical_action("D", 3, 2), symmetric_quotient_action(3)):
        for name, h in action.generators:
            for v in action.ring.names:
                x = action.ring.var(v)
                assert h(h(x)) == x, (action.label, name, v)


def test_eps_involution_on_A():
    a = spin_action(7)
    eps1 = dict(a.generators)["eps1"]
    A = a.ring.var("A")
    assert eps1(eps1(A)) == A


def test_eta_values_and_degrees():
    a = spin_action(7)
    ring = a.ring
    assert eta(a, 1) == ring.poly("A^2 + A*x1")
    a9 = spin_action(9)
    assert eta(a9, 3).degree() == 8
    eps1 = dict(a.generators)["eps1"]
    assert eps1(eta(a, 1)) == eta(a, 1)
    with pytest.raises(ValueError):
        eta(a, 3)  # r - 1 = 2 for Spin(7)


def test_eta_invariant_under_E_j():
    a = spin_action(11)
    gens = dict(a.generators)
    for j in range(1, 5):
        ej = eta(a, j)
        assert ej.degree() == 2 ** j
        for i in range(1, j + 1):
            assert gens[f"eps{i}"](ej) == ej


def test_mu_values_and_degrees():
    a = spin_action(12)
    assert mu(a, 1) == a.ring.var("A")
    assert mu(a, 4).degree() == 8
    gens = dict(a.generators)
    mu2 = mu(a, 2)
    assert mu2 == a.ring.var("A") * a.ring.poly("A + x1 + x2")
    assert gens["eps1*eps2"](mu2) == mu2
    for j in range(2, 7):
        mj = mu(a, j)
        assert mj.degree() == 2 ** (j - 1)
        for i in range(2, j + 1):
            assert gens[f"eps1*eps{i}"](mj) == mj
    with pytest.raises(ValueError):
        mu(a, 7)


def test_classical_action_examples():
    c3 = classical_action("C", 3, 2)
    for name, h in c3.generators:
        if name.startswith("eps"):
            assert h.is_identity_on(c3.ring.names), name
    b2 = classical_action("B", 2, 3)
    eps1 = dict(b2.generators)["eps1"]
    x1 = b2.ring.var("x1")
    assert eps1(x1) == 2 * x1
    d3 = classical_action("D", 3, 2)
    assert brute_invariant_dimension(d3, 1) == 1


def test_brute_dimension_basics():
    a = spin_action(7)
    assert brute_invariant_dimension(a, 0) == 1
    assert brute_invariant_dimension(a, 2) == 1
    b3 = classical_action("B", 3, 2)
    assert brute_invariant_dimension(b3, 3) == 3


def test_brute_dimension_guard():
    a = spin_action(7)
    with pytest.raises(ValueError, match="guard"):
        brute_invariant_dimension(a, 8, guard=10)


def test_incremental_matches_stacked():
    cases = [(spin_action(7), range(1, 7)),
             (spin_action(8), range(1, 6)),
             (classical_action("B", 2, 3), range(1, 6)),
             (classical_action("D", 3, 2), range(1, 5)),
             (symmetric_quotient_action(4), range(1, 6))]
    for action, degrees in cases:
        for d in degrees:
            assert brute_invariant_dimension(action, d) == \
                brute_invariant_dimension_stacked(action, d), (action.label, d)


def test_eps1_degree2_kernel_cross_check():
    # stacked (g-1) for eps_1 alone on the degree-2 component of F_2[x1,x2,A]
    a = spin_action(7).sub_action(["eps1"])
    dim = brute_invariant_dimension(a, 2)
    assert dim == brute_invariant_dimension_stacked(a, 2)
    # exhaustive over all vectors of the 6-dimensional component
    from modp.exactalg import f2_kernel_dimension_exhaustive
    from modp.invariants import _invariant_vectors_f2
    ring = a.ring
    basis = ring.monomials_of_degree(2)
    hom = a.generators[0][1]
    index = {m: i for i, m in enumerate(basis)}
    rows = {}
    for col, mono in enumerate(basis):
        from modp.exactalg import Poly
        w = 0
        for m in hom(Poly(ring, {mono: 1})).terms:
            w |= 1 << index[m]
        w ^= 1 << col
        while w:
            j = w.bit_length() - 1
            rows[j] = rows.get(j, 0) | (1 << col)
            w ^= 1 << j
    assert dim == f2_kernel_dimension_exhaustive(list(rows.values()), len(basis))


def test_E_subgroup_saturation():
    # -1 = eps_1...eps_r acts trivially, so E_{r-1} and E_r invariants agree
    a = spin_action(9)
    small = a.sub_action(["eps1", "eps2", "eps3"])
    full = a.sub_action(["eps1", "eps2", "eps3", "eps4"])
    for d in range(1, 9):
        assert brute_invariant_dimension(small, d) == brute_invariant_dimension(full, d)


def test_presentation_hilbert():
    a = spin_action(7)
    cp = spin_claimed(a, 7)
    assert presentation_hilbert(cp).coefficient(4) == 2
    empty = ClaimedPresentation([], [])
    assert presentation_hilbert(empty).coefficients(5) == [1, 0, 0, 0, 0, 0]
    a11 = spin_action(11)
    cp11 = spin_claimed(a11, 11)
    expected = len(_degree_products(cp11.degrees, 16))
    assert presentation_hilbert(cp11).coefficient(16) == expected
    cp_rel = ClaimedPresentation(["c2"], [cp.values[0]], relations=[cp.values[0]])
    with pytest.raises(ValueError, match="dim_degree"):
        presentation_hilbert(cp_rel)


def test_verify_spin7():
    a = spin_action(7)
    report = verify_presentation(a, spin_claimed(a, 7), 10)
    assert report.passed
    assert [r.degree for r in report.rows] == list(range(1, 11))


def test_verify_rejects_non_invariant_generator():
    a = spin_action(7)
    bad = ClaimedPresentation(["x1"], [a.ring.var("x1")])
    report = verify_presentation(a, bad, 4)
    assert not report.passed
    assert "x1" in report.failure and "s(" in report.failure


def test_verify_flags_wrong_but_invariant_claim():
    a = spin_action(7)
    good = spin_claimed(a, 7)
    undersized = ClaimedPresentation(["c2"], [good.values[0]])
    report = verify_presentation(a, undersized, 4)
    assert not report.passed
    bad_rows = [r for r in report.rows if not r.ok]
    assert bad_rows and bad_rows[0].degree == 3


def test_nakajima_small_ranks():
    for r in (2, 3, 4):
        action = symmetric_quotient_action(r)
        report = verify_presentation(action, nakajima_claimed(action), 8)
        assert report.passed, r
    assert nakajima_claimed(symmetric_quotient_action(2)).names == ["x1"]


def test_classical_claims_match_fundamental_degrees():
    for family, rank, p in (("B", 3, 2), ("C", 3, 2), ("B", 2, 3), ("D", 3, 3)):
        action = classical_action(family, rank, p)
        cp = classical_claimed(action, family, rank, p)
        report = verify_presentation(action, cp, 7)
        assert report.passed, (family, rank, p)
        if p != 2:
            assert sorted(cp.degrees) == fundamental_degrees(GroupSpec(family, rank))


def test_symplectic_char2_exception():
    # W(C_n) invariants mod 2 are the full symmetric functions, so their
    # generator degrees 1..n differ from the fundamental degrees 2,4,..,2n:
    # the characteristic-2 symplectic groups are the genuine exception.
    action = classical_action("C", 3, 2)
    cp = classical_claimed(action, "C", 3, 2)
    assert cp.degrees == [1, 2, 3]
    assert fundamental_degrees(GroupSpec("C", 3)) == [2, 4, 6]
    assert verify_presentation(action, cp, 7).passed


def test_lemma_inv2():
    ring = PolyRing(["y", "x"])
    y = ring.var("y")
    report = lemma_inv2_check(ring, y, "x", 6)
    assert report.passed
    with pytest.raises(ValueError, match="trivial"):
        lemma_inv2_check(ring, ring.zero(), "x", 4)
    with pytest.raises(ValueError):
        lemma_inv2_check(ring, ring.var("x"), "x", 4)


def test_lemma_inv2_pointwise():
    # (x+a)(x+a+a) = x(x+a) and x itself moves by a
    ring = PolyRing(["a", "x"])
    a, x = ring.gens()
    from modp.exactalg import SubstHom
    h = SubstHom(ring, ring, {"a": a, "x": x + a})
    u = x * (x + a)
    assert h(u) == u
    assert h(x) - x == a
