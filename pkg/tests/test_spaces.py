import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import betainc

from torus_mreg.fourier import TrigPolynomial, grid_points, synthesize
from torus_mreg.spaces import (
    LittlewoodPaley,
    Lp,
    SmoothnessSpace,
    SpaceDescriptor,
    WeightedLp,
    besov_norm,
    derivative_equivalence_ratio,
    derivative_ratio_bracket,
    dyadic_block,
    make_littlewood_paley,
    partial_sum,
    phi_norm,
    triebel_lizorkin_norm,
)
from torus_mreg.weights import Weight

LP = LittlewoodPaley(4)


def psi_oracle(t, J=4):
    """Plateau function via the regularized incomplete beta function."""
    a = np.abs(np.asarray(t, dtype=float))
    x = np.clip(a - 1.0, 0.0, 1.0)
    return 1.0 - betainc(J + 1, J + 1, x)


def psi_j_oracle(t, j, J=4):
    t = np.asarray(t, dtype=float)
    if j == 0:
        return psi_oracle(t, J)
    return psi_oracle(2.0 ** -j * t, J) - psi_oracle(2.0 ** (1 - j) * t, J)


def besov_mode_closed_form(k, x, s, q, p, J=4):
    js = np.arange(0, max(2, int(math.log2(max(abs(k), 1))) + 3))
    vals = np.array([2.0 ** (s * j) * psi_j_oracle(k, j, J) for j in js])
    lq = vals.max() if math.isinf(q) else np.sum(vals ** q) ** (1 / q)
    mass = 1.0 if math.isinf(p) else (2 * math.pi) ** (1 / p)
    return lq * mass * np.linalg.norm(x)


def direct_besov(f, s, q, p, J=4, G=256):
    """Block-by-block summation with explicit loops over j and k."""
    t = grid_points(G)
    total = []
    j = 0
    while True:
        weights = psi_j_oracle(f.frequencies, j, J)
        if j > 0 and 2 ** (j - 1) >= f.order + 1 and not np.any(weights):
            break
        vals = np.zeros((G, f.dim), dtype=complex)
        for k, wk, c in zip(f.frequencies, weights, f.coeffs):
            if wk:
                vals += np.exp(1j * k * t)[:, None] * (wk * c)
        pn = np.linalg.norm(vals, axis=1)
        total.append(2.0 ** (s * j) * (2 * math.pi / G * np.sum(pn ** p)) ** (1 / p))
        j += 1
    total = np.array(total)
    return total.max() if math.isinf(q) else np.sum(total ** q) ** (1 / q)


def test_phi_norm_examples():
    x = np.array([3.0, 4.0])
    for p in (1.0, 2.0, 3.5):
        assert phi_norm(TrigPolynomial.mode(0, x), Lp(p), 64) == pytest.approx((2 * math.pi) ** (1 / p) * 5, rel=1e-14)
    assert phi_norm(TrigPolynomial.mode(0, x), Lp(math.inf), 64) == pytest.approx(5)
    assert phi_norm(TrigPolynomial.zeros(1, 3), Lp(2), 64) == 0
    assert phi_norm(TrigPolynomial.mode(1, [1.0]), Lp(2), 64) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-14)


def test_descriptor_validation():
    with pytest.raises(ValueError):
        Lp(0.5)
    with pytest.raises(ValueError):
        WeightedLp(1.0, Weight.constant(1.0, 8))
    with pytest.raises(ValueError):
        SpaceDescriptor("Orlicz", 2.0)
    with pytest.raises(ValueError):
        Lp(2).norm_of_values(np.zeros(0))


def test_dual():
    assert Lp(3).dual().p == pytest.approx(1.5)
    assert Lp(1).dual().p == math.inf
    w = Weight.power_law(0.5, 64)
    d = WeightedLp(3.0, w).dual()
    assert d.p == pytest.approx(1.5)
    np.testing.assert_allclose(d.weight.samples, w.samples ** (1 - 1.5))


def test_descriptor_json():
    for sp in (Lp(2), Lp(math.inf), WeightedLp(2.0, Weight.power_law(0.5, 32))):
        back = SpaceDescriptor.from_json(sp.to_json())
        assert back.kind == sp.kind and back.p == sp.p
    assert Lp(math.inf).to_json()["p"] == "inf"
    assert SpaceDescriptor.from_json("lp2").p == 2.0
    with pytest.raises(ValueError):
        SpaceDescriptor.from_json("l2")


samples = st.lists(st.floats(-10, 10), min_size=8, max_size=8).map(np.array)
spaces = st.sampled_from([Lp(1), Lp(2), Lp(4.5), Lp(math.inf),
                          WeightedLp(2.0, Weight.power_law(0.5, 8)),
                          WeightedLp(3.0, Weight.power_law(-0.3, 8))])


@given(samples, samples, st.floats(-5, 5), spaces)
def test_norm_axioms(f, g, c, sp):
    nf, ng = sp.norm_of_values(np.abs(f)), sp.norm_of_values(np.abs(g))
    assert sp.norm_of_values(np.abs(c * f)) == pytest.approx(abs(c) * nf, rel=1e-12, abs=1e-300)
    assert sp.norm_of_values(np.abs(f + g)) <= nf + ng + 1e-12
    big = np.maximum(np.abs(f), np.abs(g))
    assert sp.norm_of_values(np.abs(f)) <= sp.norm_of_values(big) + 1e-12


def test_littlewood_paley_invariants():
    t = np.linspace(-40, 40, 10_001)
    psi = LP.psi(t)
    assert np.all(np.abs(psi[np.abs(t) <= 1] - 1) <= 1e-14)
    assert np.all(np.abs(psi[np.abs(t) >= 2]) <= 1e-14)
    assert np.all((psi >= -1e-14) & (psi <= 1 + 1e-14))
    np.testing.assert_allclose(psi, psi_oracle(t), atol=1e-12)
    for N in range(0, 5):
        tele = sum(LP.psi_j(t, j) for j in range(N + 1))
        np.testing.assert_allclose(tele, LP.psi(2.0 ** -N * t), atol=1e-14)
    assert LP.psi(0.5) == 1 and LP.psi(3.0) == 0
    with pytest.raises(ValueError):
        make_littlewood_paley(1)


def test_psi_is_smooth_at_the_ends():
    for r in range(1, 5):
        for edge in (1.0, 2.0):
            assert abs(LP.psi(np.array([edge]), r)[0]) <= 1e-10


def test_chi_covers_block():
    t = np.linspace(-70, 70, 5001)
    for j in range(0, 6):
        live = LP.psi_j(t, j) != 0
        assert np.all(np.abs(LP.chi_j(t[live], j) - 1) <= 1e-14)


def test_dyadic_blocks():
    x = np.array([1.0, 2.0])
    assert dyadic_block(TrigPolynomial.mode(0, x), 0, LP) == TrigPolynomial.mode(0, x)
    assert np.all(dyadic_block(TrigPolynomial.mode(3, x), 5, LP).coeffs == 0)
    with pytest.raises(ValueError):
        dyadic_block(TrigPolynomial.mode(3, x), -1, LP)
    f = TrigPolynomial.random(2, 20, np.random.default_rng(0))
    for N in range(4):
        tele = sum((dyadic_block(f, j, LP) for j in range(1, N + 1)), dyadic_block(f, 0, LP))
        np.testing.assert_allclose(tele.coeffs, partial_sum(f, N, LP).coeffs, atol=1e-14)


@pytest.mark.parametrize("s", [-1.0, 0.0, 0.5, 2.0])
@pytest.mark.parametrize("q", [1.0, 2.0, math.inf])
@pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
@pytest.mark.parametrize("k", [0, 1, -3, 7, 40])
def test_besov_single_mode_closed_form(s, q, p, k):
    x = np.array([1.0, -2.0j])
    f = TrigPolynomial.mode(k, x)
    got = besov_norm(f, SmoothnessSpace("Besov", s, q, Lp(p), LP))
    assert got == pytest.approx(besov_mode_closed_form(k, x, s, q, p), rel=1e-9)


def test_besov_zero():
    assert besov_norm(TrigPolynomial.zeros(2, 4), SmoothnessSpace("Besov", 1, 2, Lp(2), LP)) == 0


@pytest.mark.parametrize("s,q,p", [(0.5, 2.0, 2.0), (1.0, 1.0, 3.0), (-0.5, math.inf, 1.5)])
def test_besov_matches_direct_summation(s, q, p):
    f = TrigPolynomial.random(2, 32, np.random.default_rng(4))
    got = besov_norm(f, SmoothnessSpace("Besov", s, q, Lp(p), LP), G=256)
    assert got == pytest.approx(direct_besov(f, s, q, p, G=256), rel=1e-9)


@pytest.mark.parametrize("q", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("s", [0.0, 0.7])
def test_triebel_lizorkin_equals_besov_on_lq(q, s):
    f = TrigPolynomial.random(2, 24, np.random.default_rng(5))
    B = besov_norm(f, SmoothnessSpace("Besov", s, q, Lp(q), LP))
    F = triebel_lizorkin_norm(f, SmoothnessSpace("TriebelLizorkin", s, q, Lp(q), LP))
    assert F == pytest.approx(B, rel=1e-9)


def test_triebel_lizorkin_equals_besov_on_weighted_lq():
    w = Weight.power_law(0.4, 128)
    f = TrigPolynomial.random(1, 24, np.random.default_rng(6))
    B = besov_norm(f, SmoothnessSpace("Besov", 0.5, 2.0, WeightedLp(2.0, w), LP))
    F = triebel_lizorkin_norm(f, SmoothnessSpace("TriebelLizorkin", 0.5, 2.0, WeightedLp(2.0, w), LP))
    assert F == pytest.approx(B, rel=1e-9)


def test_smoothness_space_validation():
    with pytest.raises(ValueError):
        SmoothnessSpace("TriebelLizorkin", 0, 1.0, Lp(2), LP)
    with pytest.raises(ValueError):
        SmoothnessSpace("TriebelLizorkin", 0, math.inf, Lp(2), LP)
    with pytest.raises(ValueError):
        SmoothnessSpace("Holder", 0, 2, Lp(2), LP)


@pytest.mark.parametrize("K", [5, 16, 33])
def test_partial_sums_converge_exactly(K):
    f = TrigPolynomial.random(1, K, np.random.default_rng(K))
    sp = SmoothnessSpace("Besov", 1.0, 2.0, Lp(2), LP)
    N = 0
    while 2 ** (N - 1) <= K:
        N += 1
    # psi(2^-N k) = 1 for |k| <= 2^N, so the remainder vanishes identically
    assert besov_norm(f - partial_sum(f, N, LP), sp) == 0.0
    assert besov_norm(f - partial_sum(f, 1, LP), sp) > 0


def test_derivative_ratio_examples():
    sp = SmoothnessSpace("Besov", 0.5, 2.0, Lp(2), LP)
    x = np.array([1.0])
    r1 = derivative_equivalence_ratio(TrigPolynomial.mode(1, x), sp)
    expect = besov_mode_closed_form(1, x, -0.5, 2, 2) / besov_mode_closed_form(1, x, 0.5, 2, 2)
    assert r1 == pytest.approx(expect, rel=1e-12)
    r2 = derivative_equivalence_ratio(TrigPolynomial.mode(2, x), sp)
    r_2 = derivative_equivalence_ratio(TrigPolynomial.mode(-2, x), sp)
    assert r2 == pytest.approx(r_2, rel=1e-14)
    with pytest.raises(ValueError):
        derivative_equivalence_ratio(TrigPolynomial.zeros(1, 2), sp)
    with pytest.raises(ValueError):
        derivative_equivalence_ratio(TrigPolynomial.mode(0, x), sp)


def test_derivative_ratio_bracket_over_random_inputs():
    sp = SmoothnessSpace("Besov", 0.5, 2.0, Lp(2), LP)
    rng = np.random.default_rng(7)
    ratios = [derivative_equivalence_ratio(TrigPolynomial.random(1, 32, rng, mean_zero=True), sp)
              for _ in range(100)]
    lo, hi, _ = derivative_ratio_bracket(sp, 32, n_random=0)
    assert min(ratios) >= lo and max(ratios) <= hi
    assert hi / lo < 10


@pytest.mark.parametrize("s,q,p", [(0.5, 2.0, 2.0), (0.0, math.inf, 1.5), (1.0, 1.0, 3.0)])
def test_derivative_ratio_bracket_stable_under_reseeding(s, q, p):
    sp = SmoothnessSpace("Besov", s, q, Lp(p), LP)
    brackets = np.array([derivative_ratio_bracket(sp, 32, 20, seed)[:2] for seed in range(4)])
    assert np.all(brackets.max(axis=0) / brackets.min(axis=0) - 1 < 0.05)
