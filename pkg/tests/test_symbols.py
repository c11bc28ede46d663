import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import unitary_group

from torus_mreg.fourier import TrigPolynomial, synthesize
from torus_mreg.jodeit import build_kernel, extension
from torus_mreg.spaces import LittlewoodPaley, Lp
from torus_mreg.symbols import (
    CHORD_ARC_CONSTANT,
    ContinuousSymbol,
    OperatorSymbol,
    SymbolRangeError,
    condition_report,
    continuous_m_seminorm,
    dyadic_operator_norm_bound,
    forward_difference,
    joint_seminorm,
    joint_variational,
    marcinkiewicz_seminorm,
    operator_norms,
    r_bounded_proxy,
    symmetric_grid,
    variational_seminorm,
)

LP = LittlewoodPaley(4)
isgn = OperatorSymbol.scalar_fn(lambda k: 1j * np.sign(k))


def test_forward_difference_examples():
    assert np.all(forward_difference(OperatorSymbol.constant([[2.0]]), 1, np.arange(-5, 5)) == 0)
    lin = OperatorSymbol.scalar_fn("k")
    assert np.all(forward_difference(lin, 2, np.arange(-5, 5)) == 0)
    sq = OperatorSymbol.scalar_fn("k**2")
    np.testing.assert_array_equal(forward_difference(sq, 2, np.arange(-5, 5))[:, 0, 0], 2)


def test_forward_difference_range_errors():
    tab = OperatorSymbol.table(-3, np.ones((7, 1, 1)))
    forward_difference(tab, 3, 0)
    with pytest.raises(SymbolRangeError):
        forward_difference(tab, 3, 1)
    with pytest.raises(ValueError):
        forward_difference(tab, -1, 0)


@given(st.integers(0, 2 ** 31), st.integers(1, 3))
def test_difference_recursion(seed, l):
    m = OperatorSymbol.seeded_random(2, seed=seed)
    ks = np.arange(-20, 20)
    lhs = forward_difference(m, l, ks)
    rhs = forward_difference(m, l - 1, ks + 1) - forward_difference(m, l - 1, ks)
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-14)


def test_marcinkiewicz_examples():
    assert marcinkiewicz_seminorm(OperatorSymbol.identity(3), 3, 64).value == pytest.approx(1.0)
    lin = marcinkiewicz_seminorm(OperatorSymbol.scalar_fn("k"), 1, 64)
    assert lin.value == 64 and lin.unbounded
    s = marcinkiewicz_seminorm(isgn, 1, 64)
    assert s.value == pytest.approx(1.0) and not s.unbounded
    # third differences near 0: |(-3)^3 (m(0) - 3m(-1) + 3m(-2) - m(-3))| = 27
    s = marcinkiewicz_seminorm(isgn, 3, 64)
    assert s.value == pytest.approx(27.0) and s.argmax == {"l": 3, "k": -3} and not s.unbounded


@given(st.integers(0, 2 ** 31))
def test_marcinkiewicz_monotone_and_unitarily_invariant(seed):
    m = OperatorSymbol.seeded_random(3, seed=seed)
    vals = [[marcinkiewicz_seminorm(m, g, K).value for K in (8, 16, 32)] for g in (1, 2, 3)]
    vals = np.array(vals)
    assert np.all(np.diff(vals, axis=0) >= 0) and np.all(np.diff(vals, axis=1) >= 0)
    U = unitary_group.rvs(3, random_state=seed % 2 ** 32)
    V = unitary_group.rvs(3, random_state=(seed + 1) % 2 ** 32)
    rot = U @ m @ V
    assert marcinkiewicz_seminorm(rot, 3, 32).value == pytest.approx(vals[2, 2], rel=1e-12)


def test_variational_examples():
    c = OperatorSymbol.constant(np.diag([2.0, 0.5]))
    assert variational_seminorm(c, 5).value == pytest.approx(2.0)
    # block j=0 holds k = -1, where m(0) - m(-1) = i
    v = variational_seminorm(isgn, 5)
    assert v.by_order[0] == pytest.approx(1.0)
    assert all(s == 0 for s in v.by_order[1:])
    assert v.value == pytest.approx(2.0)
    with pytest.raises(ValueError):
        variational_seminorm(c, -1)


@given(st.integers(0, 2 ** 31))
def test_m1_finite_implies_var_finite(seed):
    m = OperatorSymbol.seeded_random(2, seed=seed)
    m1_half, m1 = (marcinkiewicz_seminorm(m, 1, K).value for K in (32, 64))
    if m1 <= 1.05 * m1_half:
        assert not variational_seminorm(m, 5).unbounded
        assert math.isfinite(variational_seminorm(m, 5).value)


def test_joint_examples():
    a = OperatorSymbol.identity(2)
    d = OperatorSymbol.seeded_random(2, seed=1)
    assert joint_seminorm(OperatorSymbol.zero(2), a, 3, 32).value == 0
    assert joint_seminorm(d, a, 3, 32).value == pytest.approx(marcinkiewicz_seminorm(d, 3, 32).value, rel=1e-14)
    with pytest.raises(ValueError):
        joint_seminorm(OperatorSymbol.identity(3), a, 1, 8)


def test_joint_hand_enumeration():
    d = OperatorSymbol.scalar_fn("k")
    a = OperatorSymbol.scalar_fn(lambda k: 1.0 / (1.0 + np.abs(k)))
    K, best = 16, 0.0
    for l in range(3):
        for k in range(-K, K + 1):
            dl = sum(math.comb(l, j) * (-1) ** (l - j) * (k + j) for j in range(l + 1))
            best = max(best, abs(k) ** l * abs(dl) / (1 + abs(k + l)))
    assert joint_seminorm(d, a, 2, K).value == pytest.approx(best, rel=1e-14)
    assert not joint_seminorm(d, a, 2, K).unbounded
    jv = joint_variational(d, a, 4)
    assert math.isfinite(jv.value)


def test_continuous_seminorm_examples():
    grid = symmetric_grid(64, 16)
    assert 0 not in grid
    assert continuous_m_seminorm(ContinuousSymbol.identity(2), 3, grid).value == pytest.approx(1.0)
    bump = ContinuousSymbol.from_function(lambda t: 1.0 / (1.0 + t ** 2))
    coarse = continuous_m_seminorm(bump, 3, symmetric_grid(64, 16)).value
    fine = continuous_m_seminorm(bump, 3, symmetric_grid(64, 128)).value
    assert abs(coarse / fine - 1) < 0.01
    lin = ContinuousSymbol.from_function(lambda t: t)
    s = continuous_m_seminorm(lin, 1, symmetric_grid(64, 4))
    assert s.unbounded
    with pytest.raises(ValueError):
        continuous_m_seminorm(lin, 1, np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        continuous_m_seminorm(lin, 9, grid)


def test_tilde_variant_dominates():
    bump = ContinuousSymbol.from_function(lambda t: 1.0 / (1.0 + t ** 2))
    grid = symmetric_grid(32, 16)
    assert (continuous_m_seminorm(bump, 2, grid, tilde=True).value
            >= continuous_m_seminorm(bump, 2, grid).value)


def test_condition_report():
    rep = condition_report(OperatorSymbol.seeded_random(2, seed=5), 64)
    assert set(rep.marcinkiewicz) == {1, 2, 3}
    assert all(rep.bounded.values())
    js = rep.to_json()
    assert js["window"] == 64 and "variational" in js


def test_r_bounded_proxy():
    p = r_bounded_proxy([np.eye(2)])
    assert p.value == 1 and p.marker == "PROXY"
    ks = np.arange(-64, 65)
    fam = [k / (1 + 1j * k) for k in ks]
    assert r_bounded_proxy(fam).value < 1
    with pytest.raises(ValueError):
        r_bounded_proxy([])


def test_dyadic_bound_grid_stability():
    one = ContinuousSymbol.identity(1)
    a = dyadic_operator_norm_bound(one, 0, LP, 1.0, n_grid=2 ** 14)
    b = dyadic_operator_norm_bound(one, 0, LP, 1.0, n_grid=2 ** 15, x_extent=32.0)
    assert math.isfinite(a.l1) and abs(a.l1 / b.l1 - 1) < 0.02
    assert a.constant == CHORD_ARC_CONSTANT


def test_dyadic_bound_scale_invariance():
    one = ContinuousSymbol.identity(1)
    l1 = [dyadic_operator_norm_bound(one, j, LP, 1.0).l1 for j in range(1, 7)]
    assert max(l1) / min(l1) < 1.1


def test_dyadic_bound_zero_and_errors():
    zero = ContinuousSymbol.scalar(lambda t, r: np.zeros_like(t), analytic_order=8)
    assert dyadic_operator_norm_bound(zero, 2, LP, 3.0).bound == 0
    with pytest.raises(ValueError):
        dyadic_operator_norm_bound(zero, -1, LP, 1.0)
    # too coarse a grid for a wide block
    with pytest.raises(ValueError):
        dyadic_operator_norm_bound(ContinuousSymbol.identity(1), 0, LP, 1.0, n_grid=64, x_extent=16.0)


def test_dyadic_bound_is_an_upper_bound():
    rng = np.random.default_rng(11)
    m = OperatorSymbol.seeded_random(2, seed=2).restricted(-40, 40)
    ext = extension(build_kernel(4), m)
    K, G = 32, 128
    ks = np.arange(-K, K + 1)
    for j in (0, 2, 4):
        bound = dyadic_operator_norm_bound(ext, j, LP, 2.0).bound
        eta = LP.psi_j(ks, j)[:, None, None] * ext(ks.astype(float))
        worst = 0.0
        for _ in range(200):
            f = TrigPolynomial.random(2, K, rng)
            g = TrigPolynomial(np.einsum("kij,kj->ki", eta, f.coeffs))
            worst = max(worst, Lp(2).norm_of_values(synthesize(g, G).pointwise_norm())
                        / Lp(2).norm_of_values(synthesize(f, G).pointwise_norm()))
        assert worst <= bound


def test_symbol_algebra_and_ranges():
    a = OperatorSymbol.seeded_random(2, seed=1)
    b = OperatorSymbol.seeded_random(2, seed=2)
    ks = np.arange(-5, 6)
    np.testing.assert_allclose((a @ b)(ks), a(ks) @ b(ks))
    np.testing.assert_allclose((a + b)(ks), a(ks) + b(ks))
    np.testing.assert_allclose((2.0 * a)(ks), 2.0 * a(ks))
    M = np.array([[1, 2], [3, 4j]])
    np.testing.assert_allclose((M @ a)(ks), M @ a(ks))
    np.testing.assert_allclose((a @ M)(ks), a(ks) @ M)
    r = a.restricted(-3, 3)
    assert r.defined_on(-3, 3) and not r.defined_on(-4, 3)
    with pytest.raises(SymbolRangeError):
        r(4)
    with pytest.raises(ValueError):
        a + OperatorSymbol.identity(3)
    t = a.tabulate(-4, 4)
    np.testing.assert_array_equal(t(ks[1:-1]), a(ks[1:-1]))


def test_closed_form_families():
    ks = np.arange(-6, 7)
    d = OperatorSymbol.diagonal([lambda k: k, lambda k: k ** 2])
    np.testing.assert_array_equal(d(ks)[:, 1, 1], ks ** 2)
    rot = OperatorSymbol.rotation(0.5)(ks)
    np.testing.assert_allclose(rot @ rot.transpose(0, 2, 1), np.broadcast_to(np.eye(2), rot.shape), atol=1e-15)
    assert marcinkiewicz_seminorm(OperatorSymbol.rotation(0.5), 3, 64).value < 10


@pytest.mark.parametrize("sym", [
    OperatorSymbol.identity(2),
    OperatorSymbol.zero(2, 3),
    OperatorSymbol.scalar_fn("1/(1+k**2)", 2),
    OperatorSymbol.seeded_random(2, 3, seed=9, scale=0.5),
    OperatorSymbol.table(-2, np.arange(5 * 4).reshape(5, 2, 2) * (1 + 1j)),
])
def test_symbol_json_round_trip(sym):
    back = OperatorSymbol.from_json(sym.to_json())
    ks = np.arange(-2, 3)
    np.testing.assert_allclose(back(ks), sym(ks))


def test_symbol_json_errors():
    with pytest.raises(ValueError):
        OperatorSymbol.from_json({"family": "mystery"})
    with pytest.raises(ValueError):
        OperatorSymbol.from_json({"family": "table", "entries": [{"k": 0, "matrix": [[1]]}, {"k": 2, "matrix": [[1]]}]})
    with pytest.raises(ValueError):
        OperatorSymbol.scalar_fn("__import__('os')")
    with pytest.raises(ValueError):
        OperatorSymbol(lambda k: 0, 1, 1).to_json()


def test_operator_norms():
    M = np.array([[[3.0, 0], [0, 4.0]], [[0, 0], [0, 0]]])
    np.testing.assert_allclose(operator_norms(M), [4.0, 0.0])
