import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from torus_mreg.jodeit import (
    baseline_kernels,
    build_kernel,
    extend_symbol,
    extension,
    kernel_value,
    sample_kernel,
    verify_kernel,
)
from torus_mreg.symbols import OperatorSymbol, continuous_m_seminorm, marcinkiewicz_seminorm, operator_norms, symmetric_grid

LAM = build_kernel(4)


def hermite_oracle(J):
    """Minimal-degree polynomial on [-1, 0] with the endpoint data, solved symbolically."""
    u = sp.symbols("u")
    deg = 2 * (J + 1) - 1
    cs = sp.symbols(f"c0:{deg + 1}")
    p = sum(c * u ** i for i, c in enumerate(cs))
    eqs = [sp.diff(p, u, r).subs(u, -1) for r in range(J + 1)]
    right = {0: 1, 1: sp.Rational(3, 2), 2: 1}
    eqs += [sp.diff(p, u, r).subs(u, 0) - right.get(r, 0) for r in range(J + 1)]
    sol = sp.solve(eqs, cs)
    return sp.lambdify(u, p.subs(sol), "numpy"), sp.Poly(p.subs(sol), u).degree()


@pytest.mark.parametrize("J", [3, 4, 5])
def test_base_segment_matches_symbolic_hermite(J):
    oracle, degree = hermite_oracle(J)
    lam = build_kernel(J)
    u = np.linspace(-1, 0, 101)
    np.testing.assert_allclose(lam(u, 0, "left"), oracle(u), atol=1e-12)
    assert lam.base.degree() <= degree


def test_known_coefficients_for_default_order():
    np.testing.assert_allclose(LAM.base.coef, [0, 0, 0, 0, 0, 52.5, -164.5, 203, -115, 25])


def test_integer_values_and_boundary_data():
    assert LAM(0.0) == pytest.approx(1.0, abs=1e-12)
    for n in (-1.0, 1.0, 2.0, 3.0):
        assert abs(LAM(n)) <= 1e-12
    assert kernel_value(LAM, 0.0, 1, "left") == pytest.approx(1.5)
    assert kernel_value(LAM, 0.0, 2, "left") == pytest.approx(1.0)
    for r in range(1, 5):
        assert abs(kernel_value(LAM, -1.0, r, "right")) <= 1e-12
    for r in range(3, 5):
        assert abs(kernel_value(LAM, 0.0, r, "left")) <= 1e-10
    assert kernel_value(LAM, 5.0, 2) == 0
    with pytest.raises(ValueError):
        kernel_value(LAM, 0.0, 5)
    with pytest.raises(ValueError):
        build_kernel(2)


def test_third_segment_at_zero():
    # lambda(3) = -lambda(0) + 1/2 + 1/2
    assert kernel_value(LAM, 3.0, 0, "left") == pytest.approx(-1.0 + 0.5 + 0.5, abs=1e-12)


@given(st.floats(-50, 50))
def test_partition_of_unity(t):
    total = sum(LAM(t - n) for n in range(math.floor(t) - 4, math.floor(t) + 4))
    assert abs(total - 1.0) <= 1e-10


def test_junctions_match_up_to_order_J_minus_1():
    kn = np.array(LAM.knots)
    for r in range(LAM.J):
        assert np.max(np.abs(LAM(kn, r, "left") - LAM(kn, r, "right"))) <= 1e-10


def test_verify_kernel_passes():
    rep = verify_kernel(LAM, 4096)
    assert set(rep.identities) == {"lambda1", "lambda2a", "lambda2b", "lambda3a", "lambda3b", "lambda3c"}
    assert max(rep.identities.values()) <= 1e-8
    assert rep.partition_of_unity <= 1e-10
    assert rep.passed()
    assert rep.to_json()["J"] == 4


def test_identity_residual_ordering():
    rep = verify_kernel(LAM, 4096)
    # third-order identities imply the second-order ones, which imply the first
    assert max(rep.identities["lambda3a"], rep.identities["lambda3b"], rep.identities["lambda3c"]) <= 1e-8
    assert rep.identities["lambda1"] <= 1e-8


def test_corrupted_kernel_fails():
    bad = build_kernel(4, slope_at_zero=1.0)
    rep = verify_kernel(bad, 4096)
    assert rep.identities["lambda1"] > 1e-2
    assert not rep.passed()


def test_verify_grid_bounds():
    with pytest.raises(ValueError):
        verify_kernel(LAM, np.array([-2.0, 0.0]))


@pytest.mark.parametrize("seed", range(10))
def test_extension_interpolates(seed):
    d = 1 + seed % 4
    m = OperatorSymbol.seeded_random(d, seed=seed)
    ks = np.arange(-64, 65)
    assert np.max(operator_norms(extend_symbol(LAM, m, ks.astype(float)) - m(ks))) <= 1e-12


def test_extension_of_identity_is_identity():
    t = np.linspace(-10, 10, 997)
    np.testing.assert_allclose(extend_symbol(LAM, OperatorSymbol.identity(2), t),
                               np.broadcast_to(np.eye(2), (t.size, 2, 2)), atol=1e-12)


def test_extension_by_hand():
    m = OperatorSymbol.scalar_fn("1/(1+k**2)")
    t = 0.5
    by_hand = sum(LAM(t - n) / (1 + n ** 2) for n in (-2, -1, 0, 1))
    assert extend_symbol(LAM, m, t)[0, 0] == pytest.approx(by_hand, abs=1e-15)


def test_extension_range_error():
    m = OperatorSymbol.table(-3, np.ones((7, 1, 1)))
    with pytest.raises(ValueError):
        extend_symbol(LAM, m, 3.5)


def test_baselines():
    kernels = baseline_kernels()
    hat = kernels["piecewise_affine"]
    assert hat(0.0) == 1.0
    m = OperatorSymbol.seeded_random(2, seed=0)
    ks = np.arange(-10, 11)
    np.testing.assert_allclose(extend_symbol(hat, m, ks.astype(float)), m(ks), atol=1e-15)
    t = np.linspace(-5, 5, 101)
    lo = np.floor(t)
    theta = (t - lo)[:, None, None]
    lin = (1 - theta) * m(lo.astype(int)) + theta * m(lo.astype(int) + 1)
    np.testing.assert_allclose(extend_symbol(hat, m, t), lin, atol=1e-14)
    trap = kernels["de_la_vallee_poussin"]
    assert trap(0.2) == 1.0 and trap(0.375) == pytest.approx(0.5)


def normalized_battery():
    out = []
    for seed in range(10):
        m = OperatorSymbol.seeded_random(1 + seed % 4, seed=seed)
        out.append(m * (1.0 / marcinkiewicz_seminorm(m, 3, 64).value))
    return out


@pytest.mark.parametrize("gamma", [1, 2, 3])
def test_extension_preserves_marcinkiewicz(gamma):
    for m in normalized_battery():
        e = extension(LAM, m)
        a = continuous_m_seminorm(e, gamma, symmetric_grid(64, 16)).value
        b = continuous_m_seminorm(e, gamma, symmetric_grid(64, 32)).value
        assert math.isfinite(a) and abs(b / a - 1) <= 0.10


def test_piecewise_affine_extension_keeps_first_order_only():
    hat = baseline_kernels()["piecewise_affine"]
    ok1, fail3 = True, False
    for m in normalized_battery():
        e = extension(hat, m)
        a1 = continuous_m_seminorm(e, 1, symmetric_grid(64, 16)).value
        b1 = continuous_m_seminorm(e, 1, symmetric_grid(64, 32)).value
        ok1 &= abs(b1 / a1 - 1) <= 0.10
        a3 = continuous_m_seminorm(e, 3, symmetric_grid(64, 16)).value
        b3 = continuous_m_seminorm(e, 3, symmetric_grid(64, 32)).value
        fail3 |= abs(b3 / a3 - 1) > 0.10
    assert ok1 and fail3


def test_sample_kernel_columns():
    rows = sample_kernel(LAM, 41)
    assert rows.shape == (41, 5)
    assert rows[0, 0] == -1 and rows[-1, 0] == 3
