"""A compactly supported interpolation kernel and the symbol extension it induces.

The kernel ``lambda`` lives on ``[-1, 3]``.  On ``[-1, 0]`` it is a Hermite
polynomial ``p``; the other three unit segments are fixed by ``p``:

    lambda(u+1) = -3 p(u) + (u+1)^2/2 + 3(u+1)/2 + 1
    lambda(u+2) =  3 p(u) - (u+1)^2 - 2(u+1)
    lambda(u+3) =     -p(u) + (u+1)^2/2 + (u+1)/2        for u in [-1, 0].

With these segments the integer translates of ``lambda`` sum to one, and
``e(lambda, m)(t) = sum_n lambda(t - n) m(n)`` interpolates a sequence ``m``
while keeping ``t^l e^(l)(t)`` bounded whenever ``k^l (Delta^l m)(k)`` is.

Segments are stored as polynomials in the local coordinate ``x = u + 1 in [0, 1]``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.polynomial import Polynomial

from .symbols import ContinuousSymbol, OperatorSymbol

__all__ = [
    "JodeitKernel",
    "PiecewiseLinearKernel",
    "KernelReport",
    "build_kernel",
    "kernel_value",
    "verify_kernel",
    "extend_symbol",
    "extension",
    "baseline_kernels",
    "sample_kernel",
]


def _solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over the rationals."""
    n = len(b)
    M = [row[:] + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def _falling(n: int, r: int) -> int:
    return math.perm(n, r) if r <= n else 0


def _hermite_base(J: int, slope: Fraction, curvature: Fraction) -> list[Fraction]:
    """Monomial coefficients (in x) of the minimal-degree polynomial with
    ``p^(r)(0) = 0`` for ``r <= J`` and prescribed derivatives at ``x = 1``."""
    # p(x) = x^(J+1) q(x), deg q = J, fixes the conditions at x = 0
    targets = [Fraction(1), slope, curvature] + [Fraction(0)] * (J - 2)
    A = [[Fraction(_falling(J + 1 + i, r)) for i in range(J + 1)] for r in range(J + 1)]
    q = _solve_exact(A, targets)
    return [Fraction(0)] * (J + 1) + q


class _Kernel:
    """Shared evaluation logic for piecewise-polynomial kernels."""

    support: tuple[float, float]
    smoothness: int
    max_order: int

    def _segment_values(self, t: np.ndarray, r: int, side: str) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t, r: int = 0, side: str = "right") -> np.ndarray:
        """``r``-th derivative at ``t``; at knots the one-sided value from ``side``."""
        if r > self.max_order:
            raise ValueError(f"derivative order {r} exceeds {self.max_order}")
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        scalar = np.ndim(t) == 0
        out = self._segment_values(np.atleast_1d(np.asarray(t, dtype=float)), r, side)
        return out[0] if scalar else out


class JodeitKernel(_Kernel):
    """The kernel ``lambda`` with a ``C^J`` Hermite base segment.

    Parameters
    ----------
    J : int
        Smoothness order; all derivatives up to ``J`` are continuous.
    base : sequence of Fraction
        Monomial coefficients of the base segment in ``x = u + 1``.
    """

    support = (-1.0, 3.0)
    knots = (-1.0, 0.0, 1.0, 2.0, 3.0)

    def __init__(self, J: int, base):
        self.J = int(J)
        self.smoothness = self.J
        self.max_order = self.J + 1
        self.base_exact = list(base)
        p = Polynomial([float(c) for c in base])
        x = Polynomial([0.0, 1.0])
        segs = [p,
                -3 * p + x ** 2 / 2 + 1.5 * x + 1,
                3 * p - x ** 2 - 2 * x,
                -p + x ** 2 / 2 + x / 2]
        # derivative tables: self._segs[n][r]
        self._segs = []
        for s in segs:
            ders = [s]
            for _ in range(self.max_order):
                ders.append(ders[-1].deriv())
            self._segs.append(ders)

    @property
    def base(self) -> Polynomial:
        return self._segs[0][0]

    def _segment_values(self, t, r, side):
        # segment n covers [n-1, n]; local coordinate x = t - (n-1)
        n = np.floor(t) + 1 if side == "right" else np.ceil(t)
        x = t - (n - 1)
        out = np.zeros_like(t)
        for seg in range(4):
            sel = n == seg
            if np.any(sel):
                out[sel] = self._segs[seg][r](x[sel])
        return out


def build_kernel(J: int = 4, slope_at_zero: float = 1.5, curvature_at_zero: float = 1.0) -> JodeitKernel:
    """Construct ``lambda`` with a ``C^J`` base segment.

    ``slope_at_zero`` and ``curvature_at_zero`` are ``lambda'(0-)`` and
    ``lambda''(0-)``; the defaults 3/2 and 1 are the values that make the
    assembled kernel smooth.  Other values produce a corrupted kernel, which is
    useful as a negative control for :func:`verify_kernel`.
    """
    if J < 3:
        raise ValueError("J must be >= 3")
    base = _hermite_base(J, Fraction(slope_at_zero), Fraction(curvature_at_zero))
    return JodeitKernel(J, base)


def kernel_value(kernel: JodeitKernel, t, r: int = 0, side: str = "right"):
    """Exact piecewise evaluation of ``lambda^(r)``; zero outside ``[-1, 3]``."""
    if r > kernel.J:
        raise ValueError(f"derivative order {r} exceeds J = {kernel.J}")
    return kernel(t, r, side)


class PiecewiseLinearKernel(_Kernel):
    """Continuous piecewise-affine kernel given by its values at the knots."""

    smoothness = 0
    max_order = 8

    def __init__(self, knots, values, name: str = "piecewise_linear"):
        self.knots = tuple(float(k) for k in knots)
        self.values = np.asarray(values, dtype=float)
        self.support = (self.knots[0], self.knots[-1])
        self.slopes = np.diff(self.values) / np.diff(self.knots)
        self.name = name

    def _segment_values(self, t, r, side):
        kn = np.asarray(self.knots)
        if r == 0:
            return np.interp(t, kn, self.values, left=0.0, right=0.0)
        if r >= 2:
            return np.zeros_like(t)
        idx = np.searchsorted(kn, t, side="right" if side == "right" else "left") - 1
        inside = (idx >= 0) & (idx < len(self.slopes))
        out = np.zeros_like(t)
        out[inside] = self.slopes[idx[inside]]
        return out


def baseline_kernels() -> dict:
    """The hat function ``max(0, 1-|t|)`` and the trapezoid ``2 hat(2t) - hat(4t)``."""
    hat = PiecewiseLinearKernel([-1.0, 0.0, 1.0], [0.0, 1.0, 0.0], name="piecewise_affine")
    trap = PiecewiseLinearKernel([-0.5, -0.25, 0.0, 0.25, 0.5], [0.0, 1.0, 1.0, 1.0, 0.0],
                                 name="de_la_vallee_poussin")
    return {"piecewise_affine": hat, "de_la_vallee_poussin": trap}


@dataclass
class KernelReport:
    """Residuals of the kernel identities on a grid of ``[-1, 0]``."""

    J: int
    grid_size: int
    identities: dict
    integer_values: dict
    partition_of_unity: float
    junctions: dict
    extra: dict = field(default_factory=dict)

    def passed(self, identity_tol: float = 1e-8, value_tol: float = 1e-12,
               partition_tol: float = 1e-10, junction_tol: float = 1e-10) -> bool:
        vals = self.integer_values
        return (max(self.identities.values()) <= identity_tol
                and abs(vals["0"] - 1.0) <= value_tol
                and all(abs(vals[k]) <= value_tol for k in ("-1", "1", "2", "3"))
                and self.partition_of_unity <= partition_tol
                and all(v <= junction_tol for r, v in self.junctions.items() if int(r) <= self.J - 1))

    def to_json(self) -> dict:
        return {"J": self.J, "grid_size": self.grid_size, "identities": self.identities,
                "integer_values": self.integer_values,
                "partition_of_unity": self.partition_of_unity,
                "junctions": self.junctions, **self.extra}


# coefficient rows (c_0, c_1, c_2, c_3) acting on lambda^(r)(u + i)
_IDENTITIES = {
    "lambda1": (1, (1, 1, 1, 1)),
    "lambda2a": (2, (3, 2, 1, 0)),
    "lambda2b": (2, (-2, -1, 0, 1)),
    "lambda3a": (3, (3, 1, 0, 0)),
    "lambda3b": (3, (-3, 0, 1, 0)),
    "lambda3c": (3, (1, 0, 0, 1)),
}


def _identity_residual(kernel, u: np.ndarray, r: int, coeffs) -> float:
    """Max over grid points and over left/right choices at knots of
    ``|sum_i c_i lambda^(r)(u + i)|``."""
    sides = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        sides.append((c * kernel(u + i, r, "left"), c * kernel(u + i, r, "right")))
    worst = 0.0
    for combo in itertools.product((0, 1), repeat=len(sides)):
        total = sum(sides[i][s] for i, s in enumerate(combo))
        worst = max(worst, float(np.max(np.abs(total))))
    return worst


def verify_kernel(kernel: JodeitKernel, grid=4096) -> KernelReport:
    """Check the six derivative identities, integer values, partition of unity
    and junction continuity.

    ``grid`` is a point count or an explicit array in ``[-1, 0]``.  Where a
    point ``u + i`` is a knot, both one-sided derivatives are used, so a kernel
    that is not smooth at its junctions fails the identities there.
    """
    u = np.linspace(-1.0, 0.0, grid) if np.ndim(grid) == 0 else np.asarray(grid, dtype=float)
    if u.min() < -1.0 or u.max() > 0.0:
        raise ValueError("verification grid must lie in [-1, 0]")
    identities = {name: _identity_residual(kernel, u, r, c) for name, (r, c) in _IDENTITIES.items()}
    ints = {str(n): float(kernel(float(n))) for n in (-1, 0, 1, 2, 3)}
    t = np.linspace(0.0, 1.0, u.size)
    pu = sum(kernel(t - n) for n in range(-3, 2))
    junctions = {}
    kn = np.asarray(kernel.knots)
    for r in range(kernel.J + 1):
        junctions[str(r)] = float(np.max(np.abs(kernel(kn, r, "left") - kernel(kn, r, "right"))))
    return KernelReport(kernel.J, int(u.size), identities, ints, float(np.max(np.abs(pu - 1.0))), junctions)


def extend_symbol(kernel, m: OperatorSymbol, t, r: int = 0) -> np.ndarray:
    """``sum_n kernel^(r)(t - n) m(n)`` over the integers ``n`` with ``t - n`` in the support."""
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    a, b = kernel.support
    count = int(math.ceil(b - a))
    top = np.floor(t - a).astype(np.int64)
    ns = top[:, None] - np.arange(count)[None, :]
    uniq, inv = np.unique(ns, return_inverse=True)
    mvals = m(uniq)[inv.reshape(ns.shape)]
    weights = kernel((t[:, None] - ns).ravel(), r).reshape(ns.shape)
    out = np.einsum("tn,tnij->tij", weights, mvals)
    return out[0] if scalar else out


def extension(kernel, m: OperatorSymbol) -> ContinuousSymbol:
    """``e(kernel, m)`` as a continuous symbol; derivatives beyond the kernel's
    a.e. order are resolved at the grid scale (they are measures)."""
    return ContinuousSymbol(lambda t, r: extend_symbol(kernel, m, t, r), m.in_dim, m.out_dim,
                            analytic_order=kernel.smoothness + 1, piecewise=True,
                            name=f"e({getattr(kernel, 'name', 'lambda')}, {m.name})")


def sample_kernel(kernel: JodeitKernel, n: int = 401, orders: int = 3) -> np.ndarray:
    """Rows ``(t, lambda, lambda', lambda'', lambda''')`` on ``[-1, 3]``."""
    t = np.linspace(-1.0, 3.0, n)
    cols = [t] + [kernel(t, r) for r in range(orders + 1)]
    return np.column_stack(cols)
