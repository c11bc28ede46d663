"""Matrix-valued symbols and Marcinkiewicz-type seminorms.

A discrete symbol is a map ``k -> m(k)`` from the integers to complex
``d2 x d1`` matrices; a continuous symbol is the analogous map on the real
line together with its derivatives.  "Sup over all k" is always realized as a
windowed sup; each seminorm is also computed on the half window and the ratio
of the two is used as a growth detector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import comb

from ._io import complex_matrix_from_json, complex_matrix_to_json

__all__ = [
    "SymbolRangeError",
    "OperatorSymbol",
    "ContinuousSymbol",
    "WindowedSup",
    "ConditionReport",
    "ProxyBound",
    "DyadicBound",
    "GROWTH_RATIO",
    "CHORD_ARC_CONSTANT",
    "operator_norms",
    "forward_difference",
    "marcinkiewicz_seminorm",
    "variational_seminorm",
    "joint_seminorm",
    "joint_variational",
    "continuous_m_seminorm",
    "symmetric_grid",
    "condition_report",
    "dyadic_operator_norm_bound",
    "r_bounded_proxy",
]

#: windowed sups over K and K/2 whose ratio exceeds this are flagged unbounded
GROWTH_RATIO = 1.2
#: comparison constant between the maximal function and kernel majorants
CHORD_ARC_CONSTANT = math.pi / 2


class SymbolRangeError(ValueError):
    """A symbol was evaluated outside its declared range."""


def operator_norms(mats: np.ndarray) -> np.ndarray:
    """Spectral norms of a stack of matrices ``(..., m, n)``."""
    mats = np.asarray(mats)
    if mats.shape[-2:] == (1, 1):
        return np.abs(mats[..., 0, 0])
    return np.linalg.norm(mats, ord=2, axis=(-2, -1))


_SAFE_NAMES = {
    "np": np, "pi": np.pi, "sgn": np.sign, "sign": np.sign, "abs": np.abs,
    "sqrt": np.sqrt, "exp": np.exp, "log": np.log, "sin": np.sin, "cos": np.cos,
    "tanh": np.tanh, "arctan": np.arctan, "j": 1j,
}


def _compile_expr(expr: str) -> Callable[[np.ndarray], np.ndarray]:
    code = compile(expr, "<symbol>", "eval")
    for name in code.co_names:
        if name not in _SAFE_NAMES and name != "k":
            raise ValueError(f"name {name!r} not allowed in symbol expression")

    def f(k):
        k = np.asarray(k, dtype=float)
        return np.broadcast_to(eval(code, {"__builtins__": {}}, {**_SAFE_NAMES, "k": k}), k.shape)

    return f


class OperatorSymbol:
    """A sequence of complex ``out_dim x in_dim`` matrices indexed by ``k``.

    Parameters
    ----------
    func : callable
        Maps an integer array ``(n,)`` to an array ``(n, out_dim, in_dim)``.
    in_dim, out_dim : int
    kmin, kmax : int or None
        Declared range; ``None`` means unbounded on that side.
    spec : dict, optional
        JSON description used for serialization.
    """

    __array_ufunc__ = None  # let ``ndarray @ symbol`` dispatch to __rmatmul__

    def __init__(self, func, in_dim: int, out_dim: int, kmin: int | None = None,
                 kmax: int | None = None, spec: dict | None = None, name: str = "custom"):
        self._func = func
        self.in_dim = int(in_dim)
        self.out_dim = int(out_dim)
        self.kmin = kmin
        self.kmax = kmax
        self.spec = spec
        self.name = name

    def __call__(self, k):
        scalar = np.ndim(k) == 0
        ks = np.atleast_1d(np.asarray(k)).astype(np.int64)
        if ks.size:
            if self.kmin is not None and ks.min() < self.kmin:
                raise SymbolRangeError(f"symbol {self.name} undefined at k={int(ks.min())} (range starts at {self.kmin})")
            if self.kmax is not None and ks.max() > self.kmax:
                raise SymbolRangeError(f"symbol {self.name} undefined at k={int(ks.max())} (range ends at {self.kmax})")
        vals = np.asarray(self._func(ks), dtype=complex)
        vals = np.broadcast_to(vals, (ks.size, self.out_dim, self.in_dim))
        return vals[0] if scalar else vals

    def defined_on(self, lo: int, hi: int) -> bool:
        return ((self.kmin is None or lo >= self.kmin)
                and (self.kmax is None or hi <= self.kmax))

    def __repr__(self) -> str:
        rng = f"[{self.kmin}, {self.kmax}]"
        return f"OperatorSymbol({self.name}, {self.out_dim}x{self.in_dim}, range={rng})"

    # -- algebra ---------------------------------------------------------
    def _range_with(self, other: "OperatorSymbol"):
        los = [v for v in (self.kmin, other.kmin) if v is not None]
        his = [v for v in (self.kmax, other.kmax) if v is not None]
        return (max(los) if los else None, min(his) if his else None)

    def __matmul__(self, other):
        if isinstance(other, OperatorSymbol):
            if self.in_dim != other.out_dim:
                raise ValueError("dimension mismatch in symbol product")
            lo, hi = self._range_with(other)
            return OperatorSymbol(lambda k: self(k) @ other(k), other.in_dim, self.out_dim,
                                  lo, hi, name=f"({self.name})@({other.name})")
        M = np.asarray(other, dtype=complex)
        return OperatorSymbol(lambda k: self(k) @ M, M.shape[1], self.out_dim,
                              self.kmin, self.kmax, name=f"({self.name})@M")

    def __rmatmul__(self, M):
        M = np.asarray(M, dtype=complex)
        if M.shape[1] != self.out_dim:
            raise ValueError("dimension mismatch in symbol product")
        return OperatorSymbol(lambda k: M @ self(k), self.in_dim, M.shape[0],
                              self.kmin, self.kmax, name=f"M@({self.name})")

    def __add__(self, other: "OperatorSymbol") -> "OperatorSymbol":
        if (self.in_dim, self.out_dim) != (other.in_dim, other.out_dim):
            raise ValueError("dimension mismatch in symbol sum")
        lo, hi = self._range_with(other)
        return OperatorSymbol(lambda k: self(k) + other(k), self.in_dim, self.out_dim,
                              lo, hi, name=f"{self.name}+{other.name}")

    def __mul__(self, c) -> "OperatorSymbol":
        return OperatorSymbol(lambda k: c * self(k), self.in_dim, self.out_dim,
                              self.kmin, self.kmax, name=f"{c}*{self.name}")

    __rmul__ = __mul__

    def times_scalar(self, fn: Callable[[np.ndarray], np.ndarray], label: str = "f(k)") -> "OperatorSymbol":
        """``k -> fn(k) m(k)`` for a scalar function ``fn``."""
        return OperatorSymbol(lambda k: np.asarray(fn(k))[:, None, None] * self(k),
                              self.in_dim, self.out_dim, self.kmin, self.kmax,
                              name=f"{label}*{self.name}")

    def restricted(self, kmin: int, kmax: int) -> "OperatorSymbol":
        return OperatorSymbol(self._func, self.in_dim, self.out_dim, kmin, kmax,
                              spec=self.spec, name=self.name)

    def tabulate(self, kmin: int, kmax: int) -> "OperatorSymbol":
        """Freeze the values on ``kmin..kmax`` into a table symbol."""
        return OperatorSymbol.table(kmin, self(np.arange(kmin, kmax + 1)))

    # -- families ----------------------------------------------------------
    @classmethod
    def table(cls, kmin: int, values) -> "OperatorSymbol":
        """Dense table; ``values[i]`` is ``m(kmin + i)``."""
        vals = np.array(values, dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, None, None]
        if vals.ndim != 3:
            raise ValueError("table values must have shape (n, out_dim, in_dim)")
        vals.setflags(write=False)
        kmax = kmin + vals.shape[0] - 1
        out = cls(lambda k: vals[k - kmin], vals.shape[2], vals.shape[1], kmin, kmax, name="table")
        out._table = (kmin, vals)
        return out

    @classmethod
    def constant(cls, M) -> "OperatorSymbol":
        M = np.atleast_2d(np.asarray(M, dtype=complex))
        return cls(lambda k: np.broadcast_to(M, (len(k),) + M.shape), M.shape[1], M.shape[0],
                   name="constant")

    @classmethod
    def identity(cls, dim: int) -> "OperatorSymbol":
        out = cls.constant(np.eye(dim))
        out.name = "identity"
        out.spec = {"family": "identity", "dim": dim}
        return out

    @classmethod
    def zero(cls, in_dim: int, out_dim: int | None = None) -> "OperatorSymbol":
        out_dim = in_dim if out_dim is None else out_dim
        out = cls.constant(np.zeros((out_dim, in_dim)))
        out.name = "zero"
        out.spec = {"family": "zero", "in_dim": in_dim, "out_dim": out_dim}
        return out

    @classmethod
    def scalar_fn(cls, fn, dim: int = 1, name: str = "scalar_fn") -> "OperatorSymbol":
        """``k -> fn(k) I``; ``fn`` may also be an expression string in ``k``."""
        spec = None
        if isinstance(fn, str):
            spec = {"family": "scalar_fn", "dim": dim, "expr": fn}
            name = fn
            fn = _compile_expr(fn)
        eye = np.eye(dim)
        return cls(lambda k: np.asarray(fn(k), dtype=complex)[:, None, None] * eye,
                   dim, dim, spec=spec, name=name)

    @classmethod
    def diagonal(cls, fns: Sequence[Callable]) -> "OperatorSymbol":
        d = len(fns)

        def f(k):
            out = np.zeros((len(k), d, d), dtype=complex)
            for i, fn in enumerate(fns):
                out[:, i, i] = fn(k)
            return out

        return cls(f, d, d, name="diagonal")

    @classmethod
    def rotation(cls, rate: float = 1.0) -> "OperatorSymbol":
        """Real 2x2 rotation by the bounded angle ``arctan(rate k)``."""

        def f(k):
            th = np.arctan(rate * np.asarray(k, dtype=float))
            c, s = np.cos(th), np.sin(th)
            return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)

        return cls(f, 2, 2, name="rotation")

    @classmethod
    def seeded_random(cls, in_dim: int, out_dim: int | None = None, seed: int = 0,
                      scale: float = 1.0) -> "OperatorSymbol":
        """Smooth bounded random symbol ``M0 + M1 tanh(k/s1) + M2 / (1 + (k/s2)^2)``.

        Every term satisfies ``sup |k^l Delta^l m(k)| < inf`` for all ``l``.
        """
        out_dim = in_dim if out_dim is None else out_dim
        rng = np.random.default_rng(seed)
        shape = (3, out_dim, in_dim)
        Ms = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * scale / math.sqrt(2 * in_dim)
        s1, s2 = rng.uniform(1.0, 8.0, size=2)

        def f(k):
            k = np.asarray(k, dtype=float)[:, None, None]
            return Ms[0] + Ms[1] * np.tanh(k / s1) + Ms[2] / (1.0 + (k / s2) ** 2)

        return cls(f, in_dim, out_dim, spec={"family": "seeded_random", "in_dim": in_dim,
                                             "out_dim": out_dim, "seed": seed, "scale": scale},
                   name=f"seeded_random({seed})")

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        table = getattr(self, "_table", None)
        if self.spec is None and table is not None:
            kmin, vals = table
            return {"family": "table", "in_dim": self.in_dim, "out_dim": self.out_dim,
                    "entries": [{"k": int(kmin + i), "matrix": complex_matrix_to_json(v)}
                                for i, v in enumerate(vals)]}
        if self.spec is None:
            raise ValueError(f"symbol {self.name} has no JSON form; tabulate it first")
        return self.spec

    @classmethod
    def from_json(cls, obj: dict) -> "OperatorSymbol":
        fam = obj.get("family")
        if fam == "identity":
            return cls.identity(int(obj["dim"]))
        if fam == "zero":
            return cls.zero(int(obj["in_dim"]), int(obj.get("out_dim", obj["in_dim"])))
        if fam == "scalar_fn":
            return cls.scalar_fn(str(obj["expr"]), int(obj.get("dim", 1)))
        if fam == "seeded_random":
            return cls.seeded_random(int(obj["in_dim"]), int(obj.get("out_dim", obj["in_dim"])),
                                     int(obj.get("seed", 0)), float(obj.get("scale", 1.0)))
        if fam == "table":
            entries = sorted(obj["entries"], key=lambda e: int(e["k"]))
            ks = [int(e["k"]) for e in entries]
            if ks != list(range(ks[0], ks[0] + len(ks))):
                raise ValueError("table entries must cover a contiguous range of k")
            return cls.table(ks[0], [complex_matrix_from_json(e["matrix"]) for e in entries])
        raise ValueError(f"unknown symbol family {fam!r}")


def forward_difference(m: OperatorSymbol, l: int, k):
    """``(Delta^l m)(k) = sum_j C(l, j) (-1)^(l-j) m(k + j)``."""
    if l < 0:
        raise ValueError("difference order must be nonnegative")
    k = np.asarray(k)
    out = 0
    for j in range(l + 1):
        out = out + comb(l, j, exact=True) * (-1) ** (l - j) * m(k + j)
    if l == 0:
        return m(k)
    return out


@dataclass
class WindowedSup:
    """A windowed supremum with the half-window value used to detect growth."""

    value: float
    half_value: float
    window: float
    argmax: dict = field(default_factory=dict)
    by_order: list = field(default_factory=list)

    @property
    def unbounded(self) -> bool:
        return growing(self.value, self.half_value)

    def __float__(self) -> float:
        return float(self.value)

    def to_json(self) -> dict:
        return {"value": self.value, "half_window_value": self.half_value,
                "window": self.window, "unbounded": self.unbounded,
                "argmax": self.argmax, "by_order": self.by_order}


def growing(value: float, half_value: float) -> bool:
    if value == 0.0:
        return False
    return value > GROWTH_RATIO * half_value


def _windowed(ks: np.ndarray, vals: np.ndarray, window: float):
    """Max of ``vals`` over the window and over the half window, with argmax."""
    i = int(np.argmax(vals))
    half = np.abs(ks) <= window / 2
    hv = float(vals[half].max()) if np.any(half) else 0.0
    return float(vals[i]), hv, ks[i]


def marcinkiewicz_seminorm(m: OperatorSymbol, gamma: int, K: int) -> WindowedSup:
    """``max_{l <= gamma} sup_{|k| <= K} || k^l (Delta^l m)(k) ||``."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    ks = np.arange(-K, K + 1)
    best, best_half, arg, orders = 0.0, 0.0, {}, []
    for l in range(gamma + 1):
        vals = np.abs(ks.astype(float)) ** l * operator_norms(forward_difference(m, l, ks))
        v, hv, k = _windowed(ks, vals, K)
        orders.append(v)
        if v > best or not arg:
            best, arg = v, {"l": l, "k": int(k)}
        best_half = max(best_half, hv)
    return WindowedSup(best, best_half, K, arg, orders)


def _dyadic_variation(diff_norms: Callable[[np.ndarray], np.ndarray], Jmax: int):
    sums = []
    for j in range(Jmax + 1):
        ks = np.concatenate([np.arange(2 ** j, 2 ** (j + 1)), -np.arange(2 ** j, 2 ** (j + 1))])
        sums.append(float(np.sum(diff_norms(ks))))
    return sums


def variational_seminorm(m: OperatorSymbol, Jmax: int) -> WindowedSup:
    """``sup_k ||m(k)|| + sup_j sum_{2^j <= |k| < 2^(j+1)} ||m(k+1) - m(k)||``."""
    if Jmax < 0:
        raise ValueError("Jmax must be nonnegative")
    K = 2 ** (Jmax + 1)
    ks = np.arange(-K, K + 1)
    sup_vals = operator_norms(m(ks))
    sums = _dyadic_variation(lambda k: operator_norms(forward_difference(m, 1, k)), Jmax)
    value = float(sup_vals.max()) + max(sums)
    half_sup = float(sup_vals[np.abs(ks) <= K // 2].max())
    half = half_sup + (max(sums[:-1]) if Jmax >= 1 else sums[0])
    return WindowedSup(value, half, K, {"block": int(np.argmax(sums))}, sums)


def _check_composable(d: OperatorSymbol, a: OperatorSymbol) -> None:
    if d.in_dim != a.out_dim:
        raise ValueError(f"cannot compose d ({d.out_dim}x{d.in_dim}) with a ({a.out_dim}x{a.in_dim})")


def joint_seminorm(d: OperatorSymbol, a: OperatorSymbol, gamma: int, K: int) -> WindowedSup:
    """``max_{l <= gamma} sup_{|k| <= K} || k^l (Delta^l d)(k) a(k+l) ||``."""
    _check_composable(d, a)
    ks = np.arange(-K, K + 1)
    best, best_half, arg, orders = 0.0, 0.0, {}, []
    for l in range(gamma + 1):
        prod = forward_difference(d, l, ks) @ a(ks + l)
        vals = np.abs(ks.astype(float)) ** l * operator_norms(prod)
        v, hv, k = _windowed(ks, vals, K)
        orders.append(v)
        if v > best or not arg:
            best, arg = v, {"l": l, "k": int(k)}
        best_half = max(best_half, hv)
    return WindowedSup(best, best_half, K, arg, orders)


def joint_variational(d: OperatorSymbol, a: OperatorSymbol, Jmax: int) -> WindowedSup:
    """``sup_k ||d(k) a(k)|| + sup_j sum_{2^j <= |k| < 2^(j+1)} ||(Delta d)(k) a(k+1)||``."""
    _check_composable(d, a)
    K = 2 ** (Jmax + 1)
    ks = np.arange(-K, K + 1)
    sup_vals = operator_norms(d(ks) @ a(ks))
    sums = _dyadic_variation(lambda k: operator_norms(forward_difference(d, 1, k) @ a(k + 1)), Jmax)
    value = float(sup_vals.max()) + max(sums)
    half = float(sup_vals[np.abs(ks) <= K // 2].max()) + (max(sums[:-1]) if Jmax >= 1 else sums[0])
    return WindowedSup(value, half, K, {"block": int(np.argmax(sums))}, sums)


# -- continuous symbols ------------------------------------------------------

def _central_difference(g: Callable, t: np.ndarray, n: int, h) -> np.ndarray:
    """``n``-th central difference quotient of ``g`` with step ``h``."""
    h = np.asarray(h, dtype=float)
    hb = h.reshape(h.shape + (1,) * 2) if h.ndim else h
    out = 0
    for i in range(n + 1):
        out = out + comb(n, i, exact=True) * (-1) ** i * g(t + (n / 2 - i) * h)
    return out / hb ** n


class ContinuousSymbol:
    """A matrix-valued function on the real line with derivative access.

    Parameters
    ----------
    func : callable
        ``func(t, r)`` returns the ``r``-th derivative at the points ``t``,
        shape ``(n, out_dim, in_dim)``, for ``r <= analytic_order``.
    analytic_order : int
        Highest derivative order ``func`` provides.
    piecewise : bool
        The function is piecewise smooth with knots; derivatives above
        ``analytic_order`` are then singular and are resolved at the scale of
        the evaluation grid (see ``__call__``).
    """

    def __init__(self, func, in_dim: int, out_dim: int, analytic_order: int = 0,
                 piecewise: bool = False, max_order: int = 3, fd_step: float = 1e-4,
                 name: str = "continuous"):
        self._func = func
        self.in_dim = int(in_dim)
        self.out_dim = int(out_dim)
        self.analytic_order = int(analytic_order)
        self.piecewise = piecewise
        self.max_order = max(int(max_order), self.analytic_order)
        self.fd_step = fd_step
        self.name = name

    def __call__(self, t, r: int = 0, resolution: float | None = None) -> np.ndarray:
        """Value or ``r``-th derivative at ``t``.

        Above ``analytic_order`` derivatives are finite differences: for
        piecewise symbols, an ``n``-th difference of the top analytic
        derivative with step ``resolution`` (the grid spacing); otherwise
        central differences of the values with Richardson extrapolation and
        step ``fd_step * (|t| + 1)``.
        """
        if r > self.max_order:
            raise ValueError(f"derivative order {r} unavailable (max {self.max_order})")
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if r <= self.analytic_order:
            out = self._eval(t, r)
        elif self.piecewise:
            a = self.analytic_order
            h = resolution if resolution is not None else self.fd_step
            out = _central_difference(lambda s: self._eval(s, a), t, r - a, h)
        else:
            h = self.fd_step * (np.abs(t) + 1.0)
            g = lambda s: self._eval(s, 0)
            d1 = _central_difference(g, t, r, h)
            d2 = _central_difference(g, t, r, h / 2)
            out = (4.0 * d2 - d1) / 3.0
        return out[0] if scalar else out

    def _eval(self, t: np.ndarray, r: int) -> np.ndarray:
        vals = np.asarray(self._func(t, r), dtype=complex)
        return np.broadcast_to(vals, (t.size, self.out_dim, self.in_dim))

    def restrict_to_integers(self) -> OperatorSymbol:
        """``k -> m(k)``."""
        return OperatorSymbol(lambda k: self._eval(np.asarray(k, dtype=float), 0),
                              self.in_dim, self.out_dim, name=f"{self.name}|Z")

    @classmethod
    def scalar(cls, fn, dim: int = 1, analytic_order: int = 0, name: str = "scalar",
               piecewise: bool = False) -> "ContinuousSymbol":
        """``t -> fn(t, r) I``; ``fn(t, r)`` returns scalar derivative values."""
        eye = np.eye(dim)
        return cls(lambda t, r: np.asarray(fn(t, r), dtype=complex)[:, None, None] * eye,
                   dim, dim, analytic_order, piecewise=piecewise, name=name)

    @classmethod
    def from_function(cls, fn, dim: int = 1, name: str = "function") -> "ContinuousSymbol":
        """Scalar symbol with finite-difference derivatives only."""
        return cls.scalar(lambda t, r: fn(t), dim, analytic_order=0, name=name)

    @classmethod
    def identity(cls, dim: int = 1) -> "ContinuousSymbol":
        return cls.scalar(lambda t, r: np.ones_like(t) if r == 0 else np.zeros_like(t),
                          dim, analytic_order=8, name="identity")

    @classmethod
    def hilbert(cls, dim: int = 1) -> "ContinuousSymbol":
        """``-i sgn(t)``; derivatives vanish away from 0."""
        return cls.scalar(lambda t, r: -1j * np.sign(t) if r == 0 else np.zeros_like(t),
                          dim, analytic_order=8, name="hilbert")


def symmetric_grid(T: float, per_unit: int) -> np.ndarray:
    """Cell-centred grid of ``[-T, T]`` with ``per_unit`` points per unit; never contains 0."""
    n = int(round(2 * T * per_unit))
    return -T + (np.arange(n) + 0.5) / per_unit


def continuous_m_seminorm(m: ContinuousSymbol, gamma: int, grid, tilde: bool = False) -> WindowedSup:
    """Grid max of ``|t|^l ||m^(l)(t)||`` (``(1+|t|)^l`` for ``tilde``) over ``l <= gamma``."""
    t = np.asarray(grid, dtype=float)
    if not tilde and np.any(t == 0):
        raise ValueError("the grid must exclude t = 0")
    if gamma > m.max_order:
        raise ValueError(f"derivative order {gamma} unavailable (max {m.max_order})")
    ts = np.sort(t)
    resolution = float(np.min(np.diff(ts))) if t.size > 1 else m.fd_step
    T = float(np.abs(t).max())
    best, best_half, arg, orders = 0.0, 0.0, {}, []
    for l in range(gamma + 1):
        wt = (1.0 + np.abs(t)) ** l if tilde else np.abs(t) ** l
        vals = wt * operator_norms(m(t, l, resolution=resolution))
        i = int(np.argmax(vals))
        v = float(vals[i])
        half = np.abs(t) <= T / 2
        hv = float(vals[half].max()) if np.any(half) else 0.0
        orders.append(v)
        if v > best or not arg:
            best, arg = v, {"l": l, "t": float(t[i])}
        best_half = max(best_half, hv)
    return WindowedSup(best, best_half, T, arg, orders)


@dataclass
class ConditionReport:
    """Discrete Marcinkiewicz seminorms of orders 1..3 and the variational seminorm."""

    window: int
    marcinkiewicz: dict
    variational: WindowedSup

    @property
    def bounded(self) -> dict:
        out = {f"M{g}": not s.unbounded for g, s in self.marcinkiewicz.items()}
        out["Var"] = not self.variational.unbounded
        return out

    def to_json(self) -> dict:
        return {"window": self.window,
                "marcinkiewicz": {str(g): s.to_json() for g, s in self.marcinkiewicz.items()},
                "variational": self.variational.to_json(),
                "bounded": self.bounded}


def condition_report(m: OperatorSymbol, K: int, gamma_max: int = 3) -> ConditionReport:
    Jmax = max(0, int(math.floor(math.log2(K))) - 1)
    return ConditionReport(K, {g: marcinkiewicz_seminorm(m, g, K) for g in range(1, gamma_max + 1)},
                           variational_seminorm(m, Jmax))


@dataclass
class ProxyBound:
    """Uniform bound standing in for an R-bound (exact only on Hilbert spaces)."""

    value: float
    marker: str = "PROXY"

    def __float__(self) -> float:
        return float(self.value)

    def to_json(self) -> dict:
        return {"value": self.value, "marker": self.marker}


def r_bounded_proxy(family) -> ProxyBound:
    """Supremum of the operator norms of a family of matrices."""
    mats = [np.atleast_2d(np.asarray(M, dtype=complex)) for M in family]
    if not mats:
        raise ValueError("empty operator family")
    return ProxyBound(float(max(operator_norms(M) for M in mats)))


@dataclass
class DyadicBound:
    """Kernel-majorant bound for a single dyadic piece ``(psi_j m)(Delta)``."""

    j: int
    l1: float
    bound: float
    constant: float
    maximal_norm: float
    tail_fraction: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def dyadic_operator_norm_bound(m: ContinuousSymbol, j: int, lp, M_norm: float,
                               n_grid: int = 2 ** 14, x_extent: float = 16.0,
                               constant: float = CHORD_ARC_CONSTANT) -> DyadicBound:
    """Upper bound for ``||(psi_j m)(Delta)||`` on a space where ``||M|| <= M_norm``.

    The inverse Fourier transform of ``eta = psi_j m`` is evaluated by FFT in
    the rescaled variable ``x = 2^-j xi`` (the L1 norm of the kernel and of its
    even decreasing majorant are invariant under this rescaling).  The bound is
    ``constant * ||majorant||_L1 * M_norm``.
    """
    if j < 0:
        raise ValueError("block index must be nonnegative")
    N = int(n_grid)
    dx = 2.0 * x_extent / N
    x = -x_extent + dx * np.arange(N)
    scale = 2.0 ** j
    cut = lp.psi_j(scale * x, j)
    eta = np.zeros((N, m.out_dim, m.in_dim), dtype=complex)
    live = cut != 0
    if np.any(live):
        eta[live] = cut[live][:, None, None] * m(scale * x[live])
    sign = np.where(np.arange(N) % 2 == 0, 1.0, -1.0)[:, None, None]
    kern = N * np.fft.ifft(sign * eta, axis=0) * dx / (2.0 * np.pi)
    ds = np.pi / x_extent
    s = (np.arange(N) - N // 2) * ds
    # with the (-1)^n twist, ifft index m sits at s = (m - N/2) ds (up to a unimodular phase)
    absk = operator_norms(kern)
    total = float(np.sum(absk) * ds)
    if total == 0.0:
        return DyadicBound(j, 0.0, 0.0, constant, M_norm, 0.0)
    tail = float(np.sum(absk[np.abs(s) > s.max() / 2]) * ds) / total
    if tail > 0.01:
        raise ValueError(f"kernel underresolved: {tail:.2%} of its L1 mass lies in the outer window")
    radii, inv = np.unique(np.abs(s), return_inverse=True)
    per_radius = np.zeros(radii.size)
    np.maximum.at(per_radius, inv, absk)
    majorant = np.maximum.accumulate(per_radius[::-1])[::-1][inv]
    l1 = float(np.sum(majorant) * ds)
    return DyadicBound(j, l1, constant * l1 * M_norm, constant, M_norm, tail)
