"""Periodic problem ``(P u')' + B u' + A u + c * u = f`` with matrix coefficients.

In Fourier variables the equation reads ``b(k) u_hat(k) = f_hat(k)`` with

    b(k) = -k^2 P + i k B + A + c_hat(k),

so the solution operator is the multiplier ``a(k) = b(k)^{-1}``.  This module
assembles ``b``, solves, checks the difference calculus of ``a`` and derives
the maximal-regularity and well-posedness flags from windowed sups of
``b(k)^{-1}``, ``k B b(k)^{-1}``, ``k^2 P b(k)^{-1}`` and ``k b(k)^{-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._io import complex_matrix_from_json, complex_matrix_to_json
from ._parallel import pmap
from .fourier import TrigPolynomial, synthesize
from .jodeit import JodeitKernel, build_kernel, extension
from .spaces import LittlewoodPaley, SpaceDescriptor, default_grid
from .symbols import (
    OperatorSymbol,
    WindowedSup,
    _windowed,
    dyadic_operator_norm_bound,
    joint_seminorm,
    marcinkiewicz_seminorm,
    operator_norms,
    r_bounded_proxy,
)

__all__ = [
    "SINGULAR_TOL",
    "SingularSymbol",
    "MeanObstruction",
    "AeeProblem",
    "SolutionSymbols",
    "CharacterizationReport",
    "assemble_b",
    "is_singular",
    "solution_symbols",
    "solve",
    "forward",
    "residual",
    "strong_solution_ingredients",
    "verify_difference_identities",
    "characterize",
    "delay_symbol",
    "dyadic_norm_table",
    "maximal_regularity_experiment",
    "random_problem",
]

#: b(k) is singular when its smallest singular value is at most this times its norm
SINGULAR_TOL = 1e-10


class SingularSymbol(Exception):
    """``b(k)`` is not invertible at the listed frequencies."""

    def __init__(self, frequencies):
        self.frequencies = sorted(int(k) for k in frequencies)
        self.k = min(self.frequencies, key=lambda k: (abs(k), -k))
        super().__init__(f"b(k) is singular at k = {self.frequencies}")


class MeanObstruction(Exception):
    """``f_hat(0) != 0`` while ``b(0)`` is singular."""


@dataclass(frozen=True)
class AeeProblem:
    """Coefficients of the periodic problem.

    ``Z`` optionally gives a positive definite matrix defining the norm
    ``|z|_Z = sqrt(z^* Z z)`` of the source space of the convolution; the
    default is the Euclidean norm.
    """

    P: np.ndarray
    B: np.ndarray
    A: np.ndarray
    conv: OperatorSymbol | None = None
    K: int = 64
    Z: np.ndarray | None = None

    def __post_init__(self):
        mats = [np.atleast_2d(np.asarray(M, dtype=complex)) for M in (self.P, self.B, self.A)]
        d = mats[0].shape[0]
        for M in mats:
            if M.shape != (d, d):
                raise ValueError("P, B and A must be square matrices of equal size")
        for name, M in zip("PBA", mats):
            object.__setattr__(self, name, M)
        if self.conv is not None:
            if (self.conv.in_dim, self.conv.out_dim) != (d, d):
                raise ValueError("convolution symbol dimension does not match the coefficients")
            if not self.conv.defined_on(-self.K - 3, self.K + 3):
                raise ValueError(f"convolution symbol must be defined on [-{self.K + 3}, {self.K + 3}]")
        if self.Z is not None:
            Z = np.asarray(self.Z, dtype=complex)
            if Z.shape != (d, d) or not np.allclose(Z, Z.conj().T):
                raise ValueError("Z must be a Hermitian matrix of the problem dimension")
            if np.linalg.eigvalsh(Z).min() <= 0:
                raise ValueError("Z must be positive definite")
            object.__setattr__(self, "Z", Z)
        if self.K < 1:
            raise ValueError("K must be >= 1")

    @property
    def dim(self) -> int:
        return self.P.shape[0]

    def c_hat(self, k) -> np.ndarray:
        ks = np.atleast_1d(np.asarray(k))
        if self.conv is None:
            return np.zeros((ks.size, self.dim, self.dim), dtype=complex)
        return self.conv(ks)

    def z_root(self) -> np.ndarray:
        """``Z^{1/2}``, so that ``|z|_Z = |Z^{1/2} z|``."""
        if self.Z is None:
            return np.eye(self.dim)
        vals, vecs = np.linalg.eigh(self.Z)
        return (vecs * np.sqrt(vals)) @ vecs.conj().T

    def to_json(self) -> dict:
        out = {"dim": self.dim, "P": complex_matrix_to_json(self.P),
               "B": complex_matrix_to_json(self.B), "A": complex_matrix_to_json(self.A),
               "conv": None if self.conv is None else self.conv.to_json(), "K": self.K}
        if self.Z is not None:
            out["Z"] = complex_matrix_to_json(self.Z)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "AeeProblem":
        P, B, A = (complex_matrix_from_json(obj[n]) for n in ("P", "B", "A"))
        if "dim" in obj and P.shape[0] != int(obj["dim"]):
            raise ValueError("dim does not match the coefficient matrices")
        conv = obj.get("conv")
        conv = None if conv is None else OperatorSymbol.from_json(conv)
        Z = obj.get("Z")
        return cls(P, B, A, conv, int(obj.get("K", 64)),
                   None if Z is None else complex_matrix_from_json(Z))


def assemble_b(problem: AeeProblem, k) -> np.ndarray:
    """``b(k) = -k^2 P + i k B + A + c_hat(k)`` for an integer or an integer array."""
    scalar = np.ndim(k) == 0
    ks = np.atleast_1d(np.asarray(k))
    kk = ks.astype(float)[:, None, None]
    out = -kk ** 2 * problem.P + 1j * kk * problem.B + problem.A + problem.c_hat(ks)
    return out[0] if scalar else out


def is_singular(M: np.ndarray, tol: float = SINGULAR_TOL) -> np.ndarray:
    """Smallest singular value at most ``tol`` times the largest (stacks allowed)."""
    s = np.linalg.svd(M, compute_uv=False)
    return s[..., -1] <= tol * s[..., 0]


def _inverses(problem: AeeProblem, ks: np.ndarray):
    b = assemble_b(problem, ks)
    sing = is_singular(b)
    inv = np.zeros_like(b)
    if np.any(~sing):
        inv[~sing] = np.linalg.inv(b[~sing])
    return b, inv, sing


@dataclass
class SolutionSymbols:
    """``a = b^{-1}`` and the derived symbols on ``-K..K``.

    ``a0 = i k B a``, ``a1 = -k^2 P a``, ``a2 = i k a``, ``a3 = i k P a``; all
    vanish at ``k = 0`` where the mean is handled by ``b0_inv``.
    """

    a: OperatorSymbol
    a0: OperatorSymbol
    a1: OperatorSymbol
    a2: OperatorSymbol
    a3: OperatorSymbol
    b0_inv: np.ndarray | None
    K: int


def solution_symbols(problem: AeeProblem, K: int | None = None) -> SolutionSymbols:
    K = problem.K if K is None else K
    ks = np.arange(-K, K + 1)
    _, inv, sing = _inverses(problem, ks)
    bad = ks[sing & (ks != 0)]
    if bad.size:
        raise SingularSymbol(bad)
    b0_inv = None if sing[K] else inv[K].copy()
    inv[K] = 0.0
    kk = ks.astype(float)[:, None, None]
    tab = lambda vals: OperatorSymbol.table(-K, vals)
    return SolutionSymbols(
        a=tab(inv),
        a0=tab(1j * kk * (problem.B @ inv)),
        a1=tab(-kk ** 2 * (problem.P @ inv)),
        a2=tab(1j * kk * inv),
        a3=tab(1j * kk * (problem.P @ inv)),
        b0_inv=b0_inv,
        K=K,
    )


def solve(problem: AeeProblem, f: TrigPolynomial) -> TrigPolynomial:
    """``u = a(Delta) f + b(0)^{-1} f_hat(0)``; every coefficient is forced, so ``u`` is unique."""
    if f.dim != problem.dim:
        raise ValueError(f"forcing has dimension {f.dim}, problem has {problem.dim}")
    if f.order > problem.K:
        raise ValueError(f"forcing order {f.order} exceeds the truncation order {problem.K}")
    syms = solution_symbols(problem, f.order)
    coeffs = np.einsum("kij,kj->ki", syms.a(f.frequencies), f.coeffs)
    f0 = f.coeff(0)
    if np.any(f0 != 0):
        if syms.b0_inv is None:
            raise MeanObstruction("f has nonzero mean but b(0) is singular")
        coeffs[f.order] = syms.b0_inv @ f0
    return TrigPolynomial(coeffs)


def forward(problem: AeeProblem, u: TrigPolynomial) -> TrigPolynomial:
    """``(P u')' + B u' + A u + c * u`` coefficientwise."""
    b = assemble_b(problem, u.frequencies)
    return TrigPolynomial(np.einsum("kij,kj->ki", b, u.coeffs))


def residual(problem: AeeProblem, u: TrigPolynomial, f: TrigPolynomial) -> float:
    """``max_k |b(k) u_hat(k) - f_hat(k)|``."""
    K = max(u.order, f.order)
    diff = forward(problem, u.with_order(K)).coeffs - f.with_order(K).coeffs
    return float(np.max(np.linalg.norm(diff, axis=1))) if diff.size else 0.0


def strong_solution_ingredients(problem: AeeProblem, u: TrigPolynomial) -> dict:
    """Largest coefficient norm of each term of the equation evaluated at ``u``."""
    ks = u.frequencies.astype(float)[:, None]
    du = 1j * ks * u.coeffs
    mx = lambda c: float(np.max(np.linalg.norm(c, axis=1)))
    Pdu = du @ problem.P.T
    return {
        "u": mx(u.coeffs),
        "du": mx(du),
        "P_du": mx(Pdu),
        "d_P_du": mx(1j * ks * Pdu),
        "B_du": mx(du @ problem.B.T),
        "A_u": mx(u.coeffs @ problem.A.T),
        "c_u": mx(np.einsum("kij,kj->ki", problem.c_hat(u.frequencies), u.coeffs)),
    }


# -- difference calculus -----------------------------------------------------------

class _Tracked:
    """A matrix together with a magnitude bounding the size of the terms that formed it."""

    __slots__ = ("v", "m")

    def __init__(self, v, m):
        self.v, self.m = v, m

    def __add__(self, o):
        return _Tracked(self.v + o.v, self.m + o.m)

    def __sub__(self, o):
        return _Tracked(self.v - o.v, self.m + o.m)

    def __matmul__(self, o):
        return _Tracked(self.v @ o.v, self.m * o.m)

    def __rmul__(self, c):
        return _Tracked(c * self.v, abs(c) * self.m)


def _norm(M) -> np.ndarray:
    return operator_norms(M)[..., None, None]


def _track(M) -> _Tracked:
    return _Tracked(M, _norm(M))


def _diff(seq, l: int, i: np.ndarray) -> _Tracked:
    """``l``-th forward difference of a tracked sequence at array index ``i``."""
    out = None
    for j in range(l + 1):
        c = math.comb(l, j) * (-1) ** (l - j)
        term = c * _track(seq[i + j])
        out = term if out is None else out + term
    return out


def _rel(lhs: _Tracked, rhs: _Tracked) -> float:
    err = operator_norms(lhs.v - rhs.v)
    scale = (lhs.m + rhs.m)[..., 0, 0]
    scale = np.where(scale > 0, scale, 1.0)
    return float(np.max(err / scale)) if err.size else 0.0


def verify_difference_identities(problem: AeeProblem, K: int | None = None) -> dict:
    """Maximal relative residual of each difference identity over ``0 < |k| <= K - 3``.

    Residuals are measured relative to the sum of the magnitudes of all terms
    entering either side, so cancellation between large terms does not
    inflate them.  Stencils touching a frequency where ``b`` is singular are
    skipped; a singular ``b(k)`` with ``0 < |k| <= K`` raises.
    """
    K = problem.K if K is None else K
    ks = np.arange(-K, K + 1)
    b, a, sing = _inverses(problem, ks)
    bad = ks[sing & (ks != 0)]
    if bad.size:
        raise SingularSymbol(bad)
    c = problem.c_hat(ks)
    kk = ks.astype(float)[:, None, None]
    P, B = problem.P, problem.B
    a0 = 1j * kk * (B @ a)
    sel = (np.abs(ks) <= K - 3) & (ks != 0)
    for j in range(4):
        sel &= ~np.roll(sing, -j)
    i = np.nonzero(sel)[0]
    k = kk[i]
    T = _track
    out = {}
    db = _diff(b, 1, i)
    out["delta_b"] = _rel(db, T(-(2 * k + 1) * P) + T(np.broadcast_to(1j * B, db.v.shape)) + _diff(c, 1, i))
    out["delta2_b"] = _rel(_diff(b, 2, i), T(np.broadcast_to(-2.0 * P, db.v.shape)) + _diff(c, 2, i))
    out["delta3_b"] = _rel(_diff(b, 3, i), _diff(c, 3, i))
    da = _diff(a, 1, i)
    out["delta_a_order1"] = _rel(da, -1.0 * (T(a[i]) @ db @ T(a[i + 1])))
    da2 = _diff(a, 2, i)
    rhs2 = -2.0 * (da @ _diff(b, 1, i + 1) @ T(a[i + 2])) - 1.0 * (T(a[i]) @ _diff(b, 2, i) @ T(a[i + 2]))
    out["delta_a_order2"] = _rel(da2, rhs2)
    rhs3 = (-3.0 * (da2 @ _diff(b, 1, i + 2) @ T(a[i + 3]))
            - 1.0 * (T(a[i]) @ _diff(b, 3, i) @ T(a[i + 3]))
            - 3.0 * (da @ _diff(b, 2, i + 1) @ T(a[i + 3])))
    out["delta_a_order3"] = _rel(_diff(a, 3, i), rhs3)
    rhs0 = T(1j * B @ a[i + 1]) + T(1j * k * B) @ da
    out["delta_a0"] = _rel(_diff(a0, 1, i), rhs0)
    return out


# -- characterization ----------------------------------------------------------------

@dataclass
class CharacterizationReport:
    """Windowed sups, seminorms and the resulting regularity flags."""

    window: int
    bijective: bool
    singular_frequencies: list
    sups: dict
    marcinkiewicz: dict
    joint: dict
    proxies: dict
    implication: dict
    mr_flag: bool
    wp_flag: bool
    findings: list = field(default_factory=list)

    @property
    def mr_flag_R(self) -> dict:
        return {"value": self.mr_flag, "marker": "PROXY"}

    @property
    def wp_flag_R(self) -> dict:
        return {"value": self.wp_flag, "marker": "PROXY"}

    def to_json(self) -> dict:
        js = lambda d: {k: (v.to_json() if hasattr(v, "to_json") else v) for k, v in d.items()}
        return {
            "window": self.window,
            "bijective": self.bijective,
            "singular_frequencies": self.singular_frequencies,
            "sups": js(self.sups),
            "marcinkiewicz": {name: {str(g): s.to_json() for g, s in rep.items()}
                              for name, rep in self.marcinkiewicz.items()},
            "joint": {str(g): s.to_json() for g, s in self.joint.items()},
            "r_bounded_proxies": js(self.proxies),
            "implication": self.implication,
            "mr_flag": self.mr_flag,
            "wp_flag": self.wp_flag,
            "mr_flag_R": self.mr_flag_R,
            "wp_flag_R": self.wp_flag_R,
            "findings": self.findings,
        }


def _sup(ks, norms, K) -> WindowedSup:
    v, hv, k = _windowed(ks, norms, K)
    return WindowedSup(v, hv, K, {"k": int(k)})


def characterize(problem: AeeProblem, K: int | None = None, gamma: int = 3) -> CharacterizationReport:
    """Flags for maximal regularity and well-posedness on the window ``|k| <= K``.

    ``mr_flag``: every ``b(k)`` is invertible and ``b^{-1}``, ``k B b^{-1}``,
    ``k^2 P b^{-1}`` stay bounded.  ``wp_flag``: additionally ``k b^{-1}`` is
    bounded.  Boundedness is the windowed-sup growth test.  When the symbols
    are invertible, the discrete Marcinkiewicz seminorms of ``a``, ``a0``,
    ``a1``, ``a2`` and the joint seminorm of ``c_hat`` relative to ``a`` are
    reported, and the implication "uniform bounds and joint condition imply
    finite seminorms of a, a0, a1" is checked.
    """
    K = problem.K if K is None else K
    ks = np.arange(-K, K + 1)
    _, inv, sing = _inverses(problem, ks)
    singular = [int(k) for k in ks[sing]]
    findings = []
    if singular:
        findings.append({"type": "SingularSymbol", "frequencies": singular})
    live = ~sing
    kl = ks[live]
    inv_l = inv[live]
    kk = kl.astype(float)[:, None, None]
    sups = {
        "inv": _sup(kl, operator_norms(inv_l), K),
        "kB_inv": _sup(kl, operator_norms(kk * (problem.B @ inv_l)), K),
        "k2P_inv": _sup(kl, operator_norms(kk ** 2 * (problem.P @ inv_l)), K),
        "k_inv": _sup(kl, operator_norms(kk * inv_l), K),
    }
    if problem.Z is not None:
        sups["inv_XZ"] = _sup(kl, operator_norms(problem.z_root() @ inv_l), K)
    bijective = not singular
    mr_keys = ["inv", "kB_inv", "k2P_inv"] + (["inv_XZ"] if problem.Z is not None else [])
    mr_flag = bijective and all(not sups[n].unbounded for n in mr_keys)
    wp_flag = mr_flag and not sups["k_inv"].unbounded
    proxies = {}
    if kl.size:
        proxies = {
            "inv": r_bounded_proxy(inv_l),
            "kB_inv": r_bounded_proxy(kk * (problem.B @ inv_l)),
            "k2P_inv": r_bounded_proxy(kk ** 2 * (problem.P @ inv_l)),
            "k_inv": r_bounded_proxy(kk * inv_l),
        }

    marc, joint, implication = {}, {}, {"checked": False, "counterexamples": []}
    W = K - max(gamma, 3)
    if bijective and W >= 1:
        syms = solution_symbols(problem, K)
        conv = problem.conv if problem.conv is not None else OperatorSymbol.zero(problem.dim)
        Y_parts = [np.eye(problem.dim), problem.A, problem.B, problem.P, problem.z_root()]
        for g in range(1, gamma + 1):
            joint[g] = joint_seminorm(conv, syms.a, g, W)
        for name in ("a", "a0", "a1", "a2"):
            marc[name] = {g: marcinkiewicz_seminorm(getattr(syms, name), g, W) for g in range(1, gamma + 1)}
        marc["a_Y"] = {}
        for g in range(1, gamma + 1):
            parts = [marcinkiewicz_seminorm(M @ syms.a, g, W) for M in Y_parts]
            best = max(parts, key=lambda s: s.value)
            marc["a_Y"][g] = WindowedSup(best.value, max(s.half_value for s in parts), W,
                                         best.argmax, [s.value for s in parts])
        hyp_uniform = all(not sups[n].unbounded for n in ("inv", "kB_inv", "k2P_inv"))
        implication["checked"] = True
        for g in range(1, gamma + 1):
            if hyp_uniform and not joint[g].unbounded:
                for name in ("a_Y", "a0", "a1"):
                    if marc[name][g].unbounded:
                        implication["counterexamples"].append({"gamma": g, "symbol": name})
    return CharacterizationReport(K, bijective, singular, sups, marc, joint, proxies,
                                  implication, mr_flag, wp_flag, findings)


def delay_symbol(h: OperatorSymbol, g: OperatorSymbol) -> OperatorSymbol:
    """``c_hat(k) = h(k) + i k g(k)``."""
    if (h.in_dim, h.out_dim) != (g.in_dim, g.out_dim):
        raise ValueError("h and g must have equal dimensions")
    return h + g.times_scalar(lambda k: 1j * np.asarray(k, dtype=float), "ik")


# -- experiments ---------------------------------------------------------------------

def dyadic_norm_table(m: OperatorSymbol, space: SpaceDescriptor, K: int,
                      lp: LittlewoodPaley | None = None, kernel: JodeitKernel | None = None,
                      n_probes: int = 8, seed: int = 0, M_norm: float | None = None,
                      threads: int | None = None) -> dict:
    """Lower and upper estimates of ``||(psi_j m)(Delta)||`` on ``space`` for every active block.

    The lower estimate is the largest ratio ``||(psi_j m)(Delta) f|| / ||f||``
    over random probes filtered to the block and over single modes along the
    top singular vector of each ``psi_j(k) m(k)``.  The upper estimate is the
    kernel-majorant bound of the smooth extension of ``m``; it is computed for
    blocks whose extension only needs ``m`` on ``-K..K``.
    """
    from .weights import maximal_norm_estimate

    if n_probes < 1:
        raise ValueError("probe set is empty")
    if not m.defined_on(-K, K):
        raise ValueError(f"symbol must be defined on [-{K}, {K}]")
    lp = lp or LittlewoodPaley(4)
    kernel = kernel or build_kernel(4)
    G = default_grid(K)
    if space.grid_size is not None:
        G = max(G, space.grid_size)
    if M_norm is None:
        M_norm = maximal_norm_estimate(space, G=space.grid_size or 256, seed=seed).effective
    rng = np.random.default_rng(seed)
    ks = np.arange(-K, K + 1)
    mvals = m(ks)
    ext = extension(kernel, m.restricted(-K, K))
    rows = []
    for j in LittlewoodPaley.active_blocks(K):
        probes = [TrigPolynomial.random(m.in_dim, K, rng).scale(lp.chi_j(ks, j)) for _ in range(n_probes)]
        block_vals = lp.psi_j(ks, j)[:, None, None] * mvals
        for idx in np.nonzero(operator_norms(block_vals) > 0)[0]:
            _, _, vh = np.linalg.svd(block_vals[idx])
            probes.append(TrigPolynomial.mode(int(ks[idx]), vh[0].conj(), K))

        def ratio(f, bv=block_vals):
            nf = space.norm_of_values(synthesize(f, G).pointwise_norm())
            if nf == 0:
                return 0.0
            mf = TrigPolynomial(np.einsum("kij,kj->ki", bv, f.coeffs))
            return space.norm_of_values(synthesize(mf, G).pointwise_norm()) / nf

        lower = float(max(pmap(ratio, probes, threads)))
        row = {"j": j, "lower": lower, "upper": None, "l1": None, "consistent": True}
        if 2 ** (j + 1) + 2 <= K:
            bound = dyadic_operator_norm_bound(ext, j, lp, M_norm)
            row.update(upper=bound.bound, l1=bound.l1, consistent=bool(lower <= bound.bound))
        rows.append(row)
    uppers = [r["upper"] for r in rows if r["upper"] is not None]
    return {
        "maximal_norm": float(M_norm),
        "grid": G,
        "blocks": rows,
        "sup_lower": max(r["lower"] for r in rows),
        "sup_upper": max(uppers) if uppers else None,
        "consistent": all(r["consistent"] for r in rows),
    }


def maximal_regularity_experiment(problem: AeeProblem, space: SpaceDescriptor,
                                  lp: LittlewoodPaley | None = None, n_probes: int = 8,
                                  seed: int = 0, M_norm: float | None = None,
                                  kernel: JodeitKernel | None = None,
                                  threads: int | None = None) -> dict:
    """Dyadic pieces ``(psi_j m)(Delta)`` for ``m`` in ``a, a0, a1``.

    Every symbol gets a :func:`dyadic_norm_table`; the report juxtaposes the
    lower and upper estimates per block and over all blocks.
    """
    from .weights import maximal_norm_estimate

    if n_probes < 1:
        raise ValueError("probe set is empty")
    syms = solution_symbols(problem)
    if M_norm is None:
        M_norm = maximal_norm_estimate(space, G=space.grid_size or 256, seed=seed).effective
    out = {"maximal_norm": float(M_norm), "symbols": {}}
    for name in ("a", "a0", "a1"):
        out["symbols"][name] = dyadic_norm_table(getattr(syms, name), space, problem.K, lp, kernel,
                                                 n_probes, seed, M_norm, threads)
    out["consistent"] = all(t["consistent"] for t in out["symbols"].values())
    return out


def random_problem(dim: int, K: int = 64, seed: int = 0, conv_scale: float = 0.3) -> AeeProblem:
    """A seeded problem whose symbol is invertible on ``|k| <= K + 3``.

    ``P`` is Hermitian positive definite, so ``-k^2 P`` dominates for large
    ``k``; seeds giving a nearly singular ``b(k)`` are skipped deterministically.
    """
    for attempt in range(100):
        rng = np.random.default_rng([seed, attempt])
        cplx = lambda: rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        Q = cplx()
        P = np.eye(dim) + 0.3 * (Q @ Q.conj().T) / dim
        B = 0.5 * cplx()
        A = cplx() + 2.0 * np.eye(dim)
        conv = OperatorSymbol.seeded_random(dim, dim, seed=int(rng.integers(2 ** 31)), scale=conv_scale)
        prob = AeeProblem(P, B, A, conv, K)
        b = assemble_b(prob, np.arange(-K - 3, K + 4))
        s = np.linalg.svd(b, compute_uv=False)
        if np.min(s[:, -1] / s[:, 0]) > 1e-4:
            return prob
    raise RuntimeError("could not draw a well-conditioned problem")
