"""The maximal operator on the circle, Muckenhoupt constants and the
Rubio de Francia iteration.

Functions on the circle are grid samples, read as piecewise constant on the
cells ``[t_g - h/2, t_g + h/2)`` with ``h = 2*pi/G``.  The maximal operator is

    M f(tau) = sup_{0 < eps <= pi} (1/eps) * integral_{|t - tau| < eps} |f(t)| dt

(arclength arcs, normalized by ``eps`` rather than the arc length ``2 eps``,
so ``M`` maps the constant ``c`` to ``2c``).  For piecewise constant ``f`` and
grid centres ``tau`` the supremum is attained at ``eps = (r + 1/2) h`` or at
``eps = pi``, which makes the grid computation exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .fourier import SampledFunction, TrigPolynomial, grid_points, synthesize
from .spaces import Lp, SpaceDescriptor, WeightedLp, _conjugate
from .symbols import GROWTH_RATIO, ContinuousSymbol, operator_norms

__all__ = [
    "Weight",
    "MaximalEstimate",
    "ApConstant",
    "RubioDeFrancia",
    "AqWeight",
    "PeriodicExtension",
    "DeLeeuwReport",
    "maximal_function",
    "ap_constant",
    "line_ap_constant",
    "default_probes",
    "maximal_norm_estimate",
    "rubio_de_francia",
    "build_aq_weight",
    "periodic_extension",
    "deleeuw_restriction_check",
]


def _power_cell_averages(alpha: float, G: int) -> np.ndarray:
    """Exact averages of ``|t|^alpha`` (periodic ``|t|`` on ``(-pi, pi]``) over the grid cells."""
    if alpha <= -1.0:
        raise ValueError("|t|^alpha is not locally integrable for alpha <= -1")
    h = 2.0 * np.pi / G
    c = grid_points(G)
    F = lambda t: np.sign(t) * np.abs(t) ** (alpha + 1.0) / (alpha + 1.0)
    out = (F(c + h / 2) - F(c - h / 2)) / h
    # the cell around -pi wraps; |t| is symmetric about pi there
    out[0] = 2.0 * (np.pi ** (alpha + 1.0) - (np.pi - h / 2) ** (alpha + 1.0)) / (alpha + 1.0) / h
    return out


class Weight:
    """A strictly positive weight sampled on the uniform grid of the circle.

    Closed-form weights (``constant`` and ``power``) remember how they were
    built so that they can be resampled on finer grids.
    """

    def __init__(self, samples, kind: str = "samples", params: dict | None = None):
        s = np.array(samples, dtype=float).ravel()
        if s.size == 0:
            raise ValueError("empty weight")
        if not np.all(np.isfinite(s)) or np.any(s <= 0):
            raise ValueError("weights must be finite and strictly positive")
        s.setflags(write=False)
        self.samples = s
        self.kind = kind
        self.params = dict(params or {})

    @property
    def G(self) -> int:
        return self.samples.size

    @classmethod
    def constant(cls, value: float = 1.0, G: int = 256) -> "Weight":
        return cls(np.full(G, float(value)), "constant", {"value": float(value)})

    @classmethod
    def power_law(cls, alpha: float, G: int = 256) -> "Weight":
        """``|t|^alpha`` averaged over each grid cell (finite at ``t = 0`` for ``alpha > -1``)."""
        return cls(_power_cell_averages(alpha, G), "power", {"alpha": float(alpha)})

    def resampled(self, G: int) -> "Weight | None":
        """The same closed-form weight on another grid; ``None`` for sampled weights."""
        if self.kind == "constant":
            return Weight.constant(self.params["value"], G)
        if self.kind == "power":
            return Weight.power_law(self.params["alpha"], G)
        return None

    def raised(self, e: float) -> "Weight":
        return Weight(self.samples ** e)

    def on_grid(self, G: int) -> np.ndarray:
        """Samples on a grid of size ``G``, a multiple of ``self.G`` (piecewise constant)."""
        if G % self.G:
            raise ValueError(f"weight grid {self.G} does not divide sample grid {G}")
        return np.repeat(self.samples, G // self.G)

    def to_json(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "value": self.params["value"], "G": self.G}
        if self.kind == "power":
            return {"kind": "power", "alpha": self.params["alpha"], "G": self.G}
        return {"kind": "samples", "samples": self.samples.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Weight":
        kind = obj.get("kind")
        if kind == "constant":
            return cls.constant(float(obj.get("value", 1.0)), int(obj.get("G", 256)))
        if kind == "power":
            return cls.power_law(float(obj["alpha"]), int(obj.get("G", 256)))
        if kind == "samples":
            return cls(obj["samples"])
        raise ValueError(f"unknown weight kind {kind!r}")

    def __repr__(self) -> str:
        return f"Weight({self.kind}, G={self.G}, {self.params})"


def _abs_values(f) -> np.ndarray:
    if isinstance(f, SampledFunction):
        return f.pointwise_norm()
    if isinstance(f, Weight):
        return f.samples.copy()
    v = np.asarray(f)
    if v.ndim == 2:
        return np.linalg.norm(v, axis=1)
    return np.abs(v).astype(float)


def _maximal(v: np.ndarray) -> np.ndarray:
    G = v.size
    if G < 8:
        raise ValueError("maximal function needs at least 8 grid points")
    P = np.concatenate([[0.0], np.cumsum(np.concatenate([v, v, v]))])
    centres = np.arange(G) + G
    best = np.full(G, 2.0 * v.mean())      # eps = pi, the whole circle
    chunk = max(1, (1 << 21) // G)
    for r0 in range(0, G // 2, chunk):
        r = np.arange(r0, min(G // 2, r0 + chunk))
        sums = P[centres[:, None] + r[None, :] + 1] - P[centres[:, None] - r[None, :]]
        best = np.maximum(best, np.max(sums / (r + 0.5), axis=1))
    return best


def maximal_function(f):
    """``M |f|`` on the grid.

    Accepts a :class:`SampledFunction` (returns one), or an array of samples of
    shape ``(G,)`` or ``(G, d)`` (returns a real array of shape ``(G,)``).
    """
    out = _maximal(_abs_values(f))
    return SampledFunction(out) if isinstance(f, SampledFunction) else out


@dataclass
class ApConstant:
    """Brute-force Muckenhoupt constant over all grid arcs."""

    value: float
    p: float
    arc_cells: int
    refined_value: float | None = None

    @property
    def unbounded(self) -> bool:
        if self.refined_value is None:
            return False
        return self.refined_value > GROWTH_RATIO * self.value

    def __float__(self) -> float:
        return float(self.value)

    def to_json(self) -> dict:
        return {"value": self.value, "p": self.p, "arc_cells": self.arc_cells,
                "refined_value": self.refined_value, "unbounded": self.unbounded}


def _ap_brute(w: np.ndarray, sigma: np.ndarray, p: float, cyclic: bool = True):
    G = w.size
    if cyclic:
        Pw = np.concatenate([[0.0], np.cumsum(np.concatenate([w, w]))])
        Ps = np.concatenate([[0.0], np.cumsum(np.concatenate([sigma, sigma]))])
    else:
        Pw = np.concatenate([[0.0], np.cumsum(w)])
        Ps = np.concatenate([[0.0], np.cumsum(sigma)])
    best, best_len = 0.0, 1
    for L in range(1, G + 1):
        starts = np.arange(G if cyclic else G - L + 1)
        aw = (Pw[starts + L] - Pw[starts]) / L
        asg = (Ps[starts + L] - Ps[starts]) / L
        v = float(np.max(aw * asg ** (p - 1.0)))
        if v > best:
            best, best_len = v, L
    return best, best_len


def ap_constant(w: Weight, p: float, refine: bool = True) -> ApConstant:
    """``max_I avg_I(w) * avg_I(w^(1-p'))^(p-1)`` over all grid arcs ``I``.

    For closed-form weights the constant is recomputed on the doubled grid;
    growth beyond the shared ratio threshold marks the weight as outside A_p.
    """
    if not 1.0 < p < math.inf:
        raise ValueError("p must lie in (1, inf)")
    s = np.asarray(w.samples if isinstance(w, Weight) else w, dtype=float)
    if np.any(s <= 0):
        raise ValueError("weight must be strictly positive")
    if np.all(s == s[0]):
        val, L = 1.0, 1                   # exact for constants, avoids rounding
    else:
        val, L = _ap_brute(s, s ** (1.0 - _conjugate(p)), p)
        val = max(val, 1.0)
    refined = None
    if refine and isinstance(w, Weight):
        finer = w.resampled(2 * w.G)
        if finer is not None:
            refined = ap_constant(finer, p, refine=False).value
    return ApConstant(val, p, L, refined)


def line_ap_constant(samples: np.ndarray, p: float) -> float:
    """A_p constant over all intervals inside a finite window of the line."""
    s = np.asarray(samples, dtype=float)
    return max(1.0, _ap_brute(s, s ** (1.0 - _conjugate(p)), p, cyclic=False)[0])


@dataclass
class MaximalEstimate:
    """Probe-based lower estimate of the norm of ``M`` and the constant used downstream."""

    lower: float
    safety: float
    ratios: list = field(default_factory=list)

    @property
    def effective(self) -> float:
        return max(1.0, self.lower * self.safety)

    def to_json(self) -> dict:
        return {"lower": self.lower, "safety": self.safety, "effective": self.effective}


def default_probes(G: int, seed: int = 0, n_random: int = 8) -> list[np.ndarray]:
    """Constants, arc indicators, a spike, smooth and rough random functions."""
    rng = np.random.default_rng(seed)
    probes = [np.ones(G)]
    for frac in (2, 8, 32):
        v = np.zeros(G)
        v[:max(1, G // frac)] = 1.0
        probes.append(v)
    spike = np.zeros(G)
    spike[G // 2] = 1.0
    probes.append(spike)
    for _ in range(n_random):
        probes.append(rng.random(G))
        f = TrigPolynomial.random(1, 6, rng)
        probes.append(np.abs(synthesize(f, G).samples[:, 0]))
    return probes


def maximal_norm_estimate(space: SpaceDescriptor, probes=None, sigma: float = 1.5,
                          G: int | None = None, seed: int = 0,
                          threads: int | None = None) -> MaximalEstimate:
    """``sigma * max_f ||M f|| / ||f||`` over a probe family."""
    if space.kind == "Lp" and space.p == 1.0:
        raise ValueError("the maximal operator is unbounded on L^1")
    if sigma < 1.0:
        raise ValueError("safety factor must be >= 1")
    if probes is None:
        G = G or space.grid_size or 256
        probes = default_probes(G, seed)
    probes = list(probes)
    if not probes:
        raise ValueError("at least one probe is required")

    def ratio(f):
        v = _abs_values(f)
        n = space.norm_of_values(v)
        return space.norm_of_values(_maximal(v)) / n if n > 0 else 0.0

    ratios = pmap(ratio, probes, threads)
    return MaximalEstimate(float(max(ratios)), float(sigma), [float(r) for r in ratios])


@dataclass
class RubioDeFrancia:
    """Truncated iteration ``R g = sum_k M^k |g| / (2 C)^k``."""

    weight: Weight
    iterations: int
    constant: float
    tail_bound: float
    next_term_sup: float


def rubio_de_francia(g, space: SpaceDescriptor, M_est: MaximalEstimate | float,
                     tol: float = 1e-8, max_iter: int = 200) -> RubioDeFrancia:
    """Sum the series until the geometric tail ``2^-n ||g||`` drops below ``tol ||g||``.

    The geometric bound assumes ``M_est`` dominates the true norm of ``M`` on
    ``space``; the pointwise inequality ``M(R g) <= 2 C R g`` holds regardless,
    up to the first omitted term, which is reported as ``next_term_sup``.
    """
    C = M_est.effective if isinstance(M_est, MaximalEstimate) else float(M_est)
    if C < 1.0:
        raise ValueError("maximal constant must be >= 1")
    v = _abs_values(g)
    gnorm = space.norm_of_values(v)
    if gnorm == 0.0:
        raise ValueError("g must be nonzero")
    n = min(max_iter, max(1, math.ceil(math.log2(1.0 / tol))))
    total = v.copy()
    term = v
    for _ in range(n):
        term = _maximal(term) / (2.0 * C)
        total = total + term
    nxt = _maximal(term) / (2.0 * C)
    return RubioDeFrancia(Weight(total), n, C, 2.0 ** (-n) * gnorm, float(nxt.max()))


@dataclass
class AqWeight:
    """``w = (R g)^(1-q) R' h`` with its measured A_q constant and the a-priori bound."""

    weight: Weight
    q: float
    ap: ApConstant
    bound: float
    maximal: MaximalEstimate
    maximal_dual: MaximalEstimate
    iterations: tuple

    @property
    def within_bound(self) -> bool:
        return self.ap.value <= self.bound

    def to_json(self) -> dict:
        return {"q": self.q, "ap_constant": self.ap.to_json(), "bound": self.bound,
                "maximal": self.maximal.to_json(), "maximal_dual": self.maximal_dual.to_json(),
                "iterations": list(self.iterations), "within_bound": self.within_bound}


def build_aq_weight(g, h, q: float, space: SpaceDescriptor,
                    M_est: MaximalEstimate | None = None,
                    M_est_dual: MaximalEstimate | None = None,
                    tol: float = 1e-8, seed: int = 0) -> AqWeight:
    """Build ``(R g)^(1-q) R' h`` and compare ``[w]_{A_q}`` with ``2^q ||M||^(q-1) ||M'||``."""
    if not 1.0 < q < math.inf:
        raise ValueError("q must lie in (1, inf)")
    gv, hv = _abs_values(g), _abs_values(h)
    if gv.size != hv.size:
        raise ValueError("g and h must live on the same grid")
    dual = space.dual()
    if M_est is None:
        M_est = maximal_norm_estimate(space, G=gv.size, seed=seed)
    if M_est_dual is None:
        M_est_dual = maximal_norm_estimate(dual, G=gv.size, seed=seed)
    Rg = rubio_de_francia(gv, space, M_est, tol)
    Rh = rubio_de_francia(hv, dual, M_est_dual, tol)
    w = Weight(Rg.weight.samples ** (1.0 - q) * Rh.weight.samples)
    bound = 2.0 ** q * M_est.effective ** (q - 1.0) * M_est_dual.effective
    return AqWeight(w, q, ap_constant(w, q), bound, M_est, M_est_dual, (Rg.iterations, Rh.iterations))


@dataclass
class PeriodicExtension:
    samples: np.ndarray
    windows: int
    line_ap: float | None


def periodic_extension(w: Weight, windows: int, p: float | None = 2.0) -> PeriodicExtension:
    """Tile ``w`` over ``[-W pi, W pi)``; optionally report the windowed line A_p constant."""
    if windows < 1:
        raise ValueError("windows must be >= 1")
    samples = np.tile(w.samples, windows)
    line = line_ap_constant(samples, p) if p is not None else None
    return PeriodicExtension(samples, windows, line)


@dataclass
class DeLeeuwReport:
    """Torus-side multiplier norm estimate against the line-side estimate."""

    torus: float
    line: float
    line_transferred: float
    line_exact: float | None
    tail_mass: float
    margin: float = 0.05
    per_probe: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.torus <= self.line * (1.0 + self.margin)

    def to_json(self) -> dict:
        return {"torus": self.torus, "line": self.line, "line_transferred": self.line_transferred,
                "line_exact": self.line_exact, "tail_mass": self.tail_mass,
                "margin": self.margin, "passed": self.passed}


def _torus_apply(m: ContinuousSymbol, f: TrigPolynomial) -> TrigPolynomial:
    vals = m(f.frequencies.astype(float))
    return TrigPolynomial(np.einsum("kij,kj->ki", vals, f.coeffs))


def deleeuw_restriction_check(m: ContinuousSymbol, p: float = 2.0, w: Weight | None = None,
                              order: int = 8, n_probes: int = 16, seed: int = 0, G: int = 256,
                              periods: int = 16, pad: int = 4,
                              threads: int | None = None) -> DeLeeuwReport:
    """Compare ``||m|_Z(Delta)||`` on the circle with ``||m(D)||`` on the line.

    Torus side: the largest ratio ``||m(Delta) f|| / ||f||`` over random
    trigonometric polynomials and single modes.  Line side: the same probes
    transferred to the line as ``phi(eps t) f(t)`` with the Gaussian
    ``phi(t) = exp(-pi t^2 / p)``, ``m(D)`` applied by FFT on a padded window,
    norms in ``L^p`` weighted by the periodic extension of ``w``; for
    unweighted ``L^2`` also the exact norm ``sup |m|`` on a dense grid.
    """
    if w is not None and G % w.G:
        raise ValueError("weight grid must divide the torus grid")
    space = Lp(p) if w is None else WeightedLp(p, w)
    rng = np.random.default_rng(seed)
    probes = [TrigPolynomial.random(m.in_dim, order, rng, mean_zero=(i % 2 == 0))
              for i in range(n_probes)]
    for k in range(-order, order + 1):
        x = rng.standard_normal(m.in_dim) + 1j * rng.standard_normal(m.in_dim)
        probes.append(TrigPolynomial.mode(k, x, order))

    # Gaussian width chosen so that the damping is below 1e-16 at the window edge
    L = periods * np.pi
    eps = 4.0 / L
    tail = float(math.erfc(math.sqrt(math.pi) * eps * L))
    if tail > 0.01:
        raise ValueError(f"line window underresolved: tail mass {tail:.3g}")
    N = periods * pad * G
    # start on a torus grid point so that the tiled weight lines up with w
    t = -np.pi - 2.0 * np.pi * (periods * pad // 2) + (2.0 * np.pi / G) * np.arange(N)
    wline = None if w is None else np.tile(w.on_grid(G), periods * pad)
    xi = 2.0 * np.pi * np.fft.fftfreq(N, d=2.0 * np.pi / G)
    m_xi = m(xi)
    damp = np.exp(-np.pi * (eps * t) ** 2 / p)

    def line_norm(vals):
        v = np.linalg.norm(vals, axis=1)
        h = 2.0 * np.pi / G
        ww = 1.0 if wline is None else wline
        vmax = v.max()
        return 0.0 if vmax == 0 else float(vmax * (h * np.sum(ww * (v / vmax) ** p)) ** (1.0 / p))

    def one(f):
        tn = phi_norm_local(f)
        torus = 0.0 if tn == 0 else phi_norm_local(_torus_apply(m, f)) / tn
        ks = f.frequencies
        fl = np.exp(1j * np.outer(t, ks)) @ f.coeffs
        gl = damp[:, None] * fl
        gh = np.fft.fft(gl, axis=0)
        mg = np.fft.ifft(np.einsum("nij,nj->ni", m_xi, gh), axis=0)
        ln = line_norm(gl)
        return torus, (0.0 if ln == 0 else line_norm(mg) / ln)

    def phi_norm_local(f):
        return space.norm_of_values(synthesize(f, G).pointwise_norm())

    results = pmap(one, probes, threads)
    torus = max(r[0] for r in results)
    transferred = max(r[1] for r in results)
    exact = None
    if p == 2.0 and w is None:
        K = max(64.0, 4.0 * order)
        dense = np.linspace(-K, K, 200001)
        exact = float(np.max(operator_norms(m(dense))))
    line = max(transferred, exact) if exact is not None else transferred
    return DeLeeuwReport(float(torus), float(line), float(transferred), exact, tail,
                         per_probe=[list(r) for r in results])
