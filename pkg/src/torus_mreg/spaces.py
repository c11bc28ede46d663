"""Function spaces on the circle: Lebesgue and weighted Lebesgue norms, the
Littlewood-Paley resolution of identity, Besov and Triebel-Lizorkin norms.

All integrals use the measure ``dt`` on ``[-pi, pi)`` (total mass ``2*pi``),
approximated by the rectangle rule on the uniform grid.  Vector-valued
functions are measured through their pointwise Euclidean norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .fourier import SampledFunction, TrigPolynomial, synthesize

if TYPE_CHECKING:
    from .weights import Weight

__all__ = [
    "SpaceDescriptor",
    "Lp",
    "WeightedLp",
    "phi_norm",
    "default_grid",
    "LittlewoodPaley",
    "make_littlewood_paley",
    "SmoothnessSpace",
    "dyadic_block",
    "partial_sum",
    "besov_norm",
    "triebel_lizorkin_norm",
    "derivative_equivalence_ratio",
    "derivative_ratio_bracket",
    "parse_exponent",
    "format_exponent",
]


def parse_exponent(value) -> float:
    """Read an exponent that may be given as the string ``"inf"``."""
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity"):
            return math.inf
        return float(value)
    return float(value)


def format_exponent(value: float):
    return "inf" if math.isinf(value) else float(value)


def _conjugate(p: float) -> float:
    if p == 1.0:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def default_grid(K: int, minimum: int = 64) -> int:
    """Quadrature grid used for norms of order-``K`` polynomials (4x oversampled)."""
    G = minimum
    while G < 4 * (2 * K + 2):
        G *= 2
    return G


@dataclass(frozen=True)
class SpaceDescriptor:
    """A Banach function space over the circle.

    ``kind`` is ``"Lp"`` (``1 <= p <= inf``) or ``"WeightedLp"``
    (``1 < p < inf`` with a strictly positive :class:`~torus_mreg.weights.Weight`).
    """

    kind: str
    p: float
    weight: "Weight | None" = None

    def __post_init__(self):
        if self.kind == "Lp":
            if not (self.p >= 1.0):
                raise ValueError(f"Lp requires p in [1, inf], got {self.p}")
            if self.weight is not None:
                raise ValueError("Lp takes no weight")
        elif self.kind == "WeightedLp":
            if not (1.0 < self.p < math.inf):
                raise ValueError(f"weighted Lp requires p in (1, inf), got {self.p}")
            if self.weight is None:
                raise ValueError("weighted Lp requires a weight")
        else:
            raise ValueError(f"unknown space kind {self.kind!r}")

    @property
    def grid_size(self) -> int | None:
        return None if self.weight is None else self.weight.G

    def dual(self) -> "SpaceDescriptor":
        """Koethe dual: ``L^p -> L^p'`` and ``L^p_w -> L^p'_{w^(1-p')}``."""
        pc = _conjugate(self.p)
        if self.kind == "Lp":
            return Lp(pc)
        return WeightedLp(pc, self.weight.raised(1.0 - pc))

    def norm_of_values(self, values: np.ndarray) -> float:
        """Norm of a nonnegative function given by its samples on the uniform grid."""
        v = np.abs(np.asarray(values, dtype=float))
        G = v.shape[0]
        if G == 0:
            raise ValueError("empty grid")
        if self.kind == "Lp" and math.isinf(self.p):
            return float(v.max())
        h = 2.0 * np.pi / G
        if self.weight is None:
            w = 1.0
        else:
            w = self.weight.on_grid(G)
        vmax = v.max()
        if vmax == 0.0:
            return 0.0
        # scale out the maximum to avoid overflow for large p
        return float(vmax * (h * np.sum(w * (v / vmax) ** self.p)) ** (1.0 / self.p))

    def to_json(self) -> dict:
        out = {"kind": self.kind, "p": format_exponent(self.p)}
        if self.weight is not None:
            out["weight"] = self.weight.to_json()
        return out

    @classmethod
    def from_json(cls, obj) -> "SpaceDescriptor":
        if isinstance(obj, str):
            # shorthand such as "lp2" or "lpinf"
            s = obj.lower()
            if not s.startswith("lp"):
                raise ValueError(f"cannot parse space shorthand {obj!r}")
            return Lp(parse_exponent(s[2:]))
        kind = obj["kind"]
        p = parse_exponent(obj["p"])
        if kind == "Lp":
            return Lp(p)
        from .weights import Weight
        return WeightedLp(p, Weight.from_json(obj["weight"]))


def Lp(p: float) -> SpaceDescriptor:
    return SpaceDescriptor("Lp", float(p))


def WeightedLp(p: float, weight: "Weight") -> SpaceDescriptor:
    return SpaceDescriptor("WeightedLp", float(p), weight)


def _values(f, space: SpaceDescriptor, G: int | None) -> np.ndarray:
    if isinstance(f, SampledFunction):
        return f.pointwise_norm()
    if isinstance(f, TrigPolynomial):
        if G is None:
            G = default_grid(f.order)
            if space.grid_size is not None:
                G = max(G, space.grid_size)
        return synthesize(f, G).pointwise_norm()
    return np.abs(np.asarray(f))


def phi_norm(f, space: SpaceDescriptor, G: int | None = None) -> float:
    """``|| |f(.)| ||_space`` for a polynomial, sampled function or sample array."""
    return space.norm_of_values(_values(f, space, G))


def _smoothstep(J: int) -> Polynomial:
    """Polynomial ``S`` with ``S(0)=0``, ``S(1)=1`` and ``S^(r)`` vanishing at 0 and 1 for ``1 <= r <= J``."""
    x = Polynomial([0.0, 1.0])
    dens = (x * (1 - x)) ** J
    S = dens.integ()
    return S / S(1.0)


class LittlewoodPaley:
    """Dyadic resolution of identity generated by a plateau function ``psi``.

    ``psi = 1`` on ``[-1, 1]``, ``psi = 0`` outside ``(-2, 2)``, and on
    ``1 <= |t| <= 2`` it decreases through a ``C^J`` polynomial smoothstep.
    Blocks are ``psi_0 = psi`` and ``psi_j = psi(2^-j .) - psi(2^(1-j) .)``.
    """

    def __init__(self, J: int = 4):
        if J < 2:
            raise ValueError("smoothness order J must be >= 2")
        self.J = int(J)
        self._step = [_smoothstep(self.J)]
        for _ in range(self.J + 1):
            self._step.append(self._step[-1].deriv())

    def psi(self, t, r: int = 0) -> np.ndarray:
        """``psi`` or its ``r``-th derivative."""
        t = np.asarray(t, dtype=float)
        a = np.abs(t)
        out = np.zeros_like(t)
        mid = (a > 1.0) & (a < 2.0)
        if r == 0:
            out[a <= 1.0] = 1.0
            out[mid] = np.clip(1.0 - self._step[0](a[mid] - 1.0), 0.0, 1.0)
        else:
            if r > self.J + 1:
                raise ValueError(f"derivative order {r} exceeds J+1 = {self.J + 1}")
            out[mid] = -self._step[r](a[mid] - 1.0) * np.sign(t[mid]) ** r
        return out

    def psi_j(self, t, j: int, r: int = 0) -> np.ndarray:
        if j < 0:
            return np.zeros_like(np.asarray(t, dtype=float))
        t = np.asarray(t, dtype=float)
        if j == 0:
            return self.psi(t, r)
        s1, s2 = 2.0 ** (-j), 2.0 ** (1 - j)
        return s1 ** r * self.psi(s1 * t, r) - s2 ** r * self.psi(s2 * t, r)

    def chi_j(self, t, j: int) -> np.ndarray:
        return self.psi_j(t, j - 1) + self.psi_j(t, j) + self.psi_j(t, j + 1)

    @staticmethod
    def active_blocks(K: int) -> list[int]:
        """Indices ``j`` for which ``psi_j`` can be nonzero on ``|k| <= K``."""
        js = [0]
        j = 1
        while 2 ** (j - 1) < K:
            js.append(j)
            j += 1
        return js

    def symbol(self, j: int | None = None, dim: int = 1):
        """``psi`` (or ``psi_j``) as a scalar continuous symbol."""
        from .symbols import ContinuousSymbol

        if j is None:
            return ContinuousSymbol.scalar(lambda t, r=0: self.psi(t, r), dim=dim,
                                           analytic_order=self.J + 1)
        return ContinuousSymbol.scalar(lambda t, r=0: self.psi_j(t, j, r), dim=dim,
                                       analytic_order=self.J + 1)


def make_littlewood_paley(J: int = 4) -> LittlewoodPaley:
    return LittlewoodPaley(J)


@dataclass(frozen=True)
class SmoothnessSpace:
    """Besov ``B^{s,q}_Phi`` or Triebel-Lizorkin ``F^{s,q}_Phi`` over a base space."""

    kind: str
    s: float
    q: float
    base: SpaceDescriptor
    lp: LittlewoodPaley

    def __post_init__(self):
        if self.kind not in ("Besov", "TriebelLizorkin"):
            raise ValueError(f"unknown smoothness space kind {self.kind!r}")
        if self.kind == "Besov" and not self.q >= 1.0:
            raise ValueError("Besov requires q in [1, inf]")
        if self.kind == "TriebelLizorkin" and not (1.0 < self.q < math.inf):
            raise ValueError("Triebel-Lizorkin requires q in (1, inf)")

    def with_smoothness(self, s: float) -> "SmoothnessSpace":
        return SmoothnessSpace(self.kind, s, self.q, self.base, self.lp)


def dyadic_block(f: TrigPolynomial, j: int, lp: LittlewoodPaley) -> TrigPolynomial:
    """``psi_j(Delta) f``."""
    if j < 0:
        raise ValueError("block index must be nonnegative")
    return f.scale(lp.psi_j(f.frequencies, j))


def partial_sum(f: TrigPolynomial, N: int, lp: LittlewoodPaley) -> TrigPolynomial:
    """``psi(2^-N Delta) f``."""
    return f.scale(lp.psi(2.0 ** (-N) * f.frequencies))


def _lq(values: Sequence[float] | np.ndarray, q: float, axis=0):
    v = np.abs(np.asarray(values, dtype=float))
    if math.isinf(q):
        return v.max(axis=axis)
    return np.sum(v ** q, axis=axis) ** (1.0 / q)


def _block_samples(f: TrigPolynomial, space: SmoothnessSpace, G: int) -> np.ndarray:
    """Pointwise norms of ``2^{sj} psi_j(Delta) f`` for every active block, shape (J, G)."""
    rows = []
    for j in LittlewoodPaley.active_blocks(f.order):
        blk = dyadic_block(f, j, space.lp)
        rows.append(2.0 ** (space.s * j) * synthesize(blk, G).pointwise_norm())
    return np.array(rows)


def _grid_for(f: TrigPolynomial, space: SmoothnessSpace, G: int | None) -> int:
    if G is not None:
        return G
    G = default_grid(f.order)
    if space.base.grid_size is not None:
        G = max(G, space.base.grid_size)
    return G


def besov_norm(f: TrigPolynomial, space: SmoothnessSpace, G: int | None = None) -> float:
    """``( sum_j || 2^{sj} psi_j(Delta) f ||_Phi^q )^{1/q}`` (sup for ``q = inf``)."""
    G = _grid_for(f, space, G)
    blocks = _block_samples(f, space, G)
    norms = [space.base.norm_of_values(row) for row in blocks]
    return float(_lq(norms, space.q))


def triebel_lizorkin_norm(f: TrigPolynomial, space: SmoothnessSpace, G: int | None = None) -> float:
    """``|| ( sum_j |2^{sj} psi_j(Delta) f|^q )^{1/q} ||_Phi`` computed pointwise on the grid."""
    if not (1.0 < space.q < math.inf):
        raise ValueError("Triebel-Lizorkin norms require q in (1, inf)")
    G = _grid_for(f, space, G)
    blocks = _block_samples(f, space, G)
    return space.base.norm_of_values(_lq(blocks, space.q, axis=0))


def derivative_equivalence_ratio(f: TrigPolynomial, space: SmoothnessSpace,
                                 G: int | None = None) -> float:
    """``||f'||_{B^{s-1,q}} / ||f||_{B^{s,q}}`` for mean-zero ``f``."""
    from .fourier import derivative

    if np.all(f.coeffs == 0):
        raise ValueError("ratio undefined for f = 0")
    if np.any(np.abs(f.coeff(0)) > 0):
        raise ValueError("derivative_equivalence_ratio requires a mean-zero function")
    num = besov_norm(derivative(f), space.with_smoothness(space.s - 1.0), G)
    return num / besov_norm(f, space, G)


def derivative_ratio_bracket(space: SmoothnessSpace, K: int, n_random: int = 20,
                             seed: int = 0, G: int | None = None) -> tuple[float, float, np.ndarray]:
    """Smallest and largest :func:`derivative_equivalence_ratio` over a test battery.

    The battery holds every single mode ``e_k`` with ``1 <= |k| <= K`` (these
    attain the extreme ratios) and ``n_random`` seeded mean-zero random
    polynomials of order ``K``.  Returns ``(low, high, ratios)``.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    rng = np.random.default_rng(seed)
    battery = [TrigPolynomial.mode(k, [1.0], K) for k in range(-K, K + 1) if k]
    battery += [TrigPolynomial.random(1, K, rng, mean_zero=True) for _ in range(n_random)]
    ratios = np.array([derivative_equivalence_ratio(f, space, G) for f in battery])
    return float(ratios.min()), float(ratios.max()), ratios
