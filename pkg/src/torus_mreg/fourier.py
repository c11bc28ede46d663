"""Trigonometric polynomials on the circle and their multiplier calculus.

Conventions used throughout the package:

* Fourier coefficients are ``f_hat(k) = (1/2pi) * integral_{-pi}^{pi} f(t) exp(-ikt) dt``.
* Sample grids are ``t_g = -pi + 2*pi*g/G`` for ``g = 0..G-1`` with ``G`` a power of two.
* ``sgn(0) = 0``.

Coefficients of a ``TrigPolynomial`` with order ``K`` are stored densely as an
array of shape ``(2K+1, d)``; row ``k + K`` holds ``f_hat(k)``.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "TrigPolynomial",
    "SampledFunction",
    "grid_points",
    "synthesize",
    "analyze",
    "apply_multiplier",
    "derivative",
    "antiderivative",
    "convolve",
    "fejer_mean",
    "dirichlet_sum",
    "interval_projection",
    "hilbert_transform",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def grid_points(G: int) -> np.ndarray:
    """Uniform grid ``-pi + 2*pi*g/G`` on ``[-pi, pi)``."""
    return -np.pi + 2.0 * np.pi * np.arange(G) / G


class TrigPolynomial:
    """Truncated Fourier series of a periodic ``C^d``-valued function.

    Parameters
    ----------
    coeffs : array_like, shape (2K+1, d) or (2K+1,)
        Row ``k + K`` is the coefficient vector of ``exp(ikt)``.
        A one-dimensional array is read as a scalar (d = 1) polynomial.
    """

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 1:
            c = c[:, None]
        if c.ndim != 2 or c.shape[0] % 2 != 1 or c.shape[1] < 1:
            raise ValueError("coeffs must have shape (2K+1, d) with d >= 1")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        self._coeffs = c

    @classmethod
    def zeros(cls, dim: int, order: int) -> "TrigPolynomial":
        return cls(np.zeros((2 * order + 1, dim), dtype=complex))

    @classmethod
    def from_dict(cls, dim: int, order: int, coeffs: dict) -> "TrigPolynomial":
        """Build from a sparse ``{k: vector}`` mapping; absent keys are zero."""
        c = np.zeros((2 * order + 1, dim), dtype=complex)
        for k, v in coeffs.items():
            if abs(k) > order:
                raise ValueError(f"frequency {k} exceeds order {order}")
            c[k + order] = np.broadcast_to(np.asarray(v, dtype=complex), (dim,))
        return cls(c)

    @classmethod
    def mode(cls, k: int, x, order: int | None = None) -> "TrigPolynomial":
        """The single mode ``e_k (x) x``."""
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        order = abs(k) if order is None else order
        return cls.from_dict(x.size, order, {k: x})

    @classmethod
    def random(cls, dim: int, order: int, rng: np.random.Generator,
               mean_zero: bool = False) -> "TrigPolynomial":
        c = rng.standard_normal((2 * order + 1, dim)) + 1j * rng.standard_normal((2 * order + 1, dim))
        if mean_zero:
            c[order] = 0.0
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def dim(self) -> int:
        return self._coeffs.shape[1]

    @property
    def order(self) -> int:
        return (self._coeffs.shape[0] - 1) // 2

    @property
    def frequencies(self) -> np.ndarray:
        K = self.order
        return np.arange(-K, K + 1)

    def coeff(self, k: int) -> np.ndarray:
        if abs(k) > self.order:
            return np.zeros(self.dim, dtype=complex)
        return self._coeffs[k + self.order]

    def with_order(self, order: int) -> "TrigPolynomial":
        """Zero-pad or truncate to a new order."""
        K = self.order
        c = np.zeros((2 * order + 1, self.dim), dtype=complex)
        n = min(K, order)
        c[order - n:order + n + 1] = self._coeffs[K - n:K + n + 1]
        return TrigPolynomial(c)

    def scale(self, factors) -> "TrigPolynomial":
        """Multiply coefficient ``k`` by the scalar ``factors[k + K]``."""
        return TrigPolynomial(self._coeffs * np.asarray(factors)[:, None])

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        K = max(self.order, other.order)
        return TrigPolynomial(self.with_order(K).coeffs + other.with_order(K).coeffs)

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "TrigPolynomial":
        return TrigPolynomial(scalar * self._coeffs)

    def __neg__(self) -> "TrigPolynomial":
        return TrigPolynomial(-self._coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPolynomial) or other.dim != self.dim:
            return NotImplemented
        K = max(self.order, other.order)
        return bool(np.array_equal(self.with_order(K).coeffs, other.with_order(K).coeffs))

    def __repr__(self) -> str:
        return f"TrigPolynomial(dim={self.dim}, order={self.order})"

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "order": self.order,
            "coeffs": [
                {"k": int(k), "re": row.real.tolist(), "im": row.imag.tolist()}
                for k, row in zip(self.frequencies, self._coeffs)
                if np.any(row != 0)
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TrigPolynomial":
        dim, order = int(obj["dim"]), int(obj["order"])
        entries = {}
        for e in obj.get("coeffs", []):
            re = np.asarray(e["re"], dtype=float)
            im = np.asarray(e.get("im", np.zeros_like(re)), dtype=float)
            if re.shape != (dim,) or im.shape != (dim,):
                raise ValueError(f"coefficient at k={e['k']} must have length {dim}")
            entries[int(e["k"])] = re + 1j * im
        return cls.from_dict(dim, order, entries)


class SampledFunction:
    """Values of a ``C^d``-valued function on the uniform grid of ``[-pi, pi)``."""

    def __init__(self, samples):
        s = np.array(samples, dtype=complex)
        if s.ndim == 1:
            s = s[:, None]
        if s.ndim != 2 or s.shape[0] == 0:
            raise ValueError("samples must have shape (G, d) with G >= 1")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        s.setflags(write=False)
        self._samples = s

    @property
    def samples(self) -> np.ndarray:
        return self._samples

    @property
    def G(self) -> int:
        return self._samples.shape[0]

    @property
    def dim(self) -> int:
        return self._samples.shape[1]

    @property
    def grid(self) -> np.ndarray:
        return grid_points(self.G)

    def pointwise_norm(self) -> np.ndarray:
        """``|f(t_g)|`` in the Euclidean norm of ``C^d``."""
        return np.linalg.norm(self._samples, axis=1)

    def __repr__(self) -> str:
        return f"SampledFunction(G={self.G}, dim={self.dim})"


def _check_grid(G: int, K: int) -> None:
    if not _is_power_of_two(G):
        raise ValueError(f"grid size {G} is not a power of two")
    if G < 2 * K + 2:
        raise ValueError(f"grid size {G} too small for order {K} (need >= {2 * K + 2})")


def synthesize(f: TrigPolynomial, G: int) -> SampledFunction:
    """Evaluate ``sum_k f_hat(k) exp(ik t_g)`` on the ``G``-point grid."""
    K = f.order
    _check_grid(G, K)
    ks = f.frequencies
    # exp(ik t_g) = (-1)^k exp(2 pi i k g / G)
    buf = np.zeros((G, f.dim), dtype=complex)
    buf[ks % G] = f.coeffs * np.where(ks % 2 == 0, 1.0, -1.0)[:, None]
    return SampledFunction(G * np.fft.ifft(buf, axis=0))


def analyze(s: SampledFunction, K: int) -> TrigPolynomial:
    """Trapezoid (FFT) quadrature of the coefficients ``|k| <= K``."""
    G = s.G
    _check_grid(G, K)
    ks = np.arange(-K, K + 1)
    spec = np.fft.fft(s.samples, axis=0) / G
    return TrigPolynomial(spec[ks % G] * np.where(ks % 2 == 0, 1.0, -1.0)[:, None])


def _symbol_values(m, ks: np.ndarray) -> np.ndarray:
    """Evaluate a symbol (OperatorSymbol or callable) on integer frequencies."""
    vals = np.asarray(m(ks), dtype=complex)
    if vals.ndim == 1:
        vals = vals[:, None, None]
    return vals


def apply_multiplier(m, f: TrigPolynomial) -> TrigPolynomial:
    """Apply ``m(Delta)``: coefficient ``k`` becomes ``m(k) @ f_hat(k)``.

    ``m`` is an :class:`~torus_mreg.symbols.OperatorSymbol` or any callable
    mapping an integer array of shape ``(n,)`` to matrices ``(n, d2, d1)``
    (or scalars ``(n,)``).
    """
    ks = f.frequencies
    vals = _symbol_values(m, ks)
    if vals.shape[-1] != f.dim and vals.shape[-2:] != (1, 1):
        raise ValueError(f"symbol input dimension {vals.shape[-1]} != function dimension {f.dim}")
    if vals.shape[-2:] == (1, 1):
        return TrigPolynomial(vals[:, 0, :] * f.coeffs)
    return TrigPolynomial(np.einsum("kij,kj->ki", vals, f.coeffs))


def convolve(c, u: TrigPolynomial) -> TrigPolynomial:
    """Convolution ``c * u`` given through its symbol ``c_hat``."""
    return apply_multiplier(c, u)


def derivative(f: TrigPolynomial) -> TrigPolynomial:
    return f.scale(1j * f.frequencies)


def antiderivative(f: TrigPolynomial) -> TrigPolynomial:
    """Mean-zero antiderivative; requires ``f_hat(0) = 0``."""
    if np.any(f.coeff(0) != 0):
        raise ValueError("antiderivative requires a mean-zero function")
    ks = f.frequencies
    inv = np.zeros(ks.size, dtype=complex)
    nz = ks != 0
    inv[nz] = 1.0 / (1j * ks[nz])
    return f.scale(inv)


def fejer_mean(f: TrigPolynomial, N: int) -> TrigPolynomial:
    """Cesaro mean of the Dirichlet sums ``S_0 .. S_N``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return f.scale(np.maximum(0.0, 1.0 - np.abs(f.frequencies) / (N + 1)))


def dirichlet_sum(f: TrigPolynomial, l: int) -> TrigPolynomial:
    if l < 0:
        raise ValueError("l must be nonnegative")
    return f.scale((np.abs(f.frequencies) <= l).astype(float))


def interval_projection(f: TrigPolynomial, a: int, b: int) -> TrigPolynomial:
    """Keep the frequencies ``a <= k <= b``.

    Built from shifted sign multipliers:
    ``1_[a,b](k) = sgn(k-a)/2 - sgn(k-b)/2 + 1_{a}(k)/2 + 1_{b}(k)/2``.
    """
    if a > b:
        raise ValueError("interval_projection requires a <= b")
    ks = f.frequencies
    sym = (0.5 * np.sign(ks - a) - 0.5 * np.sign(ks - b)
           + 0.5 * (ks == a) + 0.5 * (ks == b))
    return f.scale(sym)


def hilbert_transform(f: TrigPolynomial) -> TrigPolynomial:
    """Conjugate function: the multiplier ``-i sgn(k)``."""
    return f.scale(-1j * np.sign(f.frequencies))
