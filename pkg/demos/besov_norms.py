"""Dyadic decomposition and smoothness norms of trigonometric polynomials."""

import math

import numpy as np

from torus_mreg.fourier import TrigPolynomial
from torus_mreg.spaces import (LittlewoodPaley, Lp, SmoothnessSpace, besov_norm, derivative_ratio_bracket,
                               partial_sum, triebel_lizorkin_norm)

lp = LittlewoodPaley(4)
print("active blocks for order 40:", LittlewoodPaley.active_blocks(40))
for k in (1, 2, 4, 8, 32):  # powers of two sit on a single block
    sp = SmoothnessSpace("Besov", 1.0, 2.0, Lp(2.0), lp)
    print(f"  B^1_2(L^2) norm of e_{k:<2d} = {besov_norm(TrigPolynomial.mode(k, [1.0]), sp):.5f}"
          f"   (|k| sqrt(2 pi) = {k * math.sqrt(2 * math.pi):.5f})")

f = TrigPolynomial.random(1, 24, np.random.default_rng(1))
B = besov_norm(f, SmoothnessSpace("Besov", 0.5, 3.0, Lp(3.0), lp))
F = triebel_lizorkin_norm(f, SmoothnessSpace("TriebelLizorkin", 0.5, 3.0, Lp(3.0), lp))
print(f"\nB and F coincide on L^q with q = 3: {B:.12f} {F:.12f}")
sp = SmoothnessSpace("Besov", 1.0, 2.0, Lp(2.0), lp)
for N in range(7):
    print(f"  remainder after partial sum N={N}: {besov_norm(f - partial_sum(f, N, lp), sp):.3e}")
lo, hi, _ = derivative_ratio_bracket(SmoothnessSpace("Besov", 0.5, 2.0, Lp(2.0), lp), 32)
print(f"\n||f||_(s-1) / ||f'||_s lies in [{lo:.4f}, {hi:.4f}] for mean-zero f of order 32")
