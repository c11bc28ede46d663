"""Muckenhoupt constants, the Rubio de Francia iteration and factorized A_2 weights."""

import numpy as np

from torus_mreg.spaces import Lp
from torus_mreg.weights import (Weight, ap_constant, build_aq_weight, maximal_function, maximal_norm_estimate,
                                rubio_de_francia)

for alpha in (0.5, -0.5, 0.99, 2.0):
    for G in (128, 256):
        ap = ap_constant(Weight.power_law(alpha, G), 2.0)
        print(f"  |t|^{alpha:<5} G={G:<4d} A_2 = {ap.value:9.4f}  unbounded={ap.unbounded}")

est = maximal_norm_estimate(Lp(2.0), G=256)
print(f"\nmaximal operator norm on L^2: observed {est.lower:.4f}, used {est.effective:.4f}")
rng = np.random.default_rng(0)
g = rng.standard_normal(256)
R = rubio_de_francia(g, Lp(2.0), est)
Rg = R.weight.samples
print(f"iteration stopped after {R.iterations} terms")
print(f"  min(Rg - |g|)              = {np.min(Rg - np.abs(g)):.3e}")
print(f"  max(M(Rg) / Rg)            = {np.max(maximal_function(Rg) / Rg):.4f} (<= {2 * est.effective:.4f})")
aq = build_aq_weight(rng.random(256) + 0.01, rng.random(256) + 0.01, 2.0, Lp(2.0), est, est)
print(f"  A_2 of the factorized weight = {aq.ap.value:.4f} (bound {aq.bound:.4f})")
