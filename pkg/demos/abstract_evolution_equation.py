"""Periodic second-order problems: spectral solve, difference identities and regularity flags."""

import numpy as np

from torus_mreg.aee import (AeeProblem, characterize, maximal_regularity_experiment, random_problem, residual,
                            solve, verify_difference_identities)
from torus_mreg.fourier import TrigPolynomial
from torus_mreg.spaces import Lp


def scalar(P, B, A):
    return AeeProblem(np.array([[P]]), np.array([[B]]), np.array([[A]]))


heat = scalar(0.0, 1.0, 1.0)  # u' + u = f
f = TrigPolynomial.from_dict(1, 1, {0: [1.0], 1: [1.0]})
u = solve(heat, f)
print("u' + u = 1 + e^{it}:  u_hat =", np.round(u.coeffs[:, 0], 6).tolist())

prob = random_problem(3, 64, seed=4)
g = TrigPolynomial.random(3, 64, np.random.default_rng(0))
v = solve(prob, g)
print(f"random 3x3 problem: residual {residual(prob, v, g):.2e}")
for name, val in verify_difference_identities(prob, 64).items():
    print(f"  {name:15s} {val:.2e}")

for name, p in [("heat", heat), ("u'' + 4u", scalar(1.0, 0.0, 4.0)), ("random 3x3", prob)]:
    rep = characterize(p)
    print(f"{name:11s} bijective={rep.bijective} mr={rep.mr_flag} wp={rep.wp_flag} "
          f"singular={rep.singular_frequencies}")

mr = maximal_regularity_experiment(heat, Lp(2.0), n_probes=4)
for name, table in mr["symbols"].items():
    print(f"  {name:3s} observed {table['sup_lower']:.4f}  bound {table['sup_upper']}")
