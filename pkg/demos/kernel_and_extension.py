"""Build the smooth interpolation kernel, check it, and extend a discrete symbol to the line."""

import numpy as np

from torus_mreg.jodeit import baseline_kernels, build_kernel, extension, verify_kernel
from torus_mreg.symbols import OperatorSymbol, continuous_m_seminorm, marcinkiewicz_seminorm, symmetric_grid

lam = build_kernel(4)
print("base polynomial coefficients in (u + 1):", np.round(lam.base.coef, 3).tolist())
rep = verify_kernel(lam, 4096)
for name, res in rep.identities.items():
    print(f"  {name:9s} residual {res:.2e}")
print(f"  partition of unity error {rep.partition_of_unity:.2e}")

m = OperatorSymbol.seeded_random(2, seed=0)
m = m * (1.0 / marcinkiewicz_seminorm(m, 3, 64).value)
print("\nthird-order condition of the extension, coarse vs fine grid:")
for name, kernel in [("smooth kernel", lam), ("piecewise affine", baseline_kernels()["piecewise_affine"])]:
    e = extension(kernel, m)
    a = continuous_m_seminorm(e, 3, symmetric_grid(64, 16)).value
    b = continuous_m_seminorm(e, 3, symmetric_grid(64, 32)).value
    print(f"  {name:17s} {a:10.4f} -> {b:10.4f}  (change {abs(b / a - 1):.1%})")
