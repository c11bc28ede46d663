"""Multipliers on the line restricted to the integers keep their L^p operator norms."""

from torus_mreg.spaces import LittlewoodPaley
from torus_mreg.symbols import ContinuousSymbol
from torus_mreg.weights import Weight, deleeuw_restriction_check

cases = [("Hilbert", ContinuousSymbol.hilbert(), None), ("identity", ContinuousSymbol.identity(), None),
         ("cutoff psi", LittlewoodPaley(4).symbol(), None),
         ("Hilbert, |t|^0.5 weight", ContinuousSymbol.hilbert(), Weight.power_law(0.5, 64))]
for name, m, w in cases:
    rep = deleeuw_restriction_check(m, w=w)
    print(f"  {name:24s} torus {rep.torus:.5f}  line {rep.line:.5f}  passed={rep.passed}")
