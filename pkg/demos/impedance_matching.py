"""
Impedance matching and the optical depth it implies
====================================================

For narrow modes the best cavity coupling is gamma1 = Gamma_tot + gamma2.
For finite bandwidth the optimum moves, and a golden-section search over
ln(gamma1) finds it.  Converting the matched rate into an optical depth
shows how thin the ensemble can be.
"""

import numpy as np

from cavity_echo import EnsembleParams
from cavity_echo.optimize import find_optimal_gamma1, optical_depth

ens = EnsembleParams(coupling_strength_sq=0.5, delta_in=1.0)  # Gamma_tot = 1
for bw in (1e-3, 1e-2, 1e-1, 0.3):
    rep = find_optimal_gamma1(ens, 0.0, bw, objective="retrieval")
    print(f"bandwidth {bw:6.3f}: gamma1* = {rep.gamma1:.5f}  Q = {rep.q:.5f}"
          f"  (narrowband gamma1 {rep.gamma1_narrowband:g})")

# cavity loss pushes the matched point up by gamma2
for g2 in (0.0, 0.1, 0.5):
    rep = find_optimal_gamma1(ens, g2, 1e-3, objective="narrowband")
    print(f"gamma2 = {g2}: gamma1* = {rep.gamma1:.6f}, Q = {rep.q:.4f}")

# a 1 mm sample behind a mirror leaking at 1e8 per second
print("optical depth", f"{optical_depth(1e8, 1e-3):.3g}")
for length in np.logspace(-4, -2, 3):
    print(f"  L = {length:.0e} m -> {optical_depth(1e8, length):.3g}")
