"""
Memory efficiency over mode count and coupling ratio
=====================================================

A train of M one-photon Lorentzian modes is stored in the cavity-enhanced
ensemble.  The ratio Gamma_in / gamma1 sets how well the ensemble absorption
matches the cavity leakage.  Each mode waits longer the earlier it arrived,
so adding modes costs a little efficiency through atomic decoherence.
"""

import numpy as np

from cavity_echo import fig1_config
from cavity_echo.optimize import fig1_grids, scan_ratio_modes

base = fig1_config()
m_grid, ratio_grid = fig1_grids()
scan = scan_ratio_modes(base, ratio_grid, m_grid)
surface = scan.surface()  # rows: M, columns: ratio
print("surface shape", surface.shape)

# the best ratio sits slightly above one for every train length
best = [scan.argmax_ratio(m) for m in (1, 10, 100)]
print("best ratio at M = 1, 10, 100:", np.round(best, 4))

# efficiency along the matched column
col = int(np.argmin(np.abs(np.asarray(ratio_grid) - 1.0)))
for m in (1, 10, 50, 100):
    print(f"M = {m:3d}  Q_ME = {surface[m - 1, col]:.5f}")

# a crude text picture: one character per ratio, darker is better
shades = " .:-=+*#%@"
for m in (1, 25, 50, 75, 100):
    row = surface[m - 1]
    print(f"{m:3d} |" + "".join(shades[min(int(q * 10), 9)] for q in row) + "|")
