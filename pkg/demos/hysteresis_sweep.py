"""
How wide must the hysteresis band be?
=====================================

Sweep the common half-width h from 0 to 0.05 at the s5 operating point and
watch the qualitative outcome change.
"""

from sclera_hybrid.analysis import Axis, sweep
from sclera_hybrid.config import figure_config

cfg = figure_config("s5")

# One axis, eleven cells. The alias "h" sets all four half-widths at once.
grid = sweep(cfg.params, [Axis("h", 0.0, 0.05, 11)], cfg.initial, cfg.solver, workers=2)

for cell in grid.cells:
    print(f"h={cell.values['h']:.3f}  {cell.kind:18s} {cell.summary()}")

# With no band the orbit collapses onto a switching corner. A narrow band
# sustains a cycle whose period grows with h, and a wide one lets x1
# overshoot far enough that the network shuts down entirely.
periods = [(c.values["h"], c.period) for c in grid.cells if c.period is not None]
print("cycle periods:", ", ".join(f"h={h:.3f}: T={T:.3f}" for h, T in periods))
