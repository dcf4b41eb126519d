"""
Exact event times against a forward-Euler reference
===================================================

The solver never takes a numerical step. Here we check it against a plain
Euler integrator and watch the discrepancy shrink linearly with the step.
"""

import numpy as np

from sclera_hybrid import SolverConfig, simulate, simulate_oracle
from sclera_hybrid.config import figure_config
from sclera_hybrid.solver import OracleConfig

cfg = figure_config("s5")
solver = SolverConfig(t_max=10.0)
ts = np.linspace(0.0, 10.0, 2001)

exact, _ = simulate(cfg.initial, cfg.params, solver, detect_cycles=False)
reference = exact.sample(ts)

# Halving dt should halve the sup-norm error for a first-order method.
previous = None
for dt in (4e-4, 2e-4, 1e-4, 5e-5):
    euler = simulate_oracle(cfg.initial, cfg.params, solver, OracleConfig(dt=dt))
    err = float(np.max(np.abs(euler.sample(ts) - reference)))
    ratio = "" if previous is None else f"  ratio {previous / err:.2f}"
    print(f"dt={dt:.0e}  jumps {euler.n_jumps:3d} (exact {exact.n_jumps})  sup error {err:.2e}{ratio}")
    previous = err

# Jump times drift by a few multiples of dt after forty-odd switches.
first = min(len(exact.jumps), len(euler.jumps))
lag = max(abs(a.time.t - b.time.t) for a, b in zip(exact.jumps[:first], euler.jumps[:first]))
print(f"largest jump-time difference at dt=5e-5: {lag:.2e}")
