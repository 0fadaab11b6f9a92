"""A miniature threshold scan: small shot counts, quick to run.

The failure-rate curves of increasing distances cross near the threshold;
the finite-size fit extracts the crossing point.  Production-grade numbers
need ~5e4 shots per point (see README); this demo uses 2000 so it finishes
in about a minute.

Run with:  python3 demos/04_mini_threshold.py
"""

import numpy as np

from xyz2dec.errors import FitFailure
from xyz2dec.harness import RunConfig, fit_threshold, run_point

results = []
ps = np.linspace(0.15, 0.21, 5)
for d in (3, 5, 7):
    row = []
    for p in ps:
        cfg = RunConfig(d=d, p=float(p), eta=0.5)
        res = run_point(cfg, shots=2000, seed=0)
        results.append(res)
        row.append(res.p_f)
    print(f"d={d}: " + " ".join(f"{pf:.3f}" for pf in row))

try:
    fit = fit_threshold(results)
    print(f"\nfitted threshold p_th = {fit.p_th:.4f} +/- {fit.sigma:.4f} "
          f"(nu = {fit.nu:.2f})")
except FitFailure as exc:
    print(f"\nfit did not converge at this shot budget: {exc}")
