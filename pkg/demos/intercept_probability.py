"""Compare Monte Carlo intercept probabilities against the closed forms.

Sweeps the average main-to-eavesdropper channel-gain ratio and prints one
column per scheme, plus the analytic product-form value for reference.
"""
import numpy as np

from sidelink_sim import (ExperimentConfig, Scheme, WiretapStats,
                          intercept_probability_ods, run_intercept_sweep)

GRID = tuple(float(x) for x in range(-5, 17, 2))
TRIALS = 100_000

curves = {}
for scheme in (Scheme.DIRECT_ONLY, Scheme.PODS_A, Scheme.PODS_P):
    cfg = ExperimentConfig(scheme=scheme)
    curves[scheme.value] = [e.estimate for e in run_intercept_sweep(cfg, GRID, TRIALS)]

# analytic reference: wiretap-aware best of 5 symmetric devices
analytic = []
for lam_db in GRID:
    rho_e = 1.0 / 10 ** (lam_db / 10.0)
    stats = WiretapStats(rho_e, 1.0, np.full(5, rho_e), np.ones(5), 5)
    analytic.append(intercept_probability_ods(stats))

print(f"{'ratio_db':>8} {'direct':>10} {'pods-a':>10} {'pods-p':>10} {'aware-5':>10}")
for i, lam in enumerate(GRID):
    print(f"{lam:8.0f} {curves['direct'][i]:10.4f} {curves['pods-a'][i]:10.4f} "
          f"{curves['pods-p'][i]:10.4f} {analytic[i]:10.2e}")
