"""Walk through a BER sweep for all four schemes and print the curves.

Shows the typical workflow: build a config, run the sweep, read gains off the
curves. Uses a reduced bit budget so the whole script runs in under a minute;
increase N_BITS for publication-quality curves.
"""
import numpy as np

from sidelink_sim import ExperimentConfig, Scheme, run_sweep

N_BITS = 100_000
GRID = tuple(float(s) for s in range(0, 34, 2))

curves = {}
for scheme in Scheme:
    cfg = ExperimentConfig(scheme=scheme, snr_grid_db=GRID, n_bits=N_BITS)
    curves[scheme.value] = np.array([e.ber for e in run_sweep(cfg)])
    print(f"simulated {scheme.value}")

print(f"\n{'snr_db':>6} " + " ".join(f"{name:>10}" for name in curves))
for i, snr in enumerate(GRID):
    row = " ".join(f"{curves[name][i]:10.2e}" for name in curves)
    print(f"{snr:6.0f} {row}")

# read the selection gain off the curves at a fixed BER
def snr_at(bers, target):
    for i in range(len(bers) - 1):
        if bers[i] > target >= bers[i + 1] > 0:
            t = (np.log(target) - np.log(bers[i])) / (np.log(bers[i + 1]) - np.log(bers[i]))
            return GRID[i] + t * (GRID[i + 1] - GRID[i])
    return float("nan")

gain = snr_at(curves["direct"], 4e-3) - snr_at(curves["ods"], 4e-3)
print(f"\nbest-device selection gain over the direct link at BER 4e-3: {gain:.1f} dB")
