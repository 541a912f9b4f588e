"""Counter-propagating amplitude ratios across m/E, with the small-m/E limit.

Run:  python3 scripts/pairwave_sweep.py [mass]
"""
import math
import sys

import numpy as np

from majorana import spectral


def sweep(mass: float, ratios, amps=(1.0, 0.5, 0.0, 0.0)):
    amps = np.asarray(amps, dtype=float)
    c = amps[:2]
    slots = list(spectral.HIGH_ENERGY_EXACT_SLOTS)
    rows = []
    for ratio in ratios:
        q = mass * math.sqrt(1 / ratio**2 - 1)
        ra, rb = spectral.pairwave_ratios(q, mass, amps)
        a_minus = spectral.traveling_matrices(q, mass)["A-"] @ amps
        lead = np.linalg.norm(a_minus[slots]) / np.linalg.norm(c)
        lim = spectral.high_energy_limit(ratio, *c)["A-"]
        rows.append((ratio, q, ra, rb, lead, np.abs(a_minus[slots] - lim[slots]).max()))
    return rows


if __name__ == "__main__":
    mass = float(sys.argv[1]) if len(sys.argv) > 1 else 1.0
    ratios = np.concatenate([np.geomspace(1e-4, 0.1, 7), np.linspace(0.2, 0.99, 6)])
    print(f"{'m/E':>10} {'q':>12} {'|A-|/|A+|':>12} {'|B-|/|B+|':>12} {'lead':>12} {'limit res':>10}")
    for ratio, q, ra, rb, lead, res in sweep(mass, ratios):
        print(f"{ratio:10.4g} {q:12.5g} {ra:12.6g} {rb:12.6g} {lead:12.6g} {res:10.1e}")
