"""RK4 error on the lattice against the exact Fourier stepper, for a range of steps.

Run:  python3 scripts/rk4_convergence.py
"""
import math

import numpy as np

from majorana import grid, spectral

BOX, N, MASS, DURATION, MODES = 20 * math.pi, 512, 1.0, 50.0, 20


def main(seed: int = 4):
    rng = np.random.default_rng(seed)
    packet = spectral.WavePacket(BOX, MASS, 1)
    for k in rng.choice(np.arange(1, 60), size=MODES, replace=False):
        packet = packet.with_mode((0, 0, int(k)), rng.normal(size=4), rng.normal(size=4))
    z = BOX * np.arange(N) / N
    start = grid.GridState(BOX, N, spectral.synthesize(packet, z, 0.0), 1, MASS)
    ref = spectral.synthesize(packet, z, DURATION)
    e_max = grid.max_energy(start)
    exact = grid.evolve(start, DURATION).field
    print(f"E_max = {e_max:.4f}, exact stepper error {np.linalg.norm(exact - ref) / np.linalg.norm(ref):.2e}")
    prev = None
    for frac in (0.4, 0.2, 0.1, 0.05):
        out = grid.evolve(start, DURATION, "rk4", dt=frac / e_max).field
        err = np.linalg.norm(out - ref) / np.linalg.norm(ref)
        order = "" if prev is None else f"  order {math.log2(prev / err):.3f}"
        print(f"dt = {frac:5.2f}/E_max: error {err:.3e}{order}")
        prev = err


if __name__ == "__main__":
    main()
