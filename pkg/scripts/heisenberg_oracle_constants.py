"""Oracle constants for the rotation of <p5>: lattice integration, no closed forms.

A probe paired mode is sampled on a 1D grid, advanced with the exact Fourier
stepper, and <p5_z>(t) is measured on the lattice.  A least-squares fit of
``a + b cos(2Et) + c sin(2Et)`` gives the rotating magnitude per unit |p|.
Run:  python3 scripts/heisenberg_oracle_constants.py
"""
import math

import numpy as np

from majorana import grid, spectral

RATIOS = (0.1, 0.5, 0.999)
BOX, N, INDEX = 2 * math.pi, 64, 3


def measure(ratio: float, samples: int = 256):
    q = 2 * math.pi * INDEX / BOX
    m = q * ratio / math.sqrt(1 - ratio**2)
    mode = spectral.heisenberg_probe_mode((0, 0, q), m)
    packet = spectral.WavePacket(BOX, m, 1, {(0, 0, INDEX): mode})
    z = BOX * np.arange(N) / N
    state = grid.GridState(BOX, N, spectral.synthesize(packet, z, 0.0), 1, m)
    energy = math.hypot(m, q)
    period = math.pi / energy
    times = np.linspace(0.0, 8 * period, samples, endpoint=False)
    series = []
    for t in times:
        f = grid.evolve(state, float(t)).field
        unit = state.with_field(f / math.sqrt(np.sum(f * f) * state.cell))
        series.append(grid.expectation(unit, "axial_momentum", 2))
    series = np.array(series)
    design = np.column_stack([np.ones_like(times), np.cos(2 * energy * times), np.sin(2 * energy * times)])
    coef, *_ = np.linalg.lstsq(design, series, rcond=None)
    spectrum = np.abs(np.fft.rfft(series - series.mean()))
    peak = int(np.argmax(spectrum))
    freq = 2 * math.pi * peak / (times[1] - times[0]) / samples
    return math.hypot(coef[1], coef[2]) / q, freq / (2 * energy)


if __name__ == "__main__":
    for r in RATIOS:
        mag, f = measure(r)
        print(f"m/E = {r}: rotating magnitude / |p| = {mag!r}, peak frequency / 2E = {f!r}")
