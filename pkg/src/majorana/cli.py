"""``majorana <config> [--out DIR] [--threads N]``: run one scenario and write CSV tables.

Exit codes: 0 ok, 2 malformed config, 3 numeric failure (including
unrepresentable momenta and failed verification), 4 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import checks, grid, poincare, spectral
from .config import ConfigError, MomentumError, ScenarioConfig, load_config

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer, str)):
        return str(v)
    return f"{float(v):.17g}"


def write_table(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _map(threads: int, fn, items):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# -- packet construction -------------------------------------------------------------

def build_packet(cfg: ScenarioConfig) -> spectral.WavePacket:
    packet = spectral.WavePacket(cfg.box, cfg.mass, cfg.dim)
    if cfg.packet == "empty":
        return packet
    if cfg.packet == "gaussian":
        if cfg.dim != 1:
            raise ConfigError("gaussian packets are only available for dim = 1")
        g = cfg.gaussian
        st = grid.gaussian_state(cfg.box, cfg.lattice, g.width, g.k0, g.spinor, g.center, cfg.mass)
        return spectral.packet_from_field(st.field, cfg.box, cfg.mass, 1)
    if cfg.packet == "modes":
        if not cfg.modes:
            raise ConfigError("packet = modes needs at least one mode.i entry")
        acc: dict[tuple, np.ndarray] = {}
        for spec in cfg.modes:
            key = cfg.lattice_index(spec.p)
            canon = spectral.is_canonical_key(key)
            ckey = key if canon else tuple(-k for k in key)
            amps = acc.setdefault(ckey, np.zeros(8))
            amps[(0 if canon else 4):(4 if canon else 8)] += spec.amps
        for key in sorted(acc):
            packet = packet.with_mode(key, acc[key][:4], acc[key][4:])
        return packet
    rng = np.random.default_rng(cfg.seed)
    kmax = min(cfg.random_max_index, cfg.lattice // 2 - 1)
    if kmax < 1:
        raise ConfigError("random.max_index must be at least 1")
    keys = set()
    budget = cfg.random_count
    pool = ([(0, 0, k) for k in range(1, kmax + 1)] if cfg.dim == 1 else
            [(a, b, c) for a in range(-kmax, kmax + 1) for b in range(-kmax, kmax + 1)
             for c in range(-kmax, kmax + 1) if spectral.is_canonical_key((a, b, c))])
    if budget > len(pool):
        raise ConfigError("random.count exceeds the number of available lattice pairs")
    for i in rng.choice(len(pool), size=budget, replace=False):
        keys.add(pool[int(i)])
    for key in sorted(keys):
        packet = packet.with_mode(key, rng.normal(size=4), rng.normal(size=4))
    return packet


def _field(cfg: ScenarioConfig, packet: spectral.WavePacket, t: float) -> np.ndarray:
    pos = spectral.lattice_positions(cfg.box, cfg.lattice, cfg.dim)
    f = spectral.synthesize(packet, pos, t)
    return f.reshape((4,) + (cfg.lattice,) * cfg.dim)


# -- scenarios -------------------------------------------------------------------------

def run_verify(cfg: ScenarioConfig, out: Path, threads: int) -> int:
    results = checks.run_all(cfg.seed)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.value:.3e} (tol {r.tolerance:.0e}, {r.seconds:.2f}s)")
    write_table(out / "verify.csv", ["check", "value", "tolerance", "passed"],
                [(r.name, r.value, r.tolerance, int(r.passed)) for r in results])
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed} passed, {failed} failed")
    return EXIT_OK if failed == 0 else EXIT_NUMERIC


def _expectation_row(state: grid.GridState, axis: int):
    nrm = grid.norm_sq(state)
    if nrm == 0.0:
        return [math.nan] * 4
    unit = state.with_field(state.field / math.sqrt(nrm))
    p5 = grid.expectation(unit, "axial_momentum", axis)
    p5_sq = grid.expectation(unit, "axial_momentum_sq", axis)
    try:
        grid.check_localized(unit, axis)
        x = grid.expectation(unit, "position", axis)
        x_var = grid.expectation(unit, "position_sq", axis) - x * x
    except ValueError:
        x, x_var = math.nan, math.nan
    return [x, x_var, p5, p5_sq - p5 * p5]


def run_evolve(cfg: ScenarioConfig, out: Path, threads: int) -> int:
    packet = build_packet(cfg)
    fields = _map(threads, lambda t: _field(cfg, packet, t), cfg.times)
    axes = (2,) if cfg.dim == 1 else (0, 1, 2)
    oracle = grid.GridState(cfg.box, cfg.lattice, fields[0], cfg.dim, cfg.mass, cfg.times[0])
    rows = []
    for i, (t, f) in enumerate(zip(cfg.times, fields)):
        state = grid.GridState(cfg.box, cfg.lattice, f, cfg.dim, cfg.mass, t)
        grid.write_state_csv(state, out / f"state_{i:04d}.csv")
        residual = math.nan
        if cfg.oracle_check:
            if t > oracle.t:
                oracle = grid.evolve(oracle, t - oracle.t, cfg.method,
                                     None if cfg.method == "exact_spectral" else 0.1 / grid.max_energy(oracle))
            ref = np.linalg.norm(f)
            residual = np.linalg.norm(oracle.field - f) / ref if ref > 0 else np.linalg.norm(oracle.field)
        row = [i, t, grid.norm_sq(state), packet.evolve(t).norm_sq(), residual]
        for axis in axes:
            row += _expectation_row(state, axis)
        rows.append(row)
    header = ["index", "t", "grid_norm_sq", "plancherel", "oracle_residual"]
    for axis in axes:
        c = "xyz"[axis]
        header += [f"{c}_mean", f"{c}_var", f"p5{c}_mean", f"p5{c}_var"]
    write_table(out / "expectations.csv", header, rows)
    print(f"wrote {len(rows)} state files and expectations.csv to {out}")
    return EXIT_OK


def run_pairwave(cfg: ScenarioConfig, out: Path, threads: int) -> int:
    if cfg.mass <= 0:
        raise ConfigError("pairwave sweeps need mass > 0")
    amps = np.asarray(cfg.pairwave_amps, dtype=float)
    c = amps[:2]

    def row(ratio: float):
        q = cfg.mass * math.sqrt(1.0 / ratio**2 - 1.0)
        ra, rb = spectral.pairwave_ratios(q, cfg.mass, amps)
        a_minus = spectral.traveling_matrices(q, cfg.mass)["A-"] @ amps
        lead = float(np.linalg.norm(a_minus[2:])) / float(np.linalg.norm(c)) if c.any() else math.nan
        lim = spectral.high_energy_limit(ratio, *c)["A-"]
        slots = list(spectral.HIGH_ENERGY_EXACT_SLOTS)
        lim_res = float(np.abs(a_minus[slots] - lim[slots]).max())
        return [ratio, q, ra, rb, lead, lim_res]

    rows = _map(threads, row, cfg.pairwave_ratios)
    write_table(out / "pairwave.csv",
                ["m_over_E", "q", "A_minus_over_A_plus", "B_minus_over_B_plus",
                 "leading_counter_ratio", "limit_residual"], rows)
    print(f"wrote pairwave.csv ({len(rows)} rows) to {out}")
    return EXIT_OK


def _random_transform(rng: np.random.Generator, kind: str):
    if kind == "boost":
        return poincare.LorentzTransform.boost(rng.normal(size=3), rng.uniform(0.0, 2.0))
    return poincare.LorentzTransform.rotation(rng.normal(size=3), rng.uniform(0.0, 2 * math.pi))


def run_poincare(cfg: ScenarioConfig, out: Path, threads: int) -> int:
    if cfg.mass <= 0:
        raise ConfigError("poincare scenarios need mass > 0")
    packet = build_packet(cfg)
    modes = poincare.covariant_packet(packet)
    ref = poincare.invariant_product(modes, modes)
    planch = packet.norm_sq()
    rng = np.random.default_rng(cfg.seed)
    kinds = ("boost", "rotation", "translation")
    rows = [[0, "identity", planch, ref, abs(ref - planch) / planch if planch else 0.0,
             max((poincare.constraint_residual(c) for c in modes), default=0.0)]]
    for i in range(1, cfg.poincare_samples + 1):
        kind = kinds[(i - 1) % 3]
        if kind == "translation":
            a = rng.normal(size=4) * 5.0
            moved = [poincare.translate(c, a) for c in modes]
        else:
            lt = _random_transform(rng, kind)
            moved = [poincare.lorentz_act(c, lt) for c in modes]
        val = poincare.invariant_product(moved, moved)
        rows.append([i, kind, planch, val, abs(val - ref) / ref if ref else 0.0,
                     max((poincare.constraint_residual(c) for c in moved), default=0.0)])
    write_table(out / "poincare.csv",
                ["index", "transform", "plancherel", "invariant_product", "relative_residual",
                 "constraint_residual"], rows)
    print(f"wrote poincare.csv ({len(rows)} rows) to {out}")
    return EXIT_OK


SCENARIOS = {"verify": run_verify, "evolve": run_evolve, "pairwave": run_pairwave, "poincare": run_poincare}


def _threads(arg: int | None) -> int:
    if arg is not None:
        return max(1, arg)
    env = os.environ.get("MAJORANA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"MAJORANA_THREADS must be an integer, got {env!r}") from None
    return 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="majorana", description=__doc__.splitlines()[0])
    parser.add_argument("config", help="scenario file (key = value lines)")
    parser.add_argument("--out", help="output directory (overrides 'output' in the config)")
    parser.add_argument("--threads", type=int, help="worker threads (default: $MAJORANA_THREADS or 1)")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        threads = _threads(args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    out = Path(args.out if args.out else cfg.output)
    try:
        out.mkdir(parents=True, exist_ok=True)
        return SCENARIOS[cfg.mode](cfg, out, threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (MomentumError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
