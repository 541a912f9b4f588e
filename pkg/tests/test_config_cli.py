import csv
import math
from pathlib import Path

import numpy as np
import pytest

from majorana import cli
from majorana.config import ConfigError, MomentumError, parse_config

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def test_parse_full_config():
    cfg = parse_config("""
        # comment
        mode = evolve
        mass = 0.5   # trailing comment
        box = 6.283185307179586
        lattice = 32
        times = 0, 1.5, 3
        packet = modes
        mode.0.p = 0 0 2
        mode.0.amps = 1 0 0 0
        mode.1.p = -1
        mode.1.amps = 0 1 0 0
    """)
    assert cfg.mode == "evolve" and cfg.mass == 0.5 and cfg.times == (0.0, 1.5, 3.0)
    assert cfg.modes[1].p == (0.0, 0.0, -1.0)
    assert cfg.lattice_index(cfg.modes[0].p) == (0, 0, 2)


@pytest.mark.parametrize("text", [
    "mass = 1",
    "mode = evolve\nmode = verify",
    "mode = evolve\nnonsense",
    "mode = evolve\nmass = heavy",
    "mode = evolve\nmass = -1",
    "mode = evolve\ntimes = 3, 1",
    "mode = evolve\ntimes = -1",
    "mode = evolve\ndim = 2",
    "mode = evolve\nunknown = 1",
    "mode = evolve\nmode.0.p = 0 0 1",
    "mode = evolve\nmode.0.p = 1 2\nmode.0.amps = 1 0 0 0",
    "mode = pairwave\npairwave.ratios = 0.5, 1.0",
])
def test_malformed_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_unrepresentable_momenta():
    cfg = parse_config("mode = evolve\nbox = 6.283185307179586\nlattice = 16")
    with pytest.raises(MomentumError):
        cfg.lattice_index((0, 0, 1.5))
    with pytest.raises(MomentumError):
        cfg.lattice_index((1, 0, 0))
    with pytest.raises(MomentumError):
        cfg.lattice_index((0, 0, 0))
    with pytest.raises(MomentumError):
        cfg.lattice_index((0, 0, 8))


def _run(tmp_path, text, *extra):
    path = tmp_path / "s.cfg"
    path.write_text(text)
    out = tmp_path / "out"
    return cli.main([str(path), "--out", str(out), *extra]), out


def _rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_exit_codes(tmp_path):
    assert _run(tmp_path, "mode = nope")[0] == cli.EXIT_CONFIG
    code, _ = _run(tmp_path, "mode = evolve\npacket = modes\nbox = 6.283185307179586\nlattice = 16\n"
                             "mode.0.p = 0 0 1.5\nmode.0.amps = 1 0 0 0")
    assert code == cli.EXIT_NUMERIC
    assert cli.main([str(tmp_path / "missing.cfg")]) == cli.EXIT_IO
    blocker = tmp_path / "file"
    blocker.write_text("")
    path = tmp_path / "p.cfg"
    path.write_text("mode = pairwave")
    assert cli.main([str(path), "--out", str(blocker / "sub")]) == cli.EXIT_IO


def test_empty_packet_writes_zero_density(tmp_path):
    code, out = _run(tmp_path, "mode = evolve\npacket = empty\nlattice = 16\ntimes = 0, 1")
    assert code == 0
    rows = _rows(out / "state_0001.csv")
    assert rows[0] == ["site", "x", "y", "z", "psi1", "psi2", "psi3", "psi4", "density"]
    assert all(float(r[-1]) == 0.0 for r in rows[1:])
    assert len(rows) == 17


def test_evolve_modes_oracle_and_norm(tmp_path):
    code, out = _run(tmp_path, (CONFIGS / "evolve_modes.cfg").read_text())
    assert code == 0
    rows = _rows(out / "expectations.csv")
    head = rows[0]
    for r in rows[1:]:
        rec = dict(zip(head, r))
        assert float(rec["oracle_residual"]) <= 1e-12
        assert float(rec["grid_norm_sq"]) == pytest.approx(float(rec["plancherel"]), rel=1e-12)


def test_pairwave_table(tmp_path):
    code, out = _run(tmp_path, (CONFIGS / "pairwave.cfg").read_text())
    assert code == 0
    rows = _rows(out / "pairwave.csv")
    assert rows[0][0] == "m_over_E"
    for r in rows[1:]:
        ratio, lead, res = float(r[0]), float(r[4]), float(r[5])
        assert lead == pytest.approx(ratio, abs=1e-12)
        if ratio <= 0.1:
            assert res <= 1e-10


def test_poincare_table(tmp_path):
    code, out = _run(tmp_path, (CONFIGS / "poincare.cfg").read_text())
    assert code == 0
    rows = _rows(out / "poincare.csv")[1:]
    assert len(rows) == 100
    assert max(float(r[4]) for r in rows) <= 1e-9


def test_verify_default(tmp_path):
    code, out = _run(tmp_path, "mode = verify")
    assert code == 0
    assert all(r[3] == "1" for r in _rows(out / "verify.csv")[1:])


@pytest.mark.parametrize("name", ["evolve_gaussian.cfg", "pairwave.cfg", "poincare.cfg"])
def test_outputs_are_byte_identical(tmp_path, name, monkeypatch):
    text = (CONFIGS / name).read_text()
    a = tmp_path / "a"
    b = tmp_path / "b"
    a.mkdir()
    b.mkdir()
    c1, o1 = _run(a, text)
    monkeypatch.setenv("MAJORANA_THREADS", "4")
    c2, o2 = _run(b, text)
    assert c1 == c2 == 0
    files = sorted(p.name for p in o1.iterdir())
    assert files == sorted(p.name for p in o2.iterdir())
    for f in files:
        assert (o1 / f).read_bytes() == (o2 / f).read_bytes()


def test_bad_thread_env(tmp_path, monkeypatch):
    monkeypatch.setenv("MAJORANA_THREADS", "many")
    assert _run(tmp_path, "mode = pairwave")[0] == cli.EXIT_CONFIG
