"""Flat ``key = value`` scenario files.

Example::

    mode = evolve
    mass = 1.0
    box = 62.83185307179586
    lattice = 512
    dim = 1
    times = 0, 5, 10
    seed = 7
    packet = modes
    mode.0.p = 0 0 0.5
    mode.0.amps = 1 0 0 0

Packets are ``modes`` (indexed ``mode.i.p`` / ``mode.i.amps`` entries),
``gaussian`` (``gaussian.*`` keys) or ``random`` (``random.count``,
``random.max_index`` drawn from ``seed``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

MODES = ("verify", "evolve", "pairwave", "poincare")
PACKETS = ("modes", "gaussian", "random", "empty")


class ConfigError(ValueError):
    """Malformed or inconsistent scenario file."""


class MomentumError(ValueError):
    """A requested momentum is not a lattice momentum ``2 pi n / L``."""


@dataclass(frozen=True)
class ModeSpec:
    p: tuple[float, float, float]
    amps: tuple[float, float, float, float]


@dataclass(frozen=True)
class GaussianSpec:
    center: float | None = None
    width: float = 1.0
    k0: float = 0.0
    spinor: tuple[float, float, float, float] = (1.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class ScenarioConfig:
    mode: str
    mass: float = 1.0
    box: float = 2 * math.pi * 10
    lattice: int = 256
    dim: int = 1
    times: tuple[float, ...] = (0.0,)
    seed: int = 0
    output: str = "out"
    packet: str = "random"
    modes: tuple[ModeSpec, ...] = ()
    gaussian: GaussianSpec = field(default_factory=GaussianSpec)
    random_count: int = 8
    random_max_index: int = 16
    method: str = "exact_spectral"
    oracle_check: bool = True
    pairwave_ratios: tuple[float, ...] = (0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99)
    pairwave_amps: tuple[float, float, float, float] = (1.0, 0.5, 0.0, 0.0)
    poincare_samples: int = 100

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.mass < 0:
            raise ConfigError("mass must be non-negative")
        if self.box <= 0 or self.lattice < 4:
            raise ConfigError("box must be positive and lattice at least 4")
        if self.dim not in (1, 3):
            raise ConfigError("dim must be 1 or 3")
        if any(t < 0 for t in self.times) or list(self.times) != sorted(self.times):
            raise ConfigError("times must be non-negative and ascending")
        if self.packet not in PACKETS:
            raise ConfigError(f"packet must be one of {PACKETS}")
        if self.method not in ("exact_spectral", "rk4"):
            raise ConfigError("method must be exact_spectral or rk4")
        if any(not 0 < r < 1 for r in self.pairwave_ratios):
            raise ConfigError("pairwave ratios m/E must lie in (0, 1)")

    def lattice_index(self, p) -> tuple[int, int, int]:
        """Integer index ``n`` with ``p = 2 pi n / L``; raises :class:`MomentumError` otherwise."""
        dp = 2 * math.pi / self.box
        out = []
        for c in p:
            n = c / dp
            k = round(n)
            if abs(n - k) > 1e-9 * max(1.0, abs(n)):
                raise MomentumError(f"momentum {tuple(p)} is not a multiple of 2 pi / L")
            out.append(int(k))
        if self.dim == 1 and (out[0] or out[1]):
            raise MomentumError("1D scenarios only hold momenta along z")
        if not any(out):
            raise MomentumError("the zero momentum carries no paired mode")
        if max(abs(k) for k in out) >= self.lattice // 2:
            raise MomentumError(f"momentum {tuple(p)} is beyond the grid Nyquist limit")
        return tuple(out)


def _floats(text: str, key: str) -> tuple[float, ...]:
    parts = [s for s in text.replace(",", " ").split() if s]
    try:
        return tuple(float(s) for s in parts)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected numbers, got {text!r}") from exc


def _scalar(raw: dict, key: str, kind, default):
    if key not in raw:
        return default
    text = raw.pop(key)
    try:
        if kind is bool:
            low = text.lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(text)
            return low in ("true", "1", "yes")
        return kind(text)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {text!r} as {kind.__name__}") from exc


def parse_lines(text: str) -> dict[str, str]:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    return raw


def _mode_specs(raw: dict) -> tuple[ModeSpec, ...]:
    indices = sorted({int(k.split(".")[1]) for k in raw if k.startswith("mode.") and k.split(".")[1].isdigit()})
    specs = []
    for i in indices:
        p_key, a_key = f"mode.{i}.p", f"mode.{i}.amps"
        if p_key not in raw or a_key not in raw:
            raise ConfigError(f"mode.{i} needs both .p and .amps")
        p = _floats(raw.pop(p_key), p_key)
        if len(p) == 1:
            p = (0.0, 0.0, p[0])
        amps = _floats(raw.pop(a_key), a_key)
        if len(p) != 3 or len(amps) != 4:
            raise ConfigError(f"mode.{i}: p needs 1 or 3 numbers, amps needs 4")
        specs.append(ModeSpec(p, amps))
    return tuple(specs)


def parse_config(text: str) -> ScenarioConfig:
    raw = parse_lines(text)
    if "mode" not in raw:
        raise ConfigError("missing required key 'mode'")
    kw = dict(
        mode=raw.pop("mode"),
        mass=_scalar(raw, "mass", float, 1.0),
        box=_scalar(raw, "box", float, 2 * math.pi * 10),
        lattice=_scalar(raw, "lattice", int, 256),
        dim=_scalar(raw, "dim", int, 1),
        seed=_scalar(raw, "seed", int, 0),
        output=_scalar(raw, "output", str, "out"),
        packet=_scalar(raw, "packet", str, "random"),
        random_count=_scalar(raw, "random.count", int, 8),
        random_max_index=_scalar(raw, "random.max_index", int, 16),
        method=_scalar(raw, "method", str, "exact_spectral"),
        oracle_check=_scalar(raw, "oracle_check", bool, True),
        poincare_samples=_scalar(raw, "poincare.samples", int, 100),
    )
    if "times" in raw:
        kw["times"] = _floats(raw.pop("times"), "times")
    if "pairwave.ratios" in raw:
        kw["pairwave_ratios"] = _floats(raw.pop("pairwave.ratios"), "pairwave.ratios")
    if "pairwave.amps" in raw:
        amps = _floats(raw.pop("pairwave.amps"), "pairwave.amps")
        if len(amps) != 4:
            raise ConfigError("pairwave.amps needs 4 numbers")
        kw["pairwave_amps"] = amps
    g = GaussianSpec()
    center = _scalar(raw, "gaussian.center", float, None)
    spinor = _floats(raw.pop("gaussian.spinor"), "gaussian.spinor") if "gaussian.spinor" in raw else g.spinor
    if len(spinor) != 4 or not any(spinor):
        raise ConfigError("gaussian.spinor needs 4 numbers, not all zero")
    kw["gaussian"] = GaussianSpec(center, _scalar(raw, "gaussian.width", float, g.width),
                                  _scalar(raw, "gaussian.k0", float, g.k0), spinor)
    kw["modes"] = _mode_specs(raw)
    if raw:
        raise ConfigError(f"unknown keys: {', '.join(sorted(raw))}")
    return ScenarioConfig(**kw)


def load_config(path) -> ScenarioConfig:
    return parse_config(Path(path).read_text())
