"""Flat ``key = value`` experiment configuration with dotted namespaces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

from .model import ModelParams, validate

COMMANDS = ("constants", "verify-identities", "simulate", "moments", "exponent-fit", "sweep")


class ConfigError(ValueError):
    pass


def _floats(text: str) -> tuple[float, ...]:
    """Comma-separated floats, or ``logspace(a, b, n)`` / ``range(a, b)`` shorthands."""
    s = text.strip()
    if s.startswith("logspace(") and s.endswith(")"):
        a, b, n = (x.strip() for x in s[9:-1].split(","))
        a, b, n = float(a), float(b), int(n)
        if n < 2:
            raise ValueError("logspace needs at least two points")
        return tuple(10 ** (a + (b - a) * k / (n - 1)) for k in range(n))
    if s.startswith("range(") and s.endswith(")"):
        a, b = (int(x) for x in s[6:-1].split(","))
        return tuple(float(k) for k in range(a, b + 1))
    if not s:
        return ()
    return tuple(float(x) for x in s.split(","))


def _bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class McConfig:
    n_paths: int = 10_000
    grid_M: int = 256
    seed: int = 0
    threads: int = 1
    dump: bool = False


@dataclass(frozen=True)
class QuadConfig:
    tol: float = 1e-4
    panel_budget: int = 2**16


@dataclass(frozen=True)
class ExperimentConfig:
    params: ModelParams = field(default_factory=lambda: ModelParams(1, 0.5, 2.0, 0.75))
    command: str | None = None
    t_grid: tuple[float, ...] = (1.0,)
    p_grid: tuple[float, ...] = tuple(float(p) for p in range(2, 65))
    p_time: float = 100.0
    alpha_grid: tuple[float, ...] = ()
    c_growth: float | None = None
    mc: McConfig = field(default_factory=McConfig)
    quad: QuadConfig = field(default_factory=QuadConfig)
    output: str = "fracheat-out/"

    def items(self) -> list[tuple[str, str]]:
        """Resolved configuration as ``(key, text)`` pairs in a fixed order."""
        out = [("command", str(self.command))]
        for f in fields(ModelParams):
            out.append((f"params.{f.name}", repr(getattr(self.params, f.name))))
        out.append(("t_grid", ",".join(repr(t) for t in self.t_grid)))
        out.append(("p_grid", ",".join(repr(p) for p in self.p_grid)))
        out.append(("sweep.p_time", repr(self.p_time)))
        out.append(("sweep.alpha_grid", ",".join(repr(a) for a in self.alpha_grid)))
        out.append(("series.c_growth", "auto" if self.c_growth is None else repr(self.c_growth)))
        for f in fields(McConfig):
            out.append((f"mc.{f.name}", repr(getattr(self.mc, f.name))))
        for f in fields(QuadConfig):
            out.append((f"quad.{f.name}", repr(getattr(self.quad, f.name))))
        out.append(("output", self.output))
        return out


_PARAM_TYPES = {"d": int, "alpha": float, "beta": float, "hurst": float, "a": float, "b": float}


def parse_lines(lines) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment.  Duplicate keys are an error."""
    out: dict[str, str] = {}
    for no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {no}: expected 'key = value', got {raw.strip()!r}")
        k, v = (s.strip() for s in line.split("=", 1))
        if not k:
            raise ConfigError(f"line {no}: empty key")
        if k in out:
            raise ConfigError(f"line {no}: duplicate key {k!r}")
        out[k] = v
    return out


def build(entries: dict[str, str], base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Apply textual ``entries`` on top of ``base``; unknown keys raise :class:`ConfigError`."""
    cfg = base or ExperimentConfig()
    params = dict(cfg.params.as_dict())
    mc = dict(cfg.mc.__dict__)
    quad = dict(cfg.quad.__dict__)
    top: dict = {}
    for k, v in entries.items():
        try:
            if k.startswith("params.") and k[7:] in _PARAM_TYPES:
                params[k[7:]] = _PARAM_TYPES[k[7:]](v)
            elif k.startswith("mc.") and k[3:] in mc:
                name = k[3:]
                mc[name] = _bool(v) if name == "dump" else int(v)
            elif k.startswith("quad.") and k[5:] in quad:
                name = k[5:]
                quad[name] = float(v) if name == "tol" else int(v)
            elif k == "command":
                if v not in COMMANDS:
                    raise ConfigError(f"unknown command {v!r}; choose from {', '.join(COMMANDS)}")
                top["command"] = v
            elif k == "t_grid":
                top["t_grid"] = _floats(v)
            elif k == "p_grid":
                top["p_grid"] = _floats(v)
            elif k == "sweep.p_time":
                top["p_time"] = float(v)
            elif k == "sweep.alpha_grid":
                top["alpha_grid"] = _floats(v)
            elif k == "series.c_growth":
                top["c_growth"] = None if v.strip().lower() == "auto" else float(v)
            elif k == "output":
                top["output"] = v
            else:
                raise ConfigError(f"unknown configuration key {k!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad value for {k!r}: {exc}") from None
    out = replace(cfg, params=ModelParams(**params), mc=McConfig(**mc), quad=QuadConfig(**quad), **top)
    _check(out)
    return out


def _check(cfg: ExperimentConfig) -> None:
    validate(cfg.params)
    if any(not (t > 0 and math.isfinite(t)) for t in cfg.t_grid):
        raise ConfigError("t_grid entries must be positive")
    if any(not p >= 2 for p in cfg.p_grid):
        raise ConfigError("p_grid entries must be >= 2")
    if cfg.mc.n_paths < 2 or cfg.mc.grid_M < 1 or cfg.mc.threads < 1:
        raise ConfigError("mc.n_paths >= 2, mc.grid_M >= 1 and mc.threads >= 1 required")
    if not cfg.quad.tol > 0:
        raise ConfigError("quad.tol must be positive")
    if cfg.c_growth is not None and not cfg.c_growth > 0:
        raise ConfigError("series.c_growth must be positive or 'auto'")


def load(path: str) -> dict[str, str]:
    with open(path) as fh:
        return parse_lines(fh)
