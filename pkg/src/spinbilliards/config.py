"""Run configuration: flat "key = value" text files with strict validation."""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np


class ConfigError(ValueError):
    """Raised for unknown keys, bad values, or unparsable config lines."""


@dataclass
class RunConfig:
    # Rectangle default 31x15: (Lx+1)/(Ly+1) = 2 makes the two traversal
    # periods commensurate, which is what produces the corner revivals;
    # incommensurate aspect ratios wash them out.
    shape: str = "rectangle"
    lx: int = 31
    ly: int = 15
    a: int = 15
    r: int = 15
    mask_file: str = ""
    coupling: float = 1.0
    dt: float = 0.0  # 0 means "one swap time", resolved against coupling
    t_final_in_tl: float = 10.0
    record_stride: int = 1
    cgf_n: int = 3
    cgf_mode: str = "coherent"
    p_defect: float = 0.0
    epsilon_max: float = 0.0
    n_realizations: int = 1
    base_seed: int = 20240901
    snapshot_times: tuple[float, ...] = ()
    unfold_degree: int = 7
    lss_bins: int = 24
    lss_smax: float = 4.0
    dump_trajectory: bool = False
    dump_hamiltonian: bool = False
    output_dir: str = "out"

    def resolved_dt(self) -> float:
        return self.dt if self.dt > 0 else float(np.pi / (4.0 * self.coupling))


_BOOL_WORDS = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def _parse_value(name: str, kind: type, raw: str, lineno: int):
    raw = raw.strip()
    try:
        if kind is bool:
            if raw.lower() not in _BOOL_WORDS:
                raise ValueError(f"expected true/false, got {raw!r}")
            return _BOOL_WORDS[raw.lower()]
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        if kind is str:
            return raw
        if kind is tuple:
            return tuple(float(tok) for tok in raw.split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: key {name!r}: {exc}") from exc
    raise ConfigError(f"line {lineno}: key {name!r} has unsupported type")


# config files use "lambda" for the coupling strength
_KEY_ALIASES = {"lambda": "coupling"}
_FIELD_TYPES = {
    "shape": str,
    "lx": int,
    "ly": int,
    "a": int,
    "r": int,
    "mask_file": str,
    "coupling": float,
    "dt": float,
    "t_final_in_tl": float,
    "record_stride": int,
    "cgf_n": int,
    "cgf_mode": str,
    "p_defect": float,
    "epsilon_max": float,
    "n_realizations": int,
    "base_seed": int,
    "snapshot_times": tuple,
    "unfold_degree": int,
    "lss_bins": int,
    "lss_smax": float,
    "dump_trajectory": bool,
    "dump_hamiltonian": bool,
    "output_dir": str,
}


def parse_config_text(text: str) -> RunConfig:
    cfg = RunConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        key = _KEY_ALIASES.get(key, key)
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        setattr(cfg, key, _parse_value(key, _FIELD_TYPES[key], raw, lineno))
    _validate(cfg)
    return cfg


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


def _validate(cfg: RunConfig) -> None:
    if cfg.shape not in ("rectangle", "quarter_stadium", "custom"):
        raise ConfigError(f"key 'shape': unknown shape {cfg.shape!r}")
    if cfg.shape == "custom" and not cfg.mask_file:
        raise ConfigError("key 'mask_file': required when shape = custom")
    if cfg.lx < 1 or cfg.ly < 1:
        raise ConfigError(f"keys 'lx'/'ly': must be positive, got {cfg.lx}x{cfg.ly}")
    if cfg.a < 1 or cfg.r < 1:
        raise ConfigError(f"keys 'a'/'r': must be positive, got a={cfg.a}, r={cfg.r}")
    if cfg.coupling <= 0:
        raise ConfigError(f"key 'lambda': must be positive, got {cfg.coupling}")
    if cfg.dt < 0:
        raise ConfigError(f"key 'dt': must be >= 0, got {cfg.dt}")
    if cfg.t_final_in_tl <= 0:
        raise ConfigError(f"key 't_final_in_tl': must be positive, got {cfg.t_final_in_tl}")
    if cfg.record_stride < 1:
        raise ConfigError(f"key 'record_stride': must be >= 1, got {cfg.record_stride}")
    if cfg.cgf_n < 0:
        raise ConfigError(f"key 'cgf_n': must be >= 0, got {cfg.cgf_n}")
    if cfg.cgf_mode not in ("coherent", "incoherent"):
        raise ConfigError(f"key 'cgf_mode': must be coherent or incoherent, got {cfg.cgf_mode!r}")
    if not 0.0 <= cfg.p_defect <= 1.0:
        raise ConfigError(f"key 'p_defect': must lie in [0, 1], got {cfg.p_defect}")
    if cfg.epsilon_max < 0:
        raise ConfigError(f"key 'epsilon_max': must be >= 0, got {cfg.epsilon_max}")
    if cfg.n_realizations < 1:
        raise ConfigError(f"key 'n_realizations': must be >= 1, got {cfg.n_realizations}")
    if cfg.unfold_degree < 1:
        raise ConfigError(f"key 'unfold_degree': must be >= 1, got {cfg.unfold_degree}")
    if cfg.lss_bins < 2:
        raise ConfigError(f"key 'lss_bins': must be >= 2, got {cfg.lss_bins}")
    if cfg.lss_smax <= 0:
        raise ConfigError(f"key 'lss_smax': must be positive, got {cfg.lss_smax}")


def manifest_lines(cfg: RunConfig, extras: dict[str, object]) -> list[str]:
    """Config echo plus derived quantities, as stable key = value lines."""
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            value = ",".join(repr(float(v)) for v in value)
        lines.append(f"{f.name} = {value}")
    for key in sorted(extras):
        lines.append(f"{key} = {extras[key]}")
    return lines
