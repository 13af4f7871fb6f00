"""Experiment configuration: a flat ``key = value`` file read with configparser.

All keys live in one ``[experiment]`` section. Unknown keys are rejected so
typos do not silently fall back to defaults. The canonical dump written to
each output directory is also what the config hash is computed from.
"""
from __future__ import annotations

import configparser
import dataclasses
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..estimators import STRATEGIES
from ..spectral import BACKENDS

SECTION = "experiment"
BASELINES = ("DC", "BC", "CC", "CR", "BFG")
AXES = ("k_sat", "k_cut", "gamma")


@dataclass
class ExperimentConfig:
    source: str = "synthetic"
    n_nodes: int = 2000
    gamma: float = 1.5
    k_sat: float = 20.0
    k_cut: float = math.inf
    k_min: int = 1
    k_max: Optional[int] = None
    seeds: list = field(default_factory=lambda: list(range(1, 11)))
    strategies: list = field(default_factory=lambda: ["A1", "A2", "DC", "BC", "CC", "CR", "BFG"])
    p_max: float = 0.3
    backend: Optional[str] = None
    connectivity: str = "take_lcc"
    lcc: bool = True
    annealed_tol: float = 1e-12
    quenched_tol: float = 1e-10
    axis: Optional[str] = None
    values: list = field(default_factory=list)

    @property
    def synthetic(self) -> bool:
        return self.source == "synthetic"

    @property
    def evaluation_backend(self) -> str:
        """Explicit ``backend`` or the default: annealed for synthetic, quenched for edge lists."""
        if self.backend:
            return self.backend
        return "annealed" if self.synthetic else "quenched"

    def validate(self, selection: bool = True) -> "ExperimentConfig":
        """Check invariants; ``selection=False`` skips the budget check (graph generation only)."""
        if not self.strategies:
            raise ValueError("at least one strategy is required")
        bad = [s for s in self.strategies if s not in STRATEGIES]
        if bad:
            raise ValueError(f"unknown strategies {bad}; choose from {list(STRATEGIES)}")
        if self.backend is not None and self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")
        if not 0 < self.p_max <= 1:
            raise ValueError("p_max must lie in (0, 1]")
        if self.synthetic:
            if not self.seeds:
                raise ValueError("synthetic source needs at least one seed")
            if selection and self.p_max * self.n_nodes < 1:
                raise ValueError("p_max * N must be at least 1")
        if self.connectivity not in ("take_lcc", "retry_new_seed"):
            raise ValueError("connectivity must be take_lcc or retry_new_seed")
        if self.axis is not None and self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}")
        return self

    def replace(self, **kw) -> "ExperimentConfig":
        return dataclasses.replace(self, **kw)

    def dumps(self) -> str:
        lines = [f"[{SECTION}]"]
        for f in dataclasses.fields(self):
            lines.append(f"{f.name} = {_format(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    @property
    def hash(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()[:16]


def _format(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "on" if v else "off"
    if isinstance(v, list):
        return ",".join(_format(x) for x in v)
    if isinstance(v, float):
        return "inf" if math.isinf(v) else repr(v)
    return str(v)


def _parse_list(s: str, conv) -> list:
    return [conv(x.strip()) for x in s.split(",") if x.strip()]


def _number(s: str):
    f = float(s)
    return int(f) if f.is_integer() and "." not in s and "e" not in s.lower() else f


_PARSERS = {
    "source": str, "n_nodes": int, "gamma": float, "k_sat": float, "k_cut": float,
    "k_min": int, "k_max": int, "p_max": float, "backend": str, "connectivity": str,
    "annealed_tol": float, "quenched_tol": float, "axis": str,
    "seeds": lambda s: _parse_list(s, int),
    "strategies": lambda s: _parse_list(s, str.upper),
    "values": lambda s: _parse_list(s, _number),
}


def parse_config(text: str, base: Optional[Path] = None, selection: bool = True) -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None)
    if not text.lstrip().startswith("["):
        text = f"[{SECTION}]\n" + text
    cp.read_string(text)
    if SECTION not in cp:
        raise ValueError(f"config needs an [{SECTION}] section")
    kwargs = {}
    for key, raw in cp[SECTION].items():
        raw = raw.strip()
        if key == "lcc":
            kwargs[key] = cp[SECTION].getboolean(key)
        elif key in _PARSERS:
            if raw == "":
                kwargs[key] = [] if key in ("seeds", "strategies", "values") else None
            else:
                kwargs[key] = _PARSERS[key](raw)
        else:
            raise ValueError(f"unknown config key {key!r}")
    if base is not None and kwargs.get("source", "synthetic") != "synthetic":
        src = Path(kwargs["source"])
        if not src.is_absolute():
            kwargs["source"] = str((base / src).resolve())
    return ExperimentConfig(**kwargs).validate(selection)


def load_config(path, selection: bool = True) -> ExperimentConfig:
    p = Path(path)
    return parse_config(p.read_text(), base=p.parent, selection=selection)
