"""Representation and run configuration files (JSON or TOML).

Unknown keys are rejected everywhere so that typos surface as errors.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

from .coloring import Representation
from .diagram import LinkDiagram, builtin, parse_pd
from .exactalg import Matrix, Ring, Variable, parse_domain
from .pairing import BilinearFormSpec

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ValueError):
    pass


def _reject_unknown(data: dict, allowed: set[str], where: str):
    extra = set(data) - allowed
    if extra:
        raise ConfigError(f"unknown keys in {where}: {sorted(extra)}")


def read_mapping(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        if path.suffix == ".toml":
            return tomllib.loads(text)
        return json.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# rings and representations


def parse_variable(v) -> Variable:
    """``"t"``, ``"s:self"`` or ``{"name": "s", "involution": "self"}``."""
    if isinstance(v, str):
        name, _, inv = v.partition(":")
        return Variable(name.strip(), inv.strip() or "inverse")
    if isinstance(v, dict):
        _reject_unknown(v, {"name", "involution"}, "variable")
        return Variable(v["name"], v.get("involution", "inverse"))
    raise ConfigError(f"bad variable entry {v!r}")


def ring_from_config(data: dict) -> Ring:
    _reject_unknown(data, {"base", "variables", "moduli"}, "ring")
    try:
        base = parse_domain(str(data.get("base", "QQ")))
        ring = Ring(base, [parse_variable(v) for v in data.get("variables", [])])
        for m in data.get("moduli", []):
            if isinstance(m, dict):
                _reject_unknown(m, {"variable", "polynomial"}, "modulus")
                ring = ring.quotient(m["variable"], str(m["polynomial"]))
            else:
                var, poly = m
                ring = ring.quotient(var, str(poly))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed ring section: {exc}") from exc
    return ring


REP_KEYS = {"ring", "dimension", "generators", "rho", "t_vars", "psi", "knot", "pd"}


@dataclass
class RepConfig:
    ring: Ring
    representation: Representation
    psi: BilinearFormSpec | None
    diagram: LinkDiagram | None


def rep_from_config(data: dict, diagram: LinkDiagram | None = None) -> RepConfig:
    _reject_unknown(data, REP_KEYS, "representation config")
    if "ring" not in data or "generators" not in data:
        raise ConfigError("representation config needs 'ring' and 'generators'")
    if diagram is None:
        if "knot" in data:
            diagram = builtin(data["knot"])
        elif "pd" in data:
            diagram = parse_pd(data["pd"])
    if diagram is None:
        raise ConfigError("no diagram: give --knot/--pd or a 'knot'/'pd' key")
    ring = ring_from_config(data["ring"])
    gens = {}
    for arc, rows in data["generators"].items():
        try:
            gens[int(arc)] = Matrix(ring, [[ring.convert(str(e)) for e in row] for row in rows])
        except ValueError as exc:
            raise ConfigError(f"generator for arc {arc}: {exc}") from exc
    n = data.get("dimension")
    for a, m in gens.items():
        if n is not None and m.shape != (n, n):
            raise ConfigError(f"generator for arc {a} has shape {m.shape}, dimension is {n}")
    kw: dict[str, Any] = {}
    if "rho" in data:
        kw["rho"] = tuple(tuple(data["rho"][str(a)]) for a in diagram.arcs)
    if "t_vars" in data:
        kw["t_vars"] = tuple(data["t_vars"])
    f = Representation.from_generators(diagram, ring, gens, **kw)
    psi = BilinearFormSpec.from_dict(data["psi"]) if "psi" in data else None
    return RepConfig(ring, f, psi, diagram)


# ---------------------------------------------------------------------------
# run configuration


COMMANDS = ("colorings", "pair", "alexander", "twisted-pair", "invariant", "oracle-check")


@dataclass
class RunConfig:
    command: str
    knot: str | None = None
    pd: str | None = None
    rep: str | None = None
    fixture: str | None = None
    psi: str | None = None
    component: int = 1
    format: str = "text"
    seed: int = 0
    options: dict = field(default_factory=dict)

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.knot and self.pd:
            raise ConfigError("give at most one of knot and pd")
        if not (self.rep or self.fixture):
            raise ConfigError("need a representation: --rep FILE or --fixture NAME")
        if self.rep and self.fixture:
            raise ConfigError("give at most one of rep and fixture")
        if self.format not in ("text", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.component < 1:
            raise ConfigError("component numbers start at 1")
        return self

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        _reject_unknown(data, {f.name for f in fields(cls)}, "run config")
        return cls(**data).validate()


def parse_psi(text: str | None) -> BilinearFormSpec | None:
    """``hermitian_dot``, ``det2``, ``trace_form`` or a JSON object for a custom matrix."""
    if text is None:
        return None
    text = text.strip()
    if text.startswith("{"):
        try:
            return BilinearFormSpec.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad form spec: {exc}") from exc
    return BilinearFormSpec(text)
