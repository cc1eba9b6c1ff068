"""Run configuration: JSON ingestion, validation, presets and overrides."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .atom import AtomParams
from .cavity import CavityParams
from .errors import ParseError, ValidationError
from .spectra import ScanGrid
from .susceptibility import SusceptibilityModel

__all__ = ["OutputOptions", "RunConfig", "PRESETS", "load_config", "build_config", "apply_override"]

FORMATS = ("csv", "json")


@dataclass(frozen=True)
class OutputOptions:
    format: str = "csv"
    path: str | None = None
    plot_path: str | None = None
    normalize_peak: bool = False

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValidationError("output.format", "one of csv, json")
        for name in ("path", "plot_path"):
            value = getattr(self, name)
            if value is not None and not isinstance(value, str):
                raise ValidationError(f"output.{name}", "string or null")
        if not isinstance(self.normalize_peak, bool):
            raise ValidationError("output.normalize_peak", "must be a boolean")


@dataclass(frozen=True)
class RunConfig:
    atom: AtomParams = field(default_factory=AtomParams)
    model: SusceptibilityModel = field(default_factory=SusceptibilityModel)
    cavity: CavityParams = field(default_factory=CavityParams)
    scan: ScanGrid = field(default_factory=ScanGrid)
    output: OutputOptions = field(default_factory=OutputOptions)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


SECTIONS = {
    "atom": AtomParams,
    "model": SusceptibilityModel,
    "cavity": CavityParams,
    "scan": ScanGrid,
    "output": OutputOptions,
}


def _co_resonant_cavity(w1: float, w2: float, k_ratio: float = 1.364) -> dict:
    """Cavity whose adjacent longitudinal modes sit on both windows ``w1 < w2``."""
    beta = 2 * math.pi / (w2 - w1)
    return {"beta": beta, "theta0": (-beta * w1) % (2 * math.pi), "xi": k_ratio * beta, "k_ratio": k_ratio}


_FIG_ATOMS = {
    "a": {"omega1": 2.0, "omega2": 0.3, "delta1": -1.0, "delta2": 1.0},
    "b": {"omega1": 2.0, "omega2": 0.3, "delta1": -1.0, "delta2": 3.0},
    "c": {"omega1": 2.0, "omega2": 2.0, "delta1": -1.0, "delta2": 1.0},
    "d": {"omega1": 2.0, "omega2": 0.0, "delta1": 0.0, "delta2": 0.0},
}

PRESETS: dict[str, dict] = {}
for _key, _atom in _FIG_ATOMS.items():
    PRESETS[f"fig2{_key}"] = {"atom": dict(_atom)}
    if _atom["omega2"] > 0:
        PRESETS[f"fig4{_key}"] = {
            "atom": dict(_atom),
            "cavity": _co_resonant_cavity(_atom["delta1"], _atom["delta2"]),
            "scan": {"refine_step": 5e-5},
        }
    else:
        PRESETS[f"fig4{_key}"] = {"atom": dict(_atom)}


def _merge(base: dict, update: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _coerce(section: str, name: str, value, annotation):
    path = f"{section}.{name}"
    if annotation in ("float",):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(path, "must be a number")
        return float(value)
    if annotation == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(path, "must be an integer")
        return value
    if annotation == "bool":
        if not isinstance(value, bool):
            raise ValidationError(path, "must be true or false")
        return value
    return value


def _build_section(section: str, data) -> object:
    cls = SECTIONS[section]
    if not isinstance(data, dict):
        raise ValidationError(section, "must be an object")
    known = {f.name: f for f in fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            raise ValidationError(f"{section}.{key}", "unknown key")
        kwargs[key] = _coerce(section, key, value, known[key].type)
    return cls(**kwargs)


def build_config(data: dict) -> RunConfig:
    """Validate a nested mapping and fill defaults for missing keys."""
    if not isinstance(data, dict):
        raise ValidationError("<root>", "must be an object")
    for key in data:
        if key not in SECTIONS:
            raise ValidationError(key, "unknown key")
    return RunConfig(**{name: _build_section(name, data.get(name, {})) for name in SECTIONS})


def _parse_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def apply_override(data: dict, assignment: str) -> dict:
    """Apply one ``section.key=value`` override; the value is read as JSON if possible."""
    path, sep, raw = assignment.partition("=")
    parts = path.strip().split(".")
    if not sep or len(parts) != 2 or not all(parts):
        raise ValidationError(path or assignment, "override must look like section.key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return _merge(data, {parts[0]: {parts[1]: value}})


def load_config(
    source: str | Path | None = None,
    preset: str | None = None,
    overrides: list[str] = (),
) -> RunConfig:
    """Build a :class:`RunConfig` from defaults, a preset, a JSON document and overrides.

    Later layers win: defaults < preset < document < overrides.  ``source`` is
    a path to a JSON file or, when it starts with ``{`` or ``[``, the JSON text itself.
    """
    data: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ValidationError("preset", f"one of {', '.join(sorted(PRESETS))}")
        data = _merge(data, PRESETS[preset])
    if source is not None:
        text = str(source)
        if not text.lstrip().startswith(("{", "[")):
            text = Path(source).read_text(encoding="utf-8")
        document = _parse_json(text)
        if not isinstance(document, dict):
            raise ValidationError("<root>", "must be an object")
        data = _merge(data, document)
    for assignment in overrides:
        data = apply_override(data, assignment)
    return build_config(data)
