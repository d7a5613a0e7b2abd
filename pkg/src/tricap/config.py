"""Scenario configuration files.

The format is line-oriented ``key = value`` with ``[section]`` headers, read
with :mod:`configparser` in strict mode.  Every key is declared in
:data:`SCHEMA`; anything else is rejected with its line number.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field

from .errors import InvalidParameter, ParseError, UnknownKey
from .material import MaterialParams, validate
from .solid import SolidParams, validate_solid

SCENARIOS = ("spinodal", "interface1d", "lens", "sessile_drop", "stokes_decay",
             "solid_vibration", "solid_traction")
WALL_SIDES = ("left", "right", "bottom", "top")


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _triple(text):
    vals = [float(v) for v in re.split(r"[,\s]+", text.strip()) if v]
    if len(vals) != 3:
        raise ValueError(f"expected three numbers, got {text!r}")
    return tuple(vals)


def _pair(text):
    vals = [float(v) for v in re.split(r"[,\s]+", text.strip()) if v]
    if len(vals) != 2:
        raise ValueError(f"expected two numbers, got {text!r}")
    return tuple(vals)


def _dt(text):
    return None if text.strip().lower() == "auto" else float(text)


def _opt_int(text):
    return None if text.strip().lower() in ("", "none") else int(text)


def _opt_float(text):
    return None if text.strip().lower() in ("", "none") else float(text)


# section -> key -> (parser, default, help).  A default of None means
# "scenario dependent" (see scenarios.DEFAULTS).
SCHEMA = {
    "scenario": {
        "name": (str, None, "one of " + ", ".join(SCENARIOS)),
        "seed": (int, 0, "random seed for initial noise"),
    },
    "grid": {
        "nx": (int, None, "cells (fluid) or elements (solid) along x"),
        "ny": (int, None, "cells or elements along y"),
        "lx": (float, None, "domain length along x"),
        "ly": (float, None, "domain length along y"),
        "x_bc": (str, None, "periodic | wall"),
        "y_bc": (str, None, "periodic | wall"),
    },
    "time": {
        "dt": (_dt, None, "time step, or 'auto' for half the strictest stability bound"),
        "end_time": (_opt_float, None, "final time"),
        "steps": (_opt_int, None, "number of steps; overrides end_time"),
    },
    "material": {
        "gamma12": (float, 1.0, "surface tension between phases 1 and 2"),
        "gamma13": (float, 1.0, "surface tension between phases 1 and 3"),
        "gamma23": (float, 1.0, "surface tension between phases 2 and 3"),
        "epsilon": (float, None, "interface thickness"),
        "mobility": (float, None, "Cahn-Hilliard mobility M"),
        "rho": (float, 1.0, "fluid density"),
        "eta": (float, None, "dynamic viscosity"),
    },
    "walls": {
        **{side: (_triple, None, f"wall energies gamma_s1, gamma_s2, gamma_s3 on the {side} wall")
           for side in WALL_SIDES},
        "gauge": (_bool, True, "shift wall energies so the phase 1|2 pair is consistent"),
    },
    "flow": {
        "enabled": (_bool, None, "solve the Navier-Stokes equations"),
        "poisson": (str, "spectral", "spectral | cg"),
    },
    "monitor": {
        "energy_tol": (float, 1e-10, "allowed relative energy increase per step"),
        "sum_tol": (float, 1e-10, "allowed |1 - sum c_i|"),
        "check_energy": (_bool, True, "stop when the energy increases"),
    },
    "output": {
        "dir": (str, "out", "output directory"),
        "cadence": (int, None, "snapshot every this many steps"),
    },
    "init": {
        "amplitude": (float, None, "noise amplitude (spinodal) or velocity amplitude"),
        "binary": (_bool, False, "spinodal: start with c3 = 0"),
        "radius": (float, None, "lens or drop radius"),
        "center": (_pair, None, "lens or drop centre"),
        "level": (float, None, "lens: height of the 2|3 interface"),
    },
    "solid": {
        "mu": (float, 1.0, "shear modulus"),
        "lam": (float, 1.0, "first Lame parameter"),
        "rho0": (float, 1.0, "referential density"),
        "traction": (_pair, None, "traction on the right side at full load"),
        "ramp": (float, None, "traction ramp time"),
    },
}


@dataclass
class ScenarioConfig:
    scenario: str
    seed: int = 0
    values: dict = field(default_factory=dict)  # (section, key) -> explicitly set value

    def get(self, section, key):
        if (section, key) in self.values:
            return self.values[(section, key)]
        from .scenarios import DEFAULTS
        dflt = DEFAULTS.get(self.scenario, {})
        if (section, key) in dflt:
            return dflt[(section, key)]
        return SCHEMA[section][key][1]

    def section(self, name):
        return {k: self.get(name, k) for k in SCHEMA[name]}

    def material(self) -> MaterialParams:
        m = self.section("material")
        return validate(MaterialParams(m["gamma12"], m["gamma13"], m["gamma23"],
                                       epsilon=m["epsilon"], mobility=m["mobility"],
                                       rho=m["rho"], eta=m["eta"]))

    def solid(self) -> SolidParams:
        s = self.section("solid")
        return validate_solid(SolidParams(s["mu"], s["lam"], s["rho0"]))

    @property
    def is_solid(self) -> bool:
        return self.scenario.startswith("solid_")


def _line_numbers(text):
    """Map ``(section, key)`` to the line on which the key appears."""
    out, section = {}, None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        m = re.match(r"\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip()
            out.setdefault((section, None), n)
            continue
        key = re.split(r"[=:]", line, maxsplit=1)[0].strip().lower()
        out.setdefault((section, key), n)
    return out


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a configuration text."""
    cp = configparser.ConfigParser(strict=True, interpolation=None,
                                   inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.DuplicateOptionError as exc:
        raise ParseError(f"duplicate key {exc.option!r} in [{exc.section}]",
                         line=exc.lineno, key=exc.option) from None
    except configparser.DuplicateSectionError as exc:
        raise ParseError(f"duplicate section [{exc.section}]", line=exc.lineno) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ParseError("key outside of any [section]", line=exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ParseError("malformed line", line=lineno) from None
    lines = _line_numbers(text)
    values = {}
    for section in cp.sections():
        if section not in SCHEMA:
            raise UnknownKey(f"unknown section [{section}]", line=lines.get((section, None)),
                             key=section)
        for key, raw in cp.items(section):
            line = lines.get((section, key))
            if key not in SCHEMA[section]:
                raise UnknownKey(f"unknown key {key!r} in [{section}]", line=line, key=key)
            try:
                values[(section, key)] = SCHEMA[section][key][0](raw)
            except ValueError as exc:
                raise ParseError(f"bad value for {key!r}: {exc}", line=line, key=key) from None
    name = values.pop(("scenario", "name"), None)
    if name is None:
        raise ParseError("missing [scenario] name", key="name")
    if name not in SCENARIOS:
        raise InvalidParameter("scenario", f"unknown scenario {name!r}")
    cfg = ScenarioConfig(name, values.pop(("scenario", "seed"), 0), values)
    check(cfg)
    return cfg


def check(cfg: ScenarioConfig) -> ScenarioConfig:
    """Semantic checks that do not need to build any state."""
    end, steps = cfg.get("time", "end_time"), cfg.get("time", "steps")
    if steps is not None and steps < 1:
        raise InvalidParameter("steps", f"steps must be at least 1, got {steps}")
    if steps is None and not (end is not None and math.isfinite(end) and end > 0):
        raise InvalidParameter("end_time", f"end time must be positive, got {end!r}")
    if cfg.get("output", "cadence") < 1:
        raise InvalidParameter("cadence", "snapshot cadence must be at least 1")
    dt = cfg.get("time", "dt")
    if dt is not None and not (math.isfinite(dt) and dt > 0):
        raise InvalidParameter("dt", f"time step must be positive, got {dt!r}")
    for key in ("nx", "ny"):
        if cfg.get("grid", key) < 1:
            raise InvalidParameter(key, f"{key} must be positive")
    if cfg.is_solid:
        cfg.solid()
    else:
        for key in ("x_bc", "y_bc"):
            if cfg.get("grid", key) not in ("periodic", "wall"):
                raise InvalidParameter(key, f"{key} must be 'periodic' or 'wall'")
        if cfg.get("flow", "poisson") not in ("spectral", "cg"):
            raise InvalidParameter("poisson", "poisson must be 'spectral' or 'cg'")
        cfg.material()
    return cfg


def load_config(path) -> ScenarioConfig:
    from .errors import IoFailure
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return parse_config(text)


def describe_defaults() -> str:
    """Human-readable key list for ``--help``."""
    out = []
    for section, keys in SCHEMA.items():
        out.append(f"[{section}]")
        for key, (_, dflt, text) in keys.items():
            shown = "scenario default" if dflt is None else dflt
            out.append(f"  {key} = {shown}    {text}")
    return "\n".join(out)
