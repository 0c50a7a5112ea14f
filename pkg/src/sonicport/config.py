"""Run configuration: a strict TOML dialect.

Example::

    units = "natural"          # or "SI"
    omega = 0.110318
    alpha = 0.5                # or: temperature = ..., or a [profile] table
    target = [1.0, 0.0]        # coherent amplitude (re, im); a bare number is real
    cutoff = "auto"            # or an integer
    epsilon = 1e-12
    output = "csv"             # or "json"
    seed = 0
    k = 0                      # number-difference outcome d = +-2k (k may be a half-integer)
    sign = "+"

    [profile]
    kind = "linear"            # linear | powerlaw | tabulated
    c = 1.0
    R = 2.0
    alpha = 0.5

    [sweep]
    over = "alpha"             # alpha | temperature
    start = 0.1
    stop = 2.0
    num = 20
    spacing = "linear"         # linear | log

Unknown keys are errors.  :func:`emit_config` writes the canonical form,
which :func:`parse_config` reads back to an equal :class:`RunConfig`.
"""

import re
import sys
from dataclasses import dataclass, fields

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ParseError, ValidationError
from .fock import DEFAULT_EPS

TOP_KEYS = {
    "units", "omega", "alpha", "temperature", "target", "cutoff", "epsilon",
    "output", "seed", "k", "sign",
}
PROFILE_KEYS = {"kind", "c", "R", "alpha", "exponent", "rho0", "file", "r_min", "r_max", "num"}
GRID_KEYS = {"over", "start", "stop", "num", "spacing"}
SECTIONS = {"profile": PROFILE_KEYS, "sweep": GRID_KEYS, "spectrum": GRID_KEYS}


@dataclass(frozen=True)
class ProfileConfig:
    kind: str
    c: float = 1.0
    R: float | None = None
    alpha: float | None = None
    exponent: float = 2.0
    rho0: float = 1.0
    file: str | None = None
    r_min: float | None = None
    r_max: float | None = None
    num: int = 2001


@dataclass(frozen=True)
class GridConfig:
    over: str
    start: float
    stop: float
    num: int = 20
    spacing: str = "linear"

    def values(self):
        import numpy as np

        if self.num == 1:
            return np.array([self.start])
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.num)
        return np.linspace(self.start, self.stop, self.num)


@dataclass(frozen=True)
class RunConfig:
    units: str = "natural"
    omega: float | None = None
    alpha: float | None = None
    temperature: float | None = None
    profile: ProfileConfig | None = None
    target: complex | None = None
    cutoff: int | str = "auto"
    epsilon: float = DEFAULT_EPS
    output: str = "csv"
    seed: int = 0
    k: float = 0.0
    sign: str = "+"
    sweep: GridConfig | None = None
    spectrum: GridConfig | None = None


def _line_of(text, section, key):
    current = None
    for i, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[\s*([^\]]+?)\s*\]", s)
        if m:
            current = m.group(1)
            continue
        if current == section and re.match(rf"{re.escape(key)}\s*=", s):
            return i
    return None


def _number(field, value, positive=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(field, f"expected a number, got {value!r}")
    if integer:
        if int(value) != value:
            raise ValidationError(field, f"expected an integer, got {value!r}")
        value = int(value)
    else:
        value = float(value)
    if positive and not value > 0:
        raise ValidationError(field, f"must be positive, got {value!r}")
    return value


def _choice(field, value, options):
    if value not in options:
        raise ValidationError(field, f"expected one of {', '.join(options)}, got {value!r}")
    return value


def _target(value):
    if isinstance(value, list):
        if len(value) != 2:
            raise ValidationError("target", "expected [re, im]")
        return complex(_number("target", value[0]), _number("target", value[1]))
    return complex(_number("target", value), 0.0)


def _profile(d):
    kind = _choice("profile.kind", d.get("kind"), ("linear", "powerlaw", "tabulated"))
    out = {"kind": kind}
    for key in ("c", "R", "alpha", "exponent", "rho0", "r_min", "r_max"):
        if key in d:
            out[key] = _number(f"profile.{key}", d[key], positive=True)
    if "num" in d:
        out["num"] = _number("profile.num", d["num"], positive=True, integer=True)
    if "file" in d:
        if not isinstance(d["file"], str):
            raise ValidationError("profile.file", "expected a path string")
        out["file"] = d["file"]
    required = {"linear": ("R", "alpha"), "powerlaw": ("R",), "tabulated": ("file",)}[kind]
    for key in required:
        if key not in out:
            raise ValidationError(f"profile.{key}", f"required for kind = {kind!r}")
    if kind != "tabulated" and "file" in out:
        raise ValidationError("profile.file", "only valid for kind = 'tabulated'")
    if ("r_min" in out) != ("r_max" in out):
        raise ValidationError("profile.r_min", "r_min and r_max go together")
    if "r_min" in out and not out["r_min"] < out["r_max"]:
        raise ValidationError("profile.r_max", "must exceed r_min")
    return ProfileConfig(**out)


def _grid(name, d, over_options):
    for key in ("start", "stop"):
        if key not in d:
            raise ValidationError(f"{name}.{key}", "required")
    over = _choice(f"{name}.over", d.get("over", over_options[0]), over_options)
    start = _number(f"{name}.start", d["start"], positive=True)
    stop = _number(f"{name}.stop", d["stop"], positive=True)
    num = _number(f"{name}.num", d.get("num", 20), positive=True, integer=True)
    spacing = _choice(f"{name}.spacing", d.get("spacing", "linear"), ("linear", "log"))
    if num > 1 and not start < stop:
        raise ValidationError(f"{name}.stop", "grid bounds must be increasing")
    return GridConfig(over, start, stop, num, spacing)


def parse_config(text):
    """Parse and validate configuration text into a :class:`RunConfig`."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ParseError(str(exc), int(m.group(1)) if m else None) from None

    for key, value in data.items():
        if isinstance(value, dict):
            if key not in SECTIONS:
                raise ParseError(f"unknown section [{key}]", _line_of(text, None, key))
            for sub in value:
                if sub not in SECTIONS[key]:
                    raise ParseError(f"unknown key {sub!r} in [{key}]", _line_of(text, key, sub))
        elif key not in TOP_KEYS:
            raise ParseError(f"unknown key {key!r}", _line_of(text, None, key))

    kw = {}
    if "units" in data:
        kw["units"] = _choice("units", data["units"], ("natural", "SI"))
    for key in ("omega", "alpha", "temperature", "epsilon"):
        if key in data:
            kw[key] = _number(key, data[key], positive=True)
    if "target" in data:
        kw["target"] = _target(data["target"])
    if "cutoff" in data:
        if data["cutoff"] == "auto":
            kw["cutoff"] = "auto"
        else:
            kw["cutoff"] = _number("cutoff", data["cutoff"], positive=True, integer=True)
    if "output" in data:
        kw["output"] = _choice("output", data["output"], ("csv", "json"))
    if "seed" in data:
        kw["seed"] = _number("seed", data["seed"], integer=True)
    if "k" in data:
        k = _number("k", data["k"])
        if k < 0 or (2 * k) != int(2 * k):
            raise ValidationError("k", f"must be a non-negative multiple of 1/2, got {k!r}")
        kw["k"] = k
    if "sign" in data:
        kw["sign"] = _choice("sign", data["sign"], ("+", "-"))
    if "profile" in data:
        kw["profile"] = _profile(data["profile"])
    if "sweep" in data:
        kw["sweep"] = _grid("sweep", data["sweep"], ("alpha", "temperature"))
    if "spectrum" in data:
        kw["spectrum"] = _grid("spectrum", data["spectrum"], ("omega",))

    sources = [name for name in ("profile", "alpha", "temperature") if name in kw]
    if len(sources) > 1:
        raise ValidationError(sources[1], f"conflicts with {sources[0]}; give one surface-gravity source")
    return RunConfig(**kw)


def _fmt(value):
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, complex):
        return f"[{value.real!r}, {value.imag!r}]"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_config(config):
    """Canonical text form of ``config``, defaults included."""
    lines = []
    sections = []
    for f in fields(config):
        value = getattr(config, f.name)
        if value is None:
            continue
        if isinstance(value, (ProfileConfig, GridConfig)):
            sections.append((f.name, value))
        else:
            lines.append(f"{f.name} = {_fmt(value)}")
    for name, sec in sections:
        lines.append("")
        lines.append(f"[{name}]")
        for f in fields(sec):
            value = getattr(sec, f.name)
            if value is not None:
                lines.append(f"{f.name} = {_fmt(value)}")
    return "\n".join(lines) + "\n"


def config_record(config):
    """Plain dict of the resolved configuration, for output metadata."""
    out = {}
    for f in fields(config):
        value = getattr(config, f.name)
        if isinstance(value, (ProfileConfig, GridConfig)):
            value = {g.name: getattr(value, g.name) for g in fields(value)}
        elif isinstance(value, complex):
            value = [value.real, value.imag]
        out[f.name] = value
    return out
