"""Flat ``key = value`` run configuration.

Blank lines and ``#`` comments are ignored.  Every key is optional; missing
keys take the prototype's operating point and component values.  Example::

    # Pattern II at half modulation
    scheme = pattern2
    m = 0.5
    f_sw = 18000
"""

from __future__ import annotations

import math

from .exceptions import ConfigError, TPTSError
from .modulator import Scheme
from .refgen import GridConfig
from .simulator import CircuitParams, SimConfig


def _positive(v):
    return v > 0.0 and math.isfinite(v)


def _non_negative(v):
    return v >= 0.0 and math.isfinite(v)


def _finite(v):
    return math.isfinite(v)


def _unit_interval(v):
    return 0.0 <= v <= 1.0


def _scheme(text):
    return Scheme.coerce(text).value


# key -> (target, converter, validity check, description of the valid range)
SCHEMA = {
    "v_line_line_peak": ("grid", float, _positive, "> 0"),
    "f_grid": ("grid", float, _positive, "> 0"),
    "phase_offset": ("grid", float, _finite, "finite"),
    "l_in": ("circuit", float, _positive, "> 0"),
    "r_l_in": ("circuit", float, _positive, "> 0"),
    "c_in": ("circuit", float, _positive, "> 0"),
    "l_out": ("circuit", float, _positive, "> 0"),
    "c_out": ("circuit", float, _positive, "> 0"),
    "r_damp": ("circuit", float, _non_negative, ">= 0"),
    "f_sw": ("sim", float, _positive, "> 0"),
    "m": ("sim", float, _unit_interval, "in [0, 1]"),
    "load_current": ("sim", float, _positive, "> 0"),
    "duration": ("sim", float, _positive, "> 0"),
    "steps_per_period": ("sim", int, lambda v: v >= 20, ">= 20"),
    "scheme": ("sim", _scheme, lambda v: True, "pattern1, pattern2 or svm"),
    "displacement": ("sim", float, _finite, "finite"),
    "sample_every": ("sim", int, lambda v: v >= 1, ">= 1"),
    "edge_mode": ("sim", str, lambda v: v in ("exact", "snap"), "exact or snap"),
    "load_min_voltage": ("sim", float, _positive, "> 0"),
}


def _convert(key, raw, line):
    if key not in SCHEMA:
        raise ConfigError("unknown configuration key", key=key, line=line)
    _, conv, ok, valid = SCHEMA[key]
    raw = raw.strip().strip('"').strip("'")
    try:
        if conv is int:
            as_float = float(raw)
            if as_float != int(as_float):
                raise ValueError(raw)
            value = int(as_float)
        else:
            value = conv(raw)
    except ValueError:
        kind = "numeric" if conv in (int, float) else "valid"
        raise ConfigError(f"non-{kind} value {raw!r}", key=key, line=line) from None
    if not ok(value):
        prefix = "overmodulation: " if key == "m" else ""
        raise ConfigError(f"{prefix}value {value!r} out of range ({valid})", key=key, line=line)
    return value


def parse_pairs(text):
    """``(key, raw value, line number)`` triples from a configuration document."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", line=lineno)
        key, raw = body.split("=", 1)
        out.append((key.strip(), raw, lineno))
    return out


def parse_config(text="", overrides=()):
    """Build a :class:`SimConfig` from a document and ``key=value`` overrides.

    Raises
    ------
    ConfigError
        Naming the offending key and line for unknown keys, non-numeric
        values and out-of-range values.
    """
    values = {}
    for key, raw, line in parse_pairs(text):
        values[key] = _convert(key, raw, line)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, raw = item.split("=", 1)
        values[key.strip()] = _convert(key.strip(), raw, None)
    groups = {"grid": {}, "circuit": {}, "sim": {}}
    for key, value in values.items():
        groups[SCHEMA[key][0]][key] = value
    try:
        return SimConfig(
            grid=GridConfig(**groups["grid"]),
            circuit=CircuitParams(**groups["circuit"]),
            **groups["sim"],
        )
    except (TPTSError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def config_to_text(cfg):
    """Render ``cfg`` back into the document format."""
    lines = []
    for key, (target, _, _, _) in SCHEMA.items():
        owner = {"grid": cfg.grid, "circuit": cfg.circuit, "sim": cfg}[target]
        value = getattr(owner, key)
        lines.append(f"{key} = {value!r}" if not isinstance(value, str) else f"{key} = {value}")
    return "\n".join(lines) + "\n"
