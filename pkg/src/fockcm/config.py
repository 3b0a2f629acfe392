"""Flat ``key = value`` configuration files.

One assignment per line, ``#`` starts a comment, keys are the field names of
`ExperimentConfig`.  Complex numbers are written ``re,im``; ``auto`` leaves
``n_max`` and ``final_rabi_frequency`` to be derived, ``off`` disables the tail
guard.  Unknown keys are rejected.
"""

from __future__ import annotations

import enum
from dataclasses import fields, replace
from typing import Iterable

from .errors import ParseError, ValidationError
from .experiment import FIELD_NAMES, ExperimentConfig

_FLOATS = {"g", "tau_mean", "spread", "length_ratio", "final_phase", "initial_pulse_area", "initial_phase", "null_epsilon"}
_INTS = {"n_target", "n_atoms", "seed"}
_ENUMS = {"scheme", "distribution", "selection", "correlation"}
_OPTIONAL = {"final_rabi_frequency": "auto", "n_max": "auto", "tail_threshold": "off"}


def _parse_value(key: str, raw: str):
    if key in _OPTIONAL:
        if raw.lower() == _OPTIONAL[key]:
            return None
        return int(raw) if key == "n_max" else float(raw)
    if key in _FLOATS:
        return float(raw)
    if key in _INTS:
        return int(raw)
    if key == "alpha_init":
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
        raise ValueError("expected 're,im'")
    if key in _ENUMS:
        return raw
    raise AssertionError(key)


def _assignments(lines: Iterable[str], source: str | None):
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ParseError("expected 'key = value'", lineno, source)
        key, raw = (part.strip() for part in text.split("=", 1))
        if key not in FIELD_NAMES:
            raise ParseError(f"unknown key {key!r}", lineno, source)
        if not raw:
            raise ParseError(f"missing value for {key!r}", lineno, source)
        try:
            value = _parse_value(key, raw)
        except ValueError as exc:
            raise ParseError(f"bad value for {key!r}: {raw!r} ({exc})", lineno, source) from None
        yield lineno, key, value


def _build(base: ExperimentConfig, values: dict) -> ExperimentConfig:
    try:
        return replace(base, **values)
    except ValidationError:
        raise
    except (TypeError, ValueError) as exc:
        raise ValidationError(str(exc)) from None


def parse_config(text: str, base: ExperimentConfig | None = None, source: str | None = None) -> ExperimentConfig:
    """Parse configuration text on top of ``base`` (library defaults if omitted).

    Raises:
        ParseError: malformed line, unknown or duplicated key, unreadable value.
        ValidationError: a value violates an invariant of the configuration.
    """
    values: dict = {}
    for lineno, key, value in _assignments(text.splitlines(), source):
        if key in values:
            raise ParseError(f"duplicate key {key!r}", lineno, source)
        values[key] = value
    return _build(base or ExperimentConfig(), values)


def apply_overrides(config: ExperimentConfig, overrides: Iterable[str]) -> ExperimentConfig:
    """Apply ``key=value`` strings (as given to ``--set``) in order."""
    values: dict = {}
    for lineno, key, value in _assignments(overrides, "--set"):
        values[key] = value
    return _build(config, values)


def _format_value(value) -> str:
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, complex):
        return f"{value.real!r},{value.imag!r}"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(config: ExperimentConfig, header: str | None = None) -> str:
    """Serialize a configuration so that `parse_config` reproduces it exactly."""
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    for f in fields(ExperimentConfig):
        value = getattr(config, f.name)
        if value is None:
            text = _OPTIONAL[f.name]
        else:
            text = _format_value(value)
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"
