"""Session configuration: a plain key=value file plus flag overrides.

Flags win over the file; the file path comes from --config or the
ROBBA_LAB_CONFIG environment variable.  Only the output is JSON.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction

from .scalars import ParameterError


@dataclass(frozen=True)
class SessionConfig:
    p: int = 2
    h: int = 1
    N: int = 3
    nvars_T: int = 1
    reach: int = 64           # window capacity per variable
    preset: str = "ab"        # ab | berger | plain
    tower: str = "cyclotomic"  # cyclotomic | lubin-tate
    seed: int = 0
    samples: int = 50
    r: Fraction = Fraction(1, 8)
    s: Fraction = Fraction(1, 16)
    J: int = 2
    out: str = ""

    def validated(self) -> "SessionConfig":
        if self.p < 2:
            raise ParameterError("p must be a prime >= 2")
        if self.N < 1 or self.h < 1 or self.J < 1:
            raise ParameterError("N, h, J must be positive")
        if self.preset not in ("ab", "berger", "plain"):
            raise ParameterError(f"unknown preset {self.preset!r}")
        if self.tower not in ("cyclotomic", "lubin-tate"):
            raise ParameterError(f"unknown tower {self.tower!r}")
        if self.r <= 0 or self.s <= 0:
            raise ParameterError("radii must be positive")
        if self.samples < 1:
            raise ParameterError("samples must be positive")
        return self

    def to_json(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = f"{v.numerator}/{v.denominator}" \
                if isinstance(v, Fraction) else v
        return out


_FRACTION_KEYS = {"r", "s"}
_INT_KEYS = {"p", "h", "N", "nvars_T", "reach", "seed", "samples", "J"}


def _coerce(key: str, raw: str):
    raw = raw.strip()
    if key in _FRACTION_KEYS:
        if "/" in raw:
            num, den = raw.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(raw)
    if key in _INT_KEYS:
        return int(raw)
    return raw


def load_config_file(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{line_no}: expected key=value")
            key, raw = line.split("=", 1)
            key = key.strip()
            if key not in {f.name for f in fields(SessionConfig)}:
                raise ParameterError(f"{path}:{line_no}: unknown key {key!r}")
            values[key] = _coerce(key, raw)
    return values


def build_config(flag_values: dict, config_path: str | None = None) -> SessionConfig:
    """File values first, then flags on top (flags win)."""
    path = config_path or os.environ.get("ROBBA_LAB_CONFIG")
    base = SessionConfig()
    if path:
        base = replace(base, **load_config_file(path))
    overrides = {k: v for k, v in flag_values.items() if v is not None}
    for k in _FRACTION_KEYS & set(overrides):
        if isinstance(overrides[k], str):
            overrides[k] = _coerce(k, overrides[k])
    return replace(base, **overrides).validated()
