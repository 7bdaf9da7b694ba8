"""Effective tolerances for the command-line pipelines.

A config file holds ``key = value`` lines (``#`` comments allowed); CLI flags
override file values.  Every report echoes the effective values so that it
can be reproduced exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import SymbolParseError

_INT_KEYS = ("max_terms", "grid_depth")
_FLOAT_KEYS = ("epsilon", "series_tol", "quadrature_tol")


@dataclass(frozen=True)
class ToleranceConfig:
    epsilon: float = 1e-8
    series_tol: float = 1e-10
    quadrature_tol: float = 1e-8
    max_terms: int = 50_000_000
    grid_depth: int = 40

    def as_dict(self):
        return {
            "epsilon": self.epsilon,
            "series_tol": self.series_tol,
            "quadrature_tol": self.quadrature_tol,
            "max_terms": self.max_terms,
            "grid_depth": self.grid_depth,
        }

    def validate(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError("epsilon must be a positive finite number")
        if not (0 < self.series_tol < 1):
            raise ValueError("series_tol must lie in (0, 1)")
        if not (0 < self.quadrature_tol < 1):
            raise ValueError("quadrature_tol must lie in (0, 1)")
        if self.max_terms < 1024:
            raise ValueError("max_terms must be at least 1024")
        if not 4 <= self.grid_depth <= 48:
            raise ValueError("grid_depth must lie in [4, 48]")
        return self


def load_config(path):
    """Parse a ``key = value`` config file into a :class:`ToleranceConfig`."""
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SymbolParseError(f"config line is not 'key = value': {line!r}", lineno, 1)
            key, _, text = line.partition("=")
            key = key.strip()
            text = text.strip()
            try:
                if key in _INT_KEYS:
                    values[key] = int(text)
                elif key in _FLOAT_KEYS:
                    values[key] = float(text)
                else:
                    raise SymbolParseError(f"unknown config key {key!r}", lineno, 1)
            except ValueError as exc:
                raise SymbolParseError(
                    f"bad value for config key {key!r}: {text!r}", lineno, 1
                ) from exc
    return replace(ToleranceConfig(), **values).validate()
