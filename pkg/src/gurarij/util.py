"""Shared tolerances, report types, and small numeric helpers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

# Certification tolerance for LP optimality (relative).
CERT_TOL = 1e-9
# Tolerance for derived identities checked by property tests.
PROP_TOL = 1e-8
# Canonicality tolerance for envelope generators.
CANON_TOL = 1e-9
# Geometric predicates (vertex enumeration, redundancy pruning).
GEOM_TOL = 1e-9


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    data: dict[str, Any] = field(default_factory=dict)


@dataclass
class Report:
    """Outcome of a validation pass: empty violation list means success."""

    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, message: str, **data: Any) -> None:
        self.violations.append(Violation(kind, message, dict(data)))

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"kind": v.kind, "message": v.message, "data": v.data}
                for v in self.violations
            ],
        }


def as_vector(v, dim: int | None = None) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector has non-finite entries")
    if dim is not None and a.shape[0] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {a.shape[0]}")
    return a


class DimensionMismatch(ValueError):
    pass


class SpaceMismatch(ValueError):
    pass


def round_sig(x: float, digits: int = 12) -> float:
    """Round to `digits` significant decimal digits (report output only)."""
    if x == 0 or not np.isfinite(x):
        return float(x)
    return float(f"{x:.{digits}g}")


def json_roundable(obj):
    """Recursively round floats in a JSON-ready structure to 12 significant digits."""
    if isinstance(obj, float):
        return round_sig(obj)
    if isinstance(obj, dict):
        return {k: json_roundable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_roundable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [json_roundable(float(v)) for v in obj.ravel()]
    if isinstance(obj, (np.floating,)):
        return round_sig(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def sphere_net(dim: int, size: int, norm_fn, key: int = 0) -> np.ndarray:
    """Deterministic net of `size` directions normalized to norm 1.

    The net is reproducible for a fixed (dim, size, key); `norm_fn` maps an
    array of row vectors to their norms.
    """
    rng = np.random.default_rng([20240801, dim, size, key])
    pts = rng.standard_normal((size, dim))
    # include +-coordinate directions so degenerate maps are always caught
    eye = np.eye(dim)
    pts = np.vstack([eye, -eye, pts])[: max(size, 2 * dim)]
    out = []
    for p in pts:
        n = norm_fn(p)
        if n > 1e-12:
            out.append(p / n)
    return np.array(out)
