"""Argument checks shared by the public entry points."""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2 * math.pi
PURE_TOL = 1e-9


def check_angle(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or not 0.0 <= value <= TWO_PI:
        raise ValueError(f"{name} must lie in [0, 2*pi], got {value!r}")
    return value


def check_steps(t: int, *, minimum: int = 0, maximum: int = 10_000) -> int:
    if isinstance(t, bool) or int(t) != t:
        raise ValueError(f"step count must be an integer, got {t!r}")
    t = int(t)
    if not minimum <= t <= maximum:
        raise ValueError(f"step count must lie in [{minimum}, {maximum}], got {t}")
    return t


def check_bloch(r, *, pure: bool = False) -> np.ndarray:
    """Validate a coin Bloch vector; ``pure`` demands unit length."""
    r = np.asarray(r, dtype=np.float64).reshape(-1)
    if r.shape != (3,) or not np.all(np.isfinite(r)):
        raise ValueError(f"Bloch vector must have three finite components, got {r!r}")
    norm = float(np.linalg.norm(r))
    if pure and abs(norm - 1.0) > PURE_TOL:
        raise ValueError(f"a pure coin state needs |r| = 1, got |r| = {norm:.12g}")
    if norm > 1.0 + PURE_TOL:
        raise ValueError(f"Bloch vector length {norm:.12g} exceeds 1")
    return r
