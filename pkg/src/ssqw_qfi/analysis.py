"""Comparisons between the split-step walk and the ordinary walk.

Unless stated otherwise, everything uses the closed-form Fisher coefficients
with ``r2 = 0``, the state choice that maximizes both diagonal entries.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import quad
from scipy.optimize import bisect, minimize_scalar

from ._validation import TWO_PI, check_angle
from .errors import BoundaryRegionError
from .qfim import (
    QfimResult,
    asymptotic_qfim,
    closed_form_fisher,
    closed_form_qfim,
    finite_time_qfim,
    oqw_fisher,
)
from .walk import WalkSpec, oracle_qfim

__all__ = [
    "QUANTITIES",
    "METHODS",
    "ScanGrid",
    "avg_fisher_ssqw",
    "avg_fisher_oqw",
    "precision_ratio",
    "optimal_theta2",
    "omega_ssqw",
    "omega_min_ssqw",
    "omega_oqw",
    "golden_root",
    "crossing_eta",
    "advantage_surface",
    "scan",
]

QUANTITIES = ("f11", "f22", "f12", "omega", "advantage", "incompat")
METHODS = ("closed", "asymptotic", "finite", "oracle")
MAX_CELLS = 10_000_000


@dataclass(frozen=True)
class ScanGrid:
    """Rectangular ``(theta1, theta2)`` grid; both ends of each range included."""

    theta1: tuple[float, float, int] = (0.0, TWO_PI, 101)
    theta2: tuple[float, float, int] = (0.0, TWO_PI, 101)
    quantity: str = "f11"
    r2: float = 0.0

    def __post_init__(self):
        for name in ("theta1", "theta2"):
            a, b, n = getattr(self, name)
            a = check_angle(f"{name} start", a)
            b = check_angle(f"{name} end", b)
            if int(n) != n or n < 2:
                raise ValueError(f"{name} count must be an integer >= 2, got {n!r}")
            object.__setattr__(self, name, (a, b, int(n)))
        if self.theta1[2] * self.theta2[2] > MAX_CELLS:
            raise ValueError(f"grid exceeds {MAX_CELLS} cells")
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}; choose from {QUANTITIES}")
        if not abs(self.r2) <= 1.0:
            raise ValueError(f"|r2| must not exceed 1, got {self.r2!r}")

    def axes(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        return np.linspace(*self.theta1), np.linspace(*self.theta2)

    def mesh(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Flattened coordinates in theta1-major order."""
        a, b = self.axes()
        t1, t2 = np.meshgrid(a, b, indexing="ij")
        return t1.ravel(), t2.ravel()


def avg_fisher_ssqw(theta2: float, mode: str = "closed", r2: float = 0.0) -> float:
    """Average of ``F11`` over ``theta1`` in ``[0, 2 pi]`` at fixed ``theta2``.

    ``mode="closed"`` returns ``1 - (2/pi) |cos(theta2/2)|`` (valid for
    ``r2 = 0``); ``mode="numeric"`` integrates the piecewise closed-form ``F11``
    adaptively, splitting at the phase boundaries.
    """
    theta2 = check_angle("theta2", theta2)
    if mode == "closed":
        if r2 != 0.0:
            raise ValueError("the closed average holds only for r2 = 0; use mode='numeric'")
        return 1.0 - (2.0 / math.pi) * abs(math.cos(theta2 / 2))
    if mode != "numeric":
        raise ValueError(f"mode must be 'closed' or 'numeric', got {mode!r}")
    breaks = sorted({theta2, TWO_PI - theta2} - {0.0, TWO_PI})
    value, _ = quad(
        lambda x: float(closed_form_fisher(x, theta2, r2)[0, 0]),
        0.0,
        TWO_PI,
        points=breaks or None,
        limit=200,
        epsabs=1e-13,
        epsrel=1e-13,
    )
    return value / TWO_PI


def avg_fisher_oqw() -> float:
    """Average of ``s/(1+s)`` over ``theta`` in ``[0, 2 pi]``, i.e. ``1 - 2/pi``."""
    return 1.0 - 2.0 / math.pi


def optimal_theta2() -> float:
    """``theta2`` maximizing the closed-form average ``F11`` (it is pi)."""
    res = minimize_scalar(
        lambda x: -avg_fisher_ssqw(x), bounds=(0.0, TWO_PI), method="bounded",
        options={"xatol": 1e-10},
    )
    return float(res.x)


def precision_ratio() -> float:
    """Best ratio of the split-step average ``F11`` to the ordinary-walk average."""
    return avg_fisher_ssqw(optimal_theta2()) / avg_fisher_oqw()


def omega_ssqw(theta1: ArrayLike, theta2: ArrayLike, r2: float = 0.0) -> NDArray[np.float64]:
    """Precision product ``F11 * F22`` of the split-step walk."""
    f = closed_form_fisher(theta1, theta2, r2)
    return f[..., 0, 0] * f[..., 1, 1]


def omega_min_ssqw(theta1: ArrayLike) -> NDArray[np.float64]:
    """Worst-case product over ``theta2``, reached on the phase boundaries: ``(s/(1+s))^2``."""
    return oqw_fisher(theta1) ** 2


def omega_oqw(theta1: ArrayLike) -> NDArray[np.float64]:
    """Precision product ``s (1 - s) / (1 + s)`` of the ordinary walk."""
    s = np.sin(np.asarray(theta1, dtype=np.float64) / 2)
    return s * (1 - s) / (1 + s)


def golden_root(xtol: float = 1e-13) -> float:
    """Positive ``s`` where the worst split-step product meets the ordinary one.

    Solved by bisection on ``[0.4, 0.8]``; the exact value is ``(sqrt 5 - 1)/2``.
    """
    def gap(s: float) -> float:
        return (s / (1 + s)) ** 2 - s * (1 - s) / (1 + s)

    return float(bisect(gap, 0.4, 0.8, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200))


def crossing_eta() -> float:
    """Angle ``eta = 2 arcsin(s*)`` with ``s*`` from :func:`golden_root` (about 1.3325)."""
    return 2.0 * math.asin(golden_root())


def advantage_surface(grid: ScanGrid) -> NDArray[np.float64]:
    """Rows ``(theta1, theta2, omega_ssqw - omega_oqw)`` in theta1-major order."""
    t1, t2 = grid.mesh()
    diff = omega_ssqw(t1, t2, grid.r2) - omega_oqw(t1)
    return np.column_stack([t1, t2, diff])


def _max_workers() -> int:
    env = os.environ.get("SSQW_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"SSQW_THREADS must be a positive integer, got {env!r}") from None
    return os.cpu_count() or 1


def _point_result(theta1, theta2, method, r, t) -> QfimResult:
    if method == "asymptotic":
        try:
            return asymptotic_qfim(theta1, theta2, r)
        except BoundaryRegionError:
            return closed_form_qfim(theta1, theta2, r[1])
    if method == "finite":
        return finite_time_qfim(theta1, theta2, r, t)
    return oracle_qfim(WalkSpec(theta1, theta2, t, r))


def _value(quantity: str, f: np.ndarray, theta1, res: QfimResult | None = None) -> float:
    if quantity == "f11":
        return float(f[0, 0])
    if quantity == "f22":
        return float(f[1, 1])
    if quantity == "f12":
        return float(f[0, 1])
    omega = float(f[0, 0] * f[1, 1])
    if quantity == "omega":
        return omega
    if quantity == "advantage":
        return omega - float(omega_oqw(theta1))
    assert res is not None
    return math.nan if res.incompatibility is None else res.incompatibility


def scan(
    grid: ScanGrid,
    method: str = "closed",
    *,
    t: int | None = None,
    r: ArrayLike | None = None,
    max_workers: int | None = None,
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """Evaluate ``grid.quantity`` on every cell.

    Fisher-derived quantities are ``t^2`` coefficients for every method (the
    finite-time and oracle values are divided by ``t^2``). ``incompat`` needs
    the Uhlmann curvature and so the ``finite`` or ``oracle`` method. Asymptotic
    scans use the closed-form limit on boundary cells. ``r``
    defaults to ``(0, r2, sqrt(1 - r2^2))``.

    Returns
    -------
    theta1, theta2, value : ndarray
        Flattened, theta1-major.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    t1, t2 = grid.mesh()
    q = grid.quantity
    if method == "closed":
        if q == "incompat":
            raise ValueError("incompat needs the finite or oracle method")
        f = closed_form_fisher(t1, t2, grid.r2)
        values = {
            "f11": f[:, 0, 0],
            "f22": f[:, 1, 1],
            "f12": f[:, 0, 1],
            "omega": f[:, 0, 0] * f[:, 1, 1],
            "advantage": f[:, 0, 0] * f[:, 1, 1] - omega_oqw(t1),
        }[q]
        return t1, t2, np.asarray(values, dtype=np.float64)

    if method in ("finite", "oracle") and t is None:
        raise ValueError(f"method {method!r} needs a step count t")
    if q == "incompat" and method == "asymptotic":
        raise ValueError("incompat needs the finite or oracle method")
    if r is None:
        r = (0.0, grid.r2, math.sqrt(max(0.0, 1.0 - grid.r2**2)))
    scale = 1.0 if method == "asymptotic" else float(t) ** 2

    def cell(i: int) -> float:
        res = _point_result(float(t1[i]), float(t2[i]), method, r, t)
        return _value(q, np.asarray(res.fisher) / scale, t1[i], res)

    workers = max_workers or _max_workers()
    if workers == 1:
        values = [cell(i) for i in range(len(t1))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(cell, range(len(t1))))
    return t1, t2, np.asarray(values, dtype=np.float64)

