"""Position-space simulation of the split-step walk.

One step applies coin ``C1``, shift ``S1`` (coin-0 amplitudes move ``x -> x+1``),
coin ``C2`` and shift ``S2`` (coin-1 amplitudes move ``x -> x-1``). With
``theta2 = 0`` the second coin is the identity and the step reduces to an
ordinary one-coin walk.

Nothing here goes through momentum space, so :func:`oracle_qfim` is an
independent check on :mod:`ssqw_qfi.qfim`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ._validation import check_angle, check_bloch, check_steps
from .kspace import classify_region
from .qfim import QfimResult, _maybe_incompat

__all__ = [
    "coin",
    "coin_derivative",
    "coin_state",
    "SpinorField",
    "WalkSpec",
    "ssqw_step",
    "evolve",
    "derivative_state",
    "oracle_qfim",
]


def coin(theta: float) -> NDArray[np.complex128]:
    """Real rotation coin ``[[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def coin_derivative(theta: float) -> NDArray[np.complex128]:
    """Exact ``d coin / d theta``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return 0.5 * np.array([[-s, -c], [c, -s]], dtype=np.complex128)


def coin_state(r: ArrayLike) -> NDArray[np.complex128]:
    """Pure coin state with Bloch vector ``r`` (``|r| = 1``).

    The phase is fixed so that the ``|0>`` amplitude is real and non-negative.
    """
    r = check_bloch(r, pure=True)
    a = np.sqrt(max(0.0, (1.0 + r[2]) / 2.0))
    if a < 1e-12:
        return np.array([0.0, 1.0], dtype=np.complex128)
    return np.array([a, (r[0] + 1j * r[1]) / (2 * a)], dtype=np.complex128)


@dataclass(frozen=True)
class SpinorField:
    """Two-component amplitudes on the contiguous sites ``x_min .. x_min + n - 1``."""

    amplitudes: np.ndarray
    x_min: int

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=np.complex128)
        if amp.ndim != 2 or amp.shape[1] != 2:
            raise ValueError(f"amplitudes must have shape (n, 2), got {amp.shape}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def localized(cls, chi: ArrayLike, x: int = 0) -> "SpinorField":
        return cls(np.asarray(chi, dtype=np.complex128).reshape(1, 2), x)

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(self.x_min, self.x_min + len(self.amplitudes))

    def at(self, x: int) -> NDArray[np.complex128]:
        i = x - self.x_min
        if 0 <= i < len(self.amplitudes):
            return self.amplitudes[i].copy()
        return np.zeros(2, dtype=np.complex128)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def probabilities(self) -> NDArray[np.float64]:
        """Position distribution, summed over the coin."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def inner(self, other: "SpinorField") -> complex:
        """``<self | other>``; both fields must share the same site range."""
        if other.x_min != self.x_min or other.amplitudes.shape != self.amplitudes.shape:
            raise ValueError("fields live on different site ranges")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class WalkSpec:
    """Coin angles, step count and initial coin Bloch vector."""

    theta1: float
    theta2: float
    t: int
    r: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "theta1", check_angle("theta1", self.theta1))
        object.__setattr__(self, "theta2", check_angle("theta2", self.theta2))
        object.__setattr__(self, "t", check_steps(self.t))
        object.__setattr__(self, "r", tuple(float(v) for v in check_bloch(self.r)))

    def initial_field(self) -> SpinorField:
        return SpinorField.localized(coin_state(self.r))


def _step(amp: np.ndarray, c1: np.ndarray, c2: np.ndarray) -> np.ndarray:
    # Pads one site on each side; the result covers x_min - 1 .. x_max + 1.
    n = len(amp)
    out = np.zeros((n + 2, 2), dtype=np.complex128)
    out[1:-1] = amp @ c1.T
    out[1:, 0] = out[:-1, 0].copy()
    out[0, 0] = 0.0
    out = out @ c2.T
    out[:-1, 1] = out[1:, 1].copy()
    out[-1, 1] = 0.0
    return out


def ssqw_step(state: SpinorField, theta1: float, theta2: float) -> SpinorField:
    """Apply one split-step ``S2 C2 S1 C1``; the site range grows by one each side."""
    return SpinorField(_step(state.amplitudes, coin(theta1), coin(theta2)), state.x_min - 1)


def evolve(spec: WalkSpec) -> SpinorField:
    """State after ``spec.t`` steps from the origin-localized coin state."""
    c1, c2 = coin(spec.theta1), coin(spec.theta2)
    amp = spec.initial_field().amplitudes
    for _ in range(spec.t):
        amp = _step(amp, c1, c2)
    return SpinorField(amp, -spec.t)


def _evolve_with_derivatives(spec: WalkSpec):
    c1, c2 = coin(spec.theta1), coin(spec.theta2)
    d1, d2 = coin_derivative(spec.theta1), coin_derivative(spec.theta2)
    psi = spec.initial_field().amplitudes
    dpsi = [np.zeros_like(psi), np.zeros_like(psi)]
    for _ in range(spec.t):
        # d(U psi) = U d psi + (dU) psi, with dU linear in the differentiated coin.
        dpsi = [
            _step(dpsi[0], c1, c2) + _step(psi, d1, c2),
            _step(dpsi[1], c1, c2) + _step(psi, c1, d2),
        ]
        psi = _step(psi, c1, c2)
    return psi, dpsi


def derivative_state(spec: WalkSpec, mu: int) -> SpinorField:
    """Unnormalized ``d Psi(t) / d theta_mu`` built from the exact coin derivative."""
    if mu not in (1, 2):
        raise ValueError(f"mu must be 1 or 2, got {mu!r}")
    _, dpsi = _evolve_with_derivatives(spec)
    return SpinorField(dpsi[mu - 1], -spec.t)


def oracle_qfim(spec: WalkSpec) -> QfimResult:
    """Pure-state Fisher matrix and Uhlmann curvature by direct simulation.

    ``F = 4 Re K`` and ``D = 4 Im K`` with
    ``K_{mu nu} = <d_mu Psi|d_nu Psi> - <d_mu Psi|Psi><Psi|d_nu Psi>``.
    """
    check_bloch(spec.r, pure=True)
    psi, dpsi = _evolve_with_derivatives(spec)
    overlaps = np.array([np.vdot(psi, d) for d in dpsi])  # <Psi|d_nu Psi>
    kernel = np.array(
        [[np.vdot(dm, dn) for dn in dpsi] for dm in dpsi]
    ) - np.outer(overlaps.conj(), overlaps)
    fisher = 4 * kernel.real
    fisher = 0.5 * (fisher + fisher.T)
    uhlmann = 4 * kernel.imag
    uhlmann = 0.5 * (uhlmann - uhlmann.T)
    return QfimResult(
        fisher=fisher,
        uhlmann=uhlmann,
        incompatibility=_maybe_incompat(fisher, uhlmann),
        region=classify_region(spec.theta1, spec.theta2),
        method="oracle",
        t=spec.t,
        normalized=False,
    )
