"""Momentum-space objects of the split-step walk.

After Fourier transforming the lattice, one walk step acts on momentum ``k``
through the coin-space unitary ``u_k``. Everything here is built from the
half-angle shorthands ``c_i = cos(theta_i / 2)`` and ``s_i = sin(theta_i / 2)``.

Functions taking ``k`` broadcast over array-valued ``k``; the angles are
scalars.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import CoinSingularError, DegenerateError, NearSingularError

__all__ = [
    "BOUNDARY_EPS",
    "Region",
    "PoleSet",
    "half_angles",
    "cos_omega",
    "quasi_energy",
    "u_k",
    "du_k",
    "o_mu",
    "a_k_super",
    "rotation_axis",
    "lambda_vectors",
    "projector_A1",
    "projector_closed_form",
    "poles",
    "boundary_distance",
    "classify_region",
]

BOUNDARY_EPS = 1e-6
DEGENERATE_TOL = 1e-8
NEAR_SINGULAR_TOL = 1e-10


class Region(str, enum.Enum):
    """Parameter-space region, split by the sign of ``s1 - s2``."""

    R0 = "R0"
    R1 = "R1"
    BOUNDARY = "boundary"

    @property
    def winding(self) -> int | None:
        """Winding label: 1 for R0, 0 for R1, ``None`` on the boundary."""
        return {Region.R0: 1, Region.R1: 0}.get(self)


@dataclass(frozen=True)
class PoleSet:
    """The four zeros of ``sin^2(omega)`` in the ``z = exp(ik)`` plane."""

    z1: complex
    z2: complex
    z3: complex
    z4: complex

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        return (self.z1, self.z2, self.z3, self.z4)

    @property
    def inside(self) -> tuple[bool, bool, bool, bool]:
        """Flags for poles strictly inside the unit circle."""
        return tuple(abs(z) < 1.0 for z in self.as_tuple())  # type: ignore[return-value]


def half_angles(theta1: float, theta2: float) -> tuple[float, float, float, float]:
    """Return ``(c1, s1, c2, s2)``."""
    return (
        float(np.cos(theta1 / 2)),
        float(np.sin(theta1 / 2)),
        float(np.cos(theta2 / 2)),
        float(np.sin(theta2 / 2)),
    )


def cos_omega(theta1: float, theta2: float, k: ArrayLike) -> NDArray[np.float64]:
    """``cos(omega) = c1 c2 cos(k) - s1 s2``, clamped to ``[-1, 1]``."""
    c1, s1, c2, s2 = half_angles(theta1, theta2)
    return np.clip(c1 * c2 * np.cos(k) - s1 * s2, -1.0, 1.0)


def quasi_energy(theta1: float, theta2: float, k: ArrayLike) -> NDArray[np.float64]:
    """Quasi-energy ``omega`` in ``[0, pi]``; ``u_k`` has eigenvalues ``exp(-+i omega)``."""
    return np.arccos(cos_omega(theta1, theta2, k))


def u_k(theta1: float, theta2: float, k: ArrayLike) -> NDArray[np.complex128]:
    """One-step coin-space unitary at momentum ``k``, shape ``(..., 2, 2)``."""
    c1, s1, c2, s2 = half_angles(theta1, theta2)
    k = np.asarray(k, dtype=np.float64)
    em, ep = np.exp(-1j * k), np.exp(1j * k)
    out = np.empty(k.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c1 * c2 * em - s1 * s2
    out[..., 0, 1] = -s1 * c2 * em - c1 * s2
    out[..., 1, 0] = c1 * s2 + ep * s1 * c2
    out[..., 1, 1] = -s1 * s2 + ep * c1 * c2
    return out


def du_k(theta1: float, theta2: float, k: ArrayLike, mu: int) -> NDArray[np.complex128]:
    """Analytic derivative of :func:`u_k` with respect to ``theta_mu``."""
    c1, s1, c2, s2 = half_angles(theta1, theta2)
    k = np.asarray(k, dtype=np.float64)
    em, ep = np.exp(-1j * k), np.exp(1j * k)
    # d c = -s/2, d s = c/2 for the differentiated angle.
    if mu == 1:
        dc1, ds1, dc2, ds2 = -s1 / 2, c1 / 2, 0.0, 0.0
    elif mu == 2:
        dc1, ds1, dc2, ds2 = 0.0, 0.0, -s2 / 2, c2 / 2
    else:
        raise ValueError(f"mu must be 1 or 2, got {mu!r}")
    out = np.empty(k.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = (dc1 * c2 + c1 * dc2) * em - (ds1 * s2 + s1 * ds2)
    out[..., 0, 1] = -(ds1 * c2 + s1 * dc2) * em - (dc1 * s2 + c1 * ds2)
    out[..., 1, 0] = (dc1 * s2 + c1 * ds2) + ep * (ds1 * c2 + s1 * dc2)
    out[..., 1, 1] = -(ds1 * s2 + s1 * ds2) + ep * (dc1 * c2 + c1 * dc2)
    return out


def o_mu(theta1: float, theta2: float, k: ArrayLike, mu: int) -> NDArray[np.complex128]:
    """Four-vector of ``O_mu = u_k^dagger d_mu u_k`` (anti-Hermitian).

    ``O_1`` is the constant ``-i (0, 0, 1, 0)``; ``O_2`` is
    ``-i (0, (2 c1^2 - 1) sin k, cos k, 2 c1 s1 sin k)``.
    """
    c1, s1, _, _ = half_angles(theta1, theta2)
    k = np.asarray(k, dtype=np.float64)
    out = np.zeros(k.shape + (4,), dtype=np.complex128)
    if mu == 1:
        out[..., 2] = -1j
    elif mu == 2:
        out[..., 1] = -1j * (2 * c1**2 - 1) * np.sin(k)
        out[..., 2] = -1j * np.cos(k)
        out[..., 3] = -1j * 2 * c1 * s1 * np.sin(k)
    else:
        raise ValueError(f"mu must be 1 or 2, got {mu!r}")
    return out


def a_k_super(theta1: float, theta2: float, k: ArrayLike) -> NDArray[np.float64]:
    """Real 4x4 super-operator of ``O -> u_k O u_k^dagger`` in the Pauli basis.

    Written in full-angle shorthands ``C_i = cos(theta_i)``, ``S_i = sin(theta_i)``.
    """
    C1, S1 = np.cos(theta1), np.sin(theta1)
    C2, S2 = np.cos(theta2), np.sin(theta2)
    k = np.asarray(k, dtype=np.float64)
    ck, sk = np.cos(k), np.sin(k)
    out = np.zeros(k.shape + (4, 4), dtype=np.float64)
    out[..., 0, 0] = 1.0
    out[..., 1, 1] = C1 * C2 * ck**2 - C1 * sk**2 - S1 * S2 * ck
    out[..., 1, 2] = -(1 + C2) * sk * ck
    out[..., 1, 3] = S1 * C2 * ck**2 - S1 * sk**2 + C1 * S2 * ck
    out[..., 2, 1] = sk * ((C1 + C1 * C2) * ck - S1 * S2)
    out[..., 2, 2] = ck**2 - C2 * sk**2
    out[..., 2, 3] = sk * ((S1 + S1 * C2) * ck + C1 * S2)
    out[..., 3, 1] = -S1 * C2 - C1 * S2 * ck
    out[..., 3, 2] = S2 * sk
    out[..., 3, 3] = C1 * C2 - S1 * S2 * ck
    return out


def rotation_axis(theta1: float, theta2: float, k: ArrayLike) -> NDArray[np.float64]:
    """Unnormalized rotation axis ``v = sin(omega) n`` of ``u_k``, shape ``(..., 3)``.

    ``u_k = cos(omega) 1 - i sin(omega) n.sigma``, so ``|v|^2 = sin^2(omega)``.
    """
    c1, s1, c2, s2 = half_angles(theta1, theta2)
    k = np.asarray(k, dtype=np.float64)
    return np.stack(
        [-c2 * s1 * np.sin(k), c1 * s2 + s1 * c2 * np.cos(k), c1 * c2 * np.sin(k)],
        axis=-1,
    )


def lambda_vectors(
    theta1: float, theta2: float, k: ArrayLike
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Orthonormal basis ``(lambda_1, lambda_2)`` of the unit-eigenvalue subspace.

    ``lambda_i`` is proportional to ``(cos(omega) + (-1)^i, v)`` with ``v`` from
    :func:`rotation_axis`.

    Raises
    ------
    DegenerateError
        If either normalization factor drops below ``1e-8``.
    """
    c1, s1, c2, s2 = half_angles(theta1, theta2)
    k = np.asarray(k, dtype=np.float64)
    v = rotation_axis(theta1, theta2, k)
    cw = c1 * c2 * np.cos(k) - s1 * s2
    vecs = []
    for sign in (-1.0, 1.0):
        raw = np.concatenate([(cw + sign)[..., None], v], axis=-1)
        norm = np.linalg.norm(raw, axis=-1)
        if np.any(norm < DEGENERATE_TOL):
            raise DegenerateError(
                f"normalization factor {float(norm.min()):.3e} below {DEGENERATE_TOL:g}"
            )
        vecs.append(raw / norm[..., None])
    return vecs[0], vecs[1]


def _check_gap(theta1: float, theta2: float, k: ArrayLike) -> NDArray[np.float64]:
    cw = cos_omega(theta1, theta2, k)
    n = 1.0 - cw**2
    if np.any(n <= NEAR_SINGULAR_TOL):
        raise NearSingularError(
            f"sin^2(omega) = {float(np.min(n)):.3e} at or below {NEAR_SINGULAR_TOL:g}"
        )
    return n


def projector_A1(theta1: float, theta2: float, k: ArrayLike) -> NDArray[np.float64]:
    """Spectral projector onto the unit-eigenvalue subspace of :func:`a_k_super`.

    Assembled as ``|l1)(l1| + |l2)(l2|`` from :func:`lambda_vectors`.

    Raises
    ------
    NearSingularError
        Where ``sin^2(omega) <= 1e-10``.
    """
    _check_gap(theta1, theta2, k)
    l1, l2 = lambda_vectors(theta1, theta2, k)
    return l1[..., :, None] * l1[..., None, :] + l2[..., :, None] * l2[..., None, :]


def projector_closed_form(theta1: float, theta2: float, k: ArrayLike) -> NDArray[np.float64]:
    """Explicit entries of the unit-eigenvalue projector.

    ``P = e0 e0^T + v v^T / N`` with ``N = sin^2(omega)``, i.e. block diagonal
    with the identity on the trace component and the rank-one projector onto the
    rotation axis on the Bloch block.
    """
    n = _check_gap(theta1, theta2, k)
    c1, s1, c2, s2 = half_angles(theta1, theta2)
    k = np.asarray(k, dtype=np.float64)
    sk = np.sin(k)
    b = c1 * s2 + s1 * c2 * np.cos(k)
    out = np.zeros(k.shape + (4, 4), dtype=np.float64)
    out[..., 0, 0] = 1.0
    out[..., 1, 1] = s1**2 * c2**2 * sk**2 / n
    out[..., 1, 2] = out[..., 2, 1] = -s1 * c2 * sk * b / n
    out[..., 1, 3] = out[..., 3, 1] = -s1 * c1 * c2**2 * sk**2 / n
    out[..., 2, 2] = b**2 / n
    out[..., 2, 3] = out[..., 3, 2] = c1 * c2 * sk * b / n
    out[..., 3, 3] = c1**2 * c2**2 * sk**2 / n
    return out


def poles(theta1: float, theta2: float) -> PoleSet:
    """Zeros of ``sin^2(omega)`` as a function of ``z = exp(ik)``.

    They come in reciprocal pairs ``z1 z2 = z3 z4 = 1``.

    Raises
    ------
    CoinSingularError
        If ``|c1 c2| < 1e-12`` (``theta1`` or ``theta2`` equal to pi).
    """
    c1, s1, c2, s2 = half_angles(theta1, theta2)
    cc = c1 * c2
    if abs(cc) < 1e-12:
        raise CoinSingularError(f"c1*c2 = {cc:.3e}; poles undefined at theta_i = pi")
    ss = s1 * s2
    plus, minus = abs(s1 + s2), abs(s1 - s2)
    return PoleSet(
        complex((1 + ss + plus) / cc),
        complex((1 + ss - plus) / cc),
        complex((-1 + ss + minus) / cc),
        complex((-1 + ss - minus) / cc),
    )


def boundary_distance(theta1: float, theta2: float) -> float:
    """Angular distance to the nearer of the lines ``theta1 = theta2`` and
    ``theta1 + theta2 = 2 pi``."""
    return min(abs(theta1 - theta2), abs(theta1 + theta2 - 2 * np.pi))


def classify_region(theta1: float, theta2: float, eps: float = BOUNDARY_EPS) -> Region:
    """Label ``(theta1, theta2)`` by the sign of ``s1 - s2``.

    ``R1`` (winding 0) when ``s1 - s2 > eps``, ``R0`` (winding 1) when
    ``s1 - s2 < -eps``, boundary otherwise or when ``|theta1 + theta2 - 2 pi| < eps``.
    """
    _, s1, _, s2 = half_angles(theta1, theta2)
    d = s1 - s2
    if abs(d) < eps or abs(theta1 + theta2 - 2 * np.pi) < eps:
        return Region.BOUNDARY
    return Region.R1 if d > 0 else Region.R0
