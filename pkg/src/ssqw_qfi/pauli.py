"""2x2 operator algebra in the Pauli basis.

A 2x2 operator ``O`` is stored as its four-vector ``(o0, o1, o2, o3)`` with
``o_i = Tr(O sigma_i)`` and ``sigma_0 = 1``, so that ``O = 1/2 sum_i o_i sigma_i``.
All functions broadcast over leading axes: operators have shape ``(..., 2, 2)``,
four-vectors ``(..., 4)`` and super-operators ``(..., 4, 4)``.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import NotUnitaryError

__all__ = [
    "IDENTITY",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "PAULI",
    "UNITARITY_TOL",
    "bloch_decompose",
    "bloch_compose",
    "unitarity_defect",
    "conjugation_superop",
]

IDENTITY = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
#: Stacked basis ``(sigma_0, sigma_x, sigma_y, sigma_z)``, shape ``(4, 2, 2)``.
PAULI = np.stack([IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z])
for _m in (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z, PAULI):
    _m.setflags(write=False)

UNITARITY_TOL = 1e-10


def bloch_decompose(op: ArrayLike) -> NDArray[np.complex128]:
    """Return the four-vector ``o_i = Tr(O sigma_i)`` of ``op``.

    Parameters
    ----------
    op : array_like, shape (..., 2, 2)
        Operator(s) to decompose.

    Returns
    -------
    ndarray, shape (..., 4)
        Complex components. They are real (up to rounding) when ``op`` is
        Hermitian.
    """
    op = np.asarray(op, dtype=np.complex128)
    if op.shape[-2:] != (2, 2):
        raise ValueError(f"expected (..., 2, 2) operator, got shape {op.shape}")
    # Tr(O s_a) = sum_ij O_ij (s_a)_ji
    return np.einsum("...ij,aji->...a", op, PAULI)


def bloch_compose(vec: ArrayLike) -> NDArray[np.complex128]:
    """Inverse of :func:`bloch_decompose`: ``1/2 sum_i v_i sigma_i``."""
    vec = np.asarray(vec, dtype=np.complex128)
    if vec.shape[-1] != 4:
        raise ValueError(f"expected (..., 4) four-vector, got shape {vec.shape}")
    return 0.5 * np.einsum("...a,aij->...ij", vec, PAULI)


def unitarity_defect(u: ArrayLike) -> float:
    """Largest entrywise deviation of ``U^dagger U`` from the identity."""
    u = np.asarray(u, dtype=np.complex128)
    gram = np.swapaxes(u.conj(), -1, -2) @ u
    return float(np.max(np.abs(gram - IDENTITY)))


def conjugation_superop(u: ArrayLike, *, check: bool = True) -> NDArray[np.complex128]:
    """Four-vector representation of ``O -> U O U^dagger``.

    The returned matrix ``A`` satisfies
    ``bloch_decompose(U @ O @ U.conj().T) == A @ bloch_decompose(O)``, with
    entries ``A_ab = 1/2 Tr(sigma_a U sigma_b U^dagger)``.

    Raises
    ------
    NotUnitaryError
        If ``check`` is set and ``U`` deviates from unitarity by more than
        :data:`UNITARITY_TOL`.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.shape[-2:] != (2, 2):
        raise ValueError(f"expected (..., 2, 2) operator, got shape {u.shape}")
    if check:
        defect = unitarity_defect(u)
        if not defect <= UNITARITY_TOL:
            raise NotUnitaryError(f"unitarity defect {defect:.3e} exceeds {UNITARITY_TOL:g}")
    u_dag = np.swapaxes(u.conj(), -1, -2)
    # U sigma_b U^dagger for every b, then project onto sigma_a.
    rotated = u[..., None, :, :] @ PAULI @ u_dag[..., None, :, :]
    return 0.5 * np.einsum("aji,...bij->...ab", PAULI, rotated)
