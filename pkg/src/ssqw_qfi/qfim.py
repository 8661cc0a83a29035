"""Quantum Fisher information matrix and mean Uhlmann curvature.

Three routes are provided for the split-step walk started from a coin state
localized at the origin:

* :func:`finite_time_qfim` sums the walk derivative generators over ``t`` steps
  in momentum space and integrates over ``k`` exactly.
* :func:`asymptotic_qfim` integrates the unit-eigenvalue projector, giving the
  coefficient of ``t^2``.
* :func:`closed_form_qfim` evaluates the region-wise closed expressions for the
  same coefficient.

The position-space oracle lives in :mod:`ssqw_qfi.walk`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import roots_legendre

from ._validation import check_angle, check_bloch, check_steps
from .errors import (
    BoundaryRegionError,
    ConvergenceError,
    SingularClosedFormError,
    SingularFisherError,
)
from .kspace import (
    BOUNDARY_EPS,
    Region,
    a_k_super,
    boundary_distance,
    classify_region,
    half_angles,
    o_mu,
    projector_A1,
)
from .pauli import bloch_compose

__all__ = [
    "QfimResult",
    "NEAR_BOUNDARY",
    "finite_time_qfim",
    "asymptotic_qfim",
    "closed_form_fisher",
    "closed_form_qfim",
    "incompatibility",
    "bounds",
    "oqw_fisher",
]

#: Below this angular distance from a phase boundary the asymptotic route
#: defers to the closed-form limit.
NEAR_BOUNDARY = 1e-3
SINGULAR_DET = 1e-14


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class QfimResult:
    """Fisher matrix, Uhlmann curvature and derived scalars at one point.

    ``fisher`` is the raw matrix for the finite-time and oracle routes and the
    ``t^2`` coefficient for the asymptotic and closed-form routes
    (``normalized`` tells which). ``uhlmann`` and ``incompatibility`` are
    ``None`` where the route does not provide them or the Fisher matrix is
    singular.
    """

    fisher: np.ndarray
    uhlmann: np.ndarray | None
    incompatibility: float | None
    region: Region
    method: str
    t: int | None = None
    normalized: bool = False
    flags: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "fisher", _frozen(self.fisher))
        if self.uhlmann is not None:
            object.__setattr__(self, "uhlmann", _frozen(self.uhlmann))
        object.__setattr__(self, "region", Region(self.region))
        object.__setattr__(self, "flags", tuple(self.flags))

    @property
    def det_fisher(self) -> float:
        return float(np.linalg.det(self.fisher))

    @property
    def winding(self) -> int | None:
        return self.region.winding

    def to_dict(self) -> dict:
        """Flat, JSON-ready view. Floats survive a JSON round trip exactly."""
        f = self.fisher
        return {
            "f11": float(f[0, 0]),
            "f12": float(f[0, 1]),
            "f22": float(f[1, 1]),
            "d12": None if self.uhlmann is None else float(self.uhlmann[0, 1]),
            "det_f": self.det_fisher,
            "incompat": self.incompatibility,
            "region": self.region.value,
            "winding": self.winding,
            "method": self.method,
            "t": self.t,
            "normalized": self.normalized,
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QfimResult":
        fisher = [[d["f11"], d["f12"]], [d["f12"], d["f22"]]]
        d12 = d.get("d12")
        uhlmann = None if d12 is None else [[0.0, d12], [-d12, 0.0]]
        return cls(
            fisher=fisher,
            uhlmann=uhlmann,
            incompatibility=d.get("incompat"),
            region=Region(d["region"]),
            method=d["method"],
            t=d.get("t"),
            normalized=bool(d.get("normalized", False)),
            flags=tuple(d.get("flags", ())),
        )


def incompatibility(fisher: ArrayLike, uhlmann: ArrayLike) -> float:
    """Largest absolute eigenvalue of ``i F^-1 D``, clipped to ``[0, 1]``.

    For two parameters this equals ``|D12| / sqrt(det F)``.

    Raises
    ------
    SingularFisherError
        If ``det F <= 1e-14``.
    """
    f = np.asarray(fisher, dtype=np.float64)
    d = np.asarray(uhlmann, dtype=np.float64)
    det = float(np.linalg.det(f))
    if not det > SINGULAR_DET:
        raise SingularFisherError(f"det F = {det:.3e} is not invertible")
    eig = np.linalg.eigvals(1j * np.linalg.solve(f, d))
    return float(np.clip(np.max(np.abs(eig)), 0.0, 1.0))


def bounds(
    fisher: ArrayLike, uhlmann: ArrayLike, cost: ArrayLike | None = None
) -> tuple[float, float]:
    """Symmetric bound and the upper end of the Holevo bracket.

    Returns ``(C_S, (1 + R) C_S)`` with ``C_S = Tr(G F^-1)``; the Holevo bound
    lies in that interval. ``cost`` defaults to the identity.
    """
    f = np.asarray(fisher, dtype=np.float64)
    g = np.eye(f.shape[0]) if cost is None else np.asarray(cost, dtype=np.float64)
    r = incompatibility(f, uhlmann)
    cs = float(np.trace(g @ np.linalg.inv(f)))
    return cs, (1.0 + r) * cs


def _maybe_incompat(f: np.ndarray, d: np.ndarray) -> float | None:
    try:
        return incompatibility(f, d)
    except SingularFisherError:
        return None


def _state_vector(r: np.ndarray) -> np.ndarray:
    return np.concatenate([[1.0], r])


def finite_time_qfim(
    theta1: float, theta2: float, r: ArrayLike, t: int, n_nodes: int | None = None
) -> QfimResult:
    """Fisher matrix and Uhlmann curvature after ``t`` steps, from momentum space.

    With ``X_mu(k) = sum_{j=1..t} u_k^j O_mu u_k^-j`` and ``rho_t(k)`` the coin
    state evolved ``t`` steps at momentum ``k``, the kernel is

        K = int dk/2pi Tr(rho_t X_mu^+ X_nu)
            - (int dk/2pi Tr(rho_t X_mu^+)) (int dk/2pi Tr(rho_t X_nu))

    and ``F = 4 Re K``, ``D = 4 Im K``. The integrands are trigonometric
    polynomials of degree at most ``2t``, so the uniform rule with the default
    ``4t + 8`` nodes is exact.

    Parameters
    ----------
    theta1, theta2 : float
        Coin angles in ``[0, 2 pi]``.
    r : array_like, shape (3,)
        Bloch vector of the pure initial coin state.
    t : int
        Number of steps, at least 1.
    n_nodes : int, optional
        Override the number of quadrature nodes.
    """
    theta1 = check_angle("theta1", theta1)
    theta2 = check_angle("theta2", theta2)
    r = check_bloch(r, pure=True)
    t = check_steps(t, minimum=1)
    m = 4 * t + 8 if n_nodes is None else int(n_nodes)
    if m < 1:
        raise ValueError("n_nodes must be positive")

    k = -np.pi + 2 * np.pi * np.arange(m) / m
    a = a_k_super(theta1, theta2, k)
    gens = np.stack([o_mu(theta1, theta2, k, 1), o_mu(theta1, theta2, k, 2)], axis=1)
    rho = np.broadcast_to(_state_vector(r), (m, 4)).astype(np.complex128)
    acc = np.zeros_like(gens)
    for _ in range(t):
        gens = np.einsum("kab,kmb->kma", a, gens)
        rho = np.einsum("kab,kb->ka", a, rho)
        acc += gens

    x = bloch_compose(acc)  # (m, 2, 2, 2): node, mu, matrix
    rho_m = bloch_compose(rho)
    x_dag = np.swapaxes(x.conj(), -1, -2)
    # Tr(rho X_mu^+ X_nu) and Tr(rho X_nu) per node
    second = np.einsum("kij,kmjl,knli->kmn", rho_m, x_dag, x)
    first = np.einsum("kij,knji->kn", rho_m, x)
    mean_first = first.mean(axis=0)
    kernel = second.mean(axis=0) - np.outer(mean_first.conj(), mean_first)

    fisher = 4 * kernel.real
    fisher = 0.5 * (fisher + fisher.T)
    uhlmann = 4 * kernel.imag
    uhlmann = 0.5 * (uhlmann - uhlmann.T)
    return QfimResult(
        fisher=fisher,
        uhlmann=uhlmann,
        incompatibility=_maybe_incompat(fisher, uhlmann),
        region=classify_region(theta1, theta2),
        method="finite",
        t=t,
        normalized=False,
    )


def _projector_integrals(theta1, theta2, rho, n):
    x, w = roots_legendre(n)
    k = np.pi * x
    w = w / 2.0  # dk / 2pi over [-pi, pi]
    p = projector_A1(theta1, theta2, k)
    gens = np.stack([o_mu(theta1, theta2, k, 1), o_mu(theta1, theta2, k, 2)], axis=1)
    pg = np.einsum("kab,kmb->kma", p, gens)
    # (O_mu|P|O_nu), (O_mu|P|rho0), (rho0|P|O_nu)
    pp = np.einsum("k,kma,kna->mn", w, gens.conj(), pg)
    p_rho = np.einsum("kab,b->ka", p, rho)
    left = np.einsum("k,kma,ka->m", w, gens.conj(), p_rho)
    right = np.einsum("k,a,kna->n", w, rho, pg)
    return (pp - np.outer(left, right)).real


def asymptotic_qfim(
    theta1: float,
    theta2: float,
    r: ArrayLike,
    *,
    tol: float = 1e-10,
    n_start: int = 64,
    n_max: int = 1 << 16,
) -> QfimResult:
    """Leading ``t^2`` coefficient of the Fisher matrix via the spectral projector.

    The coefficient is

        int (O_mu|P|O_nu) - (int (O_mu|P|rho0)) (int (rho0|P|O_nu)),

    integrals over ``dk/2pi``, where ``P`` is the unit-eigenvalue projector and
    ``|rho0) = (1, r)``. Gauss-Legendre node counts double from ``n_start``
    until two successive estimates differ by less than ``tol``.

    Within :data:`NEAR_BOUNDARY` of a phase boundary the projector denominator
    all but vanishes; the closed-form limit is returned instead and flagged
    ``"closed-form-fallback"``. Mixed states (``|r| < 1``) are evaluated and
    flagged ``"extrapolated"``.

    Raises
    ------
    BoundaryRegionError
        If the point is classified as boundary.
    ConvergenceError
        If ``n_max`` nodes do not reach ``tol``.
    """
    theta1 = check_angle("theta1", theta1)
    theta2 = check_angle("theta2", theta2)
    r = check_bloch(r)
    region = classify_region(theta1, theta2)
    if region is Region.BOUNDARY:
        raise BoundaryRegionError(
            f"(theta1, theta2) = ({theta1:.6g}, {theta2:.6g}) lies on a phase boundary"
        )
    flags = []
    if np.linalg.norm(r) < 1.0 - 1e-12:
        flags.append("extrapolated")
    if boundary_distance(theta1, theta2) < NEAR_BOUNDARY:
        flags.append("closed-form-fallback")
        fisher = closed_form_fisher(theta1, theta2, r[1])
    else:
        rho = _state_vector(r)
        n = n_start
        prev = _projector_integrals(theta1, theta2, rho, n)
        while True:
            n *= 2
            if n > n_max:
                raise ConvergenceError(
                    f"projector integrals not converged to {tol:g} with {n_max} nodes"
                )
            cur = _projector_integrals(theta1, theta2, rho, n)
            if np.max(np.abs(cur - prev)) < tol:
                break
            prev = cur
        fisher = 0.5 * (cur + cur.T)
    return QfimResult(
        fisher=fisher,
        uhlmann=None,
        incompatibility=None,
        region=region,
        method="asymptotic",
        normalized=True,
        flags=tuple(flags),
    )


def _branch_r0(c1, s1, c2, s2):
    """``(M11, M12, M22)`` of the R0 closed form."""
    return (s2 - s1**2) / c1**2, s1 * c2 / (c1 * (1 + s2)), s2 / (1 + s2)


def _branch_r1(c1, s1, c2, s2):
    """``(M11, M12, M22)`` of the R1 closed form."""
    return s1 / (1 + s1), s2 * c1 / (c2 * (1 + s1)), (s1 - s2**2) / c2**2


def closed_form_fisher(theta1, theta2, r2=0.0, eps: float = BOUNDARY_EPS) -> NDArray[np.float64]:
    """Vectorized closed-form ``t^2`` coefficient of the Fisher matrix.

    In both regions ``F = M - r2^2 b b^T``, where ``b`` is the first row of
    ``M``. With ``c_i, s_i`` the half-angle cosines and sines:

    * R0 (``s1 < s2``): ``M11 = (s2 - s1^2)/c1^2``,
      ``M12 = s1 c2 / (c1 (1 + s2))``, ``M22 = s2 / (1 + s2)``;
    * R1 (``s1 > s2``): ``M11 = s1 / (1 + s1)``,
      ``M12 = s2 c1 / (c2 (1 + s1))``, ``M22 = (s1 - s2^2)/c2^2``.

    On the boundary ``s1 = s2 = s`` both branches tend to
    ``s/(1+s) [[1, sg], [sg, 1]]``, with ``sg = +1`` on ``theta1 = theta2`` and
    ``-1`` on ``theta1 + theta2 = 2 pi``. This limit is rank one.

    Arguments broadcast; the result has shape ``broadcast_shape + (2, 2)``.
    """
    t1, t2, r2 = np.broadcast_arrays(
        np.asarray(theta1, dtype=np.float64),
        np.asarray(theta2, dtype=np.float64),
        np.asarray(r2, dtype=np.float64),
    )
    c1, s1 = np.cos(t1 / 2), np.sin(t1 / 2)
    c2, s2 = np.cos(t2 / 2), np.sin(t2 / 2)
    d = s1 - s2
    boundary = (np.abs(d) < eps) | (np.abs(t1 + t2 - 2 * np.pi) < eps)
    r0 = (d < 0) & ~boundary
    r1 = (d > 0) & ~boundary

    with np.errstate(divide="ignore", invalid="ignore"):
        a0 = _branch_r0(c1, s1, c2, s2)
        a1 = _branch_r1(c1, s1, c2, s2)
    lim = s1 / (1 + s1)
    sg = np.where(c1 * c2 < 0, -1.0, 1.0)
    m11, m12, m22 = (
        np.where(boundary, b, np.where(r0, x0, x1))
        for b, x0, x1 in zip((lim, sg * lim, lim), a0, a1)
    )

    out = np.empty(t1.shape + (2, 2), dtype=np.float64)
    q = r2**2
    out[..., 0, 0] = m11 - q * m11**2
    out[..., 0, 1] = out[..., 1, 0] = m12 - q * m11 * m12
    out[..., 1, 1] = m22 - q * m12**2
    return out


def closed_form_qfim(theta1: float, theta2: float, r2: float = 0.0) -> QfimResult:
    """Closed-form ``t^2`` coefficient of the Fisher matrix at one point.

    See :func:`closed_form_fisher` for the expressions.

    Raises
    ------
    SingularClosedFormError
        If the branch denominator ``c1`` (R0) or ``c2`` (R1) is below ``1e-12``.
    """
    theta1 = check_angle("theta1", theta1)
    theta2 = check_angle("theta2", theta2)
    r2 = float(r2)
    if not abs(r2) <= 1.0:
        raise ValueError(f"|r2| must not exceed 1, got {r2!r}")
    region = classify_region(theta1, theta2)
    c1, _, c2, _ = half_angles(theta1, theta2)
    if (region is Region.R0 and abs(c1) < 1e-12) or (region is Region.R1 and abs(c2) < 1e-12):
        raise SingularClosedFormError(
            f"closed form singular at (theta1, theta2) = ({theta1:.6g}, {theta2:.6g})"
        )
    fisher = closed_form_fisher(theta1, theta2, r2)
    if not np.all(np.isfinite(fisher)):
        raise SingularClosedFormError("closed form produced a non-finite value")
    return QfimResult(
        fisher=fisher,
        uhlmann=None,
        incompatibility=None,
        region=region,
        method="closed",
        normalized=True,
    )


def oqw_fisher(theta: ArrayLike) -> NDArray[np.float64]:
    """Single-parameter Fisher coefficient ``s / (1 + s)`` of the ordinary walk."""
    s = np.sin(np.asarray(theta, dtype=np.float64) / 2)
    return s / (1 + s)

