"""Density-matrix geometry of the reduced states.

Covers the Bures distance and fidelity, the rank stratification of
purifications, Uhlmann parallelism and its connection form, and the
rapidity (hyperbolic) model of the Bloch ball.

The reduced density matrix of the first qubit has Bloch vector
``(Re z, Im z, xi0) = (xi1, xi2, xi0)`` and determinant ``C^2 / 4``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundaryState, OffSubbundle, SeparableBoundary, SingularAmplitude
from .hopf import S4Point, hopf_map_array, projector_of
from .quaternion import (
    QSpinor,
    Quaternion,
    as_spinor_array,
    inner_array,
    pair_array,
)
from .state import (
    DensityMatrix2,
    TwoQubitState,
    as_density,
    reduced_densities,
    spinor_of_state,
    state_of_spinor,
)

RANK_TOL = 1e-10
SUBBUNDLE_TOL = 1e-10
POSITIVITY_TOL = 1e-12
INTERIOR_TOL = 1e-9


# ---------------------------------------------------------------------------
# Bures distance
# ---------------------------------------------------------------------------

def sqrtm_psd_2x2(m) -> np.ndarray:
    """Square root of a 2x2 positive semidefinite Hermitian matrix in closed form.

    Uses ``sqrt(M) = (M + sqrt(det M) I) / sqrt(Tr M + 2 sqrt(det M))``,
    which is the spectral square root with both eigenvalues clamped at zero.
    """
    m = np.asarray(m, dtype=complex)
    m = 0.5 * (m + m.conj().T)
    tr = float(np.trace(m).real)
    det = float(np.linalg.det(m).real)
    if det < 0.0:
        # an eigenvalue slightly below zero: clamp it
        if det < -1e-12 * max(1.0, tr * tr):
            lam = np.linalg.eigvalsh(m)
            if lam[0] < -1e-12:
                raise ValueError("matrix is not positive semidefinite")
        det = 0.0
    s = np.sqrt(det)
    denom = tr + 2.0 * s
    if denom <= 0.0:
        return np.zeros((2, 2), dtype=complex)
    return (m + s * np.eye(2)) / np.sqrt(denom)


def bures_fidelity(rho, omega) -> float:
    """``[Tr (omega^1/2 rho omega^1/2)^1/2]^2``.

    For qubits this equals ``Tr(rho omega) + 2 sqrt(det rho det omega)``; the
    product of determinants is taken before the root, which keeps rank-one
    inputs accurate (a lone ``sqrt(det)`` of a roundoff-sized determinant
    would contribute ~1e-8).
    """
    rho, omega = as_density(rho), as_density(omega)
    cross = float(np.trace(rho.matrix @ omega.matrix).real)
    dets = max(0.0, rho.det) * max(0.0, omega.det)
    return float(min(1.0, cross + 2.0 * np.sqrt(dets)))


def bures_distance(rho, omega) -> float:
    """``sqrt(2 - 2 sqrt(F))``."""
    f = bures_fidelity(rho, omega)
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * np.sqrt(f))))


def _sqrt_det(m) -> float:
    return float(np.sqrt(max(0.0, np.linalg.det(m).real)))


def _concurrence_and_direction(bloch):
    R = float(np.linalg.norm(bloch))
    conc = np.sqrt(max(0.0, 1.0 - R * R))
    direction = bloch / R if R > 0.0 else np.array([0.0, 0.0, 1.0])
    return conc, direction


@dataclass(frozen=True)
class BuresLineElement:
    """Squared Bures length of a small step ``rho -> rho + drho`` evaluated three ways.

    ``eq81`` is ``Tr(drho drho)/2 + (d sqrt(det rho))^2``, ``eq79`` is the
    ``(C, Omega)`` coordinate form ``[dC^2/(1-C^2) + (1-C^2) dOmega] / 4`` and
    ``distance_sq`` is the finite Bures distance squared.
    """

    eq81: float
    eq79: float
    distance_sq: float

    def values(self) -> np.ndarray:
        return np.array([self.eq81, self.eq79, self.distance_sq])

    @property
    def spread(self) -> float:
        v = self.values()
        return float(v.max() - v.min())


def bures_line_element_check(rho, drho) -> BuresLineElement:
    """Compare the infinitesimal Bures forms for the finite step ``drho``.

    The forms agree up to terms of order ``|drho|^3``.  Coefficients of the
    coordinate form are taken at the midpoint so the comparison is symmetric.
    """
    rho = as_density(rho)
    drho = np.asarray(drho, dtype=complex)
    rho2 = DensityMatrix2(rho.matrix + drho)
    eq81 = 0.5 * float(np.trace(drho @ drho).real) + (_sqrt_det(rho2.matrix) - _sqrt_det(rho.matrix)) ** 2

    c1, n1 = _concurrence_and_direction(rho.bloch)
    c2, n2 = _concurrence_and_direction(rho2.bloch)
    c_mid = 0.5 * (c1 + c2)
    d_omega = 2.0 * np.arcsin(min(1.0, 0.5 * np.linalg.norm(n2 - n1)))
    r_mid = 1.0 - c_mid * c_mid
    if r_mid > 0.0:
        eq79 = 0.25 * ((c2 - c1) ** 2 / r_mid + r_mid * d_omega**2)
    else:
        eq79 = 0.25 * (np.linalg.norm(rho2.bloch - rho.bloch) ** 2 + (c2 - c1) ** 2)
    return BuresLineElement(
        eq81=float(eq81),
        eq79=float(eq79),
        distance_sq=bures_distance(rho, rho2) ** 2,
    )


def metric_decomposition_check(xi_a, xi_b) -> tuple[float, float]:
    """Both sides of ``dl^2 = 4 dl_B^2 + C^2 dchi^2`` for two nearby points of S^4.

    Returns ``(|xi_b - xi_a|^2, 4 d_B^2 + C_a C_b dchi^2)``; the Bures
    distance is between the reduced densities and ``dchi`` is the wrapped
    phase difference of ``w``.  The two agree to third order in the step.
    """
    a = np.asarray(xi_a, dtype=float)
    b = np.asarray(xi_b, dtype=float)
    lhs = float(np.sum((b - a) ** 2))
    rho_a = density_of_point(a)
    rho_b = density_of_point(b)
    wa, wb = complex(a[3], a[4]), complex(b[3], b[4])
    dchi = float(np.angle(wb * np.conj(wa))) if abs(wa) > 0 and abs(wb) > 0 else 0.0
    rhs = 4.0 * bures_distance(rho_a, rho_b) ** 2 + abs(wa) * abs(wb) * dchi**2
    return lhs, float(rhs)


def density_of_point(xi) -> DensityMatrix2:
    """Reduced density of the first qubit for a point of S^4."""
    xi = xi.xi if isinstance(xi, S4Point) else np.asarray(xi, dtype=float)
    return DensityMatrix2.from_bloch([xi[1], xi[2], xi[0]])


# ---------------------------------------------------------------------------
# fidelity between pure states
# ---------------------------------------------------------------------------

def fidelity_overlap(u, v) -> float:
    """``|<u|v>|^2`` with the quaternionic norm."""
    q = inner_array(as_spinor_array(u), as_spinor_array(v))
    return float(np.dot(q, q))


def fidelity_hopf(u, v) -> float:
    """``(1 + xi . eta) / 2`` from the Hopf images of the two spinors."""
    xi = hopf_map_array(as_spinor_array(u))
    eta = hopf_map_array(as_spinor_array(v))
    return float(0.5 * (1.0 + np.dot(xi, eta)))


def fidelity_projectors(u, v) -> float:
    """``Re Tr(P_u P_v)`` with the quaternionic trace."""
    pu = projector_of(S4Point(hopf_map_array(as_spinor_array(u))))
    pv = projector_of(S4Point(hopf_map_array(as_spinor_array(v))))
    return float((pu.matrix @ pv.matrix).trace().real)


def fidelity_hyperbolic(u, v) -> float:
    """Fidelity through Lorentz factors of the two Bloch vectors.

    ``(gamma_t + cos(chi1 - chi2)) / (2 gamma_u gamma_v)`` with
    ``gamma_t = gamma_u gamma_v (1 + u . v)``, where ``u, v`` are the first
    three components of the Hopf images.
    """
    xi = hopf_map_array(as_spinor_array(u))
    eta = hopf_map_array(as_spinor_array(v))
    ga = _lorentz(xi)
    gb = _lorentz(eta)
    gamma_t = ga * gb * (1.0 + np.dot(xi[:3], eta[:3]))
    dchi = np.angle(complex(xi[3], xi[4])) - np.angle(complex(eta[3], eta[4]))
    return float((gamma_t + np.cos(dchi)) / (2.0 * ga * gb))


def _lorentz(xi) -> float:
    conc = float(np.hypot(xi[3], xi[4]))
    if conc <= INTERIOR_TOL:
        raise SeparableBoundary("state is separable: the Lorentz factor diverges")
    return 1.0 / conc


def _spinor(x):
    if isinstance(x, TwoQubitState):
        return spinor_of_state(x)
    return x


def _state(x) -> TwoQubitState:
    if isinstance(x, TwoQubitState):
        return x
    return state_of_spinor(QSpinor.from_array(as_spinor_array(x)))


def fidelity(u, v, formula: str = "hopf") -> float:
    """Fidelity of two pure states with one of the formulas ``matrix``, ``hopf``, ``hyperbolic``, ``overlap``.

    ``matrix`` is the Bures fidelity of the reduced densities of the first
    qubit, which agrees with the others only when both states have ``chi = 0``.
    """
    if formula == "matrix":
        return bures_fidelity(reduced_densities(_state(u))[0], reduced_densities(_state(v))[0])
    funcs = {"hopf": fidelity_hopf, "hyperbolic": fidelity_hyperbolic, "overlap": fidelity_overlap}
    if formula not in funcs:
        raise ValueError(f"unknown formula {formula!r}")
    return funcs[formula](_spinor(u), _spinor(v))


# ---------------------------------------------------------------------------
# rapidity model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HyperbolicPoint:
    """Bloch vector written as rapidity ``beta = atanh(R)`` and a unit direction."""

    beta: float
    direction: np.ndarray

    @property
    def gamma(self) -> float:
        return float(np.cosh(self.beta))

    @property
    def R(self) -> float:
        return float(np.tanh(self.beta))

    @property
    def bloch(self) -> np.ndarray:
        return self.R * np.asarray(self.direction)


def rapidity_model(rho) -> HyperbolicPoint:
    rho = as_density(rho)
    r = rho.bloch
    R = float(np.linalg.norm(r))
    if R >= 1.0 - INTERIOR_TOL:
        raise BoundaryState("rank-one density matrix lies on the boundary of the ball")
    direction = r / R if R > 0.0 else np.array([0.0, 0.0, 1.0])
    return HyperbolicPoint(beta=float(np.arctanh(R)), direction=direction)


def hyperbolic_line_element(p: HyperbolicPoint, q: HyperbolicPoint) -> float:
    """Conformally rescaled hyperbolic form ``(dbeta^2 + sinh^2(beta) dOmega) / (4 cosh^2 beta)``.

    Evaluated between two nearby points with midpoint coefficients; it equals
    the Bures ``dl_B^2`` to third order in the step.
    """
    beta = 0.5 * (p.beta + q.beta)
    d_omega = 2.0 * np.arcsin(min(1.0, 0.5 * np.linalg.norm(np.asarray(q.direction) - p.direction)))
    return float(((q.beta - p.beta) ** 2 + np.sinh(beta) ** 2 * d_omega**2) / (4.0 * np.cosh(beta) ** 2))


# ---------------------------------------------------------------------------
# purifications and Uhlmann parallelism
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PurificationMatrix:
    """``Lambda = C / sqrt(2)`` with ``Tr Lambda Lambda^dagger = 1``."""

    L: np.ndarray

    def __post_init__(self):
        L = np.array(self.L, dtype=complex)
        if L.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got {L.shape}")
        norm = float(np.sum(np.abs(L) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"Tr L L^dagger = {norm:.15g}, expected 1")
        L.flags.writeable = False
        object.__setattr__(self, "L", L)

    @classmethod
    def from_state(cls, s: TwoQubitState) -> "PurificationMatrix":
        return cls(s.C / np.sqrt(2.0))

    @property
    def C(self) -> np.ndarray:
        return np.sqrt(2.0) * self.L

    @property
    def rank(self) -> int:
        return classify_stratum(self)

    @property
    def density(self) -> DensityMatrix2:
        return DensityMatrix2(self.L @ self.L.conj().T)


def _as_purification(x) -> PurificationMatrix:
    if isinstance(x, PurificationMatrix):
        return x
    if isinstance(x, TwoQubitState):
        return PurificationMatrix.from_state(x)
    return PurificationMatrix(x)


def classify_stratum(L) -> int:
    """Numerical rank of the purification, 1 for separable states and 2 otherwise."""
    sv = np.linalg.svd(_as_purification(L).L, compute_uv=False)
    return 2 if sv[1] > RANK_TOL else 1


def uhlmann_parallel_check(C1, C2) -> bool:
    """Whether ``C1^dagger C2`` is Hermitian and positive definite.

    Accepts amplitude matrices (any normalization) or purifications.
    """
    m1 = _amplitude(C1)
    m2 = _amplitude(C2)
    for m in (m1, m2):
        if np.linalg.svd(m, compute_uv=False)[1] <= RANK_TOL:
            raise SingularAmplitude("Uhlmann parallelism needs rank-two amplitudes")
    X = m1.conj().T @ m2
    scale = max(1.0, float(np.max(np.abs(X))))
    if np.max(np.abs(X - X.conj().T)) > 1e-10 * scale:
        return False
    return bool(np.linalg.eigvalsh(0.5 * (X + X.conj().T)).min() > POSITIVITY_TOL)


def _amplitude(x) -> np.ndarray:
    if isinstance(x, PurificationMatrix):
        return x.C
    if isinstance(x, TwoQubitState):
        return x.C
    return np.asarray(x, dtype=complex)


def uhlmann_connection_form(C, dC) -> np.ndarray:
    """``A = (C^dag dC - dC^dag C)/2 - Tr(C^dag dC - dC^dag C)/4`` on the ``det C > 0`` subbundle.

    ``C`` is the amplitude matrix with ``Tr C^dag C = 2`` (a
    :class:`PurificationMatrix` is rescaled by ``sqrt(2)``).
    """
    Cm = _amplitude(C)
    det = np.linalg.det(Cm)
    if abs(det) <= RANK_TOL:
        raise SingularAmplitude("amplitude is singular")
    if abs(np.angle(det)) > SUBBUNDLE_TOL:
        raise OffSubbundle(f"arg det C = {np.angle(det):.3e} is not zero")
    dC = np.asarray(dC, dtype=complex)
    M = Cm.conj().T @ dC - dC.conj().T @ Cm
    return 0.5 * M - 0.25 * np.trace(M) * np.eye(2)


def su2_matrix(q) -> np.ndarray:
    """``alpha + beta j -> [[alpha, beta], [-conj(beta), conj(alpha)]]``."""
    alpha, beta = pair_array(np.asarray(Quaternion.coerce(q).array))
    return np.array([[alpha, beta], [-np.conj(beta), np.conj(alpha)]])


def instanton_form_matrix(C, dC) -> np.ndarray:
    """``Im <u|du>`` for the spinor of amplitude ``C`` and tangent ``dC``, as a 2x2 matrix."""
    Cm = _amplitude(C)
    u = _spinor_of_amplitude(Cm)
    du = _spinor_of_amplitude(np.asarray(dC, dtype=complex))
    q = inner_array(u, du)
    q[0] = 0.0
    return su2_matrix(q)


def _spinor_of_amplitude(C) -> np.ndarray:
    """Real-linear map ``C -> ((a + b j), (c + d j)) / sqrt(2)`` without normalization."""
    out = np.empty((2, 4))
    for row in range(2):
        out[row] = [C[row, 0].real, C[row, 0].imag, C[row, 1].real, C[row, 1].imag]
    return out / np.sqrt(2.0)


def b2_tangent(C, X) -> np.ndarray:
    """Project ``X`` onto the tangent space of the ``det C > 0`` subbundle at ``C``.

    Removes the real directions that change ``Tr C^dag C`` and ``arg det C``
    to first order.
    """
    Cm = _amplitude(C)
    X = np.asarray(X, dtype=complex).copy()
    basis = []
    for g in (Cm, 1j * np.linalg.inv(Cm).conj().T):
        for b in basis:
            g = g - np.real(np.vdot(b, g)) * b
        basis.append(g / np.sqrt(np.real(np.vdot(g, g))))
    for b in basis:
        X = X - np.real(np.vdot(b, X)) * b
    return X


def to_subbundle(s: TwoQubitState) -> TwoQubitState:
    """Multiply by a global phase so that ``det C`` becomes real and positive."""
    det = s.a * s.d - s.b * s.c
    if abs(det) <= RANK_TOL:
        raise SingularAmplitude("separable state has no det-positive representative")
    ph = np.exp(-0.5j * np.angle(det))
    return TwoQubitState(s.a * ph, s.b * ph, s.c * ph, s.d * ph)
