"""Quadrupole Hamiltonians and the evolutions that realise the holonomy physically.

``H(xi) = Gamma . xi`` is a 4x4 Hermitian operator (through the complex
codec of :mod:`qhopf.quaternion`) with two Kramers doublets at energies +1
and -1.  Its +1 eigenspace is the fiber over ``xi``.

* :func:`adiabatic_evolve` drives ``xi`` slowly around a loop and extracts
  the SU(2) mixing inside the +1 doublet; in the adiabatic limit this is the
  connection holonomy.
* :func:`cyclic_evolve` integrates ``du/dt = -S(t) u`` with
  ``S = [H(eta), H(d eta/dt)] / 4``, whose solution is exactly parallel
  transport along ``eta`` (no dynamical phase at all).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import PathNotClosed, PoleCrossing
from .holonomy import DEFAULT_STEPS, LoopSpec, orbit_points, so3_generators, transport_sampled
from .hopf import S4Point, as_point, gamma_complex, gamma_dot, section_array
from .quaternion import (
    QMatrix,
    QSpinor,
    Quaternion,
    UnitQuaternion,
    complex_to_spinor_array,
    inner_array,
    qmul_array,
    spinor_to_complex,
)

TWO_PI = 2.0 * np.pi
SQRT3 = np.sqrt(3.0)
CLOSURE_TOL = 1e-9
CHART_POLE_TOL = 1e-10
ADIABATIC_DT = 0.02


# ---------------------------------------------------------------------------
# quadrupoles and Hamiltonians
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadrupoleField:
    """Real symmetric traceless 3x3 matrix with ``(3/2) Tr X^2 = 1``."""

    X: np.ndarray

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got {X.shape}")
        if np.max(np.abs(X - X.T)) > 1e-12:
            raise ValueError("quadrupole must be symmetric")
        if abs(np.trace(X)) > 1e-12:
            raise ValueError("quadrupole must be traceless")
        if abs(1.5 * np.trace(X @ X) - 1.0) > 1e-10:
            raise ValueError("quadrupole must satisfy (3/2) Tr X^2 = 1")
        X.flags.writeable = False
        object.__setattr__(self, "X", X)

    @property
    def point(self) -> S4Point:
        return point_of_quadrupole(self)


def quadrupole_of_point(p) -> QuadrupoleField:
    x0, x1, x2, x3, x4 = as_point(p).xi
    X = np.array(
        [
            [-x1 + x0 / SQRT3, -x2, -x3],
            [-x2, x1 + x0 / SQRT3, x4],
            [-x3, x4, -2.0 * x0 / SQRT3],
        ]
    ) / SQRT3
    return QuadrupoleField(X)


def point_of_quadrupole(q: QuadrupoleField) -> S4Point:
    X = q.X
    return S4Point(
        [
            -1.5 * X[2, 2],
            0.5 * SQRT3 * (X[1, 1] - X[0, 0]),
            -SQRT3 * X[0, 1],
            -SQRT3 * X[0, 2],
            SQRT3 * X[1, 2],
        ]
    )


def hamiltonian_of(p) -> QMatrix:
    """``H = Gamma . xi`` as a quaternionic matrix; ``.to_complex()`` gives the 4x4 view."""
    return gamma_dot(as_point(p).xi)


def hamiltonian_from_quadrupole(q: QuadrupoleField) -> QMatrix:
    """``H = sum_mn X_mn J_m J_n`` built from the SO(3) generators."""
    J = so3_generators()
    H = QMatrix.zeros()
    for m in range(3):
        for n in range(3):
            if q.X[m, n] != 0.0:
                H = H + (J[m] @ J[n]) * q.X[m, n]
    return H


# ---------------------------------------------------------------------------
# paths
# ---------------------------------------------------------------------------

Path = Callable[[np.ndarray], np.ndarray]


def _evaluate(path: Path, lam: np.ndarray) -> np.ndarray:
    """Evaluate ``path`` on an array of parameters, vectorized when possible."""
    try:
        out = np.asarray(path(lam), dtype=float)
        if out.shape == lam.shape + (5,):
            return out
    except Exception:
        pass
    return np.array([np.asarray(path(x), dtype=float).reshape(5) for x in lam])


def spline_path(points) -> tuple[Path, float]:
    """Periodic cubic spline through closed samples, renormalized onto S^4.

    The parameter runs over ``[0, n]`` for ``n + 1`` samples.
    """
    pts = np.asarray(points, dtype=float)
    if np.linalg.norm(pts[-1] - pts[0]) > CLOSURE_TOL:
        raise PathNotClosed("sampled path is not closed")
    pts = pts.copy()
    pts[-1] = pts[0]
    spline = CubicSpline(np.arange(len(pts)), pts, bc_type="periodic", axis=0)

    def path(lam):
        v = spline(np.asarray(lam, dtype=float))
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    return path, float(len(pts) - 1)


def as_path(loop, period: float | None = None) -> tuple[Path, float]:
    """Normalize the accepted loop descriptions to ``(callable, period)``."""
    if isinstance(loop, LoopSpec):
        if loop.kind == "sampled":
            return spline_path(loop.points)
        alpha, base = loop.alpha, loop.base
        return (lambda lam: orbit_points(alpha, base, lam).reshape(np.shape(lam) + (5,))), loop.t_end
    if callable(loop):
        return loop, TWO_PI if period is None else float(period)
    return spline_path(loop)


def _check_closed(path: Path, period: float):
    ends = _evaluate(path, np.array([0.0, period]))
    if np.linalg.norm(ends[1] - ends[0]) > CLOSURE_TOL:
        raise PathNotClosed(f"path end differs from its start by {np.linalg.norm(ends[1] - ends[0]):.3e}")


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------

def _rk4_step_matrices(A0, Am, A1, h):
    """Step matrices of classical RK4 for the linear system ``psi' = A(t) psi``.

    ``A0, Am, A1`` hold the generator at the start, middle and end of each
    step, shape ``(n, d, d)``.
    """
    eye = np.eye(A0.shape[-1])
    K1 = A0
    K2 = Am @ (eye + 0.5 * h * K1)
    K3 = Am @ (eye + 0.5 * h * K2)
    K4 = A1 @ (eye + h * K3)
    return eye + (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4)


def _propagate(steps, psi0):
    """Apply step matrices in order, returning all intermediate states."""
    out = np.empty((len(steps) + 1,) + psi0.shape, dtype=complex)
    out[0] = psi0
    psi = psi0
    for n, M in enumerate(steps):
        psi = M @ psi
        out[n + 1] = psi
    return out


def _quaternion_overlap_norm(x, y):
    """``|<u|v>|`` for codec vectors ``x, y`` of shape ``(..., 4)``."""
    c = np.sum(np.conj(x) * y, axis=-1)
    d = x[..., 0] * y[..., 1] - x[..., 1] * y[..., 0] + x[..., 2] * y[..., 3] - x[..., 3] * y[..., 2]
    return np.sqrt(np.abs(c) ** 2 + np.abs(d) ** 2)


@dataclass(frozen=True)
class EvolutionReport:
    """Outcome of an evolution around a loop.

    ``geometric_phase`` is the quaternionic phase ``g`` with
    ``final = u0 g`` (adiabatic runs: after removing ``dynamical_factor``).
    ``dynamical_phase_bound`` is ``max_t |<u|S|u>|`` for cyclic runs and
    ``max_t |<psi|H|psi> - 1|`` for adiabatic runs.
    """

    final_state: QSpinor
    geometric_phase: UnitQuaternion
    dynamical_phase_bound: float
    ramp_time: float
    steps: int
    holonomy_reference: UnitQuaternion | None = None
    distance_to_holonomy: float | None = None
    norm_drift: float = 0.0
    dynamical_factor: complex = 1.0 + 0.0j
    leakage: float = 0.0


def _reference(path, period, u0, reference_steps):
    if not reference_steps:
        return None
    pts = np.array(_evaluate(path, np.linspace(0.0, period, reference_steps + 1)))
    pts[-1] = pts[0]
    return transport_sampled(pts, u0).q


def ease(x):
    """Schedule ``x - sin(2 pi x)/(2 pi)``: monotone, zero velocity at both ends."""
    return x - np.sin(TWO_PI * x) / TWO_PI


def adiabatic_evolve(
    path,
    ramp_time: float,
    period: float | None = None,
    steps: int | None = None,
    reference_steps: int = DEFAULT_STEPS,
) -> EvolutionReport:
    """Drive ``H(xi(lambda))`` once around a loop in time ``ramp_time``.

    The loop parameter follows ``lambda(t) = period * ease(t / T)``.  The
    Schroedinger equation is integrated with RK4 in the frame rotating with
    the +1 eigenvalue, ``d phi/dt = -i (H - 1) phi``, starting from the
    section spinor ``u0`` and its partner ``u0 j``, which together span the
    +1 doublet.  The 2x2 overlap block with that basis is unitarized by polar
    decomposition and read as the quaternion ``g``.  The dynamical factor
    ``e^{-iT}`` is removed analytically.
    """
    path, period = as_path(path, period)
    T = float(ramp_time)
    if T <= 0:
        raise ValueError("ramp time must be positive")
    _check_closed(path, period)
    n = int(steps) if steps else max(DEFAULT_STEPS, int(np.ceil(T / ADIABATIC_DT)))
    h = T / n

    t_all = np.linspace(0.0, T, 2 * n + 1)
    xi_all = _evaluate(path, period * ease(t_all / T))
    if np.any(1.0 + xi_all[:, 0] < CHART_POLE_TOL):
        raise PoleCrossing("path reaches the south pole")
    G = gamma_complex()
    H_all = np.tensordot(xi_all, G, 1)
    A_all = -1j * (H_all - np.eye(4))
    step_mats = _rk4_step_matrices(A_all[0:-1:2], A_all[1::2], A_all[2::2], h)

    u0 = section_array(xi_all[0])
    basis = np.stack([spinor_to_complex(u0), spinor_to_complex(_times_j(u0))], axis=-1)
    psi = _propagate(step_mats, basis)

    final = psi[-1]
    B = basis.conj().T @ final
    Ws, _, Vh = np.linalg.svd(B)
    W = Ws @ Vh
    g = UnitQuaternion.normalize(Quaternion.from_pair(W[0, 0], np.conj(W[1, 0])))

    energies = np.einsum("ni,nij,nj->n", np.conj(psi[:, :, 0]), H_all[::2], psi[:, :, 0]).real
    norms = np.linalg.norm(psi, axis=1)
    leakage = float(1.0 - np.linalg.svd(B, compute_uv=False).min())

    dyn = np.exp(-1j * T)
    physical = final[:, 0] * dyn
    q_ref = _reference(path, period, u0, reference_steps)
    return EvolutionReport(
        final_state=QSpinor.from_array(complex_to_spinor_array(physical / np.linalg.norm(physical))),
        geometric_phase=g,
        dynamical_phase_bound=float(np.max(np.abs(energies / norms[:, 0] ** 2 - 1.0))),
        ramp_time=T,
        steps=n,
        holonomy_reference=q_ref,
        distance_to_holonomy=None if q_ref is None else float(np.linalg.norm(g.array - q_ref.array)),
        norm_drift=float(np.max(np.abs(norms[-1] - 1.0))),
        dynamical_factor=complex(dyn),
        leakage=leakage,
    )


def _times_j(u):
    return qmul_array(u, np.array([0.0, 0.0, 1.0, 0.0]))


def _central_derivative(path: Path, lam: np.ndarray, delta: float) -> np.ndarray:
    """Five-point central difference of ``path`` at ``lam``."""
    f = lambda s: _evaluate(path, lam + s * delta)  # noqa: E731
    return (-f(2) + 8.0 * f(1) - 8.0 * f(-1) + f(-2)) / (12.0 * delta)


def cyclic_evolve(
    eta,
    period: float | None = None,
    steps: int = DEFAULT_STEPS,
    u0=None,
    reference_steps: int = DEFAULT_STEPS,
) -> EvolutionReport:
    """Integrate ``du/dt = -S(t) u`` with ``S = [H(eta), H(d eta/dt)] / 4`` once around ``eta``.

    ``d eta/dt`` is a five-point central difference with spacing ``1e-3``
    (scaled to the period).  ``u0`` defaults to the section spinor over
    ``eta(0)``.  The result is compared with projector-product transport
    over ``reference_steps`` samples.
    """
    path, period = as_path(eta, period)
    _check_closed(path, period)
    n = int(steps)
    h = period / n
    t_all = np.linspace(0.0, period, 2 * n + 1)
    eta_all = _evaluate(path, t_all)
    deta_all = _central_derivative(path, t_all, 1e-3 * period / TWO_PI)

    G = gamma_complex()
    H = np.tensordot(eta_all, G, 1)
    Hd = np.tensordot(deta_all, G, 1)
    S_all = 0.25 * (H @ Hd - Hd @ H)
    step_mats = _rk4_step_matrices(-S_all[0:-1:2], -S_all[1::2], -S_all[2::2], h)

    if u0 is None:
        if 1.0 + eta_all[0, 0] < CHART_POLE_TOL:
            raise PoleCrossing("loop starts at the south pole")
        u0_arr = section_array(eta_all[0])
    else:
        u0_arr = QSpinor.from_array(u0.array if isinstance(u0, QSpinor) else u0).array
    x0 = spinor_to_complex(u0_arr)
    psi = _propagate(step_mats, x0)

    Su = np.einsum("nij,nj->ni", S_all[::2], psi)
    bound = float(np.max(_quaternion_overlap_norm(psi, Su)))

    final = psi[-1]
    final_arr = complex_to_spinor_array(final)
    g = UnitQuaternion.normalize(inner_array(u0_arr, final_arr))
    q_ref = _reference(path, period, u0_arr, reference_steps)
    return EvolutionReport(
        final_state=QSpinor.from_array(final_arr / np.linalg.norm(final_arr)),
        geometric_phase=g,
        dynamical_phase_bound=bound,
        ramp_time=period,
        steps=n,
        holonomy_reference=q_ref,
        distance_to_holonomy=None if q_ref is None else float(np.linalg.norm(g.array - q_ref.array)),
        norm_drift=float(abs(np.linalg.norm(final) - 1.0)),
    )
