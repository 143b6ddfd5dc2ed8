"""The instanton connection and its holonomy.

Parallel transport of a quaternionic phase along a loop on S^4 is computed in
two independent ways:

* numerically, by chaining the normalized overlaps ``<u_n|u_{n-1}>`` of section
  representatives over closely spaced samples (equivalently, a path-ordered
  product of rank-one projectors);
* in closed form for orbits ``P(t) = e^{tS} P e^{-tS}`` of a Spin(5) generator,
  ``e^{tS} (cos(t|PSP|) - sin(t|PSP|)/|PSP| PS) |u>``.

Holonomies act from the right: a loop maps the start spinor ``u0`` to ``u0 q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import special_ortho_group

from .errors import FiberMismatch, LoopNotClosed, NotAntisymmetric, PoleCrossing
from .hopf import (
    NORTH,
    Projector,
    S4Point,
    StereoCoord,
    as_point,
    gamma_set,
    hopf_map_array,
    points_array,
    projector_of,
    section_array,
    section_of_point,
    spin_basis,
)
from .quaternion import (
    QMatrix,
    QSpinor,
    Quaternion,
    UnitQuaternion,
    as_spinor_array,
    inner_array,
    ordered_product,
    qmul_array,
    qnormalize_array,
)

TWO_PI = 2.0 * np.pi
DEFAULT_STEPS = 20000
CLOSURE_TOL = 1e-10
PROJECTOR_CLOSURE_TOL = 1e-9
CHART_POLE_TOL = 1e-10


# ---------------------------------------------------------------------------
# local connection form
# ---------------------------------------------------------------------------

def connection_at(x: StereoCoord, dx) -> Quaternion:
    """``A(dx) = Im(conj(x) dx) / (1 + |x|^2)`` on the north chart."""
    if x.branch != NORTH:
        raise ValueError("the connection form is given on the north chart")
    dx = Quaternion.coerce(dx)
    return (x.x.conj() * dx).imag / (1.0 + x.x.norm2())


def connection_zw(z: complex, w: complex, dz: complex, dw: complex, branch: str = NORTH) -> Quaternion:
    """The connection form written in the entanglement coordinates ``(z, w)``.

    ``A = Im(conj(z) dz + w conj(dw) + (conj(z) dw - w conj(dz)) j) / (2 (1 + xi0))``
    where ``xi0 = +-sqrt(1 - |z|^2 - |w|^2)`` on the chosen hemisphere.
    """
    xi0 = np.sqrt(max(0.0, 1.0 - abs(z) ** 2 - abs(w) ** 2))
    if branch != NORTH:
        xi0 = -xi0
    num = Quaternion.from_pair(np.conj(z) * dz + w * np.conj(dw), np.conj(z) * dw - w * np.conj(dz))
    return num.imag / (2.0 * (1.0 + xi0))


def monopole_connection(theta: float, dphi: float) -> Quaternion:
    """Restriction to the separable sphere: ``i (1 - cos(Theta)) dPhi / 2``."""
    return Quaternion(0.0, 0.5 * (1.0 - np.cos(theta)) * dphi)


# ---------------------------------------------------------------------------
# loops
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HolonomyResult:
    """Anholonomy ``q`` of a loop together with diagnostics.

    ``residual`` measures how far the transported spinor is from the start
    fiber (zero for an exactly closed loop).
    """

    q: UnitQuaternion
    n_steps: int
    residual: float
    final_state: QSpinor | None = None

    def distance(self, other) -> float:
        return float(np.linalg.norm(self.q.array - Quaternion.coerce(other).array))


def generator_coefficients(S: QMatrix) -> np.ndarray:
    """Antisymmetric ``alpha`` with ``S = sum_{m<n} alpha_mn S_mn``."""
    alpha = np.zeros((5, 5))
    for (m, n), basis in spin_basis().items():
        alpha[m, n] = 2.0 * (basis.H @ S).trace().real
        alpha[n, m] = -alpha[m, n]
    return alpha


def spin5_generator(alpha) -> QMatrix:
    """``S = sum_{m<n} alpha_mn [Gamma_m, Gamma_n] / 4`` for antisymmetric ``alpha``.

    The orbit of a point then rotates as ``xi(t) = expm(t alpha) xi(0)``.
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (5, 5) or np.max(np.abs(alpha + alpha.T)) > 1e-12:
        raise NotAntisymmetric("alpha must be an antisymmetric 5x5 matrix")
    S = QMatrix.zeros()
    for (m, n), basis in spin_basis().items():
        if alpha[m, n] != 0.0:
            S = S + basis * alpha[m, n]
    return S


def orbit_points(alpha, base, t) -> np.ndarray:
    """Points ``expm(t alpha) xi(0)`` for an array of times, shape ``(len(t), 5)``."""
    alpha = np.asarray(alpha, dtype=float)
    xi0 = as_point(base).xi
    lam, vecs = np.linalg.eigh(1j * alpha)
    coeff = vecs.conj().T @ xi0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    phases = np.exp(-1j * np.outer(t, lam))
    return np.real((phases * coeff) @ vecs.T)


@dataclass(frozen=True)
class LoopSpec:
    """A loop on S^4, either a generator orbit or an explicit list of samples."""

    kind: str
    S: QMatrix | None = None
    base: S4Point | None = None
    t_end: float = TWO_PI
    points: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def orbit(cls, S: QMatrix, base, t_end: float = TWO_PI) -> "LoopSpec":
        if not S.is_skew_hermitian(1e-12):
            raise ValueError("generator must be quaternion skew-Hermitian")
        return cls("generator_orbit", S=S, base=as_point(base), t_end=float(t_end))

    @classmethod
    def sampled(cls, points) -> "LoopSpec":
        pts = points_array(points)
        if np.linalg.norm(pts[-1] - pts[0]) > CLOSURE_TOL:
            raise LoopNotClosed("sampled loop: last point differs from the first")
        return cls("sampled", points=pts, base=S4Point(pts[0]), t_end=float(len(pts) - 1))

    @property
    def alpha(self) -> np.ndarray:
        return generator_coefficients(self.S)

    def sample(self, n_steps: int = DEFAULT_STEPS) -> np.ndarray:
        """``(n_steps + 1, 5)`` points along the loop (sampled loops ignore ``n_steps``)."""
        if self.kind == "sampled":
            return self.points
        t = np.linspace(0.0, self.t_end, n_steps + 1)
        return orbit_points(self.alpha, self.base, t)


# ---------------------------------------------------------------------------
# numeric transport
# ---------------------------------------------------------------------------

def transport_sampled(points, u0=None, closed: bool = True) -> HolonomyResult:
    """Parallel transport along sampled points by chaining section overlaps.

    With section representatives ``s_n`` over the points, the phase evolves as
    ``phi_n = normalize(<s_n|s_{n-1}>) phi_{n-1}``; the transported spinor is
    ``s_N phi_N g`` where ``u0 = s_0 g``.  For a closed loop the result is the
    anholonomy ``q`` with ``final = u0 q``.  For an open path (``closed=False``)
    ``q`` is the phase relative to the section at the end point.
    """
    pts = points_array(points)
    norms = np.linalg.norm(pts, axis=1)
    if np.max(np.abs(norms - 1.0)) > 1e-9:
        raise ValueError("all points must lie on the unit sphere S^4")
    if closed and np.linalg.norm(pts[-1] - pts[0]) > CLOSURE_TOL:
        raise LoopNotClosed(
            f"loop end differs from its start by {np.linalg.norm(pts[-1] - pts[0]):.3e}"
        )
    if np.any(1.0 + pts[:, 0] < CHART_POLE_TOL):
        raise PoleCrossing("path reaches the south pole, outside the section's chart")

    secs = section_array(pts)
    if u0 is None:
        u0_arr = secs[0]
    else:
        u0_arr = as_spinor_array(u0)
        if np.linalg.norm(hopf_map_array(u0_arr) - pts[0]) > 1e-9:
            raise FiberMismatch("start spinor does not lie over the first point")
    g = inner_array(secs[0], u0_arr)

    steps = qnormalize_array(inner_array(secs[1:], secs[:-1]))
    phase = qmul_array(ordered_product(steps), g)
    final = qmul_array(secs[-1], phase)
    if closed:
        overlap = inner_array(u0_arr, final)
        residual = abs(1.0 - float(np.linalg.norm(overlap)))
        q = UnitQuaternion.normalize(overlap)
    else:
        residual = 0.0
        q = UnitQuaternion.normalize(phase)
    return HolonomyResult(q=q, n_steps=len(pts) - 1, residual=residual, final_state=QSpinor.from_array(final))


def transport_loop(loop: LoopSpec, u0=None, n_steps: int = DEFAULT_STEPS) -> HolonomyResult:
    return transport_sampled(loop.sample(n_steps), u0)


# ---------------------------------------------------------------------------
# closed form for generator orbits
# ---------------------------------------------------------------------------

def _sin_over(x_norm: float, t: float) -> float:
    """``sin(t n) / n`` with its small-argument limit."""
    x = t * x_norm
    if abs(x) < 1e-6:
        return t * (1.0 - x * x / 6.0)
    return float(np.sin(x) / x_norm)


def holonomy_closed_form(P, S: QMatrix, t: float = TWO_PI, u=None):
    """Transport along the orbit ``e^{tS} P e^{-tS}`` in closed form.

    Returns the 2x2 quaternionic matrix
    ``e^{tS} (cos(t|PSP|) I - sin(t|PSP|)/|PSP| PS)`` together with a
    :class:`HolonomyResult` for the start spinor ``u`` (by default the
    standard section over ``P``).
    """
    if isinstance(P, S4Point) or not isinstance(P, Projector):
        P = projector_of(as_point(P))
    if not S.is_skew_hermitian(1e-12):
        raise ValueError("generator must be quaternion skew-Hermitian")
    E = S.expm(t)
    Pm = P.matrix
    moved = E @ Pm @ E.H
    if not moved.allclose(Pm, PROJECTOR_CLOSURE_TOL):
        raise LoopNotClosed("orbit does not return to the start projector")

    PS = Pm @ S
    n = (PS @ Pm).norm()
    M = E @ (QMatrix.identity() * np.cos(t * n) - PS * _sin_over(n, t))

    u_arr = section_of_point(P.point).array if u is None else as_spinor_array(u)
    final = M @ u_arr
    overlap = inner_array(u_arr, final)
    residual = abs(1.0 - float(np.linalg.norm(overlap)))
    result = HolonomyResult(
        q=UnitQuaternion.normalize(overlap),
        n_steps=0,
        residual=residual,
        final_state=QSpinor.from_array(final / np.linalg.norm(final)),
    )
    return M, result


# ---------------------------------------------------------------------------
# the C_kappa family
# ---------------------------------------------------------------------------

BELL_POINT = S4Point([0.0, 0.0, 0.0, 1.0, 0.0])


def c_kappa_generator(kappa: float) -> QMatrix:
    """``S = Gamma_1 (cos(kappa) Gamma_3 - sin(kappa) Gamma_4) / 2``."""
    g = gamma_set()
    return (g.g1 @ (g.g3 * np.cos(kappa) - g.g4 * np.sin(kappa))) * 0.5


def c_kappa_path(t, kappa: float) -> np.ndarray:
    """Closed-form points of the loop, shape ``(..., 5)``."""
    t = np.asarray(t, dtype=float)
    s2 = np.sin(t / 2) ** 2
    return np.stack(
        [
            np.zeros_like(t),
            np.sin(t) * np.cos(kappa),
            np.zeros_like(t),
            np.cos(t / 2) ** 2 - s2 * np.cos(2 * kappa),
            s2 * np.sin(2 * kappa),
        ],
        axis=-1,
    )


def c_kappa_concurrence(t, kappa: float):
    t = np.asarray(t, dtype=float)
    return np.sqrt(0.5 * (1.0 + np.cos(t) ** 2 - np.sin(t) ** 2 * np.cos(2 * kappa)))


def c_kappa_holonomy(kappa: float) -> UnitQuaternion:
    """``-cos(pi sin(kappa)) - sin(pi sin(kappa)) k``."""
    a = np.pi * np.sin(kappa)
    return UnitQuaternion(-np.cos(a), 0.0, 0.0, -np.sin(a))


@dataclass(frozen=True)
class CKappaLoop:
    kappa: float
    S: QMatrix
    loop: LoopSpec
    square_residual: float
    period_residual: float

    def path(self, t) -> np.ndarray:
        return c_kappa_path(t, self.kappa)

    def concurrence(self, t):
        return c_kappa_concurrence(t, self.kappa)

    def holonomy(self) -> UnitQuaternion:
        return c_kappa_holonomy(self.kappa)


def loop_c_kappa(kappa: float) -> CKappaLoop:
    """The loop family through the Bell point generated by ``S(kappa)``.

    Diagnostics: ``square_residual = |4 S^2 + I|`` and
    ``period_residual = |e^{2 pi S} + I|``, both zero in exact arithmetic.
    """
    if not 0.0 <= kappa <= TWO_PI:
        raise ValueError("kappa must lie in [0, 2 pi]")
    S = c_kappa_generator(kappa)
    ident = QMatrix.identity()
    square_residual = ((S @ S) * 4.0 + ident).norm()
    period_residual = (S.expm(TWO_PI) + ident).norm()
    return CKappaLoop(
        kappa=float(kappa),
        S=S,
        loop=LoopSpec.orbit(S, BELL_POINT, TWO_PI),
        square_residual=float(square_residual),
        period_residual=float(period_residual),
    )


# ---------------------------------------------------------------------------
# other generators and test loops
# ---------------------------------------------------------------------------

def so3_generators() -> tuple[QMatrix, QMatrix, QMatrix]:
    """Skew-Hermitian generators of the SO(3) action on unit quadrupoles."""
    g0, g1, g2, g3, g4 = gamma_set()
    r3 = np.sqrt(3.0)
    J1 = (g4 @ g0 * r3 + g3 @ g2 + g4 @ g1) * 0.5
    J2 = (g3 @ g0 * r3 + g1 @ g3 + g4 @ g2) * 0.5
    J3 = g3 @ g4 * 0.5 + g2 @ g1
    return J1, J2, J3


def closed_orbit_alpha(rng: np.random.Generator, max_frequency: int = 3) -> np.ndarray:
    """Random antisymmetric ``alpha`` whose rotation ``expm(t alpha)`` is 2 pi periodic.

    ``alpha = O diag(n1 J, n2 J, 0) O^T`` with integer ``n1, n2`` and a random
    rotation ``O``; ``J`` is the 2x2 rotation generator.
    """
    n1, n2 = rng.integers(1, max_frequency + 1, size=2)
    Jm = np.array([[0.0, -1.0], [1.0, 0.0]])
    block = np.zeros((5, 5))
    block[:2, :2] = n1 * Jm
    block[2:4, 2:4] = n2 * Jm
    O = special_ortho_group.rvs(5, random_state=rng)
    return O @ block @ O.T


def latitude_points(theta: float, n_steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Separable loop ``z = sin(Theta) e^{i t}, xi0 = cos(Theta)``, ``t`` in ``[0, 2 pi]``."""
    t = np.linspace(0.0, TWO_PI, n_steps + 1)
    pts = np.zeros((n_steps + 1, 5))
    pts[:, 0] = np.cos(theta)
    pts[:, 1] = np.sin(theta) * np.cos(t)
    pts[:, 2] = np.sin(theta) * np.sin(t)
    pts[-1] = pts[0]
    return pts


def entangled_circle_points(n_steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Maximally entangled loop ``w = e^{i chi}``, one traversal."""
    t = np.linspace(0.0, TWO_PI, n_steps + 1)
    pts = np.zeros((n_steps + 1, 5))
    pts[:, 3] = np.cos(t)
    pts[:, 4] = np.sin(t)
    pts[-1] = pts[0]
    return pts
