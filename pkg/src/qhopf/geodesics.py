"""Metric, horizontal geodesics, nearest separable states and the Schmidt frame by transport.

The distance between two points of HP^1 = S^4 is read off the quaternionic
overlap, ``cos^2(Delta/2) = |<v|u>|^2``, and in stereographic coordinates the
metric is ``dl^2 = 4 |dx|^2 / (1 + |x|^2)^2`` (the round unit S^4).  The
separable states form the two-sphere ``w = 0``; the one nearest to an
entangled state is the ``lambda_+`` Schmidt vector of the first qubit, and
parallel transport along the connecting geodesic hands over the Schmidt
vector of the second qubit as a quaternionic phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Degenerate, DegenerateEndpoints, TrivialSchmidtAxis
from .hopf import S4Point, hopf_map, hopf_map_array, section_of_point, stereo
from .quaternion import (
    QSpinor,
    Quaternion,
    UnitQuaternion,
    as_spinor_array,
    inner_array,
    qmul_array,
    qnorm_array,
    spinor_inner,
)
from .state import SchmidtFrame, TwoQubitState, spinor_of_state

ENDPOINT_TOL = 1e-10


def _as_spinor(x) -> QSpinor:
    if isinstance(x, TwoQubitState):
        return spinor_of_state(x)
    if isinstance(x, QSpinor):
        return x
    return QSpinor.from_array(x)


@dataclass(frozen=True)
class DistanceResult:
    delta: float
    overlap: float


def geodesic_distance(v, u) -> DistanceResult:
    """Geodesic distance between the points of S^4 under two spinors."""
    n = min(1.0, float(qnorm_array(inner_array(as_spinor_array(v), as_spinor_array(u)))))
    return DistanceResult(delta=float(2.0 * np.arccos(n)), overlap=n * n)


# ---------------------------------------------------------------------------
# line element
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LineElement:
    """Squared length of a small step ``u -> u + du`` evaluated four ways.

    ``overlap_form`` is ``4 (1 - |<u + du|u>|^2)``, ``projector_form`` is
    ``4 ||(1 - |u><u|) du||^2``, ``stereo_form`` uses the chart metric and
    ``polar_form`` the (R, chi, Bloch direction) coordinates.  All agree up to
    terms of third order in the step.
    """

    overlap_form: float
    projector_form: float
    stereo_form: float
    polar_form: float

    def values(self) -> np.ndarray:
        return np.array([self.overlap_form, self.projector_form, self.stereo_form, self.polar_form])

    def spread(self) -> float:
        vals = self.values()
        return float(np.max(vals) - np.min(vals))


def _wrap(angle):
    return (angle + np.pi) % (2.0 * np.pi) - np.pi


def polar_line_element(xi_a, xi_b) -> float:
    """``dR^2/(1-R^2) + (1-R^2) dchi^2 + R^2 dOmega`` between two nearby points.

    Coefficients are taken at the midpoint.  Where ``chi`` or the Bloch
    direction is undefined at an end point (concurrence or ``R`` zero) the
    corresponding angular term is replaced by its flat-space equivalent.
    """
    a, b = np.asarray(xi_a, float), np.asarray(xi_b, float)
    ra, rb = a[:3], b[:3]
    Ra, Rb = np.linalg.norm(ra), np.linalg.norm(rb)
    wa, wb = complex(a[3], a[4]), complex(b[3], b[4])
    Ca, Cb = abs(wa), abs(wb)
    Rm, Cm = 0.5 * (Ra + Rb), 0.5 * (Ca + Cb)
    dR, dC = Rb - Ra, Cb - Ca

    radial = dR**2 / (1.0 - Rm**2) if Rm < Cm else dC**2 / (1.0 - Cm**2)
    if min(Ca, Cb) > 1e-12:
        chi_term = Cm**2 * _wrap(np.angle(wb) - np.angle(wa)) ** 2
    else:
        chi_term = abs(wb - wa) ** 2 - dC**2
    if min(Ra, Rb) > 1e-12:
        omega_term = Rm**2 * float(np.sum((rb / Rb - ra / Ra) ** 2))
    else:
        omega_term = float(np.sum((rb - ra) ** 2)) - dR**2
    return float(radial + chi_term + omega_term)


def line_element_check(u, du) -> LineElement:
    """Evaluate the line element of the step ``u -> normalize(u + du)``."""
    u = as_spinor_array(u)
    du = np.asarray(du, dtype=float).reshape(2, 4)
    u2 = u + du
    u2 = u2 / np.linalg.norm(u2)

    overlap = 4.0 * (1.0 - float(np.sum(inner_array(u2, u) ** 2)))
    horizontal = du - qmul_array(u, inner_array(u, du))
    projector = 4.0 * float(np.sum(horizontal**2))

    xi_a, xi_b = hopf_map_array(u), hopf_map_array(u2)
    xa = stereo(S4Point(xi_a)).x.array
    xb = stereo(S4Point(xi_b)).x.array
    xm2 = float(np.sum((0.5 * (xa + xb)) ** 2))
    stereo_form = 4.0 * float(np.sum((xb - xa) ** 2)) / (1.0 + xm2) ** 2

    return LineElement(overlap, projector, stereo_form, polar_line_element(xi_a, xi_b))


# ---------------------------------------------------------------------------
# horizontal geodesics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeodesicSpec:
    """Horizontal great circle ``u(s) = cos(s/2) phi1 + sin(s/2) phi2``."""

    phi1: QSpinor
    phi2: QSpinor
    delta: float


def geodesic_between(v, u) -> GeodesicSpec:
    """Horizontal geodesic from ``v`` to the fiber over ``u``.

    It reaches ``u' = u <u|v>/|<u|v>|`` at ``s = delta``.
    """
    v, u = _as_spinor(v), _as_spinor(u)
    va, ua = v.array, u.array
    o = inner_array(ua, va)
    n = float(qnorm_array(o))
    delta = 2.0 * np.arccos(min(1.0, n))
    if delta < ENDPOINT_TOL or delta > np.pi - ENDPOINT_TOL:
        raise DegenerateEndpoints(f"geodesic undefined for distance {delta:.3e}")
    u_prime = qmul_array(ua, o / n)
    phi2 = (u_prime - np.cos(delta / 2) * va) / np.sin(delta / 2)
    return GeodesicSpec(phi1=v, phi2=QSpinor.from_array(phi2), delta=float(delta))


def geodesic_point(g: GeodesicSpec, s: float) -> QSpinor:
    return QSpinor.from_array(np.cos(s / 2) * g.phi1.array + np.sin(s / 2) * g.phi2.array)


def geodesic_velocity(g: GeodesicSpec, s: float) -> np.ndarray:
    """Tangent ``du/ds`` as a ``(2, 4)`` array."""
    return 0.5 * (-np.sin(s / 2) * g.phi1.array + np.cos(s / 2) * g.phi2.array)


# ---------------------------------------------------------------------------
# nearest separable state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NearestSeparable:
    """Separable state ``v = (cos(sigma/2), sin(sigma/2) e^{i phi})`` nearest to a query."""

    sigma: float
    phi: float
    v: QSpinor
    delta: float
    overlap: float
    degenerate: bool


def separable_spinor(sigma: float, phi: float) -> QSpinor:
    return QSpinor(
        Quaternion(np.cos(sigma / 2)),
        Quaternion.from_pair(np.sin(sigma / 2) * np.exp(1j * phi)),
    )


def separable_overlap(sigma, phi, xi):
    """``|<v|u>|^2`` for ``v = v(sigma, phi)`` and the point ``xi`` of ``u``.

    ``cos^2(s/2) cos^2(t/2) + sin^2(s/2) sin^2(t/2) + sin(s) Re(e^{-i phi} z) / 2``
    with ``cos(t) = xi0``.  Broadcasts over ``sigma`` and ``phi``.
    """
    xi = np.asarray(xi, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c2 = np.cos(sigma / 2) ** 2
    s2 = np.sin(sigma / 2) ** 2
    re_z = np.cos(phi) * xi[1] + np.sin(phi) * xi[2]
    return c2 * 0.5 * (1 + xi[0]) + s2 * 0.5 * (1 - xi[0]) + 0.5 * np.sin(sigma) * re_z


def nearest_separable(s) -> NearestSeparable:
    """Closest point of the separable sphere ``w = 0`` to the query state.

    ``tan(sigma) = |z| / xi0`` with ``sigma`` in the hemisphere of the query
    and ``phi = arg z``.  The overlap equals ``lambda_+``.
    """
    p = hopf_map(_as_spinor(s))
    xi = p.xi
    z = p.z
    R = p.R
    degenerate = p.concurrence > 1.0 - 1e-9
    sigma = float(np.arctan2(abs(z), xi[0])) if R > 1e-12 else 0.0
    phi = float(np.angle(z)) if abs(z) >= 1e-12 else 0.0
    overlap = float(np.clip(separable_overlap(sigma, phi, xi), 0.0, 1.0))
    delta = float(2.0 * np.arccos(np.sqrt(overlap)))
    return NearestSeparable(
        sigma=sigma,
        phi=phi,
        v=separable_spinor(sigma, phi),
        delta=delta,
        overlap=overlap,
        degenerate=bool(degenerate),
    )


def nearest_separable_grid(s, n: int = 400) -> tuple[float, float, float]:
    """Brute-force maximum of the separable overlap on an ``n x n`` grid.

    ``sigma`` samples cell centres of ``(0, pi)`` and ``phi`` the points
    ``2 pi k / n``.  Ties resolve to the lexicographically first ``(sigma, phi)``.
    Returns ``(sigma, phi, overlap)``.
    """
    xi = hopf_map(_as_spinor(s)).xi
    sig = np.pi * (np.arange(n) + 0.5) / n
    ph = 2.0 * np.pi * np.arange(n) / n
    vals = separable_overlap(sig[:, None], ph[None, :], xi)
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    return float(sig[i]), float(ph[j]), float(vals[i, j])


# ---------------------------------------------------------------------------
# Schmidt decomposition by parallel transport
# ---------------------------------------------------------------------------

def _transport_to_fiber(u: QSpinor, target: QSpinor) -> UnitQuaternion:
    """Transport ``u`` horizontally to the fiber of ``target``; return the phase there."""
    g = geodesic_between(u, target)
    end = geodesic_point(g, g.delta)
    return UnitQuaternion.normalize(spinor_inner(target, end))


def cos_half_tau_closed_form(sigma: float, z: complex, w: complex, xi0: float) -> float:
    """``cos(tau/2)`` of the section-gauge phase ``Q`` in terms of ``sigma, theta, z, w``."""
    theta = np.arccos(np.clip(xi0, -1.0, 1.0))
    r2 = abs(w / z) ** 2
    ch = np.sqrt(0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - abs(w) ** 2))))
    return float(
        (np.cos(sigma / 2) * np.cos(theta / 2) + np.sin(sigma / 2) * np.sin(theta / 2) / np.sqrt(1 + r2))
        / ch
    )


def schmidt_transport(s) -> SchmidtFrame:
    """Schmidt decomposition read off the geometry of the Hopf bundle.

    The first-qubit vectors come from the nearest separable state ``v`` and
    its antipode ``v_perp``.  The second-qubit vectors are the quaternionic
    phases ``Q`` and ``P`` picked up when the state is carried horizontally
    along the geodesics to the fibers over ``v`` and ``v_perp``; read as
    ``Q = alpha + beta j`` they give the columns ``(alpha, beta)`` of ``V``.
    """
    u = _as_spinor(s)
    p = hopf_map(u)
    conc = p.concurrence
    if conc > 1.0 - 1e-9:
        raise Degenerate("maximally entangled state: Schmidt coefficients coincide")
    if conc < 1e-12:
        raise Degenerate("separable state: the second Schmidt coefficient vanishes")
    if abs(p.z) <= 1e-12:
        raise TrivialSchmidtAxis("z = 0: the Schmidt axis of the first qubit is trivial")

    ns = nearest_separable(u)
    sigma, phi = ns.sigma, ns.phi
    v = ns.v
    v_perp = QSpinor(
        Quaternion.from_pair(-np.sin(sigma / 2) * np.exp(-1j * phi)),
        Quaternion(np.cos(sigma / 2)),
    )
    Q = _transport_to_fiber(u, v)
    P = _transport_to_fiber(u, v_perp)

    alpha, beta = Q.to_pair()
    tau = float(2.0 * np.arctan2(abs(beta), abs(alpha)))
    epsilon = float(np.angle(beta / alpha)) if abs(beta) > 1e-15 else 0.0

    U = np.array(
        [
            [np.cos(sigma / 2), -np.sin(sigma / 2) * np.exp(-1j * phi)],
            [np.sin(sigma / 2) * np.exp(1j * phi), np.cos(sigma / 2)],
        ]
    )
    V = np.array([Q.to_pair(), P.to_pair()]).T
    D = np.array([np.cos(ns.delta / 2), np.sin(ns.delta / 2)])
    return SchmidtFrame(
        sigma=sigma,
        phi=phi,
        tau=tau,
        epsilon=epsilon,
        U=U,
        V=V,
        D=D,
        Q=Q,
        P_phase=P,
        degenerate=False,
    )


def section_gauge_phase(s) -> UnitQuaternion:
    """Phase ``Q`` computed for the ``b = 0`` section representative of the state's point."""
    u = _as_spinor(s)
    sec = section_of_point(hopf_map(u))
    return schmidt_transport(sec).Q
