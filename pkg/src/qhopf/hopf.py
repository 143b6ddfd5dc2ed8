"""The quaternionic Hopf fibration S^7 -> S^4, its charts, sections and projectors.

A normalized spinor ``u = (u0, u1)`` projects to the unit 5-vector

    xi0 = |u0|^2 - |u1|^2,    xi1 + xi2 i + xi3 j + xi4 k = 2 u1 conj(u0),

which is invariant under ``u -> u q`` for unit ``q``.  For a two-qubit state
``z = xi1 + i xi2`` and ``w = xi3 + i xi4`` are the invariants of
:func:`qhopf.state.invariants`, so ``|w|`` is the concurrence and
``(xi0, xi1, xi2)`` is the Bloch vector of the first qubit.

The standard section lives on the chart ``u0 != 0`` (everything except the
south pole ``xi0 = -1``):

    u = (cos(theta/2), sin(theta/2) p),   cos(theta) = xi0,   p = (z + w j)/|z + w j|.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import AtProjectionPole, NotNormalized, OutOfDisk, UndefinedPhase, ZOnAxis
from .quaternion import (
    QMatrix,
    QSpinor,
    Quaternion,
    UnitQuaternion,
    as_spinor_array,
    dyad,
    qconj_array,
    qmul_array,
)
from .state import TwoQubitState, spinor_of_state

POLE_TOL = 1e-12
NORTH, SOUTH = "north", "south"


def _check_branch(branch: str) -> str:
    if branch not in (NORTH, SOUTH):
        raise ValueError(f"branch must be 'north' or 'south', got {branch!r}")
    return branch


@dataclass(frozen=True)
class S4Point:
    """Unit 5-vector ``(xi0, xi1, xi2, xi3, xi4)``.

    Inputs within ``1e-9`` of unit norm are renormalized.
    """

    xi: np.ndarray

    def __post_init__(self):
        xi = np.array(self.xi, dtype=float).reshape(-1)
        if xi.shape != (5,):
            raise ValueError(f"expected 5 coordinates, got {xi.size}")
        n = np.linalg.norm(xi)
        if abs(n - 1.0) > 1e-9:
            raise NotNormalized(f"point of norm {n:.12g} is not on S^4")
        xi = xi / n
        xi.flags.writeable = False
        object.__setattr__(self, "xi", xi)

    @classmethod
    def from_zw(cls, z: complex, w: complex, branch: str = NORTH) -> "S4Point":
        r2 = abs(z) ** 2 + abs(w) ** 2
        if r2 > 1 + 1e-12:
            raise OutOfDisk(f"|z|^2 + |w|^2 = {r2:.12g} exceeds 1")
        xi0 = np.sqrt(max(0.0, 1.0 - r2))
        if _check_branch(branch) == SOUTH:
            xi0 = -xi0
        return cls([xi0, z.real, z.imag, w.real, w.imag])

    def __iter__(self):
        return iter(self.xi)

    def __eq__(self, other):
        return isinstance(other, S4Point) and np.array_equal(self.xi, other.xi)

    def __hash__(self):
        return hash(self.xi.tobytes())

    @property
    def z(self) -> complex:
        return complex(self.xi[1], self.xi[2])

    @property
    def w(self) -> complex:
        return complex(self.xi[3], self.xi[4])

    @property
    def bloch(self) -> np.ndarray:
        """``(xi0, xi1, xi2)``, the Bloch vector of the first qubit."""
        return self.xi[:3].copy()

    @property
    def R(self) -> float:
        return float(np.linalg.norm(self.xi[:3]))

    @property
    def concurrence(self) -> float:
        return float(min(1.0, np.hypot(self.xi[3], self.xi[4])))

    @property
    def chi(self) -> float:
        """Phase of ``w``; zero by convention for separable points."""
        return float(np.angle(self.w)) if self.concurrence >= 1e-12 else 0.0

    def as_quaternion(self) -> Quaternion:
        """The quaternion ``z + w j``."""
        return Quaternion(*self.xi[1:])

    def distance(self, other: "S4Point") -> float:
        """Chordal distance in R^5."""
        return float(np.linalg.norm(self.xi - other.xi))


def as_point(p) -> S4Point:
    return p if isinstance(p, S4Point) else S4Point(p)


def points_array(points) -> np.ndarray:
    """Stack S4Points (or raw 5-vectors) into an ``(n, 5)`` array."""
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float)
    else:
        arr = np.array([p.xi if isinstance(p, S4Point) else p for p in points], dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 5:
        raise ValueError(f"expected an (n, 5) array of points, got shape {arr.shape}")
    return arr


# ---------------------------------------------------------------------------
# the projection
# ---------------------------------------------------------------------------

def hopf_map_array(u) -> np.ndarray:
    """Vectorized projection of spinor arrays ``(..., 2, 4) -> (..., 5)``."""
    u = as_spinor_array(u)
    u0, u1 = u[..., 0, :], u[..., 1, :]
    xi0 = np.sum(u0 * u0, axis=-1) - np.sum(u1 * u1, axis=-1)
    xi = 2.0 * qmul_array(u1, qconj_array(u0))
    return np.concatenate([xi0[..., None], xi], axis=-1)


def hopf_map(u: QSpinor) -> S4Point:
    return S4Point(hopf_map_array(u))


def hopf_map_swapped(s: TwoQubitState) -> S4Point:
    """Projection with the roles of the two qubits exchanged (``b <-> c``).

    Its ``(eta0, eta1, eta2)`` is the Bloch vector of the second qubit and
    its quaternion part is ``zeta + w j``.
    """
    swapped = TwoQubitState(s.a, s.c, s.b, s.d)
    return hopf_map(spinor_of_state(swapped))


# ---------------------------------------------------------------------------
# stereographic chart
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StereoCoord:
    """Chart coordinate.

    On the ``north`` branch ``x = xi / (1 + xi0)`` (projection from the south
    pole, ``x = u1 u0^{-1}``).  On the ``south`` branch ``x = conj(xi) / (1 - xi0)``,
    the coordinate ``u0 u1^{-1}`` of the chart ``u1 != 0``; it equals the
    inverse of the north coordinate where both exist.
    """

    x: Quaternion
    branch: str = NORTH


def stereo(p: S4Point, branch: str = NORTH) -> StereoCoord:
    p = as_point(p)
    xi0 = p.xi[0]
    q = p.as_quaternion()
    if _check_branch(branch) == NORTH:
        if 1.0 + xi0 <= POLE_TOL:
            raise AtProjectionPole("the south pole has no north-chart coordinate")
        return StereoCoord(q / (1.0 + xi0), NORTH)
    if 1.0 - xi0 <= POLE_TOL:
        raise AtProjectionPole("the north pole has no south-chart coordinate")
    return StereoCoord(q.conj() / (1.0 - xi0), SOUTH)


def stereo_inv(c: StereoCoord) -> S4Point:
    x = c.x
    n2 = x.norm2()
    xi0 = (1.0 - n2) / (1.0 + n2)
    vec = 2.0 * x.array / (1.0 + n2)
    if c.branch == SOUTH:
        xi0 = -xi0
        vec = qconj_array(vec)
    return S4Point(np.concatenate([[xi0], vec]))


# ---------------------------------------------------------------------------
# sections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SectionParams:
    """Decomposition ``u = (cos(theta/2), sin(theta/2) p) q_fiber`` on the north chart."""

    theta: float
    p: UnitQuaternion | None
    q_fiber: UnitQuaternion


def section_array(xi) -> np.ndarray:
    """North-chart section over points ``(..., 5) -> (..., 2, 4)``.

    Uses ``cos(theta/2) = sqrt((1 + xi0)/2)`` directly, so the section is
    smooth up to (but excluding) the south pole.  At the north pole the
    undefined phase ``p`` is irrelevant and set to 1.
    """
    xi = np.asarray(xi, dtype=float)
    xi0 = np.clip(xi[..., 0], -1.0, 1.0)
    vec = xi[..., 1:]
    rho = np.linalg.norm(vec, axis=-1)
    safe = np.where(rho > 0.0, rho, 1.0)
    p = np.where((rho > 0.0)[..., None], vec / safe[..., None], np.array([1.0, 0.0, 0.0, 0.0]))
    out = np.zeros(xi.shape[:-1] + (2, 4))
    out[..., 0, 0] = np.sqrt(0.5 * (1.0 + xi0))
    out[..., 1, :] = np.sqrt(0.5 * (1.0 - xi0))[..., None] * p
    return out


def section_of_point(p: S4Point) -> QSpinor:
    """Standard north-chart representative over ``p``."""
    p = as_point(p)
    if 1.0 + p.xi[0] <= POLE_TOL:
        raise AtProjectionPole("the south pole is outside the north chart")
    return QSpinor.from_array(section_array(p.xi))


def section_at(z: complex, w: complex, branch: str = NORTH) -> QSpinor:
    """Section over the point with coordinates ``(z, w)``.

    ``branch`` selects the hemisphere, i.e. the sign of ``xi0 = cos(theta)``.
    The first component is real, so the associated state has ``b = 0``.
    """
    r2 = abs(z) ** 2 + abs(w) ** 2
    if r2 > 1.0 + 1e-12:
        raise OutOfDisk(f"|z|^2 + |w|^2 = {r2:.12g} exceeds 1")
    if _check_branch(branch) == SOUTH and r2 == 0.0:
        raise UndefinedPhase("south pole: the quaternionic phase of the section is undefined")
    return section_of_point(S4Point.from_zw(complex(z), complex(w), branch))


def section_params(u: QSpinor) -> SectionParams:
    """Split a spinor into polar angle, chart phase ``p`` and fiber phase ``q``."""
    n0, n1 = u.u0.norm(), u.u1.norm()
    if n0 <= POLE_TOL:
        raise AtProjectionPole("u0 = 0 lies outside the north chart")
    theta = 2.0 * np.arctan2(n1, n0)
    q = UnitQuaternion.normalize(u.u0)
    p = None if n1 <= POLE_TOL else UnitQuaternion.normalize(u.u1 * u.u0.inverse())
    return SectionParams(float(theta), p, q)


def zeta_of_zw(z: complex, w: complex, branch: str = NORTH) -> complex:
    """``zeta`` of the ``b = 0`` section state, written through ``r = w/z``.

    ``zeta = (1 - xi0) r / (1 + |r|^2) = 2 sin^2(theta/2) r / (1 + |r|^2)``.
    """
    z, w = complex(z), complex(w)
    if abs(z) <= 1e-14:
        raise ZOnAxis("zeta in terms of r = w/z needs z != 0")
    r2 = abs(z) ** 2 + abs(w) ** 2
    if r2 > 1.0 + 1e-12:
        raise OutOfDisk(f"|z|^2 + |w|^2 = {r2:.12g} exceeds 1")
    xi0 = np.sqrt(max(0.0, 1.0 - r2))
    if _check_branch(branch) == SOUTH:
        xi0 = -xi0
    r = w / z
    return complex((1.0 - xi0) * r / (1.0 + abs(r) ** 2))


# ---------------------------------------------------------------------------
# Gamma matrices and projectors
# ---------------------------------------------------------------------------

class GammaSet(NamedTuple):
    g0: QMatrix
    g1: QMatrix
    g2: QMatrix
    g3: QMatrix
    g4: QMatrix


@lru_cache(maxsize=None)
def gamma_set() -> GammaSet:
    """Quaternion-Hermitian Clifford generators.

    ``G0 = diag(1, -1)``, ``G1 = [[0, 1], [1, 0]]`` and
    ``G_a = [[0, -e], [e, 0]]`` for ``e = i, j, k`` (a = 2, 3, 4).
    """
    one, i, j, k = Quaternion(1), Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)
    mats = [QMatrix.from_entries([[one, 0], [0, -one]]), QMatrix.from_entries([[0, one], [one, 0]])]
    mats += [QMatrix.from_entries([[0, -e], [e, 0]]) for e in (i, j, k)]
    return GammaSet(*mats)


@lru_cache(maxsize=None)
def _gamma_complex() -> np.ndarray:
    return np.array([g.to_complex() for g in gamma_set()])


def gamma_complex() -> np.ndarray:
    """The five Gamma matrices on the complex codec, shape ``(5, 4, 4)``."""
    return _gamma_complex().copy()


def gamma_dot(xi) -> QMatrix:
    """``sum_mu Gamma_mu xi_mu``."""
    xi = as_point(xi).xi if isinstance(xi, S4Point) else np.asarray(xi, dtype=float)
    data = np.tensordot(xi, np.array([g.data for g in gamma_set()]), 1)
    return QMatrix(data)


@lru_cache(maxsize=None)
def spin_basis() -> dict[tuple[int, int], QMatrix]:
    """``S_mn = [Gamma_m, Gamma_n] / 4`` for ``m < n``."""
    g = gamma_set()
    return {
        (m, n): (g[m] @ g[n] - g[n] @ g[m]) * 0.25 for m in range(5) for n in range(m + 1, 5)
    }


class Projector:
    """Rank-one quaternion-Hermitian projector ``P = |u><u| = (I + Gamma . xi)/2``."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: QMatrix, atol: float = 1e-10):
        if not matrix.is_hermitian(atol):
            raise ValueError("projector must be quaternion-Hermitian")
        if not (matrix @ matrix).allclose(matrix, atol):
            raise ValueError("projector must be idempotent")
        if abs(matrix.trace().real - 1.0) > atol:
            raise ValueError("projector must have unit real trace (rank one)")
        self.matrix = matrix

    @classmethod
    def from_spinor(cls, u) -> "Projector":
        return cls(dyad(u))

    @property
    def point(self) -> S4Point:
        """``xi_mu = Re Tr(P Gamma_mu)``."""
        return S4Point([(self.matrix @ g).trace().real for g in gamma_set()])

    def __matmul__(self, other):
        return self.matrix @ other

    def __repr__(self):
        return f"Projector(xi={np.round(self.point.xi, 12).tolist()})"


def projector_of(p: S4Point) -> Projector:
    xi = as_point(p).xi
    return Projector((QMatrix.identity() + gamma_dot(xi)) * 0.5)
