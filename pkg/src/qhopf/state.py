"""Two-qubit pure states, entanglement invariants and the SVD Schmidt frame.

Amplitudes follow the convention ``|psi> = (a|00> + b|01> + c|10> + d|11>) / sqrt(2)``,
so a normalized state has ``|a|^2 + |b|^2 + |c|^2 + |d|^2 = 2``.  The factor
``sqrt(2)`` is confined to :func:`state_from_unit_amplitudes` and
:attr:`TwoQubitState.unit_amplitudes`; everything else uses ``a..d`` directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from .errors import NotDensityMatrix, NotNormalized, NotUnitary
from .quaternion import QSpinor, Quaternion, UnitQuaternion

SQRT2 = np.sqrt(2.0)
NORM_TOL = 1e-9
DEGENERATE_TOL = 1e-10


@dataclass(frozen=True)
class TwoQubitState:
    """Pure two-qubit state with amplitudes scaled so that their squares sum to 2."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        amps = np.array([self.a, self.b, self.c, self.d], dtype=complex)
        total = float(np.sum(np.abs(amps) ** 2))
        if abs(total - 2.0) > 2 * NORM_TOL:
            raise NotNormalized(f"|a|^2+|b|^2+|c|^2+|d|^2 = {total:.12g}, expected 2")
        amps *= np.sqrt(2.0 / total)
        for name, value in zip("abcd", amps):
            object.__setattr__(self, name, complex(value))

    @classmethod
    def from_matrix(cls, C) -> "TwoQubitState":
        """From the amplitude matrix ``C = [[a, b], [c, d]]``."""
        C = np.asarray(C, dtype=complex)
        return cls(C[0, 0], C[0, 1], C[1, 0], C[1, 1])

    @property
    def C(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def unit_amplitudes(self) -> np.ndarray:
        """Amplitudes of ``|00>, |01>, |10>, |11>`` normalized to one."""
        return np.array([self.a, self.b, self.c, self.d]) / SQRT2


@dataclass(frozen=True)
class EntanglementInvariants:
    z: complex
    w: complex
    zeta: complex
    concurrence: float
    lambda_plus: float
    lambda_minus: float
    entropy: float
    chi: float


def state_from_unit_amplitudes(amps) -> TwoQubitState:
    """Build a state from four unit-normalized amplitudes of ``|00>, |01>, |10>, |11>``."""
    amps = np.asarray(amps, dtype=complex).reshape(-1)
    if amps.shape != (4,):
        raise ValueError(f"expected 4 amplitudes, got {amps.size}")
    total = float(np.sum(np.abs(amps) ** 2))
    if abs(total - 1.0) > NORM_TOL:
        raise NotNormalized(f"sum of |amplitude|^2 is {total:.12g}, expected 1")
    return TwoQubitState(*(SQRT2 * amps))


def random_state(rng: np.random.Generator) -> TwoQubitState:
    """Haar-random pure state (uniform on S^7)."""
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return state_from_unit_amplitudes(v / np.linalg.norm(v))


def spinor_of_state(s: TwoQubitState) -> QSpinor:
    """``u0 = (a + b j)/sqrt(2)``, ``u1 = (c + d j)/sqrt(2)``."""
    return QSpinor(
        Quaternion.from_pair(s.a / SQRT2, s.b / SQRT2),
        Quaternion.from_pair(s.c / SQRT2, s.d / SQRT2),
    )


def state_of_spinor(u: QSpinor) -> TwoQubitState:
    a, b = u.u0.to_pair()
    c, d = u.u1.to_pair()
    return TwoQubitState(SQRT2 * a, SQRT2 * b, SQRT2 * c, SQRT2 * d)


def binary_entropy(lam: float) -> float:
    """Entropy in bits of the spectrum ``(lam, 1 - lam)``, with ``0 log 0 = 0``."""
    out = 0.0
    for p in (lam, 1.0 - lam):
        if p > 0.0:
            out -= p * np.log2(p)
    return float(out)


def lambdas_of_concurrence(conc: float) -> tuple[float, float]:
    root = np.sqrt(max(0.0, 1.0 - conc * conc))
    return float(0.5 * (1.0 + root)), float(0.5 * (1.0 - root))


def invariants(s: TwoQubitState) -> EntanglementInvariants:
    a, b, c, d = s.a, s.b, s.c, s.d
    z = np.conj(a) * c + np.conj(b) * d
    w = a * d - b * c
    zeta = np.conj(a) * b + np.conj(c) * d
    conc = min(1.0, abs(w))
    lp, lm = lambdas_of_concurrence(conc)
    chi = float(np.angle(w)) if conc >= 1e-12 else 0.0
    return EntanglementInvariants(
        z=complex(z),
        w=complex(w),
        zeta=complex(zeta),
        concurrence=float(conc),
        lambda_plus=lp,
        lambda_minus=lm,
        entropy=binary_entropy(lp),
        chi=chi,
    )


# ---------------------------------------------------------------------------
# reduced densities
# ---------------------------------------------------------------------------

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class DensityMatrix2:
    """2x2 density matrix (Hermitian, unit trace, positive semidefinite)."""

    matrix: np.ndarray = field(repr=True)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise NotDensityMatrix(f"expected a 2x2 matrix, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise NotDensityMatrix("matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > 1e-10:
            raise NotDensityMatrix(f"trace {np.trace(m).real:.12g} is not 1")
        m = 0.5 * (m + m.conj().T)
        if np.min(np.linalg.eigvalsh(m)) < -1e-10:
            raise NotDensityMatrix("matrix has a negative eigenvalue")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_bloch(cls, r) -> "DensityMatrix2":
        """``(I + r . sigma) / 2`` with ``r = (r_x, r_y, r_z)``."""
        r = np.asarray(r, dtype=float)
        return cls(0.5 * (np.eye(2) + np.tensordot(r, PAULI, 1)))

    @property
    def bloch(self) -> np.ndarray:
        m = self.matrix
        return np.array([2 * m[0, 1].real, -2 * m[0, 1].imag, (m[0, 0] - m[1, 1]).real])

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix).real)

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def as_density(rho) -> DensityMatrix2:
    return rho if isinstance(rho, DensityMatrix2) else DensityMatrix2(rho)


def reduced_densities(s: TwoQubitState) -> tuple[DensityMatrix2, DensityMatrix2]:
    """Reduced density matrices of the first and second qubit."""
    C = s.C
    rho1 = 0.5 * C @ C.conj().T
    rho2 = 0.5 * C.T @ C.conj()
    return DensityMatrix2(rho1), DensityMatrix2(rho2)


# ---------------------------------------------------------------------------
# Schmidt decomposition by SVD
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SchmidtFrame:
    """Schmidt decomposition ``C / sqrt(2) = U diag(D) V^T``.

    ``sigma, phi`` parametrize the first column of ``U`` as
    ``(cos(sigma/2), sin(sigma/2) e^{i phi})``; ``tau, epsilon`` do the same
    for the first column of ``V`` up to its overall phase.  ``Q`` and
    ``P_phase`` are the columns of ``V`` read as quaternions ``V[0] + V[1] j``.
    """

    sigma: float
    phi: float
    tau: float
    epsilon: float
    U: np.ndarray
    V: np.ndarray
    D: np.ndarray
    Q: UnitQuaternion
    P_phase: UnitQuaternion | None
    degenerate: bool = False

    def reconstruct(self) -> np.ndarray:
        """``U diag(D) V^T``, which should equal ``C / sqrt(2)``."""
        return self.U @ np.diag(self.D) @ self.V.T

    def product_terms(self) -> np.ndarray:
        """Gauge-independent rank-one terms ``D_k U[:, k] V[:, k]^T``, shape (2, 2, 2)."""
        return np.stack([self.D[k] * np.outer(self.U[:, k], self.V[:, k]) for k in range(2)])


def _column_quaternion(col) -> UnitQuaternion:
    return UnitQuaternion.normalize(Quaternion.from_pair(col[0], col[1]))


def _angles_of_column(col) -> tuple[float, float]:
    """Return (polar, relative phase) of a unit column ``(x, y)``."""
    polar = 2.0 * np.arctan2(abs(col[1]), abs(col[0]))
    if abs(col[0]) < 1e-15 or abs(col[1]) < 1e-15:
        rel = float(np.angle(col[1])) if abs(col[1]) >= 1e-15 else 0.0
    else:
        rel = float(np.angle(col[1] / col[0]))
    return float(polar), rel


def schmidt_svd(s: TwoQubitState) -> SchmidtFrame:
    """Singular value decomposition of ``C / sqrt(2)`` with a fixed phase convention.

    Singular values are descending.  The first entry of each column of ``U``
    with modulus above ``1e-12`` is made real positive and the matching
    column of ``V`` absorbs the conjugate phase.
    """
    U, D, Vh = np.linalg.svd(s.C / SQRT2)
    V = Vh.T.copy()
    U = U.copy()
    for k in range(2):
        col = U[:, k]
        lead = col[0] if abs(col[0]) > 1e-12 else col[1]
        phase = lead / abs(lead)
        U[:, k] /= phase
        V[:, k] *= phase
    sigma, phi = _angles_of_column(U[:, 0])
    tau, epsilon = _angles_of_column(V[:, 0])
    degenerate = bool(abs(D[0] - D[1]) < DEGENERATE_TOL)
    return SchmidtFrame(
        sigma=sigma,
        phi=phi,
        tau=tau,
        epsilon=epsilon,
        U=U,
        V=V,
        D=D,
        Q=_column_quaternion(V[:, 0]),
        P_phase=_column_quaternion(V[:, 1]),
        degenerate=degenerate,
    )


# ---------------------------------------------------------------------------
# local operations
# ---------------------------------------------------------------------------

def _check_unitary(g, name):
    g = np.asarray(g, dtype=complex)
    if g.shape != (2, 2) or np.max(np.abs(g.conj().T @ g - np.eye(2))) > 1e-10:
        raise NotUnitary(f"{name} is not a 2x2 unitary")
    return g


def apply_local(s: TwoQubitState, g1, g2) -> TwoQubitState:
    """Apply ``g1 (x) g2``; on the amplitude matrix this is ``C -> g1 C g2^T``."""
    g1 = _check_unitary(g1, "g1")
    g2 = _check_unitary(g2, "g2")
    return TwoQubitState.from_matrix(g1 @ s.C @ g2.T)


def random_unitary(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    return unitary_group.rvs(n, random_state=rng)
