"""Quaternions, quaternionic two-spinors and 2x2 quaternionic matrices.

A quaternion ``q = q1 + q2 i + q3 j + q4 k`` is stored as four reals with
``ij = k``, ``jk = i`` and ``ki = j``.  The complex-pair view writes
``q = alpha + beta j`` with ``alpha = q1 + i q2`` and ``beta = q3 + i q4``;
moving ``j`` through a complex number conjugates it, ``j gamma = conj(gamma) j``.

The array kernels (``qmul_array`` and friends) act on real arrays whose last
axis has length 4.  They carry the numerical work of the geometry modules.
:class:`Quaternion`, :class:`QSpinor` and :class:`QMatrix` are the scalar
front ends.

Complex 4x4 codec
-----------------
Quaternionic matrices act on spinors from the left while phases act from the
right.  Writing every quaternion as ``x + j y`` (so ``x = alpha`` and
``y = conj(beta)``) turns right multiplication by a complex number into
ordinary complex scaling of the vector ``(x0, y0, x1, y1)``.  Left
multiplication by ``p = alpha + beta j`` becomes the complex 2x2 block
``[[alpha, -beta], [conj(beta), conj(alpha)]]``.  This gives a complex-linear
picture of every quaternionic operator, used for matrix exponentials and
Schroedinger integration.  It is *not* the same complex structure as the
two-qubit amplitude vector ``(a, b, c, d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number

import numpy as np
from scipy.linalg import expm

from .errors import NotNormalized, SingularQuaternion

EPS_SINGULAR = 1e-14
UNIT_TOL = 1e-9

_CONJ_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


# ---------------------------------------------------------------------------
# array kernels
# ---------------------------------------------------------------------------

def qmul_array(p, q):
    """Hamilton product of quaternion arrays of shape ``(..., 4)`` (broadcasting)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    a1, b1, c1, d1 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    a2, b2, c2, d2 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )


def qconj_array(q):
    """Quaternion conjugate of an array of shape ``(..., 4)``."""
    return np.asarray(q, dtype=float) * _CONJ_SIGNS


def qnorm_array(q):
    return np.sqrt(np.sum(np.square(q), axis=-1))


def qnormalize_array(q):
    """Scale quaternions of shape ``(..., 4)`` to unit norm."""
    q = np.asarray(q, dtype=float)
    n = qnorm_array(q)
    if np.any(n <= EPS_SINGULAR):
        raise SingularQuaternion("cannot normalize a zero quaternion")
    return q / n[..., None]


def pair_array(q):
    """Split ``(..., 4)`` quaternions into complex ``(alpha, beta)`` with q = alpha + beta j."""
    q = np.asarray(q, dtype=float)
    return q[..., 0] + 1j * q[..., 1], q[..., 2] + 1j * q[..., 3]


def from_pair_array(alpha, beta):
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    return np.stack([alpha.real, alpha.imag, beta.real, beta.imag], axis=-1)


def inner_array(v, u):
    """Quaternionic scalar product of spinor arrays of shape ``(..., 2, 4)``.

    Returns ``conj(v0) u0 + conj(v1) u1`` with shape ``(..., 4)``.
    """
    v = np.asarray(v, dtype=float)
    u = np.asarray(u, dtype=float)
    return qmul_array(qconj_array(v[..., 0, :]), u[..., 0, :]) + qmul_array(
        qconj_array(v[..., 1, :]), u[..., 1, :]
    )


def ordered_product(qs):
    """Path-ordered product ``q[n-1] ... q[1] q[0]`` of a ``(n, 4)`` array.

    Later factors multiply from the left.  The product is evaluated as a
    pairwise tree, which keeps round-off growth logarithmic in ``n``.
    """
    qs = np.asarray(qs, dtype=float)
    if len(qs) == 0:
        return np.array([1.0, 0.0, 0.0, 0.0])
    while len(qs) > 1:
        head = qmul_array(qs[1 : len(qs) - len(qs) % 2 : 2], qs[0 : len(qs) - len(qs) % 2 : 2])
        if len(qs) % 2:
            head = np.concatenate([head, qs[-1:]])
        qs = head
    return qs[0]


# ---------------------------------------------------------------------------
# scalar quaternions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quaternion:
    """Real quaternion ``q1 + q2 i + q3 j + q4 k``.

    Supports ``+``, ``-``, ``*`` (Hamilton product, or scaling by a real
    number) and division by a real number.  Python complex numbers are read
    as quaternions with zero ``j`` and ``k`` parts.
    """

    q1: float = 0.0
    q2: float = 0.0
    q3: float = 0.0
    q4: float = 0.0

    def __post_init__(self):
        for name in ("q1", "q2", "q3", "q4"):
            object.__setattr__(self, name, float(getattr(self, name)))

    # construction ----------------------------------------------------------
    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (4,):
            raise ValueError(f"expected 4 components, got shape {arr.shape}")
        return cls(*arr)

    @classmethod
    def from_pair(cls, alpha: complex, beta: complex = 0.0) -> "Quaternion":
        alpha, beta = complex(alpha), complex(beta)
        return cls(alpha.real, alpha.imag, beta.real, beta.imag)

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, Number):
            z = complex(value)
            return cls(z.real, z.imag)
        return cls.from_array(value)

    # views -----------------------------------------------------------------
    @property
    def array(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.q3, self.q4])

    def to_pair(self) -> tuple[complex, complex]:
        return complex(self.q1, self.q2), complex(self.q3, self.q4)

    @property
    def real(self) -> float:
        return self.q1

    @property
    def imag(self) -> "Quaternion":
        """Imaginary part as a quaternion (real part zeroed)."""
        return Quaternion(0.0, self.q2, self.q3, self.q4)

    def conj(self) -> "Quaternion":
        return Quaternion(self.q1, -self.q2, -self.q3, -self.q4)

    def norm2(self) -> float:
        return self.q1**2 + self.q2**2 + self.q3**2 + self.q4**2

    def norm(self) -> float:
        return float(np.sqrt(self.norm2()))

    def inverse(self, eps: float = EPS_SINGULAR) -> "Quaternion":
        n = self.norm()
        if n <= eps:
            raise SingularQuaternion(f"quaternion of norm {n:.3e} has no inverse")
        return self.conj() / (n * n)

    def isclose(self, other, atol: float = 1e-12) -> bool:
        other = Quaternion.coerce(other)
        return bool(np.max(np.abs(self.array - other.array)) <= atol)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        try:
            other = Quaternion.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return Quaternion.from_array(self.array + other.array)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = Quaternion.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return Quaternion.from_array(self.array - other.array)

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __neg__(self):
        return Quaternion(-self.q1, -self.q2, -self.q3, -self.q4)

    def __mul__(self, other):
        if isinstance(other, Number) and not isinstance(other, complex):
            return Quaternion.from_array(self.array * float(other))
        try:
            other = Quaternion.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return Quaternion.from_array(qmul_array(self.array, other.array))

    def __rmul__(self, other):
        if isinstance(other, Number) and not isinstance(other, complex):
            return Quaternion.from_array(self.array * float(other))
        return Quaternion.coerce(other) * self

    def __truediv__(self, other):
        if isinstance(other, Number) and not isinstance(other, complex):
            return Quaternion.from_array(self.array / float(other))
        try:
            other = Quaternion.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        # right division, p / q = p q^-1
        return self * other.inverse()

    def __abs__(self):
        return self.norm()

    def __str__(self):
        return f"{self.q1:.15g} {self.q2:+.15g}i {self.q3:+.15g}j {self.q4:+.15g}k"


class UnitQuaternion(Quaternion):
    """Quaternion of unit norm (a quaternionic phase).

    Inputs whose norm is within ``1e-9`` of one are renormalized; anything
    farther away raises :class:`NotNormalized`.
    """

    def __post_init__(self):
        super().__post_init__()
        n = self.norm()
        if abs(n - 1.0) > UNIT_TOL:
            raise NotNormalized(f"unit quaternion expected, got norm {n:.12g}")
        for name in ("q1", "q2", "q3", "q4"):
            object.__setattr__(self, name, getattr(self, name) / n)

    @classmethod
    def normalize(cls, q) -> "UnitQuaternion":
        """Unit quaternion along ``q`` (any nonzero norm)."""
        arr = Quaternion.coerce(q).array
        n = np.linalg.norm(arr)
        if n <= EPS_SINGULAR:
            raise SingularQuaternion("cannot normalize a zero quaternion")
        return cls(*(arr / n))

    @property
    def inner(self) -> Quaternion:
        return Quaternion(self.q1, self.q2, self.q3, self.q4)

    def inverse(self, eps: float = EPS_SINGULAR) -> "UnitQuaternion":
        return UnitQuaternion(self.q1, -self.q2, -self.q3, -self.q4)


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    return Quaternion.coerce(p) * Quaternion.coerce(q)


def qconj(q: Quaternion) -> Quaternion:
    return Quaternion.coerce(q).conj()


def qinv(q: Quaternion, eps: float = EPS_SINGULAR) -> Quaternion:
    """Multiplicative inverse; raises :class:`SingularQuaternion` when ``|q| <= eps``."""
    return Quaternion.coerce(q).inverse(eps)


def to_pair(q: Quaternion) -> tuple[complex, complex]:
    return Quaternion.coerce(q).to_pair()


def from_pair(alpha: complex, beta: complex = 0.0) -> Quaternion:
    return Quaternion.from_pair(alpha, beta)


def pair_mul(x: tuple[complex, complex], y: tuple[complex, complex]) -> tuple[complex, complex]:
    """Product of quaternions given as complex pairs.

    ``(a + b j)(c + d j) = (a c - b conj(d)) + (a d + b conj(c)) j``.
    """
    a, b = x
    c, d = y
    return a * c - b * np.conj(d), a * d + b * np.conj(c)


# ---------------------------------------------------------------------------
# spinors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QSpinor:
    """Normalized quaternionic two-spinor ``(u0, u1)``, a point of S^7.

    Norms within ``1e-9`` of one are renormalized on construction.
    """

    u0: Quaternion
    u1: Quaternion

    def __post_init__(self):
        u0 = Quaternion.coerce(self.u0)
        u1 = Quaternion.coerce(self.u1)
        n = np.sqrt(u0.norm2() + u1.norm2())
        if abs(n - 1.0) > UNIT_TOL:
            raise NotNormalized(f"spinor norm {n:.12g} is not 1")
        object.__setattr__(self, "u0", u0 / n)
        object.__setattr__(self, "u1", u1 / n)

    @classmethod
    def from_array(cls, arr) -> "QSpinor":
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (2, 4):
            raise ValueError(f"expected a (2, 4) spinor array, got {arr.shape}")
        return cls(Quaternion.from_array(arr[0]), Quaternion.from_array(arr[1]))

    @classmethod
    def from_complex(cls, vec) -> "QSpinor":
        """Inverse of :meth:`to_complex`."""
        return cls.from_array(complex_to_spinor_array(vec))

    @property
    def array(self) -> np.ndarray:
        return np.stack([self.u0.array, self.u1.array])

    def to_complex(self) -> np.ndarray:
        """Complex 4-vector ``(x0, y0, x1, y1)`` with ``u_a = x_a + j y_a``."""
        return spinor_to_complex(self.array)

    def gauge(self, q) -> "QSpinor":
        return spinor_gauge(self, q)

    def inner(self, other: "QSpinor") -> Quaternion:
        """``<self|other>``."""
        return spinor_inner(self, other)

    def isclose(self, other: "QSpinor", atol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.array - as_spinor_array(other))) <= atol)


def as_spinor_array(u) -> np.ndarray:
    """Spinor or tangent vector as a ``(..., 2, 4)`` float array."""
    if isinstance(u, QSpinor):
        return u.array
    arr = np.asarray(u, dtype=float)
    if arr.shape[-2:] != (2, 4):
        raise ValueError(f"expected spinor array of shape (..., 2, 4), got {arr.shape}")
    return arr


def spinor_inner(v, u) -> Quaternion:
    """Quaternionic scalar product ``<v|u> = conj(v0) u0 + conj(v1) u1``."""
    return Quaternion.from_array(inner_array(as_spinor_array(v), as_spinor_array(u)))


def spinor_gauge(u: QSpinor, q) -> QSpinor:
    """Right action ``(u0 q, u1 q)`` of a unit quaternion."""
    q = Quaternion.coerce(q)
    return QSpinor.from_array(qmul_array(as_spinor_array(u), q.array))


def spinor_to_complex(u) -> np.ndarray:
    """Complex codec of spinor arrays ``(..., 2, 4) -> (..., 4)``."""
    u = as_spinor_array(u)
    alpha, beta = pair_array(u)
    out = np.empty(u.shape[:-2] + (4,), dtype=complex)
    out[..., 0::2] = alpha
    out[..., 1::2] = np.conj(beta)
    return out


def complex_to_spinor_array(vec) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex)
    if vec.shape[-1] != 4:
        raise ValueError(f"expected complex 4-vectors, got shape {vec.shape}")
    alpha = vec[..., 0::2]
    beta = np.conj(vec[..., 1::2])
    return from_pair_array(alpha, beta)


# ---------------------------------------------------------------------------
# 2x2 quaternionic matrices
# ---------------------------------------------------------------------------

def _complex_block(q) -> np.ndarray:
    alpha, beta = pair_array(q)
    return np.array([[alpha, -beta], [np.conj(beta), np.conj(alpha)]])


class QMatrix:
    """2x2 matrix with quaternion entries, stored as a real ``(2, 2, 4)`` array.

    Matrices multiply spinors from the left; ``A @ B`` is the matrix product
    and ``A @ u`` applies ``A`` to a spinor (returning a plain ``(2, 4)``
    array, since the result is generally not normalized).
    """

    __slots__ = ("_data",)
    __array_priority__ = 20

    def __init__(self, data):
        data = np.array(data, dtype=float)
        if data.shape != (2, 2, 4):
            raise ValueError(f"expected a (2, 2, 4) array, got {data.shape}")
        data.flags.writeable = False
        self._data = data

    @property
    def data(self) -> np.ndarray:
        return self._data

    @classmethod
    def from_entries(cls, entries) -> "QMatrix":
        """Build from a nested 2x2 list of quaternions or numbers."""
        return cls([[Quaternion.coerce(e).array for e in row] for row in entries])

    @classmethod
    def identity(cls) -> "QMatrix":
        return cls.from_entries([[1, 0], [0, 1]])

    @classmethod
    def zeros(cls) -> "QMatrix":
        return cls(np.zeros((2, 2, 4)))

    @classmethod
    def from_complex(cls, m) -> "QMatrix":
        """Inverse of :meth:`to_complex`; the 4x4 input must commute with the codec's ``j``."""
        m = np.asarray(m, dtype=complex)
        data = np.empty((2, 2, 4))
        for r in range(2):
            for c in range(2):
                block = m[2 * r : 2 * r + 2, 2 * c : 2 * c + 2]
                data[r, c] = from_pair_array(block[0, 0], -block[0, 1])
        return cls(data)

    def __getitem__(self, idx) -> Quaternion:
        r, c = idx
        return Quaternion.from_array(self._data[r, c])

    def __repr__(self):
        rows = [[str(self[r, c]) for c in range(2)] for r in range(2)]
        return f"QMatrix({rows})"

    # algebra ---------------------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            a, b = self._data, other._data
            out = qmul_array(a[:, :, None, :], b[None, :, :, :]).sum(axis=1)
            return QMatrix(out)
        u = as_spinor_array(other)
        return qmul_array(self._data, u[..., None, :, :]).sum(axis=-2)

    def __add__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return QMatrix(self._data + other._data)

    def __sub__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return QMatrix(self._data - other._data)

    def __neg__(self):
        return QMatrix(-self._data)

    def __mul__(self, scalar):
        if isinstance(scalar, Number) and not isinstance(scalar, complex):
            return QMatrix(self._data * float(scalar))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, Number) and not isinstance(scalar, complex):
            return QMatrix(self._data / float(scalar))
        return NotImplemented

    def mul_right(self, q) -> "QMatrix":
        """Entrywise right multiplication by a quaternion."""
        return QMatrix(qmul_array(self._data, Quaternion.coerce(q).array))

    def mul_left(self, q) -> "QMatrix":
        return QMatrix(qmul_array(Quaternion.coerce(q).array, self._data))

    @property
    def H(self) -> "QMatrix":
        """Quaternionic conjugate transpose."""
        return QMatrix(qconj_array(self._data.transpose(1, 0, 2)))

    def trace(self) -> Quaternion:
        return Quaternion.from_array(self._data[0, 0] + self._data[1, 1])

    def norm(self) -> float:
        """Frobenius-type norm, ``sqrt(Re Tr(B^dagger B))``."""
        return float(np.sqrt(np.sum(self._data**2)))

    def allclose(self, other: "QMatrix", atol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self._data - other._data)) <= atol)

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return self.allclose(self.H, atol)

    def is_skew_hermitian(self, atol: float = 1e-12) -> bool:
        return self.allclose(-self.H, atol)

    # complex codec ---------------------------------------------------------
    def to_complex(self) -> np.ndarray:
        """4x4 complex matrix acting on :func:`spinor_to_complex` vectors."""
        return np.block(
            [[_complex_block(self._data[r, c]) for c in range(2)] for r in range(2)]
        )

    def expm(self, t: float = 1.0) -> "QMatrix":
        """``exp(t A)``, evaluated on the complex codec."""
        return QMatrix.from_complex(expm(t * self.to_complex()))


def commutator(a: QMatrix, b: QMatrix) -> QMatrix:
    return a @ b - b @ a


def anticommutator(a: QMatrix, b: QMatrix) -> QMatrix:
    return a @ b + b @ a


def dyad(u, v=None) -> QMatrix:
    """Quaternionic outer product ``|u><v|`` (``v`` defaults to ``u``)."""
    u = as_spinor_array(u)
    v = u if v is None else as_spinor_array(v)
    return QMatrix(qmul_array(u[:, None, :], qconj_array(v)[None, :, :]))
