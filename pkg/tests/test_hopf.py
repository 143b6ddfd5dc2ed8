import itertools

import numpy as np
import pytest
from hypothesis import given

from qhopf.errors import AtProjectionPole, OutOfDisk, ZOnAxis
from qhopf.hopf import (
    S4Point,
    StereoCoord,
    gamma_complex,
    gamma_set,
    hopf_map,
    hopf_map_swapped,
    projector_of,
    section_at,
    section_params,
    spin_basis,
    stereo,
    stereo_inv,
    zeta_of_zw,
)
from qhopf.quaternion import J, ONE, QMatrix, QSpinor, Quaternion, dyad, inner_array, spinor_gauge
from qhopf.state import (
    invariants,
    random_state,
    reduced_densities,
    spinor_of_state,
    state_from_unit_amplitudes,
    state_of_spinor,
)
from strategies import points, spinors, unit_quaternions

R2 = np.sqrt(2.0)
BELL_SPINOR = QSpinor(ONE / R2, J / R2)
BELL_XI = [0, 0, 0, 1, 0]


# -- projection ---------------------------------------------------------------

def test_hopf_map_examples():
    np.testing.assert_allclose(hopf_map(BELL_SPINOR).xi, BELL_XI, atol=1e-15)
    np.testing.assert_allclose(hopf_map(QSpinor(ONE, Quaternion(0.0))).xi, [1, 0, 0, 0, 0])


@given(spinors(), unit_quaternions())
def test_projection_is_fiber_invariant(u, q):
    np.testing.assert_allclose(hopf_map(spinor_gauge(u, q)).xi, hopf_map(u).xi, atol=1e-12)


def test_projection_reads_off_invariants(rng):
    for _ in range(200):
        s = random_state(rng)
        p = hopf_map(spinor_of_state(s))
        inv = invariants(s)
        assert p.z == pytest.approx(inv.z, abs=1e-12)
        assert p.w == pytest.approx(inv.w, abs=1e-12)
        assert p.concurrence == pytest.approx(inv.concurrence, abs=1e-12)
        np.testing.assert_allclose(reduced_densities(s)[0].bloch, [p.xi[1], p.xi[2], p.xi[0]], atol=1e-12)


def test_separable_states_lie_on_the_w_zero_slice(rng):
    x = rng.normal(size=2) + 1j * rng.normal(size=2)
    y = rng.normal(size=2) + 1j * rng.normal(size=2)
    amps = np.outer(x, y).reshape(-1)
    p = hopf_map(spinor_of_state(state_from_unit_amplitudes(amps / np.linalg.norm(amps))))
    assert abs(p.w) < 1e-12


def test_swapped_projection_examples():
    bell = state_from_unit_amplitudes([1 / R2, 0, 0, 1 / R2])
    np.testing.assert_allclose(hopf_map_swapped(bell).xi, BELL_XI, atol=1e-15)
    # |01>: the second qubit is |1>, so its Bloch vector points down
    s01 = state_from_unit_amplitudes([0, 1, 0, 0])
    np.testing.assert_allclose(hopf_map_swapped(s01).xi, [-1, 0, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(hopf_map(spinor_of_state(s01)).xi, [1, 0, 0, 0, 0], atol=1e-15)


def test_swapped_projection_gives_second_qubit(rng):
    for _ in range(100):
        s = random_state(rng)
        eta = hopf_map_swapped(s)
        inv = invariants(s)
        np.testing.assert_allclose(reduced_densities(s)[1].bloch, [eta.xi[1], eta.xi[2], eta.xi[0]], atol=1e-12)
        assert eta.z == pytest.approx(inv.zeta, abs=1e-12)
        assert eta.w == pytest.approx(inv.w, abs=1e-12)


# -- stereographic chart ------------------------------------------------------

def test_stereo_examples():
    assert stereo(S4Point([1, 0, 0, 0, 0])).x == Quaternion(0.0)
    assert stereo(S4Point(BELL_XI)).x.isclose(J)
    with pytest.raises(AtProjectionPole):
        stereo(S4Point([-1, 0, 0, 0, 0]))
    with pytest.raises(AtProjectionPole):
        stereo(S4Point([1, 0, 0, 0, 0]), "south")


@given(points())
def test_stereo_round_trip(xi):
    for branch in ("north", "south"):
        back = stereo_inv(stereo(S4Point(xi), branch))
        np.testing.assert_allclose(back.xi, xi, atol=1e-12)


@given(spinors())
def test_north_coordinate_is_u1_over_u0(u):
    x = stereo(hopf_map(u)).x
    assert x.isclose(u.u1 * u.u0.inverse(), atol=1e-10)


@given(points())
def test_chart_radius_is_tan_half_theta(xi):
    x = stereo(S4Point(xi)).x
    theta = np.arccos(np.clip(xi[0], -1, 1))
    assert x.norm() == pytest.approx(np.tan(theta / 2), rel=1e-10, abs=1e-12)


def test_south_coordinate_inverts_north(rng):
    xi = rng.normal(size=5)
    p = S4Point(xi / np.linalg.norm(xi))
    xn = stereo(p, "north").x
    xs = stereo(p, "south").x
    assert (xn * xs).isclose(ONE, atol=1e-12)


# -- sections -----------------------------------------------------------------

def test_section_examples():
    theta = np.arcsin(0.6)
    u = section_at(0.6, 0)
    assert u.isclose(QSpinor(Quaternion(np.cos(theta / 2)), Quaternion(np.sin(theta / 2))), atol=1e-15)
    assert section_at(0, 0).isclose(QSpinor(ONE, Quaternion(0.0)))
    assert section_at(0, 1).isclose(BELL_SPINOR, atol=1e-15)
    with pytest.raises(OutOfDisk):
        section_at(0.8, 0.8)


@given(points())
def test_section_projects_back_with_b_zero(xi):
    if xi[0] < -0.999:
        return
    p = S4Point(xi)
    branch = "north" if xi[0] >= 0 else "south"
    u = section_at(p.z, p.w, branch)
    np.testing.assert_allclose(hopf_map(u).xi, xi, atol=1e-12)
    assert abs(state_of_spinor(u).b) < 1e-15


@given(spinors())
def test_section_params_reassemble(u):
    sp = section_params(u)
    rebuilt = QSpinor(
        Quaternion(np.cos(sp.theta / 2)) * sp.q_fiber,
        (sp.p if sp.p is not None else ONE) * np.sin(sp.theta / 2) * sp.q_fiber,
    )
    assert rebuilt.isclose(u, atol=1e-10)


def test_zeta_examples():
    assert zeta_of_zw(0.6, 0) == 0
    with pytest.raises(ZOnAxis):
        zeta_of_zw(0, 0.5)
    u = section_at(0.6, 0.6)
    assert zeta_of_zw(0.6, 0.6) == pytest.approx(invariants(state_of_spinor(u)).zeta, abs=1e-14)


@given(points())
def test_zeta_matches_section_state(xi):
    if xi[0] < -0.999 or np.hypot(xi[1], xi[2]) < 1e-6:
        return
    p = S4Point(xi)
    branch = "north" if xi[0] >= 0 else "south"
    zeta = invariants(state_of_spinor(section_at(p.z, p.w, branch))).zeta
    assert zeta_of_zw(p.z, p.w, branch) == pytest.approx(zeta, abs=1e-12)


# -- Gamma matrices and projectors ------------------------------------------------

def test_clifford_relations_are_exact():
    g = gamma_set()
    for m, n in itertools.product(range(5), repeat=2):
        anti = g[m] @ g[n] + g[n] @ g[m]
        expected = QMatrix.identity() * (2.0 if m == n else 0.0)
        assert np.array_equal(anti.data, expected.data)
    for gm in g:
        assert gm.is_hermitian(0.0)


def test_complex_gammas_are_hermitian_and_anticommute():
    G = gamma_complex()
    for m, n in itertools.product(range(5), repeat=2):
        np.testing.assert_allclose(G[m] @ G[n] + G[n] @ G[m], 2.0 * (m == n) * np.eye(4), atol=0)


def test_spin_generators_are_skew_hermitian():
    for S in spin_basis().values():
        assert S.is_skew_hermitian(0.0)


def test_projector_examples():
    P = projector_of(S4Point([1, 0, 0, 0, 0]))
    assert P.matrix.allclose(QMatrix.from_entries([[1, 0], [0, 0]]), 0.0)
    P = projector_of(S4Point(BELL_XI))
    expected = QMatrix.from_entries([[ONE, -J], [J, ONE]]) * 0.5
    assert P.matrix.allclose(expected, 1e-15)


@given(spinors())
def test_projector_is_the_dyad_of_its_fiber(u):
    P = projector_of(hopf_map(u))
    assert P.matrix.allclose(dyad(u), 1e-12)
    np.testing.assert_allclose(P @ u, u.array, atol=1e-12)
    assert (P.matrix @ P.matrix).allclose(P.matrix, 1e-12)
    for mu, g in enumerate(gamma_set()):
        expect = hopf_map(u).xi[mu]
        assert Quaternion.from_array(inner_array(u.array, g @ u)).isclose(Quaternion(expect), atol=1e-12)
    np.testing.assert_allclose(P.point.xi, hopf_map(u).xi, atol=1e-12)


def test_stereo_coord_default_branch():
    assert StereoCoord(ONE).branch == "north"
