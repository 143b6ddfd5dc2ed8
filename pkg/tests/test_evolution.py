import numpy as np
import pytest

from qhopf.errors import PathNotClosed, PoleCrossing
from qhopf.evolution import (
    QuadrupoleField,
    adiabatic_evolve,
    as_path,
    cyclic_evolve,
    ease,
    hamiltonian_from_quadrupole,
    hamiltonian_of,
    point_of_quadrupole,
    quadrupole_of_point,
    spline_path,
)
from qhopf.holonomy import BELL_POINT, c_kappa_holonomy, c_kappa_path, loop_c_kappa
from qhopf.hopf import S4Point, hopf_map, projector_of, section_of_point
from qhopf.quaternion import K, ONE, QMatrix, spinor_gauge

TWO_PI = 2 * np.pi
R3 = np.sqrt(3.0)


def c_loop(kappa):
    return lambda t: c_kappa_path(t, kappa)


def _unit(rng):
    xi = rng.normal(size=5)
    return xi / np.linalg.norm(xi)


# -- quadrupoles --------------------------------------------------------------

def test_bell_quadrupole():
    X = quadrupole_of_point(BELL_POINT).X
    expected = np.zeros((3, 3))
    expected[0, 2] = expected[2, 0] = -1 / R3
    np.testing.assert_allclose(X, expected, atol=1e-15)


def test_north_pole_quadrupole_is_diagonal():
    X = quadrupole_of_point(S4Point([1, 0, 0, 0, 0])).X
    np.testing.assert_allclose(X, np.diag([1 / 3, 1 / 3, -2 / 3]), atol=1e-15)


def test_separable_points_give_block_diagonal_quadrupoles(rng):
    for _ in range(20):
        xi = _unit(rng)
        xi[3:] = 0
        xi /= np.linalg.norm(xi)
        X = quadrupole_of_point(xi).X
        assert np.all(X[:2, 2] == 0) and np.all(X[2, :2] == 0)


def test_quadrupole_round_trip_and_hamiltonian(rng):
    for _ in range(100):
        xi = _unit(rng)
        q = quadrupole_of_point(xi)
        np.testing.assert_allclose(point_of_quadrupole(q).xi, xi, atol=1e-12)
        assert hamiltonian_from_quadrupole(q).allclose(hamiltonian_of(xi), 1e-10)


def test_quadrupole_validation():
    with pytest.raises(ValueError):
        QuadrupoleField(np.eye(3))
    with pytest.raises(ValueError):
        QuadrupoleField(np.diag([1.0, 0.0, -1.0]))
    with pytest.raises(ValueError):
        QuadrupoleField([[0, 1, 0], [0, 0, 0], [0, 0, 0]])


def test_hamiltonian_spectrum(rng):
    H0 = hamiltonian_of(S4Point([1, 0, 0, 0, 0])).to_complex()
    np.testing.assert_allclose(np.linalg.eigvalsh(H0), [-1, -1, 1, 1], atol=1e-15)
    for _ in range(50):
        xi = _unit(rng)
        H = hamiltonian_of(xi)
        assert (H @ H).allclose(QMatrix.identity(), 1e-12)
        Hc = H.to_complex()
        lam, vec = np.linalg.eigh(Hc)
        np.testing.assert_allclose(lam, [-1, -1, 1, 1], atol=1e-12)
        spectral = vec[:, 2:] @ vec[:, 2:].conj().T
        np.testing.assert_allclose(spectral, 0.5 * (np.eye(4) + Hc), atol=1e-12)
        np.testing.assert_allclose(spectral, projector_of(S4Point(xi)).matrix.to_complex(), atol=1e-12)


# -- paths --------------------------------------------------------------------

def test_ease_schedule():
    x = np.linspace(0, 1, 101)
    assert ease(0.0) == 0.0 and ease(1.0) == pytest.approx(1.0)
    assert np.all(np.diff(ease(x)) >= 0)
    h = 1e-6
    assert (ease(h) - ease(0)) / h == pytest.approx(0.0, abs=1e-5)


def test_spline_path_interpolates_samples():
    t = np.linspace(0, TWO_PI, 201)
    pts = c_kappa_path(t, 0.4)
    path, period = spline_path(pts)
    assert period == 200
    np.testing.assert_allclose(path(np.arange(201)), pts, atol=1e-12)
    mid = path(np.array([10.5]))[0]
    np.testing.assert_allclose(mid, c_kappa_path(t[10] + np.pi / 200, 0.4), atol=1e-8)
    with pytest.raises(PathNotClosed):
        spline_path(pts[:100])


def test_as_path_accepts_loop_specs():
    path, period = as_path(loop_c_kappa(0.4).loop)
    assert period == pytest.approx(TWO_PI)
    t = np.linspace(0, TWO_PI, 17)
    np.testing.assert_allclose(path(t), c_kappa_path(t, 0.4), atol=1e-12)


# -- adiabatic evolution ----------------------------------------------------------

def test_adiabatic_c0_loop_approaches_minus_one():
    # the adiabatic error is first order in 1/T: about 0.024 at 50 periods
    rep = adiabatic_evolve(c_loop(0.0), 50 * TWO_PI, TWO_PI)
    assert rep.distance_to_holonomy < 3e-2
    assert rep.holonomy_reference.isclose(-ONE, atol=1e-3)
    assert rep.norm_drift < 1e-9
    assert abs(rep.dynamical_factor - np.exp(-1j * 50 * TWO_PI)) < 1e-12


def test_adiabatic_constant_path():
    T = 7.3
    xi = BELL_POINT.xi
    rep = adiabatic_evolve(lambda t: np.broadcast_to(xi, np.shape(t) + (5,)), T, 1.0, steps=500)
    assert rep.geometric_phase.isclose(ONE, atol=1e-12)
    assert rep.dynamical_factor == pytest.approx(np.exp(-1j * T))
    assert rep.dynamical_phase_bound < 1e-12
    assert rep.leakage < 1e-12


def test_adiabatic_error_shrinks_with_ramp_time():
    errs = [
        adiabatic_evolve(c_loop(np.pi / 6), n * TWO_PI, TWO_PI, reference_steps=0).geometric_phase
        for n in (10, 20, 40)
    ]
    d = [np.linalg.norm(g.array - (-K).array) for g in errs]
    assert d[0] > d[1] > d[2]
    # T vs 4T
    assert d[0] / d[2] > 2


def test_adiabatic_errors():
    with pytest.raises(PathNotClosed):
        adiabatic_evolve(lambda t: c_kappa_path(t * 0.5, 0.3), 10.0, TWO_PI)
    north = np.array([1.0, 0, 0, 0, 0])

    def through_pole(t):
        t = np.asarray(t)[..., None]
        return np.cos(t) * north + np.sin(t) * np.array([0, 0, 0, 1.0, 0])

    with pytest.raises(PoleCrossing):
        adiabatic_evolve(through_pole, 10.0, TWO_PI, steps=200)
    with pytest.raises(ValueError):
        adiabatic_evolve(c_loop(0.0), -1.0, TWO_PI)


# -- cyclic evolution ---------------------------------------------------------

@pytest.mark.parametrize("kappa", [0.0, np.pi / 6, 0.4])
def test_cyclic_matches_transport(kappa):
    rep = cyclic_evolve(c_loop(kappa), TWO_PI, steps=20000)
    assert rep.distance_to_holonomy < 1e-3
    assert rep.geometric_phase.isclose(c_kappa_holonomy(kappa), atol=1e-6)
    assert rep.dynamical_phase_bound < 1e-10
    assert rep.norm_drift < 1e-9


def test_cyclic_static_eta_is_identity():
    xi = BELL_POINT.xi
    rep = cyclic_evolve(lambda t: np.broadcast_to(xi, np.shape(t) + (5,)), 1.0, steps=100)
    assert rep.geometric_phase.isclose(ONE, atol=1e-15)
    assert rep.final_state.isclose(section_of_point(BELL_POINT), atol=1e-15)


def test_cyclic_on_sampled_loop():
    pts = c_kappa_path(np.linspace(0, TWO_PI, 2001), np.pi / 6)
    rep = cyclic_evolve(pts, steps=4000, reference_steps=4000)
    assert rep.geometric_phase.isclose(-K, atol=1e-5)


def test_cyclic_state_stays_over_the_loop():
    rep = cyclic_evolve(c_loop(0.4), TWO_PI, steps=4000, reference_steps=0)
    np.testing.assert_allclose(hopf_map(rep.final_state).xi, BELL_POINT.xi, atol=1e-9)
    assert rep.holonomy_reference is None


def test_gate_composition():
    u0 = section_of_point(BELL_POINT)
    r1 = cyclic_evolve(c_loop(0.4), TWO_PI, steps=8000, reference_steps=0)
    r2 = cyclic_evolve(c_loop(1.1), TWO_PI, steps=8000, reference_steps=0)
    chained = cyclic_evolve(c_loop(1.1), TWO_PI, steps=8000, u0=r1.final_state, reference_steps=0)
    # transport commutes with the right action, so the second gate acts before the first
    expected = spinor_gauge(u0, r2.geometric_phase * r1.geometric_phase)
    assert chained.final_state.isclose(expected, atol=1e-9)


def test_cyclic_rejects_open_loop():
    with pytest.raises(PathNotClosed):
        cyclic_evolve(lambda t: c_kappa_path(t * 0.5, 0.3), TWO_PI, steps=100)
