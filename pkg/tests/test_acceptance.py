"""Acceptance criteria, one test (and one report line) per criterion.

Each test prints ``[PASS|FAIL] criterion N: ...`` with the measured figure
and the tolerance it is held to; the lines are repeated in the pytest
terminal summary.  Tolerances are the stated ones and are not relaxed.
"""

import itertools

import numpy as np
from scipy.linalg import sqrtm

from acceptance_log import report
from qhopf.density import (
    b2_tangent,
    density_of_point,
    fidelity_hopf,
    fidelity_hyperbolic,
    instanton_form_matrix,
    metric_decomposition_check,
    to_subbundle,
    uhlmann_connection_form,
)
from qhopf.evolution import adiabatic_evolve, cyclic_evolve, hamiltonian_from_quadrupole, hamiltonian_of, quadrupole_of_point
from qhopf.geodesics import nearest_separable, nearest_separable_grid, schmidt_transport
from qhopf.holonomy import (
    BELL_POINT,
    LoopSpec,
    c_kappa_holonomy,
    c_kappa_path,
    closed_orbit_alpha,
    holonomy_closed_form,
    latitude_points,
    loop_c_kappa,
    so3_generators,
    spin5_generator,
    transport_loop,
    transport_sampled,
)
from qhopf.hopf import S4Point, gamma_set, hopf_map, projector_of, section_of_point
from qhopf.quaternion import ONE, K, QMatrix, Quaternion, qconj, qinv, qmul
from qhopf.state import invariants, random_state, reduced_densities, schmidt_svd, spinor_of_state, state_of_spinor

TWO_PI = 2 * np.pi
N = 20000
KAPPAS = {"0": 0.0, "pi/6": np.pi / 6, "pi/4": np.pi / 4, "pi/3": np.pi / 3}


def crng(seed, criterion):
    """Independent stream per criterion, derived from the session seed."""
    return np.random.default_rng([seed, criterion])


def _concurrence(u):
    return invariants(state_of_spinor(u)).concurrence


# shared between criteria 4, 5 and 6
_LOOP_RUNS = {}


def _c_kappa_runs():
    if "c_kappa" not in _LOOP_RUNS:
        u0 = section_of_point(BELL_POINT)
        _LOOP_RUNS["c_kappa"] = {
            name: (u0, transport_loop(loop_c_kappa(k).loop, u0=u0, n_steps=N)) for name, k in KAPPAS.items()
        }
    return _LOOP_RUNS["c_kappa"]


def _random_orbit_runs(seed):
    key = ("orbits", seed)
    if key not in _LOOP_RUNS:
        rng = crng(seed, 5)
        runs, rejected = [], 0
        while len(runs) < 20:
            alpha = closed_orbit_alpha(rng)
            u0 = spinor_of_state(random_state(rng))
            loop = LoopSpec.orbit(spin5_generator(alpha), hopf_map(u0), TWO_PI)
            pts = loop.sample(N)
            # the section chart excludes the south pole; keep orbits that stay clear of it
            if np.min(1.0 + pts[:, 0]) < 1e-2:
                rejected += 1
                continue
            numeric = transport_sampled(pts, u0)
            _, exact = holonomy_closed_form(projector_of(hopf_map(u0)), loop.S, TWO_PI, u0)
            runs.append((u0, numeric, exact))
        _LOOP_RUNS[key] = (runs, rejected)
    return _LOOP_RUNS[key]


# ---------------------------------------------------------------------------

def test_criterion_1_overlap_identity(seed):
    rng = crng(seed, 1)
    worst = 0.0
    for _ in range(1000):
        s = random_state(rng)
        ns = nearest_separable(spinor_of_state(s))
        worst = max(worst, abs(np.cos(ns.delta / 2) ** 2 - invariants(s).lambda_plus))
    ok = worst < 1e-10
    report("criterion 1", ok, f"max |cos^2(D/2) - lambda+| over 1000 states = {worst:.2e} (< 1e-10)")
    assert ok


def test_criterion_2_nearest_separable_optimality(seed):
    rng = crng(seed, 2)
    worst = -np.inf
    for _ in range(100):
        s = random_state(rng)
        analytic = nearest_separable(spinor_of_state(s)).overlap
        _, _, grid_best = nearest_separable_grid(s, n=400)
        worst = max(worst, grid_best - analytic)
    ok = worst <= 1e-6
    report("criterion 2", ok, f"max(grid best - analytic) over 100 states = {worst:.2e} (<= 1e-6)")
    assert ok


def _projector_gap(a, b):
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return float(np.max(np.abs(np.outer(a, a.conj()) - np.outer(b, b.conj()))))


def test_criterion_3_schmidt_equivalence(seed):
    rng = crng(seed, 3)
    coeff_err = 0.0
    section_err = 0.0
    for _ in range(100):
        s = random_state(rng)
        f = schmidt_transport(s)
        coeff_err = max(coeff_err, float(np.max(np.abs(f.D - schmidt_svd(s).D))))
        rho1, rho2 = reduced_densities(s)
        for rho, frame in ((rho1, f.U), (rho2, f.V)):
            _, vec = np.linalg.eigh(rho.matrix)
            # leading and trailing Schmidt vectors against the two eigensections
            section_err = max(section_err, _projector_gap(frame[:, 0], vec[:, 1]))
            section_err = max(section_err, _projector_gap(frame[:, 1], vec[:, 0]))
        product = f.D[0] * np.outer(f.U[:, 0], f.V[:, 0]) + f.D[1] * np.outer(f.U[:, 1], f.V[:, 1])
        section_err = max(section_err, float(np.max(np.abs(product - s.C / np.sqrt(2)))))
    ok = coeff_err < 1e-10 and section_err < 1e-9
    report(
        "criterion 3",
        ok,
        f"coefficient error {coeff_err:.2e} (< 1e-10), eigensection/reconstruction error {section_err:.2e} (< 1e-9)",
    )
    assert ok


def test_criterion_4_c_kappa_holonomy():
    exact_err = {}
    for name, k in (("pi/6", np.pi / 6), ("0", 0.0)):
        _, res = holonomy_closed_form(projector_of(BELL_POINT), loop_c_kappa(k).S, TWO_PI)
        target = -K if name == "pi/6" else -ONE
        exact_err[name] = res.distance(target)
    numeric_err = {name: res.distance(c_kappa_holonomy(KAPPAS[name])) for name, (_, res) in _c_kappa_runs().items()}
    ok = max(exact_err.values()) < 1e-12 and max(numeric_err.values()) < 1e-3
    detail = (
        f"closed form |q - (-k)| = {exact_err['pi/6']:.1e}, |q - (-1)| = {exact_err['0']:.1e} (exact: < 1e-12); "
        + "numeric N=20000 distances "
        + ", ".join(f"k={n}: {e:.1e}" for n, e in numeric_err.items())
        + " (< 1e-3)"
    )
    report("criterion 4 (values)", ok, detail)
    assert ok


def test_criterion_4_doubling_ratio():
    # The stated band expects first-order convergence.  kappa = 0 is a
    # geodesic loop whose error is already at roundoff, so it carries no
    # convergence information and is listed but not judged.
    ratios = {}
    for name, k in KAPPAS.items():
        loop = loop_c_kappa(k).loop
        exact = c_kappa_holonomy(k)
        e1 = transport_loop(loop, n_steps=N).distance(exact)
        e2 = transport_loop(loop, n_steps=2 * N).distance(exact)
        ratios[name] = (e1, e1 / e2 if e2 > 0 else np.inf)
    judged = {n: r for n, (e, r) in ratios.items() if e > 1e-13}
    ok = all(1.7 <= r <= 2.3 for r in judged.values())
    detail = ", ".join(f"k={n}: {r:.3f}" for n, r in judged.items())
    detail += f" (required in [1.7, 2.3]); k=0 error {ratios['0'][0]:.1e} is at roundoff"
    report("criterion 4 (doubling ratio)", ok, detail)
    assert ok


def test_criterion_5_random_orbits(seed):
    runs, rejected = _random_orbit_runs(seed)
    worst = max(numeric.distance(exact.q) for _, numeric, exact in runs)
    ok = worst < 5e-3
    report(
        "criterion 5",
        ok,
        f"max distance over 20 closed Spin(5) orbits = {worst:.2e} (< 5e-3); {rejected} orbits near the south pole redrawn",
    )
    assert ok


def test_criterion_6_concurrence_invariance(seed):
    # the transported spinor is u0 q; its concurrence is compared with the start
    finals = [(u0, res.final_state) for u0, res in _c_kappa_runs().values()]
    finals += [(u0, numeric.final_state) for u0, numeric, _ in _random_orbit_runs(seed)[0]]
    worst = max(abs(_concurrence(final) - _concurrence(u0)) for u0, final in finals)
    ok = worst < 1e-10
    report("criterion 6", ok, f"max |C(u0 q) - C(u0)| over the {len(finals)} loops of criteria 4-5 = {worst:.2e} (< 1e-10)")
    assert ok


def test_criterion_7_monopole_stratum():
    qs, errs = {}, {}
    for name, theta in (("pi/6", np.pi / 6), ("pi/3", np.pi / 3), ("pi/2", np.pi / 2)):
        q = transport_sampled(latitude_points(theta, N)).q
        oracle = Quaternion.from_pair(np.exp(-1j * np.pi * (1 - np.cos(theta))))
        qs[name] = q
        errs[name] = float(np.linalg.norm(q.array - oracle.array))
    comm = max(
        float(np.linalg.norm((qs[a] * qs[b] - qs[b] * qs[a]).array)) for a, b in itertools.combinations(qs, 2)
    )
    ok = max(errs.values()) < 1e-3 and comm < 1e-9
    detail = ", ".join(f"Theta={n}: {e:.1e}" for n, e in errs.items())
    report("criterion 7", ok, f"{detail} (< 1e-3); max commutator {comm:.1e} (< 1e-9)")
    assert ok


def _point(rng, chi=None):
    xi = rng.normal(size=5)
    xi /= np.linalg.norm(xi)
    if chi is not None:
        c = np.hypot(xi[3], xi[4])
        xi[3], xi[4] = c * np.cos(chi), c * np.sin(chi)
    return xi


def _bures_oracle(rho, omega):
    s = sqrtm(omega)
    return float(np.trace(sqrtm(s @ rho @ s)).real ** 2)


def test_criterion_8_bures_consistency(seed):
    rng = crng(seed, 8)
    subbundle = 0.0
    for _ in range(200):
        u = section_of_point(S4Point(_point(rng, chi=0.0)))
        v = section_of_point(S4Point(_point(rng, chi=0.0)))
        rho_u = density_of_point(hopf_map(u)).matrix
        rho_v = density_of_point(hopf_map(v)).matrix
        subbundle = max(subbundle, abs(fidelity_hopf(u, v) - _bures_oracle(rho_u, rho_v)))

    hyper = 0.0
    for _ in range(200):
        u = spinor_of_state(random_state(rng))
        v = spinor_of_state(random_state(rng))
        hyper = max(hyper, abs(fidelity_hyperbolic(u, v) - fidelity_hopf(u, v)))

    h = 1e-4
    decomposition = 0.0
    checked = 0
    while checked < 50:
        a = _point(rng)
        if np.hypot(a[3], a[4]) < 0.05:
            continue
        d = rng.normal(size=5)
        d -= a * (a @ d)
        b = a + h * d / np.linalg.norm(d)
        b /= np.linalg.norm(b)
        lhs, rhs = metric_decomposition_check(a, b)
        decomposition = max(decomposition, abs(lhs - rhs))
        checked += 1
    ok = subbundle < 1e-9 and hyper < 1e-12 and decomposition < h**3
    report(
        "criterion 8",
        ok,
        f"subbundle fidelity vs matrix oracle {subbundle:.1e} (< 1e-9); hyperbolic vs Hopf form {hyper:.1e} (< 1e-12); "
        f"metric decomposition residual {decomposition:.1e} at h=1e-4 (< h^3 = 1e-12)",
    )
    assert ok


def test_criterion_9_uhlmann_identification(seed):
    rng = crng(seed, 9)
    worst = 0.0
    for _ in range(100):
        C = to_subbundle(random_state(rng)).C
        X = b2_tangent(C, rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        worst = max(worst, float(np.max(np.abs(uhlmann_connection_form(C, X) - instanton_form_matrix(C, X)))))
    ok = worst < 1e-10
    report("criterion 9", ok, f"max |A_Uhlmann - A_instanton| over 100 B2 points = {worst:.1e} (< 1e-10)")
    assert ok


def test_criterion_10_evolution():
    c0 = lambda t: c_kappa_path(t, 0.0)  # noqa: E731
    rep = cyclic_evolve(c0, TWO_PI, steps=N)
    errs = [
        adiabatic_evolve(lambda t: c_kappa_path(t, np.pi / 6), n * TWO_PI, TWO_PI).distance_to_holonomy
        for n in (25, 50, 100, 200)
    ]
    monotone = all(a > b for a, b in zip(errs, errs[1:]))
    ok = rep.dynamical_phase_bound < 1e-10 and rep.distance_to_holonomy < 1e-3 and monotone
    report(
        "criterion 10",
        ok,
        f"cyclic C0: bound {rep.dynamical_phase_bound:.1e} (< 1e-10), distance {rep.distance_to_holonomy:.1e} (< 1e-3); "
        "adiabatic C_pi/6 errors at T=25,50,100,200 periods "
        + ", ".join(f"{e:.2e}" for e in errs)
        + (" (monotone)" if monotone else " (NOT monotone)"),
    )
    assert ok


def test_criterion_11_algebra(seed):
    rng = crng(seed, 11)
    g = gamma_set()
    clifford = max(
        (g[m] @ g[n] + g[n] @ g[m] - QMatrix.identity() * (2.0 * (m == n))).norm()
        for m, n in itertools.product(range(5), repeat=2)
    )
    Js = so3_generators()
    so3 = max((Js[a] @ Js[b] - Js[b] @ Js[a] - Js[c]).norm() for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)))
    quad = 0.0
    for _ in range(100):
        xi = _point(rng)
        quad = max(quad, (hamiltonian_from_quadrupole(quadrupole_of_point(xi)) - hamiltonian_of(xi)).norm())
    quat = 0.0
    for _ in range(1000):
        p, q, r = (Quaternion(*rng.normal(size=4)) for _ in range(3))
        quat = max(
            quat,
            float(np.max(np.abs((qmul(qmul(p, q), r) - qmul(p, qmul(q, r))).array))),
            abs((p * q).norm() - p.norm() * q.norm()),
            float(np.max(np.abs((qconj(p * q) - qconj(q) * qconj(p)).array))),
            float(np.max(np.abs((p * qinv(p) - ONE).array))),
        )
    worst = max(clifford, so3, quad, quat)
    ok = worst < 1e-10
    report(
        "criterion 11",
        ok,
        f"Clifford {clifford:.1e}, SO(3) commutators {so3:.1e}, H(X) vs Gamma.xi {quad:.1e}, quaternion laws {quat:.1e} (all < 1e-10)",
    )
    assert ok
