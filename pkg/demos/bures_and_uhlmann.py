"""Reduced density matrices: Bures fidelity, rapidity, Uhlmann parallelism.

Run with ``python demos/bures_and_uhlmann.py``.

The first-qubit density matrix of a pure two-qubit state has Bloch vector
``(xi1, xi2, xi0)`` and length ``R = sqrt(1 - C^2)``.  The phase ``chi`` of
``w`` is invisible to it, which is why the Bures fidelity of the reduced
states agrees with the pure-state fidelity only when both states have
``chi = 0``.
"""

import numpy as np

from qhopf.density import (
    b2_tangent,
    bures_fidelity,
    density_of_point,
    fidelity_hopf,
    fidelity_hyperbolic,
    instanton_form_matrix,
    rapidity_model,
    to_subbundle,
    uhlmann_connection_form,
)
from qhopf.hopf import S4Point, hopf_map, section_of_point
from qhopf.state import random_state, spinor_of_state

rng = np.random.default_rng(3)


def point_with_chi(chi):
    xi = rng.normal(size=5)
    xi /= np.linalg.norm(xi)
    c = np.hypot(xi[3], xi[4])
    xi[3], xi[4] = c * np.cos(chi), c * np.sin(chi)
    return S4Point(xi)


print("fidelity of pure states vs Bures fidelity of their reduced states")
for chi_b in (0.0, 0.5, 2.0):
    u = section_of_point(point_with_chi(0.0))
    v = section_of_point(point_with_chi(chi_b))
    f_pure = fidelity_hopf(u, v)
    f_bures = bures_fidelity(density_of_point(hopf_map(u)), density_of_point(hopf_map(v)))
    print(f"  chi_b = {chi_b:.1f}: pure {f_pure:.10f}   Bures {f_bures:.10f}")

print("\nthe same fidelity through Lorentz factors (cosine rule of hyperbolic space)")
for _ in range(3):
    u = spinor_of_state(random_state(rng))
    v = spinor_of_state(random_state(rng))
    print(f"  Hopf {fidelity_hopf(u, v):.15f}   hyperbolic {fidelity_hyperbolic(u, v):.15f}")

print("\nrapidity of the reduced state: beta = atanh(R), gamma = 1/C")
for R in (0.0, 0.6, 0.99):
    p = rapidity_model(density_of_point([R, 0, 0, np.sqrt(1 - R * R), 0]))
    print(f"  R = {R:.2f}: beta = {p.beta:.6f}, gamma = {p.gamma:.6f}")

# On the subbundle det C > 0 Uhlmann's connection for the purifications is
# the instanton connection of the Hopf bundle, written as an su(2) matrix.
C = to_subbundle(random_state(rng)).C
X = b2_tangent(C, rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
print("\nUhlmann connection form:\n", np.round(uhlmann_connection_form(C, X), 6))
print("instanton form:\n", np.round(instanton_form_matrix(C, X), 6))
