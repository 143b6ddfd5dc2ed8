"""Quaternionic holonomy around the C_kappa loops through the Bell state.

Run with ``python demos/holonomy_c_kappa.py``.

Each loop is the orbit of the Bell projector under ``exp(t S(kappa))``.
Going around once multiplies the state by a unit quaternion ``q`` acting
from the right, i.e. by a local unitary on the second qubit.  We compute
``q`` in two independent ways:

* numerically, by chaining overlaps of section spinors along 20000 samples;
* in closed form, from the generator and the start projector.
"""

import numpy as np

from qhopf.holonomy import (
    BELL_POINT,
    c_kappa_concurrence,
    c_kappa_holonomy,
    entangled_circle_points,
    holonomy_closed_form,
    latitude_points,
    loop_c_kappa,
    transport_loop,
    transport_sampled,
)
from qhopf.hopf import projector_of, section_of_point
from qhopf.state import invariants, state_of_spinor

np.set_printoptions(precision=6, suppress=True)

u0 = section_of_point(BELL_POINT)
P = projector_of(BELL_POINT)

print("kappa     closed form q                      numeric q (N=20000)                 distance")
for kappa in (0.0, np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2):
    loop = loop_c_kappa(kappa)
    _, closed = holonomy_closed_form(P, loop.S)
    numeric = transport_loop(loop.loop, u0=u0)
    print(f"{kappa:6.4f}   {closed.q.array}   {numeric.q.array}   {numeric.distance(closed.q):.1e}")
    assert closed.q.isclose(c_kappa_holonomy(kappa), atol=1e-12)

# Along the loop the concurrence changes, but the holonomy is local: the
# state returns with exactly the concurrence it started with.
t = np.linspace(0, 2 * np.pi, 9)
print("\nconcurrence along C_pi/6:", c_kappa_concurrence(t, np.pi / 6))
res = transport_loop(loop_c_kappa(np.pi / 6).loop, u0=u0)
before = invariants(state_of_spinor(u0)).concurrence
after = invariants(state_of_spinor(res.final_state)).concurrence
print(f"concurrence before {before:.15f}, after {after:.15f}")

# On the separable sphere the connection is the field of a monopole and the
# holonomy is the Abelian phase exp(-i * solid angle / 2).
print("\nlatitude loops on the separable sphere")
for theta in (np.pi / 6, np.pi / 3, np.pi / 2):
    q = transport_sampled(latitude_points(theta)).q
    expected = np.exp(-1j * np.pi * (1 - np.cos(theta)))
    print(f"  Theta = {theta:.4f}: q = {q.array}, exp(-i pi (1 - cos Theta)) = {expected:.6f}")

# Around the maximally entangled circle the state picks up a sign.
print("\nmaximally entangled circle, one turn:", transport_sampled(entangled_circle_points()).q.array)
