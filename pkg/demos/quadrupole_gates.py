"""Driving the holonomy with a quadrupole Hamiltonian.

Run with ``python demos/quadrupole_gates.py``.

``H(xi) = Gamma . xi`` is a 4-level Hamiltonian with two doubly degenerate
levels at +1 and -1.  Its +1 level is exactly the fiber over ``xi``, so
moving ``xi`` around a loop moves the state around the bundle.

* Slowly (adiabatic): the +1 doublet returns mixed by the holonomy, up to a
  dynamical phase and an error that shrinks like 1/T.
* At any speed (cyclic): the Hamiltonian ``[H(eta), H(d eta/dt)] / 4``
  generates parallel transport directly and carries no dynamical phase.
"""

import numpy as np

from qhopf.evolution import adiabatic_evolve, cyclic_evolve, quadrupole_of_point
from qhopf.holonomy import BELL_POINT, c_kappa_holonomy, c_kappa_path
from qhopf.hopf import section_of_point

np.set_printoptions(precision=4, suppress=True)
two_pi = 2 * np.pi

print("Bell point as a quadrupole tensor:")
print(quadrupole_of_point(BELL_POINT).X)

kappa = np.pi / 6
target = c_kappa_holonomy(kappa)
print(f"\ntarget gate for C_pi/6: q = {target.array}")


def loop(t):
    return c_kappa_path(t, kappa)


print("\nadiabatic ramp (T in loop periods)")
for periods in (25, 50, 100, 200):
    rep = adiabatic_evolve(loop, periods * two_pi, two_pi)
    print(f"  T = {periods:3d}: g = {rep.geometric_phase.array}, distance to holonomy {rep.distance_to_holonomy:.2e}")

rep = cyclic_evolve(loop, two_pi)
print("\ncyclic evolution, one period")
print(f"  g = {rep.geometric_phase.array}, distance to holonomy {rep.distance_to_holonomy:.1e}")
print(f"  max |<u|S|u>| along the way: {rep.dynamical_phase_bound:.1e}")

# Gates compose: transport commutes with the right action, so starting the
# second loop from the output of the first lands on u0 q2 q1.
u0 = section_of_point(BELL_POINT)
r1 = cyclic_evolve(lambda t: c_kappa_path(t, 0.4), two_pi, reference_steps=0)
r2 = cyclic_evolve(lambda t: c_kappa_path(t, 1.1), two_pi, reference_steps=0)
chained = cyclic_evolve(lambda t: c_kappa_path(t, 1.1), two_pi, u0=r1.final_state, reference_steps=0)
expected = u0.gauge(r2.geometric_phase * r1.geometric_phase)
print(f"\ncomposition: |chained - u0 q2 q1| = {np.max(np.abs(chained.final_state.array - expected.array)):.1e}")
