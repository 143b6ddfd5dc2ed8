"""Where a two-qubit state sits on S^4, and what that says about its entanglement.

Run with ``python demos/entanglement_geometry.py``.

A normalized two-qubit state packs into a quaternionic spinor ``(u0, u1)``.
Projecting along the quaternionic phase gives a point ``xi`` on S^4 whose
coordinates are the Bloch vector of the first qubit together with
``w = xi3 + i xi4``; the length ``|w|`` is the concurrence.  The second
qubit lives in the fiber over ``xi``.
"""

import numpy as np

from qhopf.geodesics import nearest_separable, schmidt_transport
from qhopf.hopf import hopf_map
from qhopf.state import invariants, random_state, schmidt_svd, spinor_of_state, state_from_unit_amplitudes

np.set_printoptions(precision=4, suppress=True)

# ----------------------------------------------------------------------
# a few reference states
# ----------------------------------------------------------------------
r2 = np.sqrt(2.0)
states = {
    "|00>": state_from_unit_amplitudes([1, 0, 0, 0]),
    "Bell": state_from_unit_amplitudes([1 / r2, 0, 0, 1 / r2]),
    "partial": state_from_unit_amplitudes([0.6 + 0.1j, 0.2 - 0.3j, 0.1 + 0.5j, -0.2 + np.sqrt(0.2) * 1j]),
}

print("point on S^4 and entanglement")
for name, s in states.items():
    inv = invariants(s)
    xi = hopf_map(spinor_of_state(s)).xi
    print(f"  {name:8s} xi = {xi}   C = {inv.concurrence:.4f}   |w| = {np.hypot(xi[3], xi[4]):.4f}   S = {inv.entropy:.4f}")

# ----------------------------------------------------------------------
# the closest product state
# ----------------------------------------------------------------------
# The separable states form the 2-sphere w = 0.  The geodesic distance D to
# the nearest one obeys cos^2(D/2) = lambda_plus, the larger Schmidt weight.
print("\nnearest separable state")
for name, s in states.items():
    ns = nearest_separable(spinor_of_state(s))
    lam = invariants(s).lambda_plus
    flag = "  (not unique)" if ns.degenerate else ""
    print(f"  {name:8s} D = {ns.delta:.6f}   cos^2(D/2) = {np.cos(ns.delta / 2) ** 2:.12f}   lambda+ = {lam:.12f}{flag}")

# ----------------------------------------------------------------------
# Schmidt decomposition without diagonalizing anything
# ----------------------------------------------------------------------
# Carry the state along the geodesic to the fiber over the nearest product
# state; the quaternionic phase picked up on arrival is the second-qubit
# Schmidt vector.  Compare with a plain SVD of the amplitude matrix.
rng = np.random.default_rng(7)
worst = 0.0
for _ in range(200):
    s = random_state(rng)
    a, b = schmidt_svd(s), schmidt_transport(s)
    worst = max(worst, np.max(np.abs(a.product_terms() - b.product_terms())))
print(f"\nSchmidt by transport vs SVD over 200 random states: max deviation {worst:.2e}")

s = states["partial"]
f = schmidt_transport(s)
print(f"  partial state: sigma = {f.sigma:.4f}, phi = {f.phi:.4f}, tau = {f.tau:.4f}, epsilon = {f.epsilon:.4f}")
print(f"  Schmidt coefficients {f.D} vs SVD {schmidt_svd(s).D}")
