"""
Incircle centres and the QRT map
================================

The x-coordinate of each incircle centre splits into a factor depending on
the first lattice direction only.  Along that direction, in half steps, the
factor is an orbit of a QRT map whose invariant is cn^2(delta/2).
"""
import numpy as np

from icnets.confocal import ConfocalParams, discrete_confocal_factors
from icnets.dynamics import QrtParams, qrt_invariant, qrt_orbit
from icnets.elliptic import jacobi

p = ConfocalParams(2.0, 1.0)
delta, xi0 = 0.4, 0.13
_, cn, dn = jacobi(delta / 2, p.k)
qp = QrtParams((p.alpha * p.k) ** 2, cn / dn)


def f(m):
    return discrete_confocal_factors(xi0 + delta * m, 0.0, delta, p).f


orbit = qrt_orbit(f(0), f(0.5), qp, 200)
exact = np.array([f(i / 2) for i in range(len(orbit))])
inv = np.array([qrt_invariant(a, b, qp) for a, b in zip(orbit, orbit[1:])])

print(f"cn^2(delta/2)        = {cn * cn:.15f}")
print(f"invariant, first     = {inv[0]:.15f}")
print(f"invariant, drift     = {np.abs(inv - inv[0]).max():.1e}")
print(f"orbit vs closed form = {np.abs(np.array(orbit) - exact).max():.1e}")
