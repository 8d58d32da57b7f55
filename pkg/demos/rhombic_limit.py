"""
Nets near the rhombic one
=========================

The quadric diag(w0^2, -v0^2, -eps^2 D^2, eps^2) in (v, w, 1, d) degenerates
as eps -> 0; the generic stepper then produces lines of a rhombic grid
(normals +-(v0, +-w0), offsets in steps of 2D).  The gap shrinks like eps^2.
"""
import math

import numpy as np

from icnets.laguerre import OrientedLine
from icnets.net import build_net

v0, w0, D = 0.6, 0.8, 0.5


def rhombic(n, sw):
    m, odd = divmod(n, 2)
    return np.array([-v0, -sw * w0, -2 * (2 * m + 1) * D]) if odd else np.array([v0, sw * w0, 4 * m * D])


for eps in (1e-1, 1e-2, 1e-3):
    h = np.diag([w0 ** 2, -v0 ** 2, -(eps * D) ** 2, eps ** 2])
    v = math.sqrt((eps * D) ** 2 + v0 ** 2)
    w = math.sqrt(1 - v * v)
    net = build_net(h, h, OrientedLine(v, w, 0.0), OrientedLine(v, -w, 0.0), 6, 6, (-1, 1))
    gap = max(max(np.abs(net.vertical[i].as_array() - rhombic(i, 1)).max(),
                  np.abs(net.horizontal[i].as_array() - rhombic(i, -1)).max()) for i in range(7))
    print(f"eps = {eps:.0e}: distance to the rhombic net {gap:.2e}, / eps^2 = {gap / eps ** 2:.1f}")
