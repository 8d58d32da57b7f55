"""
kappa = 0: lines collapse in pairs
==================================

For the hyperbola x^2 - y^2 = 1 with kappa = 0 the second shift is exactly
2K.  Neighbouring lines then coincide with opposite orientation and every
other incircle shrinks to a point.
"""
import sys
from pathlib import Path

import numpy as np

from icnets.confocal import ConfocalParams, elliptic_net_lines, periodic_params
from icnets.net import CheckerboardNet, fill_incircles
from icnets.svg import render_svg

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
p = ConfocalParams(1.0, 1.0, "hyperbolic")
N = 32

s, s_tilde, psi0h = periodic_params(N, 0.0, p, psi0v=0.2)
print(f"s~ - 2K = {s_tilde - 2 * p.K:.2e}")

vert, horiz = elliptic_net_lines(p, s, s_tilde, 0.2, psi0h, 0, 2 * N)
net = fill_incircles(CheckerboardNet.from_net_lines(vert, horiz))

# l_{2j+1} and l_{2j+2} are the same line, oppositely oriented
gap = max(np.abs(vert[i].line.as_array() + vert[i + 1].line.as_array()).max() for i in range(1, 2 * N - 1, 2))
print(f"largest |l_odd + l_next| = {gap:.2e}")

radii = np.array([abs(c.r) for cell, c in net.circles.items() if c is not None and cell[0] % 2 == 1])
print(f"{radii.size} point circles, largest radius {radii.max():.2e}")

meta = {"kind": "hyperbolic", "params": {"alpha": p.alpha, "beta": p.beta}}
(out / "hyperbolic_degenerate.svg").write_text(render_svg(net, meta, show_conic=True))
