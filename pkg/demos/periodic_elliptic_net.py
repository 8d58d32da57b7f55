"""
A closed checkerboard net around an ellipse
===========================================

Lines tangent to the ellipse x^2/4 + y^2 = 1, stepped so that after 32 turns
the net closes on itself.  kappa = 0.1 keeps both families distinct; the
drawing goes to ``elliptic_net.svg``.
"""
import sys
from pathlib import Path

from icnets.confocal import ConfocalParams, elliptic_net_lines, periodic_params
from icnets.net import CheckerboardNet, fill_incircles, verify_net
from icnets.svg import render_svg

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
p = ConfocalParams(2.0, 1.0)
N = 32

s, s_tilde, psi0h = periodic_params(N, 0.1, p, psi0v=0.2)
print(f"k = {p.k:.6f}, K = {p.K:.6f}")
print(f"s = {s:.6f}, s~ = {s_tilde:.6f}, s + s~ - 4K = {s + s_tilde - 4 * p.K:.6f} (= 4K/N)")

vert, horiz = elliptic_net_lines(p, s, s_tilde, 0.2, psi0h, 0, 2 * N)
net = fill_incircles(CheckerboardNet.from_net_lines(vert, horiz))

# index 2N is index 0 again
print("closure:", max(abs(a - b) for a, b in zip(vert[2 * N].line.as_array(), vert[0].line.as_array())))

rep = verify_net(net, p.cone)
print(f"{len(net.black_cells())} cells, {rep.cells_at_infinity} with the circle at infinity")
print(f"worst contact {rep.max_contact:.2e}, worst coplanarity {rep.max_coplanarity:.2e}")

meta = {"kind": "elliptic", "params": {"alpha": p.alpha, "beta": p.beta}}
(out / "elliptic_net.svg").write_text(render_svg(net, meta, show_conic=True))
