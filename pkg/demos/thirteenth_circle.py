"""
Twelve circles force a thirteenth
=================================

Six vertical lines from a confocal net, one arbitrary horizontal start, and
five cells used to grow the remaining horizontal lines.  The other black
cells of the 5 x 5 board were never imposed; their four lines still touch a
common circle.
"""
import itertools

import numpy as np

from icnets.confocal import ConfocalParams, base_point, elliptic_net_lines
from icnets.laguerre import coplanarity_residual
from icnets.net import fourth_line

rng = np.random.default_rng(5)
p = ConfocalParams(2.3, 0.8)
vert, _ = elliptic_net_lines(p, 1.1, 4.6, 0.4, 0.0, 0, 5)
ls = [nl.line for nl in vert]
ms = [base_point(rng.uniform(-4, 4), 1, p)]

imposed = [(j % 2, j) for j in range(5)]
for i, j in imposed:
    ms.append(fourth_line(p.cone, [ls[i], ls[i + 1], ms[j]]))

for i, j in itertools.product(range(5), range(5)):
    if (i + j) % 2 == 0:
        res = coplanarity_residual([ls[i], ls[i + 1], ms[j], ms[j + 1]])
        tag = "imposed" if (i, j) in imposed else "predicted"
        print(f"cell ({i}, {j})  {tag:9s}  {res:+.1e}")
