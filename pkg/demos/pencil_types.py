"""
Which pencil does a conic span with the circle?
===============================================

A conic S and the circle v^2 + w^2 = z^2 span a pencil; its type is read off
from the real base points and the roots of det(S + lambda Z).
"""
import numpy as np

from icnets.pencil import base_points, classify, conic_from_entries, cubic_roots

conics = {
    "w^2 = 1/2": (0, 0, 0, 1, 0, -0.5),
    "w^2 = 9/4": (0, 0, 0, 1, 0, -2.25),
    "w (w - 1) = 0": (0, 0, 0, 1, -0.5, 0),
    "(w - 1)^2 = 0": (0, 0, 0, 1, -1, 1),
    "v^2 - w^2 = 0": (1, 0, 0, -1, 0, 0),
    "v^2 + w^2 = 0": (1, 0, 0, 1, 0, 0),
}
for name, entries in conics.items():
    s = conic_from_entries(*entries)
    real = [bp.multiplicity for bp in base_points(s) if bp.real]
    roots = [f"{complex(r).real:+.3g}x{m}" for r, m in cubic_roots(s)]
    print(f"{name:15s} {classify(s).value:5s} real base points {real!s:12s} roots {' '.join(roots)}")
