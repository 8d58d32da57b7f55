"""Checkerboard IC-nets tangent to a conic, in closed form.

The lines are points of the base curve (the cone a v^2 + b w^2 = d^2 cut with
the cylinder), parametrized by Jacobi functions.  Every quantity here is an
explicit formula; the net module rebuilds the same nets geometrically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .elliptic import PoleError, complete_K, glaisher, jacobi
from .laguerre import OrientedLine

# the closed-form lines stop being usable this close to a pole
POLE_GUARD = 1e-10


@dataclass(frozen=True)
class ConfocalParams:
    """Semi-axes of the conic and which kind of conic it is.

    Elliptic: x^2/alpha^2 + y^2/beta^2 = 1 with alpha > beta > 0.
    Hyperbolic: x^2/alpha^2 - y^2/beta^2 = 1.
    """
    alpha: float
    beta: float
    kind: str = "elliptic"

    def __post_init__(self):
        if self.kind not in ("elliptic", "hyperbolic"):
            raise ValueError(f"unknown conic kind {self.kind!r}")
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("semi-axes must be positive")
        if self.kind == "elliptic" and not self.alpha > self.beta:
            raise ValueError("elliptic case needs alpha > beta")

    @property
    def k(self) -> float:
        a2, b2 = self.alpha ** 2, self.beta ** 2
        if self.kind == "elliptic":
            return math.sqrt(1.0 - b2 / a2)
        return math.sqrt(a2 / (a2 + b2))

    @property
    def K(self) -> float:
        return complete_K(self.k)

    @property
    def cone(self) -> np.ndarray:
        """The degenerate quadric of the pencil, in (v, w, 1, d)."""
        sign = 1.0 if self.kind == "elliptic" else -1.0
        return np.diag([self.alpha ** 2, sign * self.beta ** 2, 0.0, -1.0])

    def hyperboloid(self, lam: float) -> np.ndarray:
        """Pencil member through the base curve with parameter lam."""
        a2, b2 = self.alpha ** 2, self.beta ** 2
        if self.kind == "elliptic":
            return np.diag([a2 + lam, b2 + lam, -lam, -1.0])
        return np.diag([a2 + lam, -(b2 - lam), -lam, -1.0])


def base_point_elliptic(psi: float, branch: int, p: ConfocalParams) -> OrientedLine:
    sn, cn, dn = jacobi(psi, p.k)
    return OrientedLine(cn, sn, branch * p.alpha * dn)


def base_point_hyperbolic(psi: float, branch: int, p: ConfocalParams) -> OrientedLine:
    k = p.k
    sn, cn, dn = jacobi(psi, k)
    return OrientedLine(branch * dn, k * sn, p.alpha * cn)


def base_point(psi: float, branch: int, p: ConfocalParams) -> OrientedLine:
    if p.kind == "elliptic":
        return base_point_elliptic(psi, branch, p)
    return base_point_hyperbolic(psi, branch, p)


def lambda_from_s_elliptic(s: float, p: ConfocalParams, same_branch: bool = False) -> float:
    """Pencil parameter of the quadric whose generators shift psi by s.

    Cross-branch generators join the two components (lam >= 0); same-branch
    ones stay on one component (lam <= -beta^2).
    """
    if same_branch:
        return -p.beta ** 2 * glaisher("nd", 0.5 * s, p.k) ** 2
    return p.alpha ** 2 * glaisher("cs", 0.5 * s, p.k) ** 2


def lambda_from_s_hyperbolic(s: float, p: ConfocalParams, same_branch: bool = False) -> float:
    k = p.k
    if same_branch:
        return (p.alpha ** 2 + p.beta ** 2) * glaisher("ds", 0.5 * s, k) ** 2
    _, cn, _ = jacobi(0.5 * s, k)
    return -p.alpha ** 2 * cn * cn


def lambda_from_s(s: float, p: ConfocalParams, same_branch: bool = False) -> float:
    if p.kind == "elliptic":
        return lambda_from_s_elliptic(s, p, same_branch)
    return lambda_from_s_hyperbolic(s, p, same_branch)


def s_from_lambda(lam: float, p: ConfocalParams) -> float:
    """Shift s in (0, 2K] of the cross-branch generators of the quadric lam."""
    K = p.K
    if p.kind == "elliptic":
        if lam < 0:
            raise ValueError("cross-branch quadrics have lam >= 0")
        if lam == 0:
            return 2 * K
        f = lambda x: lambda_from_s_elliptic(2 * x, p) - lam
        return 2 * brentq(f, 1e-12 * K, K, xtol=1e-15, rtol=1e-15)
    if not (-p.alpha ** 2 <= lam <= 0):
        raise ValueError("cross-branch quadrics have -alpha^2 <= lam <= 0")
    if lam == 0:
        return 2 * K
    if lam == -p.alpha ** 2:
        return 0.0
    f = lambda x: lambda_from_s_hyperbolic(2 * x, p) - lam
    return 2 * brentq(f, 0.0, K, xtol=1e-15, rtol=1e-15)


def periodic_params(n: int, kappa: float, p: ConfocalParams, psi0v: float) -> tuple[float, float, float]:
    """(s, s_tilde, psi0h) of a net closing up after 2n lines in each family.

    kappa = 0 makes the second quadric the cone, which collapses every other
    row and column to zero-radius circles.
    """
    if n < 1:
        raise ValueError("period must be positive")
    K = p.K
    s = 2 * K + 4 * K / n - kappa
    s_tilde = 2 * K + kappa
    return s, s_tilde, psi0v + 4 * K / n - kappa


@dataclass(frozen=True)
class NetLine:
    family: str  # "v" or "h"
    index: int
    line: OrientedLine
    psi: float
    branch: int


def _check_pole(s: float, k: float, what: str):
    sn, _, _ = jacobi(0.5 * s, k)
    if abs(sn) < POLE_GUARD:
        raise PoleError(what, s)


def net_line(family: str, index: int, p: ConfocalParams, s: float, s_tilde: float, psi0: float) -> NetLine:
    n, odd = divmod(index, 2)
    step = n * (s + s_tilde) + odd * s
    psi = psi0 + step if family == "v" else psi0 - step
    branch = -1 if odd else 1
    return NetLine(family, index, base_point(psi, branch, p), psi, branch)


def elliptic_net_lines(p: ConfocalParams, s: float, s_tilde: float, psi0v: float, psi0h: float,
                       i_min: int, i_max: int) -> tuple[list[NetLine], list[NetLine]]:
    """Both line families of the checkerboard IC-net with shifts s, s_tilde.

    Line i of a family uses branch (-1)^i; the vertical family moves forward
    in psi, the horizontal one backward.  Works for both conic kinds.
    """
    _check_pole(s, p.k, "s")
    _check_pole(s_tilde, p.k, "s_tilde")
    rng = range(i_min, i_max + 1)
    vert = [net_line("v", i, p, s, s_tilde, psi0v) for i in rng]
    horiz = [net_line("h", i, p, s, s_tilde, psi0h) for i in rng]
    return vert, horiz


# -- IC-net coordinates and confocal quadrics -----------------------------------

@dataclass(frozen=True)
class ICNetCoords:
    """Lattice position (m1, m2 in half-integers) of a point of an IC-net
    with step delta and start indices n0v, n0h."""
    m1: float
    m2: float
    n0v: float
    n0h: float
    delta: float

    @property
    def xi1(self) -> float:
        return self.delta * (self.m1 + 0.5 * (self.n0v + self.n0h))

    @property
    def xi2(self) -> float:
        return self.delta * (self.m2 + 0.5 * (self.n0v - self.n0h))


def ic_net_line(family: str, n: int, n0: float, delta: float, p: ConfocalParams) -> OrientedLine:
    """Line n of an IC-net tangent to the ellipse (all on the + branch)."""
    arg = delta * (n0 + n) if family == "v" else delta * (n0 - n)
    return base_point_elliptic(arg, 1, p)


def intersection_point(xi1: float, xi2: float, p: ConfocalParams) -> tuple[float, float]:
    k = p.k
    kp2 = (1 - k) * (1 + k)
    x = p.alpha * glaisher("cd", xi1, k) * glaisher("dc", xi2, k)
    y = p.alpha * kp2 * glaisher("sd", xi1, k) * glaisher("nc", xi2, k)
    return x, y


def confocal_conic_params(xi1: float, xi2: float, p: ConfocalParams) -> tuple[float, float, float, float]:
    """Squared semi-axes of the confocal ellipse and hyperbola through the
    intersection point: x^2/lam + y^2/mu = 1 for each."""
    k = p.k
    a2 = p.alpha ** 2
    kp2 = (1 - k) * (1 + k)
    lam_e = a2 * glaisher("dc", xi2, k) ** 2
    mu_e = a2 * kp2 * glaisher("nc", xi2, k) ** 2
    lam_h = a2 * k * k * glaisher("cd", xi1, k) ** 2
    mu_h = -a2 * k * k * kp2 * glaisher("sd", xi1, k) ** 2
    return lam_e, mu_e, lam_h, mu_h


def circle_center(xi1: float, xi2: float, delta: float, p: ConfocalParams) -> tuple[float, float]:
    """Centre of the incircle whose cell has lower-left corner (xi1, xi2)."""
    k = p.k
    kp2 = (1 - k) * (1 + k)
    h = 0.5 * delta
    x = p.alpha * glaisher("dc", h, k) * glaisher("cd", xi1, k) * glaisher("dc", xi2 + h, k)
    y = p.alpha * kp2 * glaisher("nc", h, k) * glaisher("sd", xi1, k) * glaisher("nc", xi2 + h, k)
    return x, y


class SuperdiscreteError(ValueError):
    """Step so large that cn(delta/2) <= 0; the square-root factors are not real."""


@dataclass(frozen=True)
class ConfocalFactors:
    f: float
    g: float
    f_tilde: float
    g_tilde: float
    A: float
    B: float
    ab_diff: float


def discrete_confocal_factors(xi1: float, xi2: float, delta: float, p: ConfocalParams) -> ConfocalFactors:
    """Split the incircle centre into one-variable factors,
    (x, y) = (f f~, g g~) / sqrt(a - b)."""
    k = p.k
    kp = math.sqrt((1 - k) * (1 + k))
    h = 0.5 * delta
    _, cnh, dnh = jacobi(h, k)
    if cnh <= 0:
        raise SuperdiscreteError(f"cn(delta/2) = {cnh} <= 0")
    al = p.alpha
    ak = abs(al * k)
    dch, nch = dnh / cnh, 1.0 / cnh
    f = ak * math.sqrt(dch) * glaisher("cd", xi1, k)
    g = ak * kp * math.sqrt(nch) * glaisher("sd", xi1, k)
    ft = al * math.sqrt(dch) * glaisher("dc", xi2 + h, k)
    gt = al * kp * math.sqrt(nch) * glaisher("nc", xi2 + h, k)
    return ConfocalFactors(f, g, ft, gt, cnh / dnh, cnh, (al * k) ** 2)
