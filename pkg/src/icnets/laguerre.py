"""Oriented lines, oriented circles and Laguerre transformations.

An oriented line (v, w, d) is the set v*x + w*y = d with unit normal (v, w);
it is also a point on the cylinder v^2 + w^2 = 1.  An oriented circle with
centre (cx, cy) and signed radius r is in oriented contact with the line
exactly when cx*v + cy*w - r = d, i.e. circles are planes cutting the cylinder.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SINGULAR_TOL = 1e-12


class DegenerateError(ValueError):
    """Raised when a geometric construction has no (unique) answer."""


@dataclass(frozen=True)
class OrientedLine:
    v: float
    w: float
    d: float

    def __post_init__(self):
        n = float(np.hypot(self.v, self.w))
        if not np.isfinite(n) or n < 1e-300:
            raise DegenerateError("oriented line needs a nonzero normal")
        object.__setattr__(self, "v", float(self.v) / n)
        object.__setattr__(self, "w", float(self.w) / n)
        object.__setattr__(self, "d", float(self.d) / n)

    def __neg__(self) -> "OrientedLine":
        return OrientedLine(-self.v, -self.w, -self.d)

    def as_array(self) -> np.ndarray:
        return np.array([self.v, self.w, self.d])

    @classmethod
    def from_array(cls, p) -> "OrientedLine":
        return cls(p[0], p[1], p[2])

    def homogeneous(self) -> np.ndarray:
        """Point (v, w, 1, d) of the cylinder in homogeneous coordinates."""
        return np.array([self.v, self.w, 1.0, self.d])


@dataclass(frozen=True)
class OrientedCircle:
    cx: float
    cy: float
    r: float

    def as_array(self) -> np.ndarray:
        return np.array([self.cx, self.cy, self.r])


def contact_residual(line: OrientedLine, circle: OrientedCircle) -> float:
    return circle.cx * line.v + circle.cy * line.w - circle.r - line.d


def incircle_of_three(l1: OrientedLine, l2: OrientedLine, l3: OrientedLine) -> OrientedCircle:
    """The unique oriented circle touching three oriented lines."""
    a = np.array([[l.v, l.w, -1.0] for l in (l1, l2, l3)])
    rhs = np.array([l.d for l in (l1, l2, l3)])
    if abs(np.linalg.det(a)) < SINGULAR_TOL:
        raise DegenerateError("the three lines do not determine a single circle")
    cx, cy, r = np.linalg.solve(a, rhs)
    return OrientedCircle(float(cx), float(cy), float(r))


def coplanarity_residual(lines) -> float:
    """det of the rows (1, v, w, d); zero iff the four lines touch a common circle."""
    lines = list(lines)
    if len(lines) != 4:
        raise ValueError("need exactly four lines")
    m = np.array([[1.0, l.v, l.w, l.d] for l in lines])
    return float(np.linalg.det(m))


def intersection(l1: OrientedLine, l2: OrientedLine) -> np.ndarray:
    a = np.array([[l1.v, l1.w], [l2.v, l2.w]])
    if abs(np.linalg.det(a)) < SINGULAR_TOL:
        raise DegenerateError("parallel lines")
    return np.linalg.solve(a, np.array([l1.d, l2.d]))


# Lorentz form on the (v, w, 1) part of a line.
Z3 = np.diag([1.0, 1.0, -1.0])
# Cylinder v^2 + w^2 - 1 = 0 as a quadric in (v, w, 1, d).
CYLINDER = np.diag([1.0, 1.0, -1.0, 0.0])

# Lift (v, w, 1, d) -> (v, w, 1, 2d) used by the transform matrices.
_LIFT = np.diag([1.0, 1.0, 1.0, 2.0])
_UNLIFT = np.diag([1.0, 1.0, 1.0, 0.5])


def is_lorentz(b, tol: float = 1e-9) -> bool:
    b = np.asarray(b, dtype=float)
    return b.shape == (3, 3) and np.allclose(b.T @ Z3 @ b, Z3, atol=tol * max(1.0, np.abs(b).max() ** 2))


@dataclass(frozen=True, eq=False)
class LaguerreTransform:
    """4x4 matrix [[lam*B, 0], [b^T, 1]] acting on (v, w, 1, 2d).

    B preserves diag(1, 1, -1); lam > 0 rescales distances.
    """
    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("Laguerre transform needs a 4x4 matrix")
        if np.abs(m[:3, 3]).max() > 1e-12 or abs(m[3, 3] - 1.0) > 1e-12:
            raise ValueError("last column must be (0, 0, 0, 1)")
        top = m[:3, :3]
        lam = np.sqrt(abs(np.linalg.det(top))) ** (2.0 / 3.0)
        if lam < 1e-14 or not is_lorentz(top / lam):
            raise ValueError("upper block is not a multiple of a Lorentz matrix")
        object.__setattr__(self, "m", m)

    @classmethod
    def from_parts(cls, b, shift, scale: float = 1.0) -> "LaguerreTransform":
        m = np.zeros((4, 4))
        m[:3, :3] = scale * np.asarray(b, dtype=float)
        m[3, :3] = shift
        m[3, 3] = 1.0
        return cls(m)

    def inverse(self) -> "LaguerreTransform":
        return LaguerreTransform(np.linalg.inv(self.m))

    def compose(self, other: "LaguerreTransform") -> "LaguerreTransform":
        """self after other."""
        return LaguerreTransform(self.m @ other.m)

    def on_homogeneous(self) -> np.ndarray:
        """The same map written on (v, w, 1, d) coordinates."""
        return _UNLIFT @ self.m @ _LIFT


def apply(t: LaguerreTransform, line: OrientedLine) -> OrientedLine:
    p = t.m @ np.array([line.v, line.w, 1.0, 2.0 * line.d])
    s = p[2]
    if abs(s) < 1e-14:
        raise DegenerateError("line is sent to infinity")
    return OrientedLine(p[0] / s, p[1] / s, 0.5 * p[3] / s)


def transform_quadric(t: LaguerreTransform, q) -> np.ndarray:
    """Quadric (in (v, w, 1, d)) whose points are the images of the points of q."""
    h_inv = np.linalg.inv(t.on_homogeneous())
    return h_inv.T @ np.asarray(q, dtype=float) @ h_inv


def euclidean(rot, delta) -> LaguerreTransform:
    """Laguerre transform induced by the motion x -> rot @ x + delta."""
    rot = np.asarray(rot, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if rot.shape != (2, 2) or not np.allclose(rot.T @ rot, np.eye(2), atol=1e-12):
        raise ValueError("rot must be a 2x2 orthogonal matrix")
    b = np.eye(3)
    b[:2, :2] = rot
    shift = np.zeros(3)
    shift[:2] = 2.0 * rot.T @ delta
    return LaguerreTransform.from_parts(b, shift)


def confocal_parameters(x: float, y: float, a: float, b: float) -> tuple[float, float]:
    """Both t with x^2/(a+t) + y^2/(b+t) = 1, sorted ascending.

    These label the two conics of the confocal family through (x, y).
    """
    p = a + b - x * x - y * y
    q = a * b - x * x * b - y * y * a
    disc = p * p - 4.0 * q
    if disc < 0.0:
        if disc < -1e-12 * max(1.0, p * p):
            raise DegenerateError("no real confocal parameters")
        disc = 0.0
    root = np.sqrt(disc)
    # stable quadratic roots
    t1 = -0.5 * (p + np.copysign(root, p)) if p != 0 else -0.5 * root
    t2 = q / t1 if t1 != 0 else 0.5 * root
    return tuple(sorted((float(t1), float(t2))))
