"""Pencils spanned by a conic S and the circle Z = diag(1, 1, -1).

Quadrics live in homogeneous (v, w, 1, d) coordinates as symmetric 4x4
arrays; conics as symmetric 3x3 arrays in (v, w, 1).
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .laguerre import Z3, LaguerreTransform

# relative size below which polynomial values / derivatives count as zero
ROOT_TOL = 1e-12
# imaginary parts below this (relative) are rounding noise
IMAG_TOL = 1e-9
# two surviving simple roots closer than this are too close to call
AMBIGUOUS_GAP = 1e-5


class PencilType(str, enum.Enum):
    Ia = "Ia"
    Ib = "Ib"
    Ic = "Ic"
    IIa = "IIa"
    IIb = "IIb"
    IIIa = "IIIa"
    IIIb = "IIIb"
    IV = "IV"
    V = "V"

    @property
    def diagonalizable(self) -> bool:
        return self in _DIAGONALIZABLE


_DIAGONALIZABLE = {PencilType.Ia, PencilType.Ic, PencilType.IIIa, PencilType.IIIb}


class UnresolvedClassification(ValueError):
    """Root multiplicities could not be decided at working precision."""


class NotDiagonalizable(ValueError):
    def __init__(self, ptype: PencilType):
        self.ptype = ptype
        super().__init__(f"pencil of type {ptype.value} cannot be diagonalized by a Lorentz matrix")


class PreNormalizationError(ValueError):
    """The quadric has no d^2 term, so it cannot be brought to block form."""


class ImproperNetError(ValueError):
    """The normalized pencil has fewer than a curve's worth of real lines."""


def _sym(a, n: int) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got shape {a.shape}")
    return 0.5 * (a + a.T)


def conic_from_entries(s11, s12, s13, s22, s23, s33) -> np.ndarray:
    return np.array([[s11, s12, s13], [s12, s22, s23], [s13, s23, s33]], dtype=float)


def quadric_from_entries(entries) -> np.ndarray:
    """Upper triangle of a 4x4 symmetric matrix, row by row (10 numbers)."""
    entries = list(entries)
    if len(entries) != 10:
        raise ValueError("a quadric needs 10 entries")
    q = np.zeros((4, 4))
    it = iter(entries)
    for i in range(4):
        for j in range(i, 4):
            q[i, j] = q[j, i] = next(it)
    return q


# -- pre-normalization -------------------------------------------------------

def pre_normalize(q) -> tuple[LaguerreTransform, np.ndarray]:
    """Split off the mixed (v, w, 1)-d terms of a quadric.

    Returns (A, q_norm) with q_norm = diag-block [[S, 0], [0, -1]].  A maps
    lines of the normalized frame to lines of the original frame.
    """
    q = _sym(q, 4)
    if abs(q[3, 3]) < 1e-14 * max(1.0, np.abs(q).max()):
        raise PreNormalizationError("quadric has no d^2 term")
    qt = q / -q[3, 3]
    a = qt[:3, 3].copy()
    h = np.eye(4)
    h[3, :3] = a
    q_norm = h.T @ qt @ h
    q_norm[:3, 3] = 0.0
    q_norm[3, :3] = 0.0
    shift = np.zeros(3)
    shift[:] = 2.0 * a
    return LaguerreTransform.from_parts(np.eye(3), shift), q_norm


# -- characteristic cubic ------------------------------------------------------

def characteristic_cubic(s) -> np.ndarray:
    """Coefficients of det(S + lam Z), highest power first."""
    s = _sym(s, 3)
    minor = lambda i: np.linalg.det(np.delete(np.delete(s, i, 0), i, 1))
    c2 = -s[0, 0] - s[1, 1] + s[2, 2]
    c1 = minor(0) + minor(1) - minor(2)
    c0 = np.linalg.det(s)
    return np.array([-1.0, c2, c1, c0])


def _poly_scale(coeffs, x) -> float:
    """Size of the terms of a polynomial at x, for relative zero tests."""
    ax = abs(x)
    n = len(coeffs) - 1
    return sum(abs(c) * ax ** (n - i) for i, c in enumerate(coeffs)) + 1e-300


def _is_zero(coeffs, x, size=None) -> bool:
    """|p(x)| negligible.  ``size`` is a polynomial bounding the magnitude of
    the data the coefficients were computed from; without it the coefficients
    themselves set the scale, which is too strict after cancellation."""
    scale = _poly_scale(coeffs, x)
    if size is not None:
        scale = max(scale, _poly_scale(size, x))
    return abs(np.polyval(coeffs, x)) <= ROOT_TOL * scale


def _size_poly(s, degree: int, entry_power) -> np.ndarray:
    """Magnitude bound (highest first) for a polynomial whose x^i coefficient
    is built from entries of s to the power entry_power(i)."""
    n = float(np.abs(s).max())
    return np.array([n ** entry_power(degree - i) for i in range(degree + 1)])


def cubic_roots(s) -> list[tuple[complex, int]]:
    """Roots of the characteristic cubic with multiplicities.

    Multiple roots are located through the derivatives, which keeps them
    accurate where the companion-matrix roots scatter.
    """
    c = characteristic_cubic(s)
    d1 = np.polyder(c)
    d2 = np.polyder(d1)
    # the lam^i coefficient is a sum of (3 - i)-minors of S
    size = 6.0 * _size_poly(_sym(s, 3), 3, lambda i: 3 - i)
    size[0] = 1.0
    dsize = np.polyder(size)
    lt = -d2[1] / d2[0]
    if _is_zero(c, lt, size) and _is_zero(d1, lt, dsize):
        return [(lt, 3)]
    for mu in np.roots(d1):
        if abs(mu.imag) <= IMAG_TOL * (1 + abs(mu)):
            mu = mu.real
            if _is_zero(c, mu, size):
                other = -c[1] / c[0] - 2 * mu
                return sorted([(mu, 2), (other, 1)], key=lambda p: p[0])
    roots = np.roots(c)
    out = []
    for r in roots:
        out.append((r.real if abs(r.imag) <= IMAG_TOL * (1 + abs(r)) else complex(r), 1))
    return sorted(out, key=lambda p: (np.imag(p[0]) != 0, np.real(p[0]), np.imag(p[0])))


def _cubic_pattern(s) -> tuple:
    roots = cubic_roots(s)
    real = sorted(m for r, m in roots if not isinstance(r, complex))
    ncomplex = sum(m for r, m in roots if isinstance(r, complex))
    return tuple(real), ncomplex


# -- base points -------------------------------------------------------------

@dataclass(frozen=True)
class BasePoint:
    """Common point of the conic and the circle, as homogeneous (v, w, z)."""
    point: np.ndarray
    multiplicity: int
    real: bool

    @property
    def vw(self) -> tuple[float, float]:
        if not self.real:
            raise ValueError("complex base point")
        return float(self.point[0].real), float(self.point[1].real)


_PARAM = [np.array([1.0, 0.0, -1.0]), np.array([0.0, 2.0]), np.array([1.0, 0.0, 1.0])]


def _rotation3(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _half_angle_quartic(s) -> np.ndarray:
    """Coefficients (highest first) of (1-t^2, 2t, 1+t^2) S (...)^T."""
    acc = np.zeros(5)
    for i in range(3):
        for j in range(3):
            term = P.polymul(_PARAM[i], _PARAM[j]) * s[i, j]
            acc[: len(term)] += term
    return acc[::-1]


def _cluster(coeffs, roots, size=None):
    """Group polynomial roots into (centre, multiplicity) by checking that the
    first m-1 derivatives vanish at the centre of each candidate group."""
    remaining = list(roots)
    groups = []
    derivs = [coeffs]
    sizes = [size]
    for _ in range(4):
        derivs.append(np.polyder(derivs[-1]))
        sizes.append(None if size is None else np.polyder(sizes[-1]))
    for m in (4, 3, 2):
        found = True
        while found and len(remaining) >= m:
            found = False
            for idx in itertools.combinations(range(len(remaining)), m):
                pts = np.array([remaining[i] for i in idx])
                centre = pts.mean()
                if np.abs(pts - centre).max() > 1e-2 * (1 + abs(centre)):
                    continue
                if all(_is_zero(derivs[j], centre, sizes[j]) for j in range(m)):
                    groups.append((centre, m))
                    remaining = [r for i, r in enumerate(remaining) if i not in idx]
                    found = True
                    break
    for i, j in itertools.combinations(range(len(remaining)), 2):
        if abs(remaining[i] - remaining[j]) < AMBIGUOUS_GAP * (1 + abs(remaining[i])):
            raise UnresolvedClassification("base points too close to decide their multiplicity")
    groups.extend((r, 1) for r in remaining)
    return groups


def base_points(s) -> list[BasePoint]:
    """Common points of the conic S and the circle, with multiplicities
    (four in total, counted over the complex numbers)."""
    s = _sym(s, 3)
    if np.abs(s).max() == 0:
        raise UnresolvedClassification("zero conic")
    # Rotate so that the parameter value t = infinity is far from any root:
    # a dominant leading coefficient bounds all roots of the quartic.
    best = None
    for phi in np.linspace(0.0, 2 * math.pi, 24, endpoint=False) + 0.1234:
        quartic = _half_angle_quartic(_rotation3(phi).T @ s @ _rotation3(phi))
        val = abs(quartic[0]) / max(np.abs(quartic).max(), 1e-300)
        if best is None or val > best[0]:
            best = (val, phi, quartic)
    _, phi, quartic = best
    rot = _rotation3(phi)
    if np.abs(quartic).max() <= 1e-12 * np.abs(s).max():
        raise UnresolvedClassification("the conic contains the whole circle")
    size = 16.0 * _size_poly(s, 4, lambda i: 1)
    out = []
    for t, m in _cluster(quartic, np.roots(quartic), size):
        is_real = abs(np.imag(t)) <= IMAG_TOL * (1 + abs(t))
        if is_real:
            t = float(np.real(t))
        hom = rot @ np.array([1 - t * t, 2 * t, 1 + t * t])
        if is_real:
            hom = np.real(hom) / np.real(hom[2])
        else:
            hom = hom / np.linalg.norm(hom)
        out.append(BasePoint(hom, m, bool(is_real)))
    return out


_TABLE = {
    ((1, 1, 1, 1), ()): PencilType.Ia,
    ((1, 1), (1, 1)): PencilType.Ib,
    ((), (1, 1, 1, 1)): PencilType.Ic,
    ((1, 1, 2), ()): PencilType.IIa,
    ((2,), (1, 1)): PencilType.IIb,
    ((2, 2), ()): PencilType.IIIa,
    ((), (2, 2)): PencilType.IIIb,
    ((1, 3), ()): PencilType.IV,
    ((4,), ()): PencilType.V,
}

_EXPECTED_CUBIC = {
    PencilType.Ia: ((1, 1, 1), 0),
    PencilType.Ib: ((1,), 2),
    PencilType.Ic: ((1, 1, 1), 0),
    PencilType.IIa: ((1, 2), 0),
    PencilType.IIb: ((1, 2), 0),
    PencilType.IIIa: ((1, 2), 0),
    PencilType.IIIb: ((1, 2), 0),
    PencilType.IV: ((3,), 0),
    PencilType.V: ((3,), 0),
}


def classify(s) -> PencilType:
    """Type of the pencil spanned by the conic S and the circle."""
    pts = base_points(s)
    real = tuple(sorted(p.multiplicity for p in pts if p.real))
    cplx = tuple(sorted(p.multiplicity for p in pts if not p.real))
    ptype = _TABLE.get((real, cplx))
    if ptype is None:
        raise UnresolvedClassification(f"unexpected base point pattern {real}, {cplx}")
    if _cubic_pattern(s) != _EXPECTED_CUBIC[ptype]:
        raise UnresolvedClassification(
            f"base points say {ptype.value} but the cubic roots disagree")
    return ptype


# -- diagonalization ---------------------------------------------------------

def _null_basis(m: np.ndarray, dim: int) -> np.ndarray:
    _, _, vt = np.linalg.svd(m)
    return vt[-dim:].T


def diagonalize(s) -> tuple[np.ndarray, np.ndarray]:
    """Lorentz matrix B with B^T S B diagonal.

    Returns (B, diag(B^T S B)); B satisfies B^T Z B = Z with the timelike
    column last.  Raises NotDiagonalizable for the other pencil types.
    """
    s = _sym(s, 3)
    ptype = classify(s)
    if not ptype.diagonalizable:
        raise NotDiagonalizable(ptype)
    cols, signs = [], []
    for lam, mult in cubic_roots(s):
        # det(S + lam Z) = 0  <=>  S x = mu Z x with mu = -lam
        basis = _null_basis(s + lam * Z3, mult)
        gram = basis.T @ Z3 @ basis
        g, u = np.linalg.eigh(0.5 * (gram + gram.T))
        if np.abs(g).min() < 1e-10:
            raise NotDiagonalizable(ptype)
        for gi, ui in zip(g, u.T):
            cols.append(basis @ ui / math.sqrt(abs(gi)))
            signs.append(1 if gi > 0 else -1)
    if sorted(signs) != [-1, 1, 1]:
        raise NotDiagonalizable(ptype)
    time = cols[signs.index(-1)]
    space = [c for c, sg in zip(cols, signs) if sg > 0]
    if time[2] < 0:
        time = -time
    # prefer the ordering closest to the identity
    if abs(space[1][0]) + abs(space[0][1]) > abs(space[0][0]) + abs(space[1][1]):
        space = space[::-1]
    space = [c if c[i] >= 0 else -c for i, c in enumerate(space)]
    b = np.column_stack([space[0], space[1], time])
    return b, np.diag(b.T @ s @ b).copy()


@dataclass(frozen=True, eq=False)
class ConfocalForm:
    """Normalized pencil a v^2 + b w^2 = d^2 (plus multiples of the cylinder).

    ``transform`` maps lines of the original frame to the normalized frame.
    """
    transform: LaguerreTransform
    a: float
    b: float

    @property
    def cone(self) -> np.ndarray:
        return np.diag([self.a, self.b, 0.0, -1.0])


def to_confocal(q, tol: float = 1e-10) -> ConfocalForm:
    a_tr, q_norm = pre_normalize(q)
    b, dv = diagonalize(q_norm[:3, :3])
    a, bb = dv[0] + dv[2], dv[1] + dv[2]
    if a < bb:
        b = b[:, [1, 0, 2]]
        a, bb = bb, a
    scale = max(1.0, abs(a), abs(bb))
    if a < -tol * scale:
        raise ImproperNetError("normalized pencil has no real lines")
    if abs(a) <= tol * scale and bb < -tol * scale:
        raise ImproperNetError("normalized pencil carries only two lines")
    # new -> old is A o diag(B, 1); we return its inverse
    new_to_old = a_tr.compose(LaguerreTransform.from_parts(b, np.zeros(3)))
    return ConfocalForm(new_to_old.inverse(), float(a), float(bb))
