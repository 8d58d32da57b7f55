"""Checkerboard IC-nets built by walking along generators of quadrics.

Nothing here knows about Jacobi functions: a net is grown from two start
lines by repeatedly following a ruling of a pencil quadric to its second
intersection with the cylinder.  The closed-form nets of ``confocal`` serve
as an independent check on these constructions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import confocal
from .laguerre import (CYLINDER, DegenerateError, OrientedCircle, OrientedLine,
                       contact_residual, coplanarity_residual)
from .pencil import base_points

GENERATOR_TOL = 1e-12


class NoRealGenerator(ValueError):
    """The quadric is not ruled over the reals at this point."""


class DegenerateNetError(ValueError):
    pass


def _hom(line: OrientedLine) -> np.ndarray:
    return np.array([line.v, line.w, 1.0, line.d])


def quadric_residual(q, line: OrientedLine) -> float:
    p = _hom(line)
    q = np.asarray(q, dtype=float)
    return float(p @ q @ p) / max(1.0, np.abs(q).max())


def ruling_family(q, l1: OrientedLine, l2: OrientedLine, tol: float = 1e-9) -> int:
    """Which of the two rulings of q the line through l1 and l2 belongs to.

    For a plane X^Y that lies on q, the 2-form (qX)^(qY) is a multiple c of
    the volume form contracted with X^Y; the sign of c is constant on each
    ruling and opposite on the two.  Returns 0 for a degenerate quadric.
    """
    q = np.asarray(q, dtype=float)
    x, y = _hom(l1), _hom(l2)
    u, _, _ = np.linalg.svd(np.column_stack([x, y]))
    z, w = u[:, 2], u[:, 3]
    qx, qy = q @ x, q @ y
    omega = (qx @ z) * (qy @ w) - (qx @ w) * (qy @ z)
    c = omega / np.linalg.det(np.column_stack([x, y, z, w]))
    if abs(c) <= tol * max(1.0, np.abs(q).max()) ** 2:
        return 0
    return 1 if c > 0 else -1


def generator_directions(q, line: OrientedLine) -> list[np.ndarray]:
    """Directions (in (v, w, 1, d), third entry 0) of the real rulings of q
    through the point of q given by ``line``.  One direction for a cone."""
    q = np.asarray(q, dtype=float)
    p = _hom(line)
    idx = [0, 1, 3]
    g = (q @ p)[idx]
    if np.linalg.norm(g) < 1e-12 * max(1.0, np.abs(q).max()):
        raise DegenerateError("point is singular on the quadric")
    _, _, vt = np.linalg.svd(g.reshape(1, 3))
    e = vt[1:].T  # orthonormal basis of the tangent directions
    m = e.T @ q[np.ix_(idx, idx)] @ e
    ev, r = np.linalg.eigh(0.5 * (m + m.T))
    scale = max(np.abs(ev).max(), 1e-300)
    if ev[0] > GENERATOR_TOL * scale or ev[1] < -GENERATOR_TOL * scale:
        raise NoRealGenerator("tangent section is definite")
    out = []
    if abs(ev[0]) <= GENERATOR_TOL * scale or abs(ev[1]) <= GENERATOR_TOL * scale:
        j = 0 if abs(ev[0]) <= abs(ev[1]) else 1
        dirs = [r[:, j]]
    else:
        a, b = np.sqrt(ev[1]), np.sqrt(-ev[0])
        dirs = [r @ np.array([a, b]), r @ np.array([a, -b])]
    for d in dirs:
        u = e @ d
        out.append(np.array([u[0], u[1], 0.0, u[2]]))
    return out


def _apex_direction(q, p):
    """For a (numerically) singular quadric the only ruling through p is the
    line to the apex; returns [direction] or None for a proper quadric."""
    _, sv, vt = np.linalg.svd(q)
    if sv[-1] > 1e-12 * sv[0]:
        return None
    apex = vt[-1]
    if abs(apex[2]) < 1e-12:
        u = apex
    else:
        u = apex / apex[2] - p
    return [np.array([u[0], u[1], 0.0, u[3]])]


def step_general(q, line: OrientedLine, branch: int, tol: float = 1e-9) -> OrientedLine:
    """Follow the ruling of q selected by ``branch`` (+1 or -1, see
    ruling_family) from ``line`` to its other point on the cylinder."""
    q = np.asarray(q, dtype=float)
    if abs(quadric_residual(q, line)) > tol:
        raise DegenerateError("line is not on the quadric")
    p = _hom(line)
    cands = []
    for u in _apex_direction(q, p) or generator_directions(q, line):
        den = u[0] ** 2 + u[1] ** 2
        if den < 1e-14:
            continue
        t = -2.0 * (p[0] * u[0] + p[1] * u[1]) / den
        if abs(t) * np.sqrt(den) < 1e-12:
            continue
        pn = p + t * u
        cands.append(OrientedLine(pn[0], pn[1], pn[3]))
    if not cands:
        raise DegenerateError("ruling is tangent to the cylinder")
    if len(cands) == 1 or np.abs(cands[0].as_array() - cands[1].as_array()).max() < 1e-9:
        return cands[0]
    fams = [ruling_family(q, line, c) for c in cands]
    for c, f in zip(cands, fams):
        if f == branch:
            return c
    raise DegenerateError(f"no ruling of family {branch:+d} (got {fams})")


# -- nets ----------------------------------------------------------------------

Cell = tuple[int, int]


@dataclass
class CheckerboardNet:
    """Two indexed line families; cell (i, j) is bounded by vertical lines
    i, i+1 and horizontal lines j, j+1.  ``incircle_cells`` lists the cells
    that should carry circles; by default the black ones (i + j even)."""
    vertical: dict[int, OrientedLine]
    horizontal: dict[int, OrientedLine]
    circles: dict[Cell, OrientedCircle | None] = field(default_factory=dict)
    residuals: dict[Cell, float] = field(default_factory=dict)
    incircle_cells: list[Cell] | None = None
    meta: dict = field(default_factory=dict)

    def cells(self) -> list[Cell]:
        return [(i, j) for i in sorted(self.vertical) if i + 1 in self.vertical
                for j in sorted(self.horizontal) if j + 1 in self.horizontal]

    def black_cells(self) -> list[Cell]:
        if self.incircle_cells is not None:
            return list(self.incircle_cells)
        return [c for c in self.cells() if (c[0] + c[1]) % 2 == 0]

    def cell_lines(self, cell: Cell) -> list[OrientedLine]:
        i, j = cell
        return [self.vertical[i], self.vertical[i + 1], self.horizontal[j], self.horizontal[j + 1]]

    @classmethod
    def from_net_lines(cls, vert, horiz, meta=None) -> "CheckerboardNet":
        return cls({nl.index: nl.line for nl in vert}, {nl.index: nl.line for nl in horiz},
                   meta=dict(meta or {}))


def build_net(h, h_tilde, l1: OrientedLine, m1: OrientedLine, rows: int, cols: int,
              families: tuple[int, int]) -> CheckerboardNet:
    """Grow a net from vertical line 0 and horizontal line 0.

    Vertical line i -> i+1 follows the ruling ``families[0]`` of h for even i
    and ``families[1]`` of h_tilde for odd i; horizontal lines use the
    opposite rulings, so that every black cell closes up.
    """
    if rows < 1 or cols < 1:
        raise ValueError("need at least one cell")
    quads = (np.asarray(h, dtype=float), np.asarray(h_tilde, dtype=float))

    def grow(start, count, sign):
        lines = {0: start}
        for i in range(count):
            lines[i + 1] = step_general(quads[i % 2], lines[i], sign * families[i % 2])
            if i >= 1 and np.allclose(lines[i + 1].as_array(), lines[i - 1].as_array(), atol=1e-9):
                raise DegenerateNetError(f"line {i + 1} repeats line {i - 1}")
        return lines

    return CheckerboardNet(grow(l1, rows, 1), grow(m1, cols, -1))


def closed_form_families(p: "confocal.ConfocalParams", s: float, s_tilde: float) -> tuple[int, int]:
    """Ruling signs that reproduce the closed-form net with shifts s, s_tilde."""
    ref = 0.3
    h = p.hyperboloid(confocal.lambda_from_s(s, p))
    ht = p.hyperboloid(confocal.lambda_from_s(s_tilde, p))
    bp = confocal.base_point
    f1 = ruling_family(h, bp(ref, 1, p), bp(ref + s, -1, p))
    f2 = ruling_family(ht, bp(ref, -1, p), bp(ref + s_tilde, 1, p))
    return f1, f2


def _best_incircle(lines):
    best = None
    for tri in itertools.combinations(range(4), 3):
        a = np.array([[lines[t].v, lines[t].w, -1.0] for t in tri])
        det = abs(np.linalg.det(a))
        if best is None or det > best[0]:
            best = (det, tri, a)
    det, tri, a = best
    if det < 1e-12:
        return None
    cx, cy, r = np.linalg.solve(a, np.array([lines[t].d for t in tri]))
    return OrientedCircle(float(cx), float(cy), float(r))


def fill_incircles(net: CheckerboardNet) -> CheckerboardNet:
    """Compute the circle of every black cell from its best-conditioned three
    lines; the residual is the worst contact error over all four.

    A cell bounded by two pairs of parallel lines has its circle at infinity;
    it gets ``None`` and the coplanarity residual instead.
    """
    for cell in net.black_cells():
        lines = net.cell_lines(cell)
        c = _best_incircle(lines)
        net.circles[cell] = c
        if c is None:
            net.residuals[cell] = abs(coplanarity_residual(lines))
        else:
            net.residuals[cell] = max(abs(contact_residual(l, c)) for l in lines)
    return net


@dataclass
class VerificationReport:
    max_cylinder: float
    max_quadric: float
    max_contact: float
    max_coplanarity: float
    failures: list[str]
    cells_at_infinity: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_net(net: CheckerboardNet, quadric=None, tol: float = 1e-9) -> VerificationReport:
    failures = []
    lines = [("v", i, l) for i, l in net.vertical.items()] + [("h", i, l) for i, l in net.horizontal.items()]
    max_cyl = max_q = 0.0
    for fam, i, l in lines:
        cyl = abs(_hom(l) @ CYLINDER @ _hom(l))
        max_cyl = max(max_cyl, cyl)
        if cyl > tol:
            failures.append(f"line {fam}{i}: off the cylinder by {cyl:.3g}")
        if quadric is not None:
            r = abs(quadric_residual(quadric, l))
            max_q = max(max_q, r)
            if r > tol:
                failures.append(f"line {fam}{i}: not tangent to the conic ({r:.3g})")
    max_c = max_p = 0.0
    at_inf = 0
    for cell in net.black_cells():
        cl = net.cell_lines(cell)
        c = _best_incircle(cl)
        cop = abs(coplanarity_residual(cl))
        if c is None:
            # parallel pairs: the circle sits at infinity, only coplanarity is testable
            at_inf += 1
            max_p = max(max_p, cop)
            if cop > tol:
                failures.append(f"cell {cell}: no incircle")
            continue
        res = max(abs(contact_residual(l, c)) for l in cl)
        max_c, max_p = max(max_c, res), max(max_p, cop)
        if res > tol or cop > tol:
            failures.append(f"cell {cell}: contact {res:.3g}, coplanarity {cop:.3g}")
    return VerificationReport(max_cyl, max_q, max_c, max_p, failures, at_inf)


# -- subdivision and the incircle lemma --------------------------------------------

def unoriented_coplanarity(lines) -> float:
    """Smallest coplanarity residual over all orientations of the last three
    lines: zero iff the four lines touch a common circle in the plain sense."""
    lines = list(lines)
    best = np.inf
    for signs in itertools.product((1, -1), repeat=3):
        ls = [lines[0]] + [l if s > 0 else -l for l, s in zip(lines[1:], signs)]
        best = min(best, abs(coplanarity_residual(ls)))
    return float(best)


def incircle_lemma_residuals(l0, l1, l2, m0, m1, m2) -> tuple[float, float, float]:
    """Residuals of the three incircle conditions on six lines tangent to a
    conic: cells (l0 l1 | m0 m1), (l1 l2 | m1 m2) and the big cell (l0 l2 | m0 m2)."""
    return (abs(coplanarity_residual([l0, l1, m0, m1])),
            abs(coplanarity_residual([l1, l2, m1, m2])),
            unoriented_coplanarity([l0, l2, m0, m2]))


@dataclass
class SubdivisionReport:
    shared_line_deviation: float  # even lines vs. the parent IC-net
    collapse_deviation: float  # parent: odd lines equal minus the even ones
    incircle_residual: float  # worst black-cell residual of the subdivided net
    parent_residual: float  # big cells of the parent IC-net


def subdivision_check(s_total: float, s: float, p: "confocal.ConfocalParams",
                      psi0v: float = 0.2, psi0h: float = -0.7, size: int = 6) -> SubdivisionReport:
    """Compare the net with shifts (s, s_total - s) against its parent, the
    net with s_tilde = 2K whose odd lines collapse onto the even ones."""
    K = p.K
    vert, horiz = confocal.elliptic_net_lines(p, s, s_total - s, psi0v, psi0h, 0, 2 * size)
    pv, ph = confocal.elliptic_net_lines(p, s_total - 2 * K, 2 * K, psi0v, psi0h, 0, 2 * size)
    shared = max(np.abs(a.line.as_array() - b.line.as_array()).max()
                 for fa, fb in ((vert, pv), (horiz, ph)) for a, b in zip(fa, fb) if a.index % 2 == 0)
    collapse = max(np.abs(fam[i].line.as_array() + fam[i + 1].line.as_array()).max()
                   for fam in (pv, ph) for i in range(1, len(fam) - 1, 2))
    net = fill_incircles(CheckerboardNet.from_net_lines(vert, horiz))
    inc = max(r for c, r in net.residuals.items() if net.circles[c] is not None)
    big = 0.0
    for i in range(0, 2 * size - 1, 2):
        for j in range(0, 2 * size - 1, 2):
            big = max(big, unoriented_coplanarity([pv[i].line, pv[i + 2].line, ph[j].line, ph[j + 2].line]))
    return SubdivisionReport(float(shared), float(collapse), float(inc), float(big))


# -- planar constructions ------------------------------------------------------------

def circle_tangents(quadric, circle: OrientedCircle) -> list[OrientedLine]:
    """Real lines of the base curve (quadric cut with the cylinder) that are in
    oriented contact with ``circle``."""
    lift = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0], [circle.cx, circle.cy, -circle.r]])
    conic = lift.T @ np.asarray(quadric, dtype=float) @ lift
    out = []
    for bp in base_points(conic):
        if bp.real:
            v, w = bp.vw
            out.append(OrientedLine(v, w, circle.cx * v + circle.cy * w - circle.r))
    return out


def fourth_line(quadric, known: list[OrientedLine]) -> OrientedLine:
    """The one tangent line of ``quadric``'s family touching the circle of three known lines, other than them."""
    from .laguerre import incircle_of_three
    c = incircle_of_three(*known)
    cands = circle_tangents(quadric, c)
    left = list(cands)
    for k in known:
        if not left:
            break
        dist = [np.abs(x.as_array() - k.as_array()).max() for x in left]
        left.pop(int(np.argmin(dist)))
    if len(left) != 1:
        raise DegenerateNetError(f"expected one new tangent line, found {len(left)}")
    return left[0]


def cauchy_net(quadric, l_lines: list[OrientedLine], m0: OrientedLine, rows: int, cols: int) -> CheckerboardNet:
    """Net of period N = len(l_lines) - 1 grown from prescribed data.

    Given vertical lines 0..N and horizontal line 0, every new line is the
    remaining common tangent of the base curve and the circle of a cell
    (i, j) with i = j mod N.
    """
    n = len(l_lines) - 1
    if n < 1:
        raise ValueError("need at least two vertical lines")
    vert = dict(enumerate(l_lines))
    horiz = {0: m0}
    while len(horiz) <= cols or len(vert) <= rows:
        j = len(horiz) - 1
        if j < cols:
            i = j % n
            horiz[j + 1] = fourth_line(quadric, [vert[i], vert[i + 1], horiz[j]])
        i = len(vert) - 1
        if i < rows:
            j = i % n
            vert[i + 1] = fourth_line(quadric, [horiz[j], horiz[j + 1], vert[i]])
        if len(horiz) > cols and len(vert) > rows:
            break
    cells = [(i, j) for i in range(rows) for j in range(cols) if (i - j) % n == 0]
    return CheckerboardNet(vert, horiz, incircle_cells=cells)


def envelope_samples(line_fn, params, h: float = 1e-5) -> np.ndarray:
    """Points of the envelope of a one-parameter family of lines.

    Each point solves l(t) and the t-derivative of l(t) (central differences).
    """
    pts = []
    for t in params:
        l0 = np.asarray(line_fn(t).as_array())
        dl = (line_fn(t + h).as_array() - line_fn(t - h).as_array()) / (2 * h)
        a = np.array([[l0[0], l0[1]], [dl[0], dl[1]]])
        pts.append(np.linalg.solve(a, np.array([l0[2], dl[2]])))
    return np.array(pts)
