"""Integrable recurrences behind the nets.

* the QRT map satisfied by the one-variable factors of the incircle centres;
* the biquadratic recurrence for the d-coordinate of consecutive lines of a
  generalized net, with (v, w) recovered linearly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .confocal import ConfocalParams, base_point_elliptic, lambda_from_s_elliptic
from .laguerre import DegenerateError, OrientedLine
from .net import CheckerboardNet, ruling_family

# -- QRT map -----------------------------------------------------------------


class SingularFiber(ValueError):
    """The QRT step divides by zero on this orbit."""


@dataclass(frozen=True)
class QrtParams:
    ab_diff: float  # a - b
    A: float


def _qrt_terms(fh, p: QrtParams):
    c = p.ab_diff
    return 2 * c * fh, fh * fh + c * p.A, 2 * p.A * fh


def qrt_step(f: float, f_half: float, p: QrtParams) -> float:
    """f(m + 1) from f(m) and f(m + 1/2): the other root of the biquadratic.

    The rational map is evaluated exactly on the float inputs and rounded
    once; in floating point the cancellation in numerator and denominator
    makes orbits drift off their invariant curve by 1e-8 within 200 steps.
    """
    fx, hx = Fraction(f), Fraction(f_half)
    px = QrtParams(Fraction(p.ab_diff), Fraction(p.A))
    f1, f2, f3 = _qrt_terms(hx, px)
    den = f2 - fx * f3
    if abs(den) < 1e-14 * max(1.0, abs(f2), abs(fx * f3)):
        raise SingularFiber(f"denominator vanishes at f={f!r}, f_half={f_half!r}")
    return float((f1 - fx * f2) / den)


def qrt_invariant(f: float, f_half: float, p: QrtParams) -> float:
    """The conserved B^2 of the orbit through (f, f_half), evaluated exactly
    and rounded once."""
    fx, hx, c, A = Fraction(f), Fraction(f_half), Fraction(p.ab_diff), Fraction(p.A)
    num = A * A * hx ** 2 * fx * fx - c * A * (hx ** 2 + fx * fx) + c * c
    den = (hx * fx - c) ** 2
    if den < 1e-300:
        raise SingularFiber("invariant undefined where f * f_half = a - b")
    return float(num / den)


def qrt_orbit(f0: float, f_half: float, p: QrtParams, steps: int) -> list[float]:
    """Half-step orbit f0, f_half, f1, f_3/2, ... (steps + 2 values).

    Consecutive values play the roles (f, f_half) for the next step.
    """
    out = [f0, f_half]
    for _ in range(steps):
        out.append(qrt_step(out[-2], out[-1], p))
    return out


# -- biquadratic recurrence ----------------------------------------------------


@dataclass(frozen=True)
class BiquadCoeffs:
    kappa_v: float
    kappa_w: float
    kappa_d: float
    lam: float
    a: float
    b: float


def biquadratic_coeffs(lam: float, a: float, b: float) -> BiquadCoeffs:
    den = lam * lam - a * b
    if abs(den) < 1e-14 * max(1.0, lam * lam, abs(a * b)):
        raise DegenerateError("lam^2 = ab: the recurrence has a pole")
    kv = (lam * lam + 2 * a * lam + a * b) / den
    kw = (lam * lam + 2 * b * lam + a * b) / den
    kd = 4 * lam * (lam + a) * (lam + b) / den ** 2
    return BiquadCoeffs(kv, kw, kd, lam, a, b)


def biquadratic_residual(d: float, d_next: float, c: BiquadCoeffs) -> float:
    return (c.kappa_d * (d * d * d_next * d_next + c.a * c.b) + d * d + d_next * d_next
            + 2 * c.kappa_v * c.kappa_w * d * d_next)


def d_roots(d: float, c: BiquadCoeffs) -> tuple[float, float]:
    """Both d' with biquadratic_residual(d, d') = 0."""
    qa = c.kappa_d * d * d + 1.0
    qb = 2 * c.kappa_v * c.kappa_w * d
    qc = c.kappa_d * c.a * c.b + d * d
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        if disc < -1e-10 * max(1.0, qb * qb):
            raise DegenerateError("no real successor")
        disc = 0.0
    r = math.sqrt(disc)
    t = -0.5 * (qb + math.copysign(r, qb))
    if abs(qa) < 1e-300:
        return (qc / t, math.inf) if t != 0 else (math.inf, math.inf)
    r1 = t / qa
    r2 = qc / t if t != 0 else -r1
    return r1, r2


def step_d(d: float, c: BiquadCoeffs, branch: int) -> float:
    """One root of the biquadratic.  branch +1 takes the root farther from
    -d, branch -1 the closer one."""
    r1, r2 = d_roots(d, c)
    far, near = (r1, r2) if abs(r1 + d) >= abs(r2 + d) else (r2, r1)
    return far if branch > 0 else near


def recover_vw(v: float, w: float, d: float, d_next: float, c: BiquadCoeffs) -> tuple[float, float]:
    """(v', w') of the next line, from the two linear relations between
    consecutive lines of the same quadric."""
    m = np.array([[c.kappa_w * c.a * v, c.kappa_v * c.b * w],
                  [c.kappa_v * v, c.kappa_w * w]])
    rhs = np.array([-d * d_next, 1.0])
    if abs(np.linalg.det(m)) < 1e-12 * max(1.0, np.abs(m).max() ** 2):
        raise DegenerateError("linear system for (v', w') is singular")
    vn, wn = np.linalg.solve(m, rhs)
    return float(vn), float(wn)


# -- generalized nets ----------------------------------------------------------


@dataclass(frozen=True)
class ScheduleEntry:
    lam: float
    family: int  # ruling used by the vertical lines at this step


def diagonal_hyperboloid(lam: float, a: float, b: float) -> np.ndarray:
    return np.diag([a + lam, b + lam, -lam, -1.0])


def schedule_from_s(s_values, p: ConfocalParams) -> list[ScheduleEntry]:
    """Schedule of the net whose line n sits at psi_n with psi_{n+1} = psi_n + s_n,
    alternating the two components of the base curve."""
    out = []
    for n, s in enumerate(s_values):
        lam = lambda_from_s_elliptic(s, p)
        br = 1 if n % 2 == 0 else -1
        ref = 0.3
        fam = ruling_family(diagonal_hyperboloid(lam, p.alpha ** 2, p.beta ** 2),
                            base_point_elliptic(ref, br, p), base_point_elliptic(ref + s, -br, p))
        out.append(ScheduleEntry(lam, fam))
    return out


def _candidates(line: OrientedLine, c: BiquadCoeffs) -> list[OrientedLine]:
    out = []
    for dn in d_roots(line.d, c):
        if not math.isfinite(dn):
            continue
        try:
            vn, wn = recover_vw(line.v, line.w, line.d, dn, c)
        except DegenerateError:
            # on a symmetry axis: fall back to the magnitudes fixed by the
            # cone and the cylinder, signs fixed by the tangency relation
            vn, wn = _vw_by_signs(line, dn, c)
        out.append(_polish(line, np.array([vn, wn, dn]), c))
    return out


def _polish(line: OrientedLine, x: np.ndarray, c: BiquadCoeffs, iters: int = 4) -> OrientedLine:
    """Newton on cylinder, cone and tangency with the previous line.

    The linear recovery of (v', w') is ill-conditioned near the axes; the
    candidate is a simple root of this square system, so a few Newton steps
    put it back on the base curve to round-off.
    """
    a, b, lam = c.a, c.b, c.lam
    pv, pw, pd = line.v, line.w, line.d
    for _ in range(iters):
        v, w, d = x
        f = np.array([v * v + w * w - 1.0,
                      a * v * v + b * w * w - d * d,
                      (a + lam) * pv * v + (b + lam) * pw * w - pd * d - lam])
        jac = np.array([[2 * v, 2 * w, 0.0],
                        [2 * a * v, 2 * b * w, -2 * d],
                        [(a + lam) * pv, (b + lam) * pw, -pd]])
        try:
            dx = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError:
            break
        x = x - dx
        if np.abs(dx).max() < 1e-16:
            break
    return OrientedLine(x[0], x[1], x[2])


def _vw_by_signs(line: OrientedLine, dn: float, c: BiquadCoeffs) -> tuple[float, float]:
    a, b, lam = c.a, c.b, c.lam
    v2 = min(max((dn * dn - b) / (a - b), 0.0), 1.0)
    best = None
    for sv in (1, -1):
        for sw in (1, -1):
            vn, wn = sv * math.sqrt(v2), sw * math.sqrt(1 - v2)
            r = abs((a + lam) * line.v * vn + (b + lam) * line.w * wn - line.d * dn - lam)
            if best is None or r < best[0]:
                best = (r, vn, wn)
    return best[1], best[2]


def step_line(line: OrientedLine, entry: ScheduleEntry, a: float, b: float, family: int) -> OrientedLine:
    """Next line along the ruling ``family`` of the quadric entry.lam."""
    c = biquadratic_coeffs(entry.lam, a, b)
    cands = _candidates(line, c)
    if len(cands) == 2 and np.abs(cands[0].as_array() - cands[1].as_array()).max() < 1e-9:
        return cands[0]
    q = diagonal_hyperboloid(entry.lam, a, b)
    for cand in cands:
        if ruling_family(q, line, cand) == family:
            return cand
    raise DegenerateError("no successor on the requested ruling")


def generalized_net(schedule_h, schedule_v, l1: OrientedLine, m1: OrientedLine,
                    a: float, b: float, rows: int, cols: int) -> CheckerboardNet:
    """Net whose vertical line i -> i+1 lies on quadric schedule_h[i] and whose
    horizontal line j -> j+1 lies on schedule_v[j] (schedules repeat).

    Horizontal lines take the ruling opposite to the one stored in the entry,
    so a cell (i, j) carries a circle whenever both steps use the same quadric.
    """
    sh, sv = list(schedule_h), list(schedule_v)
    vert, horiz = {0: l1}, {0: m1}
    for i in range(rows):
        e = sh[i % len(sh)]
        vert[i + 1] = step_line(vert[i], e, a, b, e.family)
    for j in range(cols):
        e = sv[j % len(sv)]
        horiz[j + 1] = step_line(horiz[j], e, a, b, -e.family)
    def same(e, f):
        return e.family == f.family and abs(e.lam - f.lam) <= 1e-12 * max(1.0, abs(e.lam))

    cells = [(i, j) for i in range(rows) for j in range(cols) if same(sh[i % len(sh)], sv[j % len(sv)])]
    return CheckerboardNet(vert, horiz, incircle_cells=cells)
