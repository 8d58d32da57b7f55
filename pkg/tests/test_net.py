import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_lorentz
from icnets.confocal import (ConfocalParams, base_point, elliptic_net_lines, lambda_from_s, periodic_params)
from icnets.dynamics import generalized_net, schedule_from_s
from icnets.laguerre import (CYLINDER, DegenerateError, LaguerreTransform, OrientedCircle, OrientedLine, apply,
                             contact_residual, coplanarity_residual, incircle_of_three, transform_quadric)
from icnets.net import (CheckerboardNet, DegenerateNetError, build_net, cauchy_net,
                        closed_form_families, envelope_samples, fill_incircles, fourth_line, incircle_lemma_residuals,
                        quadric_residual, step_general, subdivision_check, verify_net)

ELL = ConfocalParams(2.0, 1.0)
HYP = ConfocalParams(1.0, 1.0, "hyperbolic")


def max_dev(lines_a: dict, net_lines) -> float:
    return max(np.abs(lines_a[nl.index].as_array() - nl.line.as_array()).max() for nl in net_lines)


def closed_and_built(p, s, st_, n, psi0v=0.2, psi0h=-0.6):
    vert, horiz = elliptic_net_lines(p, s, st_, psi0v, psi0h, 0, n)
    h, ht = p.hyperboloid(lambda_from_s(s, p)), p.hyperboloid(lambda_from_s(st_, p))
    g = build_net(h, ht, vert[0].line, horiz[0].line, n, n, closed_form_families(p, s, st_))
    return vert, horiz, g


# -- stepping ---------------------------------------------------------------------

@pytest.mark.parametrize("p", [ELL, HYP], ids=["elliptic", "hyperbolic"])
def test_hundred_steps_match_closed_form(p):
    vert, horiz, g = closed_and_built(p, 1.3, 2.9, 100)
    assert max_dev(g.vertical, vert) <= 1e-8
    assert max_dev(g.horizontal, horiz) <= 1e-8


def test_cone_step_is_antipode():
    rng = np.random.default_rng(0)
    for psi in rng.uniform(-5, 5, 20):
        for br in (1, -1):
            line = base_point(psi, br, ELL)
            out = step_general(ELL.cone, line, 1)
            assert np.abs(out.as_array() + line.as_array()).max() <= 1e-12


def test_step_is_involution_on_one_ruling():
    h = ELL.hyperboloid(lambda_from_s(1.1, ELL))
    for psi in np.linspace(-3, 3, 13):
        line = base_point(psi, 1, ELL)
        for br in (1, -1):
            there = step_general(h, line, br)
            back = step_general(h, there, br)
            assert np.abs(back.as_array() - line.as_array()).max() <= 1e-9


def test_step_rejects_line_off_quadric():
    h = ELL.hyperboloid(lambda_from_s(1.1, ELL))
    with pytest.raises(DegenerateError):
        step_general(h, OrientedLine(1.0, 0.0, 0.3), 1)


# Rhombic limit: diag(w0^2, -v0^2, -eps^2 D^2, eps^2) in (v, w, 1, d).  As eps -> 0
# the net tends to the lines (+-v0, +-w0) with d stepping by 2D.
V0, W0, D = 0.6, 0.8, 0.5


def rhombic_line(n, family):
    m, odd = divmod(n, 2)
    sw = 1 if family == "v" else -1
    if odd:
        return np.array([-V0, -sw * W0, -2 * (2 * m + 1) * D])
    return np.array([V0, sw * W0, 4 * m * D])


def rhombic_net(eps):
    h = np.diag([W0 ** 2, -V0 ** 2, -(eps * D) ** 2, eps ** 2])
    v = math.sqrt((eps * D) ** 2 + V0 ** 2)
    w = math.sqrt(1 - v * v)
    return h, build_net(h, h, OrientedLine(v, w, 0.0), OrientedLine(v, -w, 0.0), 6, 6, (-1, 1))


@pytest.mark.parametrize("eps", [1e-2, 1e-3, 1e-4])
def test_rhombic_deformation(eps):
    h, g = rhombic_net(eps)
    for line in list(g.vertical.values()) + list(g.horizontal.values()):
        hom = line.homogeneous()
        assert abs(hom @ CYLINDER @ hom) <= 1e-9
        assert abs(quadric_residual(h, line)) <= 1e-9
    dev = max(max(np.abs(g.vertical[i].as_array() - rhombic_line(i, "v")).max(),
                  np.abs(g.horizontal[i].as_array() - rhombic_line(i, "h")).max()) for i in range(7))
    assert dev <= 100 * eps ** 2
    if eps >= 1e-3:
        # below that the rulings of the nearly rank-2 quadric lose ~1/eps^2 digits
        fill_incircles(g)
        assert verify_net(g, h, 1e-9).passed


# -- build_net -------------------------------------------------------------------------

def test_same_quadric_same_family_is_degenerate():
    h = ELL.hyperboloid(lambda_from_s(1.3, ELL))
    l1, m1 = base_point(0.2, 1, ELL), base_point(-0.6, 1, ELL)
    with pytest.raises(DegenerateNetError):
        build_net(h, h, l1, m1, 4, 4, (1, 1))


def test_build_net_rejects_empty():
    h = ELL.hyperboloid(lambda_from_s(1.3, ELL))
    with pytest.raises(ValueError):
        build_net(h, h, base_point(0.2, 1, ELL), base_point(0.3, 1, ELL), 0, 3, (1, -1))


def incidence_configuration(rng, generic=True):
    """Six vertical lines of a random elliptic net, the horizontal ones grown
    from a random start through the five cells (j mod 2, j)."""
    p = ConfocalParams(rng.uniform(1.2, 3.0), rng.uniform(0.4, 1.1))
    s = rng.uniform(0.2, 2 * p.K - 0.2)
    st_ = rng.uniform(2 * p.K + 0.2, 4 * p.K - 0.2)
    vert, _ = elliptic_net_lines(p, s, st_, rng.uniform(-3, 3), 0.0, 0, 5)
    if generic:
        tr = LaguerreTransform.from_parts(random_lorentz(rng, 0.3), 0.5 * rng.normal(size=3), 1.0)
    else:
        tr = LaguerreTransform.from_parts(np.eye(3), np.zeros(3), 1.0)
    q = transform_quadric(tr, p.cone)
    ls = [apply(tr, nl.line) for nl in vert]
    ms = [apply(tr, base_point(rng.uniform(-4, 4), int(rng.choice([-1, 1])), p))]
    for j in range(5):
        ms.append(fourth_line(q, [ls[j % 2], ls[j % 2 + 1], ms[j]]))
    return ls, ms


def test_incidence_theorem_predicted_cells():
    rng = np.random.default_rng(17)
    for _ in range(20):
        ls, ms = incidence_configuration(rng)
        for i, j in itertools.product(range(5), range(5)):
            if (i + j) % 2 == 0:
                assert abs(coplanarity_residual([ls[i], ls[i + 1], ms[j], ms[j + 1]])) <= 1e-9


def test_incidence_negative_control():
    rng = np.random.default_rng(18)
    ls, ms = incidence_configuration(rng, generic=False)
    ls[5] = OrientedLine(ls[5].v, ls[5].w, ls[5].d + 1e-3)
    assert abs(coplanarity_residual([ls[4], ls[5], ms[4], ms[5]])) > 1e-6


# -- incircles ---------------------------------------------------------------------------

def periodic_net(p, kappa, n=32):
    s, st_, psi0h = periodic_params(n, kappa, p, 0.2)
    vert, horiz = elliptic_net_lines(p, s, st_, 0.2, psi0h, 0, 2 * n)
    return fill_incircles(CheckerboardNet.from_net_lines(vert, horiz))


@pytest.mark.parametrize("p", [ELL, HYP], ids=["elliptic", "hyperbolic"])
def test_degenerate_net_has_point_circles(p):
    g = periodic_net(p, 0.0)
    coincide = {fam: {i for i in range(63) if np.abs(lines[i].as_array() + lines[i + 1].as_array()).max() <= 1e-9}
                for fam, lines in (("v", g.vertical), ("h", g.horizontal))}
    assert coincide["v"] == coincide["h"] == set(range(1, 63, 2))
    point_cells = [c for c in g.black_cells() if c[0] % 2 == 1 and g.circles[c] is not None]
    assert len(point_cells) > 900
    assert max(abs(g.circles[c].r) for c in point_cells) <= 1e-9
    assert max(g.residuals.values()) <= 1e-9


def test_periodic_net_residuals():
    g = periodic_net(ELL, 0.1)
    assert max(g.residuals.values()) <= 1e-9


def test_perturbed_line_shows_in_its_cells():
    g = periodic_net(ELL, 0.1, 8)
    line = g.vertical[5]
    g.vertical[5] = OrientedLine(line.v, line.w, line.d + 1e-3)
    fill_incircles(g)
    touched = [c for c in g.black_cells() if 5 in (c[0], c[0] + 1) and g.circles[c] is not None]
    res = sorted(g.residuals[c] for c in touched)
    # the left-out line sees the shift scaled by the cell's shape, so only most cells reach 1e-4
    assert res[0] > 1e-5
    assert sum(r > 1e-4 for r in res) >= 0.8 * len(res)
    untouched = [c for c in g.black_cells() if 5 not in (c[0], c[0] + 1)]
    assert max(g.residuals[c] for c in untouched) <= 1e-9


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 3.5), st.floats(0.3, 3.5), st.floats(-3, 3))
def test_any_three_lines_give_the_same_circle(s, st_, psi):
    if min(abs(s - 2 * ELL.K), abs(st_ - 2 * ELL.K)) < 0.05:
        return
    vert, horiz = elliptic_net_lines(ELL, s, st_, psi, -psi, 0, 4)
    g = CheckerboardNet.from_net_lines(vert, horiz)
    for cell in g.black_cells():
        lines = g.cell_lines(cell)
        circles = []
        for tri in itertools.combinations(lines, 3):
            try:
                c = incircle_of_three(*tri)
            except DegenerateError:
                continue
            # only well-conditioned triples pin the circle down to 1e-8
            a = np.array([[l.v, l.w, -1.0] for l in tri])
            if np.linalg.cond(a) < 1e4:
                circles.append(c.as_array())
        for c in circles[1:]:
            assert np.abs(c - circles[0]).max() <= 1e-8


# -- verification ------------------------------------------------------------------------

def test_verify_passes_valid_net():
    g = periodic_net(ELL, 0.1)
    rep = verify_net(g, ELL.cone, 1e-9)
    assert rep.passed
    assert rep.max_contact <= 1e-9 and rep.max_quadric <= 1e-9


def test_verify_after_laguerre_transform(rng):
    g = periodic_net(ELL, 0.1, 8)
    tr = LaguerreTransform.from_parts(random_lorentz(rng, 0.5), rng.normal(size=3), 1.0)
    moved = CheckerboardNet({i: apply(tr, l) for i, l in g.vertical.items()},
                            {j: apply(tr, l) for j, l in g.horizontal.items()})
    fill_incircles(moved)
    assert verify_net(moved, transform_quadric(tr, ELL.cone), 1e-9).passed
    # against the untransformed conic the lines are no longer tangent
    assert not verify_net(moved, ELL.cone, 1e-9).passed


def test_verify_reports_corrupted_cell():
    g = periodic_net(ELL, 0.1, 8)
    line = g.horizontal[4]
    g.horizontal[4] = OrientedLine(line.v, line.w, line.d + 1e-3)
    rep = verify_net(g, ELL.cone, 1e-9)
    assert not rep.passed
    assert any("h4" in f for f in rep.failures)
    assert any("cell (" in f and ", 4)" in f for f in rep.failures)


# -- subdivision and the lemma -----------------------------------------------------------

def test_subdivision_parent_net():
    k4 = 4 * ELL.K
    n = 8
    rep = subdivision_check(k4 + k4 / n, 2 * ELL.K + k4 / n, ELL)
    assert rep.collapse_deviation <= 1e-9
    assert rep.parent_residual <= 1e-9
    assert rep.incircle_residual <= 1e-9


@pytest.mark.parametrize("s", [1.3, 2.1, 3.3])
def test_subdivision_family(s):
    k4 = 4 * ELL.K
    rep = subdivision_check(k4 + k4 / 8, s, ELL)
    assert rep.shared_line_deviation <= 1e-9
    assert rep.incircle_residual <= 1e-9


def test_two_incircles_imply_the_third():
    rng = np.random.default_rng(21)
    for _ in range(50):
        p = ConfocalParams(rng.uniform(1.2, 3), rng.uniform(0.3, 1.1))
        ls = [base_point(rng.uniform(-2 * p.K, 2 * p.K), int(rng.choice([-1, 1])), p) for _ in range(4)]
        l0, l1, l2, m0 = ls
        m1 = fourth_line(p.cone, [l0, l1, m0])
        m2 = fourth_line(p.cone, [l1, l2, m1])
        first, second, third = incircle_lemma_residuals(l0, l1, l2, m0, m1, m2)
        assert first <= 1e-10 and second <= 1e-10
        assert third <= 1e-8


# -- planar pieces -----------------------------------------------------------------------

def test_envelope_of_confocal_family_is_the_ellipse():
    pts = envelope_samples(lambda t: base_point(t, 1, ELL), np.linspace(0.1, 6.0, 60))
    assert np.abs(pts[:, 0] ** 2 / 4 + pts[:, 1] ** 2 - 1).max() <= 1e-6


def test_envelope_of_circle_tangents():
    cx, cy, r = 0.5, -1.0, 2.0

    def tangent(t):
        return OrientedLine(math.cos(t), math.sin(t), cx * math.cos(t) + cy * math.sin(t) - r)

    pts = envelope_samples(tangent, np.linspace(0, 6, 40))
    assert np.abs(np.hypot(pts[:, 0] - cx, pts[:, 1] - cy) - abs(r)).max() <= 1e-6
    assert envelope_samples(tangent, [0.0, 1.0]).shape == (2, 2)


def test_d_bounded_by_base_curve():
    # on the elliptic cone d = alpha dn, so |d| <= alpha along the base curve
    sched = schedule_from_s([1.1, 3.3, 2.2, 3.7], ELL)
    g = generalized_net(sched, sched, base_point(0.3, 1, ELL), base_point(-0.9, 1, ELL), 4.0, 1.0, 40, 40)
    ds = [abs(l.d) for l in list(g.vertical.values()) + list(g.horizontal.values())]
    assert max(ds) <= ELL.alpha + 1e-9


def test_cauchy_net_matches_generalized_net():
    sched = schedule_from_s([1.1, 3.3, 2.2, 3.7], ELL)
    g = generalized_net(sched, sched, base_point(0.3, 1, ELL), base_point(-0.9, 1, ELL), 4.0, 1.0, 8, 8)
    c = cauchy_net(ELL.cone, [g.vertical[i] for i in range(5)], g.horizontal[0], 8, 8)
    for fam_c, fam_g in ((c.vertical, g.vertical), (c.horizontal, g.horizontal)):
        for i in range(9):
            assert np.abs(fam_c[i].as_array() - fam_g[i].as_array()).max() <= 1e-8
    fill_incircles(c)
    assert verify_net(c, ELL.cone, 1e-9).passed


def test_circle_contact_of_fourth_line():
    lines = [base_point(t, 1, ELL) for t in (0.1, 0.9, 2.3)]
    new = fourth_line(ELL.cone, lines)
    circle = incircle_of_three(*lines)
    assert abs(contact_residual(new, circle)) <= 1e-10
    assert abs(quadric_residual(ELL.cone, new)) <= 1e-10
