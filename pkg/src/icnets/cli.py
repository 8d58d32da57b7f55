"""Command line: construct, verify, classify, render, qrt.

Exit codes: 0 success, 1 the mathematics said no (verification failed,
unclassifiable pencil, singular orbit), 2 bad usage or unreadable input.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, confocal, document, dynamics, net, pencil
from .elliptic import PoleError
from .laguerre import DegenerateError
from .svg import render_svg

DEFAULT_TOL = 1e-9


class UsageError(Exception):
    pass


def _floats(text: str, n: int | None = None) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"not a list of numbers: {text!r}")
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} numbers, got {len(vals)}")
    return vals


def _params_meta(p: confocal.ConfocalParams, **extra) -> dict:
    d = {"alpha": p.alpha, "beta": p.beta, "k": p.k, "K": p.K}
    d.update({k: v for k, v in extra.items() if v is not None})
    return d


def construct(args) -> tuple[net.CheckerboardNet, dict]:
    kind = args.kind
    p = confocal.ConfocalParams(args.alpha, args.beta, "hyperbolic" if kind == "hyperbolic" else "elliptic")
    if kind == "generalized":
        if not args.schedule:
            raise UsageError("--schedule is required for generalized nets")
        lams = _floats(args.schedule)
        entries = [dynamics.ScheduleEntry(lam, 1) for lam in lams]
        psi0h = args.psi0h if args.psi0h is not None else -args.psi0v
        rows, cols = args.rows or 2 * len(lams), args.cols or 2 * len(lams)
        g = dynamics.generalized_net(entries, entries, confocal.base_point(args.psi0v, 1, p),
                                     confocal.base_point(psi0h, 1, p), p.alpha ** 2, p.beta ** 2, rows, cols)
        meta = {"kind": "generalized", "params": _params_meta(p, schedule=lams, psi0v=args.psi0v, psi0h=psi0h)}
    else:
        if args.periodic:
            s, st, psi0h = confocal.periodic_params(args.periodic, args.kappa, p, args.psi0v)
            rows = args.rows or 2 * args.periodic
            cols = args.cols or 2 * args.periodic
        else:
            if args.s is None or args.stilde is None:
                raise UsageError("give --s and --stilde, or --periodic N")
            s, st = args.s, args.stilde
            psi0h = args.psi0h if args.psi0h is not None else -args.psi0v
            rows, cols = args.rows or 8, args.cols or 8
        vert, _ = confocal.elliptic_net_lines(p, s, st, args.psi0v, psi0h, 0, rows)
        _, horiz = confocal.elliptic_net_lines(p, s, st, args.psi0v, psi0h, 0, cols)
        g = net.CheckerboardNet.from_net_lines(vert, horiz)
        meta = {"kind": kind, "params": _params_meta(p, s=s, s_tilde=st, psi0v=args.psi0v, psi0h=psi0h,
                                                       N=args.periodic, kappa=args.kappa if args.periodic else None)}
    net.fill_incircles(g)
    meta["quadric"] = p.cone.tolist()
    meta["tolerance"] = DEFAULT_TOL
    meta["version"] = __version__
    return g, meta


def cmd_construct(args) -> int:
    g, meta = construct(args)
    text = document.dumps(document.to_document(g, meta))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    g, quadric = document.load(args.input)
    tol = args.tol if args.tol is not None else g.meta.get("tolerance", DEFAULT_TOL)
    rep = net.verify_net(g, quadric, tol)
    print(f"lines: {len(g.vertical)} vertical, {len(g.horizontal)} horizontal; "
          f"cells checked: {len(g.black_cells())} ({rep.cells_at_infinity} with circle at infinity)")
    print(f"max cylinder residual  {rep.max_cylinder:.3e}")
    print(f"max conic residual     {rep.max_quadric:.3e}")
    print(f"max contact residual   {rep.max_contact:.3e}")
    print(f"max coplanarity        {rep.max_coplanarity:.3e}")
    for f in rep.failures[:20]:
        print("FAIL", f)
    print("OK" if rep.passed else f"FAILED ({len(rep.failures)} problems)")
    return 0 if rep.passed else 1


def cmd_classify(args) -> int:
    if bool(args.conic) == bool(args.quadric):
        raise UsageError("give exactly one of --conic or --quadric")
    if args.conic:
        s = pencil.conic_from_entries(*_floats(args.conic, 6))
        q = None
    else:
        q = pencil.quadric_from_entries(_floats(args.quadric, 10))
        try:
            s = pencil.pre_normalize(q)[1][:3, :3]
        except pencil.PreNormalizationError as exc:
            raise UsageError(f"non-generic quadric: {exc}")
    try:
        ptype = pencil.classify(s)
    except pencil.UnresolvedClassification as exc:
        print(f"unresolved: {exc}")
        return 1
    bps = pencil.base_points(s)
    n_real = sum(bp.multiplicity for bp in bps if bp.real)
    print(f"type {ptype.value}, {n_real} real base points")
    for bp in bps:
        where = "v={:.12g} w={:.12g}".format(*bp.vw) if bp.real else "complex"
        print(f"  base point {where} multiplicity {bp.multiplicity}")
    roots = ", ".join(f"{_fmt_root(r)} (x{m})" for r, m in pencil.cubic_roots(s))
    print(f"cubic roots {roots}")
    print(f"diagonalizable {'yes' if ptype.diagonalizable else 'no'}")
    if ptype.diagonalizable:
        if q is not None:
            try:
                form = pencil.to_confocal(q)
                print(f"a={form.a!r} b={form.b!r}")
            except pencil.ImproperNetError as exc:
                print(f"improper: {exc}")
                return 1
        else:
            bmat, dv = pencil.diagonalize(s)
            print("B " + "; ".join(" ".join(f"{x:.12g}" for x in row) for row in bmat))
            print("diagonal " + " ".join(repr(float(x)) for x in dv))
    return 0


def _fmt_root(r) -> str:
    r = complex(r)
    return f"{r.real:.12g}" if r.imag == 0 else f"{r.real:.12g}{r.imag:+.12g}i"


def cmd_render(args) -> int:
    g, _ = document.load(args.input)
    meta = g.meta
    env = None
    if args.show_envelope:
        params = meta.get("params", {})
        if "alpha" not in params:
            raise UsageError("document has no conic to take the envelope of")
        kind = "hyperbolic" if meta.get("kind") == "hyperbolic" else "elliptic"
        p = confocal.ConfocalParams(params["alpha"], params["beta"], kind)
        ts = np.linspace(-2 * p.K, 2 * p.K, 400, endpoint=False) + 1e-3
        env = net.envelope_samples(lambda t: confocal.base_point(t, 1, p), ts)
    text = render_svg(g, meta, args.width, args.show_conic, env)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _invariant_or_inf(f: float, fh: float, p: dynamics.QrtParams) -> float:
    # f * fh = a - b is the fibre at B^2 = infinity; the map itself is fine there
    if abs(f * fh - p.ab_diff) <= 1e-9 * max(1.0, abs(p.ab_diff)):
        return float("inf")
    return dynamics.qrt_invariant(f, fh, p)


def cmd_qrt(args) -> int:
    """CSV rows: half-step index, f, and the invariant of (f, next f)."""
    p = dynamics.QrtParams(args.abdiff, args.A)
    orbit = [args.f0, args.fhalf]
    invs = []
    print("step,f,invariant")
    for i in range(args.steps + 1):
        if i < args.steps:
            try:
                orbit.append(dynamics.qrt_step(orbit[i], orbit[i + 1], p))
            except dynamics.SingularFiber as exc:
                print(f"singular fibre at step {i / 2:g}: {exc}", file=sys.stderr)
                return 1
        invs.append(_invariant_or_inf(orbit[i], orbit[i + 1], p))
        print(f"{i / 2:g},{orbit[i]!r},{invs[-1]!r}")
    if all(np.isinf(invs)):
        drift = 0.0
    elif any(np.isinf(invs)):
        drift = float("inf")
    else:
        drift = max(abs(x - invs[0]) for x in invs) / max(1.0, abs(invs[0]))
    print(f"# invariant {invs[0]!r} relative drift {drift:.3e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="icnets", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("construct", help="build a net and write it as JSON")
    c.add_argument("--kind", choices=["elliptic", "hyperbolic", "generalized"], default="elliptic")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--beta", type=float, required=True)
    c.add_argument("--s", type=float)
    c.add_argument("--stilde", type=float)
    c.add_argument("--psi0v", type=float, default=0.2)
    c.add_argument("--psi0h", type=float)
    c.add_argument("--periodic", type=int, metavar="N")
    c.add_argument("--kappa", type=float, default=0.0)
    c.add_argument("--rows", type=int)
    c.add_argument("--cols", type=int)
    c.add_argument("--schedule", help="comma-separated pencil parameters")
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="re-check every incidence of a stored net")
    v.add_argument("input")
    v.add_argument("--tol", type=float)
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("classify", help="type of the pencil spanned with the cylinder")
    k.add_argument("--conic", help="s11,s12,s13,s22,s23,s33")
    k.add_argument("--quadric", help="upper triangle of a 4x4 matrix, 10 numbers")
    k.set_defaults(func=cmd_classify)

    r = sub.add_parser("render", help="draw a stored net as SVG")
    r.add_argument("input")
    r.add_argument("--out")
    r.add_argument("--width", type=int, default=800)
    r.add_argument("--show-conic", action="store_true")
    r.add_argument("--show-envelope", action="store_true")
    r.set_defaults(func=cmd_render)

    q = sub.add_parser("qrt", help="iterate the QRT map")
    q.add_argument("--abdiff", type=float, required=True)
    q.add_argument("--A", type=float, required=True)
    q.add_argument("--f0", type=float, required=True)
    q.add_argument("--fhalf", type=float, required=True)
    q.add_argument("--steps", type=int, default=20)
    q.set_defaults(func=cmd_qrt)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, document.DocumentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, PoleError, DegenerateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
