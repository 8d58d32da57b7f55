"""JSON form of a net (schema 1).

Field order is fixed and floats are written with repr, which round-trips
exactly, so the same net always serializes to the same bytes.
"""
from __future__ import annotations

import json

import numpy as np

from .laguerre import OrientedCircle, OrientedLine
from .net import CheckerboardNet

SCHEMA = 1


class DocumentError(ValueError):
    pass


def _f(x) -> float:
    return float(x)


def to_document(net: CheckerboardNet, meta: dict) -> dict:
    lines = []
    for fam, group in (("v", net.vertical), ("h", net.horizontal)):
        for i in sorted(group):
            l = group[i]
            lines.append({"family": fam, "index": i, "v": _f(l.v), "w": _f(l.w), "d": _f(l.d)})
    circles, at_infinity = [], []
    for cell in sorted(net.circles):
        c = net.circles[cell]
        if c is None:
            at_infinity.append(list(cell))
            continue
        circles.append({"cell": list(cell), "cx": _f(c.cx), "cy": _f(c.cy), "r": _f(c.r),
                        "residual": _f(net.residuals.get(cell, 0.0))})
    meta = dict(meta)
    if net.incircle_cells is not None:
        meta["incircle_cells"] = [list(c) for c in net.incircle_cells]
    return {"schema": SCHEMA, "meta": meta, "lines": lines, "circles": circles,
            "circles_at_infinity": at_infinity}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def from_document(doc: dict) -> tuple[CheckerboardNet, np.ndarray | None]:
    """Rebuild the net (and the base-curve quadric, if recorded)."""
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise DocumentError(f"unsupported schema {doc.get('schema') if isinstance(doc, dict) else None!r}")
    try:
        vert, horiz = {}, {}
        for e in doc["lines"]:
            target = vert if e["family"] == "v" else horiz
            target[int(e["index"])] = OrientedLine(e["v"], e["w"], e["d"])
        meta = doc.get("meta", {})
        cells = meta.get("incircle_cells")
        net = CheckerboardNet(vert, horiz, meta=meta,
                              incircle_cells=[tuple(c) for c in cells] if cells is not None else None)
        for e in doc.get("circles", []):
            cell = tuple(e["cell"])
            net.circles[cell] = OrientedCircle(e["cx"], e["cy"], e["r"])
            net.residuals[cell] = float(e.get("residual", 0.0))
        for cell in doc.get("circles_at_infinity", []):
            net.circles[tuple(cell)] = None
        quadric = np.array(meta["quadric"], dtype=float) if "quadric" in meta else None
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed net document: {exc}") from exc
    return net, quadric


def load(path) -> tuple[CheckerboardNet, np.ndarray | None]:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"not JSON: {exc}") from exc
    return from_document(doc)
