"""Jacobi elliptic functions and the identities the net formulas lean on.

Everything here takes the modulus ``k`` (not the parameter ``m = k**2``).
The argument ``u`` may be a scalar or an array; ``k`` is a scalar.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

# |denominator| below this is treated as a pole by the ratio functions
POLE_TOL = 1e-13

_AGM_MAX_ITER = 64


class PoleError(ValueError):
    """A Glaisher ratio was evaluated on (or numerically at) a pole."""

    def __init__(self, code: str, u):
        self.code = code
        self.u = u
        super().__init__(f"{code}(u) has a pole near u={u!r}")


def _check_modulus(k: float) -> float:
    k = float(k)
    if not (0.0 <= k < 1.0):
        raise ValueError(f"modulus must satisfy 0 <= k < 1, got {k!r}")
    return k


def complementary(k: float) -> float:
    """k' = sqrt(1 - k^2), computed without cancellation near k = 1."""
    return math.sqrt((1.0 - k) * (1.0 + k))


def _agm_ladder(k: float):
    """Descending Landen sequence: lists a_n, c_n until c_N is negligible."""
    a, b, c = 1.0, complementary(k), k
    a_seq, c_seq = [a], [c]
    for _ in range(_AGM_MAX_ITER):
        if abs(c) <= 1e-17 * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    return a_seq, c_seq


@lru_cache(maxsize=256)
def complete_K(k: float) -> float:
    """Complete elliptic integral of the first kind, K(k) = pi / (2 agm(1, k'))."""
    k = _check_modulus(k)
    a_seq, _ = _agm_ladder(k)
    return math.pi / (2.0 * a_seq[-1])


def reduce_argument(u, k: float):
    """Shift u by a multiple of the real period 4K into [-2K, 2K]."""
    period = 4.0 * complete_K(k)
    u = np.asarray(u, dtype=float)
    return u - period * np.round(u / period)


def jacobi(u, k: float):
    """(sn, cn, dn) of u for modulus k.

    Uses the descending Landen / AGM scheme on the amplitude.  dn is taken as
    the positive root of 1 - k^2 sn^2, which is exact on the real line for
    k < 1 and keeps both quadratic identities at round-off level.
    """
    k = _check_modulus(k)
    scalar = np.ndim(u) == 0
    ur = reduce_argument(u, k)
    a_seq, c_seq = _agm_ladder(k)
    n = len(a_seq) - 1
    phi = (2.0 ** n) * a_seq[-1] * ur
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(np.clip(c_seq[i] / a_seq[i] * np.sin(phi), -1.0, 1.0)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt(1.0 - (k * sn) ** 2)
    if scalar:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn


_LETTERS = "scdn"


def glaisher(code: str, u, k: float):
    """Ratio function named by a two-letter Glaisher code, e.g. "cd" = cn/dn.

    Raises PoleError when the denominator is smaller than POLE_TOL in modulus.
    """
    if len(code) != 2 or code[0] not in _LETTERS or code[1] not in _LETTERS or code[0] == code[1]:
        raise ValueError(f"unknown Glaisher code {code!r}")
    sn, cn, dn = jacobi(u, k)
    vals = {"s": sn, "c": cn, "d": dn, "n": np.ones_like(sn) if np.ndim(sn) else 1.0}
    num, den = vals[code[0]], vals[code[1]]
    if np.any(np.abs(den) < POLE_TOL):
        raise PoleError(code, u)
    out = np.asarray(num) / np.asarray(den)
    return float(out) if np.ndim(u) == 0 else out


def addition_coefficients(s: float, c_d: float, k: float) -> tuple[float, float]:
    """Coefficients (c_s, c_c) making

        c_s sn(p) sn(p+s) + c_c cn(p) cn(p+s) = c_d dn(p) dn(p+s) + 1

    hold for every p, given the free coefficient c_d.
    """
    kp2 = (1.0 - k) * (1.0 + k)
    dc = glaisher("dc", s, k)
    nc = glaisher("nc", s, k)
    return dc + c_d * kp2 * nc, nc + c_d * dc


def four_point_determinant(z, k: float) -> float:
    """det of the rows (1, sn z_i, cn z_i, dn z_i) for four arguments.

    Vanishes whenever the arguments sum to zero (mod periods).
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (4,):
        raise ValueError("need exactly four arguments")
    sn, cn, dn = jacobi(z, k)
    return float(np.linalg.det(np.column_stack([np.ones(4), sn, cn, dn])))


def double_half(z: float, k: float) -> tuple[float, float]:
    """sn(2z) from the duplication formula and sn^2(z/2) from the
    half-argument formula, both in terms of sn, cn, dn at z."""
    sn, cn, dn = jacobi(z, k)
    den = 1.0 - k * k * sn ** 4
    if abs(den) < POLE_TOL:
        raise PoleError("sn2", z)
    return float(2.0 * sn * cn * dn / den), float((1.0 - cn) / (1.0 + dn))
