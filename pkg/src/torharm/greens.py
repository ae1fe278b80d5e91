"""The inverse-distance kernel 1/|r1 - r2| four ways.

Direct evaluation is the oracle; the spherical, toroidal, and cylindrical
expansions are each valid on different configurations (r1 != r2 for the
spherical, beta1 != beta2 for the toroidal, both points off the axis for the
cylindrical) and must all converge to the same number.  Each expansion orders
the two points internally, so callers never manage the r< / r> convention.

Truncation is adaptive: with caps n_max/m_max, summation stops once the
largest of the last three terms (three, because the parity zeros of the
expansions silence alternate terms) drops below the working tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .coords import CartesianPoint, to_toroidal
from .errors import AxisPointError, CoincidentPoints
from .special import (
    EvalResult,
    assoc_legendre_seq,
    legendre_Q_half,
    p_half_seq,
    q_half_neg_order,
)

__all__ = ["PointPair", "green_direct", "green_spherical", "green_toroidal",
           "green_cylindrical"]

_STOP_REL = 1e-15


@dataclass(frozen=True)
class PointPair:
    """Two distinct field points plus the focal radius the toroidal expansion uses."""

    p1: CartesianPoint
    p2: CartesianPoint
    a: float

    def __post_init__(self):
        if (self.p1.x, self.p1.y, self.p1.z) == (self.p2.x, self.p2.y, self.p2.z):
            raise CoincidentPoints("green's function requires two distinct points")
        if not self.a > 0.0:
            raise ValueError("focal radius must be positive")


def green_direct(pp: PointPair) -> float:
    d = math.dist((pp.p1.x, pp.p1.y, pp.p1.z), (pp.p2.x, pp.p2.y, pp.p2.z))
    if d == 0.0:
        raise CoincidentPoints("points coincide")
    return 1.0 / d


def green_spherical(pp: PointPair, n_max: int = 80) -> EvalResult:
    """Spherical multipole expansion; converges geometrically in r</r>."""
    pa, pb = pp.p1, pp.p2
    if pa.r > pb.r:
        pa, pb = pb, pa
    r1, r2 = pa.r, pb.r
    u1 = pa.z / r1 if r1 > 0.0 else 0.0
    u2 = pb.z / r2 if r2 > 0.0 else 0.0
    dphi = math.atan2(pa.y, pa.x) - math.atan2(pb.y, pb.x)
    p1_seq = [assoc_legendre_seq(m, n_max, u1) for m in range(n_max + 1)]
    p2_seq = [assoc_legendre_seq(m, n_max, u2) for m in range(n_max + 1)]

    total = 0.0
    tail = [math.inf, math.inf, 0.0]
    terms = 0
    radial = 1.0 / r2
    for n in range(n_max + 1):
        t_n = 0.0
        for m in range(n + 1):
            eps = 1.0 if m == 0 else 2.0
            fac = math.exp(math.lgamma(n - m + 1) - math.lgamma(n + m + 1))
            t_n += (eps * fac * float(p1_seq[m][n]) * float(p2_seq[m][n])
                    * math.cos(m * dphi))
        t_n *= radial
        total += t_n
        terms += n + 1
        tail = [tail[1], tail[2], abs(t_n)]
        if max(tail) < _STOP_REL * abs(total):
            break
        radial *= r1 / r2
    est = max(tail) / max(abs(total), 1e-300)
    # geometric tail: remaining sum is ~ last/(1 - r1/r2)
    est = est * (r1 / r2) / max(1.0 - r1 / r2, 1e-12)
    return EvalResult(total, est <= 1e-10, terms, est)


def green_toroidal(pp: PointPair, n_max: int = 60, m_max: int = 40) -> EvalResult:
    """Toroidal double expansion; the point with larger beta (closer to the
    focal ring) takes the Q role."""
    t1 = to_toroidal(pp.p1, pp.a)
    t2 = to_toroidal(pp.p2, pp.a)
    if t1.beta > t2.beta:
        t1, t2 = t2, t1
    if t1.beta == t2.beta:
        return EvalResult(math.nan, False, 0, math.inf)
    deta = t1.eta - t2.eta
    dphi = t1.phi - t2.phi
    pref = t1.delta * t2.delta / (2.0 * math.pi * pp.a)

    total = 0.0
    m_tail = [math.inf, math.inf, 0.0]
    terms = 0
    for m in range(m_max + 1):
        p_seq = p_half_seq(n_max, m, t1.beta)
        eps_m = 1.0 if m == 0 else 2.0
        s_m = 0.0
        n_tail = [math.inf, math.inf, 0.0]
        for n in range(n_max + 1):
            eps_n = 1.0 if n == 0 else 2.0
            t_nm = (eps_n * eps_m * float(p_seq[n]) * q_half_neg_order(n, m, t2.beta)
                    * math.cos(n * deta) * math.cos(m * dphi))
            s_m += t_nm
            terms += 1
            n_tail = [n_tail[1], n_tail[2], abs(t_nm)]
            if max(n_tail) < _STOP_REL * max(abs(total + s_m), abs(s_m), 1e-300):
                break
        total += s_m
        m_tail = [m_tail[1], m_tail[2], abs(s_m)]
        if max(m_tail) < _STOP_REL * abs(total):
            break
    value = pref * total
    est = max(m_tail) / max(abs(total), 1e-300)
    return EvalResult(value, est <= 1e-10, terms, est)


def green_cylindrical(pp: PointPair, m_max: int = 80) -> EvalResult:
    """Azimuthal expansion with Q_{m-1/2}(chi_bar); valid off the axis for any
    distinct points (chi_bar = 1, two points on one horizontal circle, is the
    lone failure line where every term is singular)."""
    rho1, rho2 = pp.p1.rho, pp.p2.rho
    if rho1 == 0.0 or rho2 == 0.0:
        raise AxisPointError("cylindrical expansion needs both points off the z-axis")
    chibar = (rho1 * rho1 + rho2 * rho2 + (pp.p1.z - pp.p2.z) ** 2) / (2.0 * rho1 * rho2)
    dphi = math.atan2(pp.p1.y, pp.p1.x) - math.atan2(pp.p2.y, pp.p2.x)
    pref = 1.0 / (math.pi * math.sqrt(rho1 * rho2))
    total = 0.0
    tail = [math.inf, math.inf, 0.0]
    terms = 0
    for m in range(m_max + 1):
        eps = 1.0 if m == 0 else 2.0
        t_m = eps * legendre_Q_half(m, 0, chibar).value * math.cos(m * dphi)
        total += t_m
        terms += 1
        tail = [tail[1], tail[2], abs(t_m)]
        if max(tail) < _STOP_REL * abs(total):
            break
    est = max(tail) / max(abs(total), 1e-300)
    return EvalResult(pref * total, est <= 1e-10, terms, est)
