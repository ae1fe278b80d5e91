"""Bidirectional series between ring toroidal harmonics and solid spherical harmonics.

One direction writes Delta P_{n-1/2}^m(beta) {cos|sin}(n eta) as a spherical
series with an r < a and an r > a branch (only one converges at a given
point).  The other writes regular/irregular solid spherical harmonics as
series over axial toroidal harmonics Q_{k-1/2}^m(beta) {cos|sin}(k eta),
convergent everywhere off the z-axis (xi > 0) but increasingly slowly, and
with growing cancellation, as the point leaves the focal ring's neighborhood.
Axial toroidal harmonics admit no spherical series at all: they are singular
both at the origin and at infinity, and such requests are rejected.
"""

from __future__ import annotations

import math
import os

from . import coeffs
from .coords import CartesianPoint, to_toroidal
from .errors import AxisPointError, BranchBoundary, UnsupportedExpansion
from .special import (
    EvalResult,
    HarmonicSpec,
    _legendre_zero_pos,
    assoc_legendre_seq,
    legendre_Q_half,
    legendre_zero,
    whipple_ring_factor,
)

__all__ = [
    "truncation_estimate",
    "convergence_region",
    "ring_via_spherical",
    "spherical_via_toroidal",
    "harmonic_via_spherical",
    "term_cap",
]

_SQRT_PI = math.sqrt(math.pi)
_DEFAULT_CAP = 512


def term_cap() -> int:
    """Series-length ceiling; TORHARM_MAX_TERMS overrides the default 512."""
    raw = os.environ.get("TORHARM_MAX_TERMS")
    if raw is None:
        return _DEFAULT_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError("TORHARM_MAX_TERMS must be a positive integer")
    return cap


def truncation_estimate(xi: float, n: int, m: int, tol: float) -> int:
    """Smallest k where the Q-decay envelope times the coefficient bound drops below tol.

    Envelope sqrt(pi) e^{-k xi}/sqrt((2k-1) sinh xi); the coefficient bound is
    the dominating sequence e_{k+1} = ((2n+1)/k) e_k + e_{k-1} times (k+1)^m
    for the Gamma-ratio polynomial.  Capped (cap propagates as a NotConverged
    flag in the series evaluators).
    """
    if xi <= 0.0:
        raise ValueError("xi must be > 0")
    cap = term_cap()
    sinh_xi = math.sinh(xi)
    e_prev, e_cur = 1.0, 1.0
    for k in range(1, cap + 1):
        envelope = _SQRT_PI * math.exp(-k * xi) / math.sqrt((2 * k - 1) * sinh_xi)
        if envelope * e_cur * (k + 1.0) ** m < tol:
            return k
        e_prev, e_cur = e_cur, ((2 * n + 1) / k) * e_cur + e_prev
    return cap


def convergence_region(kind: str, p: CartesianPoint, a: float) -> str:
    """'converges' / 'diverges' / 'boundary' for the named expansion at p."""
    r = p.r
    if kind in ("ring_in_spherical_inner", "ring_in_spherical_outer"):
        if abs(r - a) <= 1e-9 * a:
            return "boundary"
        inner = r < a
        return "converges" if inner == kind.endswith("inner") else "diverges"
    if kind == "spherical_in_toroidal":
        # xi = 0 is exactly the z-axis (plus the r -> inf limit)
        return "diverges" if p.rho == 0.0 else "converges"
    raise ValueError(f"unknown expansion kind {kind!r}")


def ring_via_spherical(n: int, m: int, parity: str, p: CartesianPoint, a: float,
                       k_max: int | None = None, tol: float = 1e-10) -> EvalResult:
    """Delta P_{n-1/2}^m(beta) {cos|sin}(n eta) summed as a spherical series.

    The branch follows from r vs a ((-1)^n inside for r < a, an extra minus
    sign on the sin-type outer branch); the azimuthal cos(m phi) factor is not
    included, matching the series' phi-free form.  k_max defaults to the decay
    estimate with xi_eff = |log(r/a)|.
    """
    if parity not in ("cos", "sin"):
        raise ValueError(f"parity must be 'cos' or 'sin', got {parity!r}")
    if n < 0 or m < 0:
        raise ValueError("n, m must be >= 0")
    r = p.r
    if abs(r - a) < 1e-9 * a:
        raise BranchBoundary(f"r = {r} is within 1e-9*a of the branch sphere r = a")
    inner = r < a
    ratio = (r / a) if inner else (a / r)
    if k_max is None:
        k_max = truncation_estimate(-math.log(ratio), n, m, tol)
    u = p.z / r if r > 0.0 else 0.0

    table = coeffs.get_table(m, max(n, 1), k_max + 1)
    pk = assoc_legendre_seq(m, k_max, u)
    sign_n = -1.0 if n % 2 else 1.0
    pref = 2.0 * (-1.0 if m % 2 else 1.0)

    # cos-type terms need k+m even, sin-type k+m odd; step 2 skips the zeros
    start = m if parity == "cos" else m + 1
    terms = []
    last_abs = 0.0
    for k in range(start, k_max + 1, 2):
        if parity == "cos":
            coeff = float(table.c[n, k]) * legendre_zero(k, m)
        else:
            coeff = float(table.s[n, k]) * legendre_zero(k + 1, m)
        if inner:
            rad = sign_n * ratio ** k
        else:
            rad = ratio ** (k + 1) * (1.0 if parity == "cos" else -1.0)
        t = pref * coeff * rad * float(pk[k])
        terms.append(t)
        last_abs = abs(t)
    total = math.fsum(terms)
    rr = ratio * ratio
    tail_abs = last_abs * rr / max(1.0 - rr, 1e-12)
    scale = max(abs(total), tail_abs, 1e-300)
    rel = tail_abs / scale
    converged = rel <= max(tol, 1e-12)
    return EvalResult(total, converged, len(terms), rel)


def spherical_via_toroidal(n: int, m: int, regularity: str, p: CartesianPoint,
                           a: float, k_max: int | None = None,
                           tol: float = 1e-12) -> EvalResult:
    """(r/a)^n P_n^m(u) or (a/r)^{n+1} P_n^m(u) as an axial-toroidal series.

    Converges for every finite point off the z-axis; the terms first grow,
    so the sum is compensated (Kahan) and the returned ``cancellation`` is
    max |partial sum| / |result|, making the catastrophic-cancellation
    mechanism visible.
    """
    if regularity not in ("regular", "irregular"):
        raise ValueError(f"regularity must be 'regular' or 'irregular', got {regularity!r}")
    if n < 0 or m < 0:
        raise ValueError("n, m must be >= 0")
    if p.rho == 0.0:
        raise AxisPointError("the toroidal series for spherical harmonics diverges on the z-axis")
    t = to_toroidal(p, a)
    if k_max is None:
        k_max = truncation_estimate(t.xi, n, m, tol)
    irregular = regularity == "irregular"

    even = (n + m) % 2 == 0
    table = coeffs.get_table(m, max(k_max, 1), max(n, 1))
    pref = (t.delta / math.pi) * (-1.0 if m % 2 else 1.0)
    pref *= _legendre_zero_pos(n, m) if even else 2.0 * _legendre_zero_pos(n + 1, m)

    # Kahan-compensated accumulation with a running cancellation metric
    acc = 0.0
    comp = 0.0
    max_partial = 0.0
    tail = [0.0, 0.0, 0.0]
    nterms = 0
    k_start = 0 if even else 1
    for k in range(k_start, k_max + 1):
        c_neg, s_neg = coeffs.coeff_neg_m(table, k, n)
        q = legendre_Q_half(k, m, t.beta, tol).value
        if even:
            eps = 1.0 if k == 0 else 2.0
            sgn = (-1.0 if k % 2 else 1.0) if irregular else 1.0
            term = eps * sgn * c_neg * q * math.cos(k * t.eta)
        else:
            sgn = (-1.0 if k % 2 else 1.0) if irregular else -1.0
            term = sgn * s_neg * q * math.sin(k * t.eta)
        term *= pref
        y = term - comp
        new_acc = acc + y
        comp = (new_acc - acc) - y
        acc = new_acc
        max_partial = max(max_partial, abs(acc))
        tail = [tail[1], tail[2], abs(term)]
        nterms += 1
    tail_abs = max(tail)
    scale = max(abs(acc), 1e-300)
    rel = tail_abs / scale
    cancel = max_partial / scale
    converged = rel <= max(tol, 1e-10) and t.xi > 0.0
    return EvalResult(acc, converged, nterms, rel, cancellation=cancel)


def harmonic_via_spherical(spec: HarmonicSpec, p: CartesianPoint, a: float,
                           k_max: int | None = None, tol: float = 1e-10) -> EvalResult:
    """Full harmonic value (azimuthal factor included) via the spherical series.

    Only ring harmonics have one; axial requests raise UnsupportedExpansion.
    The alternate family reuses the standard series through the Whipple scale
    factor rather than a second implementation.
    """
    if spec.kind == "axial":
        raise UnsupportedExpansion(
            "axial toroidal harmonics are singular at both r = 0 and r = infinity "
            "and cannot be expanded in solid spherical harmonics")
    if spec.parity == "sin" and spec.n == 0:
        return EvalResult(0.0, True, 0, 0.0)
    res = ring_via_spherical(spec.n, spec.m, spec.parity, p, a, k_max, tol)
    phi = math.atan2(p.y, p.x)
    value = res.value * math.cos(spec.m * phi)
    if spec.family == "alternate":
        value /= whipple_ring_factor(spec.n, spec.m)
    return EvalResult(value, res.converged, res.terms_used, res.est_error)
