"""Half-integer-degree Legendre (toroidal) functions and direct harmonic values.

Production evaluation is double precision: ascending series for the seeds and
P/Q values, with the prefactor carried in log-magnitude + sign form so
large-degree values (which grow like e^{n xi}) never overflow intermediates.
Two series are used, both of Gauss-hypergeometric type in w = (x-1)/(x+1) for
P and in 1/(2x)^2 for Q; all their terms are positive, so accuracy is limited
only by term count, never cancellation.

Key stability facts encoded here:

* P_{n-1/2}^m grows with degree n, so forward recurrence in n is stable and is
  the production path for n >= 2 (seeded by series at n = 0, 1).
* Q_{n-1/2}^m decays with n, so it is never obtained by forward recurrence:
  each (n, m) is summed independently and memoized.
* When the double-precision series would need more terms than the budget
  (argument near the x -> 1 singular point for Q, or very large x for P), the
  evaluation falls back to 50-digit software arithmetic.

The module also houses the two test oracles: the appendix series re-summed in
extended precision (`oracle_p_half_mp` / `oracle_q_half_mp`) and the adaptive
quadrature of the ring-charge integral (`oracle_ring_integral`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from .coords import CartesianPoint, ToroidalPoint
from .errors import AxisPointError, QuadratureFailure, TooCloseToSingularity

__all__ = [
    "EvalResult",
    "HarmonicSpec",
    "gamma_half",
    "legendre_zero",
    "assoc_legendre",
    "assoc_legendre_seq",
    "legendre_P_half",
    "legendre_Q_half",
    "p_half_seq",
    "q_half_neg_order",
    "harmonic_eval",
    "oracle_ring_integral",
    "oracle_p_half_mp",
    "oracle_q_half_mp",
    "whipple_ring_factor",
    "whipple_axial_factor",
]

_SQRT_PI = math.sqrt(math.pi)
_LOG_SQRT_PI = 0.5 * math.log(math.pi)

# double-precision series budgets before the extended-precision fallback kicks in
_P_TERM_BUDGET = 40_000
_Q_TERM_BUDGET = 200_000


@dataclass(frozen=True)
class EvalResult:
    """Value plus convergence report.  est_error is an estimated relative error."""

    value: float
    converged: bool
    terms_used: int
    est_error: float
    cancellation: float | None = None


Family = Literal["standard", "alternate"]
Kind = Literal["ring", "axial"]
Parity = Literal["cos", "sin"]


@dataclass(frozen=True)
class HarmonicSpec:
    """One solid toroidal harmonic: family, ring/axial, trig parity, orders n, m.

    sin parity with n = 0 denotes the identically-zero function.
    """

    family: Family
    kind: Kind
    parity: Parity
    n: int
    m: int

    def __post_init__(self):
        if self.family not in ("standard", "alternate"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.kind not in ("ring", "axial"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.parity not in ("cos", "sin"):
            raise ValueError(f"unknown parity {self.parity!r}")
        if self.n < 0 or self.m < 0:
            raise ValueError("orders n, m must be non-negative")


# ---------------------------------------------------------------------------
# gamma / factorial helpers
# ---------------------------------------------------------------------------

def _log_dfact_odd(n: int) -> float:
    """log((2n-1)!!) for n >= 0, with (-1)!! = 1."""
    if n <= 0:
        return 0.0
    return math.lgamma(n + 0.5) - math.lgamma(0.5) + n * math.log(2.0)


def _log_gamma_half(j: int) -> tuple[float, float]:
    """(log|Gamma(j+1/2)|, sign) for any integer j."""
    if j >= 0:
        return math.lgamma(j + 0.5), 1.0
    i = -j
    # Gamma(-i+1/2) = sqrt(pi) (-2)^i / (2i-1)!!
    return (_LOG_SQRT_PI + i * math.log(2.0) - _log_dfact_odd(i),
            -1.0 if i % 2 else 1.0)


def gamma_half(n: int, sign: str = "+") -> float:
    """Gamma(n+1/2) for sign '+', Gamma(-n+1/2) for sign '-', n >= 0.

    Uses the closed double-factorial forms; overflows to inf for huge n.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if sign == "+":
        lg, s = _log_gamma_half(n)
    elif sign == "-":
        lg, s = _log_gamma_half(-n)
    else:
        raise ValueError("sign must be '+' or '-'")
    try:
        return s * math.exp(lg)
    except OverflowError:
        return s * math.inf


def _int_dfact(n: int) -> int:
    """Integer double factorial with (-1)!! = 1."""
    r = 1
    while n > 0:
        r *= n
        n -= 2
    return r


@lru_cache(maxsize=100_000)
def legendre_zero(k: int, m: int) -> float:
    """P_k^{-m}(0): zero for k+m odd or m > k, else the closed double-factorial form.

    (-1)!! is 1; orders beyond the degree vanish identically.  Exact integer
    arithmetic (correctly rounded) below k+m ~ 600; lgamma form above.
    """
    if k < 0 or m < 0:
        raise ValueError("k, m must be >= 0")
    if m > k or (k + m) % 2 == 1:
        return 0.0
    sgn = -1.0 if ((k + m) // 2) % 2 else 1.0
    if k + m <= 600:
        from fractions import Fraction

        return sgn * float(Fraction(_int_dfact(k - m - 1), _int_dfact(k + m)))
    # (k-m-1)!!/(k+m)!! = 2^{-m} Gamma((k-m+1)/2) / (sqrt(pi) Gamma((k+m)/2 + 1))
    lg = (-m * math.log(2.0) + math.lgamma((k - m + 1) / 2.0)
          - _LOG_SQRT_PI - math.lgamma((k + m) / 2.0 + 1.0))
    return sgn * math.exp(lg)


def _legendre_zero_pos(k: int, m: int) -> float:
    """P_k^m(0) for m >= 0 (no Condon-Shortley phase)."""
    if m > k:
        return 0.0
    if legendre_zero(k, m) == 0.0:
        return 0.0
    sgn = -1.0 if m % 2 else 1.0
    if k + m <= 600:
        from fractions import Fraction

        frac = Fraction(math.factorial(k + m) * _int_dfact(k - m - 1),
                        math.factorial(k - m) * _int_dfact(k + m))
        return sgn * (-1.0 if ((k + m) // 2) % 2 else 1.0) * float(frac)
    scale = math.exp(math.lgamma(k + m + 1) - math.lgamma(k - m + 1))
    return sgn * scale * legendre_zero(k, m)


# ---------------------------------------------------------------------------
# integer associated Legendre functions (no Condon-Shortley phase)
# ---------------------------------------------------------------------------

def assoc_legendre(n: int, m: int, u: float) -> float:
    """P_n^m(u) on [-1, 1] without the (-1)^m phase; negative m via the
    standard Gamma-ratio relation."""
    if abs(u) > 1.0:
        raise ValueError(f"u must be in [-1, 1], got {u}")
    if m < 0:
        mm = -m
        if mm > n:
            return 0.0
        scale = math.exp(math.lgamma(n - mm + 1) - math.lgamma(n + mm + 1))
        return (-1.0 if mm % 2 else 1.0) * scale * assoc_legendre(n, mm, u)
    if m > n:
        return 0.0
    return float(assoc_legendre_seq(m, n, u)[n])


def assoc_legendre_seq(m: int, n_max: int, u):
    """P_n^m(u) for n = 0..n_max (zeros below n = m); u may be an ndarray."""
    u = np.asarray(u, dtype=float)
    out = np.zeros((n_max + 1,) + u.shape)
    if m > n_max:
        return out
    s = np.sqrt(np.maximum(1.0 - u * u, 0.0))
    pmm = np.ones_like(u)
    for i in range(1, m + 1):
        pmm = pmm * (2 * i - 1) * s
    out[m] = pmm
    if m + 1 <= n_max:
        out[m + 1] = u * (2 * m + 1) * pmm
    for n in range(m + 2, n_max + 1):
        out[n] = ((2 * n - 1) * u * out[n - 1] - (n + m - 1) * out[n - 2]) / (n - m)
    return out


# ---------------------------------------------------------------------------
# half-integer Legendre functions: ascending series
# ---------------------------------------------------------------------------

def _p_half_series(n: int, m: int, x: float, tol: float):
    """P_{n-1/2}^m(x) by the ascending series in w = (x-1)/(x+1).

    Returns (log_mag, sign, terms, rel_err) or None if the term budget is
    exhausted before reaching tol.
    """
    w = (x - 1.0) / (x + 1.0)
    s = 1.0
    t = 1.0
    k = 0
    rel = math.inf
    while k < _P_TERM_BUDGET:
        ratio = ((2 * n + 2 * m + 2 * k + 1) * (2 * n + 2 * k + 1)
                 / (4.0 * (k + 1) * (m + k + 1))) * w
        t *= ratio
        s += t
        k += 1
        if ratio < 1.0:
            rel = t * ratio / max(1.0 - ratio, 1e-30) / s
            if rel < tol:
                break
    else:
        return None
    lg_num, sg_num = _log_gamma_half(n + m)
    lg_den, sg_den = _log_gamma_half(n - m)
    log_mag = (0.5 * math.log(2.0) + n * math.log(2.0)
               + 0.5 * m * math.log(x * x - 1.0)
               - (n + m + 0.5) * math.log(x + 1.0)
               + lg_num - lg_den - math.lgamma(m + 1)
               + math.log(s))
    return log_mag, sg_num * sg_den, k, rel


def _q_half_series(n: int, m: int, x: float, tol: float):
    """Q_{n-1/2}^m(x) by the ascending series in (2x)^{-2}; same contract."""
    inv = 1.0 / (4.0 * x * x)
    s = 1.0
    t = 1.0
    k = 0
    rel = math.inf
    while k < _Q_TERM_BUDGET:
        ratio = ((4 * k + 2 * n + 2 * m + 3) * (4 * k + 2 * n + 2 * m + 1)
                 / ((2.0 * k + 2) * (2 * k + 2 * n + 2))) * inv
        t *= ratio
        s += t
        k += 1
        if ratio < 1.0:
            rel = t * ratio / max(1.0 - ratio, 1e-30) / s
            if rel < tol:
                break
    else:
        return None
    # leading term (2n+2m-1)!!/(2n)!! folded into the prefactor
    log_t0 = m * math.log(2.0) + _log_gamma_half(n + m)[0] - _LOG_SQRT_PI - math.lgamma(n + 1)
    log_mag = (math.log(math.pi) + 0.5 * m * math.log(x * x - 1.0)
               - (n + m + 0.5) * math.log(2.0 * x)
               + log_t0 + math.log(s))
    return log_mag, (-1.0 if m % 2 else 1.0), k, rel


def _mp_fallback(func: str, n: int, m: int, x: float) -> float:
    """50-digit evaluation for arguments the double-precision series cannot reach."""
    import mpmath as mp

    with mp.workdps(50):
        nu = mp.mpf(n) - mp.mpf("0.5")
        if func == "P":
            v = mp.legenp(nu, m, mp.mpf(x), type=3)
        else:
            v = mp.legenq(nu, m, mp.mpf(x), type=3)
            v = v.real
        return float(v)


def legendre_P_half(n: int, m: int, x: float, tol: float = 1e-14) -> EvalResult:
    """P_{n-1/2}^m(x) for x > 1 (x = 1 allowed as the exact limit).

    Series at n = 0, 1; stable forward degree recurrence above that.
    """
    if n < 0 or m < 0:
        raise ValueError("n, m must be >= 0")
    if x < 1.0:
        raise ValueError(f"argument must be >= 1, got {x}")
    tol = max(tol, 1e-15)
    if x == 1.0:
        return EvalResult(1.0 if m == 0 else 0.0, True, 0, 0.0)
    if n <= 1:
        out = _p_half_series(n, m, x, tol)
        if out is None:
            try:
                return EvalResult(_mp_fallback("P", n, m, x), True, _P_TERM_BUDGET, 1e-15)
            except Exception as exc:
                raise TooCloseToSingularity(
                    f"P_{{{n}-1/2}}^{m}({x}) did not converge") from exc
        log_mag, sign, terms, rel = out
        return EvalResult(sign * math.exp(log_mag), rel <= max(tol, 1e-12), terms, rel)
    r0 = legendre_P_half(0, m, x, tol)
    r1 = legendre_P_half(1, m, x, tol)
    p_prev, p_cur = r0.value, r1.value
    for j in range(1, n):
        p_prev, p_cur = p_cur, (2 * j * x * p_cur - (j + m - 0.5) * p_prev) / (j - m + 0.5)
    rel = max(r0.est_error, r1.est_error, 5e-16 * n)
    return EvalResult(p_cur, rel <= max(tol, 1e-12), r0.terms_used + r1.terms_used + n - 1, rel)


def p_half_seq(n_max: int, m: int, x: float, tol: float = 1e-14) -> np.ndarray:
    """P_{n-1/2}^m(x) for n = 0..n_max via the forward recurrence."""
    out = np.empty(n_max + 1)
    out[0] = legendre_P_half(0, m, x, tol).value
    if n_max >= 1:
        out[1] = legendre_P_half(1, m, x, tol).value
    for j in range(1, n_max):
        out[j + 1] = (2 * j * x * out[j] - (j + m - 0.5) * out[j - 1]) / (j - m + 0.5)
    return out


@lru_cache(maxsize=300_000)
def _q_half_cached(n: int, m: int, x: float) -> tuple[float, int, float]:
    out = _q_half_series(n, m, x, 5e-16)
    if out is None:
        return _mp_fallback("Q", n, m, x), _Q_TERM_BUDGET, 1e-15
    log_mag, sign, terms, rel = out
    try:
        val = sign * math.exp(log_mag)
    except OverflowError:
        val = sign * math.inf
    return val, terms, rel


def legendre_Q_half(n: int, m: int, x: float, tol: float = 1e-14) -> EvalResult:
    """Q_{n-1/2}^m(x) for x > 1, each (n, m) summed independently and memoized.

    Forward degree recurrence is deliberately never used here: Q is the
    minimal solution in n and the recurrence would blow up its error.
    """
    if n < 0 or m < 0:
        raise ValueError("n, m must be >= 0")
    if x <= 1.0:
        raise TooCloseToSingularity(f"Q_{{{n}-1/2}}^{m} is singular at x = 1 (got {x})")
    tol = max(tol, 1e-15)
    try:
        val, terms, rel = _q_half_cached(n, m, float(x))
    except Exception as exc:
        if isinstance(exc, TooCloseToSingularity):
            raise
        raise TooCloseToSingularity(
            f"Q_{{{n}-1/2}}^{m}({x}) did not converge") from exc
    return EvalResult(val, rel <= max(tol, 1e-12), terms, rel)


def q_half_neg_order(n: int, m: int, x: float, tol: float = 1e-14) -> float:
    """Q_{n-1/2}^{-m}(x) = (-1)^m Gamma(n-m+1/2)/Gamma(n+m+1/2) Q_{n-1/2}^m(x)."""
    q = legendre_Q_half(n, m, x, tol).value
    lg1, s1 = _log_gamma_half(n - m)
    lg2, s2 = _log_gamma_half(n + m)
    return (-1.0 if m % 2 else 1.0) * s1 * s2 * math.exp(lg1 - lg2) * q


# ---------------------------------------------------------------------------
# Whipple scale factors between the standard and alternate families
# ---------------------------------------------------------------------------

def whipple_ring_factor(n: int, m: int) -> float:
    """F with  Delta P_{n-1/2}^m(beta) = F * sqrt(a/rho) Q_{m-1/2}^n(chi)."""
    lg, sg = _log_gamma_half(n - m)
    return (-1.0 if n % 2 else 1.0) * sg * 2.0 / _SQRT_PI * math.exp(-lg)


def whipple_axial_factor(n: int, m: int) -> float:
    """F with  Delta Q_{n-1/2}^m(beta) = F * sqrt(a/rho) P_{m-1/2}^n(chi)."""
    lg, sg = _log_gamma_half(n - m)
    return (-1.0 if n % 2 else 1.0) * sg * math.pi * _SQRT_PI * math.exp(-lg)


# ---------------------------------------------------------------------------
# direct harmonic evaluation
# ---------------------------------------------------------------------------

def harmonic_eval(spec: HarmonicSpec, t: ToroidalPoint, a: float,
                  tol: float = 1e-12) -> EvalResult:
    """Value of one solid toroidal harmonic at a point.

    The azimuthal factor is the real form cos(m phi); callers wanting
    e^{i m phi} can rebuild it from the sin/cos pair.
    """
    n, m = spec.n, spec.m
    if spec.parity == "sin" and n == 0:
        return EvalResult(0.0, True, 0, 0.0)
    trig = math.cos(n * t.eta) if spec.parity == "cos" else math.sin(n * t.eta)
    azim = math.cos(m * t.phi)

    if spec.family == "standard":
        if spec.kind == "ring":
            res = legendre_P_half(n, m, t.beta, tol)
        else:
            res = legendre_Q_half(n, m, t.beta, tol)
        value = t.delta * res.value * trig * azim
    else:
        if t.on_axis or t.rho == 0.0:
            raise AxisPointError(
                "alternate-family harmonics carry sqrt(a/rho); point is on the z-axis")
        if spec.kind == "ring":
            res = legendre_Q_half(m, n, t.chi, tol)
        else:
            res = legendre_P_half(m, n, t.chi, tol)
        value = math.sqrt(a / t.rho) * res.value * trig * azim
    return EvalResult(value, res.converged, res.terms_used, res.est_error)


def oracle_ring_integral(m: int, p: CartesianPoint, a: float,
                         tol: float = 1e-10) -> float:
    """Psi_0^{mc} by adaptive quadrature of the azimuthal ring-charge integral.

    Independent of the Legendre-series machinery; used as a cross-oracle.
    """
    from scipy.integrate import quad

    if m < 0:
        raise ValueError("m must be >= 0")
    rho = p.rho
    z = p.z
    if (rho - a) ** 2 + z * z < (1e-12 * a) ** 2:
        raise ValueError("point is on the focal ring")
    r2 = rho * rho + z * z
    phi = math.atan2(p.y, p.x)

    def integrand(tt: float) -> float:
        return math.cos(m * tt) / math.sqrt(r2 + a * a - 2.0 * rho * a * math.cos(tt))

    val, err = quad(integrand, 0.0, 2.0 * math.pi, epsabs=0.1 * tol,
                    epsrel=1e-13, limit=400)
    if not math.isfinite(val) or err > max(tol, 1e-14) * 10.0:
        raise QuadratureFailure(
            f"ring integral m={m} at rho={rho}, z={z}: quad error {err}")
    dfact = math.exp(_log_dfact_odd(m))
    pref = dfact / ((-2.0) ** m * math.pi)
    return pref * a * math.cos(m * phi) * val


# ---------------------------------------------------------------------------
# extended-precision oracles (appendix series re-summed at >= 50 digits)
# ---------------------------------------------------------------------------

def _mp_dfact(n):
    import mpmath as mp

    r = mp.mpf(1)
    while n > 0:
        r *= n
        n -= 2
    return r


def oracle_p_half_mp(n: int, m: int, x, dps: int = 50, min_terms: int = 300) -> float:
    """P_{n-1/2}^m(x) summed in mpmath; the independent high-precision oracle."""
    import mpmath as mp

    with mp.workdps(dps):
        x = mp.mpf(x)
        w = (x - 1) / (x + 1)
        s = mp.mpf(0)
        t = mp.mpf(1)
        k = 0
        tiny = mp.mpf(10) ** (-dps - 10)
        while k < min_terms or (t > tiny * s and k < 500_000):
            if k > 0:
                t *= mp.mpf((2 * n + 2 * m + 2 * k - 1) * (2 * n + 2 * k - 1)) \
                    / (4 * k * (m + k)) * w
            s += t
            k += 1
        pref = (mp.sqrt(2 * mp.pi) * (x * x - 1) ** (mp.mpf(m) / 2)
                * (x + 1) ** (-n - m - mp.mpf("0.5"))
                * _mp_dfact(2 * (n + m) - 1)
                / (mp.gamma(n - m + mp.mpf("0.5")) * mp.factorial(m) * mp.mpf(2) ** m))
        return float(pref * s)


def oracle_q_half_mp(n: int, m: int, x, dps: int = 50, min_terms: int = 300) -> float:
    """Q_{n-1/2}^m(x) summed in mpmath; the independent high-precision oracle."""
    import mpmath as mp

    with mp.workdps(dps):
        x = mp.mpf(x)
        inv = 1 / (2 * x) ** 2
        s = mp.mpf(0)
        t = _mp_dfact(2 * n + 2 * m - 1) / _mp_dfact(2 * n)
        k = 0
        tiny = mp.mpf(10) ** (-dps - 10)
        while k < min_terms or (t > tiny * s and k < 500_000):
            if k > 0:
                t *= mp.mpf((4 * k + 2 * n + 2 * m - 1) * (4 * k + 2 * n + 2 * m - 3)) \
                    / (2 * k * (2 * k + 2 * n)) * inv
            s += t
            k += 1
        pref = (mp.pi * (-1) ** m * (x * x - 1) ** (mp.mpf(m) / 2)
                / (2 * x) ** (n + m + mp.mpf("0.5")))
        return float(pref * s)
