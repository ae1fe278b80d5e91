"""Expansion-coefficient tables C, S (raw) and c, s (Gamma-normalized).

The tables connect ring toroidal harmonics to solid spherical harmonics.  Rows
are the toroidal order n, columns the spherical degree k; the same numbers are
read "transposed" when expanding spherical harmonics in toroidal ones (there
the toroidal order is the summation index).  All four sequences satisfy
three-term forward recurrences in n that run in the growing direction, so a
single forward pass per column is accurate.

Raw C, S grow roughly like Gamma(n+1/2) and overflow doubles near n ~ 170;
every entry is therefore also kept in log-magnitude + sign form, maintained by
a signed log-add recurrence, so tables with n_max of several hundred stay
usable.  The normalized c, s grow only polynomially in whichever index is the
larger and are kept as plain floats.

An exact-rational builder (Fraction arithmetic) backs the golden tests: the
normalization sqrt(pi)/Gamma(n-m+1/2) is a rational number for every integer
n, m, so c and s are exactly representable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .special import _log_gamma_half, legendre_zero

__all__ = [
    "CoeffTable",
    "build_table",
    "build_table_exact",
    "get_table",
    "coeff_c",
    "coeff_s",
    "coeff_neg_m",
    "erofeenko_residual",
    "to_json",
    "from_json",
]

_OVERFLOW_LIMIT = 1e300


@dataclass(frozen=True)
class CoeffTable:
    """Immutable coefficient table for one azimuthal order m.

    C, S, c, s have shape (n_max+1, k_max+1); logC/signC (and S analogues)
    carry every entry in log-magnitude + sign form for the overflow regime.
    """

    m: int
    n_max: int
    k_max: int
    C: np.ndarray
    S: np.ndarray
    c: np.ndarray
    s: np.ndarray
    logC: np.ndarray
    signC: np.ndarray
    logS: np.ndarray
    signS: np.ndarray

    def same_as(self, other: "CoeffTable") -> bool:
        return (self.m == other.m and self.n_max == other.n_max
                and self.k_max == other.k_max
                and np.array_equal(self.C, other.C)
                and np.array_equal(self.S, other.S))


def _signed_log_add(la, sa, lb, sb):
    """(log|a+b|, sign(a+b)) from the log-sign forms of a and b; vectorized."""
    la = np.asarray(la, dtype=float)
    lb = np.asarray(lb, dtype=float)
    sa = np.asarray(sa, dtype=float)
    sb = np.asarray(sb, dtype=float)
    hi = np.maximum(la, lb)
    lo = np.minimum(la, lb)
    s_hi = np.where(la >= lb, sa, sb)
    with np.errstate(invalid="ignore"):
        same = np.log1p(np.exp(lo - hi))
        diff = np.log1p(-np.exp(lo - hi))
    out_log = np.where(sa * sb > 0, hi + same, hi + diff)
    # a + b = 0 exactly, and empty slots (log = -inf) on either side
    out_log = np.where((sa * sb < 0) & (la == lb), -np.inf, out_log)
    out_log = np.where(np.isneginf(la), lb, out_log)
    out_log = np.where(np.isneginf(lb), np.where(np.isneginf(la), -np.inf, la), out_log)
    s_hi = np.where(np.isneginf(la), sb, s_hi)
    s_hi = np.where(np.isneginf(lb), sa, s_hi)
    return out_log, np.where(out_log == -np.inf, 1.0, s_hi)


def _norm_scale(n: int, m: int) -> float:
    """sqrt(pi)/Gamma(n-m+1/2), the C -> c normalization."""
    lg, sg = _log_gamma_half(n - m)
    return sg * math.exp(0.5 * math.log(math.pi) - lg)


def build_table(m: int, n_max: int, k_max: int) -> CoeffTable:
    """Forward-recurrence construction of all coefficient arrays for order m."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if n_max < 1 or k_max < 1:
        raise ValueError("n_max and k_max must be >= 1")
    k = np.arange(k_max + 1, dtype=float)
    shape = (n_max + 1, k_max + 1)
    C = np.zeros(shape)
    S = np.zeros(shape)
    c = np.zeros(shape)
    s = np.zeros(shape)

    C[0] = 1.0
    C[1] = k + 0.5
    S[0] = 0.0
    S[1] = k + m + 1.0
    c[0] = _norm_scale(0, m)
    c[1] = (k + 0.5) * _norm_scale(1, m)
    s[1] = (k + m + 1.0) * _norm_scale(1, m)

    logC = np.full(shape, -np.inf)
    signC = np.ones(shape)
    logS = np.full(shape, -np.inf)
    signS = np.ones(shape)
    with np.errstate(divide="ignore"):
        logC[0] = 0.0
        logC[1] = np.log(C[1])
        logS[1] = np.log(S[1])

    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_max):
            q = (n - 0.5) ** 2 - m * m
            C[n + 1] = (2.0 * k + 1.0) * C[n] + q * C[n - 1]
            S[n + 1] = (2.0 * k + 1.0) * S[n] + q * S[n - 1]
            # log-sign recurrence stays exact past the 1e300 float ceiling
            lq = math.log(abs(q)) if q != 0.0 else -math.inf
            sq = 1.0 if q >= 0.0 else -1.0
            la = np.log(2.0 * k + 1.0) + logC[n]
            lb = lq + logC[n - 1]
            logC[n + 1], signC[n + 1] = _signed_log_add(la, signC[n], lb, sq * signC[n - 1])
            la = np.log(2.0 * k + 1.0) + logS[n]
            lb = lq + logS[n - 1]
            logS[n + 1], signS[n + 1] = _signed_log_add(la, signS[n], lb, sq * signS[n - 1])
            # normalized recurrence: (n-m+1/2) c_{n+1} = (2k+1) c_n + (n+m-1/2) c_{n-1}
            c[n + 1] = ((2.0 * k + 1.0) * c[n] + (n + m - 0.5) * c[n - 1]) / (n - m + 0.5)
            s[n + 1] = ((2.0 * k + 1.0) * s[n] + (n + m - 0.5) * s[n - 1]) / (n - m + 0.5)

    for arr, sign_arr in ((C, signC), (S, signS)):
        bad = ~np.isfinite(arr) | (np.abs(arr) > _OVERFLOW_LIMIT)
        if bad.any():
            # float view saturates with the exact sign; log-sign arrays carry the value
            arr[bad] = sign_arr[bad] * np.inf
    C.setflags(write=False)
    S.setflags(write=False)
    c.setflags(write=False)
    s.setflags(write=False)
    return CoeffTable(m, n_max, k_max, C, S, c, s, logC, signC, logS, signS)


@lru_cache(maxsize=64)
def get_table(m: int, n_max: int, k_max: int) -> CoeffTable:
    """Cached immutable tables; callers share freely across threads."""
    return build_table(m, n_max, k_max)


def _norm_scale_exact(n: int, m: int) -> Fraction:
    """sqrt(pi)/Gamma(n-m+1/2) as an exact rational."""
    j = n - m
    if j >= 0:
        den = 1
        for t in range(2 * j - 1, 0, -2):
            den *= t
        return Fraction(2 ** j, den)
    jj = -j
    num = 1
    for t in range(2 * jj - 1, 0, -2):
        num *= t
    return Fraction(num, (-2) ** jj)


def build_table_exact(m: int, n_max: int, k_max: int):
    """Rational-arithmetic tables (C, S, c, s) for golden verification."""
    C = [[Fraction(0)] * (k_max + 1) for _ in range(n_max + 1)]
    S = [[Fraction(0)] * (k_max + 1) for _ in range(n_max + 1)]
    for k in range(k_max + 1):
        C[0][k] = Fraction(1)
        C[1][k] = Fraction(2 * k + 1, 2)
        S[1][k] = Fraction(k + m + 1)
        for n in range(1, n_max):
            q = Fraction((2 * n - 1) ** 2, 4) - m * m
            C[n + 1][k] = (2 * k + 1) * C[n][k] + q * C[n - 1][k]
            S[n + 1][k] = (2 * k + 1) * S[n][k] + q * S[n - 1][k]
    c = [[_norm_scale_exact(n, m) * C[n][k] for k in range(k_max + 1)]
         for n in range(n_max + 1)]
    s = [[_norm_scale_exact(n, m) * S[n][k] for k in range(k_max + 1)]
         for n in range(n_max + 1)]
    return C, S, c, s


def _check_range(table: CoeffTable, n: int, k: int) -> None:
    if not (0 <= n <= table.n_max and 0 <= k <= table.k_max):
        raise IndexError(f"(n={n}, k={k}) outside table ({table.n_max}, {table.k_max})")


def coeff_c(table: CoeffTable, n_toroidal: int, k_spherical: int) -> float:
    _check_range(table, n_toroidal, k_spherical)
    return float(table.c[n_toroidal, k_spherical])


def coeff_s(table: CoeffTable, n_toroidal: int, k_spherical: int) -> float:
    _check_range(table, n_toroidal, k_spherical)
    return float(table.s[n_toroidal, k_spherical])


def coeff_neg_m(table: CoeffTable, n_toroidal: int, k_spherical: int) -> tuple[float, float]:
    """(c, s) continued to azimuthal order -m.

    c^{-m} = Gamma(n-m+1/2)/Gamma(n+m+1/2) c^m with n the toroidal order; the
    s relation carries the extra ratio (k-m+1)/(k+m+1) in the spherical degree
    k.  (That ratio must be constant along the toroidal recurrence direction,
    which pins it to the spherical index; see the m -> -m recurrence test.)
    """
    _check_range(table, n_toroidal, k_spherical)
    m = table.m
    lg1, s1 = _log_gamma_half(n_toroidal - m)
    lg2, s2 = _log_gamma_half(n_toroidal + m)
    ratio = s1 * s2 * math.exp(lg1 - lg2)
    c_neg = ratio * float(table.c[n_toroidal, k_spherical])
    s_neg = (ratio * (k_spherical - m + 1.0) / (k_spherical + m + 1.0)
             * float(table.s[n_toroidal, k_spherical]))
    return c_neg, s_neg


def erofeenko_residual(table: CoeffTable, n: int, k: int) -> float:
    """Scaled residual of the triangular (Erofeenko) recurrence at (n, k).

    h_{nk} = (-1)^k [c_{nk} P_k^{-m}(0) + i s_{nk} P_{k+1}^{-m}(0)]; the
    returned value is |residual| divided by the largest participating term, so
    a correct table gives ~1e-15 regardless of coefficient magnitudes.

    The identity holds on the expansions' index domain k >= m (the series over
    spherical degree start at k = m, and the recurrence couples k-1 with k).
    Below that the h values mix entries that never appear in any expansion and
    the residual is meaningless.
    """
    if not (1 <= n <= table.n_max - 1):
        raise IndexError("need 1 <= n <= n_max-1")
    if not (1 <= k <= table.k_max):
        raise IndexError("need 1 <= k <= k_max")
    m = table.m

    def h(nn: int, kk: int) -> complex:
        sign = -1.0 if kk % 2 else 1.0
        return sign * complex(float(table.c[nn, kk]) * legendre_zero(kk, m),
                              float(table.s[nn, kk]) * legendre_zero(kk + 1, m))

    terms = (2j * (k - m) * h(n, k - 1),
             -(n - m + 0.5) * h(n + 1, k),
             2.0 * n * h(n, k),
             -(n + m - 0.5) * h(n - 1, k))
    resid = abs(sum(terms))
    scale = max(abs(t) for t in terms)
    return resid / scale if scale > 0.0 else 0.0


# ---------------------------------------------------------------------------
# JSON export (CoeffFileV1)
# ---------------------------------------------------------------------------

def to_json(table: CoeffTable, normalized: bool = False) -> str:
    """CoeffFileV1 text: {"m", "n_max", "k_max", "C", "S"} (+ "c", "s" if asked)."""
    payload = {
        "m": table.m,
        "n_max": table.n_max,
        "k_max": table.k_max,
        "C": [list(row) for row in table.C],
        "S": [list(row) for row in table.S],
    }
    if normalized:
        payload["c"] = [list(row) for row in table.c]
        payload["s"] = [list(row) for row in table.s]
    return json.dumps(payload, indent=1)


def from_json(text: str) -> CoeffTable:
    """Rebuild a table from CoeffFileV1; C and S round-trip bit-exactly."""
    payload = json.loads(text)
    m, n_max, k_max = payload["m"], payload["n_max"], payload["k_max"]
    table = build_table(m, n_max, k_max)
    C = np.asarray(payload["C"], dtype=float)
    S = np.asarray(payload["S"], dtype=float)
    if not (np.array_equal(C, table.C) and np.array_equal(S, table.S)):
        # foreign or perturbed data: keep the file's values authoritative
        c = np.array([_norm_scale(n, m) for n in range(n_max + 1)])[:, None] * C
        s = np.array([_norm_scale(n, m) for n in range(n_max + 1)])[:, None] * S
        with np.errstate(divide="ignore"):
            logC = np.log(np.abs(C))
            logS = np.log(np.abs(S))
        return CoeffTable(m, n_max, k_max, C, S, c, s,
                          logC, np.where(C < 0, -1.0, 1.0),
                          logS, np.where(S < 0, -1.0, 1.0))
    return table
