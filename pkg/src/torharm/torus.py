"""Charged conducting torus: toroidal-series solution, spherical re-expansion,
and the relative-error / convergence map over the (rho, z) half-plane.

The toroidal series converges only for xi < 2 xi0 (an inner torus through
rho = R0 - r0^2/R0 and rho = R0 on the midplane); the spherical re-expansion
has an inner branch converging below some r* in [R0 - r0^2/R0, a] and an outer
branch converging for r > R0.  Between them sits an annulus where no spherical
series works, which the map reports through per-cell flags.

All degree recurrences run in the e^{+/- n xi}-scaled form, so arbitrarily fat
or thin tori (large n * xi products) never overflow intermediates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TextIO

import numpy as np

from . import coeffs
from .coords import CartesianPoint, to_toroidal, toroidal_fields
from .errors import InsideConductor, InvalidGeometry
from .special import EvalResult, _p_half_series, _q_half_series

__all__ = [
    "TorusGeometry",
    "torus_params",
    "GridSpec",
    "FieldGrid",
    "potential_toroidal",
    "potential_spherical",
    "error_map",
    "FLAG_NAMES",
    "OK", "SLOW", "DIV", "INSIDE", "SING",
]

OK, SLOW, DIV, INSIDE, SING = range(5)
FLAG_NAMES = ("OK", "SLOW", "DIV", "INSIDE", "SING")

_EPS_RING = 1e-12
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class TorusGeometry:
    """Conducting torus with major radius R0 and minor radius r0.

    a = sqrt(R0^2 - r0^2) is the focal ring radius and beta0 = R0/r0 the
    surface value of beta (xi0 = acosh beta0).
    """

    R0: float
    r0: float
    a: float
    beta0: float
    xi0: float


def torus_params(R0: float, r0: float) -> TorusGeometry:
    if not (0.0 < r0 < R0) or not math.isfinite(R0):
        raise InvalidGeometry(f"need 0 < r0 < R0, got R0={R0}, r0={r0}")
    a = math.sqrt(R0 * R0 - r0 * r0)
    beta0 = R0 / r0
    return TorusGeometry(R0, r0, a, beta0, math.acosh(beta0))


@dataclass(frozen=True)
class GridSpec:
    """Half-plane evaluation grid: rho in [rho_min, rho_max], z in [z_min, z_max]."""

    rho_min: float
    rho_max: float
    n_rho: int
    z_min: float
    z_max: float
    n_z: int

    def __post_init__(self):
        if self.n_rho < 2 or self.n_z < 2:
            raise ValueError("grid needs at least 2 points per axis")
        if not (self.rho_max > self.rho_min >= 0.0 and self.z_max > self.z_min):
            raise ValueError("invalid grid extents")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.rho_min, self.rho_max, self.n_rho),
                np.linspace(self.z_min, self.z_max, self.n_z))


@dataclass(frozen=True)
class FieldGrid:
    """Potential (or error) values plus a convergence flag for every cell."""

    spec: GridSpec
    a: float
    what: str
    values: np.ndarray  # shape (n_rho, n_z)
    flags: np.ndarray   # shape (n_rho, n_z), int codes into FLAG_NAMES

    def gridfile_text(self) -> str:
        """GridFileV1: two header lines, then 'rho,z,value,flag' rows (rho-major)."""
        s = self.spec
        lines = ["# torharm-grid v1",
                 f"# {s.rho_min:.17g} {s.rho_max:.17g} {s.n_rho} "
                 f"{s.z_min:.17g} {s.z_max:.17g} {s.n_z} {self.a:.17g}"]
        rho, z = s.axes()
        for i in range(s.n_rho):
            for j in range(s.n_z):
                lines.append(f"{rho[i]:.17g},{z[j]:.17g},"
                             f"{self.values[i, j]:.17g},{FLAG_NAMES[self.flags[i, j]]}")
        return "\n".join(lines) + "\n"

    def write(self, stream: TextIO) -> None:
        stream.write(self.gridfile_text())


# ---------------------------------------------------------------------------
# surface ratios and spherical-branch coefficients (log-scaled in n)
# ---------------------------------------------------------------------------

def _log_p_seed(n: int, x: float) -> float:
    """log P_{n-1/2}(x) for the seed degrees n = 0, 1 (series, with fallback)."""
    out = _p_half_series(n, 0, x, 1e-15)
    if out is not None:
        return out[0]
    from .special import legendre_P_half

    return math.log(legendre_P_half(n, 0, x).value)


def _log_q_seed(n: int, x: float) -> float:
    out = _q_half_series(n, 0, x, 1e-15)
    if out is not None:
        return out[0]
    from .special import legendre_Q_half

    return math.log(legendre_Q_half(n, 0, x).value)


@lru_cache(maxsize=32)
def _log_surface_ratios(beta0: float, n_max: int) -> tuple[float, ...]:
    """log(Q_{n-1/2}(beta0) / P_{n-1/2}(beta0)) for n = 0..n_max.

    P is carried as Ptil_n = P_n e^{-n xi0} (O(1) for all n), so the forward
    recurrence never overflows however large n*xi0 gets.
    """
    xi0 = math.acosh(beta0)
    e1 = math.exp(-xi0)
    e2 = e1 * e1
    log_p0 = _log_p_seed(0, beta0)
    log_p1 = _log_p_seed(1, beta0)
    ptil = np.empty(n_max + 1)
    ptil[0] = math.exp(log_p0)
    if n_max >= 1:
        ptil[1] = math.exp(log_p1 - xi0)
    for j in range(1, n_max):
        ptil[j + 1] = (2.0 * j * beta0 * e1 * ptil[j] - (j - 0.5) * e2 * ptil[j - 1]) / (j + 0.5)
    out = []
    for n in range(n_max + 1):
        out.append(_log_q_seed(n, beta0) - (math.log(ptil[n]) + n * xi0))
    return tuple(out)


@lru_cache(maxsize=16)
def _branch_coeffs(beta0: float, n_max: int, k_max: int) -> tuple[np.ndarray, np.ndarray]:
    """(A_inner, A_outer): the k-coefficients of the spherical re-expansion,
    with the n-sum (Neumann factors, surface ratios, (-1)^n on the inner
    branch) already folded in."""
    logqp = np.array(_log_surface_ratios(beta0, n_max))
    with np.errstate(under="ignore"):
        qp = np.exp(logqp)
    table = coeffs.get_table(0, n_max, k_max)
    eps = np.full(n_max + 1, 2.0)
    eps[0] = 1.0
    alt = np.where(np.arange(n_max + 1) % 2 == 0, 1.0, -1.0)
    a_in = ((eps * qp * alt)[:, None] * table.c[: n_max + 1]).sum(axis=0)
    a_out = ((eps * qp)[:, None] * table.c[: n_max + 1]).sum(axis=0)
    a_in.setflags(write=False)
    a_out.setflags(write=False)
    return a_in[: k_max + 1], a_out[: k_max + 1]


def _legendre_zero_seq(k_max: int) -> np.ndarray:
    """P_k(0) for k = 0..k_max (order 0)."""
    out = np.zeros(k_max + 1)
    out[0] = 1.0
    for j in range(2, k_max + 1, 2):
        out[j] = -out[j - 2] * (j - 1) / j
    return out


# ---------------------------------------------------------------------------
# single-point evaluations
# ---------------------------------------------------------------------------

def monopole_coefficient(geom: TorusGeometry, n_max: int = 120) -> float:
    """k = 0 coefficient of the outer spherical branch, per unit V0.

    Far from the torus V -> V0 * q * a / r with q this number, so q * a is the
    capacitance-like net-charge scale (kept as a derived output; the source
    material quotes no reference values to pin it against).
    """
    _, a_out = _branch_coeffs(geom.beta0, n_max, 1)
    return 2.0 / math.pi * float(a_out[0])


def potential_toroidal(geom: TorusGeometry, V0: float, p: CartesianPoint,
                       n_max: int = 120, tol: float = 1e-12) -> EvalResult:
    """Potential of the conductor held at V0, from the toroidal series.

    Requires beta <= beta0 (outside or on the surface); that also places the
    point safely inside the xi < 2 xi0 convergence torus of the series.
    """
    if not math.isfinite(V0):
        raise ValueError("V0 must be finite")
    t = to_toroidal(p, geom.a)
    if t.beta > geom.beta0 * (1.0 + 1e-12):
        raise InsideConductor(f"beta = {t.beta} exceeds beta0 = {geom.beta0}")
    logqp = _log_surface_ratios(geom.beta0, n_max)
    xi = t.xi
    e1 = math.exp(-xi)
    e2 = e1 * e1
    if t.beta > 1.0:
        ptil_prev = math.exp(_log_p_seed(0, t.beta))
        ptil_cur = math.exp(_log_p_seed(1, t.beta) - xi)
    else:
        ptil_prev = ptil_cur = 1.0  # beta = 1: P = 1 for every degree, xi = 0
    total = 0.0
    tail = [0.0, 0.0, 0.0]
    terms = 0
    for n in range(n_max + 1):
        ptil_n = ptil_prev if n == 0 else ptil_cur
        term = (1.0 if n == 0 else 2.0) * math.exp(logqp[n] + n * xi) * ptil_n * math.cos(n * t.eta)
        total += term
        tail = [tail[1], tail[2], abs(term)]
        terms += 1
        if n >= 1:
            ptil_prev, ptil_cur = ptil_cur, \
                (2.0 * n * t.beta * e1 * ptil_cur - (n - 0.5) * e2 * ptil_prev) / (n + 0.5)
        if n > 4 and max(tail) * t.delta / math.pi < 1e-17:
            break
    value = V0 * t.delta / math.pi * total
    tail_v = max(tail) * abs(V0) * t.delta / math.pi
    converged = tail_v <= max(tol, 1e-12) * max(abs(V0), 1e-300)
    rel = tail_v / max(abs(value), 1e-300)
    return EvalResult(value, converged, terms, rel)


def potential_spherical(geom: TorusGeometry, V0: float, p: CartesianPoint,
                        branch: str, n_max: int = 120, k_max: int = 170,
                        delta: float = 0.1) -> EvalResult:
    """Potential via the spherical re-expansion, inner or outer branch.

    The inner branch is reliable for r < a (1 - delta), the outer for
    r > R0 (1 + delta); requests outside the safe zone still evaluate but come
    back flagged not-converged.
    """
    if branch not in ("inner", "outer"):
        raise ValueError(f"branch must be 'inner' or 'outer', got {branch!r}")
    a_in, a_out = _branch_coeffs(geom.beta0, n_max, k_max)
    p0 = _legendre_zero_seq(k_max)
    r = p.r
    u = p.z / r if r > 0.0 else 0.0
    inner = branch == "inner"
    if inner:
        x = r / geom.a
        safe = r < geom.a * (1.0 - delta)
        coeff = a_in
    else:
        if r == 0.0:
            raise ValueError("outer branch is undefined at r = 0")
        x = geom.a / r
        safe = r > geom.R0 * (1.0 + delta)
        coeff = a_out
    pw = 1.0 if inner else x
    pk_prev, pk_cur = 1.0, u
    total = 0.0
    tail = [0.0, 0.0, 0.0]
    # growth detection over 8-term blocks: the parity zeros of P_k(0) would
    # defeat any term-by-term monotonicity test
    block_max = 0.0
    prev_block_max = math.inf
    grow_blocks = 0
    diverging = False
    for k in range(0, k_max + 1, 1):
        pk = pk_prev if k == 0 else pk_cur
        if k >= 2:
            pk_prev, pk_cur = pk_cur, ((2 * k - 1) * u * pk_cur - (k - 1) * pk_prev) / k
            pk = pk_cur
        term = coeff[k] * p0[k] * pw * pk
        total += term
        at = abs(term)
        block_max = max(block_max, at)
        if k % 8 == 7:
            if block_max > prev_block_max and block_max > 1e-14:
                grow_blocks += 1
                if grow_blocks >= 3:
                    diverging = True
            else:
                grow_blocks = 0
            prev_block_max = block_max
            block_max = 0.0
        tail = [tail[1], tail[2], at]
        pw *= x
    value = 2.0 * V0 / math.pi * total
    tail_v = 2.0 * abs(V0) / math.pi * max(tail)
    converged = safe and not diverging and tail_v <= 1e-10 * max(abs(V0), 1e-300)
    rel = math.inf if diverging else tail_v / max(abs(value), 1e-300)
    return EvalResult(value, converged, k_max + 1, rel)


# ---------------------------------------------------------------------------
# grid evaluation
# ---------------------------------------------------------------------------

def _toroidal_grid(geom: TorusGeometry, V0: float, beta, eta, xi, mask, n_max: int):
    """Toroidal-series values on the cells selected by ``mask`` (flattened).

    Returns (values, tail_v, slow) full-shape arrays; cells outside the mask
    stay nan.  The series is only ever evaluated where xi < 2 xi0.
    """
    shape = beta.shape
    idx = np.flatnonzero(mask.ravel())
    values = np.full(shape, np.nan).ravel()
    tails = np.full(shape, np.inf).ravel()
    if idx.size == 0:
        return values.reshape(shape), tails.reshape(shape)
    b = beta.ravel()[idx]
    e = eta.ravel()[idx]
    x = xi.ravel()[idx]
    logqp = np.array(_log_surface_ratios(geom.beta0, n_max))

    # seed series for P_{-1/2}, P_{1/2} (positive terms, ratio < 1 in-region)
    w = (b - 1.0) / (b + 1.0)
    s0 = np.ones_like(b)
    s1 = np.ones_like(b)
    t0 = np.ones_like(b)
    t1 = np.ones_like(b)
    for k in range(100_000):
        r0 = ((2 * k + 1) ** 2 / (4.0 * (k + 1) ** 2)) * w
        r1 = ((2 * k + 3) ** 2 / (4.0 * (k + 1) ** 2)) * w
        t0 = t0 * r0
        t1 = t1 * r1
        s0 += t0
        s1 += t1
        if np.max(t1 / s1) < 5e-17:
            break
    e1 = np.exp(-x)
    e2 = e1 * e1
    ptil_prev = _SQRT2 / np.sqrt(b + 1.0) * s0                      # P_{-1/2}(b)
    ptil_cur = 2.0 * _SQRT2 * (b + 1.0) ** -1.5 * s1 * e1           # P_{1/2}(b) e^{-xi}

    total = np.zeros_like(b)
    t3a = np.zeros_like(b)
    t3b = np.zeros_like(b)
    t3c = np.zeros_like(b)
    with np.errstate(under="ignore"):
        for n in range(n_max + 1):
            ptil_n = ptil_prev if n == 0 else ptil_cur
            term = (1.0 if n == 0 else 2.0) * np.exp(logqp[n] + n * x) * ptil_n * np.cos(n * e)
            total += term
            t3a, t3b, t3c = t3b, t3c, np.abs(term)
            if n >= 1:
                ptil_prev, ptil_cur = ptil_cur, \
                    (2.0 * n * b * e1 * ptil_cur - (n - 0.5) * e2 * ptil_prev) / (n + 0.5)
    delta = np.sqrt(2.0 * (b - np.cos(e)))
    values[idx] = V0 * delta / math.pi * total
    tails[idx] = np.maximum(np.maximum(t3a, t3b), t3c) * abs(V0) * delta / math.pi
    return values.reshape(shape), tails.reshape(shape)


def _spherical_grid(geom: TorusGeometry, V0: float, rho, z, inner_mask,
                    n_max: int, k_max: int):
    """Midpoint-branched spherical series on the full grid.

    Returns (values, tail_v, diverged).  Cells whose terms grow for ~3
    consecutive 8-term blocks are frozen and marked diverged.
    """
    a_in, a_out = _branch_coeffs(geom.beta0, n_max, k_max)
    p0 = _legendre_zero_seq(k_max)
    r = np.hypot(rho, z)
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.where(r > 0.0, z / np.where(r > 0.0, r, 1.0), 0.0)
        x = np.where(inner_mask, r / geom.a, np.where(r > 0.0, geom.a / r, 0.0))

    total = np.zeros_like(r)
    pw = np.where(inner_mask, 1.0, x)
    pk_prev = np.ones_like(r)
    pk_cur = u.copy()
    t3a = np.zeros_like(r)
    t3b = np.zeros_like(r)
    t3c = np.zeros_like(r)
    block_max = np.zeros_like(r)
    prev_block_max = np.full_like(r, np.inf)
    grow_blocks = np.zeros(r.shape, dtype=np.int64)
    active = np.ones(r.shape, dtype=bool)
    diverged = np.zeros(r.shape, dtype=bool)

    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        for k in range(0, k_max + 1):
            ck = np.where(inner_mask, a_in[k], a_out[k])
            pk = pk_prev if k == 0 else pk_cur
            if k >= 2:
                pk_new = ((2 * k - 1) * u * pk_cur - (k - 1) * pk_prev) / k
                pk_prev, pk_cur = pk_cur, pk_new
                pk = pk_cur
            term = ck * p0[k] * pw * pk
            term = np.where(active, term, 0.0)
            total += np.where(np.isfinite(term), term, 0.0)
            at = np.abs(term)
            t3a, t3b, t3c = t3b, t3c, np.where(active, at, t3c)
            block_max = np.maximum(block_max, at)
            if k % 8 == 7:
                growing = active & (block_max > prev_block_max) & (block_max > 1e-14)
                grow_blocks = np.where(growing, grow_blocks + 1, 0)
                newly_div = grow_blocks >= 3
                diverged |= newly_div
                active &= ~newly_div
                prev_block_max = block_max.copy()
                block_max = np.zeros_like(r)
            pw = pw * x
    values = 2.0 * V0 / math.pi * total
    tails = 2.0 * abs(V0) / math.pi * np.maximum(np.maximum(t3a, t3b), t3c)
    values = np.where(diverged, np.nan, values)
    tails = np.where(diverged, np.inf, tails)
    return values, tails, diverged


def error_map(geom: TorusGeometry, grid: GridSpec, n_max: int = 120,
              k_max: int = 170, V0: float = 1.0, what: str = "error") -> FieldGrid:
    """Per-cell field map: relative error |V_sph - V_tor|/V0 (default) or either
    potential, with flags {OK, SLOW, DIV, INSIDE, SING} per cell.

    The toroidal series is evaluated only where xi < 2 xi0 (its convergence
    torus); the spherical branch is picked by r vs the (a + R0)/2 midpoint.
    Flag priority: SING > DIV > SLOW > INSIDE > OK.
    """
    if what not in ("error", "potential-toroidal", "potential-spherical"):
        raise ValueError(f"unknown map kind {what!r}")
    rho_ax, z_ax = grid.axes()
    rho, z = np.meshgrid(rho_ax, z_ax, indexing="ij")
    beta, eta, xi = toroidal_fields(rho, z, geom.a)
    sing = ~np.isfinite(beta) | ((rho - geom.a) ** 2 + z * z < (_EPS_RING * geom.a) ** 2)
    inside = (beta > geom.beta0) & ~sing
    tor_region = np.where(sing, False, xi < 2.0 * geom.xi0)

    need_tor = what in ("error", "potential-toroidal")
    need_sph = what in ("error", "potential-spherical")
    conv_tol = 1e-12 * max(abs(V0), 1e-300)

    flags = np.zeros(rho.shape, dtype=np.int64)
    if need_tor:
        v_tor, tail_tor = _toroidal_grid(geom, V0, beta, eta, xi, tor_region, n_max)
        tor_div = ~tor_region
        tor_slow = tor_region & (tail_tor > conv_tol)
    else:
        tor_div = np.zeros(rho.shape, dtype=bool)
        tor_slow = tor_div
    if need_sph:
        r = np.hypot(rho, z)
        inner_mask = r < 0.5 * (geom.a + geom.R0)
        v_sph, tail_sph, sph_div = _spherical_grid(geom, V0, rho, z, inner_mask, n_max, k_max)
        sph_slow = ~sph_div & (tail_sph > conv_tol)
    else:
        sph_div = np.zeros(rho.shape, dtype=bool)
        sph_slow = sph_div

    if what == "error":
        div = tor_div | sph_div
        slow = tor_slow | sph_slow
        with np.errstate(invalid="ignore"):
            values = np.where(div, np.nan, np.abs(v_sph - v_tor) / abs(V0))
    elif what == "potential-toroidal":
        values, div, slow = v_tor, tor_div, tor_slow
    else:
        values, div, slow = v_sph, sph_div, sph_slow

    flags[inside] = INSIDE
    flags[slow] = SLOW
    flags[div] = DIV
    flags[sing] = SING
    values = np.where(sing, np.nan, values)
    return FieldGrid(grid, geom.a, what, values, flags)
