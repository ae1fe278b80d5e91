"""Transforms between Cartesian/cylindrical and toroidal coordinates.

Toroidal coordinates (xi, eta, phi) with focal ring radius ``a``:

    xi  = (1/2) log[((rho+a)^2 + z^2) / ((rho-a)^2 + z^2)],   xi in [0, inf)
    eta = sign(z) * acos[(r^2 - a^2) / sqrt((r^2+a^2)^2 - 4 rho^2 a^2)],  eta in (-pi, pi]

with the convention sign(0) = +1, so the plane z = 0 maps to eta = pi for
r < a (inside the focal disc) and eta = 0 for r > a.  The derived quantities

    beta = cosh(xi),  chi = coth(xi),  delta = sqrt(2 (beta - cos eta))

are carried on every point because the harmonics are written in terms of
them.  The focal ring (rho = a, z = 0) is the xi -> inf singular circle; the
z-axis and r -> inf both sit at xi = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateLimit, FocalRingSingularity

__all__ = [
    "CartesianPoint",
    "ToroidalPoint",
    "to_toroidal",
    "to_cartesian",
    "from_toroidal",
    "toroidal_fields",
]


@dataclass(frozen=True)
class CartesianPoint:
    x: float
    y: float
    z: float

    @property
    def rho(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def r(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


@dataclass(frozen=True)
class ToroidalPoint:
    """Toroidal coordinates plus every derived quantity the harmonics need.

    ``chi`` is ``math.inf`` on the axis (rho = 0), flagged by ``on_axis``.
    ``r``, ``rho``, ``u`` = cos(theta) are cached for the focal radius the
    point was built with; ``u`` is 0.0 at the origin where it is undefined.
    """

    xi: float
    eta: float
    phi: float
    beta: float
    chi: float
    delta: float
    r: float
    rho: float
    u: float
    on_axis: bool = False


def to_toroidal(p: CartesianPoint, a: float, eps_ring: float = 1e-12) -> ToroidalPoint:
    """Forward transform; raises FocalRingSingularity within eps_ring*a of the ring."""
    if not a > 0.0:
        raise ValueError(f"focal radius must be positive, got {a}")
    rho = math.hypot(p.x, p.y)
    z = p.z
    r2 = rho * rho + z * z
    if (rho - a) ** 2 + z * z < (eps_ring * a) ** 2:
        raise FocalRingSingularity(
            f"point (rho={rho!r}, z={z!r}) within {eps_ring}*a of the focal ring"
        )

    s = r2 + a * a
    d1sq = (rho + a) ** 2 + z * z
    d2sq = (rho - a) ** 2 + z * z
    # sqrt((r^2+a^2)^2 - 4 rho^2 a^2) factored for accuracy near the ring
    root = math.sqrt(d1sq * d2sq)
    beta = s / root
    xi = 0.5 * math.log1p((d1sq - d2sq) / d2sq)
    # atan2 form of the eta definition: cos eta = (r^2-a^2)/root and
    # sin eta = 2az/root identically.  No far-field cancellation.  The plane
    # (z = 0, including -0.0) is pinned per the sign(0) = +1 convention.
    if z == 0.0:
        eta = math.pi if r2 < a * a else 0.0
    else:
        eta = math.atan2(2.0 * a * z, r2 - a * a)
    phi = math.atan2(p.y, p.x)
    if phi <= -math.pi:
        phi += 2.0 * math.pi

    on_axis = rho == 0.0
    chi = math.inf if on_axis else s / (2.0 * rho * a)
    # beta - cos(eta) = 2 a^2 / root exactly, so delta never cancels either
    delta = 2.0 * a / math.sqrt(root)
    r = math.sqrt(r2)
    u = z / r if r > 0.0 else 0.0
    return ToroidalPoint(xi, eta, phi, beta, chi, delta, r, rho, u, on_axis)


def to_cartesian(t: ToroidalPoint, a: float) -> CartesianPoint:
    """Inverse transform.  Raises DegenerateLimit at xi = 0, eta = 0 (point at infinity)."""
    denom = t.beta - math.cos(t.eta)
    if denom <= 0.0 or not math.isfinite(denom):
        raise DegenerateLimit(
            f"(xi={t.xi!r}, eta={t.eta!r}) is on the chart boundary (r -> infinity)"
        )
    sinh_xi = math.sqrt(max(t.beta * t.beta - 1.0, 0.0))
    rho = a * sinh_xi / denom
    z = a * math.sin(t.eta) / denom
    return CartesianPoint(rho * math.cos(t.phi), rho * math.sin(t.phi), z)


def from_toroidal(xi: float, eta: float, phi: float, a: float) -> ToroidalPoint:
    """Build a full ToroidalPoint (with cached r, rho, u) from raw coordinates."""
    if xi < 0.0:
        raise ValueError(f"xi must be >= 0, got {xi}")
    beta = math.cosh(xi)
    on_axis = xi == 0.0
    chi = math.inf if on_axis else 1.0 / math.tanh(xi)
    delta = math.sqrt(2.0 * (beta - math.cos(eta)))
    denom = beta - math.cos(eta)
    if denom <= 0.0:
        raise DegenerateLimit("xi = 0, eta = 0 is the point at infinity")
    rho = a * math.sinh(xi) / denom
    z = a * math.sin(eta) / denom
    r = math.hypot(rho, z)
    u = z / r if r > 0.0 else 0.0
    return ToroidalPoint(xi, eta, phi, beta, chi, delta, r, rho, u, on_axis)


def toroidal_fields(rho, z, a):
    """Vectorized (beta, eta, xi) over numpy arrays of cylindrical coordinates.

    Used by grid fills; points exactly on the focal ring produce inf/nan
    entries that callers must mask themselves.
    """
    import numpy as np

    rho = np.asarray(rho, dtype=float)
    z = np.asarray(z, dtype=float)
    r2 = rho * rho + z * z
    d1sq = (rho + a) ** 2 + z * z
    d2sq = (rho - a) ** 2 + z * z
    root = np.sqrt(d1sq * d2sq)
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = (r2 + a * a) / root
        xi = 0.5 * np.log1p((d1sq - d2sq) / d2sq)
    eta = np.arctan2(2.0 * a * z, r2 - a * a)
    # arctan2(-0.0, negative) gives -pi; the plane convention wants +pi
    eta = np.where((z == 0.0) & (eta < 0.0), -eta, eta)
    return beta, eta, xi
