import math

import pytest

from torharm.coords import CartesianPoint, to_toroidal
from torharm.errors import AxisPointError, CoincidentPoints
from torharm.greens import (
    PointPair,
    green_cylindrical,
    green_direct,
    green_spherical,
    green_toroidal,
)
from torharm.special import assoc_legendre, harmonic_eval, legendre_zero, HarmonicSpec

A = 1.0


def _pair(p1, p2):
    return PointPair(CartesianPoint(*p1), CartesianPoint(*p2), A)


def sample_pair(rng):
    """p1 near the focal ring, p2 well outside: all three expansions converge fast."""
    rho1 = rng.uniform(0.75, 1.25)
    z1 = rng.uniform(-0.2, 0.2)
    phi1 = rng.uniform(-math.pi, math.pi)
    rho2 = rng.uniform(2.6, 3.6)
    z2 = rng.uniform(-0.5, 0.5)
    phi2 = rng.uniform(-math.pi, math.pi)
    return _pair((rho1 * math.cos(phi1), rho1 * math.sin(phi1), z1),
                 (rho2 * math.cos(phi2), rho2 * math.sin(phi2), z2))


def test_direct_trivial():
    pp = _pair((0.3, 0, 0), (1.2, 0, 0))
    assert green_direct(pp) == pytest.approx(1.0 / 0.9, rel=1e-15)
    assert green_direct(_pair((1.2, 0, 0), (0.3, 0, 0))) == green_direct(pp)


def test_coincident_points_rejected():
    with pytest.raises(CoincidentPoints):
        _pair((0.5, 0.1, 0.2), (0.5, 0.1, 0.2))


def test_spherical_axis_pair_telescopes():
    pp = _pair((0, 0, 0.2), (0, 0, 1.0))
    res = green_spherical(pp, n_max=120)
    assert res.value == pytest.approx(1.0 / 0.8, rel=1e-10)


def test_spherical_random_ratio_half(rng):
    for _ in range(5):
        u = rng.uniform(-0.9, 0.9, size=2)
        r1, r2 = 0.5, 1.0
        p1 = (r1 * math.sqrt(1 - u[0] ** 2), 0.0, r1 * u[0])
        p2 = (r2 * math.sqrt(1 - u[1] ** 2) * 0.5, r2 * math.sqrt(1 - u[1] ** 2) * 0.866, r2 * u[1])
        pp = _pair(p1, p2)
        res = green_spherical(pp, n_max=40)
        assert res.value == pytest.approx(green_direct(pp), rel=1e-10)


def test_spherical_slow_near_equal_radii():
    pp = _pair((0.95, 0, 0.2), (0.0, 0.97, 0.2))
    res = green_spherical(pp, n_max=60)
    assert not res.converged


def test_toroidal_matches_direct():
    pp = _pair((1.1, 0, 0.1), (3.0, 0.4, 0.3))
    res = green_toroidal(pp, n_max=40, m_max=20)
    assert res.value == pytest.approx(green_direct(pp), rel=1e-9)


def test_toroidal_order_invariance():
    pa, pb = (1.05, -0.2, 0.15), (2.8, 1.0, -0.4)
    r1 = green_toroidal(_pair(pa, pb), 40, 20)
    r2 = green_toroidal(_pair(pb, pa), 40, 20)
    assert r1.value == r2.value


def test_toroidal_phi_separated():
    rho1, rho2 = 1.15, 3.0
    dphi = math.pi / 3
    pp = _pair((rho1, 0, 0.05), (rho2 * math.cos(dphi), rho2 * math.sin(dphi), 0.2))
    res = green_toroidal(pp, n_max=50, m_max=40)
    assert res.value == pytest.approx(green_direct(pp), rel=1e-8)


def test_cylindrical_equal_phi():
    pp = _pair((0.8, 0, -0.3), (1.7, 0, 0.6))
    res = green_cylindrical(pp)
    assert res.value == pytest.approx(green_direct(pp), rel=1e-12)


def test_exchange_symmetry_all_expansions():
    pa, pb = (0.95, -0.2, 0.15), (2.8, 1.0, -0.4)
    assert green_spherical(_pair(pa, pb), 60).value == green_spherical(_pair(pb, pa), 60).value
    assert green_cylindrical(_pair(pa, pb)).value == green_cylindrical(_pair(pb, pa)).value


def test_cylindrical_survives_equal_r():
    # r1 = r2 defeats the spherical expansion; the cylindrical one is fine
    r = 1.3
    pp = _pair((r, 0, 0), (0, 0.6 * r, 0.8 * r))
    res = green_cylindrical(pp)
    assert res.value == pytest.approx(green_direct(pp), rel=1e-10)
    assert not green_spherical(pp, n_max=60).converged


def test_cylindrical_axis_rejected():
    with pytest.raises(AxisPointError):
        green_cylindrical(_pair((0, 0, 0.4), (1.0, 0, 0)))


def test_cylindrical_tail_slope():
    # term decay ~ e^{-m xibar}/sqrt(2m-1) with cosh(xibar) = chibar
    rho1 = math.hypot(0.9, 0.0)
    rho2 = math.hypot(1.4, 0.3)
    chibar = (rho1 ** 2 + rho2 ** 2 + 0.8 ** 2) / (2 * rho1 * rho2)
    xibar = math.acosh(chibar)
    from torharm.special import legendre_Q_half

    t8 = abs(legendre_Q_half(8, 0, chibar).value) * math.sqrt(15.0)
    t16 = abs(legendre_Q_half(16, 0, chibar).value) * math.sqrt(31.0)
    assert math.log(t8 / t16) / 8 == pytest.approx(xibar, rel=0.02)


def test_equating_m_terms_reproduces_ring_expansion(rng):
    # Evaluating the spherical and cylindrical kernels with one point on the
    # focal ring equates, order by order in m, to the n = 0 ring expansion:
    # sqrt(a/rho) Q_{m-1/2}(chi) = pi (-1)^m sum_k P_k^{-m}(0) (r/a)^k P_k^m(u)
    p = CartesianPoint(0.35, 0.2, 0.25)
    t = to_toroidal(p, A)
    u = p.z / p.r
    for m in range(4):
        lhs = harmonic_eval(HarmonicSpec("alternate", "ring", "cos", 0, m), t, A).value \
            / math.cos(m * t.phi)
        total = 0.0
        for k in range(m, 120):
            total += legendre_zero(k, m) * (p.r / A) ** k * assoc_legendre(k, m, u)
        rhs = math.pi * (-1.0) ** m * total
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_triple_agreement_sample(rng):
    for _ in range(5):
        pp = sample_pair(rng)
        d = green_direct(pp)
        assert green_spherical(pp, 80).value == pytest.approx(d, rel=1e-8)
        assert green_toroidal(pp, 60, 40).value == pytest.approx(d, rel=1e-8)
        assert green_cylindrical(pp, 80).value == pytest.approx(d, rel=1e-8)
