import math

import pytest

from torharm.coords import (
    CartesianPoint,
    from_toroidal,
    to_cartesian,
    to_toroidal,
    toroidal_fields,
)
from torharm.errors import DegenerateLimit, FocalRingSingularity

A = 1.7  # focal radius used throughout; nothing should depend on its value


def test_outer_equator_point():
    t = to_toroidal(CartesianPoint(2 * A, 0.0, 0.0), A)
    assert t.chi == pytest.approx(1.25, rel=1e-15)
    assert t.beta == pytest.approx(5.0 / 3.0, rel=1e-14)
    assert t.eta == 0.0
    assert t.phi == 0.0


def test_axis_point_is_flagged_not_error():
    t = to_toroidal(CartesianPoint(0.0, 0.0, 0.5 * A), A)
    assert t.xi == 0.0
    assert t.beta == 1.0
    assert t.on_axis
    assert math.isinf(t.chi)


def test_inside_disc_gets_eta_pi():
    t = to_toroidal(CartesianPoint(0.5 * A, 0.0, 0.0), A)
    assert t.eta == pytest.approx(math.pi)


def test_plane_outside_gets_eta_zero():
    t = to_toroidal(CartesianPoint(3.0 * A, 0.0, 0.0), A)
    assert t.eta == 0.0


def test_focal_ring_rejected():
    with pytest.raises(FocalRingSingularity):
        to_toroidal(CartesianPoint(A, 0.0, 0.0), A)
    with pytest.raises(FocalRingSingularity):
        to_toroidal(CartesianPoint(A * (1 + 1e-14), 0.0, 0.0), A)


def test_degenerate_limit_xi0_eta0():
    # xi = 0, eta = 0 is the point at infinity; xi = 0 with eta != 0 is a
    # legitimate axis point and must convert cleanly
    with pytest.raises(DegenerateLimit):
        from_toroidal(0.0, 0.0, 0.0, A)
    axis = from_toroidal(0.0, 0.5, 0.0, A)
    p = to_cartesian(axis, A)
    assert p.rho == 0.0
    assert p.z == pytest.approx(A * math.sin(0.5) / (1 - math.cos(0.5)))


def test_roundtrip_simple():
    p = CartesianPoint(2 * A, 0.0, 0.0)
    t = to_toroidal(p, A)
    q = to_cartesian(t, A)
    assert q.x == pytest.approx(p.x, rel=1e-12)
    assert abs(q.y) < 1e-12
    assert abs(q.z) < 1e-12


def test_roundtrip_random(rng):
    for _ in range(300):
        rho = A * rng.uniform(0.1, 10.0)
        z = A * rng.uniform(-10.0, 10.0)
        phi = rng.uniform(-math.pi, math.pi)
        p = CartesianPoint(rho * math.cos(phi), rho * math.sin(phi), z)
        t = to_toroidal(p, A)
        back = to_toroidal(to_cartesian(t, A), A)
        assert back.beta == pytest.approx(t.beta, rel=1e-10)
        assert back.eta == pytest.approx(t.eta, rel=1e-10, abs=1e-12)
        assert back.phi == pytest.approx(t.phi, rel=1e-10, abs=1e-12)


def test_beta_chi_mutual_consistency(rng):
    for _ in range(100):
        p = CartesianPoint(A * rng.uniform(0.2, 3.0), A * rng.uniform(-1, 1),
                           A * rng.uniform(-2, 2))
        t = to_toroidal(p, A)
        if t.on_axis:
            continue
        assert t.beta == pytest.approx(t.chi / math.sqrt(t.chi**2 - 1), rel=1e-12)
        assert t.chi == pytest.approx(t.beta / math.sqrt(t.beta**2 - 1), rel=1e-12)
        assert t.delta == pytest.approx(math.sqrt(2 * (t.beta - math.cos(t.eta))), rel=1e-14)
        assert t.beta >= 1.0 and t.chi >= 1.0


def test_limiting_regimes():
    near_ring = to_toroidal(CartesianPoint(A * (1 + 1e-6), 0.0, 0.0), A)
    assert near_ring.beta > 1e5 and near_ring.chi == pytest.approx(1.0, abs=1e-10)
    far = to_toroidal(CartesianPoint(100 * A, 0.0, 0.0), A)
    assert far.beta == pytest.approx(1.0, abs=1e-3) and far.chi > 10


def test_eta_odd_in_z(rng):
    for _ in range(50):
        rho = A * rng.uniform(0.2, 3.0)
        z = A * rng.uniform(0.01, 2.0)
        up = to_toroidal(CartesianPoint(rho, 0.0, z), A)
        dn = to_toroidal(CartesianPoint(rho, 0.0, -z), A)
        assert dn.eta == pytest.approx(-up.eta, rel=1e-14)


def test_phi_quadrants():
    for (x, y), want in [((1, 1), math.pi / 4), ((-1, 1), 3 * math.pi / 4),
                         ((-1, -1), -3 * math.pi / 4), ((1, -1), -math.pi / 4)]:
        t = to_toroidal(CartesianPoint(x * A, y * A, 0.3 * A), A)
        assert t.phi == pytest.approx(want)


def test_vectorized_fields_match_scalar(rng):
    rho = A * rng.uniform(0.2, 3.0, size=20)
    z = A * rng.uniform(-2.0, 2.0, size=20)
    beta, eta, xi = toroidal_fields(rho, z, A)
    for i in range(20):
        t = to_toroidal(CartesianPoint(rho[i], 0.0, z[i]), A)
        assert beta[i] == pytest.approx(t.beta, rel=1e-13)
        assert eta[i] == pytest.approx(t.eta, rel=1e-13)
        assert xi[i] == pytest.approx(t.xi, rel=1e-12, abs=1e-14)
