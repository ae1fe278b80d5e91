import math

import numpy as np
import pytest

from torharm.coords import CartesianPoint, from_toroidal, to_cartesian
from torharm.errors import InsideConductor, InvalidGeometry
from torharm.torus import (
    DIV,
    FLAG_NAMES,
    INSIDE,
    SLOW,
    GridSpec,
    error_map,
    potential_spherical,
    potential_toroidal,
    torus_params,
)

GEOM = torus_params(1.0, 0.5)


def surface_point(geom, eta, phi=0.0):
    return to_cartesian(from_toroidal(geom.xi0, eta, phi, geom.a), geom.a)


def test_torus_params():
    g = torus_params(1.0, 0.6)
    assert g.a == pytest.approx(0.8)
    assert g.beta0 == pytest.approx(5.0 / 3.0)
    thin = torus_params(1.0, 1e-6)
    assert thin.beta0 > 1e5  # thin ring limit
    with pytest.raises(InvalidGeometry):
        torus_params(1.0, 1.0)
    with pytest.raises(InvalidGeometry):
        torus_params(1.0, -0.2)


def test_surface_potential_three_geometries():
    etas = np.linspace(-math.pi, math.pi, 64, endpoint=False)
    for beta0 in (5.0 / 3.0, 3.0, 10.0):
        geom = torus_params(1.0, 1.0 / beta0)
        worst = max(abs(potential_toroidal(geom, 1.0, surface_point(geom, e)).value - 1.0)
                    for e in etas)
        assert worst <= 1e-6


def test_inside_conductor_rejected():
    p = to_cartesian(from_toroidal(GEOM.xi0 * 1.2, 0.5, 0.0, GEOM.a), GEOM.a)
    with pytest.raises(InsideConductor):
        potential_toroidal(GEOM, 1.0, p)


def test_far_field_decay():
    v1 = potential_toroidal(GEOM, 1.0, CartesianPoint(50.0, 0, 0)).value
    v2 = potential_toroidal(GEOM, 1.0, CartesianPoint(100.0, 0, 0)).value
    assert v1 / v2 == pytest.approx(2.0, rel=1e-3)  # V ~ 1/r


def test_far_field_monopole_matches_outer_k0():
    # outer spherical k = 0 coefficient vs the r -> inf limit of V r / a
    from torharm.torus import monopole_coefficient

    r = 1e5
    v = potential_toroidal(GEOM, 1.0, CartesianPoint(0.0, 0.0, r)).value
    lim = v * r / GEOM.a
    assert lim == pytest.approx(monopole_coefficient(GEOM), rel=1e-8)


def test_origin_value_is_alternating_surface_sum():
    # at the origin eta = pi, Delta = 2: V = (2 V0/pi) sum eps_n (-1)^n Q/P(beta0)
    # frozen from the 50-digit oracle sum (independent of the production path)
    res = potential_toroidal(GEOM, 1.0, CartesianPoint(0.0, 0.0, 0.0))
    assert res.value == pytest.approx(0.9720412728448058, rel=1e-12)


def test_equatorial_reflection_symmetry(rng):
    for _ in range(10):
        rho = rng.uniform(0.0, 1.9)
        z = rng.uniform(0.05, 1.5)
        p_up = CartesianPoint(rho, 0.0, z)
        p_dn = CartesianPoint(rho, 0.0, -z)
        try:
            v_up = potential_toroidal(GEOM, 1.0, p_up).value
        except InsideConductor:
            continue
        v_dn = potential_toroidal(GEOM, 1.0, p_dn).value
        assert v_dn == pytest.approx(v_up, rel=1e-13)


def test_inner_branch_agrees_with_toroidal():
    p = CartesianPoint(0.3 * GEOM.a * 0.7071, 0.0, 0.3 * GEOM.a * 0.7071)
    vt = potential_toroidal(GEOM, 1.0, p).value
    vs = potential_spherical(GEOM, 1.0, p, "inner")
    assert vs.value == pytest.approx(vt, abs=1e-6)
    assert vs.converged


def test_outer_branch_agrees_with_toroidal():
    p = CartesianPoint(3.0, 0.0, 0.4)
    vt = potential_toroidal(GEOM, 1.0, p).value
    vs = potential_spherical(GEOM, 1.0, p, "outer")
    assert vs.value == pytest.approx(vt, abs=1e-8)
    assert vs.converged


def test_outer_branch_flagged_in_unsafe_zone():
    res = potential_spherical(GEOM, 1.0, CartesianPoint(0.9, 0.0, 0.0), "outer")
    assert not res.converged


def test_error_map_basic_regions():
    grid = error_map(GEOM, GridSpec(0.0, 2.0, 120, -2.0, 2.0, 120))
    rho, z = grid.spec.axes()
    R, Z = np.meshgrid(rho, z, indexing="ij")
    r = np.hypot(R, Z)
    inner_safe = r < 0.9 * (GEOM.R0 - GEOM.r0 ** 2 / GEOM.R0)
    assert np.nanmax(grid.values[inner_safe]) < 1e-12
    assert not np.isnan(grid.values[inner_safe]).any()
    # cells inside the conductor with healthy series carry INSIDE
    assert (grid.flags == INSIDE).sum() > 0
    # the map is evaluated only where the toroidal series converges
    beta, eta, xi = np.broadcast_arrays(*__import__("torharm").coords.toroidal_fields(R, Z, GEOM.a))
    out_of_region = xi >= 2 * GEOM.xi0
    assert np.isnan(grid.values[out_of_region]).all()
    assert (grid.flags[out_of_region] == DIV).all()


def test_error_map_annulus_diverges_on_midplane():
    # z = 0 row: every cell with a < rho < R0 carries a divergence flag
    grid = error_map(GEOM, GridSpec(0.0, 2.0, 401, 0.0, 0.01, 2))
    rho, _ = grid.spec.axes()
    ann = (rho > GEOM.a) & (rho < GEOM.R0)
    flags = grid.flags[ann, 0]
    assert ann.sum() > 5
    assert np.isin(flags, (DIV, SLOW)).all()


def test_error_map_annulus_error_not_decreasing_with_kmax():
    # the spherical partial sums do not settle in the annulus: doubling k_max
    # does not shrink the change between successive truncations
    p = CartesianPoint(0.92, 0.0, 0.0)
    diffs = []
    for k1, k2 in ((80, 160), (160, 320)):
        v1 = potential_spherical(GEOM, 1.0, p, "inner", k_max=k1).value
        v2 = potential_spherical(GEOM, 1.0, p, "inner", k_max=k2).value
        diffs.append(abs(v2 - v1))
    assert diffs[1] >= diffs[0]


def test_inner_convergence_boundary_bracket():
    # largest midplane radius where the inner branch still behaves lies in
    # [R0 - r0^2/R0, a]; divergence detected via sustained term growth
    lo = GEOM.R0 - GEOM.r0 ** 2 / GEOM.R0
    hi = GEOM.a
    # k_max stays in the regime where the n_max=120 coefficient sums are clean;
    # far beyond that the truncated n-tail (growing like (2k+1)^n_max) floods
    # the alternating-reduced inner coefficients with spurious growth
    rs = np.linspace(0.70, 0.90, 81)
    runaway = []
    for r in rs:
        res = potential_spherical(GEOM, 1.0, CartesianPoint(r, 0.0, 0.0), "inner", k_max=200)
        if math.isinf(res.est_error):  # sustained term growth detected
            runaway.append(r)
    assert runaway, "no divergence detected in scan"
    boundary = runaway[0]
    assert lo - 0.01 <= boundary <= hi + 0.01
    # and everything below the bracket's lower end is healthy
    assert all(r >= lo - 0.01 for r in runaway)


def test_gridfile_format_and_determinism():
    grid = error_map(GEOM, GridSpec(0.0, 2.0, 2, -1.0, 1.0, 2))
    text = grid.gridfile_text()
    lines = text.strip().split("\n")
    assert lines[0] == "# torharm-grid v1"
    header = lines[1].split()
    assert header[0] == "#" and len(header) == 8
    assert int(header[3]) == 2 and float(header[7]) == pytest.approx(GEOM.a)
    assert len(lines) == 2 + 4  # 2 header lines + n_rho * n_z rows
    row = lines[2].split(",")
    assert len(row) == 4 and row[3] in FLAG_NAMES
    grid2 = error_map(GEOM, GridSpec(0.0, 2.0, 2, -1.0, 1.0, 2))
    assert grid2.gridfile_text() == text


def test_potential_maps():
    grid = error_map(GEOM, GridSpec(0.0, 2.0, 60, -1.0, 1.0, 41),
                     what="potential-toroidal")
    rho, z = grid.spec.axes()
    j0 = np.argmin(np.abs(z))
    assert z[j0] == 0.0
    # outer equator surface cell: potential close to V0
    i = np.argmin(np.abs(rho - (GEOM.R0 + GEOM.r0)))
    assert grid.values[i, j0] == pytest.approx(1.0, abs=0.05)
    grid_s = error_map(GEOM, GridSpec(0.0, 2.0, 60, -1.0, 1.0, 41),
                       what="potential-spherical")
    far = np.argmin(np.abs(rho - 1.9))
    assert grid_s.values[far, j0] == pytest.approx(
        potential_toroidal(GEOM, 1.0, CartesianPoint(rho[far], 0, 0)).value, rel=1e-10)
