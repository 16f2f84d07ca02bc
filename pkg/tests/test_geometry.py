import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistcc.geometry import (CoincidentPointsError, ExponentRangeError, GeometryError,
                              PlanarConfig, PotentialParams, build_pair_table,
                              cartesian_gradient_f, center_of_mass, config_from_json,
                              config_to_json, euler_residual, f_value,
                              moment_of_inertia, potential_u)

from oracles import equilateral_config, fd_gradient, random_config


def rotate(config, angle):
    c, s = math.cos(angle), math.sin(angle)
    R = np.array([[c, -s], [s, c]])
    return PlanarConfig.from_points(config.points @ R.T, config.masses)


# --- pair table -----------------------------------------------------------

def test_pair_table_equilateral_unit():
    t = build_pair_table(equilateral_config(), PotentialParams(3.0))
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            assert t.r[i, j] == pytest.approx(1.0, abs=1e-15)
            assert t.S[i, j] == pytest.approx(0.0, abs=5e-15)
            assert t.R[i, j] == pytest.approx(1.0, abs=5e-15)
            assert t.T[i, j] == pytest.approx(1.0, abs=5e-15)


def test_pair_table_identities(rng, newton):
    for _ in range(20):
        cfg = random_config(rng, int(rng.integers(3, 6)))
        t = build_pair_table(cfg, newton)
        n = cfg.n
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                assert t.S[i, j] == t.R[i, j] - 1.0
                assert t.T[i, j] == pytest.approx(t.R[i, j] / t.r[i, j] ** 2, rel=1e-14)
                assert t.a_triple(i, j, j) == pytest.approx(2 * t.r[i, j] ** 2, rel=1e-14)
                scale = cfg.diameter() ** 2
                for k in range(n):
                    assert t.lam(i, j, k) == pytest.approx(-t.lam(j, i, k),
                                                           rel=1e-13, abs=1e-14 * scale)
                    assert t.a_triple(i, j, k) == t.a_triple(i, k, j)


def test_pair_table_inertia_identity(rng, newton):
    # M * I == sum_{i<j} m_i m_j r_ij^2
    for _ in range(20):
        cfg = random_config(rng, 5)
        t = build_pair_table(cfg, newton)
        m = cfg.masses
        s = sum(m[i] * m[j] * t.r[i, j] ** 2
                for i in range(5) for j in range(i + 1, 5))
        assert s == pytest.approx(m.sum() * moment_of_inertia(cfg), rel=1e-12)


def test_coincident_rejected():
    with pytest.raises(CoincidentPointsError) as err:
        PlanarConfig.from_points([(0, 0), (1, 1), (1, 1)], (1, 1, 1))
    assert "1 and 2" in str(err.value)


def test_invalid_configs():
    with pytest.raises(GeometryError):
        PlanarConfig.from_points([(0, 0), (1, 0)], (1.0, -2.0))
    with pytest.raises(GeometryError):
        PlanarConfig.from_points([(0, 0)], (1.0,))
    with pytest.raises(ExponentRangeError):
        PotentialParams(1.5)
    # table construction tolerates A = 2, f does not
    vort = PotentialParams(2.0)
    cfg = PlanarConfig.from_points([(0, 0), (1, 0)], (1, 1))
    build_pair_table(cfg, vort)
    with pytest.raises(ExponentRangeError):
        f_value(cfg, vort)
    with pytest.raises(ExponentRangeError):
        potential_u(cfg, vort)


# --- scalars ----------------------------------------------------------------

def test_center_of_mass_examples():
    cfg = PlanarConfig.from_points([(-1, 0), (1, 0)], (1, 1))
    assert np.allclose(center_of_mass(cfg), [0, 0])
    cfg = PlanarConfig.from_points([(0, 0), (4, 0)], (1, 3))
    assert np.allclose(center_of_mass(cfg), [3, 0])


@settings(max_examples=50, deadline=None)
@given(tx=st.floats(-5, 5), ty=st.floats(-5, 5))
def test_center_of_mass_translation(tx, ty):
    cfg = PlanarConfig.from_points([(0, 0), (1, 2), (3, -1)], (1, 2, 5))
    shifted = PlanarConfig.from_points(cfg.points + [tx, ty], cfg.masses)
    assert np.allclose(center_of_mass(shifted), center_of_mass(cfg) + [tx, ty], atol=1e-12)


def test_moment_of_inertia_examples():
    cfg = PlanarConfig.from_points([(-1, 0), (1, 0)], (1, 1))
    assert moment_of_inertia(cfg) == pytest.approx(2.0, rel=1e-15)


@settings(max_examples=30, deadline=None)
@given(lam=st.floats(0.1, 10))
def test_homogeneity(lam):
    params = PotentialParams(3.0)
    cfg = PlanarConfig.from_points([(0, 0), (1, 2), (3, -1)], (1, 2, 5))
    scaled = PlanarConfig.from_points(lam * cfg.points, cfg.masses)
    assert moment_of_inertia(scaled) == pytest.approx(
        lam ** 2 * moment_of_inertia(cfg), rel=1e-12)
    assert potential_u(scaled, params) == pytest.approx(
        lam ** (2 - params.A) * potential_u(cfg, params), rel=1e-12)


def test_potential_examples(newton):
    assert potential_u(equilateral_config(), newton) == pytest.approx(3.0, rel=1e-14)
    two = PlanarConfig.from_points([(0, 0), (2, 0)], (1, 1))
    assert potential_u(two, newton) == pytest.approx(0.5, rel=1e-15)


def test_f_value_equilateral(newton):
    # M = 3, I = 1, U = 3 -> f = 3/2 + 3 = 4.5
    assert f_value(equilateral_config(), newton) == pytest.approx(4.5, rel=1e-14)


def test_f_invariance(rng, newton):
    for _ in range(10):
        cfg = random_config(rng, 4)
        f0 = f_value(cfg, newton)
        rot = rotate(cfg, rng.uniform(0, 2 * math.pi))
        tra = PlanarConfig.from_points(cfg.points + rng.uniform(-3, 3, 2), cfg.masses)
        assert f_value(rot, newton) == pytest.approx(f0, rel=1e-12)
        assert f_value(tra, newton) == pytest.approx(f0, rel=1e-12)
        assert f0 > 0


def test_euler_residual(newton):
    cfg = equilateral_config()
    assert abs(euler_residual(cfg, newton)) < 1e-13
    scaled = PlanarConfig.from_points(3.0 * cfg.points, cfg.masses)
    assert abs(euler_residual(scaled, newton)) > 1e-2


# --- gradient ----------------------------------------------------------------

def test_gradient_matches_fd(rng):
    for A in (2.5, 3.0, 4.0):
        params = PotentialParams(A)
        for n in (3, 4, 5):
            cfg = random_config(rng, n)
            g = cartesian_gradient_f(cfg, params)
            gf = fd_gradient(cfg, params)
            assert np.linalg.norm(g - gf) <= 1e-6 * np.linalg.norm(g)


def test_gradient_zero_at_equilateral(newton):
    g = cartesian_gradient_f(equilateral_config((2.0, 0.7, 1.3)), newton)
    assert np.abs(g).max() < 1e-13


def test_gradient_orthogonal_to_rotation(rng, newton):
    for _ in range(10):
        cfg = random_config(rng, 4)
        g = cartesian_gradient_f(cfg, newton)
        c = center_of_mass(cfg)
        u = np.empty_like(g)
        u[0::2] = -(cfg.points[:, 1] - c[1])
        u[1::2] = cfg.points[:, 0] - c[0]
        assert abs(g @ u) < 1e-12 * np.linalg.norm(g) * np.linalg.norm(u)


# --- config file format -------------------------------------------------------

def test_config_json_roundtrip(rng, newton):
    cfg = random_config(rng, 4)
    text = config_to_json(cfg, newton)
    back, params = config_from_json(text)
    assert params.A == newton.A
    assert np.array_equal(back.positions, cfg.positions)
    assert np.array_equal(back.masses, cfg.masses)


def test_config_json_malformed():
    with pytest.raises(GeometryError):
        config_from_json('{"A": 3.0, "masses": [1, 1]}')
