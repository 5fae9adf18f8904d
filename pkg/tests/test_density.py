import numpy as np
import pytest

from snapdist import fixtures
from snapdist.density import DensityFunction, pseudometric
from snapdist.model import Framework


def _single_bar(L=1.0):
    return Framework(dimension=2, n_joints=2, bars=[(0, 1)], bodies=[],
                     pin_joints=[0], lengths={(0, 1): L})


def test_single_bar_energy_formula():
    # U = E * Vol * (L'^2 - L^2)^2 / (8 L^4); the density divides by
    # E * Vol, so a unit bar gives u/E = (L'^2 - 1)^2 / 8
    fw = _single_bar(L=1.0)
    df = DensityFunction(fw, nu=0.5)
    Lp = 1.1
    u = df.density(np.array([Lp]))
    expected = (Lp ** 2 - 1.0) ** 2 / 8.0
    assert abs(u / df.E - expected) < 1e-14


def test_single_bar_stretch_021():
    # squared-length change of 0.21 on a unit bar: u/E = 0.21^2 / 8
    fw = _single_bar(L=1.0)
    df = DensityFunction(fw, nu=0.5)
    u = df.density_q(np.array([1.21]))
    assert abs(u / df.E - 0.21 ** 2 / 8.0) < 1e-15


def test_density_zero_at_design_lengths():
    fx = fixtures.siamese_dipyramid("bar")
    df = DensityFunction(fx.framework, nu=0.5)
    L = fx.framework.length_vector()
    assert abs(df.density(L)) < 1e-12


def test_density_quadratic_in_squared_lengths():
    fx = fixtures.quad()
    df = DensityFunction(fx.framework, nu=0.5)
    rng = np.random.default_rng(3)
    q0 = fx.framework.length_vector() ** 2
    dq = rng.standard_normal(q0.shape)
    # u(q0 + t dq) is a quadratic polynomial in t
    ts = np.array([0.0, 0.5, 1.0, 1.5, 2.0])
    us = np.array([df.density_q(q0 + t * dq) for t in ts])
    coef = np.polyfit(ts, us, 2)
    assert np.max(np.abs(np.polyval(coef, ts) - us)) < 1e-10 * max(
        1.0, np.max(np.abs(us)))


def test_gradient_matches_central_difference():
    fx = fixtures.four_r_loop("panel")
    df = DensityFunction(fx.framework, nu=0.25)
    rng = np.random.default_rng(8)
    V = fx.chart.realize(np.asarray(fx.minima[0], dtype=float))
    V = V + 0.1 * rng.standard_normal(V.shape)
    g = df.gradient_realization(V)
    h = 1e-6
    for _ in range(10):
        i = rng.integers(0, V.shape[0])
        a = rng.integers(0, V.shape[1])
        Vp, Vm = V.copy(), V.copy()
        Vp[i, a] += h
        Vm[i, a] -= h
        cd = (df.density_from_realization(Vp)
              - df.density_from_realization(Vm)) / (2 * h)
        assert abs(g[i, a] - cd) < 1e-6 * max(1.0, abs(cd))


def test_hessian_is_constant_in_q():
    fx = fixtures.quad()
    df = DensityFunction(fx.framework, nu=0.5)
    H = df.hessian_q()
    assert np.max(np.abs(H - H.T)) < 1e-14


def test_nu_range_enforced():
    fw = _single_bar()
    with pytest.raises(ValueError):
        DensityFunction(fw, nu=0.75)
    with pytest.raises(ValueError):
        DensityFunction(fw, nu=-0.1)


def test_young_modulus_scales_out():
    fx = fixtures.quad()
    d1 = DensityFunction(fx.framework, nu=0.5, E=1.0)
    d2 = DensityFunction(fx.framework, nu=0.5, E=7.5)
    L = fx.framework.length_vector() * 1.05
    assert abs(d1.density(L) / d1.E - d2.density(L) / d2.E) < 1e-15


def test_pseudometric_is_energy_difference():
    fx = fixtures.quad()
    df = DensityFunction(fx.framework, nu=0.5)
    la = fx.framework.length_vector()
    lb = la * 1.02
    assert pseudometric(df, la, lb) == abs(
        df.density(la) - df.density(lb)) / df.E
