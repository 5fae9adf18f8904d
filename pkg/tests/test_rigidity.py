import numpy as np

from snapdist import fixtures
from snapdist.density import DensityFunction
from snapdist.rigidity import (is_shaky, isostatic_check, line_complex_rank,
                               pluecker_coordinates, rigidity_matrix,
                               self_stress, stress_from_density_gradient)


def test_quad_minimum_not_shaky_saddle_v9_shaky():
    fx = fixtures.quad()
    v1 = fx.chart.realize(np.asarray(fx.minima[0], dtype=float))
    shaky, _ = is_shaky(fx.framework, v1, chart=fx.chart)
    assert not shaky
    v9 = fx.chart.realize(np.asarray(fx.extras["table"]["V9"][:5]))
    shaky9, ratio9 = is_shaky(fx.framework, v9, chart=fx.chart)
    assert shaky9
    assert ratio9 < 1e-8


def test_sd_is_isostatic():
    fw = fixtures.siamese_dipyramid("bar").framework
    rep = isostatic_check(fw, chart=fixtures.siamese_dipyramid("bar").chart)
    assert rep["isostatic"]


def test_quad_is_overbraced():
    fx = fixtures.quad()
    rep = isostatic_check(fx.framework, chart=fx.chart)
    assert len(fx.framework.edges) > rep["rank"]
    assert not rep["isostatic"]


def test_rigidity_matrix_annihilates_infinitesimal_motion():
    # pinned chart: rows are d(L^2)/d(theta); at a shaky realization some
    # direction is annihilated
    fx = fixtures.quad()
    v9 = fx.chart.realize(np.asarray(fx.extras["table"]["V9"][:5]))
    R, _ = rigidity_matrix(fx.framework, v9, chart=fx.chart)
    _, sv, vt = np.linalg.svd(R.T)
    direction = vt[-1]
    assert np.max(np.abs(R.T @ direction)) < 1e-8 * np.abs(R).max()


def test_self_stress_at_critical_point_matches_gradient():
    fx = fixtures.quad()
    df = DensityFunction(fx.framework, nu=0.5)
    v5 = fx.chart.realize(np.asarray(fx.extras["table"]["V5"][:5]))
    stress = stress_from_density_gradient(df, v5)
    assert stress.residual < 1e-8
    assert np.max(np.abs(stress.omega)) > 1e-8


def test_self_stress_nullspace_for_overbraced():
    fx = fixtures.quad()
    V = fx.chart.realize(np.asarray(fx.minima[0], dtype=float))
    st = self_stress(fx.framework, V, chart=fx.chart)
    assert st.residual < 1e-10


def test_pluecker_coordinates_normalized():
    p = np.array([1.0, 0.0, 0.0])
    q = np.array([1.0, 2.0, 0.0])
    pl = pluecker_coordinates(p, q)
    assert np.allclose(pl[:3], [0.0, 1.0, 0.0])
    # moment = p x q / |q - p|
    assert np.allclose(pl[3:], np.cross(p, q) / 2.0)


def test_line_complex_rank_of_generic_lines():
    rng = np.random.default_rng(0)
    pairs = [(rng.standard_normal(3), rng.standard_normal(3))
             for _ in range(6)]
    rank, _ = line_complex_rank(pairs)
    assert rank == 6


def test_line_complex_rank_of_concurrent_lines():
    # lines through one point lie in a singular complex (rank <= 3 for 6
    # concurrent lines: their Pluecker vectors satisfy m = p x d)
    rng = np.random.default_rng(1)
    apex = np.array([1.0, 2.0, 3.0])
    pairs = [(apex, apex + rng.standard_normal(3)) for _ in range(6)]
    rank, _ = line_complex_rank(pairs)
    assert rank <= 5
