import json

import numpy as np
import pytest

from snapdist import fixtures
from snapdist.model import (Chart, Framework, FrameworkError,
                            cayley_menger_volume, triangle_area)


def test_framework_json_round_trip():
    fw = fixtures.quad().framework
    again = Framework.from_json(json.loads(json.dumps(fw.to_json())))
    assert again.to_json() == fw.to_json()


def test_negative_length_rejected():
    data = fixtures.quad().framework.to_json()
    key = next(iter(data["lengths"]))
    data["lengths"][key] = -1.0
    with pytest.raises(FrameworkError) as err:
        Framework.from_json(data).validate()
    assert key.replace("-", "") in str(err.value).replace("-", "") \
        or key in str(err.value) or "length" in str(err.value)


def test_triangle_violation_rejected():
    with pytest.raises(FrameworkError, match="triangle"):
        Framework(dimension=2, n_joints=3,
                  bars=[(0, 1), (1, 2), (0, 2)], bodies=[],
                  pin_joints=[0, 1],
                  lengths={(0, 1): 1.0, (1, 2): 1.0, (0, 2): 5.0})


def test_cayley_menger_volume_unit_tetrahedron():
    d = np.ones((4, 4)) - np.eye(4)
    vol = cayley_menger_volume(d)
    assert abs(vol - np.sqrt(2.0) / 12.0) < 1e-14


def test_triangle_area_right():
    assert abs(triangle_area(3.0, 4.0, 5.0) - 6.0) < 1e-12


def test_expand_to_bar_joint_covers_bodies():
    fw = fixtures.four_r_loop("panel").framework
    bj = fw.expand_to_bar_joint()
    assert not bj.bodies
    edges = set(bj.edges)
    for body in fw.bodies:
        for e in body.edges:
            assert e in edges


def test_chart_realize_project_round_trip():
    fx = fixtures.quad()
    theta = np.asarray(fx.minima[0], dtype=float)
    V = fx.chart.realize(theta)
    assert np.max(np.abs(fx.chart.project(V) - theta)) < 1e-14


def test_pinned_full_chart_dimensions():
    fx = fixtures.siamese_dipyramid("bar")
    fw = fx.framework
    chart = Chart.pinned_full(fw.n_joints, fw.dimension, fw.pin_joints)
    theta = chart.project(np.asarray(fw.realization, dtype=float))
    V = chart.realize(theta)
    assert V.shape == (fw.n_joints, fw.dimension)


def test_bundled_fixture_files_round_trip(tmp_path):
    paths = fixtures.write_fixture_files(str(tmp_path))
    assert any(p.endswith("quad.json") for p in paths)
    for p in paths:
        if p.endswith("sg-decoupled.json"):
            continue
        fw = Framework.from_file(p)
        fw.validate()
        assert fw.to_json() == Framework.from_json(fw.to_json()).to_json()
