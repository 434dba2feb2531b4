import json
import math
import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose

from specgeom import experiments as ex
from specgeom.errors import ConvergenceWarning, DomainError, MeshError
from specgeom.fem2d import dirichlet_eigs, polygon, regular_polygon, shape_metrics, triangulate_convex
from specgeom.fem2d.domain import check_convex

J0 = 2.404825557695773
J1 = 3.8317059702075123


def test_angular_integrals():
    c4, s4, c2s2 = ex.angular_integrals()
    assert_allclose([c4, s4, c2s2], [3 * math.pi / 8, 3 * math.pi / 8, math.pi / 8], rtol=0, atol=1e-14)
    assert_allclose(c4, 3 * c2s2, rtol=1e-14)


def test_quadrature_ratio():
    assert abs(ex.quadrature_ratio_check(1e-8) - 0.75) <= 1e-8
    assert abs(ex.orthogonality_integral()) <= 1e-8


def test_quadrature_ratio_stable_under_doubling():
    a = ex.quadrature_ratio_check(1e-8)
    b = ex.quadrature_ratio_check(1e-8, radial_order=80, angular_points=128)
    assert abs(a - b) <= 1e-8


def test_quadrature_tol_precondition():
    with pytest.raises(DomainError):
        ex.quadrature_ratio_check(1e-12)


def test_richardson_removes_quadratic_term():
    # f(h) = 3 + 5 h^2 sampled at h and h/2
    assert_allclose(ex.richardson(3 + 5 * 0.1**2, 3 + 5 * 0.05**2), 3.0, rtol=1e-14)


def test_ordered_map_preserves_input_order():
    items = list(range(20))
    assert ex.ordered_map(lambda x: x * x, items, workers=4) == [x * x for x in items]


def test_config_validation():
    with pytest.raises(DomainError):
        ex.EllipseConfig((0.04, 0.02))
    with pytest.raises(DomainError):
        ex.EllipseConfig((0.6,))
    with pytest.raises(DomainError):
        ex.OverlapConfig(1.0, (0.6,))


def test_ellipse_experiment_coarse():
    res = ex.ellipse_experiment(ex.EllipseConfig((0.02, 0.04, 0.06, 0.08), target_h=0.1))
    f_values, slope = res
    assert_allclose(res.f0, (2 * math.pi * J1) ** 2, rtol=1e-3)
    assert all(r < 1 for r in res.ratios)
    assert abs(slope + 0.5) <= 0.1
    for p in res.points:
        assert_allclose(p.perimeter, p.perimeter_integral, rtol=1e-6)
    rep = res.report()
    assert rep["passed"]
    json.dumps(rep)


def test_ellipse_beats_disk_at_t_one_tenth():
    res = ex.ellipse_experiment(ex.EllipseConfig((0.1,), target_h=0.1))
    assert res.ratios[0] < 1


def test_overlapping_disks_coarse():
    cfg = ex.OverlapConfig(1.0, (0.05, 0.1, 0.2), target_h=0.1)
    union, half, alpha = ex.lemma6_experiment(cfg)
    res = ex.lemma6_experiment(cfg)
    assert res.lambda1_ball == pytest.approx(J0**2)
    assert all(p.chain_ok for p in res.points)
    assert all(a <= b * (1 + 2e-8) for a, b in zip(union, half))
    assert half == sorted(half)
    assert all(h > J0**2 for h in half)
    assert math.isfinite(alpha)


def test_overlapping_disks_rejects_unresolved_eps():
    with pytest.raises(MeshError):
        ex.lemma6_experiment(ex.OverlapConfig(1.0, (0.01,), target_h=0.1))


def test_polygon_objective_scale_invariant():
    dom = regular_polygon(10)
    mesh = triangulate_convex(dom, target_h=0.1)
    per = shape_metrics(dom)[1]
    f1 = per**2 * dirichlet_eigs(mesh, 3).eigenvalues[1]
    f3 = (3 * per) ** 2 * dirichlet_eigs(mesh.scaled(3.0), 3).eigenvalues[1]
    assert abs(f3 / f1 - 1) < 1e-6


def test_optimizer_zero_iterations_is_reproducible():
    a = ex.optimize_lambda_k(3, 16, 0, seed=7, target_h=0.08)
    b = ex.optimize_lambda_k(3, 16, 0, seed=7, target_h=0.08)
    assert a.objective == b.objective
    assert a.history == [a.objective]
    v = ex._normalize(regular_polygon(16).vertices)
    assert a.objective == ex.polygon_objective(v, 3, 0.08)


def test_optimizer_short_run():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        s = ex.optimize_lambda_k(2, 8, 1, seed=3, target_h=0.1)
    assert all(b <= a for a, b in zip(s.history, s.history[1:]))
    assert s.history[-1] == s.objective
    check_convex(polygon(s.vertices))
    per = shape_metrics(polygon(s.vertices))[1]
    assert_allclose(per, 2 * math.pi, rtol=1e-12)


def test_optimizer_preconditions():
    with pytest.raises(DomainError):
        ex.optimize_lambda_k(1, 16, 1)
    with pytest.raises(DomainError):
        ex.optimize_lambda_k(2, 6, 1)


def test_optimizer_warns_when_stalled():
    # a step larger than the polygon breaks convexity on every move
    with pytest.warns(ConvergenceWarning):
        ex.optimize_lambda_k(2, 8, 1, seed=0, target_h=0.15, initial_step=5.0)


def test_torsion_reports():
    for shape in ("disk", "square"):
        rep = ex.torsion_report(shape, 0.05, 50)
        assert rep["passed"], rep["checks"]
    assert_allclose(ex.square_torsion_series(), 0.0351443, rtol=1e-5)


def test_report_writers(tmp_path):
    ex.write_jsonl(tmp_path / "r.jsonl", [{"a": np.float64(1.5), "b": np.arange(2)}])
    assert json.loads((tmp_path / "r.jsonl").read_text()) == {"a": 1.5, "b": [0, 1]}
    ex.write_csv(tmp_path / "r.csv", ["x", "y"], [[1, 0.1], [2, np.float64(0.2)]])
    assert (tmp_path / "r.csv").read_text() == "x,y\n1,0.1\n2,0.2\n"
