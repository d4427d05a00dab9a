import json
import math

import pytest

import gsconvex as gs


def test_weights_and_lemma():
    w1, w2 = gs.weights(0.5, 0.5)
    assert w1 == pytest.approx(0.805432350169850, rel=1e-13)
    assert w1 == w2
    d1, d2 = gs.lemma_margins(0.0, 1.0)
    assert d1 == 0.0
    assert d2 == pytest.approx(math.e - 2.0, rel=1e-13)


def test_residual_and_sweep():
    q = gs.Function("x1^2", [(0.0, 1.0)])
    zero = gs.ModMap.constant(0.0, 1)
    assert gs.residual(q, zero, 1.0, [0.0], [1.0], 0.5) == pytest.approx(-0.398721270700128, rel=1e-13)
    report = gs.check_gs_convex(q, zero, gs.SampleGrid(points_per_axis=21), threads=2)
    assert report.verdict == "pass"
    assert report.samples == 21**3

    neg = gs.check_gs_convex(gs.Function("-1", [(0.0, 1.0)]), zero, gs.SampleGrid())
    assert neg.verdict == "fail"
    assert neg.worst.a == 0.0
    assert neg.worst.residual == pytest.approx(math.e - 2.0, abs=1e-12)


def test_errors_map_to_python():
    with pytest.raises(gs.ParseError):
        gs.Function("x1 +", [(0.0, 1.0)])
    with pytest.raises(gs.SampleError):
        gs.check_gs_convex(gs.Function("1/x1", [(0.0, 1.0)]), gs.ModMap.constant(0.0, 1), gs.SampleGrid())
    with pytest.raises(ValueError):
        gs.weights(0.5, 0.0)


def test_classes_and_minimal_g():
    q = gs.Function("x1^2 + 0.1", [(0.0, 1.0)])
    assert gs.check_class("exponential-kind", q).verdict == "pass"
    with pytest.raises(gs.PreconditionError):
        gs.check_class("s-convex", q, gs.ModMap.constant(0.0, 1))
    mg = gs.minimal_g(gs.Function("x1", [(0.0, 1.0)]), 1.0, [1.0], [0.0], [0.01, 0.5, 1.0])
    assert mg.gstar == pytest.approx(-0.00501670841680575, rel=1e-10)
    assert mg.argmax_a == 0.01


def test_gradient_margins_and_optimality():
    sq = gs.Function("x1^2", [(0.0, 1.0)])
    assert gs.gradient(sq, [0.5]) == [1.0]
    t6 = gs.check_t6(sq, gs.ModMap.constant(0.0, 1), 1.0, [0.0], [1.0], 0.5)
    assert t6.margin_i == pytest.approx(5.297442541400256, rel=1e-12)
    lin = gs.Function("x1", [(1.0, 2.0)])
    cert = gs.certify_unconstrained(lin, gs.ModMap.constant(-10.0, 1), 0.5, 0.99, [1.0],
                                    gs.grid_points([(1.0, 2.0)], 11))
    assert cert.holds
    assert cert.worst_margin == pytest.approx(6.969697, abs=1e-6)
    res = gs.minimize(gs.Function("(x1 - 0.3)^2 + (x2 + 0.2)^2", [(-1, 1), (-1, 1)]))
    assert res.best_point == pytest.approx([0.3, -0.2], abs=1e-6)


def test_oracle_matches_sweep():
    q = gs.Function("exp(x1) - 1.2", [(-1.0, 1.0)])
    g = gs.ModMap("u1 - v1", 1)
    grid = gs.SampleGrid(points_per_axis=9, s_list=[0.5, 1.0], refine=20, seed=4)
    o = gs.oracle_worst_residual(q, g, grid)
    c = gs.check_gs_convex(q, g, grid, threads=3)
    assert abs(o.worst - c.worst.residual) <= 1e-12
    assert o.witness.m1 == c.worst.m1


def test_run_cli(tmp_path):
    config = {
        "functions": [{"name": "Q", "expression": "-1", "box": [[0, 1]]}],
        "grid": {"points_per_axis": 5},
        "a_grid": {"points": 5},
    }
    code, err = gs.run_cli("check", json.dumps(config), str(tmp_path))
    assert code == 1, err
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["verdicts"][0]["verdict"] == "fail"
    code, err = gs.run_cli("check", "{", str(tmp_path / "bad"))
    assert code == 2
    assert "configuration error" in err
