import math

import numpy as np
import pytest

import sgc


def test_gauss_hermite_moments():
    nodes, weights = sgc.rule("gh", 4)
    assert len(nodes) == 5
    x, w = np.array(nodes), np.array(weights)
    assert w.sum() == pytest.approx(1.0, abs=1e-14)
    assert (w * x**4).sum() == pytest.approx(3.0, rel=1e-12)
    assert (w * x**8).sum() == pytest.approx(105.0, rel=1e-12)


def test_leja_start():
    x = sgc.gaussian_leja(3)
    assert x[0] == 0.0
    assert x[1] == pytest.approx(math.sqrt(2.0), abs=1e-6)
    assert x[2] < 0.0


def test_sets():
    s = sgc.smolyak_set(2, 2)
    assert sorted(map(tuple, s)) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
    assert sorted(map(tuple, sgc.reduced_margin([[0, 0], [1, 0]]))) == [(0, 1), (2, 0)]
    coeffs = dict((tuple(k), c) for k, c in sgc.combination_coefficients(s))
    assert sum(coeffs.values()) == 1


def test_sparse_grid_exp_integral():
    grid = sgc.SparseGrid(sgc.smolyak_set(2, 6), "leja")
    assert grid.incremental_count == grid.combitec_count
    pts = grid.points
    vals = np.exp(0.5 * pts[:, 0] + 0.25 * pts[:, 1])
    assert grid.quadrature(vals.tolist()) == pytest.approx(math.exp(0.5 * (0.25 + 0.0625)), rel=1e-4)
    xi = [0.3, -0.2]
    assert grid.evaluate(vals.tolist(), xi) == pytest.approx(math.exp(0.15 - 0.05), rel=1e-4)


def test_hermite_roundtrip():
    grid = sgc.SparseGrid([[0], [1], [2]], "gh")
    vals = [x[0] ** 2 for x in grid.points]
    coeffs = dict((tuple(k), c) for k, c in grid.hermite_coefficients(vals))
    assert coeffs[(0,)] == pytest.approx(1.0, abs=1e-10)
    assert coeffs[(2,)] == pytest.approx(math.sqrt(2.0), abs=1e-10)


def test_field_and_pde():
    assert 0.9992 <= sgc.variance_coverage(1.0, 1000) <= 0.9995
    paths = sgc.sample_paths("kl", 1.0, 3.0, 100, [0.0, 0.5, 1.0], 4, 7)
    assert len(paths) == 4 and all(p[0] == pytest.approx(1.0) for p in paths)
    nodal, semi = sgc.solve_lognormal("kl", 3.0, 3.0, 10, [], 64)
    assert len(nodal) == 63
    assert semi == pytest.approx(1.0 / math.sqrt(12.0), rel=1e-3)


def test_bench_csv_is_deterministic():
    cfg = """
[experiment]
seed = 3
families = leja
[grid]
dims = 2
max_w = 3
[suite]
functions = f
[function.f]
type = exp_linear
coeff = 0.5
"""
    a = sgc.run_bench("interp", cfg)
    assert a == sgc.run_bench("interp", cfg)
    lines = a.splitlines()
    assert lines[0].startswith("# config:")
    assert lines[1].startswith("function,family,dims,w")
    assert len(lines) == 2 + 4


def test_bad_family():
    with pytest.raises(ValueError):
        sgc.rule("clenshaw", 1)
