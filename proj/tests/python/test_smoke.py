"""Smoke tests for the _perclab module: exact tree values, dict shapes, and
determinism of the seeded estimators."""

import math

import _perclab as pl


def test_version():
    assert pl.__version__ == "1.0.0"


def test_tree_solver_exact_values():
    assert math.isclose(pl.pfin_tree(2), 2.0 / 3.0, rel_tol=0, abs_tol=1e-12)
    sol = pl.solve_tree(2, 0.75)
    assert math.isclose(sol["eta"], 1.0 / 9.0, abs_tol=1e-12)
    assert math.isclose(sol["g_prime"], 0.5, abs_tol=1e-12)
    assert not sol["percolates_x"]
    assert pl.x_percolates(2, 0.5)
    assert not pl.x_percolates(2, 0.9)
    assert pl.kappa(2, 0.4) == 1.0
    assert pl.kappa(2, 0.9) == 0.0


def test_kappa_slope_and_survival_sim():
    slope = pl.kappa_slope_at_critical(2)
    assert slope["converged"]
    assert math.isclose(slope["value"], 4.5, abs_tol=1e-4)
    sim = pl.simulate_x_survival(2, 0.4, depth=50, runs=100, seed=1)
    assert sim["value"] == 1.0  # subcritical branching: X survives surely


def test_lattice_helpers():
    assert pl.spread_out_degree(2, 0) == 4
    assert pl.spread_out_degree(2, 1) == 8
    assert pl.spread_out_degree(3, 2) == 124
    assert pl.linf_dist([0, 0], [3, -2]) == 3


def test_sample_summary_shape_and_determinism():
    a = pl.sample_summary(d=2, p=0.5, n=8, seed=42)
    b = pl.sample_summary(d=2, p=0.5, n=8, seed=42)
    assert a == b
    assert a["edge_count"] == 2 * 16 * 15  # two axes of (2n-1) * 2n edges
    assert 0.0 < a["open_fraction"] < 1.0
    assert a["largest_cluster"] <= 16 * 16
    closed = pl.sample_summary(d=2, p=0.0, n=4, seed=1)
    assert closed["cluster_count"] == 64
    assert closed["finite_complement_size"] == 64
    assert closed["finite_complement_spans"]


def test_boundary_shell_summary():
    cube = [[x, y, z] for x in range(2) for y in range(2) for z in range(2)]
    shell = pl.boundary_shell_summary(cube)
    assert shell["is_surface"]
    assert shell["separates_from_infinity"]
    assert shell["boundary_facets"] == 0
    assert shell["plaquette_count"] == 24  # 6 faces of a 2x2x2 cube, 4 each
    assert shell["hole_free_equivalent"]


def test_estimators_return_seeded_dicts():
    est = pl.one_arm_probability(d=2, p=0.5, n=4, samples=200, seed=9)
    again = pl.one_arm_probability(d=2, p=0.5, n=4, samples=200, seed=9)
    assert est == again
    assert 0.0 <= est["value"] <= 1.0
    assert est["samples"] == 200

    crossing = pl.open_crossing_probability(d=2, p=0.95, n=4, samples=100, seed=3)
    assert crossing["value"] > 0.9

    spanning = pl.finite_complement_spanning_probability(d=2, p=0.05, n=4, samples=100, seed=3)
    assert spanning["value"] > 0.9

    block = pl.estimate_large_component_probability(d=2, p=0.0, n=2, samples=50, seed=5)
    assert block["value"] == 1.0


def test_bisection_reports_steps():
    pc = pl.estimate_pc(d=2, n=8, tol=0.02, samples=400, seed=19)
    assert 0.3 < pc["estimate"] < 0.7
    assert len(pc["steps"]) >= 1
    assert pc["finite_size_caveat"]
