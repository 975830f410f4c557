import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import random_rotation, seeds
from tetsteiner.errors import InconsistentSolution
from tetsteiner.ft import (
    GAMMA0,
    FtSolution,
    _bracketed,
    cot_half_gamma,
    ft_optimality_residual,
    recover_F,
    solve_ft,
    solve_ft_system,
)
from tetsteiner.geometry import TetInstance, skew_frame
from tetsteiner.oracle import minimize_single_node


def interior_ft_tet(rng):
    """Random tetrahedron whose Fermat-Torricelli point is not a vertex."""
    while True:
        V = rng.normal(size=(4, 3))
        tet = TetInstance(V)
        F, cost = minimize_single_node(tet)
        if np.min(np.linalg.norm(V - F, axis=1)) > 1e-3 * tet.scale:
            return tet, F, cost


class TestExampleOne:
    def test_values(self, ex1):
        _, sol = solve_ft(ex1)
        assert sol.t12 == pytest.approx(1.17, abs=0.01)
        assert sol.t34 == pytest.approx(1.42, abs=0.01)
        assert math.degrees(sol.gamma) == pytest.approx(43.47, abs=0.1)
        # direct angle at F, independent of the closing equation
        u, v = ex1.A4 - sol.F, ex1.A3 - sol.F
        ang = math.acos(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))
        assert ang == pytest.approx(sol.gamma, abs=1e-9)

    def test_matches_oracle(self, ex1):
        F, cost = minimize_single_node(ex1)
        _, sol = solve_ft(ex1)
        assert np.linalg.norm(sol.F - F) < 1e-8 * ex1.scale
        assert abs(sol.cost - cost) / cost < 1e-12

    def test_printed_closing_variant_misses(self, ex1):
        f = skew_frame(ex1)
        sol = solve_ft_system(f)
        cot = 1.0 / math.tan(0.5 * sol.gamma)
        assert cot_half_gamma(f, sol.t12, sol.t34) == pytest.approx(cot, rel=1e-10)
        printed = cot_half_gamma(f, sol.t12, sol.t34, variant="printed")
        assert abs(printed - cot) > 1.0

    def test_unknown_variant(self, ex1):
        f = skew_frame(ex1)
        with pytest.raises(ValueError):
            cot_half_gamma(f, 1.0, 1.0, variant="other")


def test_regular_tetrahedron_centroid(regular):
    _, sol = solve_ft(regular)
    np.testing.assert_allclose(sol.F, regular.vertices.mean(axis=0), atol=1e-10)
    assert sol.gamma == pytest.approx(GAMMA0, abs=1e-10)
    assert ft_optimality_residual(regular, sol.F) < 1e-10


def test_oracle_agreement_random():
    rng = np.random.default_rng(21)
    for _ in range(30):
        tet, F, cost = interior_ft_tet(rng)
        _, sol = solve_ft(tet)
        assert abs(sol.cost - cost) / cost < 1e-9
        assert np.linalg.norm(sol.F - F) < 1e-6 * tet.scale


def test_residuals_include_absolute_variant(ex1):
    f = skew_frame(ex1)
    sol = solve_ft_system(f)
    for key in ("line34", "line12", "closing"):
        assert sol.residuals[key] < 1e-11
    for key in ("line34_abs", "line12_abs", "closing_abs"):
        assert sol.residuals[key] < 1e-9


def test_bracket_agrees_with_sweep(ex1):
    f = skew_frame(ex1)
    a = solve_ft_system(f)
    b = _bracketed(f, 1e-12, 10_000)
    assert b.method == "bracket" and a.method == "sweep"
    assert b.gamma == pytest.approx(a.gamma, abs=1e-10)
    assert (b.t12, b.t34) == pytest.approx((a.t12, a.t34), abs=1e-9)


def test_trace_recorded(ex1):
    sol = solve_ft_system(skew_frame(ex1), keep_trace=True)
    assert len(sol.trace) == sol.iterations
    assert sol.trace[-1] == pytest.approx((sol.t12, sol.t34, sol.gamma))


def test_split_residual(ex1):
    _, sol = solve_ft(ex1)
    assert sol.residuals["split"] < 1e-12


def test_wrong_gamma_is_inconsistent(ex1):
    f = skew_frame(ex1)
    sol = solve_ft_system(f)
    bad = FtSolution(sol.t12, sol.t34, 0.5 * sol.gamma, 0)
    with pytest.raises(InconsistentSolution):
        recover_F(ex1, f, bad)


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_rigid_motion(seed):
    rng = np.random.default_rng(seed)
    tet, _, _ = interior_ft_tet(rng)
    Q, t = random_rotation(rng), rng.normal(size=3)
    _, a = solve_ft(tet)
    _, b = solve_ft(TetInstance(tet.vertices @ Q.T + t))
    np.testing.assert_allclose(b.F, a.F @ Q.T + t, atol=1e-8)
    assert b.gamma == pytest.approx(a.gamma, abs=1e-9)


def test_fallback_used_when_sweep_fails():
    # found by scanning seeded normal tetrahedra: the sweep runs off to gamma = pi here
    V = [
        [-0.19199322011209138, -0.6658760797429369, -0.2583831027042033],
        [-0.7741978238913314, -2.421833014859781, -1.1945084417055867],
        [0.47565293887443977, 1.5570779556716277, 1.813580171323687],
        [0.09675174368870822, 0.8933836234441344, 0.9079779107107238],
    ]
    tet = TetInstance(V)
    _, sol = solve_ft(tet)
    assert sol.method == "bracket"
    _, cost = minimize_single_node(tet)
    assert abs(sol.cost - cost) / cost < 1e-9
