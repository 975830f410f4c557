import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import EX1, REGULAR, random_rotation, random_tet, seeds
from tetsteiner.degeneracy import (
    check_nondegenerate,
    cone_record,
    edge_frame_coords,
    torus_record,
)
from tetsteiner.equilibrium import WeightSystem, cone_quantities
from tetsteiner.errors import InfeasibleWeights, NodeOffSegment
from tetsteiner.geometry import TetInstance
from tetsteiner.oracle import minimize_two_nodes
from tetsteiner.simpson import solve_instance


class TestEdgeFrame:
    def test_point_on_line(self, ex1):
        x, y, z = edge_frame_coords(ex1, "12", [5.0, 0, 0])
        assert (x, y * y + z * z) == pytest.approx((5.0, 0.0), abs=1e-15)

    def test_far_vertex(self, ex1):
        assert edge_frame_coords(ex1, "12", ex1.A2) == pytest.approx((2.0, 0, 0), abs=1e-15)

    def test_example_a4(self, ex1):
        x, y, z = edge_frame_coords(ex1, "12", ex1.A4)
        assert x == pytest.approx(-1.0, abs=1e-15)
        assert y * y + z * z == pytest.approx(5.0, rel=1e-14)


def test_equal_weight_thresholds(ex1):
    """Cone thresholds are sqrt(3) and the torus centre offset is r / 3."""
    w = WeightSystem(1, 1, 1, 1, 1)
    rep = check_nondegenerate(ex1, w, binding="terminals")
    for r in rep.records:
        if r.label.startswith("cone") and r.rhs > 0:
            assert r.rhs == pytest.approx(math.sqrt(3), rel=1e-12)
    a = 2.0
    cq = cone_quantities(a, 1, 1, 1)
    r12 = math.sqrt(3) / 2 * a
    assert cq.center_offset == pytest.approx(r12 / 3, rel=1e-12)
    assert cq.R == pytest.approx(2 * r12 / 3, rel=1e-12)


def test_regular_tetrahedron_certified(regular):
    rep = check_nondegenerate(regular)
    assert rep.overall
    res = minimize_two_nodes(regular, restarts=2)
    assert res.degenerate is None
    _, sol = solve_instance(regular)
    for P in regular.vertices:
        assert np.linalg.norm(sol.O12 - P) > 1e-8
        assert np.linalg.norm(sol.O34 - P) > 1e-8


def test_cone_axis_behind_vertex(ex1):
    """C on the extension of A2A1 beyond A1 lies inside the absorbing cone."""
    w = WeightSystem.from_instance(ex1)
    rec = cone_record(ex1, w, "12", [-1.0, 0.0, 0.0])
    assert rec.lhs == 0.0 and not rec.satisfied
    tet = TetInstance([[0, 0, 0], [2, 0, 0], [-2, 0, 3], [-1, 0, 0]])
    rep = check_nondegenerate(tet, binding="terminals")
    assert not rep.overall


def test_torus_inside_spindle(ex1):
    w = WeightSystem.from_instance(ex1)
    # the edge midpoint subtends pi > alpha12: inside the spindle
    assert not torus_record(ex1, w, "12", [1.0, 0.0, 0.0]).satisfied
    assert torus_record(ex1, w, "12", [1.0, 0.0, 50.0]).satisfied


def test_infeasible_propagates(ex1):
    with pytest.raises(InfeasibleWeights):
        check_nondegenerate(ex1, WeightSystem(1, 1, 1, 1, 3))


def test_unknown_binding(ex1):
    with pytest.raises(ValueError):
        check_nondegenerate(ex1, binding="nope")


def test_certificate_agrees_with_oracle():
    """The effective binding says interior exactly when the minimiser is interior."""
    rng = np.random.default_rng(7)
    seen = {True: 0, False: 0}
    while min(seen.values()) < 12:
        tet = random_tet(rng)
        try:
            ok = check_nondegenerate(tet).overall
        except InfeasibleWeights:
            continue
        res = minimize_two_nodes(tet, restarts=3)
        assert ok == (res.degenerate is None)
        seen[ok] += 1


def test_construction_fails_exactly_when_not_certified():
    rng = np.random.default_rng(11)
    for _ in range(150):
        tet = random_tet(rng)
        try:
            ok = check_nondegenerate(tet).overall
        except InfeasibleWeights:
            continue
        if ok:
            _, sol = solve_instance(tet)
            assert sol.cost > 0
        else:
            with pytest.raises(NodeOffSegment):
                solve_instance(tet)


@settings(max_examples=25, deadline=None)
@given(seed=seeds)
def test_rigid_motion_invariance(seed):
    rng = np.random.default_rng(seed)
    tet = random_tet(rng)
    Q, t = random_rotation(rng), rng.normal(size=3)
    moved = TetInstance(tet.vertices @ Q.T + t, tet.B1, tet.B2, tet.B3, tet.B4, tet.B12, tet.B34)
    try:
        a = check_nondegenerate(tet)
    except InfeasibleWeights:
        return
    b = check_nondegenerate(moved)
    for ra, rb in zip(a.records, b.records):
        assert ra.label == rb.label and ra.query_point == rb.query_point
        if abs(ra.lhs - ra.rhs) > 1e-6 * max(1.0, abs(ra.rhs)):
            assert ra.satisfied == rb.satisfied
        if math.isfinite(ra.lhs):
            assert rb.lhs == pytest.approx(ra.lhs, rel=1e-6, abs=1e-8)


def test_terminal_binding_is_only_heuristic():
    """Record of why the terminal binding is not the default: it certifies degenerate trees."""
    rng = np.random.default_rng(3)
    false_pass = 0
    for _ in range(300):
        tet = random_tet(rng)
        try:
            if not check_nondegenerate(tet, binding="terminals").overall:
                continue
        except InfeasibleWeights:
            continue
        if minimize_two_nodes(tet, restarts=2).degenerate is not None:
            false_pass += 1
    assert false_pass > 0


def test_example_nodes_interior():
    tet = TetInstance(EX1)
    assert check_nondegenerate(tet).overall
    assert check_nondegenerate(TetInstance(REGULAR)).overall
