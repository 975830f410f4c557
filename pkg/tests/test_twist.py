import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EX1, frame_tet, random_rotation, random_tet, seeds
from tetsteiner.degeneracy import check_nondegenerate
from tetsteiner.errors import InfeasibleWeights, UndefinedTwist
from tetsteiner.ft import solve_ft_system
from tetsteiner.geometry import TetInstance, skew_frame
from tetsteiner.simpson import solve_instance
from tetsteiner.twist import TwistCase, cos_twist, twist_angle, twist_angle_normal_oracle

angles = st.floats(0.05, math.pi - 0.05)


def certified_solution(rng):
    while True:
        tet = random_tet(rng)
        try:
            if check_nondegenerate(tet).overall:
                return tet, *solve_instance(tet)
        except InfeasibleWeights:
            continue


@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_formula_matches_normals(seed):
    _, f, sol = certified_solution(np.random.default_rng(seed))
    rep = twist_angle(f, sol.t12, sol.t34)
    assert abs(rep.omega - twist_angle_normal_oracle(f, sol.T12, sol.T34)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(
    H=st.floats(0.1, 5), phi=angles, k1=st.floats(-3, 3), k2=st.floats(-3, 3),
    a12=st.floats(0.3, 4), a34=st.floats(0.3, 4),
)
def test_perpendicular_simpson_line_gives_phi(H, phi, k1, a12, k2, a34):
    """t12 = t34 = 0 puts the Simpson line on the common perpendicular."""
    f = skew_frame(frame_tet(H, phi, k1, a12, k2, a34))
    rep = twist_angle(f, 0.0, 0.0)
    assert rep.special_case is TwistCase.both_right
    assert abs(rep.omega - f.phi) < 1e-12


@settings(max_examples=60, deadline=None)
@given(H=st.floats(0.1, 5), t12=st.floats(-3, 3), t34=st.floats(-3, 3))
def test_right_interedge_angle(H, t12, t34):
    f = skew_frame(frame_tet(H, math.pi / 2, 0.3, 1.0, 0.4, 1.0))
    rep = twist_angle(f, t12, t34)
    expect = -1.0 / (math.tan(rep.phi12) * math.tan(rep.phi34))
    assert math.cos(rep.omega) == pytest.approx(expect, abs=1e-9)
    if rep.special_case is not TwistCase.both_right:
        assert rep.special_case is TwistCase.phi_right


@given(p12=angles, p34=angles)
def test_parallel_edge_reduction(p12, p34):
    """With cos(phi) = 1 the general formula is the parallel-edge closed form."""
    expect = (1 - math.cos(p12) * math.cos(p34)) / (math.sin(p12) * math.sin(p34))
    assert cos_twist(1.0, p12, p34) == pytest.approx(expect, rel=1e-14)


def test_cos_twist_never_below_minus_one_for_valid_angles():
    # the spherical triangle inequality keeps |cos w| <= 1 when phi is reachable
    for p12, p34 in ((0.3, 2.1), (1.0, 1.0), (2.5, 0.7)):
        phi = abs(p12 - p34) + 0.1
        assert abs(cos_twist(math.cos(phi), p12, p34)) <= 1 + 1e-12


@pytest.mark.parametrize("t12,t34", [(0.7, -0.4), (1.5, 2.0), (-1.0, 0.3)])
def test_coplanar_edges(t12, t34):
    tet = TetInstance([[-1, 0, 0], [1, 0, 0], [0.4, 1, 0], [0.2, -1, 0]])
    f = skew_frame(tet)
    T12, T34 = f.point12(t12), f.point34(t34)
    w = twist_angle_normal_oracle(f, T12, T34)
    assert min(w, math.pi - w) < 1e-7
    rep = twist_angle(f, t12, t34)
    assert min(rep.omega, math.pi - rep.omega) < 1e-6


def test_example_one_ft_values_agree(ex1):
    f = skew_frame(ex1)
    sol = solve_ft_system(f)
    rep = twist_angle(f, sol.t12, sol.t34)
    w = twist_angle_normal_oracle(f, f.point12(sol.t12), f.point34(sol.t34))
    assert abs(rep.omega - w) < 1e-10
    assert rep.special_case is TwistCase.general


def test_example_one_construction_twist(ex1):
    # frozen from this implementation (both paths), equal weights
    f, sol = solve_instance(ex1)
    assert math.degrees(twist_angle(f, sol.t12, sol.t34).omega) == pytest.approx(117.180634, abs=1e-6)


@settings(max_examples=25, deadline=None)
@given(seed=seeds, c=st.floats(0.05, 20))
def test_rigid_motion_and_scale_invariance(seed, c):
    rng = np.random.default_rng(seed)
    tet, f, sol = certified_solution(rng)
    w0 = twist_angle(f, sol.t12, sol.t34).omega
    Q, t = random_rotation(rng), rng.normal(size=3)
    moved = TetInstance(c * tet.vertices @ Q.T + t)
    g = skew_frame(moved)
    assert twist_angle(g, c * sol.t12, c * sol.t34).omega == pytest.approx(w0, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(seed=seeds)
def test_edge_exchange(seed):
    tet, f, sol = certified_solution(np.random.default_rng(seed))
    g = skew_frame(TetInstance(tet.vertices[[3, 2, 1, 0]]))
    a = twist_angle(f, sol.t12, sol.t34)
    b = twist_angle(g, sol.t34, sol.t12)
    assert b.omega == pytest.approx(a.omega, abs=1e-10)
    assert b.simpson_length == pytest.approx(a.simpson_length, rel=1e-12)


def test_signed_variant_magnitude(ex1):
    f, sol = solve_instance(ex1)
    rep = twist_angle(f, sol.t12, sol.t34, signed=True)
    assert abs(rep.signed_omega) == pytest.approx(rep.omega, abs=1e-10)
    mirrored = TetInstance(EX1 * np.array([1.0, 1.0, -1.0]))
    g, s2 = solve_instance(mirrored)
    rep2 = twist_angle(g, s2.t12, s2.t34, signed=True)
    assert rep2.signed_omega == pytest.approx(-rep.signed_omega, abs=1e-9)


class TestUndefined:
    def test_coincident_points(self):
        f = skew_frame(frame_tet(0.0, 1.0, 0.5, 1.0, 0.5, 1.0))
        with pytest.raises(UndefinedTwist):
            twist_angle(f, 0.0, 0.0)

    def test_plane_degenerate(self):
        with pytest.raises(UndefinedTwist):
            cos_twist(0.5, 0.0, 1.0)

    def test_edge_along_simpson_line(self, ex1):
        f = skew_frame(ex1)
        T12 = f.point12(0.0)
        with pytest.raises(UndefinedTwist):
            twist_angle_normal_oracle(f, T12, T12 + 3.0 * f.u12)
