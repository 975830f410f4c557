import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tetsteiner.equilibrium import (
    WeightSystem,
    cone_quantities,
    cone_threshold,
    melzak_quantities,
    node_angles,
)
from tetsteiner.errors import InfeasibleWeights

pos = st.floats(0.1, 10.0)
frac = st.floats(0.02, 0.98)


@st.composite
def feasible_weights(draw):
    """(B1, B2, B3, B4, B_ST) with both strict weight-triangle inequalities."""
    s = draw(pos)
    out = []
    for _ in range(2):
        bi = draw(pos)
        lo, hi = abs(bi - s), bi + s
        out += [bi, lo + draw(frac) * (hi - lo)]
    return (*out, s)


def test_equal_weights_all_120():
    ang = node_angles(WeightSystem(1, 1, 1, 1, 1))
    for v in ang.__dict__.values():
        assert math.degrees(v) == pytest.approx(120.0, abs=1e-12)


def test_3_4_5_triangle():
    ang = node_angles(WeightSystem(3, 4, 3, 4, 5))
    assert math.degrees(ang.alpha12) == pytest.approx(90.0, abs=1e-12)
    assert math.degrees(ang.alpha1) == pytest.approx(143.130102, abs=1e-6)
    assert math.degrees(ang.alpha2) == pytest.approx(126.869898, abs=1e-6)
    assert ang.alpha1 + ang.alpha2 + ang.alpha12 == pytest.approx(2 * math.pi, abs=1e-12)


@pytest.mark.parametrize("bst", [2.0, 2.5, 0.0 + 1e-300])
def test_infeasible(bst):
    with pytest.raises(InfeasibleWeights):
        node_angles(WeightSystem(1, 1, 1, 1, bst))


def test_complements():
    ang = node_angles(WeightSystem(1, 1, 1, 1, 1))
    for v in ang.complements().values():
        assert math.degrees(v) == pytest.approx(60.0, abs=1e-12)


class TestMelzak:
    def test_equal_weights(self):
        tri = melzak_quantities(2.0, 0.5, 1, 1, 1)
        assert tri.r == pytest.approx(math.sqrt(3), rel=1e-14)
        assert tri.h_prime == pytest.approx(1.5, rel=1e-14)

    def test_3_4_5(self):
        assert melzak_quantities(1.0, 0.0, 3, 4, 5).r == pytest.approx(0.48, rel=1e-14)

    def test_infeasible(self):
        with pytest.raises(InfeasibleWeights):
            melzak_quantities(1.0, 0.0, 1, 1, 2)


class TestCone:
    def test_equal_weights(self):
        cq = cone_quantities(1.0, 1, 1, 1)
        assert cq.R == pytest.approx(1 / math.sqrt(3), rel=1e-14)
        r = math.sqrt(3) / 2
        assert cq.R * math.sin(cq.beta) == pytest.approx(r / 3, rel=1e-12)
        assert cq.center_offset == pytest.approx(r / 3, rel=1e-12)

    def test_3_4_5(self):
        assert cone_quantities(1.0, 3, 4, 5).R == pytest.approx(0.5, rel=1e-14)

    def test_degenerate(self):
        with pytest.raises(InfeasibleWeights):
            cone_quantities(1.0, 1, 1, 2)

    def test_threshold(self):
        assert cone_threshold(2 * math.pi / 3) == pytest.approx(math.sqrt(3), rel=1e-14)
        assert cone_threshold(math.pi / 3) == math.inf


@settings(max_examples=200, deadline=None)
@given(ws=feasible_weights(), c=st.floats(0.01, 100))
def test_angle_sums_and_scale_invariance(ws, c):
    w = WeightSystem(*ws)
    ang = node_angles(w)
    assert ang.alpha1 + ang.alpha2 + ang.alpha12 == pytest.approx(2 * math.pi, abs=1e-10)
    assert ang.alpha3 + ang.alpha4 + ang.alpha34 == pytest.approx(2 * math.pi, abs=1e-10)
    scaled = node_angles(w.scaled(c))
    for k, v in ang.__dict__.items():
        assert getattr(scaled, k) == pytest.approx(v, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(ws=feasible_weights())
def test_planar_force_balance(ws):
    """Unit vectors laid out at the computed angles balance: B1 u1 + B2 u2 = B_ST l."""
    b1, b2, _, _, s = ws
    ang = node_angles(WeightSystem(*ws))
    # l along +x, u2 at +alpha1 from l, u1 at -alpha2 (alpha_i is opposite B_i)
    l = np.array([1.0, 0.0])
    u2 = np.array([math.cos(ang.alpha1), math.sin(ang.alpha1)])
    u1 = np.array([math.cos(ang.alpha2), -math.sin(ang.alpha2)])
    assert np.linalg.norm(b1 * u1 + b2 * u2 + s * l) < 1e-9 * (b1 + b2 + s)


@settings(max_examples=100, deadline=None)
@given(a=st.floats(0.1, 10), c=st.floats(0.1, 10), ws=feasible_weights())
def test_linear_in_edge_length(a, c, ws):
    b1, b2, _, _, s = ws
    t1, t2 = melzak_quantities(a, 0.0, b1, b2, s), melzak_quantities(c * a, 0.0, b1, b2, s)
    q1, q2 = cone_quantities(a, b1, b2, s), cone_quantities(c * a, b1, b2, s)
    assert t2.r == pytest.approx(c * t1.r, rel=1e-10)
    assert t2.h_prime == pytest.approx(c * t1.h_prime, rel=1e-9, abs=1e-12)
    assert q2.R == pytest.approx(c * q1.R, rel=1e-10)
