import math

import numpy as np
import pytest
from hypothesis import strategies as st

from tetsteiner.geometry import TetInstance

EX1 = np.array([[0, 0, 0], [2, 0, 0], [-2, 0, 3], [-1, -1, 2]], dtype=float)
REGULAR = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)

# lines printed by the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def ex1():
    return TetInstance(EX1)


@pytest.fixture
def regular():
    return TetInstance(REGULAR)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def frame_tet(H, phi, k1, a12, k2, a34, weights=None) -> TetInstance:
    """Tetrahedron built directly in the common-perpendicular frame.

    Feet at the origin and (0, 0, H); line 12 along x, line 34 at angle phi
    in a parallel plane.  A1 sits at t = k1, A4 at t = k2.
    """
    u = np.array([1.0, 0.0, 0.0])
    v = np.array([math.cos(phi), math.sin(phi), 0.0])
    f12, f34 = np.zeros(3), np.array([0.0, 0.0, H])
    V = [f12 + k1 * u, f12 + (k1 + a12) * u, f34 + (k2 + a34) * v, f34 + k2 * v]
    return TetInstance(np.array(V), **(weights or {}))


def symmetric_tet(H=1.5, phi=2.0, a12=2.0, a34=1.4, weights=None) -> TetInstance:
    """Feet at both edge midpoints.

    The half-turn about the common perpendicular swaps A1 with A2 and A3 with
    A4, so with B1 = B2 and B3 = B4 the Simpson line is the perpendicular itself.
    """
    return frame_tet(H, phi, -a12 / 2, a12, -a34 / 2, a34, weights)


def random_tet(rng: np.random.Generator, weight_range=(0.5, 2.0)) -> TetInstance:
    V = rng.normal(size=(4, 3))
    W = rng.uniform(*weight_range, size=6)
    return TetInstance(V, *W)


coords = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
vertex_arrays = st.lists(
    st.lists(coords, min_size=3, max_size=3), min_size=4, max_size=4
).map(lambda v: np.array(v, dtype=float))
weights = st.floats(0.5, 2.0)
seeds = st.integers(0, 2**32 - 1)


def well_shaped(V: np.ndarray) -> bool:
    """Non-flat, non-parallel paired edges, no near-coincident vertices."""
    e1, e2 = V[1] - V[0], V[2] - V[3]
    n1, n2 = np.linalg.norm(e1), np.linalg.norm(e2)
    if min(n1, n2) < 0.1:
        return False
    if np.linalg.norm(np.cross(e1, e2)) / (n1 * n2) < 1e-3:
        return False
    vol = abs(np.dot(V[3] - V[0], np.cross(e1, e2)))
    return vol > 1e-2 * n1 * n2
