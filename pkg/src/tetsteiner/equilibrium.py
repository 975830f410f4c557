"""Scalar geometry that depends only on the weights.

Angle naming at the node O12: ``alpha12`` is the angle A1-O12-A2, ``alpha1``
the angle between O12->A2 and O12->O34, ``alpha2`` the angle between O12->A1
and O12->O34.  So ``alpha_i`` is the angle *opposite* the force of weight
``B_i`` in the force triangle, which is what makes ``B_i / sin(alpha_i)``
constant.  O34 follows the same scheme with (3, 4, 34).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InfeasibleWeights
from .geometry import TetInstance


@dataclass(frozen=True)
class WeightSystem:
    B1: float
    B2: float
    B3: float
    B4: float
    B_ST: float

    @classmethod
    def from_instance(cls, tet: TetInstance) -> WeightSystem:
        return cls(tet.B1, tet.B2, tet.B3, tet.B4, tet.b_st)

    def feasible(self) -> bool:
        return _strict_triangle(self.B1, self.B2, self.B_ST) and _strict_triangle(
            self.B3, self.B4, self.B_ST
        )

    def scaled(self, c: float) -> WeightSystem:
        return WeightSystem(c * self.B1, c * self.B2, c * self.B3, c * self.B4, c * self.B_ST)


def _strict_triangle(bi: float, bj: float, s: float) -> bool:
    return abs(bi - bj) < s < bi + bj


def _acos_strict(x: float, what: str) -> float:
    if not -1.0 < x < 1.0:
        raise InfeasibleWeights(
            f"{what}: cosine {x!r} outside the open interval (-1, 1); the node degenerates",
            cosine=x,
        )
    return math.acos(x)


def _node_triplet(bi: float, bj: float, s: float, label: str) -> tuple[float, float, float]:
    """(angle between the two terminals, alpha_i, alpha_j) for one node."""
    if not _strict_triangle(bi, bj, s):
        raise InfeasibleWeights(
            f"weights violate |Bi - Bj| < B_ST < Bi + Bj at node {label}",
            Bi=bi, Bj=bj, B_ST=s,
        )
    a_ij = _acos_strict((s * s - bi * bi - bj * bj) / (2 * bi * bj), f"alpha{label}")
    a_i = _acos_strict((bi * bi - bj * bj - s * s) / (2 * bj * s), f"alpha at {label} (i)")
    a_j = _acos_strict((bj * bj - bi * bi - s * s) / (2 * bi * s), f"alpha at {label} (j)")
    return a_ij, a_i, a_j


@dataclass(frozen=True)
class NodeAngles:
    alpha12: float
    alpha1: float
    alpha2: float
    alpha34: float
    alpha3: float
    alpha4: float

    def complements(self) -> dict[str, float]:
        """pi - alpha for each angle: the angles of the two auxiliary triangles."""
        return {k: math.pi - v for k, v in self.__dict__.items()}


def node_angles(w: WeightSystem) -> NodeAngles:
    a12, a1, a2 = _node_triplet(w.B1, w.B2, w.B_ST, "12")
    a34, a3, a4 = _node_triplet(w.B3, w.B4, w.B_ST, "34")
    return NodeAngles(a12, a1, a2, a34, a3, a4)


@dataclass(frozen=True)
class MelzakTriangle:
    """Auxiliary triangle erected on an edge, on the side away from the tree.

    ``r`` is its altitude and ``h_prime`` the t-coordinate of the altitude's foot.
    """

    r: float
    h_prime: float
    third_vertex_angles: tuple[float, float, float]


def melzak_quantities(a: float, k: float, bi: float, bj: float, b_st: float) -> MelzakTriangle:
    """Auxiliary triangle on an edge of length ``a``.

    Vertex ``j`` sits at t-coordinate ``k`` and vertex ``i`` at ``k + a``.  For
    edge A4A3 call with ``(a34, k2, B3, B4, B_ST)``; for A1A2 with
    ``(a12, k1, B2, B1, B_ST)``.
    """
    if not a > 0.0:
        raise ValueError("edge length must be positive")
    a_ij, a_i, a_j = _node_triplet(bi, bj, b_st, "ij")
    r = (bj / b_st) * a * math.sin(a_i)
    # cot(pi - alpha_j) = -cot(alpha_j)
    h_prime = k - r * math.cos(a_j) / math.sin(a_j)
    return MelzakTriangle(r, h_prime, (math.pi - a_ij, math.pi - a_i, math.pi - a_j))


@dataclass(frozen=True)
class ConeQuantities:
    """Circle through both edge endpoints on which the edge subtends ``alpha_ij``.

    ``R`` is its radius, ``beta = arccos(a / 2R)``, and ``cone_half_angle_cos``
    is cos(alpha_ij).
    """

    R: float
    beta: float
    cone_half_angle_cos: float

    @property
    def center_offset(self) -> float:
        """Signed distance of the circle centre from the edge line, on the far side.

        Equals ``R sin(beta)`` when alpha_ij is obtuse and flips sign when it is acute.
        """
        return -self.R * self.cone_half_angle_cos


def cone_quantities(a: float, bi: float, bj: float, b_st: float) -> ConeQuantities:
    s = b_st
    heron = (bi + bj + s) * (bi + bj - s) * (bj + s - bi) * (bi + s - bj)
    factors = (bi + bj + s, bi + bj - s, bj + s - bi, bi + s - bj)
    if min(factors) <= 0.0:
        raise InfeasibleWeights("weight triangle is degenerate", Bi=bi, Bj=bj, B_ST=s)
    R = a * bi * bj / math.sqrt(heron)
    beta = math.acos(min(1.0, a / (2.0 * R)))
    return ConeQuantities(R, beta, (s * s - bi * bi - bj * bj) / (2 * bi * bj))


def cone_threshold(alpha: float) -> float:
    """tan(pi - alpha): the bound on rho / |dx| behind a vertex with node angle ``alpha``.

    With an acute ``alpha`` every point behind the vertex is inside the
    absorbing cone, so the bound is infinite.
    """
    if alpha <= 0.5 * math.pi:
        return math.inf
    return math.tan(math.pi - alpha)
