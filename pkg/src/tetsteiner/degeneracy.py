"""Certificate that both nodes are interior (no absorption, no merging).

Two inequality families, each tested against a query point C:

* cone, at an edge endpoint V with node angle alpha_V: C must not lie in the
  half-cone behind V where the angle at V between the edge and C reaches
  alpha_V.  Otherwise the node is absorbed into V.
* torus: C must lie outside the spindle swept by the circle arc on which the
  edge subtends alpha_ij.  Otherwise the two nodes merge.

``binding="effective"`` (default) evaluates them at the points that decide the
question exactly.  The merge test uses the weighted four-terminal median.  The
absorption test at A1 uses the weighted median of (A1, A3, A4), which is the
optimal O34 once O12 is pinned to A1, and likewise for the other endpoints.
Because the objective is convex and its non-smooth terms separate per node
away from O12 = O34, these tests are necessary and sufficient.

``binding="terminals"`` evaluates the same inequalities with C ranging over
the opposite vertices.  That is cheaper but only a heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import WeightSystem, cone_quantities, cone_threshold, node_angles
from .geometry import TetInstance, _edge, angle_between
from .oracle import weighted_median

EDGES = {
    # origin vertex, far vertex, opposite vertices (indices into tet.vertices)
    "12": (0, 1, (2, 3)),
    "34": (3, 2, (0, 1)),
}
VERTEX_NAMES = ("A1", "A2", "A3", "A4")
COINCIDE_TOL = 1e-7


@dataclass(frozen=True)
class InequalityRecord:
    label: str
    query_point: str
    vertex: str
    lhs: float
    rhs: float
    satisfied: bool
    C: tuple[float, float, float] | None = None


@dataclass(frozen=True)
class DegeneracyReport:
    records: list[InequalityRecord] = field(default_factory=list)
    binding: str = "effective"

    @property
    def overall(self) -> bool:
        return all(r.satisfied for r in self.records)

    def failed(self) -> list[InequalityRecord]:
        return [r for r in self.records if not r.satisfied]


def edge_frame_coords(tet: TetInstance, edge: str, C) -> tuple[float, float, float]:
    """Coordinates of C in a frame with the edge on the x-axis, starting at the origin.

    Edge "12" runs A1 -> A2 (x1 = 0, x2 = a12); edge "34" runs A4 -> A3.
    """
    i0, i1, _ = EDGES[edge]
    origin = tet.vertices[i0]
    e1, _ = _edge(origin, tet.vertices[i1], "A1A2" if edge == "12" else "A4A3")
    helper = np.zeros(3)
    helper[int(np.argmin(np.abs(e1)))] = 1.0
    e2 = helper - np.dot(helper, e1) * e1
    e2 /= np.linalg.norm(e2)
    e3 = np.cross(e1, e2)
    d = np.asarray(C, dtype=float) - origin
    return float(np.dot(d, e1)), float(np.dot(d, e2)), float(np.dot(d, e3))


def _edge_data(tet: TetInstance, w: WeightSystem, edge: str):
    ang = node_angles(w)
    i0, i1, _ = EDGES[edge]
    if edge == "12":
        b0, b1, alpha0, alpha1, alpha01 = w.B1, w.B2, ang.alpha1, ang.alpha2, ang.alpha12
    else:
        b0, b1, alpha0, alpha1, alpha01 = w.B4, w.B3, ang.alpha4, ang.alpha3, ang.alpha34
    a = float(np.linalg.norm(tet.vertices[i1] - tet.vertices[i0]))
    return i0, i1, a, (alpha0, alpha1, alpha01), cone_quantities(a, b0, b1, w.B_ST)


def cone_record(
    tet: TetInstance, w: WeightSystem, edge: str, C, qname: str = "C", at: str | None = None
) -> InequalityRecord:
    """Absorption inequality for query point C.

    ``at`` picks the endpoint ("A1", "A2" for edge 12; "A4", "A3" for edge 34).
    By default the endpoint is chosen from the sign of x(C): behind the origin
    vertex tests that vertex, beyond the far vertex tests the far one, and a C
    that projects onto the edge is tested at both.
    """
    i0, i1, a, (alpha0, alpha1, _), _ = _edge_data(tet, w, edge)
    P0, P1 = tet.vertices[i0], tet.vertices[i1]
    C = np.asarray(C, dtype=float)
    x, y, z = edge_frame_coords(tet, edge, C)
    rho = math.hypot(y, z)
    v0, v1 = VERTEX_NAMES[i0], VERTEX_NAMES[i1]
    Ct = tuple(float(c) for c in C)
    if at is None:
        at = v0 if x < 0.0 else v1 if x > a else v0 + v1
    if at == v0 and x < 0.0:
        lhs, rhs = rho / (0.0 - x), cone_threshold(alpha0)
        return InequalityRecord(f"cone_{edge}", qname, v0, lhs, rhs, lhs > rhs, Ct)
    if at == v1 and x > a:
        lhs, rhs = rho / (x - a), cone_threshold(alpha1)
        return InequalityRecord(f"cone_{edge}", qname, v1, lhs, rhs, lhs > rhs, Ct)
    # C is level with or ahead of the tested endpoint: compare angles directly
    margins = []
    if v0 in at:
        margins.append(alpha0 - angle_between(P1 - P0, C - P0))
    if v1 in at:
        margins.append(alpha1 - angle_between(P0 - P1, C - P1))
    margin = min(margins)
    return InequalityRecord(f"cone_{edge}", qname, at, margin, 0.0, margin > 0.0, Ct)


def torus_record(tet: TetInstance, w: WeightSystem, edge: str, C, qname: str = "C") -> InequalityRecord:
    """Merging inequality: C outside the spindle on which the edge subtends alpha_ij."""
    i0, i1, a, _, cq = _edge_data(tet, w, edge)
    x, y, z = edge_frame_coords(tet, edge, C)
    rho = math.hypot(y, z)
    lhs = (rho + cq.center_offset) ** 2 + (0.5 * a - x) ** 2
    rhs = cq.R**2
    return InequalityRecord(
        f"torus_{edge}", qname, VERTEX_NAMES[i0] + VERTEX_NAMES[i1], lhs, rhs, lhs > rhs,
        tuple(float(c) for c in C),
    )


def _terminal_records(tet: TetInstance, w: WeightSystem) -> list[InequalityRecord]:
    records = []
    for edge, (_, _, opposite) in EDGES.items():
        for j in opposite:
            C = tet.vertices[j]
            records.append(cone_record(tet, w, edge, C, VERTEX_NAMES[j]))
            records.append(torus_record(tet, w, edge, C, VERTEX_NAMES[j]))
    return records


def _effective_records(tet: TetInstance, w: WeightSystem, tol: float) -> list[InequalityRecord]:
    V = tet.vertices
    B = (w.B1, w.B2, w.B3, w.B4)
    star = weighted_median(V, np.array(B), tol=tol)
    records = []
    # pinning O12 to endpoint i makes O34 the median of (A_i, A3, A4); symmetric for O34
    for edge, pinned, others in (("12", (0, 1), (2, 3)), ("34", (3, 2), (0, 1))):
        for i in pinned:
            Q = weighted_median(
                [V[i], V[others[0]], V[others[1]]], [w.B_ST, B[others[0]], B[others[1]]], tol=tol
            )
            qname = f"O{'34' if edge == '12' else '12'}|{VERTEX_NAMES[i]}"
            if np.linalg.norm(Q - V[i]) < COINCIDE_TOL * tet.scale:
                # the other node would sit on A_i too: that is a merge, decided by the torus record
                records.append(
                    InequalityRecord(
                        f"cone_{edge}", qname, VERTEX_NAMES[i], math.inf, 0.0, True,
                        tuple(float(c) for c in Q),
                    )
                )
                continue
            records.append(cone_record(tet, w, edge, Q, qname, at=VERTEX_NAMES[i]))
        records.append(torus_record(tet, w, edge, star, "star"))
    return records


def check_nondegenerate(
    tet: TetInstance,
    w: WeightSystem | None = None,
    binding: str = "effective",
    tol: float = 1e-12,
) -> DegeneracyReport:
    if w is None:
        w = WeightSystem.from_instance(tet)
    node_angles(w)  # raises InfeasibleWeights before any geometry
    if binding == "effective":
        records = _effective_records(tet, w, tol)
    elif binding == "terminals":
        records = _terminal_records(tet, w)
    else:
        raise ValueError(f"unknown binding {binding!r}")
    return DegeneracyReport(records, binding)
