"""Weighted Simpson line by fixed-point iteration, node recovery and tree assembly.

The line through the two nodes meets line A1A2 at T12 (coordinate ``t12``)
and line A4A3 at T34 (``t34``).  It also passes through the apex of each
auxiliary triangle, which gives one equation per edge:

    (t34 - t12 cos phi) / S(t12) = (h34' - t34) / r34
    (t12 - t34 cos phi) / S(t34) = (h12' - t12) / r12

with S(t) = sqrt(H^2 + t^2 sin^2 phi).  Each is linear in the unknown on its
own side, which gives the maps ``f34`` and ``f12`` iterated below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .equilibrium import MelzakTriangle, NodeAngles, WeightSystem, melzak_quantities, node_angles
from .errors import NodeOffSegment, NoConvergence
from .geometry import SkewFrame, TetInstance, angle_between, skew_frame
from .oracle import weighted_median

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10_000


@dataclass
class SimpsonSolution:
    t12: float
    t34: float
    T12: np.ndarray
    T34: np.ndarray
    iterations: int
    residuals: tuple[float, float]
    trace: list[tuple[float, float]] = field(default_factory=list)
    O12: np.ndarray | None = None
    O34: np.ndarray | None = None
    cost: float | None = None
    angle_errors: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class TreeEdge:
    name: str
    p: np.ndarray
    q: np.ndarray
    weight: float

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.q - self.p))


@dataclass(frozen=True)
class SteinerTree:
    terminals: np.ndarray
    O12: np.ndarray
    O34: np.ndarray
    edges: tuple[TreeEdge, ...]

    @property
    def cost(self) -> float:
        return sum(e.weight * e.length for e in self.edges)

    def degree(self, node: str) -> int:
        return sum(node in e.name.split("-") for e in self.edges)


def auxiliary_triangles(frame: SkewFrame, w: WeightSystem) -> tuple[MelzakTriangle, MelzakTriangle]:
    """(triangle on A1A2, triangle on A4A3)."""
    tri12 = melzak_quantities(frame.a12, frame.k1, w.B2, w.B1, w.B_ST)
    tri34 = melzak_quantities(frame.a34, frame.k2, w.B3, w.B4, w.B_ST)
    return tri12, tri34


def fixed_point_maps(
    frame: SkewFrame, w: WeightSystem
) -> tuple[Callable[[float], float], Callable[[float], float]]:
    """Return ``(f34, f12)`` with t34 = f34(t12) and t12 = f12(t34)."""
    tri12, tri34 = auxiliary_triangles(frame, w)
    c = frame.cos_phi

    def f34(t12: float) -> float:
        s = frame.dist_to_line34(t12)
        return (tri34.h_prime * s + tri34.r * t12 * c) / (tri34.r + s)

    def f12(t34: float) -> float:
        s = frame.dist_to_line12(t34)
        return (tri12.h_prime * s + tri12.r * t34 * c) / (tri12.r + s)

    return f34, f12


def solver_scale(frame: SkewFrame) -> float:
    return max(frame.a12, frame.a34, frame.H, abs(frame.k1), abs(frame.k2))


def line_equation_residuals(frame: SkewFrame, w: WeightSystem, t12: float, t34: float):
    """Residuals of the two line equations, as fixed-point defects over the scale.

    ``t34 - f34(t12)`` is the first equation multiplied through by
    ``r34 S / (r34 + S)``, so it vanishes exactly when the equation does.
    """
    f34, f12 = fixed_point_maps(frame, w)
    scale = solver_scale(frame)
    return (abs(t34 - f34(t12)) / scale, abs(t12 - f12(t34)) / scale)


def solve_simpson(
    frame: SkewFrame,
    w: WeightSystem,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    start: str = "midpoint",
    keep_trace: bool = False,
) -> SimpsonSolution:
    """Alternate t34 = f34(t12), t12 = f12(t34) from t12 = m12 (or k1 with start="foot")."""
    f34, f12 = fixed_point_maps(frame, w)
    scale = solver_scale(frame)
    if start == "midpoint":
        t12 = frame.m12
    elif start == "foot":
        t12 = frame.k1
    else:
        raise ValueError(f"unknown start {start!r}")
    trace: list[tuple[float, float]] = []
    t34_prev = math.inf
    for n in range(1, max_iter + 1):
        t34 = f34(t12)
        t12_next = f12(t34)
        trace.append((t12_next, t34))
        delta = max(abs(t12_next - t12), abs(t34 - t34_prev))
        t12, t34_prev = t12_next, t34
        if delta < tol * scale:
            return SimpsonSolution(
                t12=t12, t34=t34, T12=frame.point12(t12), T34=frame.point34(t34),
                iterations=n, residuals=line_equation_residuals(frame, w, t12, t34),
                trace=trace if keep_trace else [],
            )
    raise NoConvergence(
        f"Simpson iteration did not converge in {max_iter} steps",
        trace=trace, tol=tol, last_delta=delta,
    )


def tree_cost(tet: TetInstance, w: WeightSystem, O12, O34) -> float:
    A1, A2, A3, A4 = tet.vertices
    n = np.linalg.norm
    return float(
        w.B1 * n(A1 - O12) + w.B2 * n(A2 - O12) + w.B3 * n(A3 - O34) + w.B4 * n(A4 - O34)
        + w.B_ST * n(O12 - O34)
    )


def _line_param(P, T12, T34):
    d = T34 - T12
    L2 = float(np.dot(d, d))
    s = float(np.dot(P - T12, d)) / L2
    off = float(np.linalg.norm(P - (T12 + s * d)))
    return s, off


def recover_nodes(
    tet: TetInstance,
    frame: SkewFrame,
    w: WeightSystem,
    sol: SimpsonSolution,
    tol: float = DEFAULT_TOL,
    seg_tol: float = 1e-9,
) -> SimpsonSolution:
    """Fill in O12, O34 as weighted Fermat-Torricelli points of (A1, A2, T34) and (A3, A4, T12)."""
    A1, A2, A3, A4 = tet.vertices
    T12, T34 = sol.T12, sol.T34
    scale = solver_scale(frame)
    if np.linalg.norm(T34 - T12) < seg_tol * scale:
        raise NodeOffSegment("Simpson segment has zero length")
    O12 = weighted_median([A1, A2, T34], [w.B1, w.B2, w.B_ST], tol=tol)
    O34 = weighted_median([A3, A4, T12], [w.B3, w.B4, w.B_ST], tol=tol)

    for name, node, terms in (("O12", O12, (A1, A2, T34)), ("O34", O34, (A3, A4, T12))):
        for P in terms:
            if np.linalg.norm(node - P) < seg_tol * scale:
                raise NodeOffSegment(f"{name} is absorbed into a terminal", node=name)
    s12, off12 = _line_param(O12, T12, T34)
    s34, off34 = _line_param(O34, T12, T34)
    eps = seg_tol * scale / np.linalg.norm(T34 - T12)
    if max(off12, off34) > seg_tol * scale or not (-eps <= s12 < s34 <= 1 + eps):
        raise NodeOffSegment(
            "recovered nodes are not ordered on [T12, T34]",
            s12=s12, s34=s34, offset12=off12, offset34=off34,
        )

    ang = node_angles(w)
    sol.O12, sol.O34 = O12, O34
    sol.cost = tree_cost(tet, w, O12, O34)
    sol.angle_errors = node_angle_errors(tet, ang, O12, O34)
    return sol


def node_angle_errors(tet: TetInstance, ang: NodeAngles, O12, O34) -> dict[str, float]:
    A1, A2, A3, A4 = tet.vertices
    l = O34 - O12
    return {
        "alpha12": abs(angle_between(A1 - O12, A2 - O12) - ang.alpha12),
        "alpha1": abs(angle_between(A2 - O12, l) - ang.alpha1),
        "alpha2": abs(angle_between(A1 - O12, l) - ang.alpha2),
        "alpha34": abs(angle_between(A3 - O34, A4 - O34) - ang.alpha34),
        "alpha3": abs(angle_between(A4 - O34, -l) - ang.alpha3),
        "alpha4": abs(angle_between(A3 - O34, -l) - ang.alpha4),
    }


def stationarity_residuals(tet: TetInstance, w: WeightSystem, O12, O34) -> dict[str, float]:
    """Force balance at each node and the summed four-terminal balance.

    With a_i the vector from A_i to its node and l = O12 -> O34:
    node12 = |B1 a1^ + B2 a2^ - B_ST l^|, node34 = |B3 a3^ + B4 a4^ + B_ST l^|,
    summed = |sum_i B_i a_i^|.
    """
    A1, A2, A3, A4 = tet.vertices

    def u(v):
        return v / np.linalg.norm(v)

    lh = u(O34 - O12)
    a = [u(O12 - A1), u(O12 - A2), u(O34 - A3), u(O34 - A4)]
    B = (w.B1, w.B2, w.B3, w.B4)
    n12 = B[0] * a[0] + B[1] * a[1] - w.B_ST * lh
    n34 = B[2] * a[2] + B[3] * a[3] + w.B_ST * lh
    total = sum(b * v for b, v in zip(B, a))
    return {
        "node12": float(np.linalg.norm(n12)),
        "node34": float(np.linalg.norm(n34)),
        "summed": float(np.linalg.norm(total)),
    }


def build_tree(tet: TetInstance, w: WeightSystem, O12, O34) -> SteinerTree:
    A1, A2, A3, A4 = tet.vertices
    edges = (
        TreeEdge("A1-O12", A1, O12, w.B1),
        TreeEdge("A2-O12", A2, O12, w.B2),
        TreeEdge("A3-O34", A3, O34, w.B3),
        TreeEdge("A4-O34", A4, O34, w.B4),
        TreeEdge("O12-O34", O12, O34, w.B_ST),
    )
    return SteinerTree(tet.vertices, np.asarray(O12), np.asarray(O34), edges)


def solve_instance(
    tet: TetInstance,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    start: str = "midpoint",
    keep_trace: bool = False,
) -> tuple[SkewFrame, SimpsonSolution]:
    """Frame, Simpson line and nodes for a (12|34) instance."""
    w = WeightSystem.from_instance(tet)
    frame = skew_frame(tet)
    sol = solve_simpson(frame, w, tol=tol, max_iter=max_iter, start=start, keep_trace=keep_trace)
    return frame, recover_nodes(tet, frame, w, sol)
