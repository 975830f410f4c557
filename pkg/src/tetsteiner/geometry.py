"""Vector primitives, the tetrahedron instance and the common-perpendicular frame.

Points are plain ``numpy`` arrays of shape ``(3,)``.  Everything downstream
works on the (12|34) pairing: nodes O12 (joined to A1, A2) and O34 (joined to
A3, A4).  Other pairings are handled by relabelling the instance first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegenerateEdge, InputError, ParallelEdges

PAIRINGS = {
    "12-34": (0, 1, 2, 3),
    "13-24": (0, 2, 1, 3),
    "14-23": (0, 3, 1, 2),
}

PARALLEL_TOL = 1e-12
INTERSECT_TOL = 1e-12


def as_point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise InputError(f"expected a 3-vector, got shape {np.shape(p)}")
    if not np.all(np.isfinite(arr)):
        raise InputError("point coordinates must be finite")
    return arr


def unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n == 0.0:
        raise DegenerateEdge("cannot normalise a zero vector")
    return v / n


def angle_between(a: np.ndarray, b: np.ndarray) -> float:
    """Unsigned angle in [0, pi], computed with atan2 for accuracy near 0 and pi."""
    return math.atan2(np.linalg.norm(np.cross(a, b)), float(np.dot(a, b)))


@dataclass(frozen=True)
class TetInstance:
    """Four vertices and six positive weights.

    ``B12`` and ``B34`` only ever enter through ``b_st = (B12 + B34) / 2``.
    """

    vertices: np.ndarray
    B1: float = 1.0
    B2: float = 1.0
    B3: float = 1.0
    B4: float = 1.0
    B12: float = 1.0
    B34: float = 1.0
    pairing: str = "12-34"

    def __post_init__(self):
        verts = np.array(self.vertices, dtype=float)
        if verts.shape != (4, 3):
            raise InputError(f"need exactly 4 vertices in 3D, got shape {verts.shape}")
        if not np.all(np.isfinite(verts)):
            raise InputError("vertex coordinates must be finite")
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        for name in ("B1", "B2", "B3", "B4", "B12", "B34"):
            val = float(getattr(self, name))
            if not (math.isfinite(val) and val > 0.0):
                raise InputError(f"weight {name} must be a positive finite number", weight=name)
            object.__setattr__(self, name, val)
        if self.pairing not in PAIRINGS:
            raise InputError(f"unknown pairing {self.pairing!r}", allowed=sorted(PAIRINGS))

    @property
    def b_st(self) -> float:
        return 0.5 * (self.B12 + self.B34)

    @property
    def terminal_weights(self) -> np.ndarray:
        return np.array([self.B1, self.B2, self.B3, self.B4])

    @property
    def A1(self) -> np.ndarray:
        return self.vertices[0]

    @property
    def A2(self) -> np.ndarray:
        return self.vertices[1]

    @property
    def A3(self) -> np.ndarray:
        return self.vertices[2]

    @property
    def A4(self) -> np.ndarray:
        return self.vertices[3]

    @property
    def scale(self) -> float:
        """Largest pairwise vertex distance; the length unit for tolerances."""
        v = self.vertices
        return float(max(np.linalg.norm(v[i] - v[j]) for i in range(4) for j in range(i + 1, 4)))

    def canonical(self) -> TetInstance:
        """Relabel so the requested pairing becomes (12|34)."""
        perm = PAIRINGS[self.pairing]
        w = self.terminal_weights
        return TetInstance(
            self.vertices[list(perm)],
            B1=w[perm[0]], B2=w[perm[1]], B3=w[perm[2]], B4=w[perm[3]],
            B12=self.B12, B34=self.B34, pairing="12-34",
        )

    def with_pairing(self, pairing: str) -> TetInstance:
        return TetInstance(
            self.vertices, self.B1, self.B2, self.B3, self.B4, self.B12, self.B34, pairing
        )

    def standing_assumption(self) -> bool:
        """A1A4 + A2A3 > A1A2 + A3A4; advisory only, never enforced."""
        d = lambda i, j: np.linalg.norm(self.vertices[i] - self.vertices[j])  # noqa: E731
        return bool(d(0, 3) + d(1, 2) > d(0, 1) + d(2, 3))


class FrameConfig(str, Enum):
    both_feet_outside_behind = "both_feet_outside_behind"
    foot_inside_12 = "foot_inside_12"
    foot_inside_34 = "foot_inside_34"
    both_inside = "both_inside"
    mixed = "mixed"


@dataclass(frozen=True)
class SkewFrame:
    """Common-perpendicular decomposition of edges A1A2 and A4A3.

    The t-axis on line A1A2 starts at the foot A1'' and runs along A1->A2; the
    one on line A4A3 starts at A4'' and runs along A4->A3.  ``k1``/``k2`` are
    the signed coordinates of A1 and A4 on those axes, so A2 sits at
    ``k1 + a12`` and A3 at ``k2 + a34`` whatever the configuration.
    """

    H: float
    phi: float
    foot12: np.ndarray
    foot34: np.ndarray
    k1: float
    k2: float
    a12: float
    a34: float
    u12: np.ndarray
    u34: np.ndarray
    config: FrameConfig
    intersecting: bool = False
    H_feet: float = field(default=float("nan"), compare=False)

    @property
    def m12(self) -> float:
        return self.k1 + 0.5 * self.a12

    @property
    def m34(self) -> float:
        return self.k2 + 0.5 * self.a34

    @property
    def cos_phi(self) -> float:
        return float(np.dot(self.u12, self.u34))

    @property
    def sin_phi(self) -> float:
        return float(np.linalg.norm(np.cross(self.u12, self.u34)))

    @property
    def scale(self) -> float:
        return max(self.a12, self.a34, self.H)

    def point12(self, t: float) -> np.ndarray:
        return self.foot12 + t * self.u12

    def point34(self, t: float) -> np.ndarray:
        return self.foot34 + t * self.u34

    def dist_to_line34(self, t12: float) -> float:
        """Distance from the point at ``t12`` on line A1A2 to line A4A3."""
        return math.sqrt(self.H**2 + (t12 * self.sin_phi) ** 2)

    def dist_to_line12(self, t34: float) -> float:
        return math.sqrt(self.H**2 + (t34 * self.sin_phi) ** 2)

    def simpson_length(self, t12: float, t34: float) -> float:
        return math.sqrt(
            max(self.H**2 + t12**2 + t34**2 - 2.0 * t12 * t34 * self.cos_phi, 0.0)
        )

    def swapped(self) -> SkewFrame:
        """The same frame with the roles of the two edges exchanged."""
        return SkewFrame(
            H=self.H, phi=self.phi, foot12=self.foot34, foot34=self.foot12,
            k1=self.k2, k2=self.k1, a12=self.a34, a34=self.a12,
            u12=self.u34, u34=self.u12, config=_classify(self.k2, self.a34, self.k1, self.a12),
            intersecting=self.intersecting, H_feet=self.H_feet,
        )


def _edge(p: np.ndarray, q: np.ndarray, name: str) -> tuple[np.ndarray, float]:
    d = q - p
    length = float(np.linalg.norm(d))
    if length == 0.0:
        raise DegenerateEdge(f"edge {name} has zero length", edge=name)
    return d / length, length


def interedge_angle(tet: TetInstance) -> float:
    """Angle between A1->A2 and A4->A3, in radians."""
    u, _ = _edge(tet.A1, tet.A2, "A1A2")
    v, _ = _edge(tet.A4, tet.A3, "A4A3")
    return angle_between(u, v)


def _classify(k1: float, a12: float, k2: float, a34: float) -> FrameConfig:
    def where(k, a):
        if k > 0.0:
            return "behind"
        if k + a >= 0.0:
            return "inside"
        return "beyond"

    w12, w34 = where(k1, a12), where(k2, a34)
    if w12 == "behind" and w34 == "behind":
        return FrameConfig.both_feet_outside_behind
    if w12 == "inside" and w34 == "behind":
        return FrameConfig.foot_inside_12
    if w12 == "behind" and w34 == "inside":
        return FrameConfig.foot_inside_34
    if w12 == "inside" and w34 == "inside":
        return FrameConfig.both_inside
    return FrameConfig.mixed


def skew_frame(tet: TetInstance) -> SkewFrame:
    A1, A2, A3, A4 = tet.vertices
    u, a12 = _edge(A1, A2, "A1A2")
    v, a34 = _edge(A4, A3, "A4A3")
    n = np.cross(u, v)
    sin_phi = float(np.linalg.norm(n))
    if sin_phi < PARALLEL_TOL:
        raise ParallelEdges("edges A1A2 and A4A3 are parallel", sin_phi=sin_phi)
    c = float(np.dot(u, v))
    phi = math.atan2(sin_phi, c)

    # triple product over |a12 x a34| is the determinant formula divided by a12 a34 sin(phi)
    cross_full = np.cross(A2 - A1, A3 - A4)
    H = abs(float(np.dot(A4 - A1, cross_full))) / float(np.linalg.norm(cross_full))

    # feet: A1 + s u and A4 + t v with the joining segment orthogonal to u and v
    w0 = A1 - A4
    d1, d2 = float(np.dot(w0, u)), float(np.dot(w0, v))
    den = c * c - 1.0
    s = (d1 - c * d2) / den
    t = (c * d1 - d2) / den
    foot12 = A1 + s * u
    foot34 = A4 + t * v
    k1, k2 = -s, -t

    scale = max(a12, a34, H)
    for arr in (foot12, foot34, u, v):
        arr.setflags(write=False)
    return SkewFrame(
        H=H, phi=phi, foot12=foot12, foot34=foot34, k1=k1, k2=k2, a12=a12, a34=a34,
        u12=u, u34=v, config=_classify(k1, a12, k2, a34),
        intersecting=H < INTERSECT_TOL * scale,
        H_feet=float(np.linalg.norm(foot34 - foot12)),
    )
