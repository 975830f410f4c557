"""Twist angle between the planes (A1, A2, Simpson line) and (A4, A3, Simpson line).

With L = |T12 T34| the plane angles are taken as

    cos phi12 = (t12 - t34 cos phi) / L      angle between T12->A1 and T12->T34
    cos phi34 = (t12 cos phi - t34) / L      angle between T34->A3 and T12->T34 extended

and the twist is cos w = (cos phi - cos phi12 cos phi34) / (sin phi12 sin phi34).
Measuring phi34 against the continuation of the line (rather than back towards
T12) is what makes the closed form equal the dihedral between the half-planes
containing A1 and A4; the normals path below checks that independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import UndefinedTwist
from .geometry import SkewFrame, angle_between

TWIST_TOL = 1e-12
SPECIAL_TOL = 1e-12


class TwistCase(str, Enum):
    general = "general"
    phi_zero = "phi_zero"
    phi_right = "phi_right"
    both_right = "both_right"


@dataclass(frozen=True)
class TwistReport:
    phi12: float
    phi34: float
    omega: float
    simpson_length: float
    special_case: TwistCase
    signed_omega: float | None = None


def _classify(phi: float, phi12: float, phi34: float) -> TwistCase:
    right = 0.5 * math.pi
    if abs(phi12 - right) < SPECIAL_TOL and abs(phi34 - right) < SPECIAL_TOL:
        return TwistCase.both_right
    if abs(phi) < SPECIAL_TOL:
        return TwistCase.phi_zero
    if abs(phi - right) < SPECIAL_TOL:
        return TwistCase.phi_right
    return TwistCase.general


def cos_twist(cos_phi: float, phi12: float, phi34: float) -> float:
    den = math.sin(phi12) * math.sin(phi34)
    if den < TWIST_TOL:
        raise UndefinedTwist("a Steiner plane is degenerate (sin phi12 * sin phi34 ~ 0)", den=den)
    return (cos_phi - math.cos(phi12) * math.cos(phi34)) / den


def twist_angle(frame: SkewFrame, t12: float, t34: float, signed: bool = False) -> TwistReport:
    L = frame.simpson_length(t12, t34)
    if L < TWIST_TOL * frame.scale:
        raise UndefinedTwist("T12 and T34 coincide", simpson_length=L)
    c = frame.cos_phi
    # atan2 with the exact sines keeps both angles accurate near 0 and pi
    phi12 = math.atan2(frame.dist_to_line12(t34), t12 - t34 * c)
    phi34 = math.atan2(frame.dist_to_line34(t12), t12 * c - t34)
    cw = cos_twist(c, phi12, phi34)
    omega = math.acos(max(-1.0, min(1.0, cw)))
    s_omega = None
    if signed:
        T12, T34 = frame.point12(t12), frame.point34(t34)
        s_omega = _signed_dihedral(frame.u12, frame.u34, T34 - T12)
    return TwistReport(phi12, phi34, omega, L, _classify(frame.phi, phi12, phi34), s_omega)


def _signed_dihedral(u: np.ndarray, v: np.ndarray, d: np.ndarray) -> float:
    s = d / np.linalg.norm(d)
    n1, n2 = np.cross(u, s), np.cross(v, s)
    if min(np.linalg.norm(n1), np.linalg.norm(n2)) < TWIST_TOL:
        raise UndefinedTwist("an edge is parallel to the Simpson line")
    return math.atan2(float(np.dot(np.cross(n1, n2), s)), float(np.dot(n1, n2)))


def twist_angle_normal_oracle(frame: SkewFrame, T12, T34) -> float:
    """Dihedral from the normals u12 x uS and u34 x uS, with u34 along A4 -> A3."""
    d = np.asarray(T34, dtype=float) - np.asarray(T12, dtype=float)
    if np.linalg.norm(d) < TWIST_TOL * frame.scale:
        raise UndefinedTwist("T12 and T34 coincide")
    s = d / np.linalg.norm(d)
    n1, n2 = np.cross(frame.u12, s), np.cross(frame.u34, s)
    if min(np.linalg.norm(n1), np.linalg.norm(n2)) < TWIST_TOL:
        raise UndefinedTwist("an edge is parallel to the Simpson line")
    return angle_between(n1, n2)
