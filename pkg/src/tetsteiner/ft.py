"""Single (unweighted) Fermat-Torricelli point of a tetrahedron via its Simpson line.

At F the line through F meeting both paired edges bisects the angles A1 F A2
and A4 F A3, and the two angles are equal; call the common value gamma and
theta = gamma / 2.  The auxiliary triangles become isosceles with apex angle
pi - gamma, so h' = m and r = (a / 2) tan(theta), giving

    (t34 - t12 cos phi) / S(t12) = (m34 - t34) / ((a34 / 2) tan theta)
    (t12 - t34 cos phi) / S(t34) = (m12 - t12) / ((a12 / 2) tan theta)

and splitting |T12 T34| = T12F + F T34 closes the system with

    cot theta = (H^2 + k1 (t12 - t34 cos phi) + k2 (t34 - t12 cos phi))
                / ((t12 - k1) S(t34) + (t34 - k2) S(t12)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateConfiguration, InconsistentSolution, NoConvergence
from .geometry import SkewFrame, TetInstance, skew_frame
from .simpson import solver_scale

GAMMA0 = math.acos(-1.0 / 3.0)
DENOM_TOL = 1e-14
BRACKET_GRID = 64


@dataclass
class FtSolution:
    t12: float
    t34: float
    gamma: float
    iterations: int
    residuals: dict[str, float] = field(default_factory=dict)
    F: np.ndarray | None = None
    cost: float | None = None
    trace: list[tuple[float, float, float]] = field(default_factory=list)
    damped: bool = False
    method: str = "sweep"


def cot_half_gamma(frame: SkewFrame, t12: float, t34: float, variant: str = "corrected") -> float:
    """Right-hand side of the closing equation.

    ``variant="printed"`` puts an extra factor 2 on the H^2 + k1(...) group.
    It is kept only so tests can show it misses the worked example.
    """
    c = frame.cos_phi
    g1 = frame.H**2 + frame.k1 * (t12 - t34 * c)
    g2 = frame.k2 * (t34 - t12 * c)
    if variant == "printed":
        g1 *= 2.0
    elif variant != "corrected":
        raise ValueError(f"unknown variant {variant!r}")
    den = (t12 - frame.k1) * frame.dist_to_line12(t34) + (t34 - frame.k2) * frame.dist_to_line34(t12)
    if abs(den) < DENOM_TOL * frame.scale**2:
        raise DegenerateConfiguration("closing equation denominator vanishes", t12=t12, t34=t34)
    return (g1 + g2) / den


def _half_angle(frame: SkewFrame, t12: float, t34: float) -> float:
    """theta in (0, pi) from the closing equation; only (0, pi/2) is geometric."""
    return math.atan2(1.0, cot_half_gamma(frame, t12, t34))


def _line_update(h: float, r: float, t_other: float, s: float, c: float) -> float:
    return (h * s + r * t_other * c) / (r + s)


def ft_residuals(frame: SkewFrame, t12: float, t34: float, gamma: float) -> dict[str, float]:
    """Residuals of the three equations.

    The two line equations are reported as fixed-point defects over the solver
    scale, the closing one as an angle difference.  The ``*_abs`` entries
    evaluate the variant with absolute values around the signed numerators.
    """
    c = frame.cos_phi
    scale = solver_scale(frame)
    th = 0.5 * gamma
    r34 = 0.5 * frame.a34 * math.tan(th)
    r12 = 0.5 * frame.a12 * math.tan(th)
    s12, s34 = frame.dist_to_line34(t12), frame.dist_to_line12(t34)
    res = {
        "line34": abs(t34 - _line_update(frame.m34, r34, t12, s12, c)) / scale,
        "line12": abs(t12 - _line_update(frame.m12, r12, t34, s34, c)) / scale,
        "closing": abs(th - _half_angle(frame, t12, t34)),
    }
    # absolute-value variant, written as lhs - rhs in the ratio form
    res["line34_abs"] = abs(abs(t34 - t12 * c) / s12 - abs(frame.m34 - t34) / r34)
    res["line12_abs"] = abs(abs(t12 - t34 * c) / s34 - abs(frame.m12 - t12) / r12)
    den_abs = abs(t12 - frame.k1) * s34 + abs(t34 - frame.k2) * s12
    num = frame.H**2 + frame.k1 * (t12 - t34 * c) + frame.k2 * (t34 - t12 * c)
    res["closing_abs"] = abs(math.atan2(1.0, num / den_abs) - th) if den_abs > 0 else math.inf
    return res


def _sweep(frame: SkewFrame, tol: float, max_iter: int, keep_trace: bool) -> FtSolution:
    """Gauss-Seidel sweep: t34 from the first line equation, t12 from the second, then gamma.

    Starts at gamma = arccos(-1/3), t12 = m12.  If the gamma updates start to
    alternate in sign they are damped by 0.5 from then on.
    """
    c = frame.cos_phi
    scale = solver_scale(frame)
    t12, t34, theta = frame.m12, frame.m34, 0.5 * GAMMA0
    damp = 1.0
    last_step = 0.0
    trace: list[tuple[float, float, float]] = []
    for n in range(1, max_iter + 1):
        tan_t = math.tan(theta)
        t34_new = _line_update(frame.m34, 0.5 * frame.a34 * tan_t, t12, frame.dist_to_line34(t12), c)
        t12_new = _line_update(frame.m12, 0.5 * frame.a12 * tan_t, t34_new, frame.dist_to_line12(t34_new), c)
        target = _half_angle(frame, t12_new, t34_new)
        if target >= 0.5 * math.pi:
            # transient overshoot on nearly flat instances: move halfway to the bound
            target = 0.5 * (theta + 0.5 * math.pi)
        step = target - theta
        if damp == 1.0 and step * last_step < 0.0 and abs(step) > 0.5 * abs(last_step):
            damp = 0.5
        theta_new = theta + damp * step
        last_step = step
        delta = max(abs(t12_new - t12), abs(t34_new - t34)) / scale
        delta = max(delta, abs(theta_new - theta))
        t12, t34, theta = t12_new, t34_new, theta_new
        if keep_trace:
            trace.append((t12, t34, 2.0 * theta))
        if delta < tol:
            gamma = 2.0 * theta
            if _half_angle(frame, t12, t34) >= 0.5 * math.pi:
                raise DegenerateConfiguration("closing equation gives gamma >= pi", gamma=gamma)
            return FtSolution(
                t12, t34, gamma, n, ft_residuals(frame, t12, t34, gamma),
                trace=trace, damped=damp < 1.0,
            )
    raise NoConvergence(
        f"FT system did not converge in {max_iter} sweeps", trace=trace, tol=tol, last_delta=delta
    )


def _lines_at(frame: SkewFrame, theta: float, tol: float, max_iter: int) -> tuple[float, float]:
    """Solve the two line equations for fixed theta (a Simpson-type contraction)."""
    c = frame.cos_phi
    scale = solver_scale(frame)
    tan_t = math.tan(theta)
    t12 = frame.m12
    for _ in range(max_iter):
        t34 = _line_update(frame.m34, 0.5 * frame.a34 * tan_t, t12, frame.dist_to_line34(t12), c)
        t12_new = _line_update(frame.m12, 0.5 * frame.a12 * tan_t, t34, frame.dist_to_line12(t34), c)
        if abs(t12_new - t12) < tol * scale:
            return t12_new, t34
        t12 = t12_new
    raise NoConvergence("line equations did not converge at fixed gamma", gamma=2.0 * theta)


def _bracketed(frame: SkewFrame, tol: float, max_iter: int) -> FtSolution:
    """First root of theta_closing(theta) - theta on (0, pi/2), by scan and brentq.

    The defect is positive for small theta.  A second sign change near
    gamma = pi can appear, and the sweep is sometimes drawn to it, but it
    never corresponds to the minimiser.
    """
    inner_tol = max(tol, 1e-15)

    def defect(theta: float) -> float:
        t12, t34 = _lines_at(frame, theta, inner_tol, max_iter)
        return _half_angle(frame, t12, t34) - theta

    grid = np.linspace(1e-4, 0.5 * math.pi - 1e-6, BRACKET_GRID)
    prev_th, prev_d = grid[0], defect(grid[0])
    for th in grid[1:]:
        d = defect(th)
        if prev_d > 0.0 >= d:
            theta = brentq(defect, prev_th, th, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            t12, t34 = _lines_at(frame, theta, inner_tol, max_iter)
            gamma = 2.0 * theta
            return FtSolution(
                t12, t34, gamma, 0, ft_residuals(frame, t12, t34, gamma), method="bracket"
            )
        prev_th, prev_d = th, d
    raise DegenerateConfiguration("closing equation has no root with gamma in (0, pi)")


def solve_ft_system(
    frame: SkewFrame,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    keep_trace: bool = False,
) -> FtSolution:
    """Solve the three-equation system for (t12, t34, gamma).

    The Gauss-Seidel sweep runs first.  If it stalls or lands on the spurious
    gamma = pi solution, a bracketing search in gamma takes over and the result
    carries ``method="bracket"``.
    """
    try:
        return _sweep(frame, tol, max_iter, keep_trace)
    except (NoConvergence, DegenerateConfiguration) as sweep_err:
        try:
            return _bracketed(frame, tol, max_iter)
        except DegenerateConfiguration:
            raise sweep_err from None


def recover_F(tet: TetInstance, frame: SkewFrame, sol: FtSolution, seg_tol: float = 1e-9) -> FtSolution:
    """Place F on [T12, T34] from the triangle A1 T12 F and check the split of the segment."""
    t12, t34 = sol.t12, sol.t34
    L = frame.simpson_length(t12, t34)
    scale = solver_scale(frame)
    if L < seg_tol * scale:
        raise DegenerateConfiguration("T12 and T34 coincide")
    c = frame.cos_phi
    cot = 1.0 / math.tan(0.5 * sol.gamma)
    sin12, cos12 = frame.dist_to_line12(t34) / L, (t12 - t34 * c) / L
    sin34, cos34 = frame.dist_to_line34(t12) / L, (t34 - t12 * c) / L
    d12 = (t12 - frame.k1) * (sin12 * cot + cos12)
    d34 = (t34 - frame.k2) * (sin34 * cot + cos34)
    if d12 < -seg_tol * scale or d34 < -seg_tol * scale or abs(d12 + d34 - L) > seg_tol * scale:
        raise InconsistentSolution(
            "F is not between T12 and T34", T12F=d12, FT34=d34, T12T34=L
        )
    T12, T34 = frame.point12(t12), frame.point34(t34)
    sol.F = T12 + (d12 / L) * (T34 - T12)
    sol.cost = float(np.linalg.norm(tet.vertices - sol.F, axis=1).sum())
    sol.residuals["split"] = abs(d12 + d34 - L) / scale
    return sol


def ft_optimality_residual(tet: TetInstance, F) -> float:
    """Norm of the sum of unit vectors from F to the vertices."""
    d = tet.vertices - np.asarray(F)
    return float(np.linalg.norm((d / np.linalg.norm(d, axis=1)[:, None]).sum(axis=0)))


def solve_ft(tet: TetInstance, tol: float = 1e-12, max_iter: int = 10_000, keep_trace: bool = False):
    frame = skew_frame(tet)
    sol = solve_ft_system(frame, tol=tol, max_iter=max_iter, keep_trace=keep_trace)
    return frame, recover_F(tet, frame, sol)
