"""Direct minimisation of the weighted tree length, independent of the construction.

``weighted_median`` solves min_P sum_i w_i |P - P_i| (Weiszfeld with a
smoothed distance, then Newton polishing).  ``minimize_two_nodes`` minimises
the two-node objective by alternating medians, one node at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NoConvergence
from .equilibrium import WeightSystem
from .geometry import TetInstance

SMOOTH_EPS = 1e-12
STAGNATION_RESIDUAL = 1e-6
MERGE_TOL = 1e-10
POLISH_EVERY = 5
# block solves only need to be accurate enough to hand over to the joint Newton polish
BLOCK_TOL = 1e-9
# pull within this relative margin of a terminal's weight counts as absorbing;
# closer to the boundary the minimiser is within ~1e-9 scale of the terminal
# and Newton cycles against the terminal kink
ABSORB_RTOL = 1e-9
# terminals this close (relative to scale) are treated as one point
TERMINAL_TOL = 1e-10


def _dists(x: np.ndarray, pts: np.ndarray) -> np.ndarray:
    return np.sqrt(((pts - x) ** 2).sum(axis=1))


def median_objective(x, pts, w) -> float:
    return float(np.dot(w, _dists(np.asarray(x, float), pts)))


def median_gradient(x, pts, w) -> np.ndarray:
    diff = np.asarray(x, float) - pts
    d = np.sqrt((diff**2).sum(axis=1))
    mask = d > 0
    return (w[mask, None] * diff[mask] / d[mask, None]).sum(axis=0)


def _absorbing_vertex(pts: np.ndarray, w: np.ndarray, tiny: float = 0.0) -> int | None:
    """Index of a terminal that is itself the minimiser, if any.

    Points closer than ``tiny`` to the candidate are lumped with it.
    """
    for j in range(len(pts)):
        diff = pts - pts[j]
        d = np.sqrt((diff**2).sum(axis=1))
        far = d > tiny
        pull = np.linalg.norm((w[far, None] * diff[far] / d[far, None]).sum(axis=0))
        if pull <= w[~far].sum() * (1.0 + ABSORB_RTOL):
            return j
    return None


def _escape_terminal(pts: np.ndarray, w: np.ndarray, j: int, tiny: float = 0.0) -> np.ndarray:
    """Step off a non-absorbing terminal: exact line search along the net pull of the others.

    An Armijo step is not enough here: when the pull barely beats the
    terminal weight the minimiser sits within ~1e-10 scale of the terminal and
    a sufficient-decrease step stops orders of magnitude short of it.
    """
    diff = pts - pts[j]
    d = np.sqrt((diff**2).sum(axis=1))
    far = d > tiny
    pull = (w[far, None] * diff[far] / d[far, None]).sum(axis=0)
    direction = pull / np.linalg.norm(pull)
    hi = 0.5 * d[far].min()
    res = minimize_scalar(
        lambda t: median_objective(pts[j] + t * direction, pts, w),
        bounds=(0.0, hi), method="bounded", options={"xatol": 1e-6 * tiny + 1e-300},
    )
    return pts[j] + res.x * direction


def weighted_median(points, weights, tol: float = 1e-12, max_iter: int = 10_000, x0=None):
    """Weighted geometric median of ``points``.

    ``tol`` bounds the first-order residual |grad| / sum(w).  A terminal whose
    weight dominates the pull of the others is returned exactly.
    """
    pts = np.asarray(points, dtype=float)
    w = np.asarray(weights, dtype=float)
    if pts.ndim != 2 or len(pts) < 2 or len(w) != len(pts):
        raise ValueError("need at least two points and one weight per point")
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    scale = float(np.max(np.ptp(pts, axis=0))) or 1.0
    tiny = TERMINAL_TOL * scale
    j = _absorbing_vertex(pts, w, tiny)
    if j is not None:
        return pts[j].copy()

    wsum = w.sum()
    eps2 = (SMOOTH_EPS * scale) ** 2
    x = np.asarray(x0, float).copy() if x0 is not None else (w @ pts) / wsum

    def residual(p):
        return np.linalg.norm(median_gradient(p, pts, w)) / wsum

    it = 0
    escaped: set[int] = set()
    # a few Weiszfeld sweeps to get into Newton's basin
    while it < max_iter:
        d = np.sqrt(((pts - x) ** 2).sum(axis=1) + eps2)
        c = w / d
        x_new = (c @ pts) / c.sum()
        step = np.linalg.norm(x_new - x)
        x = x_new
        it += 1
        if step < 1e-4 * scale or residual(x) < tol:
            break

    while it < max_iter:
        res = residual(x)
        if res < tol:
            return x
        diff = x - pts
        raw = np.sqrt((diff**2).sum(axis=1))
        j = int(np.argmin(raw))
        if raw[j] < tiny and j not in escaped:
            # once per terminal; afterwards Newton works from the escaped point
            escaped.add(j)
            x = _escape_terminal(pts, w, j, tiny)
            it += 1
            continue
        d = np.sqrt(raw**2 + eps2)
        e = diff / d[:, None]
        g = (w[:, None] * e).sum(axis=0)
        hess = np.zeros((3, 3))
        for wi, ei, di in zip(w, e, d):
            hess += wi * (np.eye(3) - np.outer(ei, ei)) / di
        step = -np.linalg.lstsq(hess, g, rcond=None)[0]
        it += 1
        lam = 1.0
        for _ in range(40):
            cand = x + lam * step
            if residual(cand) < res:
                x = cand
                break
            lam *= 0.5
        else:
            c = w / d
            x_w = (c @ pts) / c.sum()
            if residual(x_w) < res:
                x = x_w
                continue
            # no direction improves the residual: roundoff floor, typically right
            # next to a terminal that barely fails to absorb the point
            if res < STAGNATION_RESIDUAL:
                return x
            break
    raise NoConvergence(
        "weighted median did not reach the residual tolerance",
        residual=residual(x), iterations=it,
    )


@dataclass
class OracleResult:
    O12: np.ndarray
    O34: np.ndarray
    cost: float
    iterations: int
    gradient_norm: float
    cost_trace: list[float] = field(default_factory=list)
    restart_costs: list[float] = field(default_factory=list)
    degenerate: str | None = None


def two_node_cost(tet: TetInstance, w: WeightSystem, O12, O34) -> float:
    A1, A2, A3, A4 = tet.vertices
    n = np.linalg.norm
    return float(
        w.B1 * n(A1 - O12) + w.B2 * n(A2 - O12) + w.B3 * n(A3 - O34) + w.B4 * n(A4 - O34)
        + w.B_ST * n(O12 - O34)
    )


def two_node_gradient(tet: TetInstance, w: WeightSystem, O12, O34) -> np.ndarray:
    """Gradient in (O12, O34); terms at zero distance are dropped."""
    A1, A2, A3, A4 = tet.vertices
    g12 = median_gradient(O12, np.array([A1, A2]), np.array([w.B1, w.B2]))
    g34 = median_gradient(O34, np.array([A3, A4]), np.array([w.B3, w.B4]))
    l = O12 - O34
    L = np.linalg.norm(l)
    if L > 0:
        g12 = g12 + w.B_ST * l / L
        g34 = g34 - w.B_ST * l / L
    return np.concatenate([g12, g34])


def _proj(e: np.ndarray) -> np.ndarray:
    return np.eye(3) - np.outer(e, e)


def _newton_polish(tet, w, O12, O34, scale, tol, max_steps=50):
    """Joint Newton on the smooth part of the objective; skipped near kinks."""
    A1, A2, A3, A4 = tet.vertices
    wsum = w.B1 + w.B2 + w.B3 + w.B4 + w.B_ST

    def gnorm(x):
        return np.linalg.norm(two_node_gradient(tet, w, x[:3], x[3:])) / wsum

    x = np.concatenate([O12, O34])
    for _ in range(max_steps):
        res = gnorm(x)
        if res < tol:
            break
        p, q = x[:3], x[3:]
        terms = [(p, A1, w.B1), (p, A2, w.B2), (q, A3, w.B3), (q, A4, w.B4)]
        dists = [np.linalg.norm(a - b) for a, b, _ in terms] + [np.linalg.norm(p - q)]
        if min(dists) < 1e-8 * scale:
            break
        hess = np.zeros((6, 6))
        for k, (node, term, b) in enumerate(terms):
            e = (node - term) / dists[k]
            sl = slice(0, 3) if k < 2 else slice(3, 6)
            hess[sl, sl] += b * _proj(e) / dists[k]
        el = (p - q) / dists[4]
        blk = w.B_ST * _proj(el) / dists[4]
        hess[:3, :3] += blk
        hess[3:, 3:] += blk
        hess[:3, 3:] -= blk
        hess[3:, :3] -= blk
        g = two_node_gradient(tet, w, p, q)
        step = -np.linalg.lstsq(hess, g, rcond=None)[0]
        lam = 1.0
        for _ in range(40):
            cand = x + lam * step
            if gnorm(cand) < res:
                x = cand
                break
            lam *= 0.5
        else:
            break
    return x[:3], x[3:]


def _unstick_merged(tet, w, star, grad12):
    """Handle O12 == O34, where single-node steps cannot separate the nodes.

    The best merged position is the four-terminal star point.  There the
    pair can split profitably iff the pull of A1, A2 exceeds B_ST; if so, move
    the nodes apart along that pull with an Armijo search.
    """
    pull = np.linalg.norm(grad12)
    if pull <= w.B_ST:
        return star.copy(), star.copy(), True
    d = grad12 / pull
    f0 = two_node_cost(tet, w, star, star)
    slope = 2.0 * (pull - w.B_ST)
    t = 0.25 * tet.scale
    for _ in range(200):
        O12, O34 = star - t * d, star + t * d
        if two_node_cost(tet, w, O12, O34) <= f0 - 0.5 * t * slope:
            return O12, O34, False
        t *= 0.5
    return star.copy(), star.copy(), True


def _classify_degenerate(tet, O12, O34, scale) -> str | None:
    tol = 1e-7 * scale
    if np.linalg.norm(O12 - O34) < tol:
        return "merged"
    for name, node, idx in (("O12", O12, (0, 1)), ("O34", O34, (2, 3))):
        for i in idx:
            if np.linalg.norm(node - tet.vertices[i]) < tol:
                return f"{name}=A{i + 1}"
    return None


def minimize_two_nodes(
    tet: TetInstance,
    w: WeightSystem | None = None,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    restarts: int = 8,
    seed: int = 0,
) -> OracleResult:
    """Global minimiser of the two-node objective by alternating medians.

    Each restart starts both nodes uniformly in the bounding box.  The best
    restart is returned; ``restart_costs`` keeps all of them.
    """
    if w is None:
        w = WeightSystem.from_instance(tet)
    A1, A2, A3, A4 = tet.vertices
    pts12, w12 = np.array([A1, A2, A1]), np.array([w.B1, w.B2, w.B_ST])
    pts34, w34 = np.array([A3, A4, A3]), np.array([w.B3, w.B4, w.B_ST])
    scale = tet.scale
    rng = np.random.default_rng(seed)
    lo, hi = tet.vertices.min(axis=0), tet.vertices.max(axis=0)

    star = weighted_median(tet.vertices, tet.terminal_weights, tol=tol)
    star_grad12 = median_gradient(star, np.array([A1, A2]), np.array([w.B1, w.B2]))
    w_total = w.B1 + w.B2 + w.B3 + w.B4 + w.B_ST

    best: OracleResult | None = None
    costs = []
    for _ in range(max(1, restarts)):
        O12 = rng.uniform(lo, hi)
        O34 = rng.uniform(lo, hi)
        cost = two_node_cost(tet, w, O12, O34)
        trace = [cost]
        it = 0
        converged = False
        while it < max_iter:
            pts12[2] = O34
            O12 = weighted_median(pts12, w12, tol=max(tol, BLOCK_TOL), x0=O12)
            pts34[2] = O12
            O34 = weighted_median(pts34, w34, tol=max(tol, BLOCK_TOL), x0=O34)
            it += 1
            if np.linalg.norm(O12 - O34) < MERGE_TOL * scale:
                O12, O34, merged_optimal = _unstick_merged(tet, w, star, star_grad12)
                if merged_optimal:
                    trace.append(two_node_cost(tet, w, O12, O34))
                    converged = True
                    break
            new = two_node_cost(tet, w, O12, O34)
            trace.append(new)
            if cost - new <= tol * new:
                converged = True
                break
            cost = new
            # block descent crawls near the optimum; hand over to joint Newton early
            if it % POLISH_EVERY == 0:
                P, Q = _newton_polish(tet, w, O12, O34, scale, tol)
                if two_node_cost(tet, w, P, Q) <= new:
                    O12, O34 = P, Q
                    g = np.linalg.norm(two_node_gradient(tet, w, P, Q)) / w_total
                    if g < tol:
                        trace.append(two_node_cost(tet, w, P, Q))
                        converged = True
                        break
        if not converged:
            raise NoConvergence("alternating medians hit max_iter", trace=trace, iterations=it)
        P, Q = _newton_polish(tet, w, O12, O34, scale, tol)
        if two_node_cost(tet, w, P, Q) <= trace[-1] * (1 + 1e-15):
            O12, O34 = P, Q
        cost = two_node_cost(tet, w, O12, O34)
        trace.append(cost)
        costs.append(cost)
        if best is None or cost < best.cost:
            best = OracleResult(
                O12=O12, O34=O34, cost=cost, iterations=it,
                gradient_norm=float(np.linalg.norm(two_node_gradient(tet, w, O12, O34))),
                cost_trace=trace,
            )
    assert best is not None
    best.restart_costs = costs

    star_cost = two_node_cost(tet, w, star, star)
    if star_cost < best.cost * (1 - 1e-12):
        best = OracleResult(
            O12=star, O34=star.copy(), cost=star_cost, iterations=best.iterations,
            gradient_norm=float("nan"), cost_trace=best.cost_trace + [star_cost],
            restart_costs=costs,
        )
    best.degenerate = _classify_degenerate(tet, best.O12, best.O34, scale)
    if best.degenerate is None:
        best.gradient_norm = float(np.linalg.norm(two_node_gradient(tet, w, best.O12, best.O34)))
    return best


def minimize_single_node(tet: TetInstance, tol: float = 1e-12) -> tuple[np.ndarray, float]:
    """Unweighted Fermat-Torricelli point of the four vertices and its cost."""
    ones = np.ones(4)
    F = weighted_median(tet.vertices, ones, tol=tol)
    return F, median_objective(F, tet.vertices, ones)


def first_order_residual(points, weights, x) -> float:
    """|sum_i w_i unit(x - P_i)|, with no smoothing."""
    return float(np.linalg.norm(median_gradient(x, np.asarray(points, float), np.asarray(weights, float))))


__all__ = [
    "OracleResult",
    "weighted_median",
    "minimize_two_nodes",
    "minimize_single_node",
    "two_node_cost",
    "two_node_gradient",
    "median_objective",
    "first_order_residual",
]

