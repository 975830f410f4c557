"""End-to-end runs that turn an instance into a ResultRecord.

Shared by the CLI commands and the batch runner.  Solver failures are caught
here and recorded in ``status``/``error``, so a batch never stops on one
bad instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .degeneracy import check_nondegenerate
from .equilibrium import WeightSystem
from .errors import SteinerError
from .ft import solve_ft
from .geometry import PAIRINGS, skew_frame
from .oracle import minimize_two_nodes
from .serialize import InstanceSpec, ResultRecord, _vec, deg, parse_instance
from .simpson import DEFAULT_MAX_ITER, DEFAULT_TOL, build_tree, recover_nodes, solve_simpson
from .twist import twist_angle


@dataclass(frozen=True)
class RunOptions:
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    seed: int = 0
    restarts: int = 8
    oracle: bool = False
    ft: bool = False
    trace: bool = False

    def merged(self, file_options: dict[str, Any], cli_overrides: dict[str, Any]) -> RunOptions:
        """File options override defaults; explicit CLI flags override both."""
        vals = {**self.__dict__, **file_options}
        vals.update({k: v for k, v in cli_overrides.items() if v is not None})
        return RunOptions(**vals)


def error_dict(err: SteinerError) -> dict[str, Any]:
    ctx = {k: v for k, v in err.context.items() if k != "trace"}
    return {"code": err.code, "message": str(err), "context": ctx}


def degeneracy_dict(report) -> dict[str, Any]:
    return {
        "overall": report.overall,
        "binding": report.binding,
        "records": [
            {
                "label": r.label, "query_point": r.query_point, "vertex": r.vertex,
                "lhs": r.lhs, "rhs": r.rhs, "satisfied": r.satisfied,
            }
            for r in report.records
        ],
    }


def solve_spec(spec: InstanceSpec, opts: RunOptions) -> tuple[ResultRecord, Any]:
    """Frame, certificate, Simpson line, nodes, twist and optional FT / oracle blocks.

    Returns the record and the SteinerTree (None on failure).
    """
    tet = spec.tet.canonical()
    rec = ResultRecord(id=spec.id, status="ok", pairing=spec.tet.pairing)
    tree = None
    try:
        w = WeightSystem.from_instance(tet)
        frame = skew_frame(tet)
        rec.H, rec.phi_deg, rec.k1, rec.k2 = frame.H, deg(frame.phi), frame.k1, frame.k2
        rec.degeneracy = degeneracy_dict(check_nondegenerate(tet, w))
        sol = solve_simpson(frame, w, tol=opts.tol, max_iter=opts.max_iter, keep_trace=opts.trace)
        rec.t12, rec.t34 = sol.t12, sol.t34
        rec.T12, rec.T34 = _vec(sol.T12), _vec(sol.T34)
        rec.iterations, rec.residuals = sol.iterations, list(sol.residuals)
        if opts.trace:
            rec.trace = [list(p) for p in sol.trace]
        sol = recover_nodes(tet, frame, w, sol)
        rec.O12, rec.O34, rec.cost = _vec(sol.O12), _vec(sol.O34), sol.cost
        tree = build_tree(tet, w, sol.O12, sol.O34)
        try:
            rec.omega_deg = deg(twist_angle(frame, sol.t12, sol.t34).omega)
        except SteinerError:
            rec.omega_deg = None
    except SteinerError as err:
        rec.status, rec.error = err.code, error_dict(err)
    if opts.ft:
        rec.ft = ft_block(tet, opts)
    if opts.oracle:
        rec.oracle = oracle_block(tet, opts, rec.cost)
    return rec, tree


def ft_block(tet, opts: RunOptions) -> dict[str, Any]:
    try:
        _, s = solve_ft(tet, tol=opts.tol, max_iter=opts.max_iter)
    except SteinerError as err:
        return {"status": err.code, "error": error_dict(err)}
    return {
        "status": "ok", "t12": s.t12, "t34": s.t34, "gamma_deg": deg(s.gamma),
        "F": _vec(s.F), "cost": s.cost, "iterations": s.iterations, "method": s.method,
    }


def oracle_block(tet, opts: RunOptions, construction_cost: float | None) -> dict[str, Any]:
    try:
        r = minimize_two_nodes(tet, restarts=opts.restarts, seed=opts.seed)
    except SteinerError as err:
        return {"status": err.code, "error": error_dict(err)}
    out: dict[str, Any] = {
        "status": "ok", "O12": _vec(r.O12), "O34": _vec(r.O34), "cost": r.cost,
        "gradient_norm": r.gradient_norm, "degenerate": r.degenerate,
        "restart_costs": list(r.restart_costs),
    }
    if construction_cost is not None:
        out["cost_delta_rel"] = abs(construction_cost - r.cost) / r.cost
    return out


def solve_all_pairings(spec: InstanceSpec, opts: RunOptions) -> list[ResultRecord]:
    out = []
    for p in PAIRINGS:
        sub = InstanceSpec(f"{spec.id}:{p}", spec.tet.with_pairing(p), spec.options)
        out.append(solve_spec(sub, opts)[0])
    return out


def batch_worker(args: tuple[str, Any, RunOptions, dict[str, Any]]) -> ResultRecord:
    """Picklable unit of batch work; never raises for bad instances."""
    default_id, obj, base, overrides = args
    if isinstance(obj, Exception):
        err = obj if isinstance(obj, SteinerError) else SteinerError(str(obj))
        return ResultRecord(id=default_id, status=err.code, error=error_dict(err))
    try:
        spec = parse_instance(obj, default_id=default_id)
    except SteinerError as err:
        rid = str(obj.get("id", default_id)) if isinstance(obj, dict) else default_id
        return ResultRecord(id=rid, status=err.code, error=error_dict(err))
    return solve_spec(spec, base.merged(spec.options, overrides))[0]
