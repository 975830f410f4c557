"""Construction vs direct minimisation on seeded random certified instances.

Writes one CSV row per instance (cost gap, node gap, iterations, twist) and
prints a summary.  ``--ft`` runs the single-point comparison instead.

    python3 scripts/oracle_sweep.py --n 200 --seed 1 --out sweep.csv
    python3 scripts/oracle_sweep.py --n 200 --ft
"""

import argparse
import csv
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from tetsteiner import TetInstance, check_nondegenerate, minimize_two_nodes, solve_instance
from tetsteiner.errors import InfeasibleWeights
from tetsteiner.ft import solve_ft
from tetsteiner.oracle import minimize_single_node
from tetsteiner.twist import twist_angle, twist_angle_normal_oracle


@dataclass
class SweepConfig:
    n: int = 200
    seed: int = 1
    weight_lo: float = 0.5
    weight_hi: float = 2.0
    restarts: int = 4
    ft: bool = False


def steiner_rows(cfg: SweepConfig):
    rng = np.random.default_rng(cfg.seed)
    done = 0
    while done < cfg.n:
        tet = TetInstance(rng.normal(size=(4, 3)), *rng.uniform(cfg.weight_lo, cfg.weight_hi, size=6))
        try:
            if not check_nondegenerate(tet).overall:
                continue
        except InfeasibleWeights:
            continue
        f, sol = solve_instance(tet)
        res = minimize_two_nodes(tet, restarts=cfg.restarts, seed=done)
        node_gap = max(np.linalg.norm(sol.O12 - res.O12), np.linalg.norm(sol.O34 - res.O34)) / tet.scale
        tw = twist_angle(f, sol.t12, sol.t34).omega
        yield {
            "i": done, "config": f.config.value, "iterations": sol.iterations,
            "cost": sol.cost, "cost_gap_rel": abs(sol.cost - res.cost) / res.cost, "node_gap": node_gap,
            "omega_deg": math.degrees(tw),
            "twist_gap": abs(tw - twist_angle_normal_oracle(f, sol.T12, sol.T34)),
        }
        done += 1


def ft_rows(cfg: SweepConfig):
    rng = np.random.default_rng(cfg.seed)
    done = 0
    while done < cfg.n:
        tet = TetInstance(rng.normal(size=(4, 3)))
        F, cost = minimize_single_node(tet)
        if np.min(np.linalg.norm(tet.vertices - F, axis=1)) < 1e-6 * tet.scale:
            continue
        _, sol = solve_ft(tet)
        yield {
            "i": done, "method": sol.method, "iterations": sol.iterations,
            "gamma_deg": math.degrees(sol.gamma), "cost": sol.cost,
            "cost_gap_rel": abs(sol.cost - cost) / cost,
            "node_gap": np.linalg.norm(sol.F - F) / tet.scale,
        }
        done += 1


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=SweepConfig.n)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--restarts", type=int, default=SweepConfig.restarts)
    ap.add_argument("--ft", action="store_true")
    ap.add_argument("--out", help="CSV path (default: no per-instance output)")
    args = ap.parse_args()
    cfg = SweepConfig(n=args.n, seed=args.seed, restarts=args.restarts, ft=args.ft)

    t0 = time.perf_counter()
    rows = list(ft_rows(cfg) if cfg.ft else steiner_rows(cfg))
    elapsed = time.perf_counter() - t0
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    for key in ("cost_gap_rel", "node_gap", "twist_gap"):
        if key in rows[0]:
            print(f"max {key}: {max(r[key] for r in rows):.2e}")
    print(f"{len(rows)} instances in {elapsed:.1f} s", file=sys.stderr)


if __name__ == "__main__":
    main()
