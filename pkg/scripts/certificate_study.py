"""Compare the two bindings of the degeneracy check against the direct minimiser.

For each random instance with feasible weights the oracle decides whether
the optimal two-node tree is full (both nodes interior, not merged).  Each
binding is then scored as a classifier of that ground truth.

    python3 scripts/certificate_study.py --n 400 --seed 0 --standing-only
"""

import argparse
import json
from dataclasses import asdict, dataclass

import numpy as np

from tetsteiner import TetInstance, check_nondegenerate, minimize_two_nodes
from tetsteiner.errors import InfeasibleWeights


@dataclass
class StudyConfig:
    n: int = 400
    seed: int = 0
    weight_lo: float = 0.5
    weight_hi: float = 2.0
    restarts: int = 3
    standing_only: bool = False


def run(cfg: StudyConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    counts = {b: {"tp": 0, "fp": 0, "tn": 0, "fn": 0} for b in ("effective", "terminals")}
    done = 0
    while done < cfg.n:
        tet = TetInstance(rng.normal(size=(4, 3)), *rng.uniform(cfg.weight_lo, cfg.weight_hi, size=6))
        if cfg.standing_only and not tet.standing_assumption():
            continue
        try:
            verdicts = {b: check_nondegenerate(tet, binding=b).overall for b in counts}
        except InfeasibleWeights:
            continue
        full = minimize_two_nodes(tet, restarts=cfg.restarts).degenerate is None
        for b, ok in verdicts.items():
            key = ("tp" if full else "fp") if ok else ("fn" if full else "tn")
            counts[b][key] += 1
        done += 1
    out = {"config": asdict(cfg), "counts": counts}
    for b, c in counts.items():
        passed = c["tp"] + c["fp"]
        out[f"{b}_false_pass_rate"] = c["fp"] / passed if passed else None
        out[f"{b}_false_reject_rate"] = c["fn"] / (c["fn"] + c["tp"]) if c["fn"] + c["tp"] else None
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=StudyConfig.n)
    ap.add_argument("--seed", type=int, default=StudyConfig.seed)
    ap.add_argument("--restarts", type=int, default=StudyConfig.restarts)
    ap.add_argument("--standing-only", action="store_true", help="keep only A1A4 + A2A3 > A1A2 + A3A4")
    args = ap.parse_args()
    cfg = StudyConfig(n=args.n, seed=args.seed, restarts=args.restarts, standing_only=args.standing_only)
    print(json.dumps(run(cfg), indent=2))


if __name__ == "__main__":
    main()
