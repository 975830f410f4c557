"""How often the Simpson iteration started at t12 = k1 moves monotonically.

Equal weights, random frames; results are tallied by frame configuration
(where the feet of the common perpendicular sit relative to the edges).

    python3 scripts/monotonicity_study.py --n 2000 --seed 0
"""

import argparse
import json
from collections import defaultdict
from dataclasses import asdict, dataclass

import numpy as np

from tetsteiner import WeightSystem, skew_frame, solve_simpson
from tetsteiner.errors import SteinerError
from tetsteiner.geometry import TetInstance


@dataclass
class StudyConfig:
    n: int = 2000
    seed: int = 0
    rel_step: float = 1e-12  # steps below this fraction of the scale count as no move


def monotone(seq: np.ndarray, floor: float) -> bool:
    d = np.diff(seq)
    d = d[np.abs(d) > floor]
    return bool(np.all(d > 0) or np.all(d < 0))


def run(cfg: StudyConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    w = WeightSystem(1, 1, 1, 1, 1)
    tally: dict[str, list[int]] = defaultdict(lambda: [0, 0, 0])
    skipped = 0
    for _ in range(cfg.n):
        tet = TetInstance(rng.normal(size=(4, 3)))
        try:
            f = skew_frame(tet)
            sol = solve_simpson(f, w, start="foot", keep_trace=True)
        except SteinerError:
            skipped += 1
            continue
        floor = cfg.rel_step * f.scale
        t12 = np.array([f.k1] + [p[0] for p in sol.trace])
        t34 = np.array([p[1] for p in sol.trace])
        row = tally[f.config.value]
        row[0] += 1
        row[1] += monotone(t12, floor)
        row[2] += monotone(t34, floor)
    return {
        "config": asdict(cfg),
        "skipped": skipped,
        "by_configuration": {k: {"n": v[0], "t12_monotone": v[1], "t34_monotone": v[2]} for k, v in sorted(tally.items())},
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=StudyConfig.n)
    ap.add_argument("--seed", type=int, default=StudyConfig.seed)
    args = ap.parse_args()
    print(json.dumps(run(StudyConfig(n=args.n, seed=args.seed)), indent=2))


if __name__ == "__main__":
    main()
