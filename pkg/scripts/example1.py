"""Worked example: A1=(0,0,0), A2=(2,0,0), A3=(-2,0,3), A4=(-1,-1,2).

Prints the frame, the equal-weight Steiner tree with its twist angle and the
single Fermat-Torricelli point.  Usage: python3 scripts/example1.py
"""

import math

import numpy as np

from tetsteiner import TetInstance, skew_frame
from tetsteiner.ft import ft_optimality_residual, solve_ft
from tetsteiner.oracle import minimize_single_node, minimize_two_nodes
from tetsteiner.simpson import solve_instance
from tetsteiner.twist import twist_angle, twist_angle_normal_oracle

V = np.array([[0, 0, 0], [2, 0, 0], [-2, 0, 3], [-1, -1, 2]], dtype=float)


def main() -> None:
    tet = TetInstance(V)
    f = skew_frame(tet)
    print(f"frame: H={f.H:.6f} phi={math.degrees(f.phi):.4f} deg k1={f.k1:.6f} k2={f.k2:.6f} ({f.config.value})")

    _, sol = solve_instance(tet)
    res = minimize_two_nodes(tet)
    tw = twist_angle(f, sol.t12, sol.t34)
    print(f"steiner: t12={sol.t12:.6f} t34={sol.t34:.6f} cost={sol.cost:.10f} ({sol.iterations} iterations)")
    print(f"  O12={np.round(sol.O12, 6)} O34={np.round(sol.O34, 6)}")
    print(f"  oracle cost={res.cost:.10f} rel diff={abs(sol.cost - res.cost) / res.cost:.1e}")
    print(
        f"  twist omega={math.degrees(tw.omega):.6f} deg "
        f"(normals {math.degrees(twist_angle_normal_oracle(f, sol.T12, sol.T34)):.6f})"
    )

    _, ft = solve_ft(tet)
    F, cost = minimize_single_node(tet)
    print(f"ft: t12={ft.t12:.6f} t34={ft.t34:.6f} gamma={math.degrees(ft.gamma):.6f} deg ({ft.method})")
    print(f"  F={np.round(ft.F, 6)} cost={ft.cost:.10f} oracle={cost:.10f}")
    print(f"  |sum of unit vectors| at F = {ft_optimality_residual(tet, ft.F):.1e}")


if __name__ == "__main__":
    main()
