"""BB84 sweeps at p_Z = p_X and at p_Z = 100·p_X."""

import argparse

import numpy as np

from qdeg.sweep import emit_csv, sweep_bb84


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prefix", default="fig2_bb84")
    ap.add_argument("--steps", type=int, default=101)
    args = ap.parse_args()

    for ratio, stop in ((1.0, 0.05), (100.0, 0.005)):
        table = sweep_bb84(np.linspace(0, stop, args.steps), ratio)
        path = f"{args.prefix}_ratio{ratio:g}.csv"
        emit_csv(table, path)
        for r in table.rows[:: max(1, (args.steps - 1) // 10)]:
            print(f"ratio={ratio:g} p_x={r['p_x']:.5f}  q1={r['q1']:.6f}  "
                  f"thm1_i={r['thm1_i']:.6f}  hull={r['hull']:.6f}")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
