"""Mean ε of random mixed-unitary complements as the output dimension grows."""

import argparse

import numpy as np

from qdeg.sdp.programs import epsilon_degradable
from qdeg.zoo import random_unitary_complement


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim-a", type=int, default=2)
    ap.add_argument("--dims-b", type=int, nargs="+", default=[2, 4, 8, 16])
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()

    for db in args.dims_b:
        eps = [epsilon_degradable(random_unitary_complement(args.dim_a, db, s), verify=False).epsilon
               for s in range(args.seeds)]
        print(f"|A|={args.dim_a} |B|={db:3d}  mean eps={np.mean(eps):.6f}  max={np.max(eps):.6f}")


if __name__ == "__main__":
    main()
