"""ε of D_p ⊗ D_p against twice the single-copy value (slow: minutes per point)."""

import argparse
import logging

from qdeg.channels import tensor
from qdeg.sdp.programs import epsilon_degradable
from qdeg.zoo import depolarizing


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.05)
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)

    d = depolarizing(args.p)
    single = epsilon_degradable(d, verify=False)
    pair = epsilon_degradable(tensor(d, d), verify=False)
    print(f"eps(D)     = {single.epsilon:.8f}")
    print(f"eps(D x D) = {pair.epsilon:.8f}  (2 eps(D) = {2 * single.epsilon:.8f})")
    print(f"tensor solve: {pair.solver['iterations']} iterations, {pair.solver['seconds']:.0f}s")


if __name__ == "__main__":
    main()
