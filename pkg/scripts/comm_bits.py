"""Bits used by the communication protocols as n grows, against the configured budget."""

import argparse

import numpy as np

from wsne.comm import PROTOCOLS, bit_budget, endpoints
from wsne.harness import GeneratorSpec, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 20, 50, 100])
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--count", type=int, default=20)
    args = ap.parse_args()
    print(f"{'n':>5} {'protocol':>8} {'mean bits':>10} {'max bits':>9} {'budget':>9}")
    for n in args.sizes:
        for name, proto in PROTOCOLS.items():
            kind = "winlose" if name == "winlose" else "uniform"
            bits = [proto(*endpoints(g, k), args.eps)[1].total_bits
                    for k, g in enumerate(generate(GeneratorSpec(kind, n=n, seed=n, count=args.count)))]
            print(f"{n:5d} {name:>8} {np.mean(bits):10.0f} {max(bits):9d} {bit_budget(n, args.eps):9.0f}")


if __name__ == "__main__":
    main()
