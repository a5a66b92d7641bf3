"""Which branch fires, per algorithm, on a random suite."""

import argparse

from wsne.harness import ALGORITHMS, GeneratorSpec, RunParams, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", default="uniform", choices=["uniform", "winlose", "planted"])
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--algs", nargs="+", default=["base", "improved", "apxne"], choices=ALGORITHMS)
    args = ap.parse_args()
    spec = GeneratorSpec(args.kind, n=args.n, seed=args.seed, count=args.count)
    for alg in args.algs:
        rep = run_suite(spec, alg, RunParams(eps=args.eps))
        s = rep.summary()
        print(f"{alg:14s} max regret {s['max_regret']:.4f}  ok={rep.ok}  {s['step_histogram']}")


if __name__ == "__main__":
    main()
