"""Print the guarantee of the improved method as a function of z."""

import argparse

import numpy as np

from wsne.algorithms import TWO_THIRDS, improved_bound, mp_quality, optimal_z


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=12)
    args = ap.parse_args()
    print(f"{'z':>10} {'2/3 - z':>10} {'mp regret':>10} {'bound':>10}")
    for z in np.linspace(0.0, 1 / 24 - 1e-9, args.points):
        print(f"{z:10.6f} {TWO_THIRDS - z:10.6f} {mp_quality(z):10.6f} {improved_bound(z):10.6f}")
    z = optimal_z()
    print(f"\noptimum z = {z:.12f}, bound = {improved_bound(z):.9f}")


if __name__ == "__main__":
    main()
