"""Wall time of the sampling pipeline against the number of links."""

from __future__ import annotations

import argparse

from ckc.cli import bench_sizes, scaling_exponent


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", default="1000,10000,100000,1000000")
    p.add_argument("--seed", type=int, default=0)
    ns = p.parse_args()
    rows = bench_sizes([int(x) for x in ns.sizes.split(",")], ns.seed)
    print(f"{'n':>9} {'seconds':>9} {'rel. residual':>14}")
    for n, t, r in rows:
        print(f"{n:>9} {t:>9.3f} {r:>14.2e}")
    print(f"log-log slope {scaling_exponent(rows):.3f}")


if __name__ == "__main__":
    main()
