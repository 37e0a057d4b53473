"""Admissible link directions for every joint of one five-bar configuration.

For each joint the solution set is sampled and written as points on the unit
sphere; each set lies on a circle (or covers the sphere when the chain has
returned to the origin).
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from ckc.angles import reconstruct, solve_joint
from ckc.chain import LinkLengths, prefix_sums
from ckc.diagonals import sample_diagonals
from ckc.records import write_csv


def circle_rows(links: LinkLengths, seed: int, samples: int):
    gen = np.random.default_rng(seed)
    dv = sample_diagonals(links, gen)
    sc = reconstruct(links, dv, rng=gen)
    states = prefix_sums(links, sc.angles)
    L = dv.full()
    for k in range(2, links.n):
        sol = solve_joint(links, k, states[k - 2], L[k - 2], L[k - 1])
        for _ in range(samples):
            al, be = sol.sample(gen)
            yield (k, sol.case.value, al, be, *map(float, sol.direction(al, be)))


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--links", default="1,1,1,1,1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--out", type=Path, default=Path("out/solution_circles.csv"))
    ns = p.parse_args()
    links = LinkLengths([float(x) for x in ns.links.split(",")])
    ns.out.parent.mkdir(parents=True, exist_ok=True)
    rows = list(circle_rows(links, ns.seed, ns.samples))
    ns.out.write_text(write_csv(["joint", "case", "alpha", "beta", "x", "y", "z"], rows), encoding="utf-8")
    print(f"{len(rows)} points -> {ns.out}")


if __name__ == "__main__":
    main()
