"""Grids and areas of the five-bar diagonal spaces used as examples.

Writes one CSV per chain with P, Q and DS membership on a grid over the
bounding box, and prints the interval description and a Monte-Carlo area.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from ckc.cli import main as cli_main

CHAINS = {
    "unit": "1,1,1,1,1",
    "mixed": "2,3,4,2,3",
    "ordered": "6,5,4,1,1",
    "unordered": "4,1,6,5,1",
}


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=Path("out/diagonal_spaces"))
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--points", type=int, default=1_000_000)
    ns = p.parse_args()
    ns.out.mkdir(parents=True, exist_ok=True)
    for name, links in CHAINS.items():
        print(f"== {name}")
        cli_main(
            ["diagspace", "--links", links, "--grid", str(ns.grid), "--area",
             "--points", str(ns.points), "--out", str(ns.out / f"{name}.csv")]
        )


if __name__ == "__main__":
    main()
