"""Unit link directions of one closed configuration with many equal links.

The directions, weighted by link length, sum to zero because the polygon closes.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from ckc.cli import main as cli_main


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("out/directions.csv"))
    ns = p.parse_args()
    ns.out.parent.mkdir(parents=True, exist_ok=True)
    raise SystemExit(
        cli_main(["directions", "--unit-links", str(ns.n), "--seed", str(ns.seed), "--out", str(ns.out)])
    )


if __name__ == "__main__":
    main()
