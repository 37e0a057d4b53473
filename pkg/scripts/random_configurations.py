"""Random closed configurations for n in {5, 7, 50, 10^6}.

Small chains are written as JSON Lines records (one per configuration); the
million-link chain is written as a joint CSV, thinned by --stride.
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from ckc.chain import LinkLengths
from ckc.records import configuration_record, dumps, write_csv
from ckc.rng import child_seed
from ckc.sampling import sample_configuration


@dataclass
class Config:
    out: Path = Path("out/configurations")
    count: int = 10
    seed: int = 0
    stride: int = 100
    sizes: tuple[int, ...] = (5, 7, 50, 1_000_000)


def run(cfg: Config) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    for n in cfg.sizes:
        links = LinkLengths.unit(n)
        t0 = time.perf_counter()
        if n <= 1000:
            path = cfg.out / f"unit_{n}.jsonl"
            lines = []
            worst = 0.0
            for i in range(cfg.count):
                rec = configuration_record(sample_configuration(links, child_seed(cfg.seed, i)), cfg.seed)
                rec["index"] = i
                worst = max(worst, rec["residual"])
                lines.append(dumps(rec))
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        else:
            s = sample_configuration(links, child_seed(cfg.seed, 0))
            joints = s.closed.joints[:: cfg.stride]
            path = cfg.out / f"unit_{n}_joints.csv"
            path.write_text(write_csv(["x", "y", "z"], (tuple(map(float, p)) for p in joints)), encoding="utf-8")
            worst = s.residual
        print(f"n={n:>8}  {time.perf_counter() - t0:7.2f}s  max residual {worst:.2e}  -> {path}")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=Config.out)
    p.add_argument("--count", type=int, default=Config.count)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--stride", type=int, default=Config.stride)
    p.add_argument("--sizes", default="5,7,50,1000000")
    ns = p.parse_args()
    run(Config(ns.out, ns.count, ns.seed, ns.stride, tuple(int(x) for x in ns.sizes.split(","))))


if __name__ == "__main__":
    main()
