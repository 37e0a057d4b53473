"""Command-line entry point: ``ckc {sample,verify,diagspace,cube,directions,bench}``.

Exit codes: 0 success, 1 input or parse error, 2 verification failure,
3 infeasible or non-closable input.
"""

from __future__ import annotations

import argparse
import itertools
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .chain import CKCError, InfeasibleError, JointAngles, LinkLengths, NonClosableError
from .closure import balance, joint_positions, verify
from .cube import HypothesisError, cube_membership, cube_map, cube_to_diagonals
from .diagonals import bounding_box, decompose, monte_carlo_volume
from .permute import closing_joint
from .records import RecordError, configuration_record, dumps, iter_records, parse_record, write_csv
from .rng import child_seed
from .sampling import sample_configuration

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_INFEASIBLE = 3

MAX_GRID_LINKS = 8
MAX_GRID_POINTS = 10_000_000


class UsageError(Exception):
    """Bad flags or unreadable input; maps to exit code 1."""


@dataclass
class RunConfig:
    command: str
    links: LinkLengths | None = None
    count: int = 1
    seed: int = 0
    tol: float = 1e-9
    out: Path | None = None
    fmt: str = "json"
    jobs: int = 1
    force: bool = False
    grid: int = 0
    area: bool = False
    points: int = 1_000_000
    sizes: tuple[int, ...] = (1_000, 10_000, 100_000, 1_000_000)
    input: str | None = None


def parse_links(text: str) -> np.ndarray:
    """Comma/whitespace separated lengths, inline or from a file path."""
    if os.path.isfile(text):
        text = Path(text).read_text(encoding="utf-8")
    parts = [p for p in text.replace(",", " ").split() if p]
    if not parts:
        raise UsageError("no link lengths given")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise UsageError(f"bad link length list: {exc}") from exc


def _links_from_args(ns: argparse.Namespace, required: bool = True) -> LinkLengths | None:
    given = getattr(ns, "links", None)
    unit = getattr(ns, "unit_links", None)
    if given is not None and unit is not None:
        raise UsageError("use either --links or --unit-links")
    if given is None and unit is None:
        if required:
            raise UsageError("link lengths required: --links or --unit-links")
        return None
    raw = parse_links(given) if given is not None else np.ones(int(unit))
    return LinkLengths(raw)


def build_config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    if ns.command != "bench":
        cfg.links = _links_from_args(ns, required=ns.command != "verify")
    for name in ("count", "seed", "tol", "jobs", "force", "grid", "area", "points", "input"):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    if getattr(ns, "format", None):
        cfg.fmt = ns.format
    if getattr(ns, "out", None):
        cfg.out = Path(ns.out)
    if getattr(ns, "sizes", None):
        try:
            cfg.sizes = tuple(int(s) for s in ns.sizes.split(","))
        except ValueError as exc:
            raise UsageError(f"bad --sizes: {exc}") from exc
    if cfg.count < 1:
        raise UsageError("--count must be positive")
    if cfg.tol <= 0:
        raise UsageError("--tol must be positive")
    return cfg


class Output:
    """Main data goes to ``--out`` or stdout; notes go to stdout when data has a file."""

    def __init__(self, out: Path | None):
        self.out = out
        self._chunks: list[str] = []

    def data(self, text: str) -> None:
        if self.out is None:
            sys.stdout.write(text)
        else:
            self._chunks.append(text)

    def note(self, text: str) -> None:
        stream = sys.stdout if self.out is not None else sys.stderr
        stream.write(text + "\n")

    def close(self) -> None:
        if self.out is not None:
            self.out.write_text("".join(self._chunks), encoding="utf-8")


# sample ----------------------------------------------------------------------


def _sample_record(args: tuple[np.ndarray, int, int]) -> dict:
    a, seed, index = args
    links = LinkLengths(a)
    rec = configuration_record(sample_configuration(links, child_seed(seed, index)), seed)
    rec["index"] = index
    return rec


def _records(cfg: RunConfig):
    assert cfg.links is not None
    tasks = [(cfg.links.a, cfg.seed, i) for i in range(cfg.count)]
    if cfg.jobs > 1 and cfg.count > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            # map keeps submission order, so output does not depend on timing
            yield from pool.map(_sample_record, tasks)
    else:
        yield from map(_sample_record, tasks)


def cmd_sample(cfg: RunConfig, out: Output) -> int:
    worst = 0.0
    if cfg.fmt == "csv":
        out.data("sample,joint,x,y,z,alpha,beta\n")
    for rec in _records(cfg):
        worst = max(worst, rec["residual"])
        if cfg.fmt == "json":
            out.data(dumps(rec) + "\n")
            continue
        links = LinkLengths(rec["links"])
        alpha = list(rec["alpha"])
        beta = list(rec["beta"])
        al_n, be_n = closing_joint(links, JointAngles(alpha, beta))
        alpha.append(al_n)
        beta.append(be_n)
        rows = (
            (rec["index"], j + 1, *map(float, rec["joints"][j]), float(alpha[j]), float(beta[j]))
            for j in range(links.n)
        )
        out.data(write_csv(None, rows))
    total = cfg.links.total if cfg.links is not None else 1.0
    out.note(f"samples: {cfg.count}  max residual: {worst:.3e}  relative: {worst / total:.3e}")
    return EXIT_OK


# verify ----------------------------------------------------------------------


def cmd_verify(cfg: RunConfig, out: Output) -> int:
    if cfg.input is None:
        raise UsageError("verify needs an input file ('-' for stdin)")
    try:
        text = sys.stdin.read() if cfg.input == "-" else Path(cfg.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {cfg.input}: {exc}") from exc
    failed = 0
    try:
        chunks = list(iter_records(text))
        parsed = [parse_record(c) for c in chunks]
    except RecordError as exc:
        raise UsageError(str(exc)) from exc
    for i, (links, angles, rec) in enumerate(parsed):
        rep = verify(links, angles)
        joint_dev = 0.0
        if "joints" in rec:
            try:
                given = np.asarray(rec["joints"], dtype=float)
            except (TypeError, ValueError) as exc:
                raise UsageError(f"record {i}: bad joints: {exc}") from exc
            if given.shape != (links.n, 3):
                raise UsageError(f"record {i}: joints must have shape ({links.n}, 3)")
            joint_dev = float(np.max(np.abs(given - joint_positions(links, angles)))) / links.total
        ok = rep.ok(cfg.tol) and joint_dev <= cfg.tol
        failed += not ok
        out.data(
            f"record {i}: n={links.n} residual={rep.absolute:.3e} relative={rep.relative:.3e} "
            f"joint_dev={joint_dev:.3e} {'ok' if ok else 'FAIL'}\n"
        )
    out.note(f"{len(parsed) - failed}/{len(parsed)} records within tolerance {cfg.tol:g}")
    return EXIT_VERIFY if failed else EXIT_OK


# diagspace -------------------------------------------------------------------


def cmd_diagspace(cfg: RunConfig, out: Output) -> int:
    links = cfg.links
    assert links is not None
    if links.n < 4:
        raise UsageError("a triangle has no free diagonals")
    ds = decompose(links)
    report = [ds.describe()]
    if cfg.grid:
        if links.n > MAX_GRID_LINKS:
            raise UsageError(f"dimension too large for a grid: n = {links.n} > {MAX_GRID_LINKS}")
        dim = links.n - 3
        if cfg.grid ** dim > MAX_GRID_POINTS:
            raise UsageError(f"grid of {cfg.grid}^{dim} points is too large")
        box = bounding_box(links)
        axes = [np.linspace(lo, hi, cfg.grid) for lo, hi in box]
        pts = np.array(list(itertools.product(*axes))).reshape(-1, dim)
        in_p = ds.in_polytope(pts)
        in_q = ds.in_cuboid(pts)
        header = [f"L_{i}" for i in range(2, links.n - 1)] + ["in_P", "in_Q", "in_DS"]
        rows = (
            (*map(float, p), int(ip), int(iq), int(ip and iq))
            for p, ip, iq in zip(pts, in_p, in_q)
        )
        out.data(write_csv(header, rows))
    if cfg.area:
        vol = monte_carlo_volume(links, cfg.points, rng=cfg.seed)
        word = "area" if links.n == 5 else "volume"
        report.append(f"monte carlo {word}: {vol:.6f} ({cfg.points} points, seed {cfg.seed})")
    text = "\n".join(report)
    if cfg.grid:
        out.note(text)
    else:
        out.data(text + "\n")
    return EXIT_OK


# cube ------------------------------------------------------------------------


def cmd_cube(cfg: RunConfig, out: Output) -> int:
    links = cfg.links
    assert links is not None
    dim = links.n - 3
    if dim < 1:
        raise UsageError("cube map needs at least 4 links")
    if cfg.grid:
        if cfg.grid ** dim > MAX_GRID_POINTS:
            raise UsageError(f"grid of {cfg.grid}^{dim} points is too large")
        ax = np.linspace(-1.0, 1.0, cfg.grid)
        s = np.array(list(itertools.product(ax, repeat=dim))).reshape(-1, dim)
    else:
        s = np.random.default_rng(cfg.seed).uniform(-1.0, 1.0, size=(cfg.count, dim))
    u = cube_map(links, s, force=cfg.force)
    L = cube_to_diagonals(links, s, force=cfg.force)
    member = cube_membership(links, s, force=cfg.force)
    idx = range(2, links.n - 1)
    header = [f"s_{i}" for i in idx] + [f"U_{i}" for i in idx] + [f"L_{i}" for i in idx] + ["member"]
    rows = ((*map(float, si), *map(float, ui), *map(float, li), int(m)) for si, ui, li, m in zip(s, u, L, member))
    out.data(write_csv(header, rows))
    out.note(f"members: {int(np.count_nonzero(member))}/{len(s)}")
    return EXIT_OK


# directions ------------------------------------------------------------------


def cmd_directions(cfg: RunConfig, out: Output) -> int:
    links = cfg.links
    assert links is not None
    rng = child_seed(cfg.seed, 0)
    closed = sample_configuration(links, rng).closed
    dirs = closed.angles.directions()
    last = -np.asarray(closed.joints[-1]) / float(np.linalg.norm(closed.joints[-1]))
    dirs = np.vstack([dirs, last])
    rows = ((j + 1, float(links.a[j]), *map(float, d)) for j, d in enumerate(dirs))
    out.data(write_csv(["link", "length", "x", "y", "z"], rows))
    norm = balance(links, closed.angles)
    out.note(f"balance norm: {norm:.3e}  relative: {norm / links.total:.3e}")
    return EXIT_OK


# bench -----------------------------------------------------------------------


def bench_sizes(sizes: Sequence[int], seed: int = 0) -> list[tuple[int, float, float]]:
    """``(n, seconds, relative residual)`` for one unit-link sample per size."""
    rows = []
    for n in sizes:
        links = LinkLengths.unit(n)
        t0 = time.perf_counter()
        res = sample_configuration(links, child_seed(seed, 0)).residual
        rows.append((n, time.perf_counter() - t0, res / links.total))
    return rows


def scaling_exponent(rows: Sequence[tuple[int, float, float]]) -> float:
    """Least-squares slope of log(time) against log(n)."""
    if len(rows) < 2:
        return math.nan
    x = np.log([r[0] for r in rows])
    y = np.log([max(r[1], 1e-9) for r in rows])
    return float(np.polyfit(x, y, 1)[0])


def cmd_bench(cfg: RunConfig, out: Output) -> int:
    rows = bench_sizes(cfg.sizes, cfg.seed)
    out.data(write_csv(["n", "seconds", "relative_residual"], rows))
    out.note(f"log-log slope: {scaling_exponent(rows):.3f} (1.0 is linear)")
    return EXIT_OK


# parser ----------------------------------------------------------------------


def _add_links(p: argparse.ArgumentParser) -> None:
    p.add_argument("--links", help="comma separated lengths, or a file of lengths")
    p.add_argument("--unit-links", type=int, metavar="N", help="N links of length 1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ckc", description="Closed kinematic chains via diagonal coordinates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="random closed configurations")
    _add_links(p)
    p.add_argument("--count", type=int, default=1, help="number of configurations")
    p.add_argument("--seed", type=int, default=0, help="base seed; sample i uses child seed i")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--jobs", type=int, default=1, help="worker processes; output does not depend on it")
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("verify", help="check closure of configuration records")
    p.add_argument("input", help="record file (JSON or JSON Lines); '-' for stdin")
    p.add_argument("--tol", type=float, default=1e-9, help="relative to the total length")
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("diagspace", help="describe the diagonal space")
    _add_links(p)
    p.add_argument("--grid", type=int, default=0, help="points per axis for a CSV grid")
    p.add_argument("--area", action="store_true", help="Monte-Carlo area/volume")
    p.add_argument("--points", type=int, default=1_000_000, help="Monte-Carlo sample size")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("cube", help="evaluate the cube map")
    _add_links(p)
    p.add_argument("--count", type=int, default=100, help="random cube points")
    p.add_argument("--grid", type=int, default=0, help="points per axis instead of random points")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--force", action="store_true", help="skip the three-long-links check")
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("directions", help="link directions of one closed configuration")
    _add_links(p)
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("bench", help="time the sampling pipeline")
    p.add_argument("--sizes", default="1000,10000,100000,1000000", help="comma separated numbers of links")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--out", help="output file (default stdout)")
    return parser


COMMANDS = {
    "sample": cmd_sample,
    "verify": cmd_verify,
    "diagspace": cmd_diagspace,
    "cube": cmd_cube,
    "directions": cmd_directions,
    "bench": cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        cfg = build_config(ns)
        out = Output(cfg.out)
        code = COMMANDS[cfg.command](cfg, out)
        out.close()
        return code
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NonClosableError, InfeasibleError, HypothesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CKCError as exc:
        # remaining chain errors come from malformed lengths (zero, negative, too few)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
