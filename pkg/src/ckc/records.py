"""JSON configuration records and CSV tables.

Floats are written with 17 significant digits so every value round-trips.
One record per line (JSON Lines); a file with a single record is plain JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Sequence

import numpy as np

from .chain import JointAngles, LinkLengths
from .sampling import SampledConfiguration

RECORD_FIELDS = ("links", "alpha", "beta", "joints", "diagonals", "residual", "cases", "seed")


def _num(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x!r}")
    return format(x, ".17g")


def dumps(obj: Any) -> str:
    """Compact JSON with ``.17g`` floats; keys keep insertion order."""
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return json.dumps(str(obj))


def configuration_record(sample: SampledConfiguration, seed: int | None) -> dict:
    closed = sample.closed
    return {
        "links": closed.links.a,
        "alpha": closed.angles.alpha,
        "beta": closed.angles.beta,
        "joints": closed.joints,
        "diagonals": sample.spherical.diagonals.values,
        "residual": closed.residual,
        "cases": [c.value for c in sample.spherical.cases],
        "seed": seed,
    }


class RecordError(ValueError):
    """A record could not be parsed into links and angles."""


def parse_record(text: str) -> tuple[LinkLengths, JointAngles, dict]:
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RecordError(f"malformed JSON: {exc}") from exc
    if not isinstance(rec, dict):
        raise RecordError("record must be a JSON object")
    missing = [k for k in ("links", "alpha", "beta") if k not in rec]
    if missing:
        raise RecordError(f"record lacks fields: {', '.join(missing)}")
    try:
        links = LinkLengths(np.asarray(rec["links"], dtype=float))
        angles = JointAngles(rec["alpha"], rec["beta"])
    except (TypeError, ValueError) as exc:
        raise RecordError(str(exc)) from exc
    if len(angles) != links.n - 1:
        raise RecordError(f"expected {links.n - 1} joint angles, got {len(angles)}")
    return links, angles, rec


def iter_records(text: str) -> Iterable[str]:
    """Split JSON Lines; a pretty-printed single object is accepted too."""
    stripped = text.strip()
    if not stripped:
        raise RecordError("empty input")
    lines = [ln for ln in stripped.splitlines() if ln.strip()]
    if len(lines) > 1 and not all(ln.lstrip().startswith("{") for ln in lines):
        return [stripped]
    return lines


def write_csv(header: Sequence[str] | None, rows: Iterable[Sequence[Any]]) -> str:
    """CSV text; ``header=None`` for continuation chunks."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header is not None:
        w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()
