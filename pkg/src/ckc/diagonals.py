"""Diagonal space: reach bounds, nested intervals, membership and sampling.

A diagonal vector is feasible when, walking backwards from ``L_{n-1} = a_n``,
each ``L_{i}`` lies in ``[|L_{i+1} - a_{i+1}|, L_{i+1} + a_{i+1}]`` (the
polytope P) and in the reach interval ``[0 v Rmin_i, Rmax_i]`` (the cuboid Q).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import DiagonalVector, InfeasibleError, LinkLengths, as_links
from .rng import RngLike, as_generator


@dataclass(frozen=True)
class ReachBounds:
    """``Rmin_k`` and ``Rmax_k`` for ``k = 1 .. n`` (stored at position ``k - 1``).

    ``r_min`` is kept raw (it may be negative); :meth:`lower` gives ``0 v Rmin_k``.
    """

    r_min: np.ndarray
    r_max: np.ndarray

    def rmin(self, k: int) -> float:
        return float(self.r_min[k - 1])

    def rmax(self, k: int) -> float:
        return float(self.r_max[k - 1])

    def lower(self, k: int) -> float:
        return max(0.0, float(self.r_min[k - 1]))

    @property
    def clamped_min(self) -> np.ndarray:
        return np.maximum(self.r_min, 0.0)


def reach_bounds(links: LinkLengths) -> ReachBounds:
    """Running sum and running max give both bounds in one pass."""
    links = as_links(links)
    r_max = np.cumsum(links.a)
    r_min = 2.0 * np.maximum.accumulate(links.a) - r_max
    r_min.setflags(write=False)
    r_max.setflags(write=False)
    return ReachBounds(r_min, r_max)


def interval_at_step(
    links: LinkLengths, l_next: float, k: int, bounds: ReachBounds | None = None
) -> tuple[float, float]:
    """Feasible interval for ``L_{n-k-1}`` once ``L_{n-k} = l_next`` is fixed.

    ``k`` runs from 1 (choosing ``L_{n-2}`` from ``L_{n-1} = a_n``) to ``n - 3``.
    Raises :class:`InfeasibleError` if the intersection is empty.
    """
    n = links.n
    if not 1 <= k <= n - 3:
        raise IndexError(f"step k must be in 1..{n - 3}, got {k}")
    bounds = reach_bounds(links) if bounds is None else bounds
    a = float(links.a[n - k - 1])
    idx = n - k - 1
    lo = max(abs(l_next - a), bounds.lower(idx))
    hi = min(l_next + a, bounds.rmax(idx))
    if lo > hi:
        raise InfeasibleError(
            f"empty interval for L_{idx}: [{lo!r}, {hi!r}] (L_{n - k} = {l_next!r})"
        )
    return lo, hi


def full_diagonals(links: LinkLengths, diagonals) -> np.ndarray:
    """``L_1 .. L_{n-1}`` from a :class:`DiagonalVector` or an array.

    Arrays whose last axis has ``n - 3`` entries are padded with the fixed
    ends ``a_1`` and ``a_n``; arrays with ``n - 1`` entries are taken as is.
    """
    n = links.n
    if isinstance(diagonals, DiagonalVector):
        return diagonals.full()
    arr = np.asarray(diagonals, dtype=float)
    if arr.shape[-1] == n - 1:
        return arr
    if arr.shape[-1] == n - 3:
        shape = arr.shape[:-1] + (1,)
        return np.concatenate(
            [np.full(shape, links.a[0]), arr, np.full(shape, links.a[-1])], axis=-1
        )
    raise ValueError(f"expected last axis of length {n - 3} or {n - 1}, got {arr.shape[-1]}")


def membership_nested(links: LinkLengths, diagonals, tol: float = 0.0):
    """Membership in the diagonal space through nested intervals plus reach bounds.

    Checks ``|L_k - a_k| <= L_{k-1} <= L_k + a_k`` for ``3 <= k <= n-1`` and
    ``0 v Rmin_k <= L_k <= Rmax_k`` for ``2 <= k <= n-1``, with the ends
    ``L_1 = a_1`` and ``L_{n-1} = a_n``. Vectorised over
    leading axes; returns a bool or a bool array.
    """
    links = as_links(links)
    L = full_diagonals(links, diagonals)
    a = links.a
    b = reach_bounds(links)
    n = links.n
    # position j holds L_{j+1}
    Lk = L[..., 2 : n - 1]  # L_3 .. L_{n-1}
    Lkm1 = L[..., 1 : n - 2]  # L_2 .. L_{n-2}
    ak = a[2 : n - 1]  # a_3 .. a_{n-1}
    nested = (np.abs(Lk - ak) - tol <= Lkm1) & (Lkm1 <= Lk + ak + tol)
    Lq = L[..., 1 : n - 1]  # L_2 .. L_{n-1}
    reach = (b.clamped_min[1 : n - 1] - tol <= Lq) & (Lq <= b.r_max[1 : n - 1] + tol)
    ok = np.all(nested, axis=-1) & np.all(reach, axis=-1) & np.all(L >= -tol, axis=-1)
    # only matters for full-length input; padded arrays carry the exact ends
    ends = (np.abs(L[..., 0] - a[0]) <= tol) & (np.abs(L[..., -1] - a[-1]) <= tol)
    ok = ok & ends
    return bool(ok) if np.ndim(ok) == 0 else ok


def membership_triangle(links: LinkLengths, diagonals, tol: float = 0.0):
    """Membership through triangle inequalities on consecutive diagonals.

    Checks ``|L_{k-1} - a_k| <= L_k <= L_{k-1} + a_k`` and
    ``a_k <= L_k + L_{k-1}`` for ``2 <= k <= n-1`` with ``L_1 = a_1`` and
    ``L_{n-1} = a_n``.
    """
    links = as_links(links)
    L = full_diagonals(links, diagonals)
    a = links.a
    n = links.n
    Lk = L[..., 1 : n - 1]  # L_2 .. L_{n-1}
    Lkm1 = L[..., 0 : n - 2]  # L_1 .. L_{n-2}
    ak = a[1 : n - 1]  # a_2 .. a_{n-1}
    ok = (
        (np.abs(Lkm1 - ak) - tol <= Lk)
        & (Lk <= Lkm1 + ak + tol)
        & (ak <= Lk + Lkm1 + tol)
    )
    ok = np.all(ok, axis=-1) & np.all(L >= -tol, axis=-1)
    ends = (np.abs(L[..., 0] - a[0]) <= tol) & (np.abs(L[..., -1] - a[-1]) <= tol)
    ok = ok & ends
    return bool(ok) if np.ndim(ok) == 0 else ok


@dataclass(frozen=True)
class PolytopeStep:
    """``|L_{index+1} - link| <= L_index <= L_{index+1} + link``."""

    index: int
    link: float

    def bounds(self, l_next):
        return np.abs(l_next - self.link), l_next + self.link

    def describe(self) -> str:
        a = _fmt(self.link)
        return f"|L_{self.index + 1}-{a}| <= L_{self.index} <= L_{self.index + 1}+{a}"


@dataclass(frozen=True)
class DiagonalSpace:
    """``DS(a) = P(a) ∩ Q(a)``, with both factors ordered by step ``k = 1 .. n-3``.

    ``steps[k-1]`` constrains ``L_{n-k-1}``; ``cuboid_raw[k-1]`` and
    ``cuboid[k-1]`` are the raw and clamped reach intervals for the same diagonal.
    """

    links: LinkLengths
    steps: tuple[PolytopeStep, ...]
    cuboid_raw: tuple[tuple[float, float], ...]
    cuboid: tuple[tuple[float, float], ...]

    @property
    def first_interval(self) -> tuple[float, float]:
        """Numeric P-interval of ``L_{n-2}`` (its upper neighbour is ``a_n``)."""
        lo, hi = self.steps[0].bounds(float(self.links.a[-1]))
        return float(lo), float(hi)

    def _by_step(self, diagonals) -> tuple[np.ndarray, np.ndarray]:
        L = full_diagonals(self.links, diagonals)
        n = self.links.n
        # column k-1 holds L_{n-k-1}, its neighbour L_{n-k}
        cur = L[..., n - 3 : 0 : -1]
        nxt = L[..., n - 2 : 1 : -1]
        return cur, nxt

    def in_polytope(self, diagonals, tol: float = 0.0):
        cur, nxt = self._by_step(diagonals)
        link = np.array([s.link for s in self.steps])
        ok = (np.abs(nxt - link) - tol <= cur) & (cur <= nxt + link + tol) & (cur >= -tol)
        ok = np.all(ok, axis=-1)
        return bool(ok) if np.ndim(ok) == 0 else ok

    def in_cuboid(self, diagonals, tol: float = 0.0):
        cur, _ = self._by_step(diagonals)
        q = np.array(self.cuboid)
        ok = np.all((q[:, 0] - tol <= cur) & (cur <= q[:, 1] + tol), axis=-1)
        return bool(ok) if np.ndim(ok) == 0 else ok

    def contains(self, diagonals, tol: float = 0.0):
        p = self.in_polytope(diagonals, tol)
        q = self.in_cuboid(diagonals, tol)
        return p & q

    def describe(self) -> str:
        n = self.links.n
        lines = ["links: (" + ", ".join(_fmt(x) for x in self.links.a.tolist()) + ")"]
        lo, hi = self.first_interval
        p = [f"{_fmt(lo)} <= L_{n - 2} <= {_fmt(hi)}"] + [s.describe() for s in self.steps[1:]]
        lines.append("P: {" + ", ".join(p) + "}")
        q_raw = " x ".join(f"[{_fmt(l)},{_fmt(h)}]" for l, h in self.cuboid_raw)
        q = " x ".join(f"[{_fmt(l)},{_fmt(h)}]" for l, h in self.cuboid)
        order = ", ".join(f"L_{n - k - 1}" for k in range(1, n - 2))
        lines.append(f"Q ({order}): raw {q_raw}; clamped {q}")
        return "\n".join(lines)


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def decompose(links: LinkLengths) -> DiagonalSpace:
    links = as_links(links)
    n = links.n
    b = reach_bounds(links)
    steps, raw, clamped = [], [], []
    for k in range(1, n - 2):
        idx = n - k - 1
        steps.append(PolytopeStep(idx, float(links.a[idx])))
        raw.append((b.rmin(idx), b.rmax(idx)))
        clamped.append((b.lower(idx), b.rmax(idx)))
    return DiagonalSpace(links, tuple(steps), tuple(raw), tuple(clamped))


def sample_diagonals(links: LinkLengths, rng: RngLike = None) -> DiagonalVector:
    """Backward sequential sampling, each ``L_{n-k-1}`` uniform on its interval.

    The result is feasible by construction (no rounding slack needed): every
    value is clipped into the interval its own membership test recomputes.
    Uniform per step, not uniform over the diagonal space as a set.
    """
    links = as_links(links)
    gen = as_generator(rng)
    n = links.n
    if n == 3:
        return DiagonalVector.for_links(links, [])
    a = links.a.tolist()
    b = reach_bounds(links)
    lower = b.clamped_min.tolist()
    upper = b.r_max.tolist()
    u = gen.random(n - 3).tolist()
    out = [0.0] * (n - 3)
    l_next = a[-1]
    for k in range(1, n - 2):
        idx = n - k - 1
        ak = a[idx]
        lo = max(abs(l_next - ak), lower[idx - 1])
        hi = min(l_next + ak, upper[idx - 1])
        if lo > hi:
            raise InfeasibleError(f"empty interval for L_{idx} during sampling")
        val = lo + u[k - 1] * (hi - lo)
        val = hi if val > hi else (lo if val < lo else val)
        out[idx - 2] = val
        l_next = val
    return DiagonalVector.for_links(links, out)


def bounding_box(links: LinkLengths) -> np.ndarray:
    """Axis-aligned box around DS, shape ``(n-3, 2)`` indexed by ``L_2 .. L_{n-2}``.

    Obtained by propagating interval ranges backwards through P and clipping
    with Q; tighter than Q alone, which keeps Monte-Carlo estimates cheap.
    """
    links = as_links(links)
    n = links.n
    b = reach_bounds(links)
    box = np.zeros((n - 3, 2))
    lo_next = hi_next = float(links.a[-1])
    for k in range(1, n - 2):
        idx = n - k - 1
        a = float(links.a[idx])
        if lo_next <= a <= hi_next:
            lo = 0.0
        else:
            lo = min(abs(lo_next - a), abs(hi_next - a))
        hi = hi_next + a
        lo, hi = max(lo, b.lower(idx)), min(hi, b.rmax(idx))
        box[idx - 2] = lo, hi
        lo_next, hi_next = lo, hi
    return box


def monte_carlo_volume(
    links: LinkLengths, n_points: int = 1_000_000, rng: RngLike = None, chunk: int = 250_000
) -> float:
    """Volume of DS by uniform sampling of :func:`bounding_box`."""
    links = as_links(links)
    gen = as_generator(rng)
    box = bounding_box(links)
    width = box[:, 1] - box[:, 0]
    hits = 0
    left = n_points
    while left > 0:
        m = min(chunk, left)
        pts = box[:, 0] + gen.random((m, box.shape[0])) * width
        hits += int(np.count_nonzero(membership_nested(links, pts)))
        left -= m
    return float(np.prod(width)) * hits / n_points
