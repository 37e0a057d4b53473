"""Chain instances, joint angles, the endpoint map and the trigonometric helpers.

Link and joint indices follow the 1-based convention used throughout the
package docs (``a_1 .. a_n``); arrays are stored 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


class CKCError(ValueError):
    """Base class for domain errors raised by this package."""


class DegenerateError(CKCError):
    """An angle helper was evaluated at a point where it is undefined."""


class NonClosableError(CKCError):
    """The link lengths admit no closed configuration."""


class InfeasibleError(CKCError):
    """Diagonals (or a partial choice of them) lie outside the diagonal space."""


class NotSphericalError(CKCError):
    """An open chain does not end on the sphere of radius ``a_n``."""


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class LinkLengths:
    """Positive link lengths ``a_1 .. a_n`` of a closable chain (``n >= 3``)."""

    a: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.a, dtype=float).ravel()
        if a.size < 3:
            raise CKCError(f"need at least 3 links, got {a.size}")
        if not np.all(np.isfinite(a)) or np.any(a <= 0):
            raise CKCError("link lengths must be finite and positive")
        total = math.fsum(a)
        if 2.0 * a.max() > total:
            raise NonClosableError(
                f"non-closable: 2*max(a) = {2.0 * a.max():g} > sum(a) = {total:g}"
            )
        object.__setattr__(self, "a", _frozen(a))
        object.__setattr__(self, "_total", total)

    @classmethod
    def unit(cls, n: int) -> LinkLengths:
        return cls(np.ones(n))

    @property
    def n(self) -> int:
        return int(self.a.size)

    @property
    def total(self) -> float:
        return self._total  # type: ignore[attr-defined]

    def __len__(self) -> int:
        return self.n

    def link(self, i: int) -> float:
        """Length ``a_i`` with 1-based ``i``."""
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return float(self.a[i - 1])

    def sum_squares(self, k: int) -> float:
        """``S_k``, the sum of squares of the first ``k`` links."""
        return math.fsum(self.a[:k] ** 2)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinkLengths) and np.array_equal(self.a, other.a)

    def __hash__(self) -> int:
        return hash(self.a.tobytes())

    def __repr__(self) -> str:
        if self.n <= 12:
            return f"LinkLengths({self.a.tolist()})"
        return f"LinkLengths(n={self.n}, total={self.total:g})"


@dataclass(frozen=True, eq=False)
class JointAngles:
    """Azimuths ``alpha`` in [0, 2pi) and polar angles ``beta`` in [0, pi].

    ``alpha`` is reduced mod 2pi on construction. ``beta`` outside [0, pi] is
    rejected: user input is never silently reflected.
    """

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self) -> None:
        alpha = np.array(self.alpha, dtype=float).ravel()
        beta = np.array(self.beta, dtype=float).ravel()
        if alpha.shape != beta.shape:
            raise CKCError("alpha and beta must have equal length")
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(beta))):
            raise CKCError("angles must be finite")
        if np.any(beta < 0.0) or np.any(beta > math.pi):
            raise CKCError("beta must lie in [0, pi]")
        alpha = np.mod(alpha, TWO_PI)
        # np.mod can round tiny negatives up to exactly 2pi
        alpha[alpha >= TWO_PI] = 0.0
        object.__setattr__(self, "alpha", _frozen(alpha))
        object.__setattr__(self, "beta", _frozen(beta))

    def __len__(self) -> int:
        return int(self.alpha.size)

    def directions(self) -> np.ndarray:
        """Unit link directions, shape ``(k, 3)``."""
        return unit_directions(self.alpha, self.beta)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, JointAngles)
            and np.array_equal(self.alpha, other.alpha)
            and np.array_equal(self.beta, other.beta)
        )

    __hash__ = None  # type: ignore[assignment]


class Point3(NamedTuple):
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.hypot(self.x, self.y, self.z)


def _two_sum(s: float, c: float, v: float) -> tuple[float, float]:
    # Neumaier step: returns the new sum and updated compensation
    t = s + v
    if abs(s) >= abs(v):
        c += (s - t) + v
    else:
        c += (v - t) + s
    return t, c


@dataclass(frozen=True)
class ChainPrefixState:
    """Endpoint ``(X, Y, Z)`` of the first ``k`` links.

    The compensation terms carry the rounding error of the running sums so
    that long chains can be advanced one link at a time without drift.
    """

    X: float = 0.0
    Y: float = 0.0
    Z: float = 0.0
    k: int = 0
    cx: float = field(default=0.0, repr=False, compare=False)
    cy: float = field(default=0.0, repr=False, compare=False)
    cz: float = field(default=0.0, repr=False, compare=False)

    @property
    def norm_sq(self) -> float:
        return self.X * self.X + self.Y * self.Y + self.Z * self.Z

    @property
    def norm(self) -> float:
        return math.hypot(self.X, self.Y, self.Z)

    @property
    def planar_sq(self) -> float:
        """``X^2 + Y^2``."""
        return self.X * self.X + self.Y * self.Y

    def point(self) -> Point3:
        return Point3(self.X, self.Y, self.Z)

    def advance(self, a: float, alpha: float, beta: float) -> ChainPrefixState:
        """Attach one more link of length ``a`` pointing along ``(alpha, beta)``."""
        sb = math.sin(beta)
        sx, cx = _two_sum(self.X, self.cx, a * sb * math.cos(alpha))
        sy, cy = _two_sum(self.Y, self.cy, a * sb * math.sin(alpha))
        sz, cz = _two_sum(self.Z, self.cz, a * math.cos(beta))
        # store the compensated value, keep the residual for the next step
        X, Y, Z = sx + cx, sy + cy, sz + cz
        return ChainPrefixState(X, Y, Z, self.k + 1, cx - (X - sx), cy - (Y - sy), cz - (Z - sz))


def arg(a: float, b: float) -> float:
    """Oriented angle of the point ``(a, b)`` from the positive x-axis, in [0, 2pi).

    With this angle ``a*sin(x) + b*cos(x) == hypot(a, b) * sin(x + arg(a, b))``.
    """
    if a == 0.0 and b == 0.0:
        raise DegenerateError("arg(0, 0) is undefined")
    t = math.atan2(b, a)
    if t < 0.0:
        t += TWO_PI
        if t >= TWO_PI:
            t = 0.0
    return t


def unit_directions(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    sb = np.sin(beta)
    return np.stack([sb * np.cos(alpha), sb * np.sin(alpha), np.cos(beta)], axis=-1)


def link_vectors(links: LinkLengths, angles: JointAngles, k: int | None = None) -> np.ndarray:
    """Scaled link vectors ``a_j * u(alpha_j, beta_j)`` for ``j <= k``."""
    k = len(angles) if k is None else k
    if not 0 <= k <= len(angles) or len(angles) > links.n:
        raise CKCError(f"need k <= len(angles) <= n, got k={k}, len={len(angles)}, n={links.n}")
    return links.a[:k, None] * unit_directions(angles.alpha[:k], angles.beta[:k])


def endpoint_map(links: LinkLengths, angles: JointAngles, k: int | None = None) -> Point3:
    """Position of joint ``k + 1``: the sum of the first ``k`` link vectors.

    Each component is summed with ``math.fsum``, so the result is the correctly
    rounded value of the exact sum of the (rounded) link vectors.
    """
    v = link_vectors(links, angles, k)
    return Point3(math.fsum(v[:, 0]), math.fsum(v[:, 1]), math.fsum(v[:, 2]))


def prefix_sums(links: LinkLengths, angles: JointAngles) -> list[ChainPrefixState]:
    """Prefix states for ``k = 1 .. len(angles)``."""
    if len(angles) > links.n:
        raise CKCError("more angles than links")
    state = ChainPrefixState()
    out = []
    for a, al, be in zip(links.a.tolist(), angles.alpha.tolist(), angles.beta.tolist()):
        state = state.advance(a, al, be)
        out.append(state)
    return out


def planar_phase(state: ChainPrefixState) -> float:
    """``arg(Y, X)`` of a prefix; then ``X cos(al) + Y sin(al) = C sin(al + planar_phase)``."""
    if state.X == 0.0 and state.Y == 0.0:
        raise DegenerateError("planar phase undefined: X = Y = 0")
    return arg(state.Y, state.X)


def polar_phase(alpha_k: float, prev: ChainPrefixState) -> float:
    """``arg(sin(alpha_k + planar_phase(prev)) * C, Z)`` with ``C = hypot(X, Y)`` of ``prev``.

    A vanishing planar part gives ``arg(0, Z)``; only ``X = Y = Z = 0`` is degenerate.
    """
    if prev.X == 0.0 and prev.Y == 0.0:
        return arg(0.0, prev.Z)
    c = math.hypot(prev.X, prev.Y)
    return arg(math.sin(alpha_k + planar_phase(prev)) * c, prev.Z)


class DiagonalVector:
    """Diagonals ``L_2 .. L_{n-2}`` with the end values ``L_1`` and ``L_{n-1}``.

    ``L_1 = a_1`` always; ``L_{n-1}`` is ``a_n`` for diagonals in the diagonal
    space but may differ when measured from an arbitrary open chain.
    """

    __slots__ = ("values", "first", "last")

    def __init__(self, values: Iterable[float], first: float, last: float):
        v = np.array(values, dtype=float).ravel()
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise CKCError("diagonals must be finite and non-negative")
        self.values = _frozen(v)
        self.first = float(first)
        self.last = float(last)

    @classmethod
    def for_links(cls, links: LinkLengths, values: Iterable[float]) -> DiagonalVector:
        dv = cls(values, links.a[0], links.a[-1])
        if dv.values.size != links.n - 3:
            raise CKCError(f"expected {links.n - 3} variable diagonals, got {dv.values.size}")
        return dv

    @property
    def n(self) -> int:
        return int(self.values.size) + 3

    def full(self) -> np.ndarray:
        """``L_1 .. L_{n-1}`` as one array."""
        return np.concatenate([[self.first], self.values, [self.last]])

    def at(self, k: int) -> float:
        """``L_k`` with 1-based ``k`` in ``1 .. n-1``."""
        if k == 1:
            return self.first
        if k == self.n - 1:
            return self.last
        if 2 <= k <= self.n - 2:
            return float(self.values[k - 2])
        raise IndexError(k)

    def __len__(self) -> int:
        return int(self.values.size)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DiagonalVector)
            and self.first == other.first
            and self.last == other.last
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = self.values.tolist() if self.values.size <= 10 else f"<{self.values.size} values>"
        return f"DiagonalVector({body}, first={self.first!r}, last={self.last!r})"


def diagonal_lengths(links: LinkLengths, angles: JointAngles) -> DiagonalVector:
    """Prefix norms ``L_k = |f_k|`` of an ``(n-1)``-link angle vector."""
    if len(angles) != links.n - 1:
        raise CKCError(f"need {links.n - 1} joints, got {len(angles)}")
    states = prefix_sums(links, angles)
    norms = [s.norm for s in states]
    return DiagonalVector(norms[1:-1], links.a[0], norms[-1])


def squared_norm_expanded(links: LinkLengths, angles: JointAngles, k: int) -> float:
    """``|f_k|^2`` through the trigonometric double-sum expansion.

    Quadratic in ``k``; meant as an independent cross-check for small chains.
    """
    a = links.a[:k]
    al = angles.alpha[:k]
    be = angles.beta[:k]
    i, j = np.triu_indices(k, 1)
    w = a[i] * a[j]
    cross = w * (np.sin(be[i]) * np.sin(be[j]) * np.cos(al[i] - al[j]) + np.cos(be[i]) * np.cos(be[j]))
    return math.fsum(2.0 * cross) + math.fsum(a**2)


def as_links(value: LinkLengths | Sequence[float] | np.ndarray) -> LinkLengths:
    return value if isinstance(value, LinkLengths) else LinkLengths(np.asarray(value, dtype=float))
