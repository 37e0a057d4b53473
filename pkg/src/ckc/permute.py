"""Moving diagonals between chains whose links agree up to order.

Diagonals of ``a`` are turned into a closed polygon (angles plus the closing
link), the ``n`` edges are reordered by ``sigma`` and the diagonals of the
reordered polygon are read off. Edge vectors of a closed polygon sum to zero
in any order, so the result is feasible for the permuted chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .angles import reconstruct
from .chain import (
    TWO_PI,
    CKCError,
    DiagonalVector,
    InfeasibleError,
    JointAngles,
    LinkLengths,
    NotSphericalError,
    as_links,
    endpoint_map,
)
from .closure import AXIS_EPS, joint_positions
from .cube import cube_to_diagonals, has_three_long_links
from .diagonals import membership_nested
from .rng import RngLike, as_generator


@dataclass(frozen=True)
class LinkPermutation:
    """``sigma`` as a 0-based tuple: position ``i`` of the new chain takes link ``sigma[i]``."""

    sigma: tuple[int, ...]

    def __post_init__(self) -> None:
        sigma = tuple(int(i) for i in self.sigma)
        if sorted(sigma) != list(range(len(sigma))):
            raise ValueError(f"not a permutation of 0..{len(sigma) - 1}: {sigma}")
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def from_one_based(cls, sigma: Sequence[int]) -> LinkPermutation:
        return cls(tuple(i - 1 for i in sigma))

    @classmethod
    def identity(cls, n: int) -> LinkPermutation:
        return cls(tuple(range(n)))

    @classmethod
    def sorting(cls, links: LinkLengths, descending: bool = True) -> LinkPermutation:
        a = as_links(links).a
        order = np.argsort(-a if descending else a, kind="stable")
        return cls(tuple(int(i) for i in order))

    def __len__(self) -> int:
        return len(self.sigma)

    def apply(self, seq):
        """``(seq[sigma[0]], seq[sigma[1]], ...)``; arrays stay arrays."""
        if isinstance(seq, np.ndarray):
            return seq[list(self.sigma)]
        return type(seq)(seq[i] for i in self.sigma) if isinstance(seq, tuple) else [seq[i] for i in self.sigma]

    def then(self, other: LinkPermutation) -> LinkPermutation:
        """Apply ``self`` first, then ``other``."""
        return LinkPermutation(tuple(self.sigma[j] for j in other.sigma))

    def inverse(self) -> LinkPermutation:
        inv = [0] * len(self.sigma)
        for pos, i in enumerate(self.sigma):
            inv[i] = pos
        return LinkPermutation(tuple(inv))

    def permute_links(self, links: LinkLengths) -> LinkLengths:
        return LinkLengths(self.apply(as_links(links).a))


def closing_joint(links: LinkLengths, angles: JointAngles, tol: float = 1e-9) -> tuple[float, float]:
    """Angles of the last link, pointing from ``f_{n-1}`` back to the origin."""
    links = as_links(links)
    end = endpoint_map(links, angles)
    a_n = float(links.a[-1])
    norm = end.norm()
    if norm == 0.0 or abs(norm - a_n) > tol * a_n:
        raise NotSphericalError(f"endpoint norm {norm!r} is not a_n = {a_n!r}")
    d = -np.array(end) / norm
    planar = math.hypot(d[0], d[1])
    beta = math.atan2(planar, d[2])
    alpha = 0.0 if planar <= AXIS_EPS else math.atan2(d[1], d[0]) % TWO_PI
    return alpha, beta


@dataclass(frozen=True, eq=False)
class PermutedDiagonals:
    links: LinkLengths
    diagonals: DiagonalVector
    angles: JointAngles
    seed: int | None


def map_diagonals(
    links: LinkLengths,
    sigma: LinkPermutation,
    diagonals: DiagonalVector,
    rng: RngLike = None,
    tol: float | None = None,
) -> PermutedDiagonals:
    """Diagonals of ``a_sigma`` obtained from feasible diagonals of ``a``.

    The angle assignment is the seeded reconstruction, so the map is a
    function of ``(diagonals, rng)``. ``angles`` in the result are the ``n - 1``
    joints of the reordered chain. Raises :class:`InfeasibleError` if the
    output fails membership at slack ``tol`` (default ``1e-12 * sum(a)``).
    """
    links = as_links(links)
    if len(sigma) != links.n:
        raise ValueError("permutation size must match the number of links")
    tol = 1e-12 * links.total if tol is None else tol
    seed = rng if isinstance(rng, int) else None
    sc = reconstruct(links, diagonals, rng=as_generator(rng), tol=tol)
    al_n, be_n = closing_joint(links, sc.angles)
    alpha = np.append(sc.angles.alpha, al_n)
    beta = np.append(sc.angles.beta, be_n)
    new_links = sigma.permute_links(links)
    new_angles = JointAngles(sigma.apply(alpha)[:-1], sigma.apply(beta)[:-1])
    joints = joint_positions(new_links, new_angles)
    norms = np.linalg.norm(joints[1:], axis=1)
    values = norms[1:-1]
    out = DiagonalVector(values, new_links.a[0], new_links.a[-1])
    if not membership_nested(new_links, out, tol=tol):
        raise InfeasibleError("permuted diagonals left the diagonal space")
    return PermutedDiagonals(new_links, out, new_angles, seed)


def parametrize(links: LinkLengths, s, rng: RngLike = None) -> DiagonalVector:
    """Cube point to feasible diagonals for any ordering of a three-long-link chain.

    The cube map is applied to the descending rearrangement and the result is
    carried back to the given order with :func:`map_diagonals`.
    """
    links = as_links(links)
    if not has_three_long_links(links):
        raise CKCError("chain does not have three long links")
    sort = LinkPermutation.sorting(links)
    ordered = sort.permute_links(links)
    L = cube_to_diagonals(ordered, np.asarray(s, dtype=float))
    dv = DiagonalVector.for_links(ordered, L)
    return map_diagonals(ordered, sort.inverse(), dv, rng).diagonals

