"""Three long links: the cosine-term transform and the cube map.

U-vectors and cube points are plain arrays whose position ``i`` holds the
entry with index ``i + 2`` (``U_2 .. U_{n-2}``, ``s_2 .. s_{n-2}``). Every
function is vectorised over leading axes.

With ``L_{i}^2 = U_i + a_{i+1}^2 + L_{i+1}^2`` the nested intervals of P
become ``|U_i| <= T_{i+1} = 2 a_{i+1} L_{i+1}``, where ``L_{i+1}`` is itself
a function of the U entries above ``i``. The cube map scales each bound by a cube
coordinate, walking from ``U_{n-2}`` down to ``U_2``.
"""

from __future__ import annotations

import numpy as np

from .chain import CKCError, DiagonalVector, LinkLengths, as_links
from .diagonals import decompose, membership_nested
from .rng import RngLike, as_generator


class HypothesisError(CKCError):
    """The chain does not satisfy the three-long-links hypothesis."""


class ZeroBoundError(CKCError):
    """Some bound T vanished, so the cube coordinate there is not determined."""


def long_links(links: LinkLengths, inclusive: bool = False) -> tuple[bool, tuple[int, ...]]:
    """Whether the three largest links pairwise exceed half the total length.

    Returns the flag and the 1-based indices of those three links. With
    ``inclusive`` the pairwise sums only need to reach ``L/2``.
    """
    links = as_links(links)
    order = np.argsort(-links.a, kind="stable")[:3]
    top = links.a[order]
    half = links.total / 2.0
    # the two smaller of the three give the tightest pair
    pair = top[1] + top[2]
    ok = pair >= half if inclusive else pair > half
    return bool(ok), tuple(int(i) + 1 for i in order)


def has_three_long_links(links: LinkLengths, inclusive: bool = False) -> bool:
    return long_links(links, inclusive)[0]


def is_descending(links: LinkLengths) -> bool:
    a = as_links(links).a
    return bool(np.all(a[:-1] >= a[1:]))


def _radicand_tol(links: LinkLengths) -> float:
    return 1e-12 * links.total**2


def cosine_term_bound(links: LinkLengths, k: int, terms_suffix) -> np.ndarray | float:
    """``T_{n-k} = 2 a_{n-k} sqrt(sum U_{n-k..n-2} + sum a_{n-k+1..n}^2)``.

    ``terms_suffix`` holds ``U_{n-k} .. U_{n-2}`` (``k - 1`` entries; empty for
    ``k = 1``, giving ``2 a_n a_{n-1}``). Radicands down to ``-1e-12 sum(a)^2``
    are clamped to zero; anything lower raises ``ValueError``.
    """
    links = as_links(links)
    n = links.n
    a = links.a
    u = np.asarray(terms_suffix, dtype=float)
    if u.shape[-1:] != (k - 1,) and not (k == 1 and u.size == 0):
        raise ValueError(f"terms_suffix must hold {k - 1} entries")
    usum = u.sum(axis=-1) if u.size else 0.0
    rad = usum + np.sum(a[n - k :] ** 2)
    if np.any(rad < -_radicand_tol(links)):
        raise ValueError("negative radicand: U suffix is infeasible")
    out = 2.0 * a[n - k - 1] * np.sqrt(np.maximum(rad, 0.0))
    return float(out) if np.ndim(out) == 0 else out


def to_cosine_terms(links: LinkLengths, diagonals) -> np.ndarray:
    """``U_i = L_i^2 - a_{i+1}^2 - L_{i+1}^2`` for ``i = 2 .. n-2``."""
    links = as_links(links)
    n = links.n
    if isinstance(diagonals, DiagonalVector):
        L = diagonals.values
    else:
        L = np.asarray(diagonals, dtype=float)
    ext = np.concatenate([L, np.full(L.shape[:-1] + (1,), links.a[-1])], axis=-1)
    return ext[..., :-1] ** 2 - links.a[2 : n - 1] ** 2 - ext[..., 1:] ** 2


def from_cosine_terms(links: LinkLengths, u) -> np.ndarray:
    """Inverse of :func:`to_cosine_terms`: ``L_i = sqrt(U_i + a_{i+1}^2 + L_{i+1}^2)`` from ``L_{n-1} = a_n``.

    Returns ``L_2 .. L_{n-2}``. Raises ``ValueError`` when a square would be
    negative beyond the clamp tolerance.
    """
    links = as_links(links)
    n = links.n
    a = links.a
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    tol = _radicand_tol(links)
    sq_next = np.full(u.shape[:-1], a[-1] ** 2)
    for i in range(n - 2, 1, -1):
        sq = u[..., i - 2] + a[i] ** 2 + sq_next
        if np.any(sq < -tol):
            raise ValueError(f"negative L_{i}^2: U is infeasible")
        sq = np.maximum(sq, 0.0)
        out[..., i - 2] = np.sqrt(sq)
        sq_next = sq
    return out


def _check_hypothesis(links: LinkLengths, force: bool, inclusive: bool) -> None:
    if force:
        return
    if not has_three_long_links(links, inclusive):
        raise HypothesisError("chain does not have three long links")
    if not is_descending(links):
        raise HypothesisError(
            "links must be in descending order; map unordered chains with ckc.permute"
        )


def cube_map(links: LinkLengths, s, force: bool = False, inclusive: bool = False) -> np.ndarray:
    """Cube point(s) ``s in [-1, 1]^(n-3)`` to U-vector(s).

    ``U_{n-2} = s_{n-2} T_{n-1}`` and then ``U_i = s_i T_{i+1}(U_{i+1}, ..., U_{n-2})``.
    The image lies in the diagonal space only for descending chains with three
    long links; ``force`` skips that check.
    """
    links = as_links(links)
    _check_hypothesis(links, force, inclusive)
    n = links.n
    a = links.a
    s = np.asarray(s, dtype=float)
    if s.shape[-1] != n - 3:
        raise ValueError(f"cube point needs {n - 3} coordinates")
    if np.any(np.abs(s) > 1.0):
        raise ValueError("cube coordinates must lie in [-1, 1]")
    u = np.empty_like(s)
    # L_{i+1}^2 as the recursion descends; starts at L_{n-1}^2 = a_n^2
    sq_next = np.full(s.shape[:-1], a[-1] ** 2)
    for i in range(n - 2, 1, -1):
        t = 2.0 * a[i] * np.sqrt(np.maximum(sq_next, 0.0))
        u[..., i - 2] = s[..., i - 2] * t
        sq_next = u[..., i - 2] + a[i] ** 2 + sq_next
    return u


def cube_map_inverse(links: LinkLengths, u, zero_tol: float = 0.0) -> np.ndarray:
    """Cube coordinates ``s_i = U_i / T_{i+1}``; raises :class:`ZeroBoundError` if some ``T <= zero_tol``."""
    links = as_links(links)
    n = links.n
    a = links.a
    u = np.asarray(u, dtype=float)
    s = np.empty_like(u)
    sq_next = np.full(u.shape[:-1], a[-1] ** 2)
    for i in range(n - 2, 1, -1):
        t = 2.0 * a[i] * np.sqrt(np.maximum(sq_next, 0.0))
        if np.any(t <= zero_tol):
            raise ZeroBoundError(f"T_{i + 1} vanishes; s_{i} is undetermined")
        s[..., i - 2] = u[..., i - 2] / t
        sq_next = u[..., i - 2] + a[i] ** 2 + sq_next
    return s


def cube_to_diagonals(links: LinkLengths, s, force: bool = False) -> np.ndarray:
    """Cube point(s) straight to diagonals ``L_2 .. L_{n-2}``."""
    return from_cosine_terms(links, cube_map(links, s, force=force))


def sample_polytope(links: LinkLengths, count: int, rng: RngLike = None) -> np.ndarray:
    """``count`` points of P by backward nested-interval sampling (Q ignored)."""
    links = as_links(links)
    gen = as_generator(rng)
    n = links.n
    a = links.a
    out = np.empty((count, n - 3))
    nxt = np.full(count, a[-1])
    for i in range(n - 2, 1, -1):
        lo = np.abs(nxt - a[i])
        hi = nxt + a[i]
        cur = lo + gen.random(count) * (hi - lo)
        out[:, i - 2] = np.minimum(np.maximum(cur, lo), hi)
        nxt = out[:, i - 2]
    return out


def containment_check(
    links: LinkLengths,
    samples: int | np.ndarray = 100_000,
    rng: RngLike = None,
    force: bool = False,
    inclusive: bool = False,
) -> int:
    """Number of polytope points that leave the reach cuboid Q.

    ``samples`` is either a count (points drawn with :func:`sample_polytope`)
    or an explicit array of diagonals. Requires three long links unless
    ``force``; ordering is not required, so unordered chains can show violations.
    """
    links = as_links(links)
    if not force and not has_three_long_links(links, inclusive):
        raise HypothesisError("chain does not have three long links")
    pts = sample_polytope(links, samples, rng) if np.ndim(samples) == 0 else np.asarray(samples)
    ds = decompose(links)
    return int(np.count_nonzero(~ds.in_cuboid(pts)))


def cube_membership(links: LinkLengths, s, tol: float | None = None, force: bool = False) -> np.ndarray:
    """Diagonal-space membership of the diagonals of a batch of cube points."""
    links = as_links(links)
    tol = 1e-12 * links.total if tol is None else tol
    return membership_nested(links, cube_to_diagonals(links, s, force=force), tol=tol)
