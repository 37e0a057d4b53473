"""Joint angles from diagonals: the per-joint case ladder and chain reconstruction.

Given the prefix ``p = f_{k-1}`` and the diagonals ``L_{k-1}, L_k``, the new
link direction ``u`` must satisfy

    2 a_k (u . p) = L_k^2 - a_k^2 - |p|^2,

so the admissible directions form a circle on the unit sphere (or the whole
sphere when ``p = 0``). :func:`solve_joint` classifies which circle and
:meth:`AngleSolutionSet.sample` draws a point from it in ``(alpha, beta)``
coordinates.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from .chain import (
    TWO_PI,
    ChainPrefixState,
    CKCError,
    DegenerateError,
    DiagonalVector,
    InfeasibleError,
    JointAngles,
    LinkLengths,
    arg,
    as_links,
    endpoint_map,
)
from .diagonals import membership_nested
from .rng import RngLike, as_generator

log = logging.getLogger(__name__)

EPS_CASE = 1e-10
# slack for "beta in [0, pi]" after the mod-2pi arithmetic
_BETA_SLACK = 1e-12
_PREFIX_TOL = 1e-8


class InconsistentPrefixError(CKCError):
    """The prefix norm disagrees with the diagonal it is supposed to realise."""


class Case(str, enum.Enum):
    FULL_SPHERE = "FullSphere"
    EQUATOR = "EquatorCircle"
    LONGITUDE = "LongitudeCircle"
    SKEW = "SkewGreatCircle"
    LATITUDE = "LatitudeCircle"
    GENERIC = "GenericCircle"


def azimuth_threshold(a_k: float, l_prev: float, l_k: float, prev: ChainPrefixState) -> float:
    """Lower bound on ``sin(alpha + planar_phase)^2`` for admissible azimuths.

    May be negative (every ``alpha`` admissible) or, through rounding, exceed 1.
    """
    c2 = prev.planar_sq
    if c2 == 0.0:
        raise DegenerateError("azimuth threshold undefined: X = Y = 0")
    rhs = l_k * l_k - a_k * a_k - l_prev * l_prev
    return (rhs * rhs - 4.0 * a_k * a_k * prev.Z * prev.Z) / (4.0 * a_k * a_k * c2)


def _sin_preimage_arcs(t: float, shift: float) -> tuple[tuple[float, float], ...]:
    """Arcs ``{x : |sin(x + shift)| >= t}`` as ``(start, length)`` pairs in [0, 2pi)."""
    if t <= 0.0:
        return ((0.0, TWO_PI),)
    t = min(t, 1.0)
    s = math.asin(t)
    length = math.pi - 2.0 * s
    return (
        ((s - shift) % TWO_PI, length),
        ((math.pi + s - shift) % TWO_PI, length),
    )


def _arcs_to_intervals(arcs) -> list[tuple[float, float]]:
    out = []
    for start, length in arcs:
        end = start + length
        if end <= TWO_PI:
            out.append((start, end))
        else:
            out.append((start, TWO_PI))
            out.append((0.0, end - TWO_PI))
    return sorted(out)


def _reflect(alpha: float, beta: float) -> tuple[float, float]:
    """Same direction with ``beta`` brought back into [0, pi]."""
    if beta > TWO_PI - _BETA_SLACK:
        return alpha, 0.0
    if beta <= math.pi:
        return alpha, beta
    if beta <= math.pi + _BETA_SLACK:
        return alpha, math.pi
    return (alpha + math.pi) % TWO_PI, TWO_PI - beta


@dataclass(frozen=True)
class AngleSolutionSet:
    """All ``(alpha_k, beta_k)`` that carry the prefix to norm ``L_k``.

    ``rhs`` is ``L_k^2 - a_k^2 - |p|^2`` for the prefix ``p``; ``phase`` (the planar phase of the prefix) is set
    whenever ``X^2 + Y^2 > 0``; ``threshold`` and ``alpha_arcs`` only for the generic
    circle; ``beta0`` only for the latitude circle.
    """

    case: Case
    link: float
    target: float
    prev: ChainPrefixState
    rhs: float
    phase: float | None = None
    threshold: float | None = None
    beta0: float | None = None
    alpha_arcs: tuple[tuple[float, float], ...] = ((0.0, TWO_PI),)

    def alpha_intervals(self) -> list[tuple[float, float]]:
        """Admissible ``alpha`` as sorted sub-intervals of [0, 2pi)."""
        if self.case is Case.LONGITUDE:
            a0 = (TWO_PI - self.phase) % TWO_PI
            a1 = (math.pi - self.phase) % TWO_PI
            return sorted([(a0, a0), (a1, a1)])
        return _arcs_to_intervals(self.alpha_arcs)

    def contains_alpha(self, alpha: float, tol: float = 1e-12) -> bool:
        alpha %= TWO_PI
        for lo, hi in self.alpha_intervals():
            if lo - tol <= alpha <= hi + tol:
                return True
        # arcs touching 2pi wrap to 0
        return alpha > TWO_PI - tol and self.contains_alpha(0.0, tol)

    def _polar_phase(self, alpha: float) -> float:
        p = self.prev
        c = math.sqrt(p.planar_sq)
        s = math.sin(alpha + self.phase) if self.phase is not None else 0.0
        return arg(s * c, p.Z)

    def beta_candidates(self, alpha: float) -> list[float]:
        """Solutions of the ``beta`` equation at ``alpha`` before range selection.

        Generic circle: the two roots of ``sin(beta + polar_phase) = r`` reduced to
        [0, 2pi). Other cases return the single prescribed value.
        """
        p = self.prev
        if self.case is Case.GENERIC:
            s = math.sin(alpha + self.phase)
            w = math.sqrt(s * s * p.planar_sq + p.Z * p.Z)
            if w == 0.0:
                return [math.pi / 2]
            r = max(-1.0, min(1.0, self.rhs / (2.0 * self.link * w)))
            psi_k = arg(s * math.sqrt(p.planar_sq), p.Z)
            t = math.asin(r)
            return [(t - psi_k) % TWO_PI, (math.pi - t - psi_k) % TWO_PI]
        if self.case is Case.SKEW:
            psi_k = self._polar_phase(alpha)
            return [math.pi - psi_k if psi_k <= math.pi else TWO_PI - psi_k]
        if self.case is Case.EQUATOR:
            return [math.pi / 2]
        if self.case is Case.LATITUDE:
            return [self.beta0]
        raise ValueError(f"beta is free in case {self.case.value}")

    def solve_beta(self, alpha: float) -> tuple[float, float]:
        """Deterministic point of the set above azimuth ``alpha``.

        Of the generic roots, those in [0, pi] are preferred and the smaller
        one wins a tie. If neither lies in [0, pi] the root is reflected to the
        same direction at ``alpha + pi``, which is admissible as well.
        """
        cands = self.beta_candidates(alpha)
        inside = [b for b in cands if b <= math.pi + _BETA_SLACK or b > TWO_PI - _BETA_SLACK]
        if len(inside) == 2 and abs(inside[0] - inside[1]) > _BETA_SLACK:
            log.debug("two beta roots in [0, pi] at alpha=%r: %r", alpha, inside)
        if inside:
            return min((_reflect(alpha, b) for b in inside), key=lambda ab: ab[1])
        return _reflect(alpha, min(cands))

    def sample(self, rng: RngLike = None) -> tuple[float, float]:
        gen = as_generator(rng)
        case = self.case
        if case is Case.FULL_SPHERE:
            # uniform direction on the sphere
            return gen.random() * TWO_PI, math.acos(1.0 - 2.0 * gen.random())
        if case is Case.LONGITUDE:
            base = math.pi if gen.random() < 0.5 else TWO_PI
            alpha = (base - self.phase) % TWO_PI
            return alpha, gen.random() * math.pi
        if case is Case.GENERIC:
            total = sum(length for _, length in self.alpha_arcs)
            u = gen.random() * total
            for start, length in self.alpha_arcs:
                if u <= length:
                    break
                u -= length
            alpha = (start + min(u, length)) % TWO_PI
        else:
            alpha = gen.random() * TWO_PI
        return self.solve_beta(alpha)

    def residual(self, alpha: float, beta: float) -> float:
        """``2 a (u . p) - rhs``; zero on the set."""
        p = self.prev
        sb = math.sin(beta)
        dot = p.X * sb * math.cos(alpha) + p.Y * sb * math.sin(alpha) + p.Z * math.cos(beta)
        return 2.0 * self.link * dot - self.rhs

    def direction(self, alpha: float, beta: float) -> np.ndarray:
        sb = math.sin(beta)
        return np.array([sb * math.cos(alpha), sb * math.sin(alpha), math.cos(beta)])


def solve_joint(
    links: LinkLengths,
    k: int,
    prev: ChainPrefixState,
    l_prev: float,
    l_k: float,
    eps: float = EPS_CASE,
) -> AngleSolutionSet:
    """Classify the solution set for joint ``k`` (1-based, ``2 <= k <= n-1``).

    ``prev`` is the endpoint of the first ``k - 1`` links and must have norm
    ``l_prev``. Lengths are compared against ``eps`` times the local scale
    ``max(1, L_{k-1}, a_k, L_k)``; squared quantities against ``eps`` times
    the scale squared.
    """
    a = links.link(k)
    return _solve(a, prev, l_prev, l_k, eps)


def _solve(a: float, prev: ChainPrefixState, l_prev: float, l_k: float, eps: float) -> AngleSolutionSet:
    scale = max(1.0, l_prev, a, l_k)
    norm_sq = prev.norm_sq
    if abs(math.sqrt(norm_sq) - l_prev) > _PREFIX_TOL * scale:
        raise InconsistentPrefixError(
            f"|prefix| = {math.sqrt(norm_sq)!r} but L_(k-1) = {l_prev!r}"
        )
    tol_len = eps * scale
    rhs = l_k * l_k - a * a - norm_sq
    if norm_sq <= tol_len * tol_len:
        return AngleSolutionSet(Case.FULL_SPHERE, a, l_k, prev, rhs)
    c2 = prev.planar_sq
    planar = c2 > tol_len * tol_len
    phi_v = arg(prev.Y, prev.X) if planar else None
    if abs(rhs) <= eps * scale * scale:
        if not planar:
            return AngleSolutionSet(Case.EQUATOR, a, l_k, prev, rhs)
        if abs(prev.Z) <= tol_len:
            return AngleSolutionSet(Case.LONGITUDE, a, l_k, prev, rhs, phase=phi_v)
        return AngleSolutionSet(Case.SKEW, a, l_k, prev, rhs, phase=phi_v)
    if not planar:
        c = max(-1.0, min(1.0, rhs / (2.0 * a * prev.Z)))
        return AngleSolutionSet(Case.LATITUDE, a, l_k, prev, rhs, beta0=math.acos(c))
    d = (rhs * rhs - 4.0 * a * a * prev.Z * prev.Z) / (4.0 * a * a * c2)
    t = math.sqrt(d) if d > 0.0 else 0.0
    arcs = _sin_preimage_arcs(t, phi_v)
    return AngleSolutionSet(Case.GENERIC, a, l_k, prev, rhs, phase=phi_v, threshold=d, alpha_arcs=arcs)


def sample_from_solution(sol: AngleSolutionSet, rng: RngLike = None) -> tuple[float, float]:
    return sol.sample(rng)


def chain_relation_residual(
    a_k: float, prev: ChainPrefixState, alpha: float, beta: float, l_prev: float, l_k: float
) -> float:
    """Residual of the one-joint reduction in its expanded form.

    ``2 a (X sin b cos al + Y sin b sin al + Z cos b) + L_{k-1}^2 - (L_k^2 - a^2)``.
    """
    sb = math.sin(beta)
    lhs = 2.0 * a_k * (
        prev.X * sb * math.cos(alpha) + prev.Y * sb * math.sin(alpha) + prev.Z * math.cos(beta)
    )
    return lhs + l_prev * l_prev - (l_k * l_k - a_k * a_k)


def chain_relation_residual_phase(
    a_k: float, prev: ChainPrefixState, alpha: float, beta: float, l_prev: float, l_k: float
) -> float:
    """Same residual written with the planar and polar phase angles.

    ``2 a sin(beta + polar) sqrt(sin(alpha + planar)^2 C^2 + Z^2) + L_{k-1}^2 - (L_k^2 - a^2)``.
    Needs ``X^2 + Y^2 > 0``.
    """
    c2 = prev.planar_sq
    phi_v = arg(prev.Y, prev.X)
    s = math.sin(alpha + phi_v)
    w = math.sqrt(s * s * c2 + prev.Z * prev.Z)
    psi_k = arg(s * math.sqrt(c2), prev.Z)
    return 2.0 * a_k * math.sin(beta + psi_k) * w + l_prev * l_prev - (l_k * l_k - a_k * a_k)


@dataclass(frozen=True, eq=False)
class SphericalConfiguration:
    """An ``(n-1)``-joint angle vector whose endpoint lies on the sphere of radius ``a_n``."""

    links: LinkLengths
    angles: JointAngles
    diagonals: DiagonalVector
    cases: tuple[Case, ...]
    seed: int | None = None

    def endpoint_norm(self) -> float:
        return endpoint_map(self.links, self.angles).norm()

    def sphere_residual(self) -> float:
        """``| |f_{n-1}| - a_n |``."""
        return abs(self.endpoint_norm() - float(self.links.a[-1]))


def reconstruct(
    links: LinkLengths,
    diagonals: DiagonalVector,
    first_joint: tuple[float, float] = (0.0, math.pi / 2),
    rng: RngLike = None,
    tol: float | None = None,
    eps: float = EPS_CASE,
) -> SphericalConfiguration:
    """Angles realising ``diagonals``, one joint at a time from ``(alpha_1, beta_1)``.

    ``tol`` is the membership slack for ``diagonals`` (default ``1e-12 * sum(a)``,
    enough for round-tripped values). The joint-``k`` right-hand side uses the
    measured prefix norm, so rounding never accumulates across joints.
    """
    links = as_links(links)
    n = links.n
    tol = 1e-12 * links.total if tol is None else tol
    if not membership_nested(links, diagonals, tol=tol):
        raise InfeasibleError("diagonals are not in the diagonal space")
    seed = rng if isinstance(rng, int) else None
    gen = as_generator(rng)
    L = diagonals.full().tolist()
    L[-1] = float(links.a[-1])
    a = links.a.tolist()
    al1, be1 = first_joint
    if not 0.0 <= be1 <= math.pi:
        raise CKCError("first joint beta must lie in [0, pi]")
    alpha = [0.0] * (n - 1)
    beta = [0.0] * (n - 1)
    cases = [Case.FULL_SPHERE] * (n - 1)
    alpha[0], beta[0] = al1 % TWO_PI, be1
    state = ChainPrefixState().advance(a[0], alpha[0], beta[0])
    for j in range(1, n - 1):
        sol = _solve(a[j], state, L[j - 1], L[j], eps)
        al, be = sol.sample(gen)
        alpha[j], beta[j], cases[j] = al, be, sol.case
        state = state.advance(a[j], al, be)
    angles = JointAngles(alpha, beta)
    return SphericalConfiguration(links, angles, diagonals, tuple(cases[1:]), seed)
