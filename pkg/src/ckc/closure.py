"""Rotating spherical configurations onto the closure condition, and checking it."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angles import SphericalConfiguration
from .chain import (
    TWO_PI,
    DiagonalVector,
    JointAngles,
    LinkLengths,
    NotSphericalError,
    Point3,
    as_links,
    diagonal_lengths,
    endpoint_map,
    link_vectors,
)


@dataclass(frozen=True, eq=False)
class ClosedConfiguration:
    """Angles with ``f_{n-1} = (a_n, 0, 0)`` and the joints ``p_1 .. p_n``.

    ``joints[0]`` is the origin and ``joints[-1]`` the start of the fixed
    link ``a_n`` on the positive x-axis.
    """

    links: LinkLengths
    angles: JointAngles
    joints: np.ndarray
    residual: float
    rotation: np.ndarray


def rotation_to_x(point) -> np.ndarray:
    """Rotation ``Ry(pi/2 - mu) @ Rz(-lam)`` taking ``point`` onto the positive x-axis.

    ``(lam, mu)`` are the azimuth and polar angle of ``point``; the factor
    order fixes the otherwise free spin about the x-axis.
    """
    x, y, z = (float(c) for c in point)
    r = math.hypot(x, y, z)
    if r == 0.0:
        raise NotSphericalError("cannot align the zero vector")
    lam = math.atan2(y, x)
    # atan2 keeps the polar angle accurate near the poles, where acos does not
    mu = math.atan2(math.hypot(x, y), z)
    cl, sl = math.cos(lam), math.sin(lam)
    rz = np.array([[cl, sl, 0.0], [-sl, cl, 0.0], [0.0, 0.0, 1.0]])
    th = math.pi / 2 - mu
    ct, st = math.cos(th), math.sin(th)
    ry = np.array([[ct, 0.0, st], [0.0, 1.0, 0.0], [-st, 0.0, ct]])
    return ry @ rz


# planar parts below this are rounding noise around the poles
AXIS_EPS = 1e-15


def angles_from_directions(dirs: np.ndarray) -> JointAngles:
    """Spherical angles of unit vectors; directions along +-z get ``alpha = 0``."""
    dirs = np.asarray(dirs, dtype=float)
    planar = np.hypot(dirs[:, 0], dirs[:, 1])
    beta = np.arctan2(planar, dirs[:, 2])
    alpha = np.arctan2(dirs[:, 1], dirs[:, 0])
    alpha = np.where(planar <= AXIS_EPS, 0.0, alpha)
    alpha = np.mod(alpha, TWO_PI)
    return JointAngles(alpha, beta)


def joint_positions(links: LinkLengths, angles: JointAngles) -> np.ndarray:
    """Joints ``p_1 = 0, p_2, ..., p_{k+1}`` as rows of a ``(k + 1, 3)`` array.

    Running sums are Neumaier-compensated per component.
    """
    links = as_links(links)
    v = link_vectors(links, angles)
    out = np.zeros((v.shape[0] + 1, 3))
    for c in range(3):
        out[1:, c] = _compensated_cumsum(v[:, c].tolist())
    return out


def _compensated_cumsum(values: list[float]) -> list[float]:
    s = 0.0
    comp = 0.0
    out = []
    append = out.append
    for v in values:
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
        append(s + comp)
    return out


def close(
    links: LinkLengths,
    sc: SphericalConfiguration | JointAngles,
    tol: float = 1e-9,
) -> ClosedConfiguration:
    """Rigidly rotate a spherical configuration so its endpoint is ``(a_n, 0, 0)``.

    ``tol`` bounds ``| |f_{n-1}| - a_n |`` relative to ``a_n``.
    """
    links = as_links(links)
    angles = sc.angles if isinstance(sc, SphericalConfiguration) else sc
    a_n = float(links.a[-1])
    end = endpoint_map(links, angles)
    if len(angles) != links.n - 1 or abs(end.norm() - a_n) > tol * a_n:
        raise NotSphericalError(
            f"endpoint norm {end.norm()!r} differs from a_n = {a_n!r} beyond tolerance"
        )
    rot = rotation_to_x(end)
    dirs = angles.directions() @ rot.T
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    closed = angles_from_directions(dirs)
    joints = joint_positions(links, closed)
    end2 = endpoint_map(links, closed)
    residual = math.hypot(end2.x - a_n, end2.y, end2.z)
    return ClosedConfiguration(links, closed, joints, residual, rot)


@dataclass(frozen=True)
class ResidualReport:
    endpoint: Point3
    absolute: float
    relative: float
    diagonals: DiagonalVector

    def ok(self, tol: float) -> bool:
        """``relative <= tol`` (relative to the total chain length)."""
        return self.relative <= tol


def verify(links: LinkLengths, angles: JointAngles) -> ResidualReport:
    """Distance of ``f_{n-1}`` from ``(a_n, 0, 0)``, absolute and relative to ``sum(a)``."""
    links = as_links(links)
    end = endpoint_map(links, angles)
    a_n = float(links.a[-1])
    res = math.hypot(end.x - a_n, end.y, end.z)
    return ResidualReport(end, res, res / links.total, diagonal_lengths(links, angles))


def closing_direction(links: LinkLengths, angles: JointAngles) -> np.ndarray:
    """Unit direction of the last link, from ``f_{n-1}`` back to the origin."""
    end = np.array(endpoint_map(links, angles))
    norm = np.linalg.norm(end)
    if norm == 0.0:
        raise NotSphericalError("open chain ends at the origin")
    return -end / norm


def balance(links: LinkLengths, angles: JointAngles) -> float:
    """Norm of ``sum_j a_j u_j`` over all ``n`` links including the closing one."""
    links = as_links(links)
    v = link_vectors(links, angles)
    last = links.a[-1] * closing_direction(links, angles)
    total = [math.fsum(list(v[:, c]) + [last[c]]) for c in range(3)]
    return math.hypot(*total)
