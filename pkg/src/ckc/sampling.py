"""End-to-end sampler: diagonals, then angles, then the closing rotation."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .angles import SphericalConfiguration, reconstruct
from .chain import LinkLengths, as_links
from .closure import ClosedConfiguration, close
from .diagonals import sample_diagonals
from .rng import RngLike, as_generator


@dataclass(frozen=True, eq=False)
class SampledConfiguration:
    spherical: SphericalConfiguration
    closed: ClosedConfiguration

    @property
    def links(self) -> LinkLengths:
        return self.closed.links

    @property
    def residual(self) -> float:
        return self.closed.residual


def sample_configuration(
    links: LinkLengths,
    rng: RngLike = None,
    first_joint: tuple[float, float] = (0.0, math.pi / 2),
) -> SampledConfiguration:
    """One random closed configuration; diagonals and angles share one generator."""
    links = as_links(links)
    gen = as_generator(rng)
    diag = sample_diagonals(links, gen)
    sc = reconstruct(links, diag, first_joint=first_joint, rng=gen)
    return SampledConfiguration(sc, close(links, sc))
