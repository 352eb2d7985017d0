"""Shared helpers for randomized tests; every test seeds its own generator."""

import numpy as np

from twopol.fock import DensityOperator, FockState, density_from_pure, mix


def random_pure_state(rng, cutoff: int) -> FockState:
    amps = rng.normal(size=(cutoff + 1, cutoff + 1)) + 1j * rng.normal(
        size=(cutoff + 1, cutoff + 1)
    )
    amps /= np.linalg.norm(amps)
    return FockState(cutoff, amps)


def random_sector_state(rng, cutoff: int) -> FockState:
    """Random pure state supported on total photon number <= cutoff.

    SU(2) basis changes act unitarily only on that sector of the square
    truncation, so covariance tests draw states from it.
    """
    amps = rng.normal(size=(cutoff + 1, cutoff + 1)) + 1j * rng.normal(
        size=(cutoff + 1, cutoff + 1)
    )
    n_x = np.arange(cutoff + 1)[:, None]
    n_y = np.arange(cutoff + 1)[None, :]
    amps[n_x + n_y > cutoff] = 0.0
    amps /= np.linalg.norm(amps)
    return FockState(cutoff, amps)


def random_density(rng, cutoff: int, rank: int = 3, sector: bool = False) -> DensityOperator:
    draw = random_sector_state if sector else random_pure_state
    weights = rng.random(rank)
    weights /= weights.sum()
    return mix(weights, [density_from_pure(draw(rng, cutoff)) for _ in range(rank)])
