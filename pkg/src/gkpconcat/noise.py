"""I.i.d. Gaussian displacement noise with splittable, reproducible streams."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NoiseModel:
    """Gaussian displacement channel on every quadrature of ``n`` modes."""

    sigma: float
    n: int

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.n < 1:
            raise ValueError("need at least one mode")


def substream(seed: int, index: int | tuple[int, ...]) -> np.random.Generator:
    """Independent generator for batch ``index`` of a run seeded with ``seed``.

    Uses a Philox counter-based bit generator keyed by SeedSequence(seed,
    spawn_key=index), so any batch can be regenerated on its own.  A tuple
    index such as (cell, batch) separates the cells of a sweep.
    """
    key = (index,) if np.isscalar(index) else tuple(index)
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(i) for i in key))
    return np.random.Generator(np.random.Philox(ss))


def sample(model: NoiseModel, stream: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Draw noise vectors ordered (xi_1q..xi_nq, xi_1p..xi_np).

    Returns shape (2n,) when ``size`` is None, else (size, 2n).
    """
    shape = (2 * model.n,) if size is None else (int(size), 2 * model.n)
    return stream.normal(0.0, model.sigma, size=shape)
