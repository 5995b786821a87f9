"""Centered remainders and rectangular GKP lattices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SQRT_PI = math.sqrt(math.pi)
SQRT_2PI = math.sqrt(2.0 * math.pi)


def remainder(x, s):
    """Centered remainder R_s(x) = x - s * round(x / s) in the window [-s/2, s/2).

    Half-integer ties go to the lower edge, so the window stays half open.
    Works elementwise on arrays; scalars come back as floats.

    Raises:
        ValueError: If ``s`` is not positive.
    """
    s_arr = np.asarray(s, dtype=float)
    if np.any(~(s_arr > 0)):
        raise ValueError(f"period must be positive, got {s}")
    x_arr = np.asarray(x, dtype=float)
    r = x_arr - s_arr * np.floor(x_arr / s_arr + 0.5)
    half = 0.5 * s_arr
    # float rounding can land a hair outside the window
    r = np.where(r >= half, r - s_arr, r)
    r = np.where(r < -half, r + s_arr, r)
    if r.ndim == 0:
        return float(r)
    return r


def remainder_vec(v, s) -> np.ndarray:
    """Componentwise ``remainder`` that always returns an array."""
    return np.atleast_1d(np.asarray(remainder(v, s), dtype=float))


@dataclass(frozen=True)
class GkpLattice:
    """Rectangular GKP lattice with q period sqrt(2 pi alpha), p period sqrt(2 pi / alpha).

    ``alpha = 1`` is the canonical single-state lattice, ``alpha = 2`` the square
    qubit lattice, and ``alpha = inf`` stands for the position-eigenstate limit
    (no p information, q syndromes left unreduced).
    """

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"lattice alpha must be positive, got {self.alpha}")

    @property
    def is_position_limit(self) -> bool:
        return math.isinf(self.alpha)

    @property
    def q_period(self) -> float:
        return math.sqrt(2.0 * math.pi * self.alpha)

    @property
    def p_period(self) -> float:
        return math.sqrt(2.0 * math.pi / self.alpha)

    # Qubit view: the logical Pauli spacing in each quadrature.  For alpha=2
    # both equal sqrt(pi).
    @property
    def q_spacing(self) -> float:
        return self.q_period / 2.0

    @property
    def p_spacing(self) -> float:
        return self.p_period


SQUARE_QUBIT = GkpLattice(2.0)
CANONICAL = GkpLattice(1.0)
POSITION_LIMIT = GkpLattice(math.inf)


def logical_error_flags(xi_logical, lattice: GkpLattice = SQUARE_QUBIT) -> np.ndarray:
    """Per-quadrature logical error flags for residual logical noise.

    Args:
        xi_logical: Array of shape (..., 2k) holding the q entries of the k
            logical modes followed by their p entries.
        lattice: Qubit lattice of the logical modes.

    Returns:
        Boolean array of the same shape.  Entry j is set when the residual
        sits nearer an odd multiple of the Pauli spacing, i.e.
        ``|R_{2 s}(xi_j)| >= s / 2``.
    """
    x = np.asarray(xi_logical, dtype=float)
    if x.shape[-1] % 2:
        raise ValueError("logical residual must hold q and p entries for each mode")
    k = x.shape[-1] // 2
    spacing = np.concatenate(
        [np.full(k, lattice.q_spacing), np.full(k, lattice.p_spacing)]
    )
    return np.abs(remainder(x, 2.0 * spacing)) >= 0.5 * spacing
