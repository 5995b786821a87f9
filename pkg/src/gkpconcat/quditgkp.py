"""Qudit analogue of the two-mode GKP-repetition code, tracked as Pauli exponents.

A data qudit of dimension d is coupled by SUM to an ancilla in the qudit GKP
state sum_k |k r>, which is stabilized by X^r and Z^r when r^2 = 0 mod d.
After the error X1^a1 Z1^c1 X2^a2 Z2^c2 and the inverse SUM, the pair
carries X1^a1 Z1^(c1+c2) on the data and X2^(a2-a1) Z2^c2 on the ancilla.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuditParams:
    """Qudit dimension ``d`` and ancilla spacing ``r``.

    Raises:
        ValueError: Unless d >= 2, r >= 1, r divides d and r^2 = 0 mod d.
    """

    d: int
    r: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"qudit dimension must be at least 2, got {self.d}")
        if self.r < 1 or self.d % self.r:
            raise ValueError(f"r={self.r} must divide d={self.d}")
        if (self.r * self.r) % self.d:
            raise ValueError(f"need r^2 = 0 mod d, got r={self.r}, d={self.d}")

    @property
    def z_modulus(self) -> int:
        """Z shifts of the ancilla are visible modulo d / r (equal to r when d = r^2)."""
        return self.d // self.r


@dataclass(frozen=True)
class QuditError:
    """Exponents of X1^a1 Z1^c1 X2^a2 Z2^c2, stored reduced mod d."""

    a1: int
    c1: int
    a2: int
    c2: int

    def reduced(self, d: int) -> "QuditError":
        return QuditError(self.a1 % d, self.c1 % d, self.a2 % d, self.c2 % d)


@dataclass(frozen=True)
class QuditResult:
    """One decoding round.

    Attributes:
        syndrome_x: (a2 - a1) mod r in the centered window (-r/2, r/2].
        syndrome_z: c2 mod d/r in the centered window.
        residual_x: Data X exponent a1 + h after the correction X^h, where h
            is syndrome_x / 2 rounded to the nearest integer, ties toward
            zero.  Centered mod d.
        residual_x_half: a1 + syndrome_x / 2 without rounding (continuum
            bookkeeping).
        residual_z: Data Z exponent c1 + c2 - syndrome_z, centered mod d.
        z_excess: c2 - syndrome_z, centered mod d; zero whenever c2 is in window.
        recovered: Both ancilla shifts lay strictly inside the window.
    """

    syndrome_x: int
    syndrome_z: int
    residual_x: int
    residual_x_half: float
    residual_z: int
    z_excess: int
    recovered: bool


def centered(x, m: int):
    """Representative of x mod m in (-m/2, m/2]."""
    x = np.asarray(x)
    r = np.mod(x, m)
    out = np.where(r > m // 2, r - m, r)
    return int(out) if out.ndim == 0 else out


def half_toward_zero(s):
    """Nearest integer to s / 2, ties toward zero."""
    s = np.asarray(s)
    out = np.sign(s) * (np.abs(s) // 2)
    return int(out) if out.ndim == 0 else out


def post_decode_exponents(params: QuditParams, err: QuditError) -> tuple[int, int, int, int]:
    """(data X, data Z, ancilla X, ancilla Z) exponents after the inverse SUM, mod d."""
    d = params.d
    e = err.reduced(d)
    return e.a1, (e.c1 + e.c2) % d, (e.a2 - e.a1) % d, e.c2


def in_window(params: QuditParams, err: QuditError) -> bool:
    """True when |a2 - a1| < r/2 and |c2| < (d/r)/2 for the centered representatives."""
    dx = centered(err.a2 - err.a1, params.d)
    dz = centered(err.c2, params.d)
    return 2 * abs(dx) < params.r and 2 * abs(dz) < params.z_modulus


def qudit_round(params: QuditParams, err: QuditError) -> QuditResult:
    """Extract the ancilla syndromes and correct the data qudit."""
    d = params.d
    dx, dz_data, ax, az = post_decode_exponents(params, err)
    sx = centered(ax, params.r)
    sz = centered(az, params.z_modulus)
    h = half_toward_zero(sx)
    a1 = centered(err.a1, d)
    return QuditResult(
        syndrome_x=sx,
        syndrome_z=sz,
        residual_x=centered(a1 + h, d),
        residual_x_half=a1 + sx / 2.0,
        residual_z=centered(dz_data - sz, d),
        z_excess=centered(err.c2 - sz, d),
        recovered=in_window(params, err),
    )


def qudit_round_batch(params: QuditParams, a1, c1, a2, c2) -> dict[str, np.ndarray]:
    """Vectorized ``qudit_round`` over integer exponent arrays."""
    d, r, zm = params.d, params.r, params.z_modulus
    a1, c1, a2, c2 = (np.asarray(v, dtype=np.int64) for v in (a1, c1, a2, c2))
    sx = centered(np.mod(a2 - a1, d), r)
    sz = centered(np.mod(c2, d), zm)
    a1c = centered(a1, d)
    dxw = centered(a2 - a1, d)
    dzw = centered(c2, d)
    return {
        "syndrome_x": np.asarray(sx),
        "syndrome_z": np.asarray(sz),
        "residual_x": np.asarray(centered(a1c + half_toward_zero(sx), d)),
        "residual_x_half": a1c + np.asarray(sx) / 2.0,
        "residual_z": np.asarray(centered(c1 + c2 - sz, d)),
        "z_excess": np.asarray(centered(c2 - sz, d)),
        "recovered": (2 * np.abs(dxw) < r) & (2 * np.abs(dzw) < zm),
    }


def sample_exponents(rng: np.random.Generator, sd: float, size: int) -> np.ndarray:
    """Centered discrete-Gaussian-like exponents: rounded Normal(0, sd^2) draws."""
    return np.rint(rng.normal(0.0, sd, size)).astype(np.int64)


def variance_study(params: QuditParams, sd: float, samples: int, rng: np.random.Generator) -> dict[str, float]:
    """Residual X-exponent variance relative to the raw a1 variance.

    a1, a2 (and c1, c2) are drawn i.i.d. from ``sample_exponents``.
    """
    a1, a2, c1, c2 = (sample_exponents(rng, sd, samples) for _ in range(4))
    out = qudit_round_batch(params, a1, c1, a2, c2)
    var_a1 = float(np.var(a1))
    return {
        "var_a1": var_a1,
        "var_residual_x": float(np.var(out["residual_x"])),
        "var_residual_x_half": float(np.var(out["residual_x_half"])),
        "ratio": float(np.var(out["residual_x"])) / var_a1,
        "ratio_half": float(np.var(out["residual_x_half"])) / var_a1,
        "recovered_fraction": float(np.mean(out["recovered"])),
        "z_excess_nonzero": int(np.count_nonzero(out["z_excess"][out["recovered"]])),
    }
