"""Quadrature evaluation of logical error rates for the 3-repetition code.

The qubit view uses the square lattice: a logical quadrature residual is
correct when it lies within sqrt(pi)/2 of an even multiple of sqrt(pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import ndtr

from .lattice import SQRT_2PI, SQRT_PI, remainder

TRUNCATION_WARN = 1e-8


@dataclass(frozen=True)
class QuadratureGrid:
    """Cutoffs for the lattice sums and the adaptive integrator.

    Attributes:
        radius: Gaussian tail radius in units of the deviation.
        min_cutoff: Smallest lattice-sum cutoff N (indices -N..N).
        tol: Absolute tolerance per adaptive integral.
        limit: Subinterval limit for the adaptive integrator.
    """

    radius: float = 8.0
    min_cutoff: int = 5
    tol: float = 1e-10
    limit: int = 200

    def __post_init__(self):
        if not (self.radius > 0 and self.min_cutoff > 0 and self.tol > 0 and self.limit > 0):
            raise ValueError("quadrature cutoffs must be positive")

    def cutoff(self, sd: float, period: float, half_width: float = 0.0) -> int:
        """Index cutoff covering ``radius * sd + half_width`` around zero."""
        return max(self.min_cutoff, int(math.ceil((self.radius * sd + half_width) / period)) + 1)


DEFAULT_GRID = QuadratureGrid()


@dataclass(frozen=True)
class RateDetail:
    """Analytic rate with its two quadrature factors.

    Attributes:
        rate: Logical error rate 1 - q_correct * p_correct.
        q_correct: Probability the logical q residual is correct.
        p_correct: Probability the logical p residual is correct.
        error_estimate: Truncation plus integration error bound.
        warning: Set when ``error_estimate`` exceeds 1e-8.
    """

    rate: float
    q_correct: float
    p_correct: float
    error_estimate: float = 0.0
    warning: str | None = None


def _check_sigma(sigma: float) -> None:
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")


def gaussian_window_mass(sigma, period, half_width, parity: str = "even", mean: float = 0.0) -> float:
    """Mass of Normal(mean, sigma^2) in windows [c - w, c + w) around lattice centers.

    Centers are ``m * period`` for every integer m (``parity="all"``) or for
    even m only (``parity="even"``).  Narrow Gaussians are summed window by
    window with the normal CDF; wide ones use the Fourier series of the
    periodic window indicator, which converges in a few terms there.

    Args:
        sigma: Standard deviation.
        period: Lattice spacing s.
        half_width: Window half width w.
        parity: ``even`` or ``all``.
        mean: Gaussian mean.

    Raises:
        ValueError: For non-positive inputs or an unknown parity.
    """
    if not (sigma > 0 and period > 0 and half_width > 0):
        raise ValueError("sigma, period and half_width must be positive")
    if parity not in ("even", "all"):
        raise ValueError(f"parity must be 'even' or 'all', got {parity!r}")
    step = 2.0 * period if parity == "even" else period
    w = min(half_width, step / 2.0)
    if sigma >= step:
        ratio = w / step
        total = 2.0 * ratio
        k = 1
        while True:
            damp = math.exp(-2.0 * math.pi**2 * k * k * sigma * sigma / step**2)
            if damp < 1e-17:
                break
            total += 2.0 * math.sin(2.0 * math.pi * k * ratio) / (math.pi * k) * math.cos(
                2.0 * math.pi * k * mean / step
            ) * damp
            k += 1
        return float(min(1.0, max(0.0, total)))
    lo = math.floor((mean - 9.0 * sigma - w) / step)
    hi = math.ceil((mean + 9.0 * sigma + w) / step)
    c = np.arange(lo, hi + 1) * step
    mass = ndtr((c + w - mean) / sigma) - ndtr((c - w - mean) / sigma)
    return float(min(1.0, max(0.0, math.fsum(mass))))


def _even_mass(sigma: float, mean: float = 0.0) -> float:
    return gaussian_window_mass(sigma, SQRT_PI, SQRT_PI / 2.0, "even", mean)


def single_mode_no_error(sigma: float) -> float:
    """p0: chance one square GKP qubit quadrature is left without a Pauli flip."""
    _check_sigma(sigma)
    return _even_mass(sigma)


def scheme1_rep3_rate(sigma: float) -> float:
    """Scheme I logical error rate of the 3-repetition code.

    The bit-flip code protects q whenever at most one of three q entries
    flips; the logical p value is the sum of three p entries and is correct
    when an even number of them flip.
    """
    p0 = single_mode_no_error(sigma)
    q_ok = p0**3 + 3.0 * p0 * (1.0 - p0) ** 2
    p_ok = p0**3 + 3.0 * p0**2 * (1.0 - p0)
    return float(1.0 - q_ok * p_ok)


def scheme2_rep3_detail(sigma: float) -> RateDetail:
    """Scheme II: the logical residuals are Gaussian with deviations sigma/sqrt(3) and sqrt(3) sigma."""
    _check_sigma(sigma)
    q_ok = _even_mass(sigma / math.sqrt(3.0))
    p_ok = _even_mass(sigma * math.sqrt(3.0))
    return RateDetail(rate=1.0 - q_ok * p_ok, q_correct=q_ok, p_correct=p_ok)


def scheme2_rep3_rate(sigma: float) -> float:
    return scheme2_rep3_detail(sigma).rate


def _window_bounds(n: np.ndarray, period: float) -> tuple[np.ndarray, np.ndarray]:
    return (n - 0.5) * period, (n + 0.5) * period


def _pair_weights(sigma: float, grid: QuadratureGrid) -> tuple[np.ndarray, np.ndarray, float]:
    """P(n_y, n_z) for the correlated pair y = q2 - q1, z = q3 - q1.

    y ~ Normal(0, 2 sigma^2) and z | y ~ Normal(y / 2, 3 sigma^2 / 2); the
    inner window mass is closed form and the outer one adaptive.
    """
    sd_y = math.sqrt(2.0) * sigma
    sd_zy = math.sqrt(1.5) * sigma
    cut = grid.cutoff(sd_y, SQRT_2PI, SQRT_2PI / 2.0)
    idx = np.arange(-cut, cut + 1)
    z_lo, z_hi = _window_bounds(idx, SQRT_2PI)
    weights = np.zeros((idx.size, idx.size))
    abserr = 0.0
    for a, ny in enumerate(idx):
        y_lo, y_hi = _window_bounds(ny, SQRT_2PI)
        y_lo = max(y_lo, -grid.radius * sd_y - SQRT_2PI)
        y_hi = min(y_hi, grid.radius * sd_y + SQRT_2PI)
        if y_lo >= y_hi:
            continue
        for b in range(idx.size):

            def integrand(y, b=b):
                dens = math.exp(-0.5 * (y / sd_y) ** 2) / (sd_y * math.sqrt(2.0 * math.pi))
                m = 0.5 * y
                return dens * (ndtr((z_hi[b] - m) / sd_zy) - ndtr((z_lo[b] - m) / sd_zy))

            val, err = integrate.quad(integrand, y_lo, y_hi, epsabs=grid.tol, epsrel=0.0, limit=grid.limit)
            weights[a, b] = val
            abserr += err
    return idx, weights, abserr


def scheme3_rep3_detail(sigma: float, grid: QuadratureGrid = DEFAULT_GRID) -> RateDetail:
    """Scheme III logical error rate of the 3-repetition code with canonical auxiliaries.

    q: the logical residual is (q1+q2+q3)/3 shifted by sqrt(2 pi)(n_y+n_z)/3,
    where n_y, n_z are the lattice indices the auxiliary syndromes wrapped by.
    p: the residual is p1 shifted by sqrt(2 pi)(n_2+n_3) from the two
    auxiliary p remainders.
    """
    _check_sigma(sigma)
    idx, pair, abserr = _pair_weights(sigma, grid)
    mean_x = math.sqrt(1.0 / 3.0) * sigma
    q_ok = 0.0
    terms = []
    for a, ny in enumerate(idx):
        for b, nz in enumerate(idx):
            if pair[a, b] > 0.0:
                terms.append(pair[a, b] * _even_mass(mean_x, -SQRT_2PI * (ny + nz) / 3.0))
    q_ok = math.fsum(terms)
    q_trunc = abs(1.0 - math.fsum(pair.ravel()))

    lo, hi = _window_bounds(idx, SQRT_2PI)
    w = ndtr(hi / sigma) - ndtr(lo / sigma)
    p_terms = []
    for a, n2 in enumerate(idx):
        for b, n3 in enumerate(idx):
            wt = w[a] * w[b]
            if wt > 0.0:
                p_terms.append(wt * _even_mass(sigma, SQRT_2PI * (n2 + n3)))
    p_ok = math.fsum(p_terms)
    p_trunc = abs(1.0 - math.fsum(w)) * 2.0
    err = abserr + q_trunc + p_trunc
    warn = None
    if err > TRUNCATION_WARN:
        warn = f"truncation/integration error estimate {err:.2e} exceeds {TRUNCATION_WARN:g}"
    return RateDetail(rate=1.0 - q_ok * p_ok, q_correct=q_ok, p_correct=p_ok, error_estimate=err, warning=warn)


def scheme3_rep3_rate(sigma: float, grid: QuadratureGrid = DEFAULT_GRID) -> float:
    return scheme3_rep3_detail(sigma, grid).rate


def rep3_rate(scheme: str, sigma: float) -> float:
    """Dispatch on scheme ``I``, ``II`` or ``III``."""
    funcs = {"I": scheme1_rep3_rate, "II": scheme2_rep3_rate, "III": scheme3_rep3_rate}
    if scheme not in funcs:
        raise ValueError(f"unknown scheme {scheme!r}")
    return float(funcs[scheme](sigma))


def displacement_distribution_rate(samples, spacing: float = SQRT_PI):
    """Monte Carlo no-error probability of logical residual samples.

    A sample is correct when it lies within ``spacing / 2`` of an even
    multiple of ``spacing``.

    Args:
        samples: Array (M,) for one quadrature or (M, j) for j quadratures.
        spacing: Pauli spacing of the logical lattice.

    Returns:
        Float for 1-D input, else the per-column no-error probabilities.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("need at least one sample")
    ok = np.abs(remainder(x, 2.0 * spacing)) < 0.5 * spacing
    out = np.mean(ok, axis=0)
    return float(out) if np.ndim(out) == 0 else out


def logical_rate_from_samples(samples, spacing: float = SQRT_PI) -> float:
    """Fraction of (M, j) residual rows with at least one incorrect quadrature."""
    x = np.atleast_2d(np.asarray(samples, dtype=float))
    ok = np.abs(remainder(x, 2.0 * spacing)) < 0.5 * spacing
    return float(1.0 - np.mean(np.all(ok, axis=1)))
