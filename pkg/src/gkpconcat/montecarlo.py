"""Monte Carlo logical error rates with binomial error bars."""

from __future__ import annotations

import itertools
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .codes import CodeInstance, build_from_id
from .decoder import DecoderPlan, count_logical_errors, prepare
from .noise import NoiseModel, sample, substream

BATCH_SIZE = 2**16
WORKERS_ENV = "GKPCONCAT_WORKERS"


class MonteCarloError(RuntimeError):
    """A batch failed; carries the seed and batch index to reproduce it."""

    def __init__(self, message: str, seed: int, batch: int):
        super().__init__(f"{message} (seed={seed}, batch={batch})")
        self.seed = seed
        self.batch = batch


@dataclass(frozen=True)
class ErrorRateEstimate:
    """Empirical logical error rate.

    Attributes:
        code: Catalog id of the code.
        scheme: ``I``, ``II`` or ``III``.
        sigma: Noise standard deviation.
        samples: Number of decoded noise vectors M.
        errors: Samples with at least one flagged logical quadrature.
        seed: Root seed.
        wall_time: Seconds spent sampling and decoding.
        method: ``montecarlo`` or ``analytic``.
    """

    code: str
    scheme: str
    sigma: float
    samples: int
    errors: int
    seed: int | None
    wall_time: float = 0.0
    method: str = "montecarlo"
    p_override: float | None = None

    @property
    def p_emp(self) -> float:
        if self.p_override is not None:
            return self.p_override
        return self.errors / self.samples

    @property
    def stderr(self) -> float:
        if self.method == "analytic":
            return 0.0
        p = self.p_emp
        return math.sqrt(p * (1.0 - p) / self.samples)


def default_workers() -> int:
    """Worker count from GKPCONCAT_WORKERS, else the CPU count."""
    env = os.environ.get(WORKERS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {env!r}")
        return n
    return os.cpu_count() or 1


def batch_layout(samples: int, batch_size: int = BATCH_SIZE) -> list[int]:
    """Sizes of the batches that make up ``samples`` draws (last one may be short)."""
    full, rest = divmod(samples, batch_size)
    return [batch_size] * full + ([rest] if rest else [])


def _count_batch(code, plan, model, seed, key, size) -> int:
    x = sample(model, substream(seed, key), size)
    return count_logical_errors(x, code, plan)


def estimate(
    code: CodeInstance,
    sigma: float,
    samples: int,
    seed: int,
    workers: int | None = None,
    rel_stderr: float | None = None,
    cell: int | None = None,
    plan: DecoderPlan | None = None,
    batch_size: int = BATCH_SIZE,
) -> ErrorRateEstimate:
    """Sample, decode and count logical errors.

    Batch b draws from the substream keyed by (seed, b), or (seed, cell, b)
    inside a sweep, so the result depends only on the inputs and the batch
    layout, never on ``workers``.

    Args:
        code: Built code; its scheme selects the decoder.
        sigma: Noise standard deviation.
        samples: Maximum number of noise vectors M.
        seed: Root seed.
        workers: Thread count; None reads GKPCONCAT_WORKERS.
        rel_stderr: Optional stopping rule.  Batches are scanned in order and
            sampling stops after the first batch at which stderr / p_emp
            falls to this value.
        cell: Extra key component used by ``sweep``.
        plan: Precomputed decoder matrices.
        batch_size: Samples per substream.

    Raises:
        ValueError: For M < 1 or sigma <= 0.
        MonteCarloError: If decoding a batch fails.
    """
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    model = NoiseModel(float(sigma), code.n)
    plan = prepare(code) if plan is None else plan
    workers = default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ValueError("workers must be positive")
    sizes = batch_layout(int(samples), batch_size)
    prefix = () if cell is None else (int(cell),)
    start = time.perf_counter()

    def run(b: int) -> int:
        try:
            return _count_batch(code, plan, model, seed, prefix + (b,), sizes[b])
        except Exception as exc:  # noqa: BLE001 - re-raised with context
            raise MonteCarloError(f"decoding failed: {exc}", seed, b) from exc

    errors = 0
    done = 0
    window = max(1, 2 * workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for lo in range(0, len(sizes), window):
            chunk = range(lo, min(lo + window, len(sizes)))
            stop = False
            for b, count in zip(chunk, pool.map(run, chunk)):
                errors += count
                done += sizes[b]
                if rel_stderr is not None and errors > 0:
                    p = errors / done
                    if math.sqrt(p * (1.0 - p) / done) <= rel_stderr * p:
                        stop = True
                        break
            if stop:
                break
    return ErrorRateEstimate(
        code=code.code_id, scheme=code.scheme, sigma=float(sigma), samples=done, errors=errors,
        seed=int(seed), wall_time=time.perf_counter() - start,
    )


def sweep(
    code_ids,
    schemes,
    sigmas,
    samples: int,
    seed: int,
    workers: int | None = None,
    rel_stderr: float | None = None,
    **code_kwargs,
) -> list[ErrorRateEstimate]:
    """Estimates over the product code x scheme x sigma.

    Cell i (in product order) draws from the substreams keyed (seed, i, b).
    Extra keyword arguments go to ``build_from_id``.
    """
    out = []
    cells = itertools.product(code_ids, schemes, sigmas)
    built: dict[tuple[str, str], tuple[CodeInstance, DecoderPlan]] = {}
    for i, (cid, scheme, sigma) in enumerate(cells):
        if (cid, scheme) not in built:
            code = build_from_id(cid, scheme, **code_kwargs)
            built[(cid, scheme)] = (code, prepare(code))
        code, plan = built[(cid, scheme)]
        out.append(estimate(code, sigma, samples, seed, workers, rel_stderr, cell=i, plan=plan))
    return out


def analytic_estimate(code_id: str, scheme: str, sigma: float) -> ErrorRateEstimate:
    """Wrap an analytic rep3 rate in the estimate record (``method=analytic``)."""
    from .analytic import rep3_rate

    if code_id != "rep3":
        raise ValueError(f"analytic rates exist only for rep3, not {code_id!r}")
    start = time.perf_counter()
    p = rep3_rate(scheme, sigma)
    return ErrorRateEstimate(
        code=code_id, scheme=scheme, sigma=float(sigma), samples=0, errors=0, seed=None,
        wall_time=time.perf_counter() - start, method="analytic", p_override=p,
    )


def squeeze_study(
    code_id: str,
    scheme: str,
    alphas,
    sigma: float,
    samples: int,
    seed: int,
    workers: int | None = None,
) -> list[tuple[float, ErrorRateEstimate, float]]:
    """Rates on squeezed lattices relative to alpha = 1.

    Scheme I squeezes every mode: logical and auxiliary lattices use 2 alpha.
    Scheme III squeezes only the auxiliaries: aux alpha = alpha.  Every alpha
    reuses the same noise stream, so alpha = 1 gives ratio exactly 1.

    Returns:
        (alpha, estimate, p(alpha) / p(1)) per alpha; the ratio is nan when
        the baseline saw no errors.
    """
    if scheme not in ("I", "III"):
        raise ValueError("the squeezing study covers schemes I and III")
    alphas = [float(a) for a in alphas]
    if any(not a > 0 for a in alphas):
        raise ValueError("squeeze parameters must be positive")

    def run(alpha: float) -> ErrorRateEstimate:
        if scheme == "I":
            code = build_from_id(code_id, "I", aux_alpha=2.0 * alpha, logical_alpha=2.0 * alpha)
        else:
            code = build_from_id(code_id, "III", aux_alpha=alpha)
        return estimate(code, sigma, samples, seed, workers)

    base = run(1.0)
    rows = []
    for a in alphas:
        est = base if a == 1.0 else run(a)
        ratio = est.p_emp / base.p_emp if base.errors else float("nan")
        rows.append((a, est, ratio))
    return rows
