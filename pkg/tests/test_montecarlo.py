import math

import numpy as np
import pytest

from gkpconcat.codes import build_from_id
from gkpconcat.montecarlo import (
    BATCH_SIZE,
    ErrorRateEstimate,
    MonteCarloError,
    analytic_estimate,
    batch_layout,
    default_workers,
    estimate,
    squeeze_study,
    sweep,
)


def test_batch_layout():
    assert batch_layout(10, 4) == [4, 4, 2]
    assert batch_layout(8, 4) == [4, 4]
    assert sum(batch_layout(1_000_003)) == 1_000_003
    assert batch_layout(5)[0] == 5 and BATCH_SIZE == 65536


def test_tiny_noise_has_no_errors():
    for cid in ["rep3", "513", "steane"]:
        e = estimate(build_from_id(cid, "III"), 1e-6, 10_000, 1)
        assert e.errors == 0 and e.p_emp == 0.0 and e.stderr == 0.0


def test_estimate_fields_and_stderr():
    e = estimate(build_from_id("rep3", "II"), 0.3, 50_000, 3, workers=2)
    assert e.samples == 50_000 and e.code == "rep3" and e.scheme == "II" and e.seed == 3
    assert e.stderr == pytest.approx(math.sqrt(e.p_emp * (1 - e.p_emp) / e.samples))
    assert e.wall_time >= 0 and e.method == "montecarlo"


def test_validation():
    code = build_from_id("rep3", "III")
    with pytest.raises(ValueError):
        estimate(code, 0.1, 0, 1)
    with pytest.raises(ValueError):
        estimate(code, 0.0, 10, 1)
    with pytest.raises(ValueError):
        estimate(code, 0.1, 10, 1, workers=0)


def test_batch_failure_reports_seed_and_index(monkeypatch):
    import gkpconcat.montecarlo as mc

    def boom(*args, **kwargs):
        raise FloatingPointError("bad")

    monkeypatch.setattr(mc, "count_logical_errors", boom)
    with pytest.raises(MonteCarloError, match="seed=5, batch=0"):
        estimate(build_from_id("rep3", "III"), 0.2, 10, 5, workers=1)


def test_worker_env(monkeypatch):
    monkeypatch.setenv("GKPCONCAT_WORKERS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("GKPCONCAT_WORKERS", "0")
    with pytest.raises(ValueError):
        default_workers()


def test_relative_stderr_stop_is_prefix_deterministic():
    code = build_from_id("rep3", "II")
    a = estimate(code, 0.3, 2_000_000, 9, workers=1, rel_stderr=0.05)
    b = estimate(code, 0.3, 2_000_000, 9, workers=4, rel_stderr=0.05)
    assert a.samples == b.samples < 2_000_000 and a.errors == b.errors
    assert a.stderr <= 0.05 * a.p_emp


def test_sweep_cells_are_independent_and_reproducible():
    rows = sweep(["rep3"], ["II"], [0.3, 0.3], 20_000, 4)
    assert len(rows) == 2 and rows[0].errors != rows[1].errors
    again = sweep(["rep3"], ["II"], [0.3, 0.3], 20_000, 4)
    assert [r.errors for r in rows] == [r.errors for r in again]


def test_repeated_estimates_scatter_like_binomial():
    code = build_from_id("rep3", "II")
    est = [estimate(code, 0.25, 20_000, seed) for seed in range(20)]
    p = np.array([e.p_emp for e in est])
    mean_se = np.mean([e.stderr for e in est])
    assert np.std(p, ddof=1) < 2 * mean_se


def test_analytic_estimate_record():
    e = analytic_estimate("rep3", "I", 0.2)
    assert e.method == "analytic" and e.stderr == 0.0 and e.p_emp > 0
    with pytest.raises(ValueError):
        analytic_estimate("513", "I", 0.2)


def test_squeeze_baseline_and_wellformed():
    rows = squeeze_study("rep3", "III", [0.5, 1.0, 2.0, 4.0], 0.25, 100_000, 2)
    ratios = {a: r for a, _, r in rows}
    assert ratios[1.0] == 1.0
    assert all(np.isfinite(r) and r > 0 for r in ratios.values())
    rows_i = squeeze_study("rep3", "I", [1.0, 2.0], 0.25, 50_000, 2)
    assert rows_i[0][2] == 1.0
    with pytest.raises(ValueError):
        squeeze_study("rep3", "II", [1.0], 0.2, 10, 0)
    with pytest.raises(ValueError):
        squeeze_study("rep3", "III", [0.0], 0.2, 10, 0)


def test_error_rate_estimate_is_plain_record():
    e = ErrorRateEstimate("rep3", "I", 0.2, 100, 7, 1)
    assert e.p_emp == 0.07
