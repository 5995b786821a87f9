import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gkpconcat.lattice import (
    CANONICAL,
    POSITION_LIMIT,
    SQRT_2PI,
    SQRT_PI,
    SQUARE_QUBIT,
    GkpLattice,
    logical_error_flags,
    remainder,
    remainder_vec,
)
from gkpconcat.noise import NoiseModel, sample, substream


def test_remainder_examples():
    assert remainder(0.0, SQRT_PI) == 0.0
    assert math.isclose(remainder(0.3, 1.0), 0.3)
    assert math.isclose(remainder(0.7, 1.0), -0.3)
    assert math.isclose(remainder(-0.7, 1.0), 0.3)
    assert math.isclose(remainder(SQRT_PI + 0.1, SQRT_PI), 0.1, abs_tol=1e-15)


def test_remainder_ties_stay_in_half_open_window():
    assert remainder(0.5, 1.0) == -0.5
    assert remainder(-0.5, 1.0) == -0.5
    assert remainder(1.5, 1.0) == -0.5


def test_remainder_rejects_bad_period():
    with pytest.raises(ValueError):
        remainder(1.0, 0.0)
    with pytest.raises(ValueError):
        remainder(1.0, -1.0)


def test_remainder_vectorized_with_per_entry_periods():
    out = remainder(np.array([0.7, 0.7]), np.array([1.0, 2.0]))
    np.testing.assert_allclose(out, [-0.3, 0.7])
    assert remainder_vec(0.2, 1.0).shape == (1,)


@given(st.floats(-1e6, 1e6), st.floats(1e-3, 1e3))
def test_remainder_window_and_congruence(x, s):
    r = remainder(x, s)
    assert -s / 2 <= r < s / 2
    k = (x - r) / s
    assert abs(k - round(k)) < 1e-6 * max(1.0, abs(k))


def test_lattice_periods():
    assert math.isclose(SQUARE_QUBIT.q_spacing, SQRT_PI)
    assert math.isclose(SQUARE_QUBIT.p_spacing, SQRT_PI)
    assert math.isclose(CANONICAL.q_period, SQRT_2PI)
    assert math.isclose(CANONICAL.p_period, SQRT_2PI)
    lat = GkpLattice(4.0)
    assert math.isclose(lat.q_period * lat.p_period, 2 * math.pi)
    assert POSITION_LIMIT.is_position_limit
    with pytest.raises(ValueError):
        GkpLattice(0.0)


def test_logical_error_flags():
    x = np.array([[0.0, 0.0], [SQRT_PI, 0.0], [2 * SQRT_PI, -SQRT_PI], [0.45 * SQRT_PI, 0.55 * SQRT_PI]])
    np.testing.assert_array_equal(
        logical_error_flags(x), [[False, False], [True, False], [False, True], [False, True]]
    )
    with pytest.raises(ValueError):
        logical_error_flags(np.zeros(3))


def test_noise_model_validation():
    with pytest.raises(ValueError):
        NoiseModel(0.0, 2)
    with pytest.raises(ValueError):
        NoiseModel(0.1, 0)


def test_noise_moments_and_independence():
    model = NoiseModel(0.3, 2)
    x = sample(model, substream(5, 0), 1_000_000)
    assert x.shape == (1_000_000, 4)
    assert abs(x.var() / 0.09 - 1.0) < 0.01
    c = np.corrcoef(x[:100_000].T)
    off = c[~np.eye(4, dtype=bool)]
    assert np.all(np.abs(off) < 0.01)


def test_substreams_reproducible_and_distinct():
    model = NoiseModel(1.0, 1)
    a = sample(model, substream(1, 3), 10)
    np.testing.assert_array_equal(a, sample(model, substream(1, 3), 10))
    assert not np.array_equal(a, sample(model, substream(1, 4), 10))
    assert not np.array_equal(a, sample(model, substream(2, 3), 10))
    assert not np.array_equal(a, sample(model, substream(1, (0, 3)), 10))
    assert sample(model, substream(1, 0)).shape == (2,)
