import itertools

import numpy as np
import pytest

import oracles as O
from gkpconcat.quditgkp import (
    QuditError,
    QuditParams,
    centered,
    half_toward_zero,
    post_decode_exponents,
    qudit_round,
    qudit_round_batch,
    variance_study,
)


def test_params_validation():
    QuditParams(16, 4)
    QuditParams(8, 4)
    with pytest.raises(ValueError):
        QuditParams(16, 3)
    with pytest.raises(ValueError):
        QuditParams(16, 2)  # 4 is not a multiple of 16
    with pytest.raises(ValueError):
        QuditParams(1, 1)


def test_helpers():
    assert centered(3, 4) == -1 and centered(2, 4) == 2 and centered(-2, 4) == 2
    assert [half_toward_zero(s) for s in (-3, -2, -1, 0, 1, 2, 3)] == [-1, -1, 0, 0, 0, 1, 1]


def test_trivial_round():
    res = qudit_round(QuditParams(16, 4), QuditError(0, 0, 0, 0))
    assert (res.residual_x, res.residual_z, res.recovered) == (0, 0, True)


def test_example_round():
    res = qudit_round(QuditParams(16, 4), QuditError(1, 0, 1, 1))
    assert res.syndrome_x == 0 and res.syndrome_z == 1
    assert res.residual_z == 0 and res.z_excess == 0 and res.recovered


def _data_and_ancilla(state, d):
    u, s, vh = np.linalg.svd(state.reshape(d, d))
    assert s[1] < 1e-9 * s[0]  # product state
    return u[:, 0] * s[0], vh[0]


def test_statevector_post_decode_exponents():
    d, r = 8, 4
    params = QuditParams(d, r)
    x, z = O.qudit_ops(d)
    gkp = O.qudit_gkp_state(d, r)
    rng = np.random.default_rng(0)
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    psi /= np.linalg.norm(psi)
    for a1, c1, a2, c2 in itertools.product(range(d), repeat=4):
        if (a1 + 2 * c1 + 3 * a2 + 5 * c2) % 7:
            continue  # a spread-out subset keeps this under a second
        out = O.statevector_round(d, r, psi, a1, c1, a2, c2)
        dx, dz, ax, az = post_decode_exponents(params, QuditError(a1, c1, a2, c2))
        expect = np.kron(O.mpow(x, dx) @ O.mpow(z, dz) @ psi, O.mpow(x, ax) @ O.mpow(z, az) @ gkp)
        assert O.same_ray(out, expect)


def test_exhaustive_in_window_d16_r4():
    """Syndrome extraction and Z elimination against the state vector for every in-window error."""
    d, r = 16, 4
    params = QuditParams(d, r)
    x, z = O.qudit_ops(d)
    gkp = O.qudit_gkp_state(d, r)
    rng = np.random.default_rng(1)
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    psi /= np.linalg.norm(psi)
    enc, dec = O.sum_gate(d), O.sum_gate(d, True)
    base = enc @ np.kron(psi, gkp)
    xp = [O.mpow(x, k) for k in range(d)]
    zp = [O.mpow(z, k) for k in range(d)]
    # ancilla candidates X^sx Z^sz |gkp> over the syndrome windows
    cands = {(sx, sz): xp[sx % d] @ zp[sz % d] @ gkp for sx in range(-1, 3) for sz in range(-1, 3)}
    count = 0
    for a1, c1 in itertools.product(range(d), repeat=2):
        for dx, c2 in itertools.product((-1, 0, 1), repeat=2):
            a2 = (a1 + dx) % d
            err = np.kron(xp[a1] @ zp[c1], xp[a2] @ zp[c2 % d])
            data, anc = _data_and_ancilla(dec @ err @ base, d)
            found = [k for k, v in cands.items() if O.same_ray(anc, v)]
            assert len(found) == 1
            res = qudit_round(params, QuditError(a1, c1, a2, c2))
            assert found[0] == (res.syndrome_x, res.syndrome_z)
            assert res.recovered and res.z_excess == 0
            h = half_toward_zero(res.syndrome_x)
            corrected = xp[h % d] @ zp[(-res.syndrome_z) % d] @ data
            expect = xp[res.residual_x % d] @ zp[c1] @ psi
            assert O.same_ray(corrected, expect)
            count += 1
    assert count == 16 * 16 * 9


def test_exhaustive_syndrome_algebra_d16():
    d, r = 16, 4
    params = QuditParams(d, r)
    g = np.array(list(itertools.product(range(d), repeat=4)))
    out = qudit_round_batch(params, *g.T)
    assert np.all(out["syndrome_x"] == centered(np.mod(g[:, 2] - g[:, 0], r), r))
    assert np.all(out["syndrome_z"] == centered(np.mod(g[:, 3], r), r))
    rec = out["recovered"]
    assert rec.sum() == 16 * 16 * 3 * 3
    assert np.all(out["z_excess"][rec] == 0)
    assert np.all(out["residual_z"][rec] == centered(g[rec, 1], d))
    for row in g[:: 997]:
        single = qudit_round(params, QuditError(*map(int, row)))
        i = int(row[0]) * d**3 + int(row[1]) * d**2 + int(row[2]) * d + int(row[3])
        assert single.syndrome_x == out["syndrome_x"][i] and single.residual_x == out["residual_x"][i]


def test_half_variance_reduction():
    stats = variance_study(QuditParams(4096, 64), 5.0, 1_000_000, np.random.default_rng(2))
    assert abs(stats["ratio"] - 0.5) < 0.05 * 0.5
    assert abs(stats["ratio_half"] - 0.5) < 0.05 * 0.5
    assert stats["z_excess_nonzero"] == 0
