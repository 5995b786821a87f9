import itertools
import math

import numpy as np
import pytest

from gkpconcat.codes import (
    FIVE_QUBIT_NULLIFIERS,
    REFERENCE_STABILIZERS,
    CodeSpec,
    build,
    build_from_id,
    gf2_rank,
    parse_code_id,
    pauli_to_vector,
    report,
    same_gf2_span,
    syndrome_of,
    syndrome_table_build,
    unbiased_syndrome_map,
    vector_to_pauli,
)
from gkpconcat.lattice import SQRT_2PI, SQRT_PI, remainder
from gkpconcat.symplectic import check_symplectic

CATALOG = ["rep3", "rep5", "rep7", "513", "steane", "shor", "unbiased-gkp-rep:1", "unbiased-gkp-rep:3"]


@pytest.mark.parametrize("cid", CATALOG)
def test_catalog_encoders_are_symplectic(cid):
    code = build_from_id(cid, "III")
    assert check_symplectic(code.A_enc)
    assert code.A_enc.shape == (2 * code.n, 2 * code.n)
    np.testing.assert_allclose(code.blocks.stack(), code.A_enc)


def test_repetition_blocks():
    code = build_from_id("rep3", "III")
    np.testing.assert_array_equal(code.blocks.Q, [[1, 0, 0, 0, 0, 0]])
    np.testing.assert_array_equal(code.blocks.G, [[-1, 1, 0, 0, 0, 0], [-1, 0, 1, 0, 0, 0]])
    np.testing.assert_array_equal(code.blocks.P, [[0, 0, 0, 1, 1, 1]])
    np.testing.assert_array_equal(code.blocks.D, [[0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]])


def test_five_qubit_nullifiers_span():
    g = build_from_id("513", "II").blocks.G
    n = FIVE_QUBIT_NULLIFIERS
    proj = n.T @ np.linalg.solve(n @ n.T, n)
    assert np.abs(g - g @ proj).max() < 1e-9
    assert np.linalg.matrix_rank(np.vstack([g, n])) == 4


@pytest.mark.parametrize("family,cid", [("five_qubit", "513"), ("steane", "steane"), ("shor", "shor")])
def test_pauli_stabilizers_match_reference_group(family, cid):
    code = build_from_id(cid, "I")
    ref = np.array([pauli_to_vector(p) for p in REFERENCE_STABILIZERS[family]])
    assert same_gf2_span(code.pauli_stabilizers, ref)


@pytest.mark.parametrize("cid", ["513", "steane", "shor"])
def test_logical_rows_commute_with_stabilizers(cid):
    a = build_from_id(cid, "I").A_enc
    n = a.shape[0] // 2
    om = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    b = build_from_id(cid, "I").blocks
    np.testing.assert_allclose(b.A2 @ om @ b.A1.T, 0.0, atol=1e-12)


def test_pauli_vector_round_trip():
    for p in ["XZIY", "IIII", "YYYY"]:
        assert vector_to_pauli(pauli_to_vector(p)) == p
    with pytest.raises(ValueError):
        pauli_to_vector("XQ")


def test_gf2_rank():
    assert gf2_rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2
    assert gf2_rank(np.eye(4)) == 4


def test_syndrome_table_is_minimum_weight():
    stabs = np.array([pauli_to_vector(p) for p in REFERENCE_STABILIZERS["steane"]])
    table, labels = syndrome_table_build(stabs, distance=3)
    assert len(table) == 64
    # brute-force minimum weight of every syndrome over all 4^7 Paulis
    best = {}
    for letters in itertools.product("IXYZ", repeat=7):
        e = pauli_to_vector("".join(letters))
        # pauli_to_vector puts Z on q; shift patterns put X on q
        pattern = np.concatenate([e[7:], e[:7]])
        syn = syndrome_of(stabs, pattern)
        w = sum(c != "I" for c in letters)
        best[syn] = min(best.get(syn, 99), w)
    for syn, pattern in table.items():
        assert syndrome_of(stabs, pattern) == syn
        weight = np.count_nonzero(pattern[:7] | pattern[7:])
        assert weight == best[syn]
    assert labels[(0,) * 6] == "I"


def test_syndrome_table_five_qubit_single_errors_distinct():
    code = build_from_id("513", "I")
    assert len(code.syndrome_table) == 16
    weights = [np.count_nonzero(p[:5] | p[5:]) for p in code.syndrome_table.values()]
    assert max(weights) == 1


def test_correction_table_indexing():
    code = build_from_id("rep3", "I")
    table = code.correction_table()
    assert table.shape == (4, 6)
    # syndrome (1, 1): Z1Z2 and Z1Z3 both odd -> X on mode 1
    np.testing.assert_array_equal(table[3], [1, 0, 0, 0, 0, 0])
    np.testing.assert_array_equal(table[2], [0, 1, 0, 0, 0, 0])
    with pytest.raises(ValueError):
        build_from_id("rep3", "III").correction_table()


def test_spec_validation():
    with pytest.raises(ValueError):
        CodeSpec("repetition", n_rep=4)
    with pytest.raises(ValueError):
        CodeSpec("unbiased", scheme="I")
    with pytest.raises(ValueError):
        CodeSpec("steane", scheme="IV")
    with pytest.raises(ValueError):
        CodeSpec("steane", scheme="II", aux_alpha=1.0)
    with pytest.raises(ValueError):
        CodeSpec("steane", scheme="III", aux_alpha=math.inf)
    with pytest.raises(ValueError):
        CodeSpec("hexagon")


def test_default_lattices():
    assert build_from_id("rep3", "I").aux_lattice.alpha == 2.0
    assert math.isinf(build_from_id("rep3", "II").aux_lattice.alpha)
    assert build_from_id("rep3", "III").aux_lattice.alpha == 1.0
    assert build_from_id("rep3", "III", aux_alpha=4.0).aux_lattice.alpha == 4.0
    assert build_from_id("rep3", "III").logical_lattice.alpha == 2.0


def test_parse_code_id():
    assert parse_code_id("unbiased-gkp-rep:2") == {"family": "unbiased", "n_aux_pairs": 2}
    assert parse_code_id("REP5") == {"family": "repetition", "n_rep": 5}
    with pytest.raises(ValueError):
        parse_code_id("rep4")
    with pytest.raises(ValueError):
        parse_code_id("unbiased-gkp-rep:x")


def test_report_mentions_blocks_and_table():
    text = report(build_from_id("rep3", "I"))
    for token in ("A_enc", "G:", "Pauli stabilizers", "ZZI", "-> X1"):
        assert token in text


@pytest.mark.parametrize("n", [1, 2, 3])
def test_unbiased_syndrome_map_matches_generic_rows(n):
    code = build(CodeSpec("unbiased", n_aux_pairs=n))
    rng = np.random.default_rng(n)
    x = rng.normal(0, 0.6, (500, 2 * code.n))
    syn = unbiased_syndrome_map(n, x)
    modes = 2 * n + 1
    a2 = code.blocks.A2
    a3 = code.blocks.A3
    np.testing.assert_allclose(syn[:, 0], remainder(x @ a2[0], SQRT_PI), atol=1e-12)
    np.testing.assert_allclose(syn[:, modes], remainder(x @ a2[1], SQRT_PI), atol=1e-12)
    np.testing.assert_allclose(syn[:, 1:modes], remainder(x @ a3[: 2 * n].T, SQRT_2PI), atol=1e-12)
    np.testing.assert_allclose(syn[:, modes + 1 :], remainder(x @ a3[2 * n :].T, SQRT_2PI), atol=1e-12)


def test_unbiased_map_shape_check():
    with pytest.raises(ValueError):
        unbiased_syndrome_map(2, np.zeros(6))
