"""Catalog of concatenated codes and their decoder-ready data."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import SQRT_2PI, SQRT_PI, GkpLattice, remainder
from .symplectic import (
    EncoderBlocks,
    GaussianCircuit,
    check_symplectic,
    circuit_from_tuples,
    compose,
    split_blocks,
)

SCHEMES = ("I", "II", "III")
FAMILIES = ("repetition", "five_qubit", "steane", "shor", "unbiased")

# Nullifier matrix of the five-qubit analog code that the catalog encoder is
# checked against (rows are q1..q5 | p1..p5 coefficients).
FIVE_QUBIT_NULLIFIERS = np.array(
    [
        [-1, 0, -1, 0, 0, 0, 0, 0, 1, 1],
        [0, -1, 0, -1, 0, 1, 0, 0, 0, 1],
        [0, -1, 0, 0, -1, 0, 0, 1, 1, 0],
        [0, 0, -1, 0, -1, 1, 1, 0, 0, 0],
    ],
    dtype=float,
)

# H/CZ/CNOT realization found by search; its G block is a row permutation of
# FIVE_QUBIT_NULLIFIERS and its logical rows are q1-q2-q3+q4-q5 and p1+q3-q4.
_FIVE_QUBIT_GATES = [
    ("H", 2), ("H", 3), ("H", 4), ("H", 5),
    ("CZ", 2, 5), ("CZ", 2, 3),
    ("CNOT", 5, 1), ("CNOT", 2, 1), ("CNOT", 4, 5),
    ("CZ", 1, 4), ("CZ", 3, 5), ("CNOT", 3, 4),
]

# Common textbook Steane encoder: data on mode 1, Hadamards on 5-7.
_STEANE_GATES = [
    ("H", 5), ("H", 6), ("H", 7),
    ("CNOT", 1, 2), ("CNOT", 1, 3),
    ("CNOT", 7, 1), ("CNOT", 7, 2), ("CNOT", 7, 4),
    ("CNOT", 6, 1), ("CNOT", 6, 3), ("CNOT", 6, 4),
    ("CNOT", 5, 2), ("CNOT", 5, 3), ("CNOT", 5, 4),
]

_SHOR_GATES = [
    ("CNOT", 1, 4), ("CNOT", 1, 7),
    ("H", 1), ("H", 4), ("H", 7),
    ("CNOT", 1, 2), ("CNOT", 1, 3),
    ("CNOT", 4, 5), ("CNOT", 4, 6),
    ("CNOT", 7, 8), ("CNOT", 7, 9),
]

# Published stabilizer generators, Z <-> q and X <-> p.  Steane supports are
# written in the labelling of the encoder above.
REFERENCE_STABILIZERS = {
    "five_qubit": ["ZIZXX", "XZIZX", "IZXXZ", "XXZIZ"],
    "steane": [
        "IXXXXII", "XIXXIXI", "XXIXIIX",
        "IZZZZII", "ZIZZIZI", "ZZIZIIZ",
    ],
    "shor": [
        "ZZIIIIIII", "IZZIIIIII", "IIIZZIIII", "IIIIZZIII", "IIIIIIZZI", "IIIIIIIZZ",
        "XXXXXXIII", "IIIXXXXXX",
    ],
}


@dataclass(frozen=True)
class CodeSpec:
    """What to build.

    Attributes:
        family: ``repetition``, ``five_qubit``, ``steane``, ``shor`` or ``unbiased``.
        scheme: ``I``, ``II`` or ``III``.
        n_rep: Repetition length (3, 5 or 7).
        n_aux_pairs: Auxiliary pairs of the unbiased GKP-repetition code.
        aux_alpha: Lattice alpha of the auxiliary modes; None picks the
            scheme default (I: 2, II: inf, III: 1).
        logical_alpha: Lattice alpha of the logical modes.
        reduce_generators: Shorten the scheme III generator rows before decoding.
    """

    family: str
    scheme: str = "III"
    n_rep: int = 3
    n_aux_pairs: int = 1
    aux_alpha: float | None = None
    logical_alpha: float = 2.0
    reduce_generators: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown code family {self.family!r}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.family == "repetition" and self.n_rep not in (3, 5, 7):
            raise ValueError(f"repetition length must be 3, 5 or 7, got {self.n_rep}")
        if self.family == "unbiased":
            if self.scheme != "III":
                raise ValueError("the unbiased GKP-repetition code only runs with scheme III")
            if self.n_aux_pairs < 1:
                raise ValueError("need at least one auxiliary pair")
        if self.scheme == "II" and self.aux_alpha is not None and not math.isinf(self.aux_alpha):
            raise ValueError("scheme II auxiliary modes are position states (alpha = inf)")
        if self.scheme != "II" and self.aux_alpha is not None and math.isinf(self.aux_alpha):
            raise ValueError("alpha = inf auxiliary modes only make sense for scheme II")

    @property
    def resolved_aux_alpha(self) -> float:
        if self.aux_alpha is not None:
            return float(self.aux_alpha)
        return {"I": 2.0, "II": math.inf, "III": 1.0}[self.scheme]


@dataclass(frozen=True)
class CodeInstance:
    """A built code: encoder, blocks, lattices and (scheme I) Pauli data."""

    spec: CodeSpec
    code_id: str
    n: int
    k: int
    circuit: GaussianCircuit
    A_enc: np.ndarray
    blocks: EncoderBlocks
    lattices: tuple[GkpLattice, ...]
    pauli_stabilizers: np.ndarray | None = None
    syndrome_table: dict | None = None
    syndrome_labels: dict | None = field(default=None, repr=False)

    @property
    def scheme(self) -> str:
        return self.spec.scheme

    @property
    def logical_lattice(self) -> GkpLattice:
        return self.lattices[0]

    @property
    def aux_lattice(self) -> GkpLattice:
        return self.lattices[self.k]

    def correction_table(self) -> np.ndarray:
        """Dense table: row ``int(bits)`` is the 2n Pauli pattern to apply.

        Bit j of the index is the parity of stabilizer j (stabilizer 0 is the
        most significant bit).
        """
        if self.syndrome_table is None:
            raise ValueError("only scheme I codes carry a syndrome table")
        m = self.pauli_stabilizers.shape[0]
        table = np.zeros((2**m, 2 * self.n), dtype=np.int64)
        for bits, pattern in self.syndrome_table.items():
            table[_bits_to_index(bits)] = pattern
        return table


def _bits_to_index(bits) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def _circuit_for(spec: CodeSpec) -> GaussianCircuit:
    if spec.family == "repetition":
        return circuit_from_tuples(spec.n_rep, [("CNOT", 1, j) for j in range(2, spec.n_rep + 1)])
    if spec.family == "five_qubit":
        return circuit_from_tuples(5, _FIVE_QUBIT_GATES)
    if spec.family == "steane":
        return circuit_from_tuples(7, _STEANE_GATES)
    if spec.family == "shor":
        return circuit_from_tuples(9, _SHOR_GATES)
    return unbiased_circuit(spec.n_aux_pairs)


def unbiased_circuit(n_aux_pairs: int) -> GaussianCircuit:
    """Inverse-SUM ladder of the unbiased GKP-repetition code on 2n+1 modes.

    Mode 1 is the logical mode, modes 2..n+1 the first auxiliary group and
    n+2..2n+1 the second.  Three Hadamards make the inverse Hadamard.
    """
    n = n_aux_pairs
    spec = [("ICNOT", 1, l) for l in range(n + 2, 2 * n + 2)]
    spec += [("H", 1)] * 3
    spec += [("ICNOT", 1, j) for j in range(2, n + 2)]
    return circuit_from_tuples(2 * n + 1, spec)


def pauli_to_vector(pauli: str) -> np.ndarray:
    """Binary (q|p) vector of a Pauli string: Z sets q, X sets p, Y sets both."""
    n = len(pauli)
    v = np.zeros(2 * n, dtype=np.int64)
    for j, ch in enumerate(pauli.upper()):
        if ch in "ZY":
            v[j] = 1
        if ch in "XY":
            v[n + j] = 1
        if ch not in "IXYZ":
            raise ValueError(f"bad Pauli letter {ch!r}")
    return v


def vector_to_pauli(v) -> str:
    """Inverse of ``pauli_to_vector`` (entries taken mod 2)."""
    v = np.asarray(np.round(v), dtype=np.int64) % 2
    n = v.size // 2
    out = []
    for j in range(n):
        out.append({(0, 0): "I", (1, 0): "Z", (0, 1): "X", (1, 1): "Y"}[(int(v[j]), int(v[n + j]))])
    return "".join(out)


def gf2_rank(m) -> int:
    """Rank over GF(2) by elimination."""
    a = np.asarray(np.round(m), dtype=np.int64) % 2
    a = a.copy()
    rank = 0
    rows, cols = a.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r, c]), None)
        if pivot is None:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        for r in range(rows):
            if r != rank and a[r, c]:
                a[r] ^= a[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def same_gf2_span(a, b) -> bool:
    ra, rb = gf2_rank(a), gf2_rank(b)
    return ra == rb == gf2_rank(np.vstack([a, b]))


def _error_pattern(n: int, modes, letters) -> np.ndarray:
    e = np.zeros(2 * n, dtype=np.int64)
    for j, ch in zip(modes, letters):
        if ch in "XY":
            e[j] = 1  # X shifts q
        if ch in "ZY":
            e[n + j] = 1  # Z shifts p
    return e


def syndrome_of(stabilizers: np.ndarray, pattern: np.ndarray) -> tuple[int, ...]:
    """Parity of each stabilizer row against an integer shift pattern."""
    s = np.asarray(np.round(stabilizers), dtype=np.int64)
    return tuple(int(b) for b in (s @ np.asarray(pattern, dtype=np.int64)) % 2)


def syndrome_table_build(pauli_stabilizers, distance: int | None = None):
    """Minimum-weight lookup table by breadth-first search over Pauli errors.

    Errors are visited by increasing weight; at equal weight the order is
    lexicographic over (mode index, X < Y < Z).  The first error producing a
    syndrome is kept.  With ``distance`` given, the search stops after weight
    (distance - 1) // 2 unless some syndrome is still unassigned, in which case
    it continues until every reachable syndrome has an entry.

    Returns:
        ``(table, labels)``: dicts from syndrome bit tuples to 2n integer
        patterns (q part = X components, p part = Z components) and to
        readable labels such as ``"X1"``.
    """
    s = np.asarray(np.round(pauli_stabilizers), dtype=np.int64)
    m, two_n = s.shape
    n = two_n // 2
    target = 2 ** gf2_rank(s)
    table: dict = {}
    labels: dict = {}
    t = None if distance is None else (distance - 1) // 2
    for w in range(n + 1):
        if t is not None and w > t and len(table) >= target:
            break
        for modes in itertools.combinations(range(n), w):
            for letters in itertools.product("XYZ", repeat=w):
                e = _error_pattern(n, modes, letters)
                syn = syndrome_of(s, e)
                if syn not in table:
                    table[syn] = e
                    labels[syn] = "".join(f"{c}{j + 1}" for j, c in zip(modes, letters)) or "I"
        if len(table) >= target:
            break
    return table, labels


def build(spec: CodeSpec, code_id: str | None = None) -> CodeInstance:
    """Compose the encoder, cut its blocks and attach lattices / Pauli data.

    Raises:
        ValueError: For invalid family/scheme combinations or a non-symplectic
            encoder.
    """
    circuit = _circuit_for(spec)
    a = compose(circuit)
    if not check_symplectic(a):
        raise ValueError(f"encoder for {spec.family} is not symplectic")
    n, k = circuit.n, 1
    blocks = split_blocks(a, k)
    logical = GkpLattice(spec.logical_alpha)
    aux = GkpLattice(spec.resolved_aux_alpha)
    lattices = (logical,) * k + (aux,) * (n - k)
    stabs = table = labels = None
    if spec.scheme == "I":
        stabs = np.asarray(np.round(blocks.G), dtype=np.int64)
        if not np.allclose(stabs, blocks.G):
            raise ValueError("scheme I needs integer stabilizer rows")
        table, labels = syndrome_table_build(stabs, distance=3)
    if code_id is None:
        code_id = _default_id(spec)
    return CodeInstance(
        spec=spec, code_id=code_id, n=n, k=k, circuit=circuit, A_enc=a, blocks=blocks,
        lattices=lattices, pauli_stabilizers=stabs, syndrome_table=table, syndrome_labels=labels,
    )


def _default_id(spec: CodeSpec) -> str:
    if spec.family == "repetition":
        return f"rep{spec.n_rep}"
    if spec.family == "unbiased":
        return f"unbiased-gkp-rep:{spec.n_aux_pairs}"
    return {"five_qubit": "513", "steane": "steane", "shor": "shor"}[spec.family]


def parse_code_id(code_id: str) -> dict:
    """Map a catalog id to CodeSpec keyword arguments."""
    cid = code_id.strip().lower()
    if cid in ("rep3", "rep5", "rep7"):
        return {"family": "repetition", "n_rep": int(cid[3:])}
    if cid in ("513", "five_qubit", "5qubit"):
        return {"family": "five_qubit"}
    if cid in ("steane", "shor"):
        return {"family": cid}
    if cid.startswith("unbiased-gkp-rep:"):
        try:
            n = int(cid.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad auxiliary pair count in {code_id!r}") from None
        return {"family": "unbiased", "n_aux_pairs": n}
    raise ValueError(
        f"unknown code id {code_id!r}; known: rep3, rep5, rep7, 513, steane, shor, unbiased-gkp-rep:n"
    )


def build_from_id(code_id: str, scheme: str = "III", **kwargs) -> CodeInstance:
    """``build`` addressed by catalog id, e.g. ``build_from_id("513", "II")``."""
    spec = CodeSpec(scheme=scheme, **parse_code_id(code_id), **kwargs)
    return build(spec, code_id=_default_id(spec))


def unbiased_syndrome_map(n_aux_pairs: int, xi) -> np.ndarray:
    """Syndromes of the unbiased GKP-repetition code written out directly.

    Args:
        n_aux_pairs: n, so the code has 2n+1 modes.
        xi: Noise of shape (..., 2(2n+1)), logical mode first.

    Returns:
        Array (..., 4n+2) ordered (z_0q, z_1q..z_2nq, z_0p, z_1p..z_2np).  The
        two logical entries are reduced mod sqrt(pi), the rest mod sqrt(2 pi).
    """
    n = n_aux_pairs
    modes = 2 * n + 1
    x = np.asarray(xi, dtype=float)
    if x.shape[-1] != 2 * modes:
        raise ValueError(f"expected {2 * modes} noise entries for n={n}, got {x.shape[-1]}")
    q = x[..., :modes]
    p = x[..., modes:]
    first = p[..., 1 : n + 1].sum(axis=-1)  # sum of p_k, k = 1..n
    second = p[..., n + 1 :].sum(axis=-1)  # sum of p_k, k = n+1..2n
    z0q = remainder(first - p[..., 0], SQRT_PI)
    z0p = remainder(q[..., 0] - second, SQRT_PI)
    zj = remainder(q[..., 1 : n + 1] + q[..., :1], SQRT_2PI)
    zl = remainder(q[..., n + 1 :] + (first - p[..., 0])[..., None], SQRT_2PI)
    zs = remainder(p[..., 1:], SQRT_2PI)
    return np.concatenate(
        [np.asarray(z0q)[..., None], zj, zl, np.asarray(z0p)[..., None], zs], axis=-1
    )


def _fmt_row(row) -> str:
    return " ".join(f"{v:6.3g}" for v in row)


def report(code: CodeInstance) -> str:
    """Plain-text dump of a code instance for inspection."""
    lines = [
        f"code {code.code_id}  scheme {code.scheme}  n={code.n} k={code.k}",
        "lattice alphas: " + " ".join(f"{lat.alpha:g}" for lat in code.lattices),
        "",
        "circuit:",
        code.circuit.to_text().rstrip("\n"),
        "",
        "A_enc (rows q1..qn, p1..pn):",
    ]
    lines += [_fmt_row(r) for r in code.A_enc]
    for name in ("Q", "G", "P", "D"):
        lines.append("")
        lines.append(f"{name}:")
        lines += [_fmt_row(r) for r in getattr(code.blocks, name)]
    if code.pauli_stabilizers is not None:
        lines += ["", "Pauli stabilizers:"]
        lines += [vector_to_pauli(r) for r in code.pauli_stabilizers]
        lines += ["", "syndrome table:"]
        for syn in sorted(code.syndrome_table):
            lines.append("".join(map(str, syn)) + " -> " + code.syndrome_labels[syn])
    return "\n".join(lines) + "\n"


__all__ = [
    "CodeInstance", "CodeSpec", "FIVE_QUBIT_NULLIFIERS", "REFERENCE_STABILIZERS",
    "build", "build_from_id", "gf2_rank", "parse_code_id", "pauli_to_vector", "report",
    "same_gf2_span", "syndrome_of", "syndrome_table_build", "unbiased_circuit",
    "unbiased_syndrome_map", "vector_to_pauli",
]
