"""Gaussian gate algebra on the quadrature vector (q_1..q_n, p_1..p_n).

Every gate is represented by the matrix M with U r U^dagger = M r, i.e. the
row table of how each quadrature is rewritten by the gate.  A circuit listed
in temporal order g_1, ..., g_m composes as M_1 @ M_2 @ ... @ M_m, which is
the same conjugation rule applied to the product U_m ... U_1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

SYMPLECTIC_TOL = 1e-9

GATE_KINDS = ("CNOT", "ICNOT", "CZ", "H", "SQZ")


def omega(n: int) -> np.ndarray:
    """Symplectic form [[0, I], [-I, 0]] for n modes."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class GaussianGate:
    """One gate of an encoding circuit.

    Mode indices are 1-based, matching the text format.

    Attributes:
        kind: One of ``CNOT``, ``ICNOT`` (inverse SUM), ``CZ``, ``H``, ``SQZ``.
        modes: Control/target pair for two-mode gates, single index otherwise.
        alpha: Squeeze parameter, only used by ``SQZ``.
    """

    kind: str
    modes: tuple[int, ...]
    alpha: float = 1.0

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity = 1 if self.kind in ("H", "SQZ") else 2
        if len(self.modes) != arity:
            raise ValueError(f"{self.kind} takes {arity} mode index(es), got {self.modes}")
        if arity == 2 and self.modes[0] == self.modes[1]:
            raise ValueError(f"{self.kind} needs distinct modes, got {self.modes}")
        if self.kind == "SQZ" and not self.alpha > 0:
            raise ValueError(f"squeeze parameter must be positive, got {self.alpha}")

    def check_modes(self, n: int) -> None:
        bad = [m for m in self.modes if not 1 <= m <= n]
        if bad:
            raise ValueError(f"{self.kind} mode index {bad} outside [1, {n}]")

    def to_text(self) -> str:
        body = " ".join(str(m) for m in self.modes)
        if self.kind == "SQZ":
            return f"SQZ {body} {self.alpha!r}"
        return f"{self.kind} {body}"


def cnot(j: int, k: int) -> GaussianGate:
    return GaussianGate("CNOT", (j, k))


def icnot(j: int, k: int) -> GaussianGate:
    return GaussianGate("ICNOT", (j, k))


def cz(j: int, k: int) -> GaussianGate:
    return GaussianGate("CZ", (j, k))


def hadamard(j: int) -> GaussianGate:
    return GaussianGate("H", (j,))


def squeeze(j: int, alpha: float) -> GaussianGate:
    return GaussianGate("SQZ", (j,), float(alpha))


@dataclass(frozen=True)
class GaussianCircuit:
    """Ordered gate list on ``n`` modes (temporal order, first gate first)."""

    n: int
    gates: tuple[GaussianGate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a circuit needs at least one mode")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            g.check_modes(self.n)

    def __add__(self, other: "GaussianCircuit") -> "GaussianCircuit":
        if other.n != self.n:
            raise ValueError("cannot concatenate circuits on different mode counts")
        return GaussianCircuit(self.n, self.gates + other.gates)

    def to_text(self) -> str:
        return "".join(g.to_text() + "\n" for g in self.gates)

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> "GaussianCircuit":
        """Parse the line format ``CNOT 1 3`` / ``H 2`` / ``SQZ 2 4.0``.

        Blank lines and ``#`` comments are skipped.  When ``n`` is omitted the
        largest mode index in the text is used.
        """
        gates = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            kind = parts[0].upper()
            try:
                if kind == "SQZ":
                    if len(parts) != 3:
                        raise ValueError("SQZ expects a mode and a parameter")
                    gates.append(squeeze(int(parts[1]), float(parts[2])))
                else:
                    gates.append(GaussianGate(kind, tuple(int(p) for p in parts[1:])))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        if n is None:
            n = max((max(g.modes) for g in gates), default=1)
        return cls(n, tuple(gates))


def gate_symplectic(gate: GaussianGate, n: int) -> np.ndarray:
    """Row table of a single gate as a 2n x 2n matrix.

    Args:
        gate: The gate.
        n: Number of modes.

    Returns:
        Matrix M such that the gate rewrites the quadrature vector r as M r.
        CNOT_{j->k}: q_k -> q_k - q_j, p_j -> p_j + p_k.
        ICNOT_{j->k} (inverse SUM): q_k -> q_k + q_j, p_j -> p_j - p_k.
        CZ_{j,k}: p_j -> p_j - q_k, p_k -> p_k - q_j.
        H: q -> p, p -> -q.  SQZ(alpha): q -> q / sqrt(alpha), p -> sqrt(alpha) p.

    Raises:
        ValueError: If a mode index is outside [1, n].
    """
    gate.check_modes(n)
    m = np.eye(2 * n)
    if gate.kind in ("CNOT", "ICNOT", "CZ"):
        j, k = (i - 1 for i in gate.modes)
        sign = 1.0 if gate.kind == "CNOT" else -1.0
        if gate.kind == "CZ":
            m[n + j, k] = -1.0
            m[n + k, j] = -1.0
        else:
            m[k, j] = -sign
            m[n + j, n + k] = sign
    elif gate.kind == "H":
        j = gate.modes[0] - 1
        m[j, j] = 0.0
        m[j, n + j] = 1.0
        m[n + j, n + j] = 0.0
        m[n + j, j] = -1.0
    else:
        j = gate.modes[0] - 1
        s = math.sqrt(gate.alpha)
        m[j, j] = 1.0 / s
        m[n + j, n + j] = s
    return m


def compose(circuit: GaussianCircuit) -> np.ndarray:
    """Matrix of a whole circuit; the empty circuit gives the identity."""
    a = np.eye(2 * circuit.n)
    for g in circuit.gates:
        a = a @ gate_symplectic(g, circuit.n)
    return a


def check_symplectic(a: np.ndarray, tol: float = SYMPLECTIC_TOL) -> bool:
    """True iff ``a`` is 2n x 2n and ``a @ omega @ a.T`` equals omega within ``tol``."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
        return False
    om = omega(a.shape[0] // 2)
    return bool(np.max(np.abs(a @ om @ a.T - om)) <= tol)


@dataclass(frozen=True)
class EncoderBlocks:
    """Row blocks of an encoder matrix: Q (k), G (n-k), P (k), D (n-k)."""

    Q: np.ndarray
    G: np.ndarray
    P: np.ndarray
    D: np.ndarray

    @property
    def A1(self) -> np.ndarray:
        return self.G

    @property
    def A2(self) -> np.ndarray:
        return np.vstack([self.Q, self.P])

    @property
    def A3(self) -> np.ndarray:
        return np.vstack([self.G, self.D])

    def stack(self) -> np.ndarray:
        return np.vstack([self.Q, self.G, self.P, self.D])


def split_blocks(a: np.ndarray, k: int) -> EncoderBlocks:
    """Cut an encoder matrix into its Q, G, P, D row blocks.

    Raises:
        ValueError: If ``k`` is not in [1, n-1] or ``a`` is not square and even.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
        raise ValueError(f"expected a square 2n x 2n matrix, got shape {a.shape}")
    n = a.shape[0] // 2
    if not 1 <= k < n:
        raise ValueError(f"logical mode count k={k} must satisfy 1 <= k < n={n}")
    return EncoderBlocks(
        Q=a[:k].copy(), G=a[k:n].copy(), P=a[n : n + k].copy(), D=a[n + k :].copy()
    )


def reduce_generator_rows(a3: np.ndarray, max_sweeps: int = 1000) -> np.ndarray:
    """Greedy pairwise integer row reduction.

    Repeatedly replaces row i by ``row_i - c * row_j`` with
    ``c = round(<r_i, r_j> / <r_j, r_j>)`` whenever that strictly shortens row i.
    The result is T @ a3 for a unimodular integer T, so integer combinations
    of the rows (and the row space) are unchanged.

    Raises:
        ValueError: If the rows are linearly dependent.
    """
    b = np.array(a3, dtype=float, copy=True)
    if b.ndim != 2:
        raise ValueError("expected a 2-D generator matrix")
    if np.linalg.matrix_rank(b) < b.shape[0]:
        raise ValueError(
            f"generator rows are dependent: rank {np.linalg.matrix_rank(b)} < {b.shape[0]} rows"
        )
    rows = b.shape[0]
    for _ in range(max_sweeps):
        changed = False
        for i in range(rows):
            for j in range(rows):
                if i == j:
                    continue
                c = np.round(b[i] @ b[j] / (b[j] @ b[j]))
                if c == 0:
                    continue
                cand = b[i] - c * b[j]
                # strict decrease with slack, so float noise cannot cycle
                if cand @ cand < b[i] @ b[i] - 1e-9:
                    b[i] = cand
                    changed = True
        if not changed:
            break
    return b


def circuit_from_tuples(n: int, spec: Iterable[Sequence]) -> GaussianCircuit:
    """Build a circuit from tuples like ``("CNOT", 1, 2)`` or ``("SQZ", 2, 4.0)``."""
    gates = []
    for item in spec:
        kind, *rest = item
        if kind == "SQZ":
            gates.append(squeeze(int(rest[0]), float(rest[1])))
        else:
            gates.append(GaussianGate(kind, tuple(int(r) for r in rest)))
    return GaussianCircuit(n, tuple(gates))
