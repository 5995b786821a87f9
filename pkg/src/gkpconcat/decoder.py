"""Two-layer decoders for schemes I, II, III and the unbiased GKP-repetition code.

All decoders take noise of shape (2n,) or (batch, 2n) and return a
``DecodeResult`` with matching leading dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import CodeInstance, unbiased_syndrome_map
from .lattice import SQRT_PI, logical_error_flags, remainder
from .symplectic import reduce_generator_rows

GRAM_COND_LIMIT = 1e6


class SingularSystemError(ValueError):
    """A Gram matrix A A^T is singular or too badly conditioned to invert."""


def _right_pinv(a: np.ndarray, name: str = "A") -> np.ndarray:
    """A^T (A A^T)^{-1} via a direct solve, guarded on the condition number."""
    a = np.asarray(a, dtype=float)
    gram = a @ a.T
    rank = np.linalg.matrix_rank(a)
    if rank < a.shape[0]:
        raise SingularSystemError(
            f"{name}: rows are dependent (rank {rank} of {a.shape[0]}), {name} {name}^T is singular"
        )
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > GRAM_COND_LIMIT:
        raise SingularSystemError(f"{name}: Gram matrix condition number {cond:.3g} exceeds {GRAM_COND_LIMIT:g}")
    return np.linalg.solve(gram, a).T


def least_norm_solve(a, z) -> np.ndarray:
    """Shortest xi with ``a @ xi = z``: xi = A^T (A A^T)^{-1} z.

    ``z`` may carry leading batch dimensions.

    Raises:
        SingularSystemError: If A A^T cannot be inverted safely.
    """
    pinv = _right_pinv(a)
    return np.asarray(z, dtype=float) @ pinv.T


def kernel_projection(a) -> np.ndarray:
    """Orthogonal projector onto ker(A): I - A^T (A A^T)^{-1} A."""
    a = np.asarray(a, dtype=float)
    if a.shape[0] >= a.shape[1] and np.linalg.matrix_rank(a) == a.shape[1]:
        return np.zeros((a.shape[1], a.shape[1]))
    return np.eye(a.shape[1]) - _right_pinv(a) @ a


@dataclass(frozen=True)
class SyndromeRecord:
    """Syndromes of both layers.

    ``layer1``: scheme I 2n GKP phases, scheme II n-k real nullifier values,
    scheme III 2(n-k) GKP phases (4n syndromes for the unbiased code).
    ``layer2``: scheme I parity bits, otherwise 2k logical GKP phases.
    """

    layer1: np.ndarray
    layer2: np.ndarray


@dataclass(frozen=True)
class DecodeResult:
    """Output of one decode.

    Attributes:
        xi_final: Residual noise after both layers, mapped by A_enc.
        xi_final_logical: The logical-mode rows (q then p) of ``xi_final``.
        flags: Per-quadrature logical error flags from ``xi_final_logical``.
        layer1_logical: Logical residual before the layer-2 GKP recovery
            (schemes II/III); equals ``xi_final_logical`` for scheme I.
        layer1_flags: Flags evaluated on ``layer1_logical``.
        syndromes: Both layers' syndromes.
    """

    xi_final: np.ndarray
    xi_final_logical: np.ndarray
    flags: np.ndarray
    layer1_logical: np.ndarray
    layer1_flags: np.ndarray
    syndromes: SyndromeRecord

    @property
    def logical_error(self) -> np.ndarray:
        return np.any(self.flags, axis=-1)


@dataclass(frozen=True)
class DecoderPlan:
    """Per-code matrices computed once and shared by every batch."""

    code: CodeInstance
    a2: np.ndarray
    logical_spacing: np.ndarray
    # scheme I
    mode_spacing: np.ndarray | None = None
    table: np.ndarray | None = None
    bit_weights: np.ndarray | None = None
    # scheme II
    pinv1: np.ndarray | None = None
    proj1: np.ndarray | None = None
    layer2_map: np.ndarray | None = None
    # scheme III
    a3: np.ndarray | None = None
    a3_periods: np.ndarray | None = None
    pinv3: np.ndarray | None = None
    pinv2: np.ndarray | None = None


def _logical_spacing(code: CodeInstance) -> np.ndarray:
    lat = code.logical_lattice
    return np.concatenate([np.full(code.k, lat.q_spacing), np.full(code.k, lat.p_spacing)])


def prepare(code: CodeInstance, reduce_generators: bool | None = None) -> DecoderPlan:
    """Precompute the matrices the code's scheme needs.

    Args:
        code: A built code.
        reduce_generators: Override ``code.spec.reduce_generators`` (scheme III).
    """
    a2 = code.blocks.A2
    spacing = _logical_spacing(code)
    if code.scheme == "I":
        q = np.array([lat.q_spacing for lat in code.lattices])
        p = np.array([lat.p_spacing for lat in code.lattices])
        r = code.pauli_stabilizers.shape[0]
        return DecoderPlan(
            code=code, a2=a2, logical_spacing=spacing, mode_spacing=np.concatenate([q, p]),
            table=code.correction_table(), bit_weights=1 << np.arange(r - 1, -1, -1),
        )
    if code.scheme == "II":
        a1 = code.blocks.A1
        pinv1 = _right_pinv(a1, "A1")
        proj1 = np.eye(2 * code.n) - pinv1 @ a1
        m = a2 @ proj1
        layer2_map = proj1 @ _right_pinv(m, "A2 P")
        return DecoderPlan(
            code=code, a2=a2, logical_spacing=spacing, pinv1=pinv1, proj1=proj1, layer2_map=layer2_map
        )
    lat = code.aux_lattice
    nk = code.n - code.k
    a3 = code.blocks.A3
    periods = np.concatenate([np.full(nk, lat.q_period), np.full(nk, lat.p_period)])
    if code.spec.reduce_generators if reduce_generators is None else reduce_generators:
        if np.allclose(periods, periods[0]):
            a3 = reduce_generator_rows(a3)
        else:
            # rows with different periods only combine after normalizing to period 1
            a3 = reduce_generator_rows(a3 / periods[:, None])
            periods = np.ones_like(periods)
    return DecoderPlan(
        code=code, a2=a2, logical_spacing=spacing, a3=a3, a3_periods=periods,
        pinv3=_right_pinv(a3, "A3"), pinv2=_right_pinv(a2, "A2"),
    )


def _as_batch(xi, code: CodeInstance) -> tuple[np.ndarray, bool]:
    x = np.asarray(xi, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.ndim != 2 or x.shape[1] != 2 * code.n:
        raise ValueError(f"expected noise with {2 * code.n} entries per sample, got shape {np.shape(xi)}")
    return x, single


def _logical_rows(v: np.ndarray, code: CodeInstance) -> np.ndarray:
    n, k = code.n, code.k
    return np.concatenate([v[:, :k], v[:, n : n + k]], axis=1)


def _finish(code, plan, residual, layer1_logical, z1, z2, single) -> DecodeResult:
    xi_final = residual @ code.A_enc.T
    logical = _logical_rows(xi_final, code)
    lat = code.logical_lattice
    res = DecodeResult(
        xi_final=xi_final,
        xi_final_logical=logical,
        flags=logical_error_flags(logical, lat),
        layer1_logical=layer1_logical,
        layer1_flags=logical_error_flags(layer1_logical, lat),
        syndromes=SyndromeRecord(layer1=z1, layer2=z2),
    )
    if single:
        return DecodeResult(
            xi_final=res.xi_final[0], xi_final_logical=res.xi_final_logical[0], flags=res.flags[0],
            layer1_logical=res.layer1_logical[0], layer1_flags=res.layer1_flags[0],
            syndromes=SyndromeRecord(res.syndromes.layer1[0], res.syndromes.layer2[0]),
        )
    return res


def _check_scheme(code: CodeInstance, scheme: str, plan: DecoderPlan | None) -> DecoderPlan:
    if code.scheme != scheme:
        raise ValueError(f"code {code.code_id} is built for scheme {code.scheme}, not {scheme}")
    return prepare(code) if plan is None else plan


def decode_scheme1(xi, code: CodeInstance, plan: DecoderPlan | None = None) -> DecodeResult:
    """Per-mode GKP correction followed by a minimum-weight Pauli lookup.

    Layer 1 leaves the lattice part xi - R_s(xi) of every quadrature.  Each
    Pauli stabilizer's parity is read off the integer multiples, the table
    correction is subtracted, and A_enc maps the residual to the logical modes.
    """
    plan = _check_scheme(code, "I", plan)
    x, single = _as_batch(xi, code)
    s = plan.mode_spacing
    z = remainder(x, s)
    m = np.rint((x - z) / s).astype(np.int64)
    bits = (m @ code.pauli_stabilizers.T) % 2
    pattern = plan.table[bits @ plan.bit_weights]
    residual = (m - pattern) * s
    logical = _logical_rows(residual @ code.A_enc.T, code)
    return _finish(code, plan, residual, logical, z, bits, single)


def decode_scheme2(xi, code: CodeInstance, plan: DecoderPlan | None = None) -> DecodeResult:
    """Analog nullifier correction, then logical GKP correction.

    Layer 1 projects the noise onto ker(A1).  Layer 2 measures
    z' = R(A2 P xi) and applies the least-norm recovery, leaving the logical
    residual A2 P xi - R(A2 P xi).
    """
    plan = _check_scheme(code, "II", plan)
    x, single = _as_batch(xi, code)
    z = x @ code.blocks.A1.T
    xp = x @ plan.proj1.T
    f = xp @ plan.a2.T
    z2 = remainder(f, plan.logical_spacing)
    residual = xp - z2 @ plan.layer2_map.T
    return _finish(code, plan, residual, f, z, z2, single)


def scheme2_fixed_z_residual(xi, code: CodeInstance, plan: DecoderPlan | None = None) -> np.ndarray:
    """Logical residual when layer 2 treats the nullifier outcomes z as constants.

    Here xi' = xi - A1^T (A1 A1^T)^{-1} z and the recovery is
    A2^T (A2 A2^T)^{-1} z' - P_{A2} A1^T (A1 A1^T)^{-1} z.  The logical residual
    must match ``decode_scheme2``.
    """
    plan = _check_scheme(code, "II", plan)
    x, single = _as_batch(xi, code)
    a2 = plan.a2
    z = x @ code.blocks.A1.T
    est1 = z @ plan.pinv1.T
    xp = x - est1
    z2 = remainder(xp @ a2.T, plan.logical_spacing)
    pinv2 = _right_pinv(a2, "A2")
    proj2 = np.eye(2 * code.n) - pinv2 @ a2
    rec = z2 @ pinv2.T - est1 @ proj2.T
    out = (xp - rec) @ a2.T
    return out[0] if single else out


def decode_scheme3(xi, code: CodeInstance, plan: DecoderPlan | None = None) -> DecodeResult:
    """Auxiliary GKP-stabilizer correction, then the linearized logical correction.

    Layer 1: z = R(A3 xi), xi* = A3^T (A3 A3^T)^{-1} z, xi' = xi - xi*.
    Layer 2: z' = R(A2 xi') and xi'* = A2^T (A2 A2^T)^{-1} (z' + A2 xi*).  The
    residual xi - xi'* has logical part A2 xi' - z'.
    """
    plan = _check_scheme(code, "III", plan)
    x, single = _as_batch(xi, code)
    z = remainder(x @ plan.a3.T, plan.a3_periods)
    est1 = z @ plan.pinv3.T
    f = (x - est1) @ plan.a2.T
    z2 = remainder(f, plan.logical_spacing)
    rec = (z2 + est1 @ plan.a2.T) @ plan.pinv2.T
    residual = x - rec
    return _finish(code, plan, residual, f, z, z2, single)


def decode_unbiased(xi, code: CodeInstance, plan: DecoderPlan | None = None) -> DecodeResult:
    """Closed-form decoder of the unbiased GKP-repetition code.

    Syndromes follow the code's explicit linear forms; the estimates are

        zbar_q = (sum_{k<=n} z_{k,p} + sum_{k>n} z_{k,q}) / (n+1)
        zbar_p = -((n+1) sum_{k>n} z_{k,p} - sum_{k<=n} z_{k,q}) / (n+1)

    and the layer-1 logical residual is the unreduced logical form minus the
    estimate.  Both entries have variance sigma^2 / (n+1) at small noise.
    """
    if code.spec.family != "unbiased":
        raise ValueError(f"code {code.code_id} is not an unbiased GKP-repetition code")
    plan = _check_scheme(code, "III", plan)
    x, single = _as_batch(xi, code)
    n = code.spec.n_aux_pairs
    modes = 2 * n + 1
    syn = unbiased_syndrome_map(n, x)
    zq = syn[:, 1:modes]
    zp = syn[:, modes + 1 :]
    zbar_q = (zp[:, :n].sum(axis=1) + zq[:, n:].sum(axis=1)) / (n + 1)
    zbar_p = -((n + 1) * zp[:, n:].sum(axis=1) - zq[:, :n].sum(axis=1)) / (n + 1)
    q, p = x[:, :modes], x[:, modes:]
    form_q = p[:, 1 : n + 1].sum(axis=1) - p[:, 0]
    form_p = q[:, 0] - p[:, n + 1 :].sum(axis=1)
    f = np.stack([form_q - zbar_q, form_p - zbar_p], axis=1)
    z2 = remainder(f, SQRT_PI)
    # full residual through the generic machinery, so xi_final is defined
    generic = decode_scheme3(x, code, plan)
    residual_logical = f - z2
    lat = code.logical_lattice
    res = DecodeResult(
        xi_final=generic.xi_final,
        xi_final_logical=residual_logical,
        flags=logical_error_flags(residual_logical, lat),
        layer1_logical=f,
        layer1_flags=logical_error_flags(f, lat),
        syndromes=SyndromeRecord(layer1=np.concatenate([zq, zp], axis=1), layer2=z2),
    )
    if single:
        return DecodeResult(
            res.xi_final[0], res.xi_final_logical[0], res.flags[0], res.layer1_logical[0],
            res.layer1_flags[0], SyndromeRecord(res.syndromes.layer1[0], res.syndromes.layer2[0]),
        )
    return res


def decode(xi, code: CodeInstance, plan: DecoderPlan | None = None) -> DecodeResult:
    """Dispatch on the code's scheme (and family for the unbiased code)."""
    if code.spec.family == "unbiased":
        return decode_unbiased(xi, code, plan)
    return {"I": decode_scheme1, "II": decode_scheme2, "III": decode_scheme3}[code.scheme](xi, code, plan)


def count_logical_errors(xi, code: CodeInstance, plan: DecoderPlan | None = None) -> int:
    return int(np.count_nonzero(decode(xi, code, plan).logical_error))


def pseudoinverse_pauli_prediction(xi, code: CodeInstance) -> np.ndarray:
    """Scheme I correction predicted by the least-norm estimate instead of a table.

    The stabilizer values z = R_{2s}(G xi) give xi* = G^T (G G^T)^{-1} z, and
    the nearest lattice point xi* - R_s(xi*) is read as a Pauli pattern mod 2.
    Meaningful on square-lattice codes whose G rows are integer.

    Returns:
        Integer array (..., 2n) with entries in {0, 1}.
    """
    plan = _check_scheme(code, "I", None)
    x, single = _as_batch(xi, code)
    s = plan.mode_spacing
    g = code.blocks.A1
    z = remainder(x @ g.T, 2.0 * SQRT_PI)
    est = z @ _right_pinv(g, "G").T
    pattern = np.mod(np.rint((est - remainder(est, s)) / s).astype(np.int64), 2)
    return pattern[0] if single else pattern
