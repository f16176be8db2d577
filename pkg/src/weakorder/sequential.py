"""Two successive von Neumann measurements with finite coupling.

The system couples impulsively to pointer 1 through eps1 * A * P1, then to
pointer 2 through eps2 * B * P2. Pointer correlations after both kicks reduce
to a triple sum over eigenprojector clusters of A and B weighted by
translation-overlap kernels of each pointer:

    <F1c * G2> = sum_{n, n', m} Tr_s(rho_s P_{a_n'} P_{b_m} P_{a_n})
                 * K1(eps1 a_n, eps1 a_n'; F1c) * K2(eps2 b_m, eps2 b_m; G2)

with F1c = F1 - Tr(rho_M1 F1). Cross terms between different eigenvalues of B
vanish exactly because eigenprojectors are orthogonal, so only the diagonal
m appears on the second pointer. A dense tensor-product oracle builds the
full post-interaction state for independent verification on small grids.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    DimensionMismatch,
    ImaginaryResidualTooLarge,
    OracleTooLarge,
)
from .operators import DensityMatrix, Observable
from .pointer import (
    GRID,
    PointerObservable,
    PointerState,
    observable_matrix,
    translation_matrix,
)

TOL_IMAG = 1e-10
ORACLE_MAX_DIM = 2 ** 14


@dataclass(frozen=True)
class MeasurementSetup:
    """System state, the two measured observables, pointers, and couplings.

    ``first`` is measured at the earlier time with strength eps1, ``second``
    later with strength eps2.
    """

    rho_s: DensityMatrix
    first: Observable
    second: Observable
    pointer1: PointerState
    pointer2: PointerState
    eps1: float
    eps2: float

    def __post_init__(self):
        dim = self.rho_s.dim
        if self.first.dim != dim or self.second.dim != dim:
            raise DimensionMismatch(
                f"observable dims ({self.first.dim}, {self.second.dim}) != state dim {dim}"
            )
        if not (np.isfinite(self.eps1) and np.isfinite(self.eps2)):
            raise ValueError("couplings must be finite")

    def with_couplings(self, eps1: float, eps2: float) -> "MeasurementSetup":
        return replace(self, eps1=eps1, eps2=eps2)

    def with_swapped_observables(self) -> "MeasurementSetup":
        """Same ingredients, measurement order reversed."""
        return replace(self, first=self.second, second=self.first)


def _projector_weights(setup: MeasurementSetup) -> np.ndarray:
    """S[n, n', m] = Tr_s(rho_s P_{a_n'} P_{b_m} P_{a_n})."""
    a_projs = [pair.projector for pair in setup.first.eigensystem]
    b_projs = [pair.projector for pair in setup.second.eigensystem]
    rho = setup.rho_s.matrix
    # Tr(rho Pa' Pb Pa) = Tr((Pa rho Pa') Pb); batch the middle products.
    middles = np.stack([
        np.stack([pa_n @ rho @ pa_np for pa_np in a_projs]) for pa_n in a_projs
    ])  # (n, n', d, d)
    b_stack = np.stack(b_projs)  # (m, d, d)
    return np.einsum("npij,mji->npm", middles, b_stack)


def _second_pointer_diagonal(setup: MeasurementSetup, g2: PointerObservable) -> np.ndarray:
    b_vals = np.array([pair.value for pair in setup.second.eigensystem])
    shifts = setup.eps2 * b_vals
    return np.diagonal(setup.pointer2.kernel_matrix(shifts, shifts, g2))


def _first_pointer_kernel(setup: MeasurementSetup, f1: PointerObservable) -> np.ndarray:
    a_vals = np.array([pair.value for pair in setup.first.eigensystem])
    shifts = setup.eps1 * a_vals
    return setup.pointer1.kernel_matrix(shifts, shifts, f1)


def _real_or_raise(value: complex, what: str) -> float:
    if abs(value.imag) > TOL_IMAG:
        raise ImaginaryResidualTooLarge(f"{what} has imaginary part {value.imag:.3e}")
    return value.real


def _require_position_diagonal(g2: PointerObservable) -> None:
    if not g2.is_position_diagonal:
        raise ValueError("second-pointer observable must be diagonal in Q (measured after the kick)")


def expectation(setup: MeasurementSetup, f1: PointerObservable, g2: PointerObservable) -> float:
    """<F1 (x) G2> on the post-interaction state, via the factorized sum."""
    _require_position_diagonal(g2)
    weights = _projector_weights(setup)
    k1 = _first_pointer_kernel(setup, f1)
    k2 = _second_pointer_diagonal(setup, g2)
    total = complex(np.einsum("npm,np,m->", weights, k1, k2))
    return _real_or_raise(total, "pointer expectation")


def correlation(setup: MeasurementSetup, f1: PointerObservable,
                g2: PointerObservable | None = None) -> float:
    """Centered cross-correlation <[F1 - Tr(rho_M1 F1)] G2>.

    G2 defaults to Q2. F1 may be any pointer-1 observable; G2 must be
    diagonal in position since it is read out after both kicks.
    """
    if g2 is None:
        g2 = PointerObservable.q()
    _require_position_diagonal(g2)
    center = setup.pointer1.moment(f1)
    weights = _projector_weights(setup)
    k1 = _first_pointer_kernel(setup, f1)
    k1_id = _first_pointer_kernel(setup, PointerObservable.identity())
    k2 = _second_pointer_diagonal(setup, g2)
    total = complex(np.einsum("npm,np,m->", weights, k1 - center * k1_id, k2))
    return _real_or_raise(total, "pointer correlation")


def pointer1_mean(setup: MeasurementSetup, f1: PointerObservable | None = None) -> float:
    """<F1> after both kicks (defaults to <Q1>); exact at any coupling."""
    return expectation(setup, f1 if f1 is not None else PointerObservable.q(),
                       PointerObservable.identity())


def pointer2_mean(setup: MeasurementSetup, g2: PointerObservable | None = None) -> float:
    """<G2> after both kicks (defaults to <Q2>)."""
    return expectation(setup, PointerObservable.identity(),
                       g2 if g2 is not None else PointerObservable.q())


@dataclass(frozen=True)
class OracleState:
    """Dense post-interaction state on system (x) pointer1 (x) pointer2."""

    matrix: np.ndarray
    dims: tuple[int, int, int]
    grid1: object
    grid2: object

    def expectation(self, system_op=None, f1: PointerObservable | None = None,
                    g2: PointerObservable | None = None) -> complex:
        """Tr(rho_full (S (x) F1 (x) G2)); omitted factors default to identity."""
        d, n1, n2 = self.dims
        s_mat = np.eye(d, dtype=complex) if system_op is None else np.asarray(
            getattr(system_op, "matrix", system_op), dtype=complex)
        f1_mat = np.eye(n1, dtype=complex) if f1 is None else observable_matrix(f1, self.grid1)
        g2_mat = np.eye(n2, dtype=complex) if g2 is None else observable_matrix(g2, self.grid2)
        op = np.kron(np.kron(s_mat, f1_mat), g2_mat)
        return complex(np.trace(self.matrix @ op))


def full_state_oracle(setup: MeasurementSetup) -> OracleState:
    """Dense post-interaction density matrix, for verification on small grids.

    Builds sum_{n,n',m,m'} (P_bm P_an rho_s P_an' P_bm') (x)
    (T1_n rho_M1 T1_n'^dag) (x) (T2_m rho_M2 T2_m'^dag) explicitly.
    Both pointers must use the grid backend; total dimension is capped.
    """
    p1, p2 = setup.pointer1, setup.pointer2
    if p1.backend != GRID or p2.backend != GRID:
        raise OracleTooLarge("full oracle needs grid pointers on both arms")
    d = setup.rho_s.dim
    n1, n2 = p1.grid.n_points, p2.grid.n_points
    total_dim = d * n1 * n2
    if total_dim > ORACLE_MAX_DIM:
        raise OracleTooLarge(f"total dimension {total_dim} exceeds cap {ORACLE_MAX_DIM}")

    a_pairs = setup.first.eigensystem
    b_pairs = setup.second.eigensystem
    rho_s = setup.rho_s.matrix
    rho_1 = p1.density_matrix()
    rho_2 = p2.density_matrix()
    t1 = [translation_matrix(p1.grid, setup.eps1 * pair.value) for pair in a_pairs]
    t2 = [translation_matrix(p2.grid, setup.eps2 * pair.value) for pair in b_pairs]

    out = np.zeros((total_dim, total_dim), dtype=complex)
    for m, (_, pb_m) in enumerate(b_pairs):
        for mp, (_, pb_mp) in enumerate(b_pairs):
            block_2 = t2[m] @ rho_2 @ t2[mp].conj().T
            for n, (_, pa_n) in enumerate(a_pairs):
                for np_, (_, pa_np) in enumerate(a_pairs):
                    sys_block = pb_m @ pa_n @ rho_s @ pa_np @ pb_mp
                    if np.max(np.abs(sys_block)) < 1e-300:
                        continue
                    block_1 = t1[n] @ rho_1 @ t1[np_].conj().T
                    out += np.kron(np.kron(sys_block, block_1), block_2)
    herm_defect = float(np.max(np.abs(out - out.conj().T)))
    trace_defect = abs(complex(np.trace(out)) - 1.0)
    if herm_defect > 1e-10 or trace_defect > 1e-10:
        raise ImaginaryResidualTooLarge(
            f"oracle state defects: hermiticity {herm_defect:.3e}, trace {trace_defect:.3e}"
        )
    return OracleState(out, (d, n1, n2), p1.grid, p2.grid)


def projective_coupling(sigma_q2: float, observable: Observable, factor: float = 25.0) -> float:
    """Coupling that separates the second pointer's peaks by >> their width.

    eps2 = factor * sigma_q2 / (smallest eigenvalue gap); with this the second
    kick approximates a projective measurement of the observable.
    """
    values = np.array(observable.eigenvalues)
    if values.size < 2:
        raise ValueError("observable has a single eigenvalue cluster; nothing to separate")
    gap = float(np.min(np.diff(np.sort(values))))
    return factor * sigma_q2 / gap


def oracle_correlation(setup: MeasurementSetup, f1: PointerObservable,
                       g2: PointerObservable | None = None) -> float:
    """Centered correlation evaluated on the dense oracle state."""
    if g2 is None:
        g2 = PointerObservable.q()
    state = full_state_oracle(setup)
    center = setup.pointer1.moment(f1)
    raw = state.expectation(f1=f1, g2=g2)
    norm = state.expectation(g2=g2)
    return _real_or_raise(raw - center * norm, "oracle correlation")
