"""Dense Hermitian operator algebra on small finite-dimensional Hilbert spaces.

Everything here is plain numpy: observables carry a cached spectral
decomposition (eigenvalues merged into degenerate clusters, one orthogonal
projector per cluster), density matrices are validated on construction, and
the trace functionals used throughout the package live at module level.
"""

from __future__ import annotations

import math
from typing import Iterable, NamedTuple

import numpy as np

from .errors import (
    DecompositionFailure,
    DimensionMismatch,
    NonHermitianInput,
)

TOL_HERM = 1e-12
TOL_DEGEN = 1e-9
TOL_PROJECTOR = 1e-10
TOL_TRACE = 1e-12
TOL_PSD = 1e-10


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr)
    out.flags.writeable = False
    return out


def as_matrix(op) -> np.ndarray:
    """Coerce an Observable, DensityMatrix, or array-like to a complex ndarray."""
    mat = getattr(op, "matrix", op)
    return np.asarray(mat, dtype=complex)


def _require_square(mat: np.ndarray) -> int:
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {mat.shape}")
    return mat.shape[0]


def _require_hermitian(mat: np.ndarray, tol: float) -> None:
    defect = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    if defect > tol:
        raise NonHermitianInput(f"Hermiticity defect {defect:.3e} exceeds {tol:.1e}")


class EigenPair(NamedTuple):
    """One degenerate cluster: representative eigenvalue and its projector."""

    value: float
    projector: np.ndarray


def spectral_decompose(
    matrix,
    tol_herm: float = TOL_HERM,
    tol_degen: float = TOL_DEGEN,
) -> list[EigenPair]:
    """Decompose a Hermitian matrix into (eigenvalue, projector) clusters.

    Eigenvalues are sorted ascending; neighbours closer than ``tol_degen``
    are merged into a single cluster whose projector has rank equal to the
    multiplicity. Projectors are symmetrised so they are exactly Hermitian
    and sum to the identity up to rounding.

    Parameters
    ----------
    matrix : array-like or Observable
        Square Hermitian matrix.
    tol_herm : float
        Maximum allowed elementwise deviation from Hermiticity.
    tol_degen : float
        Gap below which adjacent eigenvalues are treated as degenerate.

    Returns
    -------
    list of EigenPair
        One entry per degenerate cluster, eigenvalues ascending.
    """
    mat = as_matrix(matrix)
    _require_square(mat)
    _require_hermitian(mat, tol_herm)
    try:
        values, vectors = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailure(str(exc)) from exc
    pairs: list[EigenPair] = []
    start = 0
    for stop in range(1, len(values) + 1):
        if stop == len(values) or values[stop] - values[stop - 1] >= tol_degen:
            block = vectors[:, start:stop]
            proj = block @ block.conj().T
            proj = 0.5 * (proj + proj.conj().T)
            pairs.append(EigenPair(float(np.mean(values[start:stop])), _freeze(proj)))
            start = stop
    return pairs


class Observable:
    """Hermitian operator with a cached spectral decomposition.

    Attributes
    ----------
    matrix : ndarray
        Read-only complex matrix.
    dim : int
        Hilbert-space dimension.
    eigensystem : list of EigenPair
        Degenerate clusters, eigenvalues ascending.
    """

    def __init__(self, matrix, tol_herm: float = TOL_HERM, tol_degen: float = TOL_DEGEN):
        mat = as_matrix(matrix)
        self.dim = _require_square(mat)
        self.eigensystem = spectral_decompose(mat, tol_herm=tol_herm, tol_degen=tol_degen)
        self.matrix = _freeze(mat)

    @property
    def eigenvalues(self) -> list[float]:
        return [pair.value for pair in self.eigensystem]

    def __repr__(self) -> str:
        vals = ", ".join(f"{v:.6g}" for v in self.eigenvalues)
        return f"{type(self).__name__}(dim={self.dim}, eigenvalues=[{vals}])"


class Projector(Observable):
    """Orthogonal projector: Hermitian, idempotent, eigenvalues in {0, 1}."""

    def __init__(self, matrix, tol: float = TOL_PROJECTOR):
        super().__init__(matrix)
        defect = float(np.max(np.abs(self.matrix @ self.matrix - self.matrix)))
        if defect > tol:
            raise ValueError(f"idempotence defect {defect:.3e} exceeds {tol:.1e}")
        self.rank = int(round(np.real(np.trace(self.matrix))))

    @classmethod
    def onto(cls, ket) -> "Projector":
        """Rank-one projector onto a (not necessarily normalised) ket."""
        vec = np.asarray(ket, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValueError("cannot project onto the zero vector")
        vec = vec / norm
        return cls(np.outer(vec, vec.conj()))


class DensityMatrix:
    """Validated density matrix: Hermitian, unit trace, positive semidefinite."""

    def __init__(
        self,
        matrix,
        tol_herm: float = TOL_HERM,
        tol_trace: float = TOL_TRACE,
        tol_psd: float = TOL_PSD,
    ):
        mat = as_matrix(matrix)
        self.dim = _require_square(mat)
        _require_hermitian(mat, tol_herm)
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > tol_trace:
            raise ValueError(f"trace {trace:.12g} differs from 1 beyond {tol_trace:.1e}")
        lowest = float(np.min(np.linalg.eigvalsh(mat)))
        if lowest < -tol_psd:
            raise ValueError(f"negative eigenvalue {lowest:.3e} below -{tol_psd:.1e}")
        self.matrix = _freeze(mat)

    @classmethod
    def pure(cls, ket) -> "DensityMatrix":
        vec = np.asarray(ket, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValueError("cannot normalise the zero vector")
        vec = vec / norm
        return cls(np.outer(vec, vec.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim) / dim)

    def expectation(self, op) -> complex:
        return trace_product(self, [op])

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


def trace_product(rho, ops: Iterable) -> complex:
    """Tr(rho * op_1 * op_2 * ...), operators applied left to right."""
    acc = as_matrix(rho)
    dim = _require_square(acc)
    for op in ops:
        mat = as_matrix(op)
        if _require_square(mat) != dim:
            raise DimensionMismatch(f"operator dim {mat.shape[0]} != state dim {dim}")
        acc = acc @ mat
    return complex(np.trace(acc))


def trace_commutator(rho, a, b) -> complex:
    """Tr(rho * [A, B])."""
    return trace_product(rho, [a, b]) - trace_product(rho, [b, a])


def trace_anticommutator(rho, a, b) -> complex:
    """Tr(rho * {A, B})."""
    return trace_product(rho, [a, b]) + trace_product(rho, [b, a])


# Named qubit presets used by configs and demos.
PAULI_X = _freeze(np.array([[0, 1], [1, 0]], dtype=complex))
PAULI_Y = _freeze(np.array([[0, -1j], [1j, 0]], dtype=complex))
PAULI_Z = _freeze(np.array([[1, 0], [0, -1]], dtype=complex))
IDENTITY_2 = _freeze(np.eye(2, dtype=complex))

KET_ZERO = _freeze(np.array([1, 0], dtype=complex))
KET_ONE = _freeze(np.array([0, 1], dtype=complex))
KET_PLUS = _freeze(np.array([1, 1], dtype=complex) / math.sqrt(2))
KET_MINUS = _freeze(np.array([1, -1], dtype=complex) / math.sqrt(2))
KET_PLUS_I = _freeze(np.array([1, 1j], dtype=complex) / math.sqrt(2))
KET_MINUS_I = _freeze(np.array([1, -1j], dtype=complex) / math.sqrt(2))


def annihilation(dim: int) -> np.ndarray:
    """Truncated harmonic-oscillator lowering operator."""
    if dim < 2:
        raise ValueError("need dim >= 2")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def truncated_position(dim: int) -> np.ndarray:
    """q = (a + a^dag)/sqrt(2) on a Fock space truncated at dim levels."""
    a = annihilation(dim)
    return (a + a.conj().T) / math.sqrt(2)


def truncated_momentum(dim: int) -> np.ndarray:
    """p = -i (a - a^dag)/sqrt(2); with truncated_position satisfies [q,p] ~ i."""
    a = annihilation(dim)
    return -1j * (a - a.conj().T) / math.sqrt(2)


def coherent_ket(alpha: complex, dim: int) -> np.ndarray:
    """Truncated coherent state |alpha>, renormalised after truncation."""
    if alpha == 0:
        amps = np.zeros(dim, dtype=complex)
        amps[0] = 1.0
        return amps
    n = np.arange(dim)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, dim)))))
    amps = np.exp(n * np.log(complex(alpha)) - 0.5 * log_fact)
    return amps / np.linalg.norm(amps)


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Hermitian matrix with Gaussian entries, for randomised checks."""
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (raw + raw.conj().T)


def random_density(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Full-rank random density matrix (Wishart-style)."""
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    mat = raw @ raw.conj().T
    mat = mat / np.real(np.trace(mat))
    return DensityMatrix(0.5 * (mat + mat.conj().T))


def random_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random normalised state vector."""
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)
