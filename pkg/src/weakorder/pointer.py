"""Continuous-variable measurement pointers.

Two interchangeable backends represent a pointer state rho_M:

* ``gaussian`` -- the real, zero-mean ground-state Gaussian with width
  sigma_q (so sigma_p = 1/(2 sigma_q)); moments and translation-overlap
  kernels come from closed forms and polynomial Gaussian moments.
* ``grid`` -- arbitrary pure states or convex mixtures of pure states on a
  uniform periodic grid; momentum acts spectrally through the FFT, and
  translations are exact phase multiplications in Fourier space.

The kernel K(x, y; F) = Tr(e^{-i x P} rho_M e^{+i y P} F) is the only
pointer-side object the measurement channel needs.

Conventions: hbar = 1, [Q, P] = i, and e^{-i a P} shifts the position
distribution by +a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BackendUnsupported,
    DimensionMismatch,
    GridUnderResolved,
    ImaginaryResidualTooLarge,
    NonHermitianInput,
    TranslationOutOfRange,
)

GAUSSIAN = "gaussian"
GRID = "grid"

KIND_Q = "Q"
KIND_P = "P"
KIND_FUNCTION_OF_Q = "function_of_q"
KIND_FUNCTION_OF_P = "function_of_p"
KIND_MATRIX = "matrix"

TOL_IMAG = 1e-10
TOL_GRID_HERM = 1e-10
CONDITION_THRESHOLD = 1e-8

DEFAULT_N_POINTS = 256
DEFAULT_SPACING_FRACTION = 1.0 / 8.0


@dataclass(frozen=True)
class PointerObservable:
    """Operator acting on a single pointer.

    ``poly`` holds coefficients (constant first) when the observable is a
    polynomial in Q or P; that is what the analytic backend can evaluate.
    Non-polynomial functions carry a callable instead and explicit matrices
    are grid-only.
    """

    kind: str
    poly: tuple[float, ...] | None = None
    func: Callable[[np.ndarray], np.ndarray] | None = None
    matrix: np.ndarray | None = None
    label: str = ""

    @staticmethod
    def q() -> "PointerObservable":
        return PointerObservable(KIND_Q, poly=(0.0, 1.0), label="Q")

    @staticmethod
    def p() -> "PointerObservable":
        return PointerObservable(KIND_P, poly=(0.0, 1.0), label="P")

    @staticmethod
    def identity() -> "PointerObservable":
        return PointerObservable(KIND_FUNCTION_OF_Q, poly=(1.0,), label="1")

    @staticmethod
    def q_squared() -> "PointerObservable":
        return PointerObservable(KIND_FUNCTION_OF_Q, poly=(0.0, 0.0, 1.0), label="Q^2")

    @staticmethod
    def p_squared() -> "PointerObservable":
        return PointerObservable(KIND_FUNCTION_OF_P, poly=(0.0, 0.0, 1.0), label="P^2")

    @staticmethod
    def poly_q(coeffs: Sequence[float]) -> "PointerObservable":
        return PointerObservable(KIND_FUNCTION_OF_Q, poly=tuple(float(c) for c in coeffs), label="poly(Q)")

    @staticmethod
    def poly_p(coeffs: Sequence[float]) -> "PointerObservable":
        return PointerObservable(KIND_FUNCTION_OF_P, poly=tuple(float(c) for c in coeffs), label="poly(P)")

    @staticmethod
    def of_q(func: Callable[[np.ndarray], np.ndarray]) -> "PointerObservable":
        return PointerObservable(KIND_FUNCTION_OF_Q, func=func, label="f(Q)")

    @staticmethod
    def of_p(func: Callable[[np.ndarray], np.ndarray]) -> "PointerObservable":
        return PointerObservable(KIND_FUNCTION_OF_P, func=func, label="f(P)")

    @staticmethod
    def of_matrix(matrix) -> "PointerObservable":
        mat = np.asarray(matrix, dtype=complex)
        return PointerObservable(KIND_MATRIX, matrix=mat, label="matrix")

    @property
    def is_position_diagonal(self) -> bool:
        return self.kind in (KIND_Q, KIND_FUNCTION_OF_Q)

    def values_on(self, axis: np.ndarray) -> np.ndarray:
        """Sample the scalar function on grid positions or wavenumbers."""
        if self.poly is not None:
            return np.polynomial.polynomial.polyval(axis, self.poly)
        if self.func is None:
            raise BackendUnsupported("observable carries neither polynomial nor callable")
        vals = np.asarray(self.func(axis))
        if np.iscomplexobj(vals) and float(np.max(np.abs(vals.imag))) > TOL_GRID_HERM:
            raise NonHermitianInput("pointer function takes complex values")
        return vals.real.astype(float)


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid, n_points a power of two."""

    n_points: int
    spacing: float

    def __post_init__(self):
        n = self.n_points
        if n < 2 or (n & (n - 1)) != 0:
            raise ValueError(f"n_points must be a power of two >= 2, got {n}")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")

    @property
    def box_length(self) -> float:
        return self.n_points * self.spacing

    def positions(self) -> np.ndarray:
        n = self.n_points
        return (np.arange(n) - n // 2) * self.spacing

    def wavenumbers(self) -> np.ndarray:
        return 2.0 * math.pi * np.fft.fftfreq(self.n_points, d=self.spacing)


def _gaussian_poly_mean(coeffs: Sequence[float], mean: complex, var: float) -> complex:
    """E[poly(mean + sqrt(var) Z)] for standard normal Z; mean may be complex."""
    moments = [1.0 + 0.0j, complex(mean)]
    for n in range(2, len(coeffs)):
        moments.append(mean * moments[n - 1] + (n - 1) * var * moments[n - 2])
    return sum(c * moments[n] for n, c in enumerate(coeffs))


class PointerState:
    """Pointer density matrix under one of the two backends.

    Grid states are stored as convex mixtures of pure amplitude vectors
    normalised to sum(|psi|^2) * spacing = 1. The analytic backend is always
    the pure ground-state Gaussian.
    """

    def __init__(self, backend: str, sigma_q: float | None = None,
                 grid: GridSpec | None = None,
                 components: tuple[tuple[float, np.ndarray], ...] | None = None):
        if backend == GAUSSIAN:
            if sigma_q is None or not sigma_q > 0:
                raise ValueError("gaussian backend needs sigma_q > 0")
            self.sigma_q = float(sigma_q)
            self.grid = None
            self.components = None
        elif backend == GRID:
            if grid is None or not components:
                raise ValueError("grid backend needs a GridSpec and components")
            self.sigma_q = sigma_q
            self.grid = grid
            self.components = components
        else:
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend

    # -- constructors -------------------------------------------------

    @classmethod
    def from_amplitudes(cls, spacing: float, amplitudes, n_points: int | None = None) -> "PointerState":
        """Pure grid state from explicit amplitudes (normalised here)."""
        return cls.from_mixture(spacing, [(1.0, amplitudes)], n_points=n_points)

    @classmethod
    def from_mixture(cls, spacing: float, weighted_amplitudes, n_points: int | None = None) -> "PointerState":
        """Convex mixture of pure grid states from (weight, amplitudes) pairs."""
        comps = []
        size = None
        total_weight = 0.0
        for weight, amps in weighted_amplitudes:
            w = float(weight)
            if w <= 0:
                raise ValueError("mixture weights must be positive")
            psi = np.asarray(amps, dtype=complex).reshape(-1)
            if size is None:
                size = psi.size
            elif psi.size != size:
                raise DimensionMismatch("mixture components have different lengths")
            norm = math.sqrt(float(np.sum(np.abs(psi) ** 2)) * spacing)
            if norm == 0:
                raise ValueError("zero-norm component")
            comps.append((w, psi / norm))
            total_weight += w
        grid = GridSpec(n_points if n_points is not None else size, float(spacing))
        if grid.n_points != size:
            raise DimensionMismatch(f"amplitudes length {size} != n_points {grid.n_points}")
        comps = tuple((w / total_weight, psi) for w, psi in comps)
        return cls(GRID, grid=grid, components=comps)

    # -- basic structure ----------------------------------------------

    @property
    def is_pure(self) -> bool:
        return self.backend == GAUSSIAN or len(self.components) == 1

    def density_matrix(self) -> np.ndarray:
        """Dense rho_M in the grid basis, trace 1 (grid backend only)."""
        self._require_grid("dense density matrix")
        n = self.grid.n_points
        rho = np.zeros((n, n), dtype=complex)
        for w, psi in self.components:
            rho += w * np.outer(psi, psi.conj())
        return rho * self.grid.spacing

    def _require_grid(self, what: str) -> None:
        if self.backend != GRID:
            raise BackendUnsupported(f"{what} needs the grid backend")

    # -- grid primitives ----------------------------------------------

    def translate(self, psi: np.ndarray, shift: float) -> np.ndarray:
        """e^{-i shift P} psi by spectral phase multiplication (exact, periodic)."""
        self._require_grid("translation")
        quarter = self.grid.box_length / 4.0
        if not abs(shift) < quarter:
            raise TranslationOutOfRange(
                f"|shift| = {abs(shift):.6g} >= box/4 = {quarter:.6g}; enlarge the grid"
            )
        if shift == 0.0:
            return psi
        phase = np.exp(-1j * self.grid.wavenumbers() * shift)
        return np.fft.ifft(np.fft.fft(psi) * phase)

    def apply(self, observable: PointerObservable, psi: np.ndarray) -> np.ndarray:
        """Observable acting on a grid amplitude vector."""
        self._require_grid("operator application")
        kind = observable.kind
        if kind in (KIND_Q, KIND_FUNCTION_OF_Q):
            return observable.values_on(self.grid.positions()) * psi
        if kind in (KIND_P, KIND_FUNCTION_OF_P):
            vals = observable.values_on(self.grid.wavenumbers())
            return np.fft.ifft(vals * np.fft.fft(psi))
        if kind == KIND_MATRIX:
            mat = observable.matrix
            if mat.shape != (self.grid.n_points,) * 2:
                raise DimensionMismatch(f"matrix shape {mat.shape} != grid size {self.grid.n_points}")
            if float(np.max(np.abs(mat - mat.conj().T))) > TOL_GRID_HERM:
                raise NonHermitianInput("explicit pointer matrix is not Hermitian")
            return mat @ psi
        raise BackendUnsupported(f"unknown observable kind {kind!r}")

    # -- moments and kernels -------------------------------------------

    def moment(self, observable: PointerObservable) -> float:
        """Tr(rho_M F); validated to be real within 1e-10."""
        if self.backend == GAUSSIAN:
            value = self._gaussian_moment(observable)
        else:
            dx = self.grid.spacing
            value = sum(
                w * np.vdot(psi, self.apply(observable, psi)) * dx
                for w, psi in self.components
            )
        value = complex(value)
        if abs(value.imag) > TOL_IMAG:
            raise ImaginaryResidualTooLarge(f"moment imaginary part {value.imag:.3e}")
        return value.real

    def _gaussian_moment(self, observable: PointerObservable) -> complex:
        if observable.poly is None:
            raise BackendUnsupported("analytic moments need polynomial observables")
        var_q = self.sigma_q ** 2
        var_p = 1.0 / (4.0 * var_q)
        if observable.kind in (KIND_Q, KIND_FUNCTION_OF_Q):
            return _gaussian_poly_mean(observable.poly, 0.0, var_q)
        if observable.kind in (KIND_P, KIND_FUNCTION_OF_P):
            return _gaussian_poly_mean(observable.poly, 0.0, var_p)
        raise BackendUnsupported("analytic backend has no explicit-matrix observables")

    def overlap_kernel(self, x: float, y: float, observable: PointerObservable) -> complex:
        """K(x, y; F) = Tr(e^{-i x P} rho_M e^{+i y P} F)."""
        return complex(self.kernel_matrix(np.array([x]), np.array([y]), observable)[0, 0])

    def kernel_matrix(self, xs, ys, observable: PointerObservable) -> np.ndarray:
        """K(x_i, y_j; F) for all pairs; shape (len(xs), len(ys))."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if self.backend == GAUSSIAN:
            return self._gaussian_kernel(xs[:, None], ys[None, :], observable)
        dx = self.grid.spacing
        out = np.zeros((xs.size, ys.size), dtype=complex)
        for w, psi in self.components:
            kets = np.stack([self.apply(observable, self.translate(psi, x)) for x in xs])
            bras = np.stack([self.translate(psi, y) for y in ys])
            out += w * (bras.conj() @ kets.T).T * dx
        return out

    def _gaussian_kernel(self, x, y, observable: PointerObservable) -> np.ndarray:
        if observable.poly is None:
            raise BackendUnsupported("analytic kernels need polynomial observables")
        var_q = self.sigma_q ** 2
        var_p = 1.0 / (4.0 * var_q)
        base = np.exp(-((x - y) ** 2) / (8.0 * var_q))
        if observable.kind in (KIND_Q, KIND_FUNCTION_OF_Q):
            mean = (x + y) / 2.0
            factor = _poly_mean_grid(observable.poly, mean.astype(complex), var_q)
        elif observable.kind in (KIND_P, KIND_FUNCTION_OF_P):
            mean = -1j * (x - y) * var_p
            factor = _poly_mean_grid(observable.poly, mean, var_p)
        else:
            raise BackendUnsupported("analytic backend has no explicit-matrix observables")
        return base * factor

    def sigma_p_squared(self) -> float:
        """Momentum variance Tr(rho_M P^2) - Tr(rho_M P)^2."""
        mean_p = self.moment(PointerObservable.p())
        return self.moment(PointerObservable.p_squared()) - mean_p ** 2

    # -- physical conditions -------------------------------------------

    def current_density(self) -> np.ndarray:
        """Probability current Re(psi^* (P psi)) summed over mixture components."""
        self._require_grid("current density")
        p_op = PointerObservable.p()
        total = np.zeros(self.grid.n_points)
        for w, psi in self.components:
            total += w * np.real(psi.conj() * self.apply(p_op, psi))
        return total


@dataclass(frozen=True)
class PointerConditionReport:
    """Zero-mean-Q, zero-mean-P, and vanishing-current checks at a threshold."""

    mean_q: float
    mean_p: float
    max_current: float
    threshold: float

    @property
    def mean_q_ok(self) -> bool:
        return abs(self.mean_q) <= self.threshold

    @property
    def mean_p_ok(self) -> bool:
        return abs(self.mean_p) <= self.threshold

    @property
    def current_ok(self) -> bool:
        return abs(self.max_current) <= self.threshold

    @property
    def all_ok(self) -> bool:
        return self.mean_q_ok and self.mean_p_ok and self.current_ok


@dataclass(frozen=True)
class SymmetryConditionValues:
    """Tr(rho_M {P, F}) and Tr(rho_M [P, F]) for a pointer observable F."""

    symmetric: complex
    antisymmetric: complex


def _poly_mean_grid(coeffs, mean, var):
    mean = np.asarray(mean, dtype=complex)
    flat = mean.reshape(-1)
    out = np.array([_gaussian_poly_mean(coeffs, m, var) for m in flat])
    return out.reshape(mean.shape)


def make_gaussian_pointer(
    sigma_q: float,
    backend: str = GRID,
    grid: GridSpec | None = None,
    boost_k: float = 0.0,
    displacement: float = 0.0,
) -> PointerState:
    """Ground-state Gaussian pointer of width sigma_q.

    Parameters
    ----------
    sigma_q : float
        Position standard deviation; sigma_p = 1/(2 sigma_q).
    backend : {"grid", "gaussian"}
        ``gaussian`` evaluates closed forms; ``grid`` samples the wavefunction
        on a periodic grid (default 256 points, spacing sigma_q/8).
    grid : GridSpec, optional
        Overrides the default grid (grid backend only).
    boost_k, displacement : float
        Optional momentum boost e^{i k Q} and position displacement. These
        deliberately break the pointer conditions and are grid-only.

    Raises
    ------
    GridUnderResolved
        If spacing > sigma_q/4 or the box is shorter than 16 sigma_q.
    BackendUnsupported
        For boost or displacement on the analytic backend.
    """
    if not sigma_q > 0:
        raise ValueError("sigma_q must be positive")
    if backend == GAUSSIAN:
        if boost_k != 0.0 or displacement != 0.0:
            raise BackendUnsupported("boost/displacement need the grid backend")
        return PointerState(GAUSSIAN, sigma_q=sigma_q)
    if backend != GRID:
        raise ValueError(f"unknown backend {backend!r}")
    if grid is None:
        grid = GridSpec(DEFAULT_N_POINTS, sigma_q * DEFAULT_SPACING_FRACTION)
    if grid.spacing > sigma_q / 4.0 or grid.box_length < 16.0 * sigma_q:
        raise GridUnderResolved(
            f"grid (n={grid.n_points}, spacing={grid.spacing:.6g}) cannot resolve "
            f"sigma_q={sigma_q:.6g}: need spacing <= sigma_q/4 and box >= 16 sigma_q"
        )
    pos = grid.positions()
    psi = np.exp(-((pos - displacement) ** 2) / (4.0 * sigma_q ** 2)).astype(complex)
    if boost_k != 0.0:
        psi = psi * np.exp(1j * boost_k * pos)
    state = PointerState.from_amplitudes(grid.spacing, psi, n_points=grid.n_points)
    state.sigma_q = float(sigma_q)
    return state


def moment(state: PointerState, observable: PointerObservable) -> float:
    """Tr(rho_M F), real within 1e-10."""
    return state.moment(observable)


def overlap_kernel(state: PointerState, x: float, y: float, observable: PointerObservable) -> complex:
    """Translation-overlap kernel Tr(e^{-i x P} rho_M e^{+i y P} F)."""
    return state.overlap_kernel(x, y, observable)


def check_pointer_conditions(state: PointerState, threshold: float = CONDITION_THRESHOLD) -> PointerConditionReport:
    """Evaluate mean Q, mean P, and maximum probability current.

    The analytic Gaussian satisfies all three identically; grid states are
    measured numerically.
    """
    if state.backend == GAUSSIAN:
        return PointerConditionReport(0.0, 0.0, 0.0, threshold)
    mean_q = state.moment(PointerObservable.q())
    mean_p = state.moment(PointerObservable.p())
    max_current = float(np.max(np.abs(state.current_density())))
    return PointerConditionReport(mean_q, mean_p, max_current, threshold)


def symmetry_condition_values(state: PointerState, observable: PointerObservable) -> SymmetryConditionValues:
    """Tr(rho_M {P, F}) and Tr(rho_M [P, F]).

    For the analytic Gaussian: any F(Q) has a vanishing symmetric part
    (zero probability current) and antisymmetric part -i <Q f(Q)> / sigma_q^2;
    any F(P) commutes with P, leaving twice <P g(P)> in the symmetric part.
    """
    if state.backend == GAUSSIAN:
        if observable.poly is None:
            raise BackendUnsupported("analytic symmetry values need polynomial observables")
        var_q = state.sigma_q ** 2
        var_p = 1.0 / (4.0 * var_q)
        shifted = (0.0,) + tuple(observable.poly)
        if observable.kind in (KIND_Q, KIND_FUNCTION_OF_Q):
            mean_qf = _gaussian_poly_mean(shifted, 0.0, var_q)
            return SymmetryConditionValues(0.0 + 0.0j, -1j * mean_qf / var_q)
        if observable.kind in (KIND_P, KIND_FUNCTION_OF_P):
            mean_pg = _gaussian_poly_mean(shifted, 0.0, var_p)
            return SymmetryConditionValues(2.0 * mean_pg, 0.0 + 0.0j)
        raise BackendUnsupported("analytic backend has no explicit-matrix observables")
    p_op = PointerObservable.p()
    dx = state.grid.spacing
    pf = 0.0 + 0.0j
    fp = 0.0 + 0.0j
    for w, psi in state.components:
        f_psi = state.apply(observable, psi)
        p_psi = state.apply(p_op, psi)
        pf += w * np.vdot(psi, state.apply(p_op, f_psi)) * dx
        fp += w * np.vdot(psi, state.apply(observable, p_psi)) * dx
    return SymmetryConditionValues(pf + fp, pf - fp)


def observable_matrix(observable: PointerObservable, grid: GridSpec) -> np.ndarray:
    """Dense matrix of a pointer observable in the grid position basis."""
    n = grid.n_points
    if observable.kind in (KIND_Q, KIND_FUNCTION_OF_Q):
        return np.diag(observable.values_on(grid.positions()).astype(complex))
    if observable.kind in (KIND_P, KIND_FUNCTION_OF_P):
        vals = observable.values_on(grid.wavenumbers())
        mat = np.fft.ifft(vals[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0)
        if float(np.max(np.abs(mat - mat.conj().T))) > TOL_GRID_HERM:
            raise NonHermitianInput("spectral observable matrix is not Hermitian")
        return mat
    if observable.kind == KIND_MATRIX:
        mat = np.asarray(observable.matrix, dtype=complex)
        if mat.shape != (n, n):
            raise DimensionMismatch(f"matrix shape {mat.shape} != grid size {n}")
        if float(np.max(np.abs(mat - mat.conj().T))) > TOL_GRID_HERM:
            raise NonHermitianInput("explicit pointer matrix is not Hermitian")
        return mat
    raise BackendUnsupported(f"unknown observable kind {observable.kind!r}")


def translation_matrix(grid: GridSpec, shift: float) -> np.ndarray:
    """Dense e^{-i shift P} on the grid (used by the full tensor oracle)."""
    quarter = grid.box_length / 4.0
    if not abs(shift) < quarter:
        raise TranslationOutOfRange(f"|shift| = {abs(shift):.6g} >= box/4 = {quarter:.6g}")
    phase = np.exp(-1j * grid.wavenumbers() * shift)
    return np.fft.ifft(phase[:, None] * np.fft.fft(np.eye(grid.n_points), axis=0), axis=0)
