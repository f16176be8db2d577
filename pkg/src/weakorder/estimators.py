"""Weak values, their pointer-correlation estimators, and the weak limit.

``weak_value`` evaluates Tr(rho P A)/Tr(rho P) directly. The estimators
recover the same complex number operationally from finite-coupling pointer
correlations extrapolated to zero first coupling:

* forward: project at the second measurement; Re from <Q1c Q2>, Im from
  <P1c Q2> divided by 2 sigma_{P1}^2, each normalised by eps1 eps2 Tr(rho P),
  the exact zero-coupling limit of eps1 <Q2>. Normalising by the measured
  <Q2> instead would fold its own O(eps1^2) disturbance into the ratio,
  which for strange weak values is amplified by 1/Tr(rho P) and spoils the
  quadratic extrapolation.
* reverse: project at the first measurement; the same ratios normalised by
  eps2 <Q1> recover the complex conjugate. Here no substitution is needed:
  <Q1> = eps1 Tr(rho P) exactly at any coupling.

``weak_limit_rhs`` gives the closed-form first-order correlation split into
the anticommutator (symmetric) and commutator (antisymmetric) channels;
``strong_coupling_asymmetry`` quantifies how order symmetry breaks once the
first coupling is no longer small.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSchedule,
    IllConditionedFit,
    PostSelectionTooRare,
)
from .operators import (
    DensityMatrix,
    Observable,
    Projector,
    trace_anticommutator,
    trace_commutator,
    trace_product,
)
from .pointer import PointerObservable, PointerState, symmetry_condition_values
from .sequential import MeasurementSetup, correlation, pointer1_mean

POST_SELECTION_FLOOR = 1e-6
FIT_CONDITION_MAX = 1e10
DEFAULT_SCHEDULE = (0.2, 0.1, 0.05, 0.025)
MIN_STRONG_EPS1 = 0.5


@dataclass(frozen=True)
class WeakValue:
    """Complex weak value split into real and imaginary parts."""

    re: float
    im: float

    @property
    def as_complex(self) -> complex:
        return complex(self.re, self.im)

    def conjugate(self) -> "WeakValue":
        return WeakValue(self.re, -self.im)


@dataclass(frozen=True)
class CorrelationResult:
    """A coupling sweep with its extrapolated zero-coupling limit.

    ``slope`` is the linear coefficient of the quadratic fit and
    ``fit_residual`` the maximum absolute misfit over the schedule.
    """

    eps1_schedule: tuple[float, ...]
    values: tuple[float, ...]
    limit: float
    slope: float
    fit_residual: float


@dataclass(frozen=True)
class WeakLimitRhs:
    """First-order correlation split by exchange symmetry of (A, B)."""

    symmetric_term: complex
    antisymmetric_term: complex

    @property
    def total(self) -> float:
        return float((self.symmetric_term + self.antisymmetric_term).real)


@dataclass(frozen=True)
class EstimatorResult:
    """Measured weak value with per-channel extrapolation diagnostics."""

    value: WeakValue
    order: str
    re_diagnostics: CorrelationResult
    im_diagnostics: CorrelationResult
    eps2: float
    sigma_p1_squared: float


def weak_value(rho_s: DensityMatrix, projector: Projector, observable: Observable,
               floor: float = POST_SELECTION_FLOOR) -> WeakValue:
    """Tr(rho P A) / Tr(rho P).

    Raises
    ------
    PostSelectionTooRare
        If the post-selection probability Tr(rho P) is below ``floor``.
    """
    prob = trace_product(rho_s, [projector]).real
    if prob < floor:
        raise PostSelectionTooRare(f"Tr(rho P) = {prob:.3e} below floor {floor:.1e}")
    num = trace_product(rho_s, [projector, observable])
    return WeakValue(num.real / prob, num.imag / prob)


def weak_limit_rhs(rho_s: DensityMatrix, first: Observable, second: Observable,
                   pointer1: PointerState,
                   f1: PointerObservable | None = None) -> WeakLimitRhs:
    """Closed-form lim <F1c Q2> / (eps1 eps2) split into exchange channels.

    symmetric_term  = (i/2) Tr(rho {A, B}) Tr(rho_M1 [P1, F1])
    antisymmetric_term = (i/2) Tr(rho [A, B]) Tr(rho_M1 {P1, F1})

    The symmetric channel survives when the pointer conditions hold and the
    antisymmetric channel is what flips sign under order reversal.
    """
    if f1 is None:
        f1 = PointerObservable.q()
    sym_ab = trace_anticommutator(rho_s, first, second)
    antisym_ab = trace_commutator(rho_s, first, second)
    pointer_vals = symmetry_condition_values(pointer1, f1)
    return WeakLimitRhs(
        symmetric_term=0.5j * sym_ab * pointer_vals.antisymmetric,
        antisymmetric_term=0.5j * antisym_ab * pointer_vals.symmetric,
    )


def extrapolate_limit(eps1_schedule, values, max_condition: float = FIT_CONDITION_MAX) -> CorrelationResult:
    """Quadratic least-squares extrapolation of values(eps1) to eps1 -> 0.

    Parameters
    ----------
    eps1_schedule : sequence of float
        Strictly positive couplings; sorted descending internally.
    values : sequence of float
        Measured values, same length as the schedule.

    Raises
    ------
    DegenerateSchedule
        On repeated schedule entries, non-positive entries, or fewer than
        three points.
    IllConditionedFit
        If the scaled Vandermonde matrix has condition number above
        ``max_condition``.
    """
    eps = np.asarray(eps1_schedule, dtype=float)
    vals = np.asarray(values, dtype=float)
    if eps.size != vals.size:
        raise DegenerateSchedule("schedule and values have different lengths")
    if eps.size < 3:
        raise DegenerateSchedule("need at least three schedule points")
    if np.any(eps <= 0):
        raise DegenerateSchedule("schedule entries must be positive")
    order = np.argsort(-eps)
    eps, vals = eps[order], vals[order]
    if np.any(np.diff(eps) == 0):
        raise DegenerateSchedule("schedule entries must be distinct")
    design = np.vander(eps / eps[0], 3, increasing=True)
    cond = float(np.linalg.cond(design))
    if cond > max_condition:
        raise IllConditionedFit(f"design condition number {cond:.3e}")
    coeffs, *_ = np.linalg.lstsq(design, vals, rcond=None)
    fitted = design @ coeffs
    return CorrelationResult(
        eps1_schedule=tuple(eps),
        values=tuple(vals),
        limit=float(coeffs[0]),
        slope=float(coeffs[1] / eps[0]),
        fit_residual=float(np.max(np.abs(fitted - vals))),
    )


def _ratio_sweep(setup_for, eps1_schedule, f1, normalisation):
    """Correlation ratios over the schedule for one pointer-1 channel."""
    ratios = []
    for eps1 in eps1_schedule:
        setup = setup_for(eps1)
        corr = correlation(setup, f1)
        ratios.append(corr / normalisation(setup, eps1))
    return ratios


def forward_estimator(rho_s: DensityMatrix, observable: Observable, projector: Projector,
                      pointers: tuple[PointerState, PointerState],
                      eps1_schedule=DEFAULT_SCHEDULE, eps2: float = 1.0,
                      floor: float = POST_SELECTION_FLOOR) -> EstimatorResult:
    """Weak value of ``observable`` with post-selection by the later pointer.

    The first kick measures the observable, the second the projector; the
    extrapolated ratios <Q1c Q2>/(eps1 <Q2>) and <P1c Q2>/(eps1 <Q2>
    2 sigma_{P1}^2) converge to Re and Im of the weak value. The denominator
    is evaluated at its exact zero-coupling limit eps2 Tr(rho P), so the
    fit only has to track the numerator's even corrections.
    """
    prob = trace_product(rho_s, [projector]).real
    if prob < floor:
        raise PostSelectionTooRare(f"Tr(rho P) = {prob:.3e} below floor {floor:.1e}")
    pointer1, pointer2 = pointers
    schedule = tuple(sorted((float(e) for e in eps1_schedule), reverse=True))

    def setup_for(eps1: float) -> MeasurementSetup:
        return MeasurementSetup(rho_s, observable, projector, pointer1, pointer2, eps1, eps2)

    def norm(setup: MeasurementSetup, eps1: float) -> float:
        return eps1 * eps2 * prob

    sigma_p1_sq = pointer1.sigma_p_squared()
    re_vals = _ratio_sweep(setup_for, schedule, PointerObservable.q(), norm)
    im_vals = _ratio_sweep(
        setup_for, schedule, PointerObservable.p(),
        lambda setup, eps1: norm(setup, eps1) * 2.0 * sigma_p1_sq,
    )
    re_fit = extrapolate_limit(schedule, re_vals)
    im_fit = extrapolate_limit(schedule, im_vals)
    return EstimatorResult(
        value=WeakValue(re_fit.limit, im_fit.limit),
        order="forward",
        re_diagnostics=re_fit,
        im_diagnostics=im_fit,
        eps2=float(eps2),
        sigma_p1_squared=sigma_p1_sq,
    )


def reverse_estimator(rho_s: DensityMatrix, projector: Projector, observable: Observable,
                      pointers: tuple[PointerState, PointerState],
                      eps1_schedule=DEFAULT_SCHEDULE, eps2: float = 1.0,
                      floor: float = POST_SELECTION_FLOOR) -> EstimatorResult:
    """Projector measured first, observable second; recovers the conjugate.

    The measured pair equals (Re W, -Im W) of the forward weak value, so
    ``result.value.conjugate()`` reproduces ``forward_estimator``'s value.
    Note the sweep is still over eps1 and the ratios are normalised by
    eps2 <Q1>, which is exact in eps1 for the projector-first order.
    """
    prob = trace_product(rho_s, [projector]).real
    if prob < floor:
        raise PostSelectionTooRare(f"Tr(rho P) = {prob:.3e} below floor {floor:.1e}")
    pointer1, pointer2 = pointers
    schedule = tuple(sorted((float(e) for e in eps1_schedule), reverse=True))

    def setup_for(eps1: float) -> MeasurementSetup:
        return MeasurementSetup(rho_s, projector, observable, pointer1, pointer2, eps1, eps2)

    def norm(setup: MeasurementSetup, eps1: float) -> float:
        return eps2 * pointer1_mean(setup)

    sigma_p1_sq = pointer1.sigma_p_squared()
    re_vals = _ratio_sweep(setup_for, schedule, PointerObservable.q(), norm)
    im_vals = _ratio_sweep(
        setup_for, schedule, PointerObservable.p(),
        lambda setup, eps1: norm(setup, eps1) * 2.0 * sigma_p1_sq,
    )
    re_fit = extrapolate_limit(schedule, re_vals)
    im_fit = extrapolate_limit(schedule, im_vals)
    return EstimatorResult(
        value=WeakValue(re_fit.limit, im_fit.limit),
        order="reverse",
        re_diagnostics=re_fit,
        im_diagnostics=im_fit,
        eps2=float(eps2),
        sigma_p1_squared=sigma_p1_sq,
    )


def strong_coupling_asymmetry(rho_s: DensityMatrix, first: Observable, second: Observable,
                              pointers: tuple[PointerState, PointerState],
                              eps1: float, eps2: float,
                              f1: PointerObservable | None = None) -> float:
    """|corr(A then B) - corr(B then A)| at finite coupling.

    Vanishes identically for commuting observables; grows with eps1 when the
    commutator channel contributes. Requires eps1 >= 0.5 because below that
    the difference is dominated by the weak-limit regime this function is
    not meant to probe.
    """
    if eps1 < MIN_STRONG_EPS1:
        raise ValueError(f"strong-coupling probe needs eps1 >= {MIN_STRONG_EPS1}, got {eps1}")
    pointer1, pointer2 = pointers
    setup = MeasurementSetup(rho_s, first, second, pointer1, pointer2, eps1, eps2)
    forward = correlation(setup, f1 if f1 is not None else PointerObservable.q())
    backward = correlation(setup.with_swapped_observables(),
                           f1 if f1 is not None else PointerObservable.q())
    return abs(forward - backward)
