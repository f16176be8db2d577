import math

import numpy as np
import pytest

from weakorder.errors import (
    DegenerateSchedule,
    IllConditionedFit,
    PostSelectionTooRare,
)
from weakorder.estimators import (
    DEFAULT_SCHEDULE,
    extrapolate_limit,
    forward_estimator,
    reverse_estimator,
    strong_coupling_asymmetry,
    weak_limit_rhs,
    weak_value,
)
from weakorder.operators import (
    KET_PLUS,
    KET_PLUS_I,
    KET_ZERO,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DensityMatrix,
    Observable,
    Projector,
)
from weakorder.pointer import PointerObservable, make_gaussian_pointer
from weakorder.sequential import MeasurementSetup, correlation

Q = PointerObservable.q()
P = PointerObservable.p()


def matrix_weak_value(phi: np.ndarray, psi: np.ndarray, a: np.ndarray) -> complex:
    # textbook pure-state form <phi|A|psi> / <phi|psi>
    return complex(phi.conj() @ a @ psi) / complex(phi.conj() @ psi)


def pointer_pair(sigma: float = 1.0):
    return make_gaussian_pointer(sigma), make_gaussian_pointer(sigma)


THETA = math.atan(5.0)
KET_THETA = np.array([math.cos(THETA), math.sin(THETA)])


class TestWeakValue:
    def test_plus_postselection_on_sigma_z(self):
        got = weak_value(DensityMatrix.pure(KET_ZERO), Projector.onto(KET_PLUS), Observable(PAULI_Z))
        ref = matrix_weak_value(KET_PLUS, KET_ZERO, PAULI_Z)
        assert got.as_complex == pytest.approx(ref, abs=1e-12)
        assert got.as_complex == pytest.approx(1.0 + 0.0j, abs=1e-12)

    def test_strange_value_outside_spectrum(self):
        got = weak_value(DensityMatrix.pure(KET_ZERO), Projector.onto(KET_THETA), Observable(PAULI_X))
        ref = matrix_weak_value(KET_THETA, KET_ZERO, PAULI_X)
        assert ref == pytest.approx(5.0 + 0.0j, abs=1e-12)
        assert got.re == pytest.approx(5.0, abs=1e-12)
        assert got.im == pytest.approx(0.0, abs=1e-12)
        assert abs(got.re) > max(np.abs(np.linalg.eigvalsh(PAULI_X)))

    def test_purely_imaginary_value(self):
        got = weak_value(DensityMatrix.pure(KET_ZERO), Projector.onto(KET_PLUS_I), Observable(PAULI_X))
        ref = matrix_weak_value(KET_PLUS_I, KET_ZERO, PAULI_X)
        assert got.as_complex == pytest.approx(ref, abs=1e-12)
        assert got.as_complex == pytest.approx(-1.0j, abs=1e-12)

    def test_linearity_in_observable(self):
        rho = DensityMatrix.pure(KET_ZERO)
        proj = Projector.onto(KET_THETA)
        combo = weak_value(rho, proj, Observable(0.7 * PAULI_X + 1.1 * PAULI_Z))
        wx = weak_value(rho, proj, Observable(PAULI_X)).as_complex
        wz = weak_value(rho, proj, Observable(PAULI_Z)).as_complex
        assert combo.as_complex == pytest.approx(0.7 * wx + 1.1 * wz, abs=1e-12)

    def test_eigenstate_anchor(self):
        got = weak_value(DensityMatrix.pure(KET_ZERO), Projector.onto(KET_THETA), Observable(PAULI_Z))
        assert got.as_complex == pytest.approx(1.0 + 0.0j, abs=1e-12)

    def test_orthogonal_postselection_rejected(self):
        with pytest.raises(PostSelectionTooRare):
            weak_value(DensityMatrix.pure(KET_ZERO), Projector.onto(np.array([0.0, 1.0])),
                       Observable(PAULI_X))


class TestWeakLimitRhs:
    def test_equal_observables_have_no_antisymmetric_part(self):
        pointer = make_gaussian_pointer(1.0)
        rhs = weak_limit_rhs(DensityMatrix.pure(KET_ZERO), Observable(PAULI_X),
                             Observable(PAULI_X), pointer, Q)
        assert rhs.antisymmetric_term == pytest.approx(0.0, abs=1e-12)
        # (i/2) Tr(rho {sx, sx}) Tr(rho_M [P, Q]) = (i/2) * 2 * (-i) = 1
        assert rhs.total == pytest.approx(1.0, abs=1e-12)

    def test_momentum_channel_picks_up_commutator(self):
        # (i/2) Tr(rho [sx, sy]) Tr(rho_M {P, P}) = (i/2)(2i)(2 * 1/4) = -1/2
        pointer = make_gaussian_pointer(1.0)
        rhs = weak_limit_rhs(DensityMatrix.pure(KET_ZERO), Observable(PAULI_X),
                             Observable(PAULI_Y), pointer, P)
        assert rhs.symmetric_term == pytest.approx(0.0, abs=1e-12)
        assert rhs.total == pytest.approx(-0.5, abs=1e-12)

    def test_swap_flips_only_the_antisymmetric_part(self):
        pointer = make_gaussian_pointer(1.0)
        ket = np.array([math.cos(0.5), math.sin(0.5) * np.exp(0.2j)])
        rho = DensityMatrix.pure(ket)
        ab = weak_limit_rhs(rho, Observable(PAULI_X), Observable(PAULI_Z), pointer, P)
        ba = weak_limit_rhs(rho, Observable(PAULI_Z), Observable(PAULI_X), pointer, P)
        assert ab.symmetric_term == pytest.approx(ba.symmetric_term, abs=1e-12)
        assert ab.antisymmetric_term == pytest.approx(-ba.antisymmetric_term, abs=1e-12)


class TestExtrapolateLimit:
    def test_exact_linear_samples(self):
        result = extrapolate_limit((1.0, 0.5, 0.25), (3.0, 2.0, 1.5))
        assert result.limit == pytest.approx(1.0, abs=1e-12)
        assert result.slope == pytest.approx(2.0, abs=1e-12)
        assert result.fit_residual < 1e-12

    def test_constant_samples(self):
        result = extrapolate_limit((0.2, 0.1, 0.05), (7.0, 7.0, 7.0))
        assert result.limit == pytest.approx(7.0, abs=1e-12)
        assert result.slope == pytest.approx(0.0, abs=1e-12)

    def test_quadratic_samples_are_fit_exactly(self):
        eps = np.array([0.4, 0.2, 0.1, 0.05])
        vals = 2.0 - eps + 3.0 * eps**2
        result = extrapolate_limit(eps, vals)
        assert result.limit == pytest.approx(2.0, abs=1e-10)
        assert result.slope == pytest.approx(-1.0, abs=1e-9)
        assert result.fit_residual < 1e-12

    def test_schedule_sorted_descending_in_result(self):
        result = extrapolate_limit((0.05, 0.2, 0.1), (1.05, 1.2, 1.1))
        assert result.eps1_schedule == (0.2, 0.1, 0.05)
        assert result.values == (1.2, 1.1, 1.05)

    def test_repeated_point_rejected(self):
        with pytest.raises(DegenerateSchedule):
            extrapolate_limit((0.2, 0.2, 0.05), (1.0, 1.0, 1.0))

    def test_too_few_points_rejected(self):
        with pytest.raises(DegenerateSchedule):
            extrapolate_limit((0.2, 0.1), (1.0, 1.0))

    def test_clustered_schedule_rejected(self):
        eps = (0.2, 0.2 * (1 + 1e-8), 0.2 * (1 + 2e-8))
        with pytest.raises(IllConditionedFit):
            extrapolate_limit(eps, (1.0, 1.0, 1.0))

    def test_correlation_sweep_reaches_weak_limit(self):
        # sigma_x then sigma_y with the momentum channel: limit -0.5
        rho = DensityMatrix.pure(KET_ZERO)
        pointer1, pointer2 = pointer_pair()
        values = []
        for eps1 in DEFAULT_SCHEDULE:
            setup = MeasurementSetup(rho, Observable(PAULI_X), Observable(PAULI_Y),
                                     pointer1, pointer2, eps1, 1.0)
            values.append(correlation(setup, P) / (eps1 * 1.0))
        result = extrapolate_limit(DEFAULT_SCHEDULE, values)
        assert result.limit == pytest.approx(-0.5, abs=1e-4)


class TestForwardEstimator:
    def test_plus_projector_recovers_unity(self):
        result = forward_estimator(DensityMatrix.pure(KET_ZERO), Observable(PAULI_Z),
                                   Projector.onto(KET_PLUS), pointer_pair())
        assert result.order == "forward"
        assert result.value.re == pytest.approx(1.0, abs=1e-3)
        assert result.value.im == pytest.approx(0.0, abs=1e-3)

    def test_strange_value_recovered(self):
        result = forward_estimator(DensityMatrix.pure(KET_ZERO), Observable(PAULI_X),
                                   Projector.onto(KET_THETA), pointer_pair())
        assert result.value.re == pytest.approx(5.0, abs=1e-3)
        assert result.value.im == pytest.approx(0.0, abs=1e-3)

    def test_imaginary_value_recovered(self):
        result = forward_estimator(DensityMatrix.pure(KET_ZERO), Observable(PAULI_X),
                                   Projector.onto(KET_PLUS_I), pointer_pair())
        assert result.value.re == pytest.approx(0.0, abs=1e-3)
        assert result.value.im == pytest.approx(-1.0, abs=1e-3)

    def test_second_coupling_does_not_matter(self):
        # analytic second pointer: eps2 = 10 would shift a grid state past
        # its translation guard, while the closed-form kernel has no box
        rho = DensityMatrix.pure(KET_ZERO)
        pointers = (make_gaussian_pointer(1.0), make_gaussian_pointer(1.0, backend="gaussian"))
        estimates = [
            forward_estimator(rho, Observable(PAULI_X), Projector.onto(KET_PLUS_I),
                              pointers, eps2=eps2).value
            for eps2 in (0.1, 1.0, 10.0)
        ]
        for other in estimates[1:]:
            assert other.re == pytest.approx(estimates[0].re, abs=2e-3)
            assert other.im == pytest.approx(estimates[0].im, abs=2e-3)

    def test_rare_postselection_rejected(self):
        with pytest.raises(PostSelectionTooRare):
            forward_estimator(DensityMatrix.pure(KET_ZERO), Observable(PAULI_X),
                              Projector.onto(np.array([0.0, 1.0])), pointer_pair())

    def test_diagnostics_expose_fit_quality(self):
        result = forward_estimator(DensityMatrix.pure(KET_ZERO), Observable(PAULI_Z),
                                   Projector.onto(KET_PLUS), pointer_pair())
        assert result.re_diagnostics.eps1_schedule == DEFAULT_SCHEDULE
        assert result.re_diagnostics.fit_residual < 1e-6
        assert result.sigma_p1_squared == pytest.approx(0.25)


class TestReverseEstimator:
    def test_real_value_is_order_invariant(self):
        rho = DensityMatrix.pure(KET_ZERO)
        result = reverse_estimator(rho, Projector.onto(KET_PLUS), Observable(PAULI_Z),
                                   pointer_pair())
        assert result.order == "reverse"
        assert result.value.re == pytest.approx(1.0, abs=1e-3)
        assert result.value.im == pytest.approx(0.0, abs=1e-3)

    def test_imaginary_value_flips_sign(self):
        rho = DensityMatrix.pure(KET_ZERO)
        forward = forward_estimator(rho, Observable(PAULI_X), Projector.onto(KET_PLUS_I),
                                    pointer_pair())
        reverse = reverse_estimator(rho, Projector.onto(KET_PLUS_I), Observable(PAULI_X),
                                    pointer_pair())
        assert reverse.value.im == pytest.approx(1.0, abs=1e-3)
        conj = reverse.value.conjugate()
        assert conj.re == pytest.approx(forward.value.re, abs=2e-3)
        assert conj.im == pytest.approx(forward.value.im, abs=2e-3)

    def test_commuting_projector_gives_identical_orders(self):
        # [B, P] = 0: both orders measure the same channel, so the two
        # estimates agree to numerical precision, not just to conjugation
        rho = DensityMatrix.pure(KET_PLUS)
        proj = Projector.onto(KET_ZERO)
        forward = forward_estimator(rho, Observable(PAULI_Z), proj, pointer_pair())
        reverse = reverse_estimator(rho, proj, Observable(PAULI_Z), pointer_pair())
        assert forward.value.re == pytest.approx(reverse.value.re, abs=1e-12)
        assert forward.value.im == pytest.approx(-reverse.value.im, abs=1e-12)
        assert forward.value.re == pytest.approx(1.0, abs=1e-3)


class TestStrongCouplingAsymmetry:
    def test_commuting_observables_stay_symmetric(self):
        rho = DensityMatrix.pure(np.array([0.8, 0.6]))
        asym = strong_coupling_asymmetry(rho, Observable(PAULI_Z),
                                         Observable(np.diag([2.0, -1.0])),
                                         pointer_pair(0.5), 1.0, 1.0)
        assert asym < 1e-8

    def test_weak_limit_is_symmetric_for_position_channel(self):
        # with a real Gaussian pointer the anticommutator term is all that
        # survives as eps1 -> 0, and it is invariant under the swap
        pointer = make_gaussian_pointer(0.5)
        ket = np.array([math.cos(0.3), math.sin(0.3) * np.exp(0.7j)])
        rho = DensityMatrix.pure(ket)
        ab = weak_limit_rhs(rho, Observable(PAULI_X), Observable(PAULI_Z), pointer, Q)
        ba = weak_limit_rhs(rho, Observable(PAULI_Z), Observable(PAULI_X), pointer, Q)
        assert ab.total == pytest.approx(ba.total, abs=1e-12)

    def test_symmetric_spectra_never_separate(self):
        # both Pauli spectra are +/-1, which zeroes every cross kernel in the
        # position channel: the orders agree at any coupling strength
        rho = DensityMatrix.pure(KET_ZERO)
        asym = strong_coupling_asymmetry(rho, Observable(PAULI_X), Observable(PAULI_Z),
                                         pointer_pair(0.5), 1.0, 1.0)
        assert asym < 1e-8

    def test_projector_pair_separates_orders(self):
        # asymmetric {0, 1} spectrum: closed form
        # eps1 * |sin(pi/4)|/2 * (1 - exp(-eps1^2 / (8 sigma^2))) at sigma=0.5
        ket = np.array([math.cos(math.pi / 8), math.sin(math.pi / 8)])
        rho = DensityMatrix.pure(ket)
        first = Observable(PAULI_X)
        second = Observable(np.diag([1.0, 0.0]))
        golden = {0.5: 0.0207718092, 1.0: 0.1391124194, 2.0: 0.6114102847}
        for eps1, frozen in golden.items():
            asym = strong_coupling_asymmetry(rho, first, second, pointer_pair(0.5), eps1, 1.0)
            closed = eps1 * (math.sin(math.pi / 4) / 2.0) * (1.0 - math.exp(-(eps1**2) / 2.0))
            assert asym == pytest.approx(closed, abs=1e-10)
            assert asym == pytest.approx(frozen, abs=1e-9)
        assert golden[1.0] > 0.01

    def test_weak_coupling_rejected(self):
        rho = DensityMatrix.pure(KET_ZERO)
        with pytest.raises(ValueError):
            strong_coupling_asymmetry(rho, Observable(PAULI_X), Observable(PAULI_Z),
                                      pointer_pair(0.5), 0.1, 1.0)
