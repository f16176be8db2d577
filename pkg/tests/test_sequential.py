import numpy as np
import pytest

from weakorder.errors import OracleTooLarge
from weakorder.estimators import weak_limit_rhs
from weakorder.operators import (
    KET_ZERO,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DensityMatrix,
    Observable,
    random_hermitian,
    random_ket,
)
from weakorder.pointer import PointerObservable, PointerState, make_gaussian_pointer
from weakorder.sequential import (
    MeasurementSetup,
    correlation,
    full_state_oracle,
    oracle_correlation,
    pointer1_mean,
    pointer2_mean,
    projective_coupling,
)

Q = PointerObservable.q()
P = PointerObservable.p()


def small_grid_pointer(sigma: float = 0.5, n: int = 32, spacing: float = 0.25) -> PointerState:
    # oracle-sized pointer: box 8, translations allowed up to 2
    xs = (np.arange(n) - n // 2) * spacing
    return PointerState.from_amplitudes(spacing, np.exp(-(xs**2) / (4.0 * sigma**2)))


def qubit_setup(rho, first, second, eps1, eps2, sigma=1.0):
    return MeasurementSetup(
        rho,
        Observable(first) if isinstance(first, np.ndarray) else first,
        Observable(second) if isinstance(second, np.ndarray) else second,
        make_gaussian_pointer(sigma),
        make_gaussian_pointer(sigma),
        eps1,
        eps2,
    )


def unit_radius(mat: np.ndarray) -> np.ndarray:
    return mat / float(np.max(np.abs(np.linalg.eigvalsh(mat))))


class TestCorrelation:
    def test_uncoupled_first_pointer_gives_zero(self):
        rho = DensityMatrix.pure(random_ket(2, np.random.default_rng(0)))
        setup = qubit_setup(rho, PAULI_X, PAULI_Z, 0.0, 1.0)
        assert correlation(setup, Q) == pytest.approx(0.0, abs=1e-14)
        assert correlation(setup, P) == pytest.approx(0.0, abs=1e-14)

    def test_commuting_sharp_eigenvalue_is_exact(self):
        # A = B = sigma_z on |0><0|: only the eigenvalue-1 chain contributes,
        # both kernels sit on their diagonals, so the correlation is exactly
        # eps1 * eps2 at any coupling.
        rho = DensityMatrix.pure(KET_ZERO)
        setup = qubit_setup(rho, PAULI_Z, PAULI_Z, 0.1, 1.0)
        assert correlation(setup, Q) == pytest.approx(0.1, abs=1e-12)
        strong = qubit_setup(rho, PAULI_Z, PAULI_Z, 1.3, 2.0)
        assert correlation(strong, Q) == pytest.approx(2.6, abs=1e-12)

    def test_vanishing_anticommutator_channel(self):
        # A = sigma_x, B = sigma_y, F1 = Q: the position channel carries
        # (1/2) Tr(rho {A, B}) = 0, and with the symmetric +/-1 spectrum the
        # cancellation is exact at every coupling, not only in the limit.
        rho = DensityMatrix.pure(KET_ZERO)
        for eps1 in (0.2, 0.05, 1.0):
            setup = qubit_setup(rho, PAULI_X, PAULI_Y, eps1, 1.0)
            assert correlation(setup, Q) == pytest.approx(0.0, abs=1e-12)

    def test_affine_in_system_state(self):
        rng = np.random.default_rng(3)
        rho_a = DensityMatrix.pure(random_ket(2, rng))
        rho_b = DensityMatrix.pure(random_ket(2, rng))
        w = 0.3
        mixed = DensityMatrix(w * rho_a.matrix + (1 - w) * rho_b.matrix)
        args = (PAULI_X, PAULI_Z, 0.4, 0.8)
        got = correlation(qubit_setup(mixed, *args), Q)
        parts = w * correlation(qubit_setup(rho_a, *args), Q) + (1 - w) * correlation(
            qubit_setup(rho_b, *args), Q
        )
        assert got == pytest.approx(parts, abs=1e-10)

    def test_second_observable_must_be_position_diagonal(self):
        rho = DensityMatrix.pure(KET_ZERO)
        setup = qubit_setup(rho, PAULI_X, PAULI_Z, 0.1, 1.0)
        with pytest.raises(ValueError):
            correlation(setup, Q, P)


class TestPointerMeans:
    def test_first_mean_exact_at_strong_coupling(self):
        rho = DensityMatrix.pure(KET_ZERO)
        setup = qubit_setup(rho, PAULI_Z, PAULI_X, 1.7, 1.0)
        assert pointer1_mean(setup) == pytest.approx(1.7, abs=1e-10)

    def test_first_mean_tracks_expectation_at_any_coupling(self):
        ket = np.array([np.cos(0.6), np.exp(0.4j) * np.sin(0.6)])
        rho = DensityMatrix.pure(ket)
        expected = float(np.real(np.trace(rho.matrix @ PAULI_X)))
        for eps1 in (0.1, 1.0, 2.0):
            setup = qubit_setup(rho, PAULI_X, PAULI_Z, eps1, 1.0)
            assert pointer1_mean(setup) / eps1 == pytest.approx(expected, abs=1e-10)

    def test_traceless_on_maximally_mixed(self):
        rho = DensityMatrix.maximally_mixed(2)
        setup = qubit_setup(rho, PAULI_Y, PAULI_Z, 0.9, 1.0)
        assert pointer1_mean(setup) == pytest.approx(0.0, abs=1e-12)

    def test_second_mean_carries_first_kick_disturbance(self):
        # A = sigma_x on |0><0|, B = sigma_z: summing the four projector
        # chains with the Gaussian cross-kernel damping exp(-eps1^2/(2 sigma^2))
        # ... gives <Q2>/eps2 = exp(-eps1^2 / 2) at sigma = 1.
        rho = DensityMatrix.pure(KET_ZERO)
        eps1 = 0.05
        setup = qubit_setup(rho, PAULI_X, PAULI_Z, eps1, 1.0)
        ratio = pointer2_mean(setup) / setup.eps2
        assert ratio == pytest.approx(np.exp(-(eps1**2) / 2.0), abs=1e-10)
        assert abs(ratio - 1.0) < 2.0 * eps1**2

    def test_projective_coupling_scale(self):
        assert projective_coupling(0.5, Observable(PAULI_Z)) == pytest.approx(6.25)
        with pytest.raises(ValueError):
            projective_coupling(0.5, Observable(np.eye(2)))


class TestFullOracle:
    def test_zero_coupling_leaves_product_state(self):
        rho = DensityMatrix.pure(KET_ZERO)
        p1, p2 = small_grid_pointer(), small_grid_pointer()
        setup = MeasurementSetup(rho, Observable(PAULI_X), Observable(PAULI_Z), p1, p2, 0.0, 0.0)
        state = full_state_oracle(setup)
        product = np.kron(np.kron(rho.matrix, p1.density_matrix()), p2.density_matrix())
        np.testing.assert_allclose(state.matrix, product, atol=1e-12)

    def test_trace_and_hermiticity(self):
        rng = np.random.default_rng(5)
        rho = DensityMatrix.pure(random_ket(2, rng))
        setup = MeasurementSetup(
            rho,
            Observable(unit_radius(random_hermitian(2, rng))),
            Observable(unit_radius(random_hermitian(2, rng))),
            small_grid_pointer(),
            small_grid_pointer(),
            0.3,
            0.5,
        )
        state = full_state_oracle(setup)
        assert complex(np.trace(state.matrix)).real == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(state.matrix, state.matrix.conj().T, atol=1e-10)

    def test_factorized_sum_matches_dense_oracle(self):
        # the dense state keeps the m != m' cross blocks; agreement here is
        # what justifies dropping them in the factorized evaluator
        rng = np.random.default_rng(17)
        for _ in range(3):
            rho = DensityMatrix.pure(random_ket(2, rng))
            setup = MeasurementSetup(
                rho,
                Observable(unit_radius(random_hermitian(2, rng))),
                Observable(unit_radius(random_hermitian(2, rng))),
                small_grid_pointer(),
                small_grid_pointer(),
                0.3,
                0.5,
            )
            for f1 in (Q, P):
                assert correlation(setup, f1) == pytest.approx(
                    oracle_correlation(setup, f1), abs=1e-10
                )
            state = full_state_oracle(setup)
            assert pointer1_mean(setup) == pytest.approx(
                complex(state.expectation(f1=Q)).real, abs=1e-10
            )
            assert pointer2_mean(setup) == pytest.approx(
                complex(state.expectation(g2=Q)).real, abs=1e-10
            )

    def test_oracle_rejects_large_grids(self):
        rho = DensityMatrix.pure(KET_ZERO)
        setup = qubit_setup(rho, PAULI_X, PAULI_Z, 0.1, 1.0)  # 256-point grids
        with pytest.raises(OracleTooLarge):
            full_state_oracle(setup)

    def test_oracle_rejects_analytic_backend(self):
        rho = DensityMatrix.pure(KET_ZERO)
        setup = MeasurementSetup(
            rho,
            Observable(PAULI_X),
            Observable(PAULI_Z),
            make_gaussian_pointer(0.5, backend="gaussian"),
            small_grid_pointer(),
            0.1,
            1.0,
        )
        with pytest.raises(OracleTooLarge):
            full_state_oracle(setup)


class TestWeakTruncation:
    schedule = (0.2, 0.1, 0.05, 0.025)

    @staticmethod
    def loglog_slope(eps, residuals):
        return float(np.polyfit(np.log(eps), np.log(residuals), 1)[0])

    def setup_state(self):
        ket = np.array([np.cos(0.4), np.exp(0.3j) * np.sin(0.4)])
        return DensityMatrix.pure(ket)

    def test_symmetric_spectrum_is_exactly_linear(self):
        # +/-1 spectrum: diagonal kernels are exact and cross terms carry a
        # vanishing mean shift, so the linear law holds at every coupling
        rho = self.setup_state()
        pointer = make_gaussian_pointer(1.0)
        rhs = weak_limit_rhs(rho, Observable(PAULI_X), Observable(PAULI_Z), pointer, Q).total
        for eps1 in self.schedule:
            setup = qubit_setup(rho, PAULI_X, PAULI_Z, eps1, 1.0)
            assert correlation(setup, Q) == pytest.approx(eps1 * 1.0 * rhs, abs=1e-13)

    def test_asymmetric_spectrum_residual_is_cubic(self):
        # spectrum {0, 1}: the cross-kernel damping enters at O(eps1^3) for
        # the odd position channel
        rho = self.setup_state()
        proj_plus = np.full((2, 2), 0.5)
        pointer = make_gaussian_pointer(1.0)
        rhs = weak_limit_rhs(rho, Observable(proj_plus), Observable(PAULI_Z), pointer, Q).total
        residuals = []
        for eps1 in self.schedule:
            setup = qubit_setup(rho, proj_plus, PAULI_Z, eps1, 1.0)
            residuals.append(abs(correlation(setup, Q) - eps1 * 1.0 * rhs))
        assert 2.8 < self.loglog_slope(self.schedule, residuals) < 3.2

    def test_even_channel_residual_is_quadratic(self):
        # F1 = Q^2 has no linear term (both pointer traces vanish for the
        # real ground state), so the truncation error itself leads at eps1^2
        rho = self.setup_state()
        proj_plus = np.full((2, 2), 0.5)
        pointer = make_gaussian_pointer(1.0)
        q2 = PointerObservable.q_squared()
        rhs = weak_limit_rhs(rho, Observable(proj_plus), Observable(PAULI_Z), pointer, q2)
        assert rhs.total == pytest.approx(0.0, abs=1e-12)
        residuals = []
        for eps1 in self.schedule:
            setup = qubit_setup(rho, proj_plus, PAULI_Z, eps1, 1.0)
            residuals.append(abs(correlation(setup, q2) - eps1 * 1.0 * rhs.total))
        assert 1.8 < self.loglog_slope(self.schedule, residuals) < 2.2
