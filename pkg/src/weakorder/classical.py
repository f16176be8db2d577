"""Classical counterpart: impulsive kicks on phase-space ensembles.

A system point (q, p) couples to pointer i through eps * A(q, p) * P_i at one
instant. The exact effect: the pointer momentum is unchanged, the pointer
position gains eps * A(q0, p0) (A is conserved along its own flow), and
(q, p) moves along the Hamiltonian flow of A for a time s = eps * P_i.

Linear observables translate phase space; quadratic ones rotate or shear it
in closed form (the Hamiltonian matrix J M squares to -det(M) times the
identity); everything else is integrated with an implicit-midpoint rule,
which stays symplectic for non-separable A(q, p).

Monte Carlo correlations use counter-based Philox streams spawned per shard
and a delete-one-shard jackknife, so results are reproducible bit for bit
for a fixed seed regardless of thread count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import FlowDivergence, QuadratureUnsupported

LINEAR = "linear"
QUADRATIC = "quadratic"
GENERIC = "generic"

PHASE_SPACE_BOUND = 1e6
GENERIC_SUBSTEPS = 64
FIXED_POINT_TOL = 1e-13
FIXED_POINT_MAX_ITER = 100
QUADRATURE_ORDER = 64
DEFAULT_N_SHARDS = 50
MIN_MC_SAMPLES = 10_000
FD_STEP = 1e-5


@dataclass(frozen=True)
class ClassicalObservable:
    """Scalar function of one (q, p) pair with an evaluable gradient.

    kind "linear": A = alpha q + beta p + gamma, stored as coeffs.
    kind "quadratic": A = z^T M z / 2 + b . z + c with z = (q, p).
    kind "generic": arbitrary callable; gradient falls back to central
    differences when none is supplied.
    """

    kind: str
    coeffs: tuple[float, float, float] | None = None
    m: tuple[tuple[float, float], tuple[float, float]] | None = None
    b: tuple[float, float] = (0.0, 0.0)
    c: float = 0.0
    func: Callable | None = None
    grad: Callable | None = None
    label: str = ""

    @staticmethod
    def linear(alpha: float, beta: float, gamma: float = 0.0, label: str = "") -> "ClassicalObservable":
        return ClassicalObservable(LINEAR, coeffs=(float(alpha), float(beta), float(gamma)),
                                   label=label or f"{alpha}*q + {beta}*p + {gamma}")

    @staticmethod
    def quadratic(m, b=(0.0, 0.0), c: float = 0.0, label: str = "") -> "ClassicalObservable":
        mat = np.asarray(m, dtype=float)
        if mat.shape != (2, 2) or abs(mat[0, 1] - mat[1, 0]) > 1e-14:
            raise ValueError("quadratic form needs a symmetric 2x2 matrix")
        return ClassicalObservable(
            QUADRATIC,
            m=((mat[0, 0], mat[0, 1]), (mat[1, 0], mat[1, 1])),
            b=(float(b[0]), float(b[1])), c=float(c),
            label=label or "quadratic",
        )

    @staticmethod
    def generic(func: Callable, grad: Callable | None = None, label: str = "") -> "ClassicalObservable":
        return ClassicalObservable(GENERIC, func=func, grad=grad, label=label or "generic")

    def evaluate(self, q, p):
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        if self.kind == LINEAR:
            alpha, beta, gamma = self.coeffs
            return alpha * q + beta * p + gamma
        if self.kind == QUADRATIC:
            (m00, m01), (_, m11) = self.m
            b0, b1 = self.b
            return 0.5 * (m00 * q * q + 2.0 * m01 * q * p + m11 * p * p) + b0 * q + b1 * p + self.c
        return np.asarray(self.func(q, p), dtype=float)

    def gradient(self, q, p):
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        if self.kind == LINEAR:
            alpha, beta, _ = self.coeffs
            return np.full_like(q, alpha), np.full_like(p, beta)
        if self.kind == QUADRATIC:
            (m00, m01), (_, m11) = self.m
            b0, b1 = self.b
            return m00 * q + m01 * p + b0, m01 * q + m11 * p + b1
        if self.grad is not None:
            dq, dp = self.grad(q, p)
            return np.asarray(dq, dtype=float), np.asarray(dp, dtype=float)
        h = FD_STEP
        dq = (self.evaluate(q + h, p) - self.evaluate(q - h, p)) / (2.0 * h)
        dp = (self.evaluate(q, p + h) - self.evaluate(q, p - h)) / (2.0 * h)
        return dq, dp


OBS_Q = ClassicalObservable.linear(1.0, 0.0, label="q")
OBS_P = ClassicalObservable.linear(0.0, 1.0, label="p")
OBS_HARMONIC = ClassicalObservable.quadratic(((1.0, 0.0), (0.0, 1.0)), label="(q^2+p^2)/2")
OBS_QP = ClassicalObservable.quadratic(((0.0, 1.0), (1.0, 0.0)), label="q*p")


def poisson_bracket(a: ClassicalObservable, b: ClassicalObservable) -> ClassicalObservable:
    """[A, B]_PB = dA/dq dB/dp - dA/dp dB/dq as a generic observable."""

    def value(q, p):
        aq, ap = a.gradient(q, p)
        bq, bp = b.gradient(q, p)
        return aq * bp - ap * bq

    return ClassicalObservable.generic(value, label=f"[{a.label}, {b.label}]")


@dataclass(frozen=True)
class GaussianDensity:
    """Product Gaussian phase-space density for one (q, p) pair."""

    mean_q: float = 0.0
    mean_p: float = 0.0
    sigma_q: float = 1.0
    sigma_p: float = 1.0

    def __post_init__(self):
        if not (self.sigma_q > 0 and self.sigma_p > 0):
            raise ValueError("widths must be positive")

    def sample(self, rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
        q = self.mean_q + self.sigma_q * rng.standard_normal(n)
        p = self.mean_p + self.sigma_p * rng.standard_normal(n)
        return q, p


def matched_pointer_density(sigma_q: float, mean_q: float = 0.0, mean_p: float = 0.0) -> GaussianDensity:
    """Pointer density matching a minimum-uncertainty wave packet: sigma_p = 1/(2 sigma_q)."""
    return GaussianDensity(mean_q, mean_p, sigma_q, 1.0 / (2.0 * sigma_q))


@dataclass(frozen=True)
class ClassicalModel:
    """Observables, system density, and the two pointer densities."""

    first: ClassicalObservable
    second: ClassicalObservable
    system: GaussianDensity
    pointer1: GaussianDensity
    pointer2: GaussianDensity

    def with_swapped_observables(self) -> "ClassicalModel":
        return replace(self, first=self.second, second=self.first)


@dataclass(frozen=True)
class PhasePoint:
    """System pair plus both pointer pairs; fields broadcast as arrays."""

    q: np.ndarray
    p: np.ndarray
    q1: np.ndarray
    p1: np.ndarray
    q2: np.ndarray
    p2: np.ndarray


@dataclass(frozen=True)
class ClassicalEnsemble:
    """Uniformly weighted samples from the product density, with their seed."""

    points: PhasePoint
    seed: int
    n_samples: int


def draw_points(model: "ClassicalModel", rng: np.random.Generator, n: int) -> PhasePoint:
    """Draw n samples from rho_s(q,p) rho_M1(Q1,P1) rho_M2(Q2,P2)."""
    q, p = model.system.sample(rng, n)
    q1, p1 = model.pointer1.sample(rng, n)
    q2, p2 = model.pointer2.sample(rng, n)
    return PhasePoint(q, p, q1, p1, q2, p2)


def sample_ensemble(model: "ClassicalModel", n_samples: int, seed: int) -> ClassicalEnsemble:
    """Deterministic product-density ensemble from a counter-based stream."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return ClassicalEnsemble(draw_points(model, rng, n_samples), seed, n_samples)


def _check_bounds(*arrays) -> None:
    for arr in arrays:
        if not np.all(np.isfinite(arr)) or np.max(np.abs(arr)) > PHASE_SPACE_BOUND:
            raise FlowDivergence(f"phase-space values left |z| <= {PHASE_SPACE_BOUND:.0e}")


def _flow_linear(obs: ClassicalObservable, q, p, s):
    alpha, beta, _ = obs.coeffs
    return q + beta * s, p - alpha * s


def _flow_quadratic(obs: ClassicalObservable, q, p, s):
    # z' = G z + J b with G = J M; G^2 = -det(M) I, so the matrix exponential
    # and its integral reduce to scalar trig / hyperbolic factors in det(M).
    (m00, m01), (_, m11) = obs.m
    b0, b1 = obs.b
    det = m00 * m11 - m01 * m01
    s = np.asarray(s, dtype=float)
    if det > 0:
        omega = math.sqrt(det)
        cos_t, sin_t = np.cos(omega * s), np.sin(omega * s)
        exp_lin = sin_t / omega
        int_const = (1.0 - cos_t) / det
    elif det < 0:
        nu = math.sqrt(-det)
        cos_t, sin_t = np.cosh(nu * s), np.sinh(nu * s)
        exp_lin = sin_t / nu
        int_const = (cos_t - 1.0) / (-det)
    else:
        cos_t = np.ones_like(s)
        exp_lin = s
        int_const = 0.5 * s * s
    # e^{G s} = cos_t I + exp_lin G ; int_0^s e^{G u} du = exp_lin I + int_const G
    g00, g01 = m01, m11
    g10, g11 = -m00, -m01
    jb0, jb1 = b1, -b0
    q_new = cos_t * q + exp_lin * (g00 * q + g01 * p) + exp_lin * jb0 + int_const * (g00 * jb0 + g01 * jb1)
    p_new = cos_t * p + exp_lin * (g10 * q + g11 * p) + exp_lin * jb1 + int_const * (g10 * jb0 + g11 * jb1)
    return q_new, p_new


def _flow_generic(obs: ClassicalObservable, q, p, s, n_substeps: int):
    q = np.array(q, dtype=float, copy=True)
    p = np.array(p, dtype=float, copy=True)
    h = np.asarray(s, dtype=float) / n_substeps
    for _ in range(n_substeps):
        q_new, p_new = q, p
        converged = False
        for _ in range(FIXED_POINT_MAX_ITER):
            q_mid = 0.5 * (q + q_new)
            p_mid = 0.5 * (p + p_new)
            dq, dp = obs.gradient(q_mid, p_mid)
            q_next = q + h * dp
            p_next = p - h * dq
            if not (np.all(np.isfinite(q_next)) and np.all(np.isfinite(p_next))):
                raise FlowDivergence("implicit midpoint iteration produced non-finite values")
            shift = max(float(np.max(np.abs(q_next - q_new))), float(np.max(np.abs(p_next - p_new))))
            q_new, p_new = q_next, p_next
            if shift < FIXED_POINT_TOL:
                converged = True
                break
        if not converged:
            raise FlowDivergence("implicit midpoint iteration did not converge; reduce the kick strength")
        q, p = q_new, p_new
        _check_bounds(q, p)
    return q, p


def kick(state: PhasePoint, eps: float, observable: ClassicalObservable,
         pointer_index: int, n_substeps: int = GENERIC_SUBSTEPS) -> PhasePoint:
    """One impulsive coupling eps * A(q, p) * P_i; exact for linear/quadratic A.

    The pointer momentum is conserved, the pointer position gains
    eps * A(q, p) evaluated before the kick, and the system point follows the
    Hamiltonian flow of A for a per-sample time s = eps * P_i.
    """
    if pointer_index not in (1, 2):
        raise ValueError("pointer_index must be 1 or 2")
    pointer_p = state.p1 if pointer_index == 1 else state.p2
    pointer_q = state.q1 if pointer_index == 1 else state.q2
    s = eps * np.asarray(pointer_p, dtype=float)
    a_initial = observable.evaluate(state.q, state.p)
    if observable.kind == LINEAR:
        q_new, p_new = _flow_linear(observable, state.q, state.p, s)
    elif observable.kind == QUADRATIC:
        q_new, p_new = _flow_quadratic(observable, state.q, state.p, s)
    else:
        q_new, p_new = _flow_generic(observable, state.q, state.p, s, n_substeps)
    _check_bounds(q_new, p_new)
    new_pointer_q = pointer_q + eps * a_initial
    _check_bounds(new_pointer_q)
    if pointer_index == 1:
        return replace(state, q=q_new, p=p_new, q1=new_pointer_q)
    return replace(state, q=q_new, p=p_new, q2=new_pointer_q)


def _hermite_nodes(order: int = QUADRATURE_ORDER):
    nodes, weights = np.polynomial.hermite_e.hermegauss(order)
    return nodes, weights / weights.sum()


def phase_space_mean(observable: ClassicalObservable, density: GaussianDensity,
                     order: int = QUADRATURE_ORDER) -> float:
    """E[A(q, p)] under a product Gaussian, by tensor Gauss-Hermite quadrature."""
    if not isinstance(density, GaussianDensity):
        raise QuadratureUnsupported("phase-space means need a GaussianDensity")
    nodes, weights = _hermite_nodes(order)
    q = density.mean_q + density.sigma_q * nodes
    p = density.mean_p + density.sigma_p * nodes
    vals = observable.evaluate(q[:, None], p[None, :])
    return float(weights @ vals @ weights)


@dataclass(frozen=True)
class ClassicalRhs:
    """Poisson-bracket analogue of the weak-limit correlation split."""

    product_term: float
    bracket_term: float

    @property
    def total(self) -> float:
        return self.product_term + self.bracket_term


def classical_rhs(model: ClassicalModel, f1: ClassicalObservable) -> ClassicalRhs:
    """lim <F1c Q2> / (eps1 eps2) for the classical kicks.

    product_term = -<A B>_s <[P1, F1]_PB>_M1 and
    bracket_term = -<[A, B]_PB>_s <P1 F1>_M1; the bracket term is the part
    that flips sign when the kick order is reversed.
    """
    a, b = model.first, model.second
    ab = ClassicalObservable.generic(lambda q, p: a.evaluate(q, p) * b.evaluate(q, p))
    mean_ab = phase_space_mean(ab, model.system)
    mean_pb = phase_space_mean(poisson_bracket(a, b), model.system)
    p1f1 = ClassicalObservable.generic(lambda q, p: p * f1.evaluate(q, p))
    mean_p1f1 = phase_space_mean(p1f1, model.pointer1)
    mean_pf_bracket = phase_space_mean(poisson_bracket(OBS_P, f1), model.pointer1)
    return ClassicalRhs(
        product_term=-mean_ab * mean_pf_bracket,
        bracket_term=-mean_pb * mean_p1f1,
    )


@dataclass(frozen=True)
class MCResult:
    """Monte Carlo estimate with a delete-one-shard jackknife error."""

    estimate: float
    stderr: float
    n_samples: int
    n_shards: int
    seed: int


def _shard_mean(model: ClassicalModel, f1: ClassicalObservable, center: float,
                eps1: float, eps2: float, n: int, seq: np.random.SeedSequence) -> float:
    rng = np.random.Generator(np.random.Philox(seq))
    state = draw_points(model, rng, n)
    state = kick(state, eps1, model.first, 1)
    state = kick(state, eps2, model.second, 2)
    values = (f1.evaluate(state.q1, state.p1) - center) * state.q2
    return float(np.mean(values))


def classical_correlation_mc(model: ClassicalModel, f1: ClassicalObservable,
                             eps1: float, eps2: float, n_samples: int, seed: int,
                             n_shards: int = DEFAULT_N_SHARDS) -> MCResult:
    """Monte Carlo <[F1 - <F1>_M1] Q2> after both kicks.

    Samples are split across ``n_shards`` equal shards with independent
    Philox streams spawned from the seed; the estimate is the grand mean and
    the error a delete-one-shard jackknife standard error. The effective
    sample count is rounded down to a multiple of the shard count.

    The number of threads is capped by the WEAKORDER_THREADS environment
    variable (default 1); the reduction order is fixed, so results do not
    depend on it.
    """
    if n_samples < MIN_MC_SAMPLES:
        raise ValueError(f"need at least {MIN_MC_SAMPLES} samples, got {n_samples}")
    per_shard = n_samples // n_shards
    if per_shard < 2:
        raise ValueError("too few samples per shard")
    center = phase_space_mean(f1, model.pointer1)
    sequences = np.random.SeedSequence(seed).spawn(n_shards)
    threads = max(1, int(os.environ.get("WEAKORDER_THREADS", "1")))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            shard_means = list(pool.map(
                lambda seq: _shard_mean(model, f1, center, eps1, eps2, per_shard, seq),
                sequences,
            ))
    else:
        shard_means = [
            _shard_mean(model, f1, center, eps1, eps2, per_shard, seq)
            for seq in sequences
        ]
    means = np.asarray(shard_means)
    estimate = float(np.mean(means))
    # Delete-one-shard jackknife of the grand mean over equal shards.
    leave_one = (means.sum() - means) / (n_shards - 1)
    stderr = math.sqrt((n_shards - 1) / n_shards * float(np.sum((leave_one - leave_one.mean()) ** 2)))
    return MCResult(estimate, stderr, per_shard * n_shards, n_shards, seed)
