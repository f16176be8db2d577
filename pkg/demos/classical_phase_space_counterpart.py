"""
The same correlation experiment on classical phase space
========================================================

Replace operators by phase-space functions, von Neumann kicks by impulsive
Hamiltonian flows, and the trace by an ensemble average: the two-pointer
correlation then splits into a product term and a Poisson-bracket term, the
direct analogue of the quantum anticommutator/commutator split. This script
evaluates the split by Gauss-Hermite quadrature and confirms it with seeded
Monte Carlo ensembles of increasing size.
"""

import numpy as np

from weakorder.classical import (
    ClassicalModel,
    ClassicalObservable,
    GaussianDensity,
    classical_correlation_mc,
    classical_rhs,
)

q_obs = ClassicalObservable.linear(1.0, 0.0, label="q")
harmonic = ClassicalObservable.quadratic(((1.0, 0.0), (0.0, 1.0)), label="(q^2+p^2)/2")

models = [
    ("A = B = q, read Q1", ClassicalModel(q_obs, q_obs, GaussianDensity(),
                                          GaussianDensity(), GaussianDensity()),
     ClassicalObservable.linear(1.0, 0.0, label="Q1")),
    ("A = B = harmonic, read Q1", ClassicalModel(harmonic, harmonic, GaussianDensity(),
                                                 GaussianDensity(), GaussianDensity()),
     ClassicalObservable.linear(1.0, 0.0, label="Q1")),
]

eps1, eps2 = 0.05, 1.0
for label, model, f1 in models:
    rhs = classical_rhs(model, f1)
    print(label)
    print(f"  product term {rhs.product_term:+.6f}   bracket term {rhs.bracket_term:+.6f}"
          f"   total {rhs.total:+.6f}")
    for n_samples in (10_000, 100_000, 1_000_000):
        result = classical_correlation_mc(model, f1, eps1, eps2, n_samples, seed=1)
        ratio = result.estimate / (eps1 * eps2)
        stderr = result.stderr / (eps1 * eps2)
        pull = abs(ratio - rhs.total) / stderr
        print(f"  n = {n_samples:>9,}   ratio = {ratio:+.4f} +- {stderr:.4f}   "
          f"pull = {pull:.2f} sigma")
    print()

# swapping the kick order flips only the bracket term, the classical face of
# the conjugation symmetry
cross = ClassicalModel(q_obs, ClassicalObservable.linear(0.0, 1.0, label="p"),
                       GaussianDensity(), GaussianDensity(), GaussianDensity())
p1_channel = ClassicalObservable.linear(0.0, 1.0, label="P1")
straight = classical_rhs(cross, p1_channel)
swapped = classical_rhs(cross.with_swapped_observables(), p1_channel)
print("A = q, B = p, read P1, then swap the kick order:")
print(f"  straight: product {straight.product_term:+.4f}  bracket {straight.bracket_term:+.4f}")
print(f"  swapped:  product {swapped.product_term:+.4f}  bracket {swapped.bracket_term:+.4f}")
print()
print("takeaway: the ensembles agree with quadrature within the jackknife")
print("error (any single draw still exceeds 3 sigma about 0.3% of the time),")
print("and order reversal flips exactly the bracket term.")
