"""
The weak-limit correlation splits along exchange symmetry
=========================================================

To first order in both couplings, the pointer correlation divided by
eps1*eps2 is a sum of two products: the system anticommutator times a
pointer commutator moment, plus the system commutator times a pointer
anticommutator moment. Choosing the first-pointer readout F1 selects which
term survives. This script evaluates both terms directly, then confirms the
total against zero-coupling extrapolations of the simulated correlation.
"""

from weakorder.estimators import DEFAULT_SCHEDULE, extrapolate_limit, weak_limit_rhs
from weakorder.operators import (
    KET_ZERO,
    PAULI_X,
    PAULI_Y,
    DensityMatrix,
    Observable,
)
from weakorder.pointer import PointerObservable, make_gaussian_pointer
from weakorder.sequential import MeasurementSetup, correlation

rho = DensityMatrix.pure(KET_ZERO)
pointer1 = make_gaussian_pointer(1.0)
pointer2 = make_gaussian_pointer(1.0)

cases = [
    ("A = B = sigma_x, F1 = Q", Observable(PAULI_X), Observable(PAULI_X),
     PointerObservable.q()),
    ("A = sigma_x, B = sigma_y, F1 = P", Observable(PAULI_X), Observable(PAULI_Y),
     PointerObservable.p()),
]

for label, first, second, f1 in cases:
    rhs = weak_limit_rhs(rho, first, second, pointer1, f1)
    values = []
    for eps1 in DEFAULT_SCHEDULE:
        setup = MeasurementSetup(rho, first, second, pointer1, pointer2, eps1, 1.0)
        values.append(correlation(setup, f1) / eps1)
    fit = extrapolate_limit(DEFAULT_SCHEDULE, values)
    print(label)
    print(f"  anticommutator term   {rhs.symmetric_term.real:+.6f}")
    print(f"  commutator term       {rhs.antisymmetric_term.real:+.6f}")
    print(f"  predicted total       {rhs.total:+.6f}")
    for eps1, value in zip(DEFAULT_SCHEDULE, values):
        print(f"    eps1 = {eps1:5.3f}   measured ratio = {value:+.6f}")
    print(f"  extrapolated          {fit.limit:+.6f}   "
          f"(gap {abs(fit.limit - rhs.total):.1e})")
    print()

print("takeaway: the Q channel reads the anticommutator part and the P")
print("channel the commutator part; each extrapolated sweep lands on the")
print("predicted term to a few parts in 1e5.")
