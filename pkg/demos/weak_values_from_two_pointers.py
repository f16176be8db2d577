"""
Reading a weak value off two measurement pointers
=================================================

A weak value has a real and an imaginary part. Neither is the outcome of a
single measurement: both appear as correlations between the pointers of two
successive couplings, divided by the post-selection probability. This script
recovers three textbook values, including one that is purely imaginary and
one that lies far outside the operator's spectrum, from nothing but pointer
correlation sweeps.
"""

import math

import numpy as np

from weakorder.estimators import DEFAULT_SCHEDULE, forward_estimator, weak_value
from weakorder.operators import (
    KET_PLUS,
    KET_PLUS_I,
    KET_ZERO,
    PAULI_X,
    PAULI_Z,
    DensityMatrix,
    Observable,
    Projector,
)
from weakorder.pointer import make_gaussian_pointer

rho = DensityMatrix.pure(KET_ZERO)
pointers = (make_gaussian_pointer(1.0), make_gaussian_pointer(1.0))

theta = math.atan(5.0)
tilted = np.array([math.cos(theta), math.sin(theta)])

cases = [
    ("plain eigen-sandwich", Observable(PAULI_Z), Projector.onto(KET_PLUS)),
    ("amplified to tan(theta)", Observable(PAULI_X), Projector.onto(tilted)),
    ("purely imaginary", Observable(PAULI_X), Projector.onto(KET_PLUS_I)),
]

print("weak values from pointer correlation sweeps")
print(f"schedule eps1 = {list(DEFAULT_SCHEDULE)}, eps2 = 1.0, matched Gaussian pointers")
print()
print(f"{'case':>26} {'exact':>18} {'measured':>22} {'fit residual':>14}")
for label, observable, projector in cases:
    exact = weak_value(rho, projector, observable)
    result = forward_estimator(rho, observable, projector, pointers)
    measured = result.value
    residual = max(result.re_diagnostics.fit_residual, result.im_diagnostics.fit_residual)
    print(f"{label:>26} {exact.re:+8.4f}{exact.im:+8.4f}i "
          f"{measured.re:+10.6f}{measured.im:+10.6f}i {residual:14.2e}")

# the imaginary part lives in the momentum/position channel; show the raw
# sweep that the quadratic fit extrapolates to zero coupling
result = forward_estimator(rho, Observable(PAULI_X), Projector.onto(KET_PLUS_I), pointers)
print()
print("imaginary case, P1*Q2 channel ratio versus first coupling:")
for eps1, value in zip(result.im_diagnostics.eps1_schedule, result.im_diagnostics.values):
    print(f"  eps1 = {eps1:5.3f}   ratio = {value:+.6f}")
print(f"  extrapolated -> {result.im_diagnostics.limit:+.6f}   (exact -1)")
print()
print("takeaway: finite-coupling ratios drift, but their zero-coupling limit")
print("pins both components of the weak value to a few parts in 1e4.")
