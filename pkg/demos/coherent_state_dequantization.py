"""
Coherent states land on the classical answer
============================================

For a coherent state, truncated position/momentum observables, and matched
Gaussian densities, the quantum weak-limit correlation and its classical
phase-space counterpart should coincide channel by channel: the commutator
goes over to i times the Poisson bracket. This script computes both sides
for increasing truncation dimension and watches them converge.
"""

import math

from weakorder.classical import (
    ClassicalModel,
    ClassicalObservable,
    GaussianDensity,
    classical_rhs,
    matched_pointer_density,
)
from weakorder.estimators import weak_limit_rhs
from weakorder.operators import (
    DensityMatrix,
    Observable,
    coherent_ket,
    truncated_momentum,
    truncated_position,
)
from weakorder.pointer import PointerObservable, make_gaussian_pointer

mean_q, mean_p = 2.0, 1.5
alpha = complex(mean_q, mean_p) / math.sqrt(2.0)
sigma = 0.7
pointer = make_gaussian_pointer(sigma)

# classical side: Gaussian with the coherent-state widths, matched pointers
model = ClassicalModel(
    ClassicalObservable.linear(1.0, 0.0, label="q"),
    ClassicalObservable.linear(0.0, 1.0, label="p"),
    GaussianDensity(mean_q, mean_p, 1 / math.sqrt(2), 1 / math.sqrt(2)),
    matched_pointer_density(sigma),
    matched_pointer_density(sigma),
)
classical_q = classical_rhs(model, ClassicalObservable.linear(1.0, 0.0)).total
classical_p = classical_rhs(model, ClassicalObservable.linear(0.0, 1.0)).total

print(f"coherent state at (q, p) = ({mean_q}, {mean_p}), pointer sigma = {sigma}")
print(f"classical q channel: {classical_q:+.6f}   (product of the means = "
      f"{mean_q * mean_p:+.6f})")
print(f"classical p channel: {classical_p:+.6f}   (bracket term = "
      f"{-1 / (4 * sigma**2):+.6f})")
print()

print(f"{'dim':>5} {'quantum q channel':>19} {'quantum p channel':>19} "
      f"{'gap q':>10} {'gap p':>10}")
for dim in (8, 12, 16, 24, 36):
    rho = DensityMatrix.pure(coherent_ket(alpha, dim))
    a_op = Observable(truncated_position(dim))
    b_op = Observable(truncated_momentum(dim))
    quantum_q = weak_limit_rhs(rho, a_op, b_op, pointer, PointerObservable.q()).total
    quantum_p = weak_limit_rhs(rho, a_op, b_op, pointer, PointerObservable.p()).total
    print(f"{dim:>5} {quantum_q:>19.6f} {quantum_p:>19.6f} "
          f"{abs(quantum_q - classical_q):>10.2e} {abs(quantum_p - classical_p):>10.2e}")

print()
print("takeaway: once the truncation comfortably covers the coherent")
print("amplitude the gaps crash to machine precision; the q channel reads")
print("the product of the means and the p channel the bracket term,")
print("exactly as on phase space.")
