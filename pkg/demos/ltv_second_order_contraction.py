"""A linear time-varying system that contracts areas but not distances.

The system dx/dt = A(t) x with A(t) = [[-1, 0], [-cos(t), 0]] settles on a
whole line of equilibria, so no norm can contract pairs of solutions.  Its
second additive compound is the constant trace -1, so 2-parallelogram areas
decay like exp(-t): the system is 2-order contractive.

Run with:  python demos/ltv_second_order_contraction.py
"""

import numpy as np

from kcontract import (
    asymptotic_subspace,
    certify_lti,
    integrate,
    MeasureSpec,
    Norm,
    transition_matrix,
)
from kcontract.models import cos_ltv_matrix, model

np.set_printoptions(precision=6, suppress=True)

entry = model("cos_ltv")

print("Solutions converge to a point that depends on the start:")
for a in ([2.0, 1.0], [0.0, 1.0], [1.0, 1.0]):
    traj = integrate(entry.system, a, (0.0, 25.0), 1e-3)
    print(f"  x(25, {a}) = {traj.states[-1]}   (predicted limit: "
          f"[0, {a[1] - a[0] / 2}])")

print()
print("Transition matrix at t = 20 vs its closed form:")
mt = transition_matrix(cos_ltv_matrix, (0.0, 20.0), 1e-3)
print(mt.final)
print("det Phi(20) =", np.linalg.det(mt.final), " vs exp(-20) =", np.exp(-20.0))

print()
print("The time grid certificate: mu(A^[2](t)) = trace A(t) = -1 for all t")
cert = certify_lti(cos_ltv_matrix, 2, MeasureSpec(Norm.L1),
                   time_grid=np.linspace(0, 2 * np.pi, 50))
print(f"  verdict {cert.verdict}, rate eta = {cert.eta}")

print()
print("Decaying-subspace picture: a 1-dimensional subspace of initial")
print("conditions dies out, which is exactly n - k + 1 for k = 2:")
rep = asymptotic_subspace(cos_ltv_matrix, 2, t_max=30.0, h=1e-3)
print("  singular values of Phi(30):", rep.singular_values)
print(f"  decaying dimension {rep.decaying_dimension} "
      f"(needed {rep.required_dimension}), compound norm {rep.compound_norm:.3e}, "
      f"consistent: {rep.consistent}")
