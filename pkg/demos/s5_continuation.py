"""Close the monodromy of the seven-parameter family at c = 0.01."""
import numpy as np

from nullholo.perturb import A0, jacobian_rank, newton_solve, periods

print("periods at the seed:", np.abs(periods(A0)).max())
r = jacobian_rank(A0)
print("residue Jacobian rank:", r.rank, "singular values:", np.round(r.singular_values, 4))

st = newton_solve(0.01)
print(f"|phi| = {st.residual:.2e} after {len(st.history)} steps")
print("a(c) =", np.round(st.a, 10))
print("unitary deviations:", {k: f"{v:.1e}" for k, v in st.unitary_deviations.items()})
print("degree along the path:", st.stage_degrees)
