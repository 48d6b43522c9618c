"""Frobenius series at a simple pole and the null-residue classifier."""
import numpy as np

from nullholo.frobenius import LaurentODE, classify_singularity, frobenius_series, series_vs_transport
from nullholo.mero_forms import MeromorphicMatrixForm

ode = LaurentODE(np.diag([0.25, -0.25]), [np.array([[0, 1], [1, 0]], dtype=complex)])
sol = frobenius_series(ode, 0.25, [1, 0], J=30)
print("series vs transport at |z| = 0.5:", f"{series_vs_transport(ode, sol, 0.5).deviation:.2e}")

N = np.zeros((3, 3))
N[0, 1] = N[1, 2] = 1
rep = classify_singularity(MeromorphicMatrixForm.from_constant(N, "1/z"), 0)
print(rep.verdict, "|", rep.reason)
for note in rep.notes:
    print("  ", note)
