"""Series solutions of y' = A(z) y at a regular singular point
A(z) = R/z + sum_j A_j z^j, logarithmic partners for Jordan chains, and the
obstruction test for special-unitary monodromy around a simple pole."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .mero_forms import MeromorphicMatrixForm, is_null_form
from .path_ode import PathSpec, Tolerances, integrate_linear, line_path
from .rational import INF, is_infinity

SINGULAR_TOL = 1e-10
EIGVEC_TOL = 1e-10
REAL_TOL = 1e-9
RANK_TOL = 1e-10
DEFAULT_J = 30


class ResonanceError(ValueError):
    def __init__(self, j: int, sigma_min: float):
        super().__init__(f"resonance at order j={j}: (lambda+j)I - R is singular (sigma_min={sigma_min:.2e})")
        self.j = j


class RadiusError(ValueError):
    pass


@dataclass
class LaurentODE:
    """Coefficient data of y' = (R/(z-p) + sum_j A_j (z-p)^j) y."""

    R: np.ndarray
    A: list
    center: complex = 0j
    radius: float = math.inf

    def __post_init__(self):
        self.R = np.asarray(self.R, dtype=complex)
        self.A = [np.asarray(a, dtype=complex) for a in self.A]
        self.n = self.R.shape[0]

    @property
    def J_in(self) -> int:
        return len(self.A) - 1

    def Ak(self, k: int) -> np.ndarray:
        return self.A[k] if k < len(self.A) else np.zeros((self.n, self.n), dtype=complex)

    def coefficient(self, z) -> np.ndarray:
        t = complex(z) - self.center
        out = self.R / t
        tk = 1.0 + 0j
        for a in self.A:
            out = out + a * tk
            tk *= t
        return out

    @classmethod
    def from_form(cls, form: MeromorphicMatrixForm, pole, J: int = DEFAULT_J) -> "LaurentODE":
        """Expansion of a form about a declared finite simple pole."""
        if is_infinity(pole):
            raise ValueError("expand at a finite puncture (use chart_at_infinity for infinity)")
        order = form.pole_order(pole)
        if order != 1:
            raise ValueError(f"pole order at {pole} is {order}, not 1")
        p = form._resolve(pole)
        v, coeffs = form.laurent(p, J + 2)
        others = [abs(q - p) for q in form.punctures if q != p]
        radius = min(others) / 2 if others else math.inf
        return cls(coeffs[0], coeffs[1:], p, radius)


@dataclass
class FrobeniusSolution:
    lambda_: complex
    coefficients: np.ndarray
    log_partner: np.ndarray | None = None
    center: complex = 0j
    radius: float = math.inf

    @property
    def J(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, z, log_z: complex | None = None) -> np.ndarray:
        """z^lambda sum t^j v_j (+ log t times the partner series), t = z - center.

        ``log_z`` selects the branch; by default the principal logarithm.
        """
        t = complex(z) - self.center
        L = cmath.log(t) if log_z is None else complex(log_z)
        powers = t ** np.arange(len(self.coefficients))
        out = np.exp(self.lambda_ * L) * (powers @ self.coefficients)
        if self.log_partner is not None:
            out = out + L * np.exp(self.lambda_ * L) * (powers @ self.log_partner)
        return out

    def derivative(self, z, log_z: complex | None = None) -> np.ndarray:
        t = complex(z) - self.center
        L = cmath.log(t) if log_z is None else complex(log_z)
        j = np.arange(len(self.coefficients))
        zl = np.exp(self.lambda_ * L)
        dser = ((self.lambda_ + j) * t ** (j - 1.0)) @ self.coefficients
        out = zl * dser
        if self.log_partner is not None:
            ser = (t ** j) @ self.log_partner
            dlog = ((self.lambda_ + j) * t ** (j - 1.0)) @ self.log_partner
            out = out + zl * (ser / t + L * dlog)
        return out


def _solve(M: np.ndarray, rhs: np.ndarray, j: int) -> np.ndarray:
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] < SINGULAR_TOL * max(1.0, s[0]):
        raise ResonanceError(j, float(s[-1]))
    return np.linalg.solve(M, rhs)


def _recursion(ode: LaurentODE, lam: complex, v0: np.ndarray, J: int, derivative: bool = False):
    n = ode.n
    I = np.eye(n)
    v = np.zeros((J + 1, n), dtype=complex)
    dv = np.zeros((J + 1, n), dtype=complex)
    v[0] = v0
    for j in range(J):
        s = sum(ode.Ak(k) @ v[j - k] for k in range(j + 1))
        M = (lam + j + 1) * I - ode.R
        # matching z^(lambda+j) in y' = A y gives M v_{j+1} = s
        v[j + 1] = _solve(M, s, j + 1)
        if derivative:
            # differentiate M v_{j+1} = s in lambda (dM/dlambda = I)
            ds = sum(ode.Ak(k) @ dv[j - k] for k in range(j + 1))
            dv[j + 1] = _solve(M, ds - v[j + 1], j + 1)
    return v, dv


def frobenius_series(ode: LaurentODE, lambda0: complex, v0, J: int = DEFAULT_J) -> FrobeniusSolution:
    v0 = np.asarray(v0, dtype=complex)
    if np.linalg.norm(v0) == 0:
        raise ValueError("v0 must be nonzero")
    if np.linalg.norm(ode.R @ v0 - lambda0 * v0) > EIGVEC_TOL * np.linalg.norm(v0):
        raise ValueError("v0 is not an eigenvector of R for lambda0")
    v, _ = _recursion(ode, complex(lambda0), v0, J)
    return FrobeniusSolution(complex(lambda0), v, None, ode.center, ode.radius)


def log_solution(ode: LaurentODE, lambda0: complex, p0, q0, J: int = DEFAULT_J) -> tuple[FrobeniusSolution, FrobeniusSolution]:
    """Plain solution y from p0 and y~ = d/dlambda y(lambda, p0) + y(lambda0, q0)."""
    p0 = np.asarray(p0, dtype=complex)
    q0 = np.asarray(q0, dtype=complex)
    R = ode.R
    lam = complex(lambda0)
    scale = max(np.linalg.norm(p0), np.linalg.norm(q0))
    if np.linalg.norm(R @ p0 - lam * p0) > EIGVEC_TOL * scale or np.linalg.norm(p0) == 0:
        raise ValueError("broken Jordan chain: p0 is not an eigenvector")
    if np.linalg.norm(R @ q0 - lam * q0 - p0) > EIGVEC_TOL * scale:
        raise ValueError("broken Jordan chain: (R - lambda0) q0 != p0")
    v, dv = _recursion(ode, lam, p0, J, derivative=True)
    w, _ = _recursion(ode, lam, q0, J)
    y = FrobeniusSolution(lam, v, None, ode.center, ode.radius)
    ytilde = FrobeniusSolution(lam, dv + w, v, ode.center, ode.radius)
    return y, ytilde


def ode_residual(ode: LaurentODE, sol: FrobeniusSolution, z, log_z=None) -> float:
    """Relative size of y' - A(z) y for the truncated series."""
    y = sol.evaluate(z, log_z)
    r = sol.derivative(z, log_z) - ode.coefficient(z) @ y
    return float(np.linalg.norm(r) / max(np.linalg.norm(y), 1e-300))


@dataclass
class SeriesComparison:
    deviation: float
    truncation_estimate: float
    truncation_dominated: bool


def series_vs_transport(
    ode: LaurentODE,
    solution: FrobeniusSolution,
    z_eval,
    path: PathSpec | None = None,
    seed_radius: float = 1e-3,
    tol: Tolerances = Tolerances(1e-13, 1e-15),
) -> SeriesComparison:
    """Relative gap between the series at z_eval and the ODE transport of the
    series value from a point near the singularity."""
    z_eval = complex(z_eval)
    t_eval = z_eval - ode.center
    if abs(t_eval) > solution.radius or abs(t_eval) > ode.radius:
        raise RadiusError(f"|z - p| = {abs(t_eval):.3g} exceeds the convergence radius estimate")
    if path is None:
        seed = ode.center + seed_radius * t_eval / abs(t_eval)
        path = line_path(seed, z_eval)
    y_seed = solution.evaluate(path.start)
    res = integrate_linear(ode.coefficient, path, "right", y_seed, tol, renormalize=False)
    # continue the logarithm along the path from the principal value at its start
    log_end = _continued_log(path, ode.center)
    y_series = solution.evaluate(z_eval, log_end)
    dev = float(np.linalg.norm(res.end_matrix - y_series) / np.linalg.norm(y_series))
    nxt, _ = _recursion(ode, solution.lambda_, solution.coefficients[0], solution.J + 1)
    est = float(np.linalg.norm(nxt[-1]) * abs(t_eval) ** (solution.J + 1) / max(np.linalg.norm(solution.coefficients[0]), 1e-300))
    if solution.log_partner is not None:
        est = max(est, abs(np.log(abs(t_eval))) * est)
    return SeriesComparison(dev, est, bool(est > 1e-3 * max(dev, 1e-300) and dev > 1e-12))


def _continued_log(path: PathSpec, center: complex) -> complex:
    pts = path.sample(64) - center
    L = cmath.log(pts[0])
    for a, b in zip(pts, pts[1:]):
        L += cmath.log(b / a)
    return L


# ---------------------------------------------------------------------------
# classification of simple poles


@dataclass
class SingularityReport:
    pole: complex
    pole_order: int
    eigenvalues: list
    multiplicities: list
    diagonalizable: bool | None
    trace_square: complex
    is_null: bool | None
    su_monodromy_possible: bool | None
    verdict: str
    reason: str = ""
    notes: list = field(default_factory=list)

    def as_lines(self) -> dict:
        return {
            "pole": f"{self.pole}",
            "pole_order": str(self.pole_order),
            "eigenvalues": ";".join(f"{complex(l):.12g}" for l in self.eigenvalues),
            "multiplicities": ";".join(str(m) for m in self.multiplicities),
            "diagonalizable": str(self.diagonalizable).lower(),
            "trace_square": f"{self.trace_square:.3e}",
            "null": str(self.is_null).lower(),
            "su_monodromy_possible": str(self.su_monodromy_possible).lower(),
            "verdict": self.verdict,
            "reason": self.reason,
        }


def _eigen_structure(R: np.ndarray):
    """Distinct eigenvalues, algebraic multiplicities, diagonalizability."""
    n = R.shape[0]
    norm = np.linalg.norm(R, 2)
    if norm == 0:
        return [0j], [n], True, True
    nilpotent = np.linalg.norm(np.linalg.matrix_power(R / norm, n)) <= 1e-10
    if nilpotent:
        # a nilpotent matrix is diagonalizable only if it vanishes
        return [0j], [n], False, True
    ev = np.linalg.eigvals(R)
    distinct, mult = [], []
    for l in ev:
        for k, d in enumerate(distinct):
            if abs(l - d) <= 1e-7 * max(1.0, norm):
                mult[k] += 1
                break
        else:
            distinct.append(complex(l))
            mult.append(1)
    diag = True
    for l, m in zip(distinct, mult):
        s = np.linalg.svd(R - l * np.eye(n), compute_uv=False)
        geo = int(np.sum(s <= RANK_TOL * norm))
        if geo < m:
            diag = False
    return distinct, mult, diag, False


def classify_singularity(form: MeromorphicMatrixForm, pole) -> SingularityReport:
    order = form.pole_order(pole)
    p = INF if is_infinity(pole) else form._resolve(pole)
    if is_infinity(p):
        lead = form.chart_at_infinity().leading_coefficient(0)
    else:
        lead = form.leading_coefficient(p) if order > 0 else np.zeros((form.n, form.n), dtype=complex)
    R = lead if order >= 1 else np.zeros((form.n, form.n), dtype=complex)
    distinct, mult, diag, nilpotent = _eigen_structure(R)
    tr2 = complex(np.trace(R @ R))
    if order == 0:
        return SingularityReport(
            p, 0, distinct, mult, True, tr2, None, None, "vacuous: R = 0",
            "residue vanishes; a complete end cannot sit at a regular point",
        )
    if order != 1:
        return SingularityReport(
            p, order, distinct, mult, diag, tr2, None, None, "not applicable",
            f"pole of order {order}; the simple-pole argument does not apply",
            ["eigenvalues are those of the leading Laurent coefficient"],
        )
    null = is_null_form(form).is_null
    notes = [f"tr R^2 = {tr2:.3e}"]
    if not null:
        return SingularityReport(
            p, 1, distinct, mult, diag, tr2, False, None, "not applicable",
            "form is not null", notes,
        )
    notes.append("null form: tr R^2 = 0, so the squares of the eigenvalues sum to 0")
    real = all(abs(l.imag) <= REAL_TOL * (1 + abs(l)) for l in distinct)
    if not real:
        notes.append("a non-real eigenvalue gives a monodromy eigenvalue off the unit circle")
        reason = "non-real exponent"
    elif nilpotent or all(abs(l) <= REAL_TOL for l in distinct):
        notes.append("real spectrum with zero square-sum: every eigenvalue is 0")
        if diag:
            reason = "all-eigenvalues-zero ⟹ R=0 contradiction"
            notes.append("diagonalizable with zero spectrum forces R = 0, contradicting a simple pole")
        else:
            reason = "logarithmic monodromy"
            notes.append("nilpotent R != 0: a log z term makes the monodromy non-diagonalizable")
    else:
        reason = "non-real exponent"
        notes.append("real nonzero eigenvalues cannot have zero square-sum; numerical inconsistency")
    return SingularityReport(p, 1, distinct, mult, diag, tr2, True, False, "impossible", reason, notes)
