"""Seven-parameter deformation family in SL(3,C)/SU(3) and the Newton
continuation that closes its monodromy.

Family data: g = ((a2 z + a3)/(z - a1), (a4 z^2 + a5 z + a6)/(z - a1)^2),
omega = a7 (z - a1)^4 / (z^2 (z+1)^2) dz, assembled in the s5 frame.  The lift
solves dF = -c A F (right equation), and phi collects (sigma - I)/c for the
loops around 0 and -1 where sigma = rho rho^*.
"""
from __future__ import annotations

import math
import os
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .lie_core import S5_FRAME, LieFrame
from .mero_forms import MeromorphicMatrixForm, assemble_form
from .path_ode import PathSpec, Tolerances, loop_around, transport, unitary_deviation
from .rational import RationalFunction

P = np.polynomial.polynomial

A0 = np.array([1, 1, 1, 2, 4, 2, 1], dtype=complex)
BASE_POINT = 0.5 + 0j
LOOP_RADIUS = 0.4
PHI_TOL = Tolerances(1e-13, 1e-15, 400_000)
STRUCTURAL_ZEROS = ((0, 1), (1, 0), (1, 2), (2, 1))
DENOMINATOR = np.array([0, 0, 1, 2, 1], dtype=complex)  # z^2 (z+1)^2


class DegenerateParameters(ValueError):
    pass


class StructuralZeroError(RuntimeError):
    pass


class ContinuationError(RuntimeError):
    pass


def _threads() -> int:
    env = os.environ.get("NULLHOLO_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"NULLHOLO_THREADS must be an integer, got {env!r}") from None
    return min(4, os.cpu_count() or 1)


def _as_params(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex).ravel()
    if a.shape != (7,):
        raise ValueError("the family has exactly seven parameters")
    if min(abs(a[0]), abs(a[0] + 1)) < 1e-9:
        raise DegenerateParameters("a1 must stay away from the punctures 0 and -1")
    if a[6] == 0:
        raise DegenerateParameters("a7 = 0 gives the zero form")
    return a


def family_numerators(a) -> list[np.ndarray]:
    """Numerators of alpha_1..alpha_4 over z^2 (z+1)^2 (ascending coefficients)."""
    a1, a2, a3, a4, a5, a6, a7 = _as_params(a)
    lin = np.array([-a1, 1])
    q = P.polymul(lin, lin)
    q4 = P.polymul(q, q)
    u = np.array([a3, a2])
    v = np.array([a6, a5, a4])
    gg = P.polyadd(P.polymul(P.polymul(u, u), q), P.polymul(v, v))
    return [
        a7 * P.polysub(q4, gg),
        1j * a7 * P.polyadd(q4, gg),
        2 * a7 * P.polymul(u, P.polymul(q, lin)),
        2 * a7 * P.polymul(v, q),
    ]


def family_components(a) -> list[RationalFunction]:
    return [RationalFunction(N, DENOMINATOR) for N in family_numerators(a)]


def family_form(a, frame: LieFrame = S5_FRAME, designation: str = "left") -> MeromorphicMatrixForm:
    """The null sl(3)-valued form sum alpha_k e_k with ends {0, -1, inf}."""
    raw = assemble_form(family_components(a), frame, designation)
    found = sorted(raw.punctures, key=lambda p: p.real)
    if len(found) != 2 or abs(found[0] + 1) > 1e-9 or abs(found[1]) > 1e-9 or not raw.infinity:
        raise DegenerateParameters(f"ends moved: {raw.punctures}, infinity={raw.infinity}")
    return MeromorphicMatrixForm(raw.entries, (0j, -1 + 0j), True, designation)


def branch_points(a, tol: float = 1e-9) -> list[complex]:
    """Common zeros of the components (where the metric degenerates)."""
    nums = [P.polytrim(np.asarray(N), 0) for N in family_numerators(a)]
    nums = [N for N in nums if np.any(N)]
    if not nums:
        return [0j]
    shortest = min(nums, key=len)
    if len(shortest) <= 1:
        return []
    out = []
    for r in P.polyroots(shortest):
        if min(abs(r), abs(r + 1)) < 1e-9:
            continue
        scale = max(float(np.max(np.abs(N))) for N in nums) * max(1.0, abs(r)) ** 4
        if all(abs(P.polyval(r, N)) <= tol * scale for N in nums):
            out.append(complex(r))
    return out


def is_complete_regular(a) -> bool:
    """Per-parameter check: no branch points and every end a pole of order >= 2."""
    form = family_form(a)
    return not branch_points(a) and all(form.pole_order(e) >= 2 for e in form.ends)


# ---------------------------------------------------------------------------
# residues


def _residues_from_numerators(nums) -> np.ndarray:
    out = []
    for N in nums:
        out.append(P.polyval(0, P.polyder(N)) - 2 * P.polyval(0, N))
    for N in nums:
        out.append(P.polyval(-1, P.polyder(N)) + 2 * P.polyval(-1, N))
    return np.array(out, dtype=complex)


def residue_map(a) -> np.ndarray:
    """Residues (Res_0 alpha_1..alpha_4, Res_-1 alpha_1..alpha_4) as 8 complex numbers."""
    return _residues_from_numerators(family_numerators(a))


def periods(a) -> np.ndarray:
    """Re of the contour integrals 2 pi i Res: rows are the loops about 0 and -1."""
    R = residue_map(a).reshape(2, 4)
    return (2j * math.pi * R).real


@lru_cache(maxsize=1)
def _symbolic_residue_gradient():
    import sympy as sp

    syms = sp.symbols("a1:8")
    a1, a2, a3, a4, a5, a6, a7 = syms
    z = sp.Symbol("z")
    q4 = (z - a1) ** 4
    gg = (a2 * z + a3) ** 2 * (z - a1) ** 2 + (a4 * z**2 + a5 * z + a6) ** 2
    nums = [a7 * (q4 - gg), sp.I * a7 * (q4 + gg), 2 * a7 * (a2 * z + a3) * (z - a1) ** 3, 2 * a7 * (a4 * z**2 + a5 * z + a6) * (z - a1) ** 2]
    res = []
    for point, sgn in ((0, -2), (-1, 2)):
        for N in nums:
            res.append(sp.expand((sp.diff(N, z) + sgn * N).subs(z, point)))
    grad = sp.Matrix([[sp.diff(r, s) for s in syms] for r in res])
    return sp.lambdify(syms, grad, "numpy")


def residue_jacobian(a, method: str = "exact", fd_step: float = 1e-6) -> np.ndarray:
    """8 x 14 real Jacobian of Im(residues) in (Re a1, Im a1, ..., Re a7, Im a7)."""
    a = _as_params(a)
    if method == "exact":
        G = np.array(_symbolic_residue_gradient()(*a), dtype=complex)
    elif method == "fd":
        G = np.zeros((8, 7), dtype=complex)
        for k in range(7):
            e = np.zeros(7, dtype=complex)
            e[k] = fd_step
            G[:, k] = (residue_map(a + e) - residue_map(a - e)) / (2 * fd_step)
    else:
        raise ValueError("method must be 'exact' or 'fd'")
    J = np.empty((8, 14))
    # residues are holomorphic in a: d/dRe = G, d/dIm = i G
    J[:, 0::2] = G.imag
    J[:, 1::2] = G.real
    return J


@dataclass
class RankResult:
    rank: int
    singular_values: np.ndarray
    threshold: float
    jacobian: np.ndarray

    @property
    def gap(self) -> float:
        """sigma_rank / sigma_{rank+1}, with a missing singular value read as 0."""
        s = self.singular_values
        nxt = s[self.rank] if self.rank < len(s) else 0.0
        return math.inf if nxt == 0 else float(s[self.rank - 1] / nxt)


def jacobian_rank(a0=A0, fd_step: float | None = None, rel_threshold: float = 1e-8) -> RankResult:
    """Numerical rank (threshold rel_threshold * sigma_max).  The exact
    Jacobian is used unless ``fd_step`` is given."""
    J = residue_jacobian(a0, "exact") if fd_step is None else residue_jacobian(a0, "fd", fd_step)
    s = np.linalg.svd(J, compute_uv=False)
    thr = rel_threshold * s[0]
    return RankResult(int(np.sum(s > thr)), s, thr, J)


# ---------------------------------------------------------------------------
# monodromy and phi


def loop_gamma1(base: complex = BASE_POINT) -> PathSpec:
    return loop_around(base, 0, LOOP_RADIUS)


def loop_gamma2(base: complex = BASE_POINT) -> PathSpec:
    return loop_around(base, -1, LOOP_RADIUS, waypoints=(0.5 + 0.5j, -0.6 + 0.5j))


def loop_gamma3(base: complex = BASE_POINT, radius: float = 2.0) -> PathSpec:
    """Clockwise circle enclosing 0 and -1, i.e. a positive loop about infinity."""
    return loop_around(base, 0, radius, waypoints=(), clockwise=True)


LOOPS = {"gamma1": loop_gamma1, "gamma2": loop_gamma2, "gamma3": loop_gamma3}


def lift_coefficient(c: float, a) -> MeromorphicMatrixForm:
    """-c A as a right-designated form (dF F^-1 of the deformed lift)."""
    return family_form(a, designation="right").scaled(-c)


def monodromies(c: float, a, loops=("gamma1", "gamma2"), tol: Tolerances = PHI_TOL) -> dict:
    form = lift_coefficient(c, a)
    out = {}
    for name in loops:
        out[name] = transport(form, LOOPS[name](), "right", None, tol).end_matrix
    return out


PHI_PROVENANCE = (
    "c",
    "gamma1:(sigma11-1)/c",
    "gamma1:(sigma33-1)/c",
    "gamma1:Re(sigma13)/c",
    "gamma1:Im(sigma13)/c",
    "gamma2:(sigma11-1)/c",
    "gamma2:(sigma33-1)/c",
    "gamma2:Re(sigma13)/c",
    "gamma2:Im(sigma13)/c",
)


@dataclass
class PhiValue:
    values: np.ndarray
    provenance: tuple = PHI_PROVENANCE
    sigmas: dict = field(default_factory=dict)
    rhos: dict = field(default_factory=dict)
    structural_residual: float = 0.0

    @property
    def residual(self) -> np.ndarray:
        return self.values[1:]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values[1:]))


def _sigma_block(sigma: np.ndarray) -> np.ndarray:
    return np.array([sigma[0, 0].real - 1, sigma[2, 2].real - 1, sigma[0, 2].real, sigma[0, 2].imag])


def first_order_law(a) -> np.ndarray:
    """The c -> 0 limit of phi: blocks of -2 sum_k Re(period_k) e_k."""
    per = periods(a)
    out = [0.0]
    for j in range(2):
        S = -2 * np.einsum("k,kij->ij", per[j], np.array(S5_FRAME.members))
        out.extend(_sigma_block(S + np.eye(3)))
    return np.array(out)


def first_order_matrices(a) -> list[np.ndarray]:
    per = periods(a)
    return [-2 * np.einsum("k,kij->ij", per[j], np.array(S5_FRAME.members)) for j in range(2)]


def phi(c: float, a, tol: Tolerances = PHI_TOL, structural_limit: float = 1e-8) -> PhiValue:
    """phi(c, a); c = 0 returns the first-order limit."""
    a = _as_params(a)
    if c == 0:
        return PhiValue(first_order_law(a))
    rhos = monodromies(c, a, ("gamma1", "gamma2"), tol)
    vals = [float(c)]
    sig = {}
    worst = 0.0
    for name in ("gamma1", "gamma2"):
        rho = rhos[name]
        s = rho @ rho.conj().T
        worst = max(worst, max(abs(s[i, j]) for i, j in STRUCTURAL_ZEROS))
        sig[name] = s
        vals.extend(_sigma_block(s) / c)
    if worst > structural_limit:
        raise StructuralZeroError(f"sigma leaves the block structure by {worst:.3e}")
    return PhiValue(np.array(vals), PHI_PROVENANCE, sig, rhos, worst)


def _phi_values(args):
    c, a, tol = args
    return phi(c, a, tol).values


def _pmap_phi(jobs):
    """phi values for (c, a, tol) jobs; NULLHOLO_THREADS worker processes."""
    jobs = list(jobs)
    workers = min(_threads(), len(jobs))
    if workers <= 1:
        return [_phi_values(j) for j in jobs]
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else None
    with ProcessPoolExecutor(workers, mp_context=ctx) as ex:
        return list(ex.map(_phi_values, jobs))


def _directions(step: float) -> list[np.ndarray]:
    dirs = []
    for k in range(7):
        for unit in (1.0, 1j):
            e = np.zeros(7, dtype=complex)
            e[k] = unit * step
            dirs.append(e)
    return dirs


def phi_jacobian(c: float, a, step: float = 1e-7, tol: Tolerances = PHI_TOL) -> np.ndarray:
    """9 x 15 central-difference Jacobian of phi in (c, Re a1, Im a1, ...)."""
    a = _as_params(a)
    dirs = _directions(step)
    jobs = [(c, a + e, tol) for e in dirs] + [(c, a - e, tol) for e in dirs]
    hc = max(abs(c) * 1e-3, 1e-9)
    if c != 0:
        jobs += [(c + hc, a, tol), (c - hc, a, tol)]
    vals = _pmap_phi(jobs)
    J = np.zeros((9, 15))
    J[0, 0] = 1.0
    for k in range(14):
        J[1:, k + 1] = ((vals[k] - vals[k + 14]) / (2 * step))[1:]
    if c != 0:
        J[1:, 0] = ((vals[28] - vals[29]) / (2 * hc))[1:]
    return J


def limit_jacobian(a, step: float = 1e-6) -> np.ndarray:
    """Jacobian of the c -> 0 limit of phi in the 14 real parameters (8 x 14)."""
    a = _as_params(a)
    J = np.zeros((8, 14))
    for k, e in enumerate(_directions(step)):
        J[:, k] = ((first_order_law(a + e) - first_order_law(a - e)) / (2 * step))[1:]
    return J


# ---------------------------------------------------------------------------
# continuation


@dataclass
class NewtonStep:
    c: float
    iteration: int
    residual: float
    step_norm: float
    damping: float


@dataclass
class NewtonState:
    c: float
    a: np.ndarray
    residual: float
    jacobian: np.ndarray | None
    history: list = field(default_factory=list)
    unitary_deviations: dict = field(default_factory=dict)
    degree: int | None = None
    jacobian_kind: str = "none"
    stage_degrees: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.residual <= 1e-10


def _to_complex(x):
    return x[0::2] + 1j * x[1::2]


def newton_solve(
    c_target: float,
    schedule_factor: float = 2.0,
    stages: int = 4,
    a_start=A0,
    fd_step: float = 1e-7,
    target: float = 1e-10,
    max_iter: int = 20,
    tol: Tolerances = PHI_TOL,
    final_jacobian: bool = False,
) -> NewtonState:
    """Continuation in c along c_target / factor^k, k = stages..0, with
    minimal-norm Gauss-Newton steps on the 8 nontrivial components of phi.

    The Jacobian starts from its c -> 0 limit (exact residue polynomials) and
    is kept current by Broyden updates; a finite-difference Jacobian replaces
    it when a step fails to reduce the residual.
    """
    a = _as_params(a_start).copy()
    if c_target == 0:
        k = degree_of(a)
        return NewtonState(0.0, a, float(np.linalg.norm(first_order_law(a)[1:])), None, [], {}, k, "none", {0.0: k})
    if schedule_factor <= 1:
        raise ValueError("schedule factor must exceed 1")
    cs = [c_target / schedule_factor**k for k in range(stages, -1, -1)]
    history = []
    J = limit_jacobian(a)
    kind = "limit+broyden"
    res = math.inf
    solved = [(0.0, a.copy())]  # phi(0, a_start) is the limit; used for the secant predictor
    stage_degrees = {0.0: degree_of(a)}
    for c in cs:
        if len(solved) >= 2:
            (c0, x0), (c1, x1) = solved[-2:]
            a = x1 + (x1 - x0) * (c - c1) / (c1 - c0)
        val = phi(c, a, tol)
        res = val.norm
        refreshed = False
        for it in range(max_iter):
            if res <= target:
                break
            dx, *_ = np.linalg.lstsq(J, -val.residual, rcond=None)
            trial = a + _to_complex(dx)
            tv = phi(c, trial, tol)
            if tv.norm >= res:
                if refreshed:
                    raise ContinuationError(f"no decrease at c={c:g}, residual {res:.3e}")
                J = phi_jacobian(c, a, fd_step, tol)[1:, 1:]
                kind = "finite-difference+broyden"
                refreshed = True
                continue
            df = tv.residual - val.residual
            J = J + np.outer(df - J @ dx, dx) / (dx @ dx)
            history.append(NewtonStep(c, it, tv.norm, float(np.linalg.norm(dx)), 1.0))
            a, val, res = trial, tv, tv.norm
        if res > target:
            raise ContinuationError(f"residual {res:.3e} above {target:g} at c={c:g}")
        solved.append((c, a.copy()))
        stage_degrees[c] = degree_of(a)
        if not is_complete_regular(a):
            raise ContinuationError(f"metric degenerates along the path at c={c:g}")
    full = None
    if final_jacobian:
        full = phi_jacobian(c_target, a, fd_step, tol)
        kind = "finite-difference"
    else:
        full = np.zeros((9, 15))
        full[0, 0] = 1.0
        full[1:, 1:] = J
    rhos = monodromies(c_target, a, ("gamma1", "gamma2", "gamma3"), tol)
    devs = {k: unitary_deviation(v) for k, v in rhos.items()}
    return NewtonState(c_target, a, res, full, history, devs, degree_of(a), kind, stage_degrees)


def degree_of(a) -> int:
    """k = sum of end pole orders - 2 for the dual form -c A (c != 0)."""
    form = family_form(a)
    return sum(form.pole_order(e) for e in form.ends) - 2


def relation_residual(c: float, a, tol: Tolerances = PHI_TOL) -> dict:
    """Distance of the gamma3 monodromy from the inverses of both products."""
    r = monodromies(c, a, ("gamma1", "gamma2", "gamma3"), tol)
    r1, r2, r3 = r["gamma1"], r["gamma2"], r["gamma3"]
    return {
        "inv(rho1 rho2)": float(np.max(np.abs(r3 - np.linalg.inv(r1 @ r2)))),
        "inv(rho2 rho1)": float(np.max(np.abs(r3 - np.linalg.inv(r2 @ r1)))),
    }
