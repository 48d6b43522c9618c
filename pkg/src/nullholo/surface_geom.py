"""Surface-level analysis of forms: metric tr(A A^*)|dz|^2, Gauss curvature,
end orders, the numerically transported dual form, total curvature, the
Chern-Osserman comparison and the isoperimetric end functional."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .catenoid import CatenoidCousin, CatenoidCousinParams, ExponentForm
from .mero_forms import MeromorphicMatrixForm, is_null_form
from .path_ode import (
    Arc,
    Line,
    PathSpec,
    Tolerances,
    default_clearance,
    integrate_linear,
    transport,
)
from .quadrature import integrate_sphere
from .rational import INF, is_infinity

EQUALITY_TOL = 1e-6


class BranchPointError(ValueError):
    pass


class IncompleteEndError(ValueError):
    pass


class DegreeMismatchError(RuntimeError):
    pass


class NonMeromorphicGrowth(ValueError):
    """The metric grows faster than any power of the local coordinate."""


# ---------------------------------------------------------------------------
# pointwise quantities


def _values(form, z):
    A = form.evaluate_unchecked(z) if hasattr(form, "evaluate_unchecked") else form.evaluate(z)
    if isinstance(form, MeromorphicMatrixForm):
        dA = form.derivative_matrix().evaluate_unchecked(z)
    else:
        dA = form.derivative(z)
    return A, dA


def _hs(A, dA):
    """h = |A|^2 and S = h |A'|^2 - |<A', A>|^2 with matrix entries as components."""
    h = np.sum(np.abs(A) ** 2, axis=(-2, -1))
    g = np.sum(np.abs(dA) ** 2, axis=(-2, -1))
    c = np.sum(dA * A.conj(), axis=(-2, -1))
    return h, h * g - np.abs(c) ** 2


def conformal_factor(form, z):
    """h(z) = tr(A A^*), so that the metric is h |dz|^2."""
    A = form.evaluate(z)
    h = np.sum(np.abs(A) ** 2, axis=(-2, -1))
    if np.any(h <= 0):
        raise BranchPointError("metric degenerates (branch point)")
    return float(h) if np.ndim(h) == 0 else h


def gauss_curvature(form, z):
    """K = -2 S / h^3, the curvature of tr(A A^*)|dz|^2 (always <= 0)."""
    A, dA = _values(form, np.asarray(z, dtype=complex))
    h, S = _hs(A, dA)
    if np.any(h <= 0):
        raise BranchPointError("metric degenerates (branch point)")
    K = -2.0 * np.maximum(S, 0.0) / h ** 3
    return float(K) if np.ndim(K) == 0 else K


def curvature_fd(form, z, step: float = 1e-3) -> float:
    """-(2/h) d d-bar log h with a fourth-order Laplacian stencil (d d-bar = Laplacian / 4)."""
    z = complex(z)
    offs = np.array([1, 2, -1, -2])
    pts = np.concatenate([[z], z + offs * step, z + 1j * offs * step])
    logh = np.log(np.sum(np.abs(form.evaluate(pts)) ** 2, axis=(-2, -1)))
    w = np.array([16, -1, 16, -1]) / 12.0
    lap = (w @ logh[1:5] + w @ logh[5:9] - 2 * 2.5 * logh[0]) / step ** 2
    return float(-lap / (2 * math.exp(logh[0])))


def curvature_density(form):
    """(-K) h as flat densities in the z chart and in w = 1/z.

    The density equals 2(|v'|^2 - |<v', v>|^2) with v = A/|A|; it does not
    change if A is multiplied by a nonvanishing holomorphic function, so the
    w-chart uses A(1/w) and its w-derivative -A'(1/w)/w^2.
    """

    def density(A, dA):
        nrm = np.sqrt(np.sum(np.abs(A) ** 2, axis=(-2, -1)))
        if np.any(nrm == 0):
            raise BranchPointError("metric degenerates (branch point)")
        a = A / nrm[..., None, None]
        da = dA / nrm[..., None, None]
        g = np.sum(np.abs(da) ** 2, axis=(-2, -1))
        c = np.sum(da * a.conj(), axis=(-2, -1))
        return 2.0 * np.maximum(g - np.abs(c) ** 2, 0.0)

    def dz(z):
        A, dA = _values(form, z)
        return density(A, dA)

    def dw(w):
        w = np.asarray(w, dtype=complex)
        zz = 1.0 / w
        A, dA = _values(form, zz)
        return density(A, -dA / (w ** 2)[..., None, None])

    return dz, dw


# ---------------------------------------------------------------------------
# orders at ends


def form_ends(form) -> list:
    if hasattr(form, "ends"):
        return list(form.ends)
    raise TypeError("form does not declare its ends")


def pole_orders(form) -> dict:
    return {e: form.pole_order(e) for e in form_ends(form)}


def metric_order(form, pole):
    """Exponent mu with h ~ |local coordinate|^(2 mu) at the end.

    Rational forms: minus the pole order.  Monomial forms: from the exponents.
    Anything else is estimated from samples (see ``numeric_metric_order``).
    """
    if isinstance(form, MeromorphicMatrixForm):
        if is_infinity(pole) or form.is_declared(pole):
            return -form.pole_order(pole)
        # regular point: h vanishes to the lowest entry order (>= 0, an incomplete end)
        orders = [e.order_at(complex(pole)) for row in form.entries for e in row if np.any(e.num)]
        if not orders:
            raise ValueError("metric vanishes identically")
        return min(orders)
    if isinstance(form, ExponentForm):
        return form.metric_order(pole)
    if hasattr(form, "numeric_metric_order"):
        return form.numeric_metric_order(pole)
    if callable(form):
        return numeric_metric_order(form, pole)
    raise TypeError("unsupported form type")


def default_order_radii() -> np.ndarray:
    return 0.2 * 2.0 ** -np.arange(0, 6)


def order_from_circle_means(radii, means, slope_tol: float = 0.05) -> float:
    """Slope of log(mean h) against 2 log r over the last radii."""
    logs = np.log(np.asarray(means, dtype=float))
    logr = np.log(np.asarray(radii, dtype=float))
    slopes = np.diff(logs) / np.diff(logr) / 2
    if abs(slopes[-1] - slopes[-2]) > slope_tol * max(1.0, abs(slopes[-1])):
        raise NonMeromorphicGrowth(f"slopes do not settle: {np.round(slopes, 3).tolist()}")
    return float(slopes[-1])


def numeric_metric_order(h: Callable[[np.ndarray], np.ndarray], pole, radii=None, n_theta: int = 64, slope_tol: float = 0.05):
    """Order estimated as the slope of log(mean h) against 2 log r on shrinking
    circles (circles |w| = r in w = 1/z at infinity, with the chart Jacobian).

    Raises NonMeromorphicGrowth when the slopes keep drifting, as for metrics
    with exponential growth at an irregular singular point.
    """
    radii = default_order_radii() if radii is None else np.asarray(radii, dtype=float)
    e = np.exp(2j * np.pi * np.arange(n_theta) / n_theta)
    means = []
    for r in radii:
        if is_infinity(pole):
            w = r * e
            vals = h(1.0 / w) / np.abs(w) ** 4
        else:
            vals = h(complex(pole) + r * e)
        means.append(float(np.mean(vals)))
    return order_from_circle_means(radii, means, slope_tol)


# ---------------------------------------------------------------------------
# surfaces


@dataclass
class SurfaceSpec:
    """A surface on the punctured sphere with its left (primal) form and/or
    right (dual) form.  ``lift`` is a closed-form F(z) when one is known."""

    label: str
    primal: object = None
    dual: object = None
    base_point: complex = 0.5
    lift_at_base: np.ndarray | None = None
    lift: Callable | None = None
    compactified_genus: int = 0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.compactified_genus != 0:
            raise ValueError("only genus-0 compactifications are supported")
        if self.primal is None and self.dual is None:
            raise ValueError("a surface needs at least one form")
        for f in (self.primal, self.dual):
            if f is None:
                continue
            if isinstance(f, MeromorphicMatrixForm) and not is_null_form(f).is_null:
                raise ValueError(f"{self.label}: form is not null")
            if isinstance(f, ExponentForm) and not f.is_null():
                raise ValueError(f"{self.label}: form is not null")
        self.base_point = complex(self.base_point)
        for p in self.ends:
            if not is_infinity(p) and abs(p - self.base_point) < 1e-12:
                raise ValueError("base point coincides with an end")
        if self.lift_at_base is None:
            self.lift_at_base = self.lift(self.base_point) if self.lift else np.eye(self.n, dtype=complex)

    @property
    def reference(self):
        return self.dual if self.dual is not None else self.primal

    @property
    def n(self) -> int:
        return self.reference.n

    @property
    def ends(self) -> list:
        return form_ends(self.reference)

    @property
    def finite_ends(self) -> list:
        return [p for p in self.ends if not is_infinity(p)]

    @property
    def r(self) -> int:
        return len(self.ends)

    @property
    def euler_char(self) -> int:
        return 2 - self.r

    def form(self, which: str):
        f = self.primal if which == "primal" else self.dual if which == "dual" else None
        if which not in ("primal", "dual"):
            raise ValueError("which must be 'primal' or 'dual'")
        if f is None:
            raise ValueError(f"{self.label}: no {which} form available")
        return f


def catenoid_cousin_surface(params: CatenoidCousinParams, dual_convention: str = "derived") -> SurfaceSpec:
    """Exponent-family surface with lift F_{mu,a,b}.

    ``dual_convention='printed'`` swaps in the variant dual with off-diagonal
    coefficient a + b (not dF F^-1; kept for comparison only).
    """
    cc = CatenoidCousin(params)
    if dual_convention == "derived":
        dual = cc.dual_form()
    elif dual_convention == "printed":
        dual = cc.printed_dual_form()
    else:
        raise ValueError("dual_convention must be 'derived' or 'printed'")
    if dual.is_zero():
        raise ValueError("degenerate parameters: the lift is constant and the dual form vanishes")
    spec = SurfaceSpec.__new__(SurfaceSpec)
    spec.label = f"catenoid-cousin(mu={params.mu}, a={params.a}, b={params.b})"
    spec.primal = cc.left_form()
    spec.dual = dual
    spec.base_point = 1.0 + 0j
    spec.lift = cc.lift
    spec.lift_at_base = cc.lift(1.0)
    spec.compactified_genus = 0
    spec.metadata = {"params": params, "generator": cc, "dual_convention": dual_convention, "single_valued": params.single_valued}
    if dual_convention == "derived":
        SurfaceSpec.__post_init__(spec)
    return spec


# ---------------------------------------------------------------------------
# numerical dual


def plan_path(a: complex, b: complex, punctures: Sequence[complex], clearance: float) -> PathSpec:
    """Straight segment, or a two-segment detour when it passes too close."""
    a, b = complex(a), complex(b)
    direct = PathSpec((Line(a, b),), clearance)
    try:
        direct.check_clearance(punctures)
        return direct
    except ValueError:
        pass
    d = b - a
    perp = 1j * d / abs(d) if d != 0 else 1.0
    mid = (a + b) / 2
    for k in range(1, 40):
        for s in (1, -1):
            w = mid + s * 0.25 * k * perp * max(abs(d), clearance)
            cand = PathSpec((Line(a, w), Line(w, b)), clearance)
            try:
                cand.check_clearance(punctures)
                return cand
            except ValueError:
                continue
    raise ValueError(f"no path found from {a} to {b}")


@dataclass
class LaurentFit:
    end: object
    order: int
    residue: np.ndarray
    coefficients: dict
    condition: float
    radius: float


@dataclass
class DualSamples:
    points: np.ndarray
    values: np.ndarray
    fits: dict


def _fit_laurent(u: np.ndarray, vals: np.ndarray, kmin: int = -8, kmax: int = 12):
    ks = np.arange(kmin, kmax + 1)
    M = u[:, None] ** ks[None, :]
    cond = float(np.linalg.cond(M))
    n = vals.shape[-1]
    coef, *_ = np.linalg.lstsq(M, vals.reshape(len(u), -1), rcond=None)
    return ks, coef.reshape(len(ks), n, n), cond


def dual_form_numeric(
    form,
    probe_points: Sequence[complex] = (),
    base: complex = 0.5,
    F_base=None,
    fit_ends: bool = True,
    tol: Tolerances = Tolerances(1e-12, 1e-14),
    samples_per_circle: int = 32,
    cond_limit: float = 1e8,
) -> DualSamples:
    """Samples of F A F^-1 with F transported by the left equation from
    ``base`` (F(base) = F_base), plus Laurent fits on two circles per end.

    A right-designated form is already a dual form and is sampled directly.
    """
    base = complex(base)
    n = form.n
    F0 = np.eye(n, dtype=complex) if F_base is None else np.asarray(F_base, dtype=complex)
    punct = list(getattr(form, "punctures", ()))
    clearance = default_clearance(punct) * 0.9
    direct = getattr(form, "designation", "left") == "right"

    def dual_at_path_ends(paths):
        if direct:
            pts = [p.end for p in paths]
            return np.array([form.evaluate(z) for z in pts])
        vals = []
        F = F0
        for path in paths:
            res = integrate_linear(form.evaluate_unchecked, path, "left", F, tol, renormalize=True)
            F = res.end_matrix
            A = form.evaluate(path.end)
            vals.append(F @ A @ np.linalg.inv(F))
        return np.array(vals)

    probe_points = [complex(p) for p in probe_points]
    values = []
    for z in probe_points:
        path = plan_path(base, z, punct, clearance)
        values.extend(dual_at_path_ends([path]))
    values = np.array(values).reshape(len(probe_points), n, n)

    fits = {}
    if fit_ends:
        ends = form_ends(form)
        finite = [complex(p) for p in ends if not is_infinity(p)]
        for end in ends:
            if is_infinity(end):
                rho = 0.25 / max([1.0] + [abs(p) for p in finite])
                radii_z = [1.0 / rho, 2.0 / rho]
                center = 0j
            else:
                others = [abs(end - q) for q in finite if q != end]
                rho = 0.25 * min(others) if others else 0.25
                rho = min(rho, 0.5)
                radii_z = [rho, rho / 2]
                center = end
            direction = (base - center) / abs(base - center) if base != center else 1.0
            start = center + radii_z[0] * direction
            paths = [plan_path(base, start, punct, clearance)]
            m = samples_per_circle
            th0 = cmath.phase(direction)
            pts = []
            for ring, rz in enumerate(radii_z):
                if ring == 1:
                    paths.append(PathSpec((Line(center + radii_z[0] * direction, center + rz * direction),), min(rz, radii_z[0]) * 0.9 if not is_infinity(end) else None))
                for k in range(m):
                    arc = Arc(center, rz, th0 + 2 * math.pi * k / m, th0 + 2 * math.pi * (k + 1) / m)
                    paths.append(PathSpec((arc,), rz * 0.9 if not is_infinity(end) else None))
                    pts.append(arc.end)
            vals = dual_at_path_ends(paths)
            # drop the approach paths, keep the arc ends
            keep = [i for i in range(len(paths)) if isinstance(paths[i].segments[0], Arc)]
            vals = vals[keep]
            pts = np.array(pts)
            if is_infinity(end):
                w = 1.0 / pts
                chart = -vals * (pts ** 2)[:, None, None]
                u = w * rho
                ks, coef, cond = _fit_laurent(u / abs(u[0]) * 1.0, chart)
                scale_r = abs(w[0])
            else:
                t = pts - center
                scale_r = abs(t[0])
                ks, coef, cond = _fit_laurent(t / scale_r, vals)
            if cond > cond_limit:
                raise ValueError(f"ill-conditioned Laurent fit at {end} (cond {cond:.2e})")
            mags = np.array([np.max(np.abs(c)) for c in coef])
            sig = mags > 1e-6 * mags.max() if mags.max() > 0 else np.zeros_like(mags, dtype=bool)
            kmin = int(ks[sig][0]) if np.any(sig) else 0
            true = {int(k): c / scale_r ** k for k, c in zip(ks, coef)}
            fits[end] = LaurentFit(end, max(0, -kmin), true.get(-1), true, cond, scale_r)
    return DualSamples(np.array(probe_points), values, fits)


# ---------------------------------------------------------------------------
# total curvature and the Chern-Osserman comparison


@dataclass
class TotalCurvature:
    k: int
    exact: float
    quadrature: float | None
    quadrature_error: float | None
    end_orders: dict

    @property
    def degree_from_quadrature(self) -> int | None:
        return None if self.quadrature is None else int(round(self.quadrature / (2 * math.pi)))


def degree(form) -> int:
    """k = sum of end pole orders - 2 on the sphere."""
    orders = pole_orders(form)
    total = sum(orders.values())
    if int(total) != total:
        raise ValueError("non-integral pole orders: the form is not single-valued")
    return int(total) - 2


def total_curvature(surface: SurfaceSpec, which: str = "dual", quadrature: bool = True, rtol: float = 1e-6) -> TotalCurvature:
    form = surface.form(which)
    orders = pole_orders(form)
    k = degree(form)
    quad = err = None
    if quadrature:
        dz, dw = curvature_density(form)
        res = integrate_sphere(dz, dw, [p for p in form_ends(form) if not is_infinity(p)], rtol)
        quad, err = res.value, res.error
        if int(round(quad / (2 * math.pi))) != k:
            raise DegreeMismatchError(f"quadrature gives {quad / (2 * math.pi):.6f} x 2pi but the end orders give k={k}")
    return TotalCurvature(k, 2 * math.pi * k, quad, err, orders)


@dataclass
class ChernOssermanVerdict:
    which: str
    lhs: float
    rhs: float
    slack: float
    equality: bool
    holds: bool
    k: int
    ends: int
    euler_char_M: int
    end_orders: dict
    quadrature: float | None = None

    def as_lines(self) -> dict:
        return {
            "which": self.which,
            "lhs": f"{self.lhs:.12g}",
            "rhs": f"{self.rhs:.12g}",
            "slack": f"{self.slack:.3e}",
            "equality": str(self.equality).lower(),
            "holds": str(self.holds).lower(),
            "k": str(self.k),
            "ends": str(self.ends),
            "euler_char_M": str(self.euler_char_M),
        }


def end_completeness(surface: SurfaceSpec) -> dict:
    """Metric order of each available form at each end (None if unavailable)."""
    out = {}
    for e in surface.ends:
        row = {}
        for which in ("primal", "dual"):
            f = surface.primal if which == "primal" else surface.dual
            if f is None:
                row[which] = None
                continue
            try:
                row[which] = metric_order(f, e)
            except NonMeromorphicGrowth:
                row[which] = -math.inf  # faster than any power: complete
        out[e] = row
    return out


def numeric_dual_orders(surface: SurfaceSpec) -> dict:
    """Dual pole orders from Laurent fits of the transported F A F^-1."""
    if surface.primal is None or not isinstance(surface.primal, MeromorphicMatrixForm):
        raise ValueError("numeric dual orders need a rational primal form")
    fits = dual_form_numeric(surface.primal, (), surface.base_point, surface.lift_at_base).fits
    return {e: fits[e].order for e in surface.primal.ends}


def chern_osserman_check(surface: SurfaceSpec, which: str = "dual", quadrature: bool = False) -> ChernOssermanVerdict:
    if which == "dual" and surface.dual is None:
        orders = numeric_dual_orders(surface)
        for e, m in orders.items():
            if -m > -1:
                raise IncompleteEndError(f"dual metric has order {-m} > -1 at end {e}")
        k = sum(orders.values()) - 2
        rhs = -surface.euler_char + surface.r
        slack = k - rhs
        return ChernOssermanVerdict(which, float(k), rhs, slack, abs(slack) <= EQUALITY_TOL, slack >= -EQUALITY_TOL, k, surface.r, surface.euler_char, orders)
    form = surface.form(which)
    for e in form_ends(form):
        try:
            mo = metric_order(form, e)
        except NonMeromorphicGrowth:
            raise ValueError(f"{which} metric grows faster than any power at {e}; the degree formula does not apply") from None
        if mo > -1:
            raise IncompleteEndError(f"{which} metric has order {mo} > -1 at end {e}")
    tc = total_curvature(surface, which, quadrature)
    lhs = tc.exact / (2 * math.pi)
    rhs = -surface.euler_char + surface.r
    slack = lhs - rhs
    return ChernOssermanVerdict(
        which, lhs, rhs, slack, abs(slack) <= EQUALITY_TOL, slack >= -EQUALITY_TOL,
        tc.k, surface.r, surface.euler_char, tc.end_orders, tc.quadrature,
    )


@dataclass
class CurvatureReport:
    samples: list
    end_orders: dict
    euler_char_M: int
    ends: int
    total_curvature_exact: float
    total_curvature_quadrature: float | None
    quadrature_error: float | None
    chern_osserman_lhs: float
    chern_osserman_rhs: float
    slack: float


def sample_grid(surface: SurfaceSpec, count: int = 12, radius: float | None = None) -> np.ndarray:
    """Points on a polar grid around the base point that stay clear of ends."""
    finite = surface.finite_ends
    R = radius or max(2.0, 1.5 * max([abs(p) for p in finite], default=1.0))
    xs = np.linspace(-R, R, count)
    pts = (xs[None, :] + 1j * xs[:, None]).ravel()
    clear = default_clearance(finite) / 2 if finite else 0.1
    keep = [z for z in pts if all(abs(z - p) > clear for p in finite)]
    return np.array(keep)


def curvature_report(surface: SurfaceSpec, which: str = "dual", grid: int = 12, quadrature: bool = True) -> CurvatureReport:
    form = surface.form(which)
    pts = sample_grid(surface, grid)
    h = conformal_factor(form, pts)
    K = gauss_curvature(form, pts)
    tc = total_curvature(surface, which, quadrature)
    lhs = tc.exact / (2 * math.pi)
    rhs = -surface.euler_char + surface.r
    samples = list(zip(pts.tolist(), np.atleast_1d(h).tolist(), np.atleast_1d(K).tolist()))
    return CurvatureReport(samples, tc.end_orders, surface.euler_char, surface.r, tc.exact, tc.quadrature, tc.quadrature_error, lhs, rhs, lhs - rhs)


# ---------------------------------------------------------------------------
# isoperimetric functional at an end


@dataclass
class FinnResult:
    radii: np.ndarray
    ratios: np.ndarray
    estimate: float
    converged: bool
    borderline: bool


def end_metric(form_or_h, end) -> Callable[[np.ndarray], np.ndarray]:
    """Metric density in the end coordinate zeta (|zeta| large near the end):
    zeta = z at infinity, zeta = 1/(z - p) at a finite end."""
    if callable(form_or_h) and not hasattr(form_or_h, "evaluate"):
        hz = form_or_h
    else:
        form = form_or_h
        hz = lambda z: np.sum(np.abs(form.evaluate(z)) ** 2, axis=(-2, -1))
    if is_infinity(end):
        return hz
    p = complex(end)
    return lambda zeta: hz(p + 1.0 / zeta) / np.abs(zeta) ** 4


def finn_isoperimetric(form_or_h, end, radius_schedule=None, R: float | None = None, n_theta: int = 256) -> FinnResult:
    """Ratios L(r)^2 / (4 pi A(r; R)) along a growing radius schedule, with an
    Aitken extrapolation of the last three values."""
    h = end_metric(form_or_h, end)
    if radius_schedule is None:
        R0 = R if R is not None else 4.0
        radius_schedule = R0 * 2.0 ** np.arange(2, 16)
    radii = np.asarray(radius_schedule, dtype=float)
    R = float(R if R is not None else radii[0] / 4)
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    e = np.exp(1j * theta)
    x, w = np.polynomial.legendre.leggauss(16)

    def ring_mass(r0, r1):
        # integral of h over r0 < |zeta| < r1 in log-radius panels
        s0, s1 = math.log(r0), math.log(r1)
        panels = max(1, int(math.ceil(s1 - s0)))
        total = 0.0
        for k in range(panels):
            a = s0 + (s1 - s0) * k / panels
            b = s0 + (s1 - s0) * (k + 1) / panels
            s = 0.5 * (b - a) * x + 0.5 * (a + b)
            rho = np.exp(s)
            vals = h((rho[:, None] * e[None, :]).ravel()).reshape(len(rho), n_theta)
            total += float(np.sum(0.5 * (b - a) * w * rho ** 2 * vals.mean(axis=1)) * 2 * np.pi)
        return total

    ratios = []
    area = 0.0
    prev = R
    for r in radii:
        area += ring_mass(prev, r)
        prev = r
        L = float(np.mean(np.sqrt(h(r * e))) * 2 * np.pi * r)
        ratios.append(L * L / (4 * math.pi * area))
    ratios = np.array(ratios)
    t0, t1, t2 = ratios[-3:]
    denom = (t2 - t1) - (t1 - t0)
    est = t2 - (t2 - t1) ** 2 / denom if abs(denom) > 1e-14 * max(1.0, abs(t2)) else t2
    converged = abs(est - t2) <= 1e-2 * max(1.0, abs(est)) or abs(t2 - t1) <= 1e-6
    borderline = abs(est) < 5e-2 or (t2 < t1 < t0 and t2 < 0.2)
    return FinnResult(radii, ratios, float(est), bool(converged), bool(borderline))
