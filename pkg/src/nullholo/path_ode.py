"""Analytic continuation of the holomorphic lift along paths in the punctured plane.

Left equation:  dF = F A(z) dz   (A = F^-1 dF)
Right equation: dF = A(z) F dz   (A = dF F^-1)

Monodromy convention.  With F(z0) = I the value after one traversal is the
monodromy matrix rho.  For the right equation, traversing gamma1 and then
gamma2 yields rho2 @ rho1 (first traversed, rightmost factor), which is the
rule F o tau = F rho.  For the left equation the same traversal yields
rho1 @ rho2.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_BSTAR = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B - _BSTAR

DET_DRIFT_LIMIT = 1e-6


class TransportError(RuntimeError):
    pass


class ClearanceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class Line:
    start: complex
    end: complex

    def point(self, t):
        return self.start + t * (self.end - self.start)

    def velocity(self, t):
        return self.end - self.start

    @property
    def length(self) -> float:
        return abs(self.end - self.start)

    def distance_to(self, p: complex) -> float:
        d = self.end - self.start
        if d == 0:
            return abs(p - self.start)
        t = ((p - self.start) * d.conjugate()).real / abs(d) ** 2
        return abs(p - self.point(min(1.0, max(0.0, t))))

    def reversed(self):
        return Line(self.end, self.start)


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float

    def point(self, t):
        return self.center + self.radius * np.exp(1j * (self.theta0 + t * (self.theta1 - self.theta0)))

    def velocity(self, t):
        th = self.theta0 + t * (self.theta1 - self.theta0)
        return 1j * (self.theta1 - self.theta0) * self.radius * np.exp(1j * th)

    @property
    def start(self) -> complex:
        return complex(self.point(0.0))

    @property
    def end(self) -> complex:
        return complex(self.point(1.0))

    @property
    def length(self) -> float:
        return self.radius * abs(self.theta1 - self.theta0)

    def distance_to(self, p: complex) -> float:
        v = p - self.center
        lo, hi = sorted((self.theta0, self.theta1))
        if abs(v) > 0:
            phi = cmath.phase(v)
            # move phi into [lo, lo + 2pi)
            phi = lo + (phi - lo) % (2 * math.pi)
            if phi <= hi:
                return abs(abs(v) - self.radius)
        return min(abs(p - self.start), abs(p - self.end))

    def reversed(self):
        return Arc(self.center, self.radius, self.theta1, self.theta0)


def default_clearance(punctures: Sequence[complex]) -> float:
    pts = [complex(p) for p in punctures]
    best = math.inf
    for i, p in enumerate(pts):
        for q in pts[i + 1 :]:
            best = min(best, abs(p - q))
    return min(0.25, best / 2) if best < math.inf else 0.25


@dataclass(frozen=True)
class PathSpec:
    segments: tuple
    min_clearance: float | None = None

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("a path needs at least one segment")
        for a, b in zip(segs, segs[1:]):
            if abs(a.end - b.start) > 1e-12 * max(1.0, abs(a.end)):
                raise ValueError(f"segments do not join: {a.end} vs {b.start}")
        if self.min_clearance is not None and self.min_clearance <= 0:
            raise ValueError("clearance must be positive")
        object.__setattr__(self, "segments", segs)

    @property
    def start(self) -> complex:
        return complex(self.segments[0].start)

    @property
    def end(self) -> complex:
        return complex(self.segments[-1].end)

    @property
    def length(self) -> float:
        return sum(s.length for s in self.segments)

    def is_closed(self) -> bool:
        return abs(self.start - self.end) <= 1e-12 * max(1.0, abs(self.start))

    def reversed(self) -> "PathSpec":
        return PathSpec(tuple(s.reversed() for s in reversed(self.segments)), self.min_clearance)

    def then(self, other: "PathSpec") -> "PathSpec":
        clear = [c for c in (self.min_clearance, other.min_clearance) if c is not None]
        return PathSpec(self.segments + other.segments, min(clear) if clear else None)

    def distance_to(self, p: complex) -> float:
        return min(s.distance_to(complex(p)) for s in self.segments)

    def check_clearance(self, punctures: Sequence[complex]) -> float:
        """Raise unless every point keeps the required distance from the punctures."""
        need = self.min_clearance if self.min_clearance is not None else default_clearance(punctures)
        worst = math.inf
        for p in punctures:
            d = self.distance_to(p)
            worst = min(worst, d)
            if d < need * (1 - 1e-12):
                raise ClearanceError(f"path passes within {d:.3g} of puncture {complex(p):.6g} (need {need:.3g})")
        return worst

    def sample(self, per_segment: int = 16) -> np.ndarray:
        t = np.linspace(0.0, 1.0, per_segment, endpoint=False)
        pts = [np.asarray(s.point(t)) for s in self.segments]
        return np.concatenate(pts + [np.array([self.end])])


def line_path(z0, z1, min_clearance=None) -> PathSpec:
    return PathSpec((Line(complex(z0), complex(z1)),), min_clearance)


def polyline(points, min_clearance=None) -> PathSpec:
    pts = [complex(p) for p in points]
    return PathSpec(tuple(Line(a, b) for a, b in zip(pts, pts[1:])), min_clearance)


def circle_path(center, radius, start_angle=0.0, clockwise=False, turns=1, min_clearance=None) -> PathSpec:
    """Full circle(s) as quarter arcs, starting and ending at the same point."""
    sgn = -1.0 if clockwise else 1.0
    arcs = []
    for k in range(4 * turns):
        a0 = start_angle + sgn * k * math.pi / 2
        arcs.append(Arc(complex(center), float(radius), a0, a0 + sgn * math.pi / 2))
    return PathSpec(tuple(arcs), min_clearance)


def loop_around(base, center, radius, waypoints=(), clockwise=False, min_clearance=None) -> PathSpec:
    """base -> waypoints -> circle about center -> back the same way."""
    base, center = complex(base), complex(center)
    route = [base] + [complex(w) for w in waypoints]
    last = route[-1]
    direction = last - center
    if direction == 0:
        raise ValueError("approach point coincides with the circle center")
    entry = center + radius * direction / abs(direction)
    route.append(entry)
    route = [p for i, p in enumerate(route) if i == 0 or p != route[i - 1]]
    circle = circle_path(center, radius, cmath.phase(direction), clockwise)
    if len(route) > 1:
        spur = polyline(route)
        path = spur.then(circle).then(spur.reversed())
    else:
        path = circle
    return PathSpec(path.segments, min_clearance)


# ---------------------------------------------------------------------------
# integration


@dataclass(frozen=True)
class Tolerances:
    ode_rel: float = 1e-10
    ode_abs: float = 1e-12
    max_steps: int = 200_000

    def __post_init__(self):
        if self.ode_rel <= 0 or self.ode_abs <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


@dataclass
class TransportResult:
    end_matrix: np.ndarray
    steps_taken: int
    det_drift: float
    est_error: float
    rejected: int = 0
    path_length: float = 0.0
    samples: list = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return not (self.det_drift <= DET_DRIFT_LIMIT)


def integrate_linear(
    coefficient: Callable[[complex], np.ndarray],
    path: PathSpec,
    side: str,
    Y0,
    tol: Tolerances = Tolerances(),
    renormalize: bool = True,
    record_segments: bool = False,
) -> TransportResult:
    """Integrate dY = Y A dz (left) or dY = A Y dz (right) along ``path``.

    ``coefficient(z)`` returns the n x n matrix A(z).  Y0 may be a square
    matrix or (right side only) a vector / block of columns.  With
    ``renormalize`` the determinant of a square Y is held at det(Y0).
    ``record_segments`` stores Y at the end of every segment in ``samples``.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    Y = np.array(Y0, dtype=complex)
    square = Y.ndim == 2 and Y.shape[0] == Y.shape[1]
    if side == "left" and not square:
        raise ValueError("left transport needs a square initial value")
    renormalize = renormalize and square
    if renormalize:
        det0 = np.linalg.det(Y)
        if abs(det0) == 0:
            raise ValueError("initial value is singular")
        n = Y.shape[0]

    if side == "left":
        def f(seg, t, y):
            return y @ (coefficient(seg.point(t)) * seg.velocity(t))
    else:
        def f(seg, t, y):
            return (coefficient(seg.point(t)) * seg.velocity(t)) @ y

    steps = rejected = 0
    drift = est = 0.0
    h_guess = None
    samples = []
    for seg in path.segments:
        t = 0.0
        k1 = f(seg, 0.0, Y)
        if h_guess is None:
            scale = tol.ode_abs + tol.ode_rel * np.abs(Y)
            d0 = np.sqrt(np.mean(np.abs(Y / scale) ** 2))
            d1 = np.sqrt(np.mean(np.abs(k1 / scale) ** 2))
            h = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-3
            h = min(1.0, max(h, 1e-8))
        else:
            h = min(1.0, h_guess / max(seg.length, 1e-300))
        err_prev = 1e-4
        while t < 1.0:
            if steps + rejected >= tol.max_steps:
                raise TransportError(f"step budget of {tol.max_steps} exhausted")
            h = min(h, 1.0 - t)
            ks = [k1]
            for s in range(1, 7):
                acc = Y + h * sum(_A[s][j] * ks[j] for j in range(s) if _A[s][j] != 0.0)
                ks.append(f(seg, t + _C[s] * h, acc))
            Ynew = Y + h * sum(_B[j] * ks[j] for j in range(6) if _B[j] != 0.0)
            errv = h * sum(_E[j] * ks[j] for j in range(7) if _E[j] != 0.0)
            if not np.all(np.isfinite(Ynew)):
                raise TransportError("non-finite values during transport")
            sc = tol.ode_abs + tol.ode_rel * np.maximum(np.abs(Y), np.abs(Ynew))
            err = float(np.sqrt(np.mean(np.abs(errv / sc) ** 2)))
            if err <= 1.0:
                t += h
                steps += 1
                est += float(np.max(np.abs(errv)))
                if renormalize:
                    d = np.linalg.det(Ynew) / det0
                    drift += abs(d - 1.0)
                    root = d ** (1.0 / n)
                    Ynew = Ynew / root
                    k1 = ks[6] / root  # the right-hand side is linear in Y
                else:
                    k1 = ks[6]
                Y = Ynew
                fac = 0.9 * max(err, 1e-10) ** (-0.7 / 5) * max(err_prev, 1e-10) ** (0.4 / 5)
                err_prev = max(err, 1e-4)
                h *= min(5.0, max(0.2, fac))
            else:
                rejected += 1
                h *= max(0.1, 0.9 * err ** (-1 / 5))
            if h < 1e-14:
                raise TransportError("step size underflow")
        h_guess = h * seg.length
        if record_segments:
            samples.append(Y.copy())
    return TransportResult(Y, steps, drift, est, rejected, path.length, samples)


def _side_check(form, side):
    designation = getattr(form, "designation", None)
    return designation is None or designation == side


def transport(form, path: PathSpec, side: str = "left", F_init=None, tol: Tolerances = Tolerances(), check_clearance: bool = True) -> TransportResult:
    """Solve the lift equation for ``form`` along ``path``.

    ``form`` is anything with ``evaluate(z)`` and optional ``punctures``.
    The designation mismatch between form and side is allowed (both are
    meaningful integrations) and only recorded by the caller.
    """
    punct = list(getattr(form, "punctures", ()))
    if check_clearance and punct:
        path.check_clearance(punct)
    n = form.n
    F0 = np.eye(n, dtype=complex) if F_init is None else np.array(F_init, dtype=complex)
    coefficient = getattr(form, "evaluate_unchecked", form.evaluate)
    res = integrate_linear(coefficient, path, side, F0, tol, renormalize=True)
    if res.failed:
        raise TransportError(f"determinant drift {res.det_drift:.3e} exceeds {DET_DRIFT_LIMIT}")
    return res


def monodromy(form, loop: PathSpec, side: str = "right", tol: Tolerances = Tolerances()) -> np.ndarray:
    """Transport of the identity once around a closed loop (see module notes
    for the composition order)."""
    if not loop.is_closed():
        raise ValueError("loop is not closed")
    return transport(form, loop, side, None, tol).end_matrix


def unitary_deviation(rho) -> float:
    rho = np.asarray(rho, dtype=complex)
    return float(np.linalg.norm(rho @ rho.conj().T - np.eye(rho.shape[0])))
