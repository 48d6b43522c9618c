"""Named example surfaces."""
from __future__ import annotations

import math

import numpy as np

from .catenoid import CatenoidCousinParams
from .lie_core import PLANE_FRAME
from .mero_forms import (
    MeromorphicMatrixForm,
    WeierstrassData,
    nilpotent_example_dual_form,
    nilpotent_example_form,
    nilpotent_lift,
    weierstrass_to_form,
)
from .path_ode import PathSpec, Line, Arc, Tolerances, integrate_linear
from .perturb import A0, BASE_POINT, family_form
from .rational import is_infinity
from .surface_geom import (
    SurfaceSpec,
    catenoid_cousin_surface,
    default_order_radii,
    order_from_circle_means,
    plan_path,
)

PRESETS = ("plane", "nilpotent", "catenoid-cousin", "s5-family")


class TransportedLeftForm:
    """Left form F^-1 A# F of the surface whose right form A# is rational;
    F is continued from the base point by dF = A# F along planned paths."""

    designation = "left"

    def __init__(self, dual: MeromorphicMatrixForm, base: complex, F_base=None, tol: Tolerances = Tolerances(1e-12, 1e-14)):
        self.dual = dual
        self.n = dual.n
        self.punctures = dual.punctures
        self.infinity = dual.infinity
        self.base = complex(base)
        self.F_base = np.eye(self.n, dtype=complex) if F_base is None else np.asarray(F_base, dtype=complex)
        self.tol = tol

    @property
    def ends(self):
        return self.dual.ends

    def _clearance(self, z):
        d = min([abs(z - p) for p in self.punctures] + [abs(self.base - p) for p in self.punctures] + [1.0])
        return 0.45 * d

    def lift(self, z) -> np.ndarray:
        z = complex(z)
        path = plan_path(self.base, z, self.punctures, self._clearance(z))
        return integrate_linear(self.dual.evaluate_unchecked, path, "right", self.F_base, self.tol).end_matrix

    def _conj(self, F, z):
        return np.linalg.solve(F, self.dual.evaluate(z) @ F)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        if z.ndim == 0:
            return self._conj(self.lift(z), complex(z))
        return np.array([self._conj(self.lift(w), complex(w)) for w in z.ravel()]).reshape(z.shape + (self.n, self.n))

    __call__ = evaluate

    def circle_means(self, end, radii, n_theta: int = 32) -> list[float]:
        """Mean of h on circles about an end, continuing F around each circle."""
        if is_infinity(end):
            center, zr = 0j, [1.0 / r for r in radii]
        else:
            center, zr = complex(end), list(radii)
        d = self.base - center
        u = d / abs(d) if d != 0 else 1.0
        th0 = math.atan2(u.imag, u.real)
        F = self.lift(center + zr[0] * u)
        means = []
        prev = center + zr[0] * u
        for k, (r, rz) in enumerate(zip(radii, zr)):
            start = center + rz * u
            if k:
                F = integrate_linear(self.dual.evaluate_unchecked, PathSpec((Line(prev, start),)), "right", F, self.tol).end_matrix
            vals = []
            for j in range(n_theta):
                arc = Arc(center, rz, th0 + 2 * math.pi * j / n_theta, th0 + 2 * math.pi * (j + 1) / n_theta)
                F = integrate_linear(self.dual.evaluate_unchecked, PathSpec((arc,)), "right", F, self.tol).end_matrix
                A = self._conj(F, arc.end)
                h = float(np.sum(np.abs(A) ** 2))
                vals.append(h / r**4 if is_infinity(end) else h)
            means.append(float(np.mean(vals)))
            prev = start
        return means

    def numeric_metric_order(self, end, radii=None):
        radii = default_order_radii() if radii is None else np.asarray(radii, dtype=float)
        return order_from_circle_means(radii, self.circle_means(end, radii))


def plane_surface() -> SurfaceSpec:
    """g = (0, 0), omega = dz in the plane frame: a flat surface with one end."""
    primal = weierstrass_to_form(WeierstrassData(("0", "0"), "1", PLANE_FRAME))
    A = primal.evaluate(0.0)
    if np.any(np.abs(A - np.diag(np.diag(A))) > 0):
        raise AssertionError("plane data should be diagonal")
    d = np.diag(A)
    dual = primal.replace(designation="right")
    return SurfaceSpec("plane", primal, dual, 0.5, lift=lambda z: np.diag(np.exp(complex(z) * d)))


def nilpotent_surface(a="z", b="1/z", c="1") -> SurfaceSpec:
    primal = nilpotent_example_form(a, b, c)
    dual = nilpotent_example_dual_form(a, b, c)
    return SurfaceSpec(f"nilpotent(a={a}, b={b}, c={c})", primal, dual, 0.5, lift=nilpotent_lift(a, b, c))


def s5_surface(c: float = 0.0, a=A0) -> SurfaceSpec:
    """c = 0: the seed (its minimal-surface metric, same form on both sides).
    c != 0: dual form -c A and the primal form continued numerically."""
    a = np.asarray(a, dtype=complex)
    if c == 0:
        primal = family_form(a, designation="left")
        dual = family_form(a, designation="right")
        return SurfaceSpec("s5-seed", primal, dual, BASE_POINT, metadata={"c": 0.0, "a": a})
    dual = family_form(a, designation="right").scaled(-c)
    primal = TransportedLeftForm(dual, BASE_POINT)
    spec = SurfaceSpec(f"s5-family(c={c:g})", None, dual, BASE_POINT, metadata={"c": c, "a": a})
    spec.primal = primal
    return spec


def get_preset(name: str, **params) -> SurfaceSpec:
    if name == "plane":
        return plane_surface()
    if name == "nilpotent":
        return nilpotent_surface(**{k: v for k, v in params.items() if k in ("a", "b", "c")})
    if name == "catenoid-cousin":
        p = CatenoidCousinParams(params.get("mu", 0.0), params.get("a", 0.0), params.get("b", 1.0))
        return catenoid_cousin_surface(p, params.get("dual_convention", "derived"))
    if name == "s5-family":
        return s5_surface(params.get("c", 0.0), params.get("a", A0))
    raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
