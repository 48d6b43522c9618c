"""Integration of smooth densities over the Riemann sphere with marked ends.

The sphere is split with a smooth partition of unity: a bump around every
finite end (integrated on geometrically shrinking polar rings), a bump around
infinity (same, in the chart w = 1/z), and the remainder on a square
(adaptive rectangle subdivision).  All pieces have smooth integrands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

_GL_R = np.polynomial.legendre.leggauss(12)
_GL_SQ = np.polynomial.legendre.leggauss(8)


def smooth_step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        g = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return f / (f + g)


@dataclass
class QuadratureResult:
    value: float
    error: float
    pieces: dict = field(default_factory=dict)
    evaluations: int = 0


class QuadratureError(RuntimeError):
    pass


def polar_rings(
    density: Callable[[np.ndarray], np.ndarray],
    center: complex,
    r_out: float,
    weight: Callable[[np.ndarray], np.ndarray],
    ring_rtol: float = 1e-7,
    n_theta: int = 128,
    max_rings: int = 80,
) -> tuple[float, float, int]:
    """Integrate density * weight over the disk |z - center| < r_out.

    Rings [r/2, r] are added inward until one contributes less than
    ``ring_rtol`` of the running total (the remaining disk is dropped; its
    contribution is bounded by the last ring for integrands bounded at the
    center).
    """
    x, w = _GL_R
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    e = np.exp(1j * theta)
    total = 0.0
    last = math.inf
    evals = 0
    hi = r_out
    for _ in range(max_rings):
        lo = hi / 2
        r = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        wr = 0.5 * (hi - lo) * w
        pts = center + r[:, None] * e[None, :]
        vals = density(pts.ravel()).reshape(pts.shape) * weight(pts.ravel()).reshape(pts.shape)
        evals += pts.size
        ring = float(np.sum(wr[:, None] * r[:, None] * vals) * (2 * np.pi / n_theta))
        total += ring
        last = abs(ring)
        hi = lo
        if last <= ring_rtol * abs(total) or (total == 0.0 and last == 0.0 and hi < r_out * 1e-3):
            return total, last, evals
    raise QuadratureError("polar rings did not converge toward the end")


def adaptive_square(
    f: Callable[[np.ndarray], np.ndarray],
    half_width: float,
    abs_tol: float,
    max_depth: int = 12,
) -> tuple[float, float, int]:
    """Adaptive 8x8 Gauss-Legendre on the square |Re z|, |Im z| <= half_width."""
    x, w = _GL_SQ
    W = np.outer(w, w).ravel()
    X = np.add.outer(x, 1j * x).ravel()  # reference nodes on [-1,1]^2

    def rule(centers: np.ndarray, h: float) -> np.ndarray:
        pts = centers[:, None] + h * X[None, :]
        vals = f(pts.ravel()).reshape(pts.shape)
        return (vals * W[None, :]).sum(axis=1) * h * h

    area = (2 * half_width) ** 2
    centers = np.array([0j])
    h = half_width
    coarse = rule(centers, h)
    evals = 64
    total = err = 0.0
    offs = np.array([-1 - 1j, 1 - 1j, -1 + 1j, 1 + 1j]) * 0.5
    for depth in range(max_depth + 1):
        kids = (centers[:, None] + h * offs[None, :]).ravel()
        fine = rule(kids, h / 2).reshape(-1, 4)
        evals += kids.size * 64
        fsum = fine.sum(axis=1)
        diff = np.abs(fsum - coarse)
        cell_tol = abs_tol * (4 * h * h) / area
        done = (diff <= cell_tol) | (depth == max_depth)
        total += float(fsum[done].sum())
        err += float(diff[done].sum())
        if np.all(done):
            break
        centers = kids.reshape(-1, 4)[~done].ravel()
        coarse = fine[~done].ravel()
        h /= 2
    return total, err, evals


def integrate_sphere(
    density_z: Callable[[np.ndarray], np.ndarray],
    density_w: Callable[[np.ndarray], np.ndarray],
    finite_ends: Sequence[complex],
    rtol: float = 1e-6,
) -> QuadratureResult:
    """Integral over the sphere of a 2-form given in the z chart and the
    w = 1/z chart (densities with respect to the flat area element)."""
    ends = [complex(p) for p in finite_ends]
    radii = []
    for i, p in enumerate(ends):
        others = [abs(p - q) for j, q in enumerate(ends) if j != i]
        radii.append(min([1.0] + [0.4 * d for d in others]))
    reach = max([abs(p) + r for p, r in zip(ends, radii)], default=0.0)
    R_a = max(2.0, 1.5 * reach)
    R_b = 2 * R_a

    def bump_end(p, r):
        return lambda z: 1.0 - smooth_step((np.abs(z - p) - r / 2) / (r / 2))

    def bump_inf_z(z):
        return smooth_step((np.abs(z) - R_a) / (R_b - R_a))

    def bump_inf_w(w):
        with np.errstate(divide="ignore"):
            return smooth_step((1.0 / np.abs(w) - R_a) / (R_b - R_a))

    pieces = {}
    evals = 0
    total_err = 0.0
    for p, r in zip(ends, radii):
        v, e, k = polar_rings(density_z, p, r, bump_end(p, r))
        pieces[f"end {p:.6g}"] = v
        total_err += e
        evals += k
    v, e, k = polar_rings(density_w, 0j, 1.0 / R_a, bump_inf_w)
    pieces["end inf"] = v
    total_err += e
    evals += k

    bumps = [bump_end(p, r) for p, r in zip(ends, radii)]

    def bulk(z):
        wgt = 1.0 - bump_inf_z(z)
        for b in bumps:
            wgt = wgt - b(z)
        out = np.zeros(z.shape)
        live = wgt > 0
        if np.any(live):
            out[live] = density_z(z[live]) * wgt[live]
        return out

    # absolute tolerance from a rough first estimate
    rough, _, k = adaptive_square(bulk, R_b, math.inf, max_depth=2)
    evals += k
    scale = abs(rough) + sum(abs(v) for v in pieces.values())
    v, e, k = adaptive_square(bulk, R_b, max(rtol * scale, 1e-14))
    pieces["bulk"] = v
    total_err += e
    evals += k
    return QuadratureResult(sum(pieces.values()), total_err, pieces, evals)
