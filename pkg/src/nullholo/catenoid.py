"""Forms whose entries are sums of complex monomials c z^e with real exponents,
and the three-parameter catenoid-cousin family built from them."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .rational import INF, is_infinity


def _order(x: float):
    r = round(x)
    return int(r) if abs(x - r) <= 1e-12 else float(x)


class ExponentForm:
    """Matrix form on C minus {0} with monomial entries (principal branch)."""

    def __init__(self, n: int, terms: dict, designation: str = "left"):
        self.n = n
        self.terms = {
            (i, j): [(complex(c), float(e)) for c, e in lst if c != 0]
            for (i, j), lst in terms.items()
        }
        self.terms = {k: v for k, v in self.terms.items() if v}
        self.designation = designation
        self.punctures = (0j,)
        self.infinity = True

    @property
    def ends(self):
        return [0j, INF]

    def exponents(self) -> list[float]:
        return [e for lst in self.terms.values() for _, e in lst]

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if np.any(z == 0):
            raise ValueError("evaluation at the puncture 0")
        out = np.zeros(z.shape + (self.n, self.n), dtype=complex)
        for (i, j), lst in self.terms.items():
            for c, e in lst:
                out[..., i, j] += c * np.power(z, e)
        return out

    __call__ = evaluate
    evaluate_unchecked = evaluate

    def derivative(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape + (self.n, self.n), dtype=complex)
        for (i, j), lst in self.terms.items():
            for c, e in lst:
                if e != 0:
                    out[..., i, j] += c * e * np.power(z, e - 1)
        return out

    def pole_order(self, pole):
        """Largest pole order over entries (may be non-integral)."""
        if self.is_zero():
            return 0
        if is_infinity(pole):
            return max(0, _order(max(self.exponents()) + 2))
        if complex(pole) != 0:
            raise ValueError("the only finite puncture is 0")
        return max(0, _order(-min(self.exponents())))

    def metric_order(self, pole):
        """Exponent of the growth of tr(A A^*) in |local coordinate|^2."""
        if self.is_zero():
            raise ValueError("metric vanishes identically")
        if is_infinity(pole):
            return _order(-max(self.exponents()) - 2)
        return _order(min(self.exponents()))

    def residue(self, pole) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=complex)
        if is_infinity(pole):
            # z^e dz = -w^(-e-2) dw, simple pole at w=0 when e = -1
            sign = -1.0
        else:
            sign = 1.0
        for (i, j), lst in self.terms.items():
            for c, e in lst:
                if abs(e + 1) <= 1e-12:
                    out[i, j] += sign * c
        return out

    def trace_square_terms(self) -> dict:
        acc = defaultdict(complex)
        for (i, j), lst in self.terms.items():
            for c, e in lst:
                for c2, e2 in self.terms.get((j, i), []):
                    acc[round(e + e2, 12)] += c * c2
        return dict(acc)

    def is_null(self, rtol: float = 1e-12) -> bool:
        scale = max((abs(c) for lst in self.terms.values() for c, _ in lst), default=0.0) ** 2
        return all(abs(v) <= rtol * max(scale, 1e-300) for v in self.trace_square_terms().values())

    def scaled(self, s) -> "ExponentForm":
        return ExponentForm(self.n, {k: [(s * c, e) for c, e in v] for k, v in self.terms.items()}, self.designation)


@dataclass(frozen=True)
class CatenoidCousinParams:
    mu: float
    a: float
    b: float

    def __post_init__(self):
        if not self.b ** 2 > self.a ** 2:
            raise ValueError("parameters must satisfy b^2 > a^2")

    @property
    def single_valued(self) -> bool:
        d = self.b - self.a
        return abs(d - round(d)) <= 1e-12 and round(d) != 0


class CatenoidCousin:
    """Lift F_{mu,a,b} = [[p z^(mu+a), 0, q z^(mu-b)], [0, z^(-2mu), 0],
    [q z^(mu+b), 0, p z^(mu-a)]] with p, q fixed by det F = 1."""

    def __init__(self, params: CatenoidCousinParams):
        self.params = params
        mu, a, b = params.mu, params.a, params.b
        self.p = math.sqrt((b * b + 3 * mu * mu) / (b * b - a * a))
        self.q = math.sqrt((a * a + 3 * mu * mu) / (b * b - a * a))
        self.root = math.sqrt((a * a + 3 * mu * mu) * (b * b + 3 * mu * mu))

    def lift(self, z) -> np.ndarray:
        mu, a, b = self.params.mu, self.params.a, self.params.b
        z = complex(z)
        p, q = self.p, self.q
        return np.array(
            [
                [p * z ** (mu + a), 0, q * z ** (mu - b)],
                [0, z ** (-2 * mu), 0],
                [q * z ** (mu + b), 0, p * z ** (mu - a)],
            ],
            dtype=complex,
        )

    def left_form(self) -> ExponentForm:
        """F^-1 dF."""
        mu, a, b = self.params.mu, self.params.a, self.params.b
        d = (a * b - 3 * mu * mu) / (a + b)
        k = self.root / (a + b)
        return ExponentForm(
            3,
            {
                (0, 0): [(mu + d, -1)],
                (1, 1): [(-2 * mu, -1)],
                (2, 2): [(mu - d, -1)],
                (0, 2): [(-k, -a - b - 1)],
                (2, 0): [(k, a + b - 1)],
            },
            "left",
        )

    def dual_form(self) -> ExponentForm:
        """dF F^-1, derived from the lift."""
        mu, a, b = self.params.mu, self.params.a, self.params.b
        d = (a * b + 3 * mu * mu) / (b - a)
        k = self.root / (b - a)
        return ExponentForm(
            3,
            {
                (0, 0): [(mu + d, -1)],
                (1, 1): [(-2 * mu, -1)],
                (2, 2): [(mu - d, -1)],
                (0, 2): [(-k, a - b - 1)],
                (2, 0): [(k, b - a - 1)],
            },
            "right",
        )

    def printed_dual_form(self) -> ExponentForm:
        """Variant with off-diagonal coefficient a + b; kept for comparison,
        it is not dF F^-1 for this lift (see dual_form)."""
        mu, a, b = self.params.mu, self.params.a, self.params.b
        d = (a * b + 3 * mu * mu) / (b - a)
        return ExponentForm(
            3,
            {
                (0, 0): [(mu + d, -1)],
                (1, 1): [(-2 * mu, -1)],
                (2, 2): [(mu - d, -1)],
                (0, 2): [(-(a + b), a - b - 1)],
                (2, 0): [(a + b, b - a - 1)],
            },
            "right",
        )

    def dual_metric(self, z, off_diagonal: float | None = None):
        """Closed-form tr(alpha# alpha#^*) with a chosen off-diagonal coefficient
        (default: the one derived from the lift)."""
        mu, a, b = self.params.mu, self.params.a, self.params.b
        c = self.root / (b - a) if off_diagonal is None else off_diagonal
        r = np.abs(np.asarray(z, dtype=complex))
        diag = 2 * (a * a + 3 * mu * mu) * (b * b + 3 * mu * mu) / (b - a) ** 2
        return (diag + c * c * (r ** (2 * a - 2 * b) + r ** (2 * b - 2 * a))) / r ** 2

    def printed_dual_metric(self, z):
        return self.dual_metric(z, self.params.a + self.params.b)

    def is_degenerate(self) -> bool:
        return self.dual_form().is_zero() or self.root == 0
