"""Matrix-valued meromorphic 1-forms A(z)dz on the punctured Riemann sphere."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .lie_core import LieFrame
from .rational import INF, PoleError, RationalFunction, is_infinity

POLE_MATCH_TOL = 1e-7
NULL_RTOL = 1e-11


class UndeclaredPoleError(ValueError):
    pass


class NullityError(ValueError):
    pass


def _stack(polys: list[list[np.ndarray]]) -> np.ndarray:
    n = len(polys)
    K = max(len(p) for row in polys for p in row)
    out = np.zeros((n, n, K), dtype=complex)
    for i, row in enumerate(polys):
        for j, p in enumerate(row):
            out[i, j, : len(p)] = p
    return out


def _horner(stack: np.ndarray, z):
    """Evaluate an (n, n, K) coefficient stack at scalar z or an array of points."""
    if np.ndim(z) == 0:
        K = stack.shape[-1]
        if abs(z) <= 8.0:
            # one contraction is much cheaper than a python-level loop
            return stack @ (complex(z) ** np.arange(K))
        val = stack[..., -1].copy()
        for k in range(stack.shape[-1] - 2, -1, -1):
            val = val * z + stack[..., k]
        return val
    z = np.asarray(z)[..., None, None]
    val = np.broadcast_to(stack[..., -1], z.shape[:-2] + stack.shape[:2]).copy()
    for k in range(stack.shape[-1] - 2, -1, -1):
        val = val * z + stack[..., k]
    return val


class MeromorphicMatrixForm:
    """n x n matrix of rational functions, read as the coefficient of dz.

    ``designation`` records whether the form is a left form F^-1 dF or a right
    form dF F^-1; the arithmetic does not depend on it.
    """

    def __init__(
        self,
        entries,
        punctures: Sequence[complex] = (),
        infinity: bool = False,
        designation: str = "left",
        validate: bool = True,
    ):
        rows = [[RationalFunction.coerce(e) for e in row] for row in entries]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("entries must form a non-empty square array")
        if designation not in ("left", "right"):
            raise ValueError("designation must be 'left' or 'right'")
        finite = []
        for p in punctures:
            if is_infinity(p):
                infinity = True
            else:
                finite.append(complex(p))
        self.n = n
        self.entries = tuple(tuple(r) for r in rows)
        self.punctures = tuple(finite)
        self.infinity = bool(infinity)
        self.designation = designation
        self._num = _stack([[e.num for e in r] for r in rows])
        self._den = _stack([[e.den for e in r] for r in rows])
        self._deriv = None
        if validate:
            self.validate()

    # construction helpers ------------------------------------------------------
    @classmethod
    def with_detected_punctures(cls, entries, designation="left", extra=()) -> "MeromorphicMatrixForm":
        probe = cls(entries, designation=designation, validate=False)
        pts, inf = probe.detected_poles()
        for p in extra:
            if is_infinity(p):
                inf = True
            elif all(abs(complex(p) - q) > POLE_MATCH_TOL for q in pts):
                pts.append(complex(p))
        return cls(entries, pts, inf, designation)

    @classmethod
    def from_constant(cls, M, coefficient: RationalFunction | str = "1", **kw) -> "MeromorphicMatrixForm":
        f = RationalFunction.coerce(coefficient)
        M = np.asarray(M, dtype=complex)
        return cls.with_detected_punctures([[f * M[i, j] for j in range(len(M))] for i in range(len(M))], **kw)

    def replace(self, entries=None, designation=None) -> "MeromorphicMatrixForm":
        return MeromorphicMatrixForm(
            self.entries if entries is None else entries,
            self.punctures,
            self.infinity,
            self.designation if designation is None else designation,
        )

    # invariants ------------------------------------------------------------------
    def detected_poles(self) -> tuple[list[complex], bool]:
        pts: list[complex] = []
        for row in self.entries:
            for e in row:
                for p, _ in e.poles():
                    if all(abs(p - q) > POLE_MATCH_TOL * max(1, abs(q)) for q in pts):
                        pts.append(p)
        inf = any(e.form_pole_order_at_infinity() > 0 for row in self.entries for e in row)
        return pts, inf

    def validate(self) -> None:
        tr = sum((self.entries[i][i] for i in range(self.n)), RationalFunction.constant(0))
        scale = 1.0 + max(float(np.max(np.abs(self.entries[i][i].num))) for i in range(self.n))
        if not tr.is_zero(scale, 1e-10):
            raise ValueError(f"form is not traceless: tr = {tr.to_string()}")
        pts, inf = self.detected_poles()
        for p in pts:
            if not self.is_declared(p):
                raise UndeclaredPoleError(f"pole at {p:.6g} is not a declared puncture")
        if inf and not self.infinity:
            raise UndeclaredPoleError("pole at infinity is not declared")

    def is_declared(self, p) -> bool:
        if is_infinity(p):
            return self.infinity
        p = complex(p)
        return any(abs(p - q) <= POLE_MATCH_TOL * max(1.0, abs(q)) for q in self.punctures)

    def _resolve(self, p):
        """Snap a requested point to the matching declared puncture."""
        if is_infinity(p):
            if not self.infinity:
                raise UndeclaredPoleError("infinity is not declared")
            return INF
        p = complex(p)
        for q in self.punctures:
            if abs(p - q) <= POLE_MATCH_TOL * max(1.0, abs(q)):
                return q
        raise UndeclaredPoleError(f"{p} is not a declared puncture")

    @property
    def ends(self) -> list:
        return list(self.punctures) + ([INF] if self.infinity else [])

    # evaluation ------------------------------------------------------------------
    def _check_point(self, z) -> None:
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        for q in self.punctures:
            if np.any(np.abs(zz - q) <= 1e-14 * max(1.0, abs(q))):
                raise PoleError(f"evaluation at declared pole {q}")

    def evaluate(self, z) -> np.ndarray:
        self._check_point(z)
        return _horner(self._num, z) / _horner(self._den, z)

    __call__ = evaluate

    def evaluate_unchecked(self, z) -> np.ndarray:
        return _horner(self._num, z) / _horner(self._den, z)

    def derivative_matrix(self) -> "MeromorphicMatrixForm":
        """The entrywise derivative A'(z) (a matrix function, not a 1-form)."""
        if self._deriv is None:
            d = [[e.derivative() for e in row] for row in self.entries]
            self._deriv = MeromorphicMatrixForm(d, self.punctures, self.infinity, self.designation, validate=False)
        return self._deriv

    def derivative(self, z) -> np.ndarray:
        return self.derivative_matrix().evaluate(z)

    # local data ------------------------------------------------------------------
    def laurent(self, pole, count: int) -> tuple[int, list[np.ndarray]]:
        """(v, [C_0, C_1, ...]) with A = sum_k C_k (z-p)^(v+k); at infinity the
        expansion is of the pulled-back coefficient in w = 1/z."""
        p = self._resolve(pole)
        ents = self.entries
        if is_infinity(p):
            ents = [[e.form_at_infinity() for e in row] for row in ents]
            p = 0.0
        data = [[e.laurent(p, count) if np.any(e.num) else None for e in row] for row in ents]
        vals = [d[0] for row in data for d in row if d is not None]
        if not vals:
            return 0, [np.zeros((self.n, self.n), dtype=complex) for _ in range(count)]
        v = min(vals)
        out = np.zeros((count, self.n, self.n), dtype=complex)
        for i, row in enumerate(data):
            for j, d in enumerate(row):
                if d is None:
                    continue
                shift = d[0] - v
                if shift < count:
                    out[shift:, i, j] = d[1][: count - shift]
        return v, list(out)

    def pole_order(self, pole) -> int:
        p = self._resolve(pole)
        if is_infinity(p):
            return max(e.form_pole_order_at_infinity() for row in self.entries for e in row)
        return max(e.pole_order(p) for row in self.entries for e in row)

    def residue(self, pole) -> np.ndarray:
        p = self._resolve(pole)
        return np.array([[e.residue(p) for e in row] for row in self.entries])

    def leading_coefficient(self, pole) -> np.ndarray:
        v, coeffs = self.laurent(pole, 1)
        return coeffs[0]

    # algebra ---------------------------------------------------------------------
    def _map(self, fn, designation=None):
        return MeromorphicMatrixForm(
            [[fn(e) for e in row] for row in self.entries],
            self.punctures,
            self.infinity,
            designation or self.designation,
            validate=False,
        )

    def scaled(self, c) -> "MeromorphicMatrixForm":
        return self._map(lambda e: e * c)

    def __neg__(self):
        return self.scaled(-1.0)

    def __add__(self, other: "MeromorphicMatrixForm"):
        if not isinstance(other, MeromorphicMatrixForm) or other.n != self.n:
            return NotImplemented
        ents = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        pts = list(self.punctures) + [q for q in other.punctures if not self.is_declared(q)]
        return MeromorphicMatrixForm(ents, pts, self.infinity or other.infinity, self.designation)

    def __sub__(self, other):
        return self + (-other)

    def conjugated(self, Pmat) -> "MeromorphicMatrixForm":
        """P A P^-1 for a constant invertible matrix P."""
        Pm = np.asarray(Pmat, dtype=complex)
        Pi = np.linalg.inv(Pm)
        n = self.n
        ents = [[RationalFunction.constant(0) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                acc = RationalFunction.constant(0)
                for k in range(n):
                    for l in range(n):
                        w = Pm[i, k] * Pi[l, j]
                        if w != 0 and np.any(self.entries[k][l].num):
                            acc = acc + self.entries[k][l] * w
                ents[i][j] = acc
        return MeromorphicMatrixForm(ents, self.punctures, self.infinity, self.designation)

    def chart_at_infinity(self) -> "MeromorphicMatrixForm":
        """The same form written in w = 1/z (punctures mapped by inversion)."""
        ents = [[e.form_at_infinity() for e in row] for row in self.entries]
        pts = []
        inf = False
        for q in self.punctures:
            if q == 0:
                inf = True
            else:
                pts.append(1 / q)
        if self.infinity:
            pts.append(0j)
        return MeromorphicMatrixForm(ents, pts, inf, self.designation)

    def trace_square(self) -> tuple[RationalFunction, float]:
        """tr(A^2) on a common denominator, with the size of the summands."""
        dens: list[np.ndarray] = []
        idx = {}
        for i in range(self.n):
            for j in range(self.n):
                d = self.entries[i][j].den
                for k, e in enumerate(dens):
                    if len(e) == len(d) and np.allclose(e, d, rtol=0, atol=1e-13):
                        idx[i, j] = k
                        break
                else:
                    idx[i, j] = len(dens)
                    dens.append(d)
        common = np.ones(1, dtype=complex)
        for d in dens:
            common = np.convolve(common, d)
        D2 = np.convolve(common, common)
        total = np.zeros(1, dtype=complex)
        scale = 0.0
        for i in range(self.n):
            for j in range(self.n):
                a, b = self.entries[i][j], self.entries[j][i]
                if not (np.any(a.num) and np.any(b.num)):
                    continue
                cof, _ = P.polydiv(D2, np.convolve(a.den, b.den))
                term = np.convolve(np.convolve(a.num, b.num), cof)
                scale = max(scale, float(np.max(np.abs(term))))
                if len(term) > len(total):
                    total = np.concatenate([total, np.zeros(len(term) - len(total), dtype=complex)])
                total[: len(term)] += term
        if scale > 0 and np.max(np.abs(total)) <= NULL_RTOL * scale:
            return RationalFunction([0.0]), scale
        return RationalFunction(total, D2), scale

    def __repr__(self):
        return f"MeromorphicMatrixForm(n={self.n}, punctures={self.punctures}, infinity={self.infinity}, designation={self.designation!r})"

    def __eq__(self, other):
        if not isinstance(other, MeromorphicMatrixForm):
            return NotImplemented
        return (
            self.entries == other.entries
            and self.punctures == other.punctures
            and self.infinity == other.infinity
            and self.designation == other.designation
        )

    __hash__ = None


# ---------------------------------------------------------------------------
# operations


def evaluate(form: MeromorphicMatrixForm, z) -> np.ndarray:
    return form.evaluate(z)


def residue(form: MeromorphicMatrixForm, pole) -> np.ndarray:
    return form.residue(pole)


def pole_order(form: MeromorphicMatrixForm, pole) -> int:
    return form.pole_order(pole)


class NullityResult(NamedTuple):
    is_null: bool
    trace_square: RationalFunction

    @property
    def residual_numerator(self) -> np.ndarray:
        return np.asarray(self.trace_square.num)


def is_null_form(form: MeromorphicMatrixForm) -> NullityResult:
    tr2, _ = form.trace_square()
    return NullityResult(not np.any(tr2.num), tr2)


@dataclass(frozen=True, eq=False)
class WeierstrassData:
    """Gauss data g = (g_1..g_m), coefficient omega of the 1-form, and a frame
    of m + 2 members."""

    g: tuple
    omega: RationalFunction
    frame: LieFrame

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(RationalFunction.coerce(x) for x in self.g))
        object.__setattr__(self, "omega", RationalFunction.coerce(self.omega))

    def components(self) -> list[RationalFunction]:
        s = sum((gj * gj for gj in self.g), RationalFunction.constant(0))
        w = self.omega
        return [(1 - s) * w, (1 + s) * w * 1j] + [gj * w * 2 for gj in self.g]


def assemble_form(components: Sequence[RationalFunction], frame: LieFrame, designation="left", extra_punctures=()) -> MeromorphicMatrixForm:
    """sum_j alpha_j e_j as a matrix form."""
    if len(components) != len(frame):
        raise ValueError(f"frame has {len(frame)} members but there are {len(components)} components")
    n = frame.n
    ents = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = RationalFunction.constant(0)
            for a, e in zip(components, frame.members):
                if e[i, j] != 0:
                    acc = acc + a * complex(e[i, j])
            row.append(acc)
        ents.append(row)
    return MeromorphicMatrixForm.with_detected_punctures(ents, designation, extra_punctures)


def weierstrass_to_form(data: WeierstrassData, extra_punctures=()) -> MeromorphicMatrixForm:
    if len(data.frame) != len(data.g) + 2:
        raise ValueError(f"frame needs {len(data.g) + 2} members, has {len(data.frame)}")
    for k, e in enumerate(data.frame.members):
        if abs(np.trace(e)) > 1e-12:
            raise ValueError(f"frame member {k + 1} is not traceless")
    form = assemble_form(data.components(), data.frame, "left", extra_punctures)
    if not is_null_form(form).is_null:
        raise NullityError("assembled form is not null; the frame is not orthonormal for a trace inner product")
    return form


def nilpotent_example_form(a, b, c) -> MeromorphicMatrixForm:
    """F^-1 dF for F = [[1, a, b], [0, 1, c], [0, 0, 1]]."""
    a, b, c = (RationalFunction.coerce(x) for x in (a, b, c))
    zero = RationalFunction.constant(0)
    da, db, dc = a.derivative(), b.derivative(), c.derivative()
    ents = [[zero, da, db - a * dc], [zero, zero, dc], [zero, zero, zero]]
    return MeromorphicMatrixForm.with_detected_punctures(ents, "left")


def nilpotent_example_dual_form(a, b, c) -> MeromorphicMatrixForm:
    """dF F^-1 for the same unipotent F."""
    a, b, c = (RationalFunction.coerce(x) for x in (a, b, c))
    zero = RationalFunction.constant(0)
    da, db, dc = a.derivative(), b.derivative(), c.derivative()
    ents = [[zero, da, db - da * c], [zero, zero, dc], [zero, zero, zero]]
    return MeromorphicMatrixForm.with_detected_punctures(ents, "right")


def nilpotent_lift(a, b, c):
    a, b, c = (RationalFunction.coerce(x) for x in (a, b, c))

    def F(z):
        z = complex(z)
        return np.array([[1, a(z), b(z)], [0, 1, c(z)], [0, 0, 1]], dtype=complex)

    return F


def diagonal_form(diag, coefficient="1/z") -> MeromorphicMatrixForm:
    """diag(d) * f(z) dz for constants d."""
    return MeromorphicMatrixForm.from_constant(np.diag(np.asarray(diag, dtype=complex)), coefficient)
