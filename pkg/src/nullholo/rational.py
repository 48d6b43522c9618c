"""Complex rational functions of one variable with dense coefficient storage.

Coefficients are stored in ascending order (index k holds the coefficient of
z**k), matching ``numpy.polynomial.polynomial``.  Every constructed function is
reduced: common roots of numerator and denominator are cancelled and the
denominator is made monic.
"""
from __future__ import annotations

import cmath
import math
import re

import numpy as np
from numpy.polynomial import polynomial as P

MAX_DEGREE = 64
GCD_RTOL = 1e-12
VALUATION_RTOL = 1e-10
CANCEL_RTOL = 1e-12
INF = math.inf


class DegreeError(ValueError):
    """Raised when a polynomial exceeds ``MAX_DEGREE``."""


class PoleError(ValueError):
    """Raised when a rational function is evaluated at one of its poles."""


class ExpressionError(ValueError):
    """Syntax error in a rational expression; ``column`` is 1-based."""

    def __init__(self, message, column):
        super().__init__(f"{message} (column {column})")
        self.column = column


def is_infinity(p) -> bool:
    if isinstance(p, str):
        return p.strip().lower() in ("inf", "infinity", "oo")
    try:
        return cmath.isinf(complex(p))
    except TypeError:
        return False


# ---------------------------------------------------------------------------
# polynomial helpers


def as_poly(c) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(c, dtype=complex)).copy()
    if arr.ndim != 1:
        raise ValueError("polynomial coefficients must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite polynomial coefficient")
    return trim_exact(arr)


def trim_exact(c: np.ndarray) -> np.ndarray:
    """Drop exactly-zero high-order coefficients (keeps at least one entry)."""
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: nz[-1] + 1]


def degree(c: np.ndarray) -> int:
    return len(trim_exact(c)) - 1


def _check_degree(c: np.ndarray) -> None:
    if len(c) - 1 > MAX_DEGREE:
        raise DegreeError(f"degree {len(c) - 1} exceeds the cap of {MAX_DEGREE}")


def taylor_shift(c: np.ndarray, p: complex) -> np.ndarray:
    """Coefficients of t -> c(p + t)."""
    out = np.zeros(1, dtype=complex)
    lin = np.array([p, 1.0], dtype=complex)
    for coef in c[::-1]:
        out = np.convolve(out, lin)
        out[0] += coef
    return out[: len(c)]


def valuation(c: np.ndarray, rtol: float = VALUATION_RTOL) -> int:
    """Index of the first coefficient that is not negligible relative to the largest."""
    scale = np.max(np.abs(c)) if len(c) else 0.0
    if scale == 0.0:
        return len(c)
    big = np.flatnonzero(np.abs(c) > rtol * scale)
    return int(big[0])


def series_divide(a: np.ndarray, d: np.ndarray, count: int) -> np.ndarray:
    """First ``count`` power-series coefficients of a/d, assuming d[0] != 0."""
    out = np.zeros(count, dtype=complex)
    for k in range(count):
        acc = a[k] if k < len(a) else 0.0
        top = min(k, len(d) - 1)
        if top >= 1:
            acc -= np.dot(d[1 : top + 1], out[k - 1 :: -1][:top])
        out[k] = acc / d[0]
    return out


def _root_clusters(c: np.ndarray) -> list[tuple[complex, int]]:
    """Distinct roots with multiplicities, clustering the spread of multiple roots.

    A cluster is accepted only if the polynomial really vanishes to the cluster
    size at the cluster mean; otherwise a tighter grouping radius is tried.
    """
    c = trim_exact(c)
    if len(c) <= 1:
        return []
    roots = np.roots(c[::-1])
    for tol in (1e-2, 1e-4, 1e-6, 1e-9, 0.0):
        clusters = _group(roots, tol)
        if all(
            valuation(taylor_shift(c, center), 1e-7) >= mult for center, mult in clusters
        ):
            return clusters
    return [(complex(r), 1) for r in roots]


def _group(roots: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    remaining = list(roots)
    groups = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        keep = []
        for r in remaining:
            if abs(r - seed) <= tol * max(1.0, abs(seed)):
                members.append(r)
            else:
                keep.append(r)
        remaining = keep
        groups.append((complex(np.mean(members)), len(members)))
    return groups


def _deflate(c: np.ndarray, r: complex, k: int) -> np.ndarray:
    for _ in range(k):
        # synthetic division by (z - r), remainder discarded
        n = len(c) - 1
        q = np.zeros(n, dtype=complex)
        acc = 0.0
        for i in range(n, 0, -1):
            acc = acc * r + c[i]
            q[i - 1] = acc
        c = q
    return c


def _reduce(num: np.ndarray, den: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    num = trim_exact(num)
    den = trim_exact(den)
    if not np.any(den):
        raise ZeroDivisionError("denominator is identically zero")
    if not np.any(num):
        return np.zeros(1, dtype=complex), np.ones(1, dtype=complex)
    lead = den[-1]
    if len(den) > 1 and len(num) > 1:
        kept = []
        cancelled = False
        for r, mult in _root_clusters(den):
            common = min(mult, valuation(taylor_shift(num, r), CANCEL_RTOL))
            if common > 0:
                num = _deflate(num, r, common)
                cancelled = True
            kept.extend([r] * (mult - common))
        if cancelled:
            # rebuild from the clustered roots rather than deflating, so that
            # multiple roots stay exactly multiple
            return num / lead, P.polyfromroots(kept) if kept else np.ones(1, dtype=complex)
    return num / lead, den / lead


# ---------------------------------------------------------------------------


class RationalFunction:
    """Reduced quotient of complex polynomials, ``num/den`` with monic ``den``."""

    __slots__ = ("num", "den")
    __hash__ = None

    def __init__(self, num, den=(1.0,), reduce=True):
        num = as_poly(num)
        den = as_poly(den)
        _check_degree(num)
        _check_degree(den)
        if reduce:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self.num.setflags(write=False)
        self.den.setflags(write=False)

    # constructors -----------------------------------------------------------
    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls([complex(c)])

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls([0.0, 1.0])

    @classmethod
    def coerce(cls, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, str):
            return parse_rational(x)
        return cls.constant(x)

    # basic properties ----------------------------------------------------------
    @property
    def num_degree(self) -> int:
        return len(self.num) - 1

    @property
    def den_degree(self) -> int:
        return len(self.den) - 1

    def is_polynomial(self) -> bool:
        return self.den_degree == 0

    def is_constant(self) -> bool:
        return self.den_degree == 0 and self.num_degree == 0

    def is_zero(self, scale: float | None = None, rtol: float = GCD_RTOL) -> bool:
        """Exact zero test, or relative to ``scale`` when one is supplied."""
        top = float(np.max(np.abs(self.num)))
        if scale is None:
            return top == 0.0
        return top <= rtol * scale

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = RationalFunction.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return np.array_equal(self.num, other.num) and np.array_equal(self.den, other.den)

    def allclose(self, other, atol: float = 1e-10) -> bool:
        other = RationalFunction.coerce(other)
        diff = self - other
        scale = 1.0 + float(np.max(np.abs(self.num))) + float(np.max(np.abs(other.num)))
        return float(np.max(np.abs(diff.num))) <= atol * scale

    # evaluation --------------------------------------------------------------
    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        d = P.polyval(z, self.den)
        if np.any(d == 0):
            raise PoleError("evaluation at a pole")
        out = P.polyval(z, self.num) / d
        return complex(out) if out.ndim == 0 else out

    # arithmetic ----------------------------------------------------------------
    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if np.array_equal(self.den, other.den):
            return RationalFunction(_padd(self.num, other.num), self.den)
        num = _padd(np.convolve(self.num, other.den), np.convolve(other.num, self.den))
        return RationalFunction(num, np.convolve(self.den, other.den))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if other.is_constant():
            return RationalFunction(self.num * other.num[0], self.den, reduce=False) if other.num[0] != 0 else RationalFunction([0.0])
        if self.is_constant():
            return other * self
        return RationalFunction(np.convolve(self.num, other.num), np.convolve(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not np.any(other.num):
            raise ZeroDivisionError("division by the zero function")
        return self * RationalFunction(other.den, other.num)

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if int(k) != k:
            raise ValueError("only integer powers are supported")
        k = int(k)
        if k < 0:
            return RationalFunction.constant(1.0) / self ** (-k)
        out = RationalFunction.constant(1.0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def derivative(self) -> "RationalFunction":
        dn = P.polyder(self.num) if len(self.num) > 1 else np.zeros(1, dtype=complex)
        dd = P.polyder(self.den) if len(self.den) > 1 else np.zeros(1, dtype=complex)
        num = _padd(np.convolve(dn, self.den), -np.convolve(self.num, dd))
        return RationalFunction(num, np.convolve(self.den, self.den))

    # local data ------------------------------------------------------------------
    def laurent(self, p, count: int) -> tuple[int, np.ndarray]:
        """Laurent data at p: (v, c) with f = sum_k c[k] (z-p)^(v+k).

        At infinity the expansion variable is w = 1/z.
        """
        f = self.compose_inverse() if is_infinity(p) else self
        p = 0.0 if is_infinity(p) else complex(p)
        ns = taylor_shift(f.num, p)
        ds = taylor_shift(f.den, p)
        vn = valuation(ns)
        if vn >= len(ns):
            return 0, np.zeros(count, dtype=complex)
        vd = valuation(ds)
        return vn - vd, series_divide(ns[vn:], ds[vd:], count)

    def order_at(self, p) -> int:
        """Valuation at p (negative for poles); large for the zero function."""
        if not np.any(self.num):
            return 10**9
        return self.laurent(p, 1)[0]

    def pole_order(self, p) -> int:
        return max(0, -self.order_at(p))

    def residue(self, p) -> complex:
        """Coefficient of (z-p)^-1; at infinity the residue of the 1-form f dz."""
        if is_infinity(p):
            return self.form_at_infinity().residue(0.0)
        v, c = self.laurent(p, max(1, -self.order_at(p)))
        k = -1 - v
        return complex(c[k]) if 0 <= k < len(c) else 0j

    def poles(self) -> list[tuple[complex, int]]:
        """Finite poles with multiplicities (from the reduced denominator)."""
        return _root_clusters(self.den)

    def compose_inverse(self) -> "RationalFunction":
        """The function w -> f(1/w)."""
        e = self.den_degree - self.num_degree
        nrev, drev = self.num[::-1], self.den[::-1]
        if e >= 0:
            nrev = np.concatenate([np.zeros(e, dtype=complex), nrev])
        else:
            drev = np.concatenate([np.zeros(-e, dtype=complex), drev])
        return RationalFunction(nrev, drev)

    def form_at_infinity(self) -> "RationalFunction":
        """Coefficient g with f(z)dz = g(w)dw under z = 1/w, i.e. -f(1/w)/w**2."""
        g = self.compose_inverse()
        return RationalFunction(-g.num, np.concatenate([np.zeros(2, dtype=complex), g.den]))

    def form_pole_order_at_infinity(self) -> int:
        if not np.any(self.num):
            return 0
        return max(0, self.num_degree - self.den_degree + 2)

    # text ----------------------------------------------------------------------
    def to_string(self) -> str:
        n = _poly_string(self.num)
        if self.den_degree == 0 and self.den[0] == 1:
            return f"({n})"
        return f"({n})/({_poly_string(self.den)})"

    def __repr__(self):
        return f"RationalFunction({self.to_string()})"


def _coerce_or_none(x):
    try:
        return RationalFunction.coerce(x)
    except (TypeError, ValueError):
        return None


def _padd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=complex)
    out[: len(a)] += a
    out[: len(b)] += b
    return out


def format_complex(c: complex) -> str:
    c = complex(c)
    sign = "-" if math.copysign(1.0, c.imag) < 0 else "+"
    return f"({c.real!r}{sign}{abs(c.imag)!r}i)"


def _poly_string(c: np.ndarray) -> str:
    terms = []
    for k, coef in enumerate(c):
        if coef == 0 and len(c) > 1:
            continue
        if k == 0:
            terms.append(format_complex(coef))
        else:
            terms.append(f"{format_complex(coef)}*z^{k}")
    return " + ".join(terms) if terms else format_complex(0)


# ---------------------------------------------------------------------------
# expression parser: + - * / ^, parentheses, z, i, numeric literals with i suffix

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>[ij])?|(?P<name>[A-Za-z_]+)|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExpressionError(f"unexpected character {text[col - 1]!r}", col)
        start = m.start(m.lastgroup) + 1 if m.lastgroup else pos + 1
        if m.group("num") is not None:
            start = m.start("num") + 1
            val = float(m.group("num"))
            out.append(("num", 1j * val if m.group("imag") else val, start))
        elif m.group("name") is not None:
            name = m.group("name")
            if name not in ("z", "i", "j", "I"):
                raise ExpressionError(f"unknown symbol {name!r}", m.start("name") + 1)
            out.append(("z", None, start) if name == "z" else ("num", 1j, start))
        else:
            op = m.group("op")
            out.append(("op", "^" if op == "**" else op, m.start("op") + 1))
        pos = m.end()
    out.append(("end", None, len(text) + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ExpressionError(f"expected {op!r}", t[2])

    def parse(self) -> RationalFunction:
        val = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ExpressionError("unexpected trailing input", t[2])
        return val

    def expr(self):
        val = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "*/":
                self.take()
                rhs = self.unary()
                if t[1] == "*":
                    val = val * rhs
                else:
                    try:
                        val = val / rhs
                    except ZeroDivisionError:
                        raise ExpressionError("division by zero", t[2]) from None
            elif t[0] in ("num", "z") or (t[0] == "op" and t[1] == "("):
                val = val * self.power()  # implicit multiplication, e.g. 2z
            else:
                return val

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            val = self.unary()
            return -val if t[1] == "-" else val
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            sign = 1
            s = self.peek()
            if s[0] == "op" and s[1] in "+-":
                self.take()
                sign = -1 if s[1] == "-" else 1
            e = self.take()
            if e[0] != "num" or isinstance(e[1], complex) or e[1] != int(e[1]):
                raise ExpressionError("exponent must be an integer literal", e[2])
            try:
                return base ** (sign * int(e[1]))
            except ZeroDivisionError:
                raise ExpressionError("negative power of zero", e[2]) from None
        return base

    def atom(self):
        t = self.take()
        if t[0] == "num":
            return RationalFunction.constant(t[1])
        if t[0] == "z":
            return RationalFunction.variable()
        if t[0] == "op" and t[1] == "(":
            val = self.expr()
            self.expect(")")
            return val
        raise ExpressionError("expected a number, z, or '('", t[2])


def parse_rational(text: str) -> RationalFunction:
    """Parse expressions such as ``(1+2i)*z^2 - 3/(z+1)``."""
    return _Parser(text).parse()


def parse_complex(text: str) -> complex:
    """Parse a constant expression such as ``1.5-2i`` or ``inf``."""
    if is_infinity(text):
        return complex(INF)
    f = parse_rational(text)
    if not f.is_constant():
        raise ExpressionError("expected a constant", 1)
    return complex(f.num[0])
