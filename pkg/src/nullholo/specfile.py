"""Plain-text surface description files.

Format (one ``key: value`` per line, ``#`` starts a comment)::

    label: enneper
    genus: 0
    base_point: 0.5+0i
    kind: weierstrass          # or: matrix
    frame: plane-frame         # weierstrass only
    g: z                       # repeat once per component, in order
    g: 0
    omega: 1
    punctures: inf             # optional extra ends, comma separated

    kind: matrix
    n: 3
    designation: left          # left: F^-1 dF, right: dF F^-1
    entry 1 2: 1
    entry 1 3: -1/z^2

Entries not listed are zero.  Complex numbers use ``a+bi`` and ``inf``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lie_core import NAMED_FRAMES
from .mero_forms import MeromorphicMatrixForm, WeierstrassData, weierstrass_to_form
from .rational import ExpressionError, RationalFunction, format_complex, is_infinity, parse_complex, parse_rational

SINGLE_KEYS = ("label", "genus", "base_point", "kind", "frame", "omega", "punctures", "n", "designation")


class SpecParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class SurfaceFile:
    label: str = ""
    genus: int = 0
    base_point: complex = 0.5
    kind: str = "matrix"
    designation: str = "left"
    n: int | None = None
    punctures: list = field(default_factory=list)
    entries: dict = field(default_factory=dict)
    frame: str | None = None
    g: list = field(default_factory=list)
    omega: RationalFunction | None = None

    def __eq__(self, other):
        if not isinstance(other, SurfaceFile):
            return NotImplemented
        same = (
            self.label == other.label
            and self.genus == other.genus
            and complex(self.base_point) == complex(other.base_point)
            and self.kind == other.kind
            and self.designation == other.designation
            and self.n == other.n
            and len(self.punctures) == len(other.punctures)
            and all((is_infinity(p) and is_infinity(q)) or (not is_infinity(p) and not is_infinity(q) and complex(p) == complex(q)) for p, q in zip(self.punctures, other.punctures))
            and self.entries.keys() == other.entries.keys()
            and all(self.entries[k] == other.entries[k] for k in self.entries)
            and self.frame == other.frame
            and len(self.g) == len(other.g)
            and all(a == b for a, b in zip(self.g, other.g))
        )
        if not same:
            return False
        if (self.omega is None) != (other.omega is None):
            return False
        return self.omega is None or self.omega == other.omega

    def to_form(self) -> MeromorphicMatrixForm:
        if self.kind == "weierstrass":
            data = WeierstrassData(tuple(self.g), self.omega, NAMED_FRAMES[self.frame])
            return weierstrass_to_form(data, extra_punctures=self.punctures)
        zero = RationalFunction.constant(0)
        ents = [[self.entries.get((i, j), zero) for j in range(self.n)] for i in range(self.n)]
        return MeromorphicMatrixForm.with_detected_punctures(ents, self.designation, self.punctures)

    def to_surface(self):
        from .surface_geom import SurfaceSpec

        form = self.to_form()
        if form.designation == "left":
            return SurfaceSpec(self.label or "spec", form, None, self.base_point)
        return SurfaceSpec(self.label or "spec", None, form, self.base_point)


def _format_point(p) -> str:
    return "inf" if is_infinity(p) else format_complex(p).strip("()")


def dumps(spec: SurfaceFile) -> str:
    lines = []
    if spec.label:
        lines.append(f"label: {spec.label}")
    lines.append(f"genus: {spec.genus}")
    lines.append(f"base_point: {_format_point(spec.base_point)}")
    lines.append(f"kind: {spec.kind}")
    if spec.kind == "weierstrass":
        lines.append(f"frame: {spec.frame}")
        lines.extend(f"g: {x.to_string()}" for x in spec.g)
        lines.append(f"omega: {spec.omega.to_string()}")
    else:
        lines.append(f"n: {spec.n}")
        lines.append(f"designation: {spec.designation}")
        for (i, j) in sorted(spec.entries):
            lines.append(f"entry {i + 1} {j + 1}: {spec.entries[i, j].to_string()}")
    if spec.punctures:
        lines.append("punctures: " + ", ".join(_format_point(p) for p in spec.punctures))
    return "\n".join(lines) + "\n"


def _rational(text: str, line: int, col: int) -> RationalFunction:
    try:
        return parse_rational(text)
    except ExpressionError as exc:
        raise SpecParseError(str(exc), line, col + (exc.column or 0)) from None
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecParseError(str(exc), line, col) from None


def _point(text: str, line: int, col: int):
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise SpecParseError(f"bad complex number {text!r}: {exc}", line, col) from None


def loads(text: str) -> SurfaceFile:
    spec = SurfaceFile()
    seen: dict[str, int] = {}
    entry_lines: dict[tuple, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if ":" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise SpecParseError("expected 'key: value'", lineno, col)
        key_part, value = body.split(":", 1)
        key = key_part.strip()
        kcol = len(key_part) - len(key_part.lstrip()) + 1
        vcol = len(key_part) + 2 + (len(value) - len(value.lstrip()))
        value = value.strip()
        if not value:
            raise SpecParseError(f"missing value for {key!r}", lineno, vcol)
        if key in SINGLE_KEYS:
            if key in seen:
                raise SpecParseError(f"duplicate key {key!r} (first on line {seen[key]})", lineno, kcol)
            seen[key] = lineno
        if key == "label":
            spec.label = value
        elif key == "genus":
            if value != "0":
                raise SpecParseError("only genus 0 compactifications are supported", lineno, vcol)
            spec.genus = 0
        elif key == "base_point":
            p = _point(value, lineno, vcol)
            if is_infinity(p):
                raise SpecParseError("base point must be finite", lineno, vcol)
            spec.base_point = complex(p)
        elif key == "kind":
            if value not in ("matrix", "weierstrass"):
                raise SpecParseError(f"unknown kind {value!r}", lineno, vcol)
            spec.kind = value
        elif key == "designation":
            if value not in ("left", "right"):
                raise SpecParseError(f"designation must be left or right, got {value!r}", lineno, vcol)
            spec.designation = value
        elif key == "n":
            if not value.isdigit() or int(value) < 1:
                raise SpecParseError(f"n must be a positive integer, got {value!r}", lineno, vcol)
            spec.n = int(value)
        elif key == "frame":
            if value not in NAMED_FRAMES:
                raise SpecParseError(f"unknown frame {value!r}; known: {', '.join(NAMED_FRAMES)}", lineno, vcol)
            spec.frame = value
        elif key == "g":
            spec.g.append(_rational(value, lineno, vcol))
        elif key == "omega":
            spec.omega = _rational(value, lineno, vcol)
        elif key == "punctures":
            pts = []
            offset = vcol
            for part in value.split(","):
                if part.strip():
                    pts.append(_point(part.strip(), lineno, offset + len(part) - len(part.lstrip())))
                offset += len(part) + 1
            spec.punctures = pts
        elif key.startswith("entry"):
            parts = key.split()
            if len(parts) != 3 or not (parts[1].isdigit() and parts[2].isdigit()):
                raise SpecParseError("entries are written 'entry i j: value'", lineno, kcol)
            ij = (int(parts[1]) - 1, int(parts[2]) - 1)
            if ij in spec.entries:
                raise SpecParseError(f"duplicate entry {parts[1]} {parts[2]}", lineno, kcol)
            spec.entries[ij] = _rational(value, lineno, vcol)
            entry_lines[ij] = lineno
            seen.setdefault("entry", lineno)
        else:
            raise SpecParseError(f"unknown key {key!r}", lineno, kcol)

    if spec.kind == "weierstrass":
        for req in ("frame", "omega"):
            if req not in seen:
                raise SpecParseError(f"weierstrass spec needs {req!r}", 1, 1)
        if spec.entries or "n" in seen:
            raise SpecParseError("weierstrass specs take no matrix entries", seen.get("entry", seen.get("n", 1)), 1)
    else:
        if spec.n is None:
            raise SpecParseError("matrix spec needs 'n'", 1, 1)
        if spec.g or spec.omega is not None or spec.frame is not None:
            raise SpecParseError("matrix specs take no Weierstrass data", 1, 1)
        for (i, j) in spec.entries:
            if not (0 <= i < spec.n and 0 <= j < spec.n):
                raise SpecParseError(f"entry {i + 1} {j + 1} outside a {spec.n}x{spec.n} matrix", entry_lines[i, j], 1)
    if any(not is_infinity(p) and complex(p) == spec.base_point for p in spec.punctures):
        raise SpecParseError("base point coincides with a declared puncture", seen.get("base_point", 1), 1)
    return spec


def load(path) -> SurfaceFile:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def from_form(form: MeromorphicMatrixForm, label: str = "", base_point: complex = 0.5) -> SurfaceFile:
    entries = {(i, j): e for i, row in enumerate(form.entries) for j, e in enumerate(row) if np.any(e.num)}
    return SurfaceFile(label, 0, complex(base_point), "matrix", form.designation, form.n, list(form.ends), entries)
