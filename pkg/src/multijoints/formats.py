"""Plain-text line-record files for instances, colourings and certificates.

Every document starts with a ``kind`` record followed by ``field`` and
``dimension``.  ``#`` starts a comment.  Records::

    kind instance | colouring | certificate
    field prime:101            (or: field rational)
    dimension 2
    family 1 ; base 0,1 ; dir 1,0
    point 1,1                  (instance: explicit J; certificate: J-bar)
    point 1,1 ; colour 2       (colouring)
    m 2                        (colouring trailer, certificate)
    max_own_colour 2,1         (colouring trailer)
    advances 0                 (colouring trailer)
    algorithm general          (colouring trailer)
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .colouring import Certificate
from .field import Field, parse_field
from .geometry import Instance, Line, Point, format_point


class FormatError(ValueError):
    pass


@dataclass
class ColouringFile:
    field: Field
    dimension: int
    assignment: dict[Point, int]
    meta: dict[str, str] = dc_field(default_factory=dict)

    @property
    def m(self) -> int | None:
        return int(self.meta["m"]) if "m" in self.meta else None


def _records(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        key, _, rest = body.partition(" ")
        yield lineno, key, rest.strip()


def _parse_vector(fld: Field, text: str, d: int, lineno: int) -> Point:
    parts = [t for t in text.split(",")]
    if len(parts) != d:
        raise FormatError(f"line {lineno}: expected {d} coordinates, got {len(parts)}")
    try:
        return tuple(fld.parse_value(t) for t in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"line {lineno}: bad scalar in {text!r}: {exc}") from None


def _parse_line(fld: Field, rest: str, d: int, lineno: int) -> Line:
    parts = [p.strip() for p in rest.split(";")]
    if len(parts) != 3 or not parts[1].startswith("base ") or not parts[2].startswith("dir "):
        raise FormatError(f"line {lineno}: expected 'family j ; base ... ; dir ...'")
    try:
        j = int(parts[0])
    except ValueError:
        raise FormatError(f"line {lineno}: bad family index {parts[0]!r}") from None
    base = _parse_vector(fld, parts[1][5:], d, lineno)
    direction = _parse_vector(fld, parts[2][4:], d, lineno)
    try:
        return Line(base, direction, j)
    except ValueError as exc:
        raise FormatError(f"line {lineno}: {exc}") from None


def _parse(text: str, expected_kind: str):
    kind = fld = d = None
    lines: list[Line] = []
    points: list[tuple[int, str]] = []
    meta: dict[str, str] = {}
    for lineno, key, rest in _records(text):
        if key == "kind":
            kind = rest
            if kind != expected_kind:
                raise FormatError(f"expected a {expected_kind} document, found kind {kind!r}")
        elif key == "field":
            try:
                fld = parse_field(rest)
            except ValueError as exc:
                raise FormatError(f"line {lineno}: {exc}") from None
        elif key == "dimension":
            try:
                d = int(rest)
            except ValueError:
                raise FormatError(f"line {lineno}: bad dimension {rest!r}") from None
        elif key == "family":
            if fld is None or d is None:
                raise FormatError(f"line {lineno}: field and dimension must come before lines")
            lines.append(_parse_line(fld, rest, d, lineno))
        elif key == "point":
            points.append((lineno, rest))
        elif key in ("m", "max_own_colour", "advances", "algorithm"):
            meta[key] = rest
        else:
            raise FormatError(f"line {lineno}: unknown record {key!r}")
    if kind is None:
        raise FormatError("missing 'kind' record")
    if fld is None or d is None:
        raise FormatError("missing 'field' or 'dimension' record")
    return fld, d, lines, points, meta


def _header(kind: str, fld: Field, d: int) -> list[str]:
    return [f"kind {kind}", f"field {fld.spec}", f"dimension {d}"]


def dump_instance(inst: Instance) -> str:
    out = _header("instance", inst.field, inst.dimension)
    out += [str(l) for l in inst.lines]
    for x in inst.points or ():
        out.append(f"point {format_point(x)}")
    return "\n".join(out) + "\n"


def load_instance(text: str) -> Instance:
    fld, d, lines, points, _ = _parse(text, "instance")
    families: list[list[Line]] = [[] for _ in range(d)]
    for l in lines:
        if not 1 <= l.family <= d:
            raise FormatError(f"family index {l.family} outside 1..{d}")
        families[l.family - 1].append(l)
    explicit = None
    if points:
        explicit = [_parse_vector(fld, rest, d, lineno) for lineno, rest in points]
    return Instance(fld, d, families, explicit)


def dump_colouring(
    fld: Field,
    d: int,
    assignment: Mapping[Point, int],
    m: int | None = None,
    max_own: Sequence[int] | None = None,
    advances: int | None = None,
    algorithm: str | None = None,
) -> str:
    out = _header("colouring", fld, d)
    out += [f"point {format_point(x)} ; colour {c}" for x, c in assignment.items()]
    if m is not None:
        out.append(f"m {m}")
    if max_own is not None:
        out.append("max_own_colour " + ",".join(map(str, max_own)))
    if advances is not None:
        out.append(f"advances {advances}")
    if algorithm is not None:
        out.append(f"algorithm {algorithm}")
    return "\n".join(out) + "\n"


def load_colouring(text: str) -> ColouringFile:
    fld, d, lines, points, meta = _parse(text, "colouring")
    if lines:
        raise FormatError("colouring documents carry no line records")
    assignment: dict[Point, int] = {}
    for lineno, rest in points:
        coords, sep, colour = rest.partition(";")
        colour = colour.strip()
        if not sep or not colour.startswith("colour "):
            raise FormatError(f"line {lineno}: expected 'point ... ; colour j'")
        x = _parse_vector(fld, coords, d, lineno)
        try:
            assignment[x] = int(colour[7:])
        except ValueError:
            raise FormatError(f"line {lineno}: bad colour {colour!r}") from None
    return ColouringFile(fld, d, assignment, meta)


def dump_certificate(cert: Certificate, fld: Field) -> str:
    out = _header("certificate", fld, cert.d)
    out.append(f"m {cert.m}")
    out += [f"point {format_point(x)}" for x in cert.jbar]
    out += [str(l) for l in cert.lbar]
    return "\n".join(out) + "\n"


def load_certificate(text: str) -> tuple[Certificate, Field]:
    fld, d, lines, points, meta = _parse(text, "certificate")
    if "m" not in meta:
        raise FormatError("certificate lacks an 'm' record")
    jbar = tuple(_parse_vector(fld, rest, d, lineno) for lineno, rest in points)
    return Certificate(jbar=jbar, lbar=tuple(lines), m=int(meta["m"]), d=d), fld


def document_kind(text: str) -> str:
    for _, key, rest in _records(text):
        if key == "kind":
            return rest
        break
    raise FormatError("document does not start with a 'kind' record")
