"""Bit-exact text formats.

All numbers are hex-mantissa dyadic literals (``0x3p-2`` is 0.75; complex values
are written ``<re>[+|-]<im>i``).  Blank lines and ``#`` comments are ignored.

* polynomial: a ``degree <n>`` header, then ``n + 1`` coefficients, lowest power first
* points / values: one complex literal per line
* intervals: ``<a> <b>`` per line, with a trailing ``exact`` on zero-width hits
"""

from __future__ import annotations

import os

from .dyadic import Dyadic, DyadicComplex
from .errors import ParseError
from .poly import ApproxPoly
from .refine import IsolatingInterval

__all__ = [
    "parse_poly", "format_poly", "read_poly", "write_poly",
    "parse_points", "format_points", "read_points", "write_points",
    "parse_intervals", "format_intervals", "read_intervals", "write_intervals",
]


def _lines(text: str):
    for k, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield k, line


def _complex(tok: str, k: int, path):
    try:
        return DyadicComplex.from_literal(tok)
    except ValueError:
        raise ParseError(f"bad dyadic literal {tok!r}", k, path) from None


def parse_poly(text: str, path=None) -> ApproxPoly:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty polynomial file", None, path)
    k, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "degree":
        raise ParseError("expected header 'degree <n>'", k, path)
    try:
        n = int(parts[1])
    except ValueError:
        raise ParseError(f"bad degree {parts[1]!r}", k, path) from None
    if n < 0:
        raise ParseError("degree must be non-negative", k, path)
    body = lines[1:]
    if len(body) != n + 1:
        where = body[n + 1][0] if len(body) > n + 1 else (body[-1][0] if body else k)
        raise ParseError(f"expected {n + 1} coefficients, found {len(body)}", where, path)
    return ApproxPoly.from_coeffs([_complex(t, j, path) for j, t in body])


def format_poly(F: ApproxPoly) -> str:
    cs = F.coeffs
    out = [f"degree {len(cs) - 1}"]
    out += [c.to_literal() for c in cs]
    return "\n".join(out) + "\n"


def parse_points(text: str, path=None) -> list:
    return [_complex(t, k, path) for k, t in _lines(text)]


def format_points(points) -> str:
    return "".join(DyadicComplex.coerce(p).to_literal() + "\n" for p in points)


def parse_intervals(text: str, path=None) -> list:
    out = []
    for k, line in _lines(text):
        parts = line.split()
        exact = len(parts) == 3 and parts[2] == "exact"
        if len(parts) != 2 and not exact:
            raise ParseError("expected '<a> <b>' or '<a> <b> exact'", k, path)
        try:
            a, b = Dyadic.from_literal(parts[0]), Dyadic.from_literal(parts[1])
        except ValueError as exc:
            raise ParseError(str(exc), k, path) from None
        try:
            out.append(IsolatingInterval(a, b, exact=exact))
        except ValueError as exc:
            raise ParseError(str(exc), k, path) from None
    return out


def format_intervals(intervals) -> str:
    return "".join(str(iv) + "\n" for iv in intervals)


def _read(path):
    with open(path, encoding="ascii") as fh:
        return fh.read()


def _write(path, text):
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write(text)
    os.replace(tmp, path)


def read_poly(path) -> ApproxPoly:
    return parse_poly(_read(path), path)


def write_poly(path, F: ApproxPoly):
    _write(path, format_poly(F))


def read_points(path) -> list:
    return parse_points(_read(path), path)


def write_points(path, points):
    _write(path, format_points(points))


def read_intervals(path) -> list:
    return parse_intervals(_read(path), path)


def write_intervals(path, intervals):
    _write(path, format_intervals(intervals))
