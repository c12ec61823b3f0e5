"""Text formats: matrix CSV, polytope V/H files and key-value certificates."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import ParseError
from .matrix import NonnegMatrix, PhasedMatrix


def _data_lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_row(line, lineno):
    try:
        return [Fraction(tok.strip()) for tok in line.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"line {lineno}: {exc}") from None


def parse_rational_rows(text):
    """Rows of Fractions from CSV text (decimal or ``p/q`` literals)."""
    rows = [_parse_row(line, n) for n, line in _data_lines(text)]
    if not rows:
        raise ParseError("no matrix rows found")
    if any(len(r) != len(rows[0]) for r in rows):
        raise ParseError("rows have different lengths")
    return rows


def parse_matrix(text):
    rows = parse_rational_rows(text)
    try:
        return NonnegMatrix(rows)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def read_matrix(path):
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def format_matrix(A):
    return "\n".join(",".join(str(v) for v in row) for row in A.rows) + "\n"


def parse_polytope(text):
    """``V:`` section of vertex rows followed by ``H:`` rows ``a_1,...,a_d,b``."""
    from .applications import PolytopeVH

    section = None
    vertices, facets = [], []
    for lineno, line in _data_lines(text):
        tag = line.rstrip(":").strip().upper()
        if line.endswith(":") and tag in ("V", "H"):
            section = tag
            continue
        if section is None:
            raise ParseError(f"line {lineno}: data before a V: or H: header")
        row = _parse_row(line, lineno)
        if section == "V":
            vertices.append(row)
        else:
            if len(row) < 2:
                raise ParseError(f"line {lineno}: facet needs a normal and an offset")
            facets.append((row[:-1], row[-1]))
    if not vertices or not facets:
        raise ParseError("polytope needs both V: and H: sections")
    try:
        return PolytopeVH(vertices, facets)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def read_polytope(path):
    with open(path, encoding="utf-8") as fh:
        return parse_polytope(fh.read())


def format_vector(values):
    return ",".join(str(v) for v in values)


def format_phases(phase):
    return [",".join(repr(float(x)) for x in row) for row in np.asarray(phase)]


def write_keyvalue(path, items):
    """Write ``key: value`` lines; list values repeat the key once per line."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_keyvalue(items))


def render_keyvalue(items):
    lines = []
    for key, value in items:
        if isinstance(value, (list, tuple)):
            lines.extend(f"{key}: {v}" for v in value)
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def read_keyvalue(text):
    out = {}
    for _, line in _data_lines(text):
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"not a key-value line: {line!r}")
        out.setdefault(key.strip(), []).append(value.strip())
    return out


def phased_items(B, prefix=""):
    return [
        (f"{prefix}rows", B.shape[0]),
        (f"{prefix}cols", B.shape[1]),
        (f"{prefix}modulus", [format_vector(r) for r in B.modulus.rows]),
        (f"{prefix}phase", format_phases(B.phase)),
    ]


def phased_from_keyvalue(data, prefix=""):
    modulus = NonnegMatrix([[Fraction(t) for t in row.split(",")] for row in data[f"{prefix}modulus"]])
    phase = [[float(t) for t in row.split(",")] for row in data[f"{prefix}phase"]]
    return PhasedMatrix(modulus, phase)
