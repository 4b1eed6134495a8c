"""Matrix files: a whitespace text format and a JSON object format.

Text: a header line holding n, then n rows of n integers.  Blank lines and
'#' comments are ignored.  JSON: {"n": int, "entries": [[...]], "field": q}
with "field" optional.  Over an extension field an entry may also be a list
of coefficients, constant term first.
"""

import json
import sys
from dataclasses import dataclass
from typing import Optional

from .field import field_of_order


class MatrixFormatError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        super().__init__(where + msg)
        self.line, self.col = line, col


@dataclass
class Matrix:
    entries: list
    field: Optional[int] = None

    @property
    def n(self):
        return len(self.entries)


def _tokens(line):
    """(column, token) pairs, 1-based columns."""
    out, i = [], 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def _int(tok, line, col):
    try:
        return int(tok)
    except ValueError:
        raise MatrixFormatError(f"cannot parse {tok!r} as an integer", line, col) from None


def _check_n(n, line=None):
    if n == 0:
        raise MatrixFormatError("n = 0: the matrix must have at least one row", line)
    if n < 0:
        raise MatrixFormatError(f"n = {n} is negative", line)


def parse_text(text):
    rows = []
    n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw.split("#", 1)[0])
        if not toks:
            continue
        if n is None:
            if len(toks) != 1:
                raise MatrixFormatError("header must hold the single integer n", lineno, toks[1][0])
            n = _int(toks[0][1], lineno, toks[0][0])
            _check_n(n, lineno)
            continue
        if len(rows) == n:
            raise MatrixFormatError(f"extra row after the {n} declared rows", lineno, toks[0][0])
        if len(toks) != n:
            col = toks[n][0] if len(toks) > n else None
            raise MatrixFormatError(
                f"row {len(rows) + 1} has {len(toks)} entries, expected {n}", lineno, col)
        rows.append([_int(t, lineno, c) for c, t in toks])
    if n is None:
        raise MatrixFormatError("empty input: missing header n")
    if len(rows) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(rows)}")
    return Matrix(rows)


def parse_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise MatrixFormatError(e.msg, e.lineno, e.colno) from None
    if not isinstance(obj, dict) or "entries" not in obj:
        raise MatrixFormatError('JSON input must be an object with "entries"')
    rows = obj["entries"]
    if not isinstance(rows, list):
        raise MatrixFormatError('"entries" must be a list of rows')
    n = obj.get("n", len(rows))
    if not isinstance(n, int) or isinstance(n, bool):
        raise MatrixFormatError('"n" must be an integer')
    _check_n(n)
    if len(rows) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(rows)}")
    for i, row in enumerate(rows, 1):
        if not isinstance(row, list) or len(row) != n:
            size = len(row) if isinstance(row, list) else "no"
            raise MatrixFormatError(f"row {i} has {size} entries, expected {n}")
        for j, x in enumerate(row, 1):
            ok = isinstance(x, int) or (
                isinstance(x, list) and all(isinstance(c, int) for c in x))
            if not ok or isinstance(x, bool):
                raise MatrixFormatError(f"entry ({i},{j}) is not an integer: {x!r}")
    q = obj.get("field")
    if q is not None and (not isinstance(q, int) or isinstance(q, bool)):
        raise MatrixFormatError('"field" must be an integer')
    return Matrix([list(row) for row in rows], q)


def parse_string(text):
    if text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_text(text)


def read_matrix(source="-"):
    if source == "-":
        return parse_string(sys.stdin.read())
    with open(source, encoding="utf-8") as fh:
        return parse_string(fh.read())


def to_field(M, q=None):
    """(F, entries as field codes) for q (or the file's field), else (None, ints)."""
    q = q if q is not None else M.field
    if q is None:
        for i, row in enumerate(M.entries, 1):
            for j, x in enumerate(row, 1):
                if isinstance(x, list):
                    raise MatrixFormatError(f"entry ({i},{j}) is a coefficient list but no field is set")
        return None, [list(row) for row in M.entries]
    try:
        F = field_of_order(q)
    except ValueError as e:
        raise MatrixFormatError(f"field: {e}") from None

    def conv(x):
        return F.from_coeffs(x) if isinstance(x, list) else F.from_int(x)

    try:
        return F, [[conv(x) for x in row] for row in M.entries]
    except ValueError as e:
        raise MatrixFormatError(str(e)) from None


def parse_matrix(source="-", q=None):
    """Read a matrix file and reduce it into its field, if one applies."""
    return to_field(read_matrix(source), q)


def format_element(F, x):
    if F is None or F.ell == 1:
        return str(x)
    return "[" + ", ".join(str(c) for c in F.coeffs(x)) + "]"


def dump_text(A):
    lines = [str(len(A))] + [" ".join(str(x) for x in row) for row in A]
    return "\n".join(lines) + "\n"
