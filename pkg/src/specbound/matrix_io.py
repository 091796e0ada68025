"""Matrix file formats: Matrix Market (array/coordinate) and a row-major re,im CSV."""
from __future__ import annotations

import os

import numpy as np

from .errors import ParseError

_MM_BANNER = "%%matrixmarket"


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        for no, line in enumerate(fh, 1):
            yield no, line.rstrip("\n")


def _num(tok, source, no):
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"not a number: {tok!r}", line=no, source=source) from None
    return v


def _ints(toks, count, source, no, what):
    if len(toks) != count:
        raise ParseError(f"{what}: expected {count} integers, got {len(toks)}", line=no, source=source)
    try:
        vals = [int(t) for t in toks]
    except ValueError:
        raise ParseError(f"{what}: expected integers, got {' '.join(toks)!r}", line=no,
                         source=source) from None
    if any(v < 0 for v in vals):
        raise ParseError(f"{what}: negative value", line=no, source=source)
    return vals


def read_matrix_market(path):
    """Read a dense ``complex``/``real``/``integer`` ``general`` Matrix Market file.

    Both ``array`` (column-major) and ``coordinate`` layouts are accepted.
    """
    source = os.fspath(path)
    it = _lines(source)
    try:
        no, banner = next(it)
    except StopIteration:
        raise ParseError("empty file", line=1, source=source) from None
    head = banner.lower().split()
    if len(head) != 5 or head[0] != _MM_BANNER or head[1] != "matrix":
        raise ParseError("missing '%%MatrixMarket matrix <layout> <field> <symmetry>' banner",
                         line=no, source=source)
    layout, fld, sym = head[2:]
    if layout not in ("array", "coordinate"):
        raise ParseError(f"unsupported layout {layout!r}", line=no, source=source)
    if fld not in ("complex", "real", "integer", "double"):
        raise ParseError(f"unsupported field {fld!r}", line=no, source=source)
    if sym != "general":
        raise ParseError(f"unsupported symmetry {sym!r}", line=no, source=source)
    per = 2 if fld == "complex" else 1

    size = None
    for no, line in it:
        s = line.strip()
        if s and not s.startswith("%"):
            size = (no, s.split())
            break
    if size is None:
        raise ParseError("missing size line", line=no, source=source)
    no, toks = size
    if layout == "array":
        rows, cols = _ints(toks, 2, source, no, "size line")
        nnz = rows * cols
    else:
        rows, cols, nnz = _ints(toks, 3, source, no, "size line")
    out = np.zeros((rows, cols), dtype=np.complex128)

    count = 0
    for no, line in it:
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        toks = s.split()
        if count >= nnz:
            raise ParseError("more entries than the size line announced", line=no, source=source)
        if layout == "array":
            if len(toks) != per:
                raise ParseError(f"expected {per} value(s) per entry, got {len(toks)}",
                                 line=no, source=source)
            i, j = count % rows, count // rows
            vals = toks
        else:
            if len(toks) != 2 + per:
                raise ParseError(f"expected {2 + per} fields per entry, got {len(toks)}",
                                 line=no, source=source)
            i, j = _ints(toks[:2], 2, source, no, "entry index")
            if not (1 <= i <= rows and 1 <= j <= cols):
                raise ParseError(f"index ({i}, {j}) outside {rows}x{cols}", line=no, source=source)
            i, j = i - 1, j - 1
            vals = toks[2:]
        re = _num(vals[0], source, no)
        im = _num(vals[1], source, no) if per == 2 else 0.0
        out[i, j] += complex(re, im)
        count += 1
    if count != nnz:
        raise ParseError(f"expected {nnz} entries, found {count}", line=no, source=source)
    return out


def write_matrix_market(path, A, comment=None):
    """Write ``A`` as ``array complex general`` with round-trip-exact values."""
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2:
        raise ValueError("matrix must be 2-D")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%%MatrixMarket matrix array complex general\n")
        if comment:
            for line in str(comment).splitlines():
                fh.write(f"% {line}\n")
        fh.write(f"{A.shape[0]} {A.shape[1]}\n")
        for v in A.T.ravel():
            fh.write(f"{float(v.real)!r} {float(v.imag)!r}\n")


def read_csv(path):
    """Read the ``# rows cols`` header + one ``re,im`` pair per line (row-major) format."""
    source = os.fspath(path)
    shape = None
    vals = []
    last = 0
    for no, line in _lines(source):
        last = no
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            if shape is None:
                shape = (no, tuple(_ints(s[1:].split(), 2, source, no, "header")))
            continue
        if shape is None:
            raise ParseError("missing '# rows cols' header", line=no, source=source)
        toks = [t.strip() for t in s.split(",")]
        if len(toks) != 2:
            raise ParseError(f"expected 're,im', got {s!r}", line=no, source=source)
        vals.append(complex(_num(toks[0], source, no), _num(toks[1], source, no)))
    if shape is None:
        raise ParseError("missing '# rows cols' header", line=max(last, 1), source=source)
    rows, cols = shape[1]
    if len(vals) != rows * cols:
        raise ParseError(f"expected {rows * cols} entries, found {len(vals)}",
                         line=max(last, 1), source=source)
    return np.array(vals, dtype=np.complex128).reshape(rows, cols)


def write_csv(path, A):
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2:
        raise ValueError("matrix must be 2-D")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {A.shape[0]} {A.shape[1]}\n")
        for v in A.ravel():
            fh.write(f"{float(v.real)!r},{float(v.imag)!r}\n")


def read_matrix(path):
    """Dispatch on content: Matrix Market banner, otherwise CSV."""
    source = os.fspath(path)
    try:
        with open(source, encoding="utf-8") as fh:
            first = fh.readline()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", line=0, source=source) from None
    if first.lower().startswith(_MM_BANNER):
        return read_matrix_market(source)
    return read_csv(source)


def write_matrix(path, A):
    if os.fspath(path).lower().endswith(".csv"):
        write_csv(path, A)
    else:
        write_matrix_market(path, A)
