"""Matrix Market and edge-list input, result output."""

from __future__ import annotations

import json
import os

import numpy as np

from .errors import ParseError
from .sparse import EdgeList

__all__ = [
    "read_matrix_market",
    "write_matrix_market",
    "read_edge_list",
    "write_edge_list",
    "load_graph",
    "write_result",
    "read_result_csv",
]

_FIELDS = ("real", "integer", "pattern")
_SYMMETRIES = ("general", "symmetric", "skew-symmetric")


def _parse_header(line):
    tokens = line.split()
    if not tokens or tokens[0].lower() != "%%matrixmarket":
        raise ParseError("missing %%MatrixMarket banner", 1)
    if len(tokens) != 5:
        raise ParseError("banner must read '%%MatrixMarket matrix coordinate <field> <symmetry>'", 1)
    obj, fmt, fld, sym = (t.lower() for t in tokens[1:])
    if obj != "matrix":
        raise ParseError(f"unsupported object {obj!r}", 1)
    if fmt != "coordinate":
        raise ParseError(f"unsupported format {fmt!r}; only coordinate is read", 1)
    if fld == "complex":
        raise ParseError("complex matrices are not supported", 1)
    if fld not in _FIELDS:
        raise ParseError(f"unsupported field {fld!r}", 1)
    if sym not in _SYMMETRIES:
        raise ParseError(f"unsupported symmetry {sym!r}", 1)
    return fld, sym


def _parse_entry(tokens, width, n, lineno):
    if len(tokens) != width:
        raise ParseError(f"expected {width} fields, got {len(tokens)}", lineno)
    try:
        r, c = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise ParseError(f"bad index in {' '.join(tokens)!r}", lineno) from None
    if not (1 <= r <= n and 1 <= c <= n):
        raise ParseError(f"index ({r}, {c}) outside 1..{n}", lineno)
    v = 1.0
    if width == 3:
        try:
            v = float(tokens[2])
        except ValueError:
            raise ParseError(f"bad value {tokens[2]!r}", lineno) from None
        if not np.isfinite(v):
            raise ParseError(f"non-finite value {tokens[2]!r}", lineno)
    return r, c, v


def read_matrix_market(path) -> EdgeList:
    """Read a coordinate Matrix Market file as an undirected edge list.

    Diagonal entries are dropped, stored values become weights by absolute
    value (pattern entries weigh 1), and zero entries are skipped.  For
    ``general`` storage the two triangles are averaged, so entries
    ``(i, j)`` and ``(j, i)`` each contribute half their magnitude.
    """
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    fld, sym = _parse_header(lines[0])
    k = 1
    while k < len(lines) and (not lines[k].strip() or lines[k].lstrip().startswith("%")):
        k += 1
    if k == len(lines):
        raise ParseError("missing size line", k)
    size = lines[k].split()
    try:
        n_rows, n_cols, nnz = (int(t) for t in size)
    except ValueError:
        raise ParseError(f"bad size line {lines[k]!r}", k + 1) from None
    if n_rows != n_cols:
        raise ParseError(f"matrix is not square ({n_rows} x {n_cols})", k + 1)
    n = n_rows
    width = 2 if fld == "pattern" else 3
    body = [(m + 1, line) for m, line in enumerate(lines[k + 1 :], start=k + 1) if line.strip()]
    if len(body) != nnz:
        raise ParseError(f"size line declares {nnz} entries, found {len(body)}", len(lines))

    rows = cols = vals = None
    split = [line.split() for _, line in body]
    if all(len(t) == width for t in split):
        try:
            arr = np.array(split, dtype=np.float64).reshape(nnz, width)
            rows = arr[:, 0].astype(np.int64)
            cols = arr[:, 1].astype(np.int64)
            vals = arr[:, 2] if width == 3 else np.ones(nnz)
            ok = (
                np.array_equal(rows, arr[:, 0])
                and np.array_equal(cols, arr[:, 1])
                and np.all((rows >= 1) & (rows <= n) & (cols >= 1) & (cols <= n))
                and np.all(np.isfinite(vals))
            )
        except ValueError:
            ok = False
        if not ok:
            rows = None
    if rows is None:
        # Slow path, only to locate the offending line.
        parsed = [_parse_entry(line.split(), width, n, m) for m, line in body]
        rows = np.array([p[0] for p in parsed], dtype=np.int64)
        cols = np.array([p[1] for p in parsed], dtype=np.int64)
        vals = np.array([p[2] for p in parsed], dtype=np.float64)

    w = np.abs(vals)
    keep = (rows != cols) & (w > 0)
    i, j, w = rows[keep] - 1, cols[keep] - 1, w[keep]
    if sym == "general":
        w = 0.5 * w
    return EdgeList(n, i, j, w)


def write_matrix_market(edges: EdgeList, path, field="real"):
    """Write as symmetric coordinate storage, one lower-triangle entry per edge."""
    if field not in ("real", "pattern"):
        raise ValueError("field must be 'real' or 'pattern'")
    hi = np.maximum(edges.i, edges.j) + 1
    lo = np.minimum(edges.i, edges.j) + 1
    with open(path, "w") as fh:
        fh.write(f"%%MatrixMarket matrix coordinate {field} symmetric\n")
        fh.write(f"{edges.n} {edges.n} {len(edges)}\n")
        if field == "pattern":
            fh.writelines(f"{a} {b}\n" for a, b in zip(hi.tolist(), lo.tolist()))
        else:
            fh.writelines(f"{a} {b} {v!r}\n" for a, b, v in zip(hi.tolist(), lo.tolist(), edges.w.tolist()))


def read_edge_list(path, n=None) -> EdgeList:
    """Read ``i j [w]`` lines (0-based, ``#`` comments); self-loops are dropped."""
    ii, jj, ww = [], [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.replace(",", " ").split()
            if len(tokens) not in (2, 3):
                raise ParseError(f"expected 'i j [w]', got {line!r}", lineno)
            try:
                i, j = int(tokens[0]), int(tokens[1])
                w = float(tokens[2]) if len(tokens) == 3 else 1.0
            except ValueError:
                raise ParseError(f"bad edge {line!r}", lineno) from None
            if i < 0 or j < 0:
                raise ParseError(f"negative vertex index in {line!r}", lineno)
            if not (w > 0 and np.isfinite(w)):
                raise ParseError(f"edge weight must be positive, got {tokens[2]!r}", lineno)
            if i != j:
                ii.append(i)
                jj.append(j)
                ww.append(w)
    if n is None:
        n = max(max(ii, default=-1), max(jj, default=-1)) + 1
    return EdgeList(n, np.array(ii, dtype=np.int64), np.array(jj, dtype=np.int64), np.array(ww))


def write_edge_list(edges: EdgeList, path):
    with open(path, "w") as fh:
        fh.write(f"# n = {edges.n}\n")
        fh.writelines(f"{a} {b} {v!r}\n" for a, b, v in edges)


def load_graph(path) -> EdgeList:
    """Read a Matrix Market file, or an edge list if the banner is absent."""
    with open(path) as fh:
        first = fh.readline()
    if first.lower().startswith("%%matrixmarket"):
        return read_matrix_market(path)
    return read_edge_list(path)


def write_result(result, path, format="json", vertex_index=None):
    """Write a :class:`FiedlerResult` as JSON or as ``index,value`` CSV.

    ``vertex_index`` maps solver vertices back to original ids (used after
    component extraction).
    """
    if format not in ("json", "csv"):
        raise ValueError(f"unknown format {format!r}")
    vector = np.asarray(result.vector)
    index = np.arange(vector.size) if vertex_index is None else np.asarray(vertex_index)
    path = os.fspath(path)
    if format == "json":
        doc = {
            "lambda2": result.lambda2,
            "residual_norm": result.residual_norm,
            "n": int(vector.size),
            "levels": list(result.level_sizes),
            "setup_seconds": result.setup_seconds,
            "solve_seconds": result.solve_seconds,
            "vector": vector.tolist(),
        }
        if vertex_index is not None:
            doc["vertex_index"] = index.tolist()
        with open(path, "w") as fh:
            json.dump(doc, fh)
            fh.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(f"# lambda2={result.lambda2!r} residual_norm={result.residual_norm!r}\n")
            fh.write("index,value\n")
            fh.writelines(f"{i},{v!r}\n" for i, v in zip(index.tolist(), vector.tolist()))


def read_result_csv(path):
    """Inverse of the CSV branch of :func:`write_result`.

    Returns ``(index, vector, lambda2)``.
    """
    lam = None
    index, values = [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("#"):
                for token in line[1:].split():
                    key, _, val = token.partition("=")
                    if key == "lambda2":
                        lam = float(val)
                continue
            if not line or line == "index,value":
                continue
            i, v = line.split(",")
            index.append(int(i))
            values.append(float(v))
    return np.array(index, dtype=np.int64), np.array(values), lam
