"""Finite CW complexes encoded by cellular boundary matrices."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from .abgroup import IntMatrix, kernel_basis
from .chain import ChainComplex, free_complex


class InvalidComplex(ValueError):
    def __init__(self, message: str, degree: Optional[int] = None,
                 entry: Optional[tuple[int, int]] = None):
        super().__init__(message)
        self.degree = degree
        self.entry = entry


@dataclass(frozen=True)
class CWComplex:
    """Cell counts per dimension and boundary matrices ``∂_k`` for ``k = 1..d``.

    Column ``j`` of ``boundaries[k - 1]`` is the boundary of the ``j``-th
    ``k``-cell in terms of the ``(k-1)``-cells.  The empty complex has
    dimension ``-1``.
    """

    cells: tuple[int, ...]
    boundaries: tuple[IntMatrix, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(int(c) for c in self.cells))
        object.__setattr__(self, "boundaries", tuple(self.boundaries))

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def count(self, k: int) -> int:
        return self.cells[k] if 0 <= k < len(self.cells) else 0

    def boundary(self, k: int) -> IntMatrix:
        """``∂_k``; a zero matrix outside ``1..d``."""
        if 1 <= k <= self.dimension:
            return self.boundaries[k - 1]
        return IntMatrix.zeros(self.count(k - 1), self.count(k))

    @property
    def labels(self) -> dict[int, list[str]]:
        return {k: [f"e{k}_{i}" for i in range(c)] for k, c in enumerate(self.cells)}

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.cells))

    @property
    def total_cells(self) -> int:
        return sum(self.cells)

    def skeleton(self, p: int) -> "CWComplex":
        return skeleton(self, p)

    @cached_property
    def chains(self) -> ChainComplex:
        return cellular_chains(self)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    degree: Optional[int] = None
    entry: Optional[tuple[int, int]] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate(X: CWComplex) -> ValidationReport:
    """Check boundary shapes and ``∂_{k-1} ∂_k = 0``; report the first failure."""
    if any(c < 0 for c in X.cells):
        return ValidationReport(False, None, None, "negative cell count")
    if len(X.boundaries) != max(X.dimension, 0):
        return ValidationReport(False, None, None,
                                f"expected {max(X.dimension, 0)} boundary matrices, "
                                f"got {len(X.boundaries)}")
    for k in range(1, X.dimension + 1):
        b = X.boundaries[k - 1]
        if b.shape != (X.cells[k - 1], X.cells[k]):
            return ValidationReport(False, k, None,
                                    f"boundary {k} has shape {b.shape}, expected "
                                    f"{(X.cells[k - 1], X.cells[k])}")
    for k in range(2, X.dimension + 1):
        dd = X.boundaries[k - 2] @ X.boundaries[k - 1]
        for i in range(dd.rows):
            for j in range(dd.cols):
                if dd[i, j]:
                    return ValidationReport(False, k, (i, j),
                                            f"∂_{k - 1}∂_{k} has entry {dd[i, j]} at ({i}, {j})")
    return ValidationReport(True)


def validated(X: CWComplex) -> CWComplex:
    report = validate(X)
    if not report:
        raise InvalidComplex(report.message, report.degree, report.entry)
    return X


def empty_complex() -> CWComplex:
    return CWComplex(())


def skeleton(X: CWComplex, p: int) -> CWComplex:
    if p < 0:
        return empty_complex()
    if p >= X.dimension:
        return X
    return CWComplex(X.cells[:p + 1], X.boundaries[:p])


def cellular_chains(X: CWComplex) -> ChainComplex:
    return relative_chains_between(X, X.dimension, -1)


def relative_chains_between(X: CWComplex, a: int, b: int) -> ChainComplex:
    """Cellular chains of ``(X^a, X^b)``: free on the cells of dimension in ``(b, a]``."""
    a = min(a, X.dimension)
    degrees = [k for k in range(max(b + 1, 0), a + 1)]
    ranks = {k: X.count(k) for k in degrees}
    boundaries = {k: X.boundary(k) for k in degrees if k - 1 in ranks}
    return free_complex(boundaries, ranks)


@dataclass(frozen=True)
class CWPair:
    """``(X, X^p)``."""

    total: CWComplex
    sub_dim: int


def relative_chains(P: CWPair) -> ChainComplex:
    return relative_chains_between(P.total, P.total.dimension, P.sub_dim)


# builders ------------------------------------------------------------------------


def _build(cells, boundaries) -> CWComplex:
    return validated(CWComplex(tuple(cells), tuple(boundaries)))


def _cells_at(dims: dict[int, int]) -> list[int]:
    top = max(dims) if dims else -1
    return [dims.get(k, 0) for k in range(top + 1)]


def _zero_boundaries(cells: Sequence[int], overrides: dict[int, IntMatrix] = None):
    overrides = overrides or {}
    return [overrides.get(k, IntMatrix.zeros(cells[k - 1], cells[k]))
            for k in range(1, len(cells))]


def point() -> CWComplex:
    return _build([1], [])


def sphere(n: int) -> CWComplex:
    if n < 0:
        raise ValueError("sphere dimension must be nonnegative")
    if n == 0:
        return _build([2], [])
    cells = _cells_at({0: 1, n: 1})
    return _build(cells, _zero_boundaries(cells))


def disk(n: int) -> CWComplex:
    """``D^n`` as ``S^{n-1}`` with one ``n``-cell attached by degree 1."""
    if n < 1:
        raise ValueError("disk dimension must be at least 1")
    if n == 1:
        return _build([2, 1], [IntMatrix([[-1], [1]])])
    cells = _cells_at({0: 1, n - 1: 1, n: 1})
    return _build(cells, _zero_boundaries(cells, {n: IntMatrix([[1]])}))


def torus() -> CWComplex:
    return _build([1, 2, 1], [IntMatrix.zeros(1, 2), IntMatrix.zeros(2, 1)])


def rp(n: int) -> CWComplex:
    """``RP^n``: one cell per dimension, ``∂_k = 2`` for even ``k``, else 0."""
    if n < 0:
        raise ValueError("RP^n needs n >= 0")
    cells = [1] * (n + 1)
    return _build(cells, [IntMatrix([[2 if k % 2 == 0 else 0]]) for k in range(1, n + 1)])


def cp(n: int) -> CWComplex:
    if n < 0:
        raise ValueError("CP^n needs n >= 0")
    cells = _cells_at({2 * i: 1 for i in range(n + 1)})
    return _build(cells, _zero_boundaries(cells))


def moore(m: int, n: int) -> CWComplex:
    """``M(Z/m, n)``: cells in dimensions 0, n, n+1 with degree-``m`` attaching."""
    if m < 2 or n < 1:
        raise ValueError("moore space needs m >= 2 and n >= 1")
    cells = _cells_at({0: 1, n: 1, n + 1: 1})
    return _build(cells, _zero_boundaries(cells, {n + 1: IntMatrix([[m]])}))


def _pad(X: CWComplex, d: int) -> tuple[list[int], list[IntMatrix]]:
    cells = list(X.cells) + [0] * (d + 1 - len(X.cells))
    return cells, [X.boundary(k) if k <= X.dimension else IntMatrix.zeros(cells[k - 1], cells[k])
                   for k in range(1, d + 1)]


def disjoint_union(X: CWComplex, Y: CWComplex) -> CWComplex:
    d = max(X.dimension, Y.dimension)
    cx, bx = _pad(X, d)
    cy, by = _pad(Y, d)
    from .abgroup import block_diag
    return _build([a + b for a, b in zip(cx, cy)],
                  [block_diag([p, q]) for p, q in zip(bx, by)])


def wedge(X: CWComplex, Y: CWComplex) -> CWComplex:
    """Identify the first 0-cell of ``Y`` with the first 0-cell of ``X``."""
    if X.count(0) == 0 or Y.count(0) == 0:
        raise ValueError("wedge needs nonempty complexes")
    U = disjoint_union(X, Y)
    n0 = X.count(0)
    if U.dimension < 1:
        return _build([U.cells[0] - 1], [])
    d1 = U.boundaries[0].tolist()
    merged = [row[:] for i, row in enumerate(d1) if i != n0]
    for j in range(U.cells[1]):
        merged[0][j] += d1[n0][j]
    cells = list(U.cells)
    cells[0] -= 1
    b1 = IntMatrix(merged, cells[0], cells[1])
    return _build(cells, [b1, *U.boundaries[1:]])


def suspension(X: CWComplex) -> CWComplex:
    """Reduced suspension based at the first 0-cell.

    One 0-cell; every other ``k``-cell becomes a ``(k+1)``-cell and ``∂``
    shifts up with the basepoint row removed.
    """
    if X.count(0) == 0:
        return point()
    d = X.dimension + 1
    cells = [1] + [X.count(0) - 1] + [X.count(k) for k in range(1, X.dimension + 1)]
    bounds = [IntMatrix.zeros(1, cells[1])]
    for k in range(2, d + 1):
        b = X.boundary(k - 1)
        if k == 2:
            b = b.select_rows(range(1, b.rows))
        bounds.append(b)
    return _build(cells, bounds)


def flag_complex(n_vertices: int, edges: Sequence[tuple[int, int]],
                 max_dim: int = 3) -> CWComplex:
    """Clique complex of a graph with simplicial (alternating sign) boundaries."""
    adj = {v: set() for v in range(n_vertices)}
    for a, b in edges:
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    simplices = [[(v,) for v in range(n_vertices)]]
    for k in range(1, max_dim + 1):
        nxt = []
        for s in simplices[-1]:
            for v in range(s[-1] + 1, n_vertices):
                if all(v in adj[u] for u in s):
                    nxt.append(s + (v,))
        if not nxt:
            break
        simplices.append(nxt)
    if n_vertices == 0:
        return empty_complex()
    cells = [len(s) for s in simplices]
    bounds = []
    for k in range(1, len(simplices)):
        index = {s: i for i, s in enumerate(simplices[k - 1])}
        m = [[0] * cells[k] for _ in range(cells[k - 1])]
        for j, s in enumerate(simplices[k]):
            for i in range(len(s)):
                m[index[s[:i] + s[i + 1:]]][j] += (-1) ** i
        bounds.append(IntMatrix(m, cells[k - 1], cells[k]))
    return _build(cells, bounds)


BUILDERS = {
    "point": point, "sphere": sphere, "disk": disk, "torus": torus, "rp": rp, "cp": cp,
    "moore": moore,
}


# random complexes ----------------------------------------------------------------


def random_complex(seed: int, budget: int = 40, method: Optional[str] = None) -> CWComplex:
    """Deterministic random complex with at most ``budget`` cells (at least one).

    ``method`` is ``"attach"`` (iterated attachment along integer cycles) or
    ``"flag"`` (clique complex of a random graph); by default three in four
    seeds use attachment.
    """
    rng = random.Random(seed)
    if budget <= 0:
        return point()
    if method is None:
        method = "flag" if rng.random() < 0.25 else "attach"
    if method == "flag":
        return _random_flag(rng, budget)
    if method == "attach":
        return _random_attach(rng, budget)
    raise ValueError(f"unknown method {method!r}")


def _random_flag(rng: random.Random, budget: int) -> CWComplex:
    n = rng.randint(1, max(1, min(7, budget)))
    p = rng.uniform(0.3, 0.8)
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    while True:
        X = flag_complex(n, edges, max_dim=3)
        if X.total_cells <= budget or not edges:
            return X
        edges.pop(rng.randrange(len(edges)))


def _random_attach(rng: random.Random, budget: int) -> CWComplex:
    dim = rng.randint(1, 4)
    remaining = budget
    cells = []
    bounds = []
    for k in range(dim + 1):
        if remaining <= 0:
            break
        share = max(1, remaining // (dim + 1 - k))
        count = rng.randint(1, min(share, 8 if k else 4))
        if k == 0:
            cells.append(count)
            remaining -= count
            continue
        cols = []
        if k == 1:
            for _ in range(count):
                a, b = rng.randrange(cells[0]), rng.randrange(cells[0])
                col = [0] * cells[0]
                if a != b:
                    col[a] -= 1
                    col[b] += 1
                cols.append(col)
        else:
            z = kernel_basis(bounds[-1]) if bounds else IntMatrix.identity(cells[k - 1])
            basis = z.columns()
            for _ in range(count):
                col = [0] * cells[k - 1]
                if basis and rng.random() < 0.85:
                    for v in rng.sample(basis, min(len(basis), rng.randint(1, 2))):
                        c = rng.choice((-1, 1, 1, 2))
                        col = [x + c * y for x, y in zip(col, v)]
                    m = rng.choice((1, 1, 2, 2, 3, 4))
                    col = [m * x for x in col]
                cols.append(col)
        cells.append(count)
        bounds.append(IntMatrix.from_columns(cols, cells[k - 1]))
        remaining -= count
    return _build(cells, bounds)


# file format ---------------------------------------------------------------------


class ComplexFormatError(ValueError):
    def __init__(self, message: str, field: str = "", line: Optional[int] = None,
                 column: Optional[int] = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{field + ': ' if field else ''}{message}{where}")
        self.field = field
        self.line = line
        self.column = column


def _format_matrix(m: IntMatrix) -> str:
    if m.rows == 0:
        return "[]"
    return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in m.tolist()) + "]"


def dumps_complex(X: CWComplex) -> str:
    """Canonical text form; ``loads_complex(dumps_complex(X)) == X``."""
    lines = ["{", f'  "dimension": {X.dimension},',
             f'  "cells": [{", ".join(str(c) for c in X.cells)}],']
    if X.boundaries:
        lines.append('  "boundaries": [')
        body = [f"    {_format_matrix(b)}" for b in X.boundaries]
        lines.append(",\n".join(body))
        lines.append("  ]")
    else:
        lines.append('  "boundaries": []')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexFormatError(exc.msg, what, exc.lineno, exc.colno) from exc


def _int(x, field: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ComplexFormatError(f"expected an integer, got {x!r}", field)
    return x


def complex_from_object(obj) -> CWComplex:
    if not isinstance(obj, dict):
        raise ComplexFormatError("expected an object", "complex")
    for key in ("dimension", "cells", "boundaries"):
        if key not in obj:
            raise ComplexFormatError("missing field", key)
    extra = set(obj) - {"dimension", "cells", "boundaries"}
    if extra:
        raise ComplexFormatError("unknown field", sorted(extra)[0])
    d = _int(obj["dimension"], "dimension")
    cells = obj["cells"]
    if not isinstance(cells, list):
        raise ComplexFormatError("expected a list", "cells")
    cells = [_int(c, f"cells[{i}]") for i, c in enumerate(cells)]
    if any(c < 0 for c in cells):
        raise ComplexFormatError("cell counts must be nonnegative", "cells")
    if len(cells) != d + 1:
        raise ComplexFormatError(f"{len(cells)} counts for dimension {d}", "cells")
    raw = obj["boundaries"]
    if not isinstance(raw, list) or len(raw) != max(d, 0):
        raise ComplexFormatError(f"expected a list of {max(d, 0)} matrices", "boundaries")
    bounds = []
    for k, m in enumerate(raw, start=1):
        field = f"boundaries[{k - 1}]"
        rows, cols = cells[k - 1], cells[k]
        if not isinstance(m, list) or len(m) != rows:
            raise ComplexFormatError(f"expected {rows} rows", field)
        data = []
        for i, row in enumerate(m):
            if not isinstance(row, list) or len(row) != cols:
                raise ComplexFormatError(f"expected {cols} entries", f"{field}[{i}]")
            data.append([_int(x, f"{field}[{i}]") for x in row])
        bounds.append(IntMatrix(data, rows, cols))
    X = CWComplex(tuple(cells), tuple(bounds))
    report = validate(X)
    if not report:
        raise InvalidComplex(report.message, report.degree, report.entry)
    return X


def loads_complex(text: str) -> CWComplex:
    return complex_from_object(parse_json(text, "complex"))


def parse_builder(expr: str) -> CWComplex:
    """``"rp(3)"``, ``"torus()"``, ``"wedge(sphere(1), sphere(2))"``."""
    import ast
    try:
        tree = ast.parse(expr.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ComplexFormatError(f"cannot parse builder expression {expr!r}", "builder") from exc

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.Name) and node.id in ALL_BUILDERS:
            return ALL_BUILDERS[node.id]()
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
                and node.func.id in ALL_BUILDERS and not node.keywords:
            args = [ev(a) for a in node.args]
            try:
                return ALL_BUILDERS[node.func.id](*args)
            except (TypeError, ValueError) as exc:
                raise ComplexFormatError(str(exc), "builder") from exc
        raise ComplexFormatError(f"unsupported builder expression {ast.dump(node)}", "builder")

    X = ev(tree)
    if not isinstance(X, CWComplex):
        raise ComplexFormatError("builder expression does not produce a complex", "builder")
    return X


ALL_BUILDERS = dict(BUILDERS, wedge=wedge, disjoint_union=disjoint_union,
                    suspension=suspension, random=random_complex, empty=empty_complex)
