"""Exact integer matrices, Smith normal form and finitely generated abelian groups.

Every group is a cokernel presentation ``Z^n / span(relations)``.  Elements are
integer vectors in the ambient lattice ``Z^n``; two vectors name the same
element when their difference lies in the column span of the relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

Vector = tuple


class IntMatrix:
    """Immutable integer matrix with row-major storage.

    Shapes ``0 x n`` and ``n x 0`` are legal and act as zero maps.
    """

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable[int]] = (), rows: Optional[int] = None,
                 cols: Optional[int] = None):
        rows_data = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(rows_data)
        if cols is None:
            cols = len(rows_data[0]) if rows_data else 0
        if len(rows_data) != rows:
            raise ValueError(f"expected {rows} rows, got {len(rows_data)}")
        for i, row in enumerate(rows_data):
            if len(row) != cols:
                raise ValueError(f"row {i} has length {len(row)}, expected {cols}")
        self.rows = rows
        self.cols = cols
        self._data = rows_data
        self._hash = None

    # construction -----------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [tuple(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise ValueError(f"column of length {len(c)} in a {rows}-row matrix")
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: Optional[int] = None,
                 cols: Optional[int] = None) -> "IntMatrix":
        k = len(entries)
        rows = k if rows is None else rows
        cols = k if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            out[i][i] = d
        return cls(out, rows, cols)

    # access -----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols} matrix")
        return self._data[i][j]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[Vector]:
        if self.rows == 0:
            return [()] * self.cols
        return [tuple(c) for c in zip(*self._data)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_columns(self._data, self.cols)

    def select_columns(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix([[r[j] for j in idx] for r in self._data], self.rows, len(idx))

    def select_rows(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix([self._data[i] for i in idx], len(idx), self.cols)

    def is_zero(self) -> bool:
        return all(not x for r in self._data for x in r)

    # arithmetic -------------------------------------------------------------

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for {self.rows}x{self.cols} matrix")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._data)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.columns()
            return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._data],
                             self.rows, other.cols)
        return self.apply(other)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                         self.rows, self.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self._data], self.rows, self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix([[c * a for a in r] for r in self._data], self.rows, self.cols)

    # identity ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"


def hstack(mats: Sequence[IntMatrix], rows: Optional[int] = None) -> IntMatrix:
    if rows is None:
        if not mats:
            raise ValueError("hstack of no matrices needs an explicit row count")
        rows = mats[0].rows
    for m in mats:
        if m.rows != rows:
            raise ValueError(f"hstack row mismatch: {m.rows} != {rows}")
    data = [sum((m.row(i) for m in mats), ()) for i in range(rows)]
    return IntMatrix(data, rows, sum(m.cols for m in mats))


def vstack(mats: Sequence[IntMatrix], cols: Optional[int] = None) -> IntMatrix:
    if cols is None:
        if not mats:
            raise ValueError("vstack of no matrices needs an explicit column count")
        cols = mats[0].cols
    for m in mats:
        if m.cols != cols:
            raise ValueError(f"vstack column mismatch: {m.cols} != {cols}")
    data = [r for m in mats for r in m._data]
    return IntMatrix(data, len(data), cols)


def block_diag(mats: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            out[r0 + i][c0:c0 + m.cols] = m.row(i)
        r0 += m.rows
        c0 += m.cols
    return IntMatrix(out, rows, cols)


def kron_identity(a: IntMatrix, k: int) -> IntMatrix:
    """``a ⊗ I_k``: each entry becomes ``entry * I_k``."""
    out = [[0] * (a.cols * k) for _ in range(a.rows * k)]
    for i in range(a.rows):
        for j in range(a.cols):
            x = a[i, j]
            if x:
                for t in range(k):
                    out[i * k + t][j * k + t] = x
    return IntMatrix(out, a.rows * k, a.cols * k)


def determinant(a: IntMatrix) -> int:
    """Fraction-free (Bareiss) determinant of a square matrix."""
    n = a.rows
    if n != a.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = a.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# Smith normal form ---------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ source @ V == D`` with ``D`` diagonal, nonnegative, divisibility chain."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    source: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @cached_property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @cached_property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @cached_property
    def _U_rows(self):
        return self.U._data

    @cached_property
    def _V_rows(self):
        return self.V._data


def _smith_lists(data, m, n):
    A = [list(r) for r in data]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, c):
        # row_i += c * row_j
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        for row in Ui:
            row[j] -= c * row[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_col(i, j, c):
        # col_i += c * col_j
        for row in A:
            row[i] += c * row[j]
        for row in V:
            row[i] += c * row[j]
        Vi[j] = [a - c * b for a, b in zip(Vi[j], Vi[i])]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or bool(A[i][t])
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or bool(A[t][j])
            if dirty:
                best = (abs(p), t, t)
                for i in range(t + 1, m):
                    if A[i][t] and abs(A[i][t]) < best[0]:
                        best = (abs(A[i][t]), i, t)
                for j in range(t + 1, n):
                    if A[t][j] and abs(A[t][j]) < best[0]:
                        best = (abs(A[t][j]), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = None
            for i in range(t + 1, m):
                if any(A[i][j] % p for j in range(t + 1, n)):
                    bad = i
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
            for row in Ui:
                row[t] = -row[t]
        t += 1
    return A, U, V, Ui, Vi


@lru_cache(maxsize=200_000)
def smith(a: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms and their inverses."""
    m, n = a.shape
    A, U, V, Ui, Vi = _smith_lists(a._data, m, n)
    return SmithDecomposition(U=IntMatrix(U, m, m), D=IntMatrix(A, m, n), V=IntMatrix(V, n, n),
                              source=a, U_inv=IntMatrix(Ui, m, m), V_inv=IntMatrix(Vi, n, n))


def solve(a: IntMatrix, b: Sequence[int]) -> Optional[Vector]:
    """An integer ``x`` with ``a @ x == b``, or ``None`` when none exists."""
    if len(b) != a.rows:
        raise ValueError(f"right-hand side of length {len(b)} for {a.rows}-row matrix")
    if not any(b):
        return (0,) * a.cols
    s = smith(a)
    c = [sum(u * x for u, x in zip(row, b)) for row in s._U_rows]
    y = [0] * a.cols
    diag = s.diagonal
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d:
            q, r = divmod(ci, d)
            if r:
                return None
            y[i] = q
        elif ci:
            return None
    return tuple(sum(v * x for v, x in zip(row, y)) for row in s._V_rows)


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Columns form a basis of the integer kernel of ``a``."""
    s = smith(a)
    return s.V.select_columns(range(s.rank, a.cols))


def rank(a: IntMatrix) -> int:
    return smith(a).rank


def in_span(a: IntMatrix, v: Sequence[int]) -> bool:
    return solve(a, v) is not None


# groups ---------------------------------------------------------------------------


def format_canonical(free_rank: int, torsion: Sequence[int]) -> str:
    parts = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    parts.extend(f"Z/{d}" for d in torsion)
    return " ⊕ ".join(parts) if parts else "0"


@dataclass(frozen=True)
class PresentedGroup:
    """``Z^ambient_rank`` modulo the column span of ``relations``."""

    ambient_rank: int
    relations: IntMatrix = None

    def __post_init__(self):
        if self.relations is None:
            object.__setattr__(self, "relations", IntMatrix.zeros(self.ambient_rank, 0))
        if self.relations.rows != self.ambient_rank:
            raise ValueError(f"relations have {self.relations.rows} rows for ambient rank "
                             f"{self.ambient_rank}")

    @classmethod
    def free(cls, n: int) -> "PresentedGroup":
        return cls(n)

    @classmethod
    def zero(cls) -> "PresentedGroup":
        return cls(0)

    @classmethod
    def from_invariants(cls, free_rank: int, torsion: Sequence[int] = ()) -> "PresentedGroup":
        """``Z^free_rank ⊕ Z/t1 ⊕ ...``; torsion generators come last."""
        n = free_rank + len(torsion)
        cols = []
        for i, t in enumerate(torsion):
            col = [0] * n
            col[free_rank + i] = t
            cols.append(col)
        return cls(n, IntMatrix.from_columns(cols, n))

    @cached_property
    def canonical_form(self) -> tuple[int, tuple[int, ...]]:
        s = smith(self.relations)
        nonzero = [d for d in s.diagonal if d]
        return self.ambient_rank - len(nonzero), tuple(d for d in nonzero if d > 1)

    @property
    def free_rank(self) -> int:
        return self.canonical_form[0]

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.canonical_form[1]

    def is_trivial(self) -> bool:
        return self.canonical_form == (0, ())

    def isomorphic(self, other: "PresentedGroup") -> bool:
        return self.canonical_form == other.canonical_form

    def is_zero_element(self, v: Sequence[int]) -> bool:
        if not any(v):
            return True
        return in_span(self.relations, v)

    def equal_elements(self, v: Sequence[int], w: Sequence[int]) -> bool:
        return self.is_zero_element(tuple(a - b for a, b in zip(v, w)))

    def __str__(self) -> str:
        return format_canonical(*self.canonical_form)


def canonical_form(g: PresentedGroup) -> tuple[int, tuple[int, ...]]:
    return g.canonical_form


def direct_sum(groups: Sequence[PresentedGroup]) -> PresentedGroup:
    n = sum(g.ambient_rank for g in groups)
    return PresentedGroup(n, block_diag([g.relations for g in groups]) if groups
                          else IntMatrix.zeros(0, 0))


# homomorphisms -------------------------------------------------------------------


class NotWellDefined(ValueError):
    """A matrix does not descend to the quotient groups."""

    def __init__(self, message: str, relation_index: int = -1):
        super().__init__(message)
        self.relation_index = relation_index


@dataclass(frozen=True, eq=False)
class GroupHom:
    """A homomorphism given on ambient lattices; certified on construction.

    ``certificate`` has one column per relation of ``src``: ``matrix @ r_j ==
    dst.relations @ certificate[:, j]``.
    """

    src: PresentedGroup
    dst: PresentedGroup
    matrix: IntMatrix
    certificate: IntMatrix = field(default=None, repr=False)

    def __post_init__(self):
        if self.matrix.shape != (self.dst.ambient_rank, self.src.ambient_rank):
            raise ValueError(f"matrix shape {self.matrix.shape} does not fit "
                             f"{self.src.ambient_rank} -> {self.dst.ambient_rank}")
        if self.certificate is None:
            cols = []
            for j, r in enumerate(self.src.relations.columns()):
                image = self.matrix.apply(r)
                w = solve(self.dst.relations, image)
                if w is None:
                    raise NotWellDefined(f"relation {j} of the source maps to {image}, "
                                         "which is nonzero in the target", j)
                cols.append(w)
            object.__setattr__(self, "certificate",
                               IntMatrix.from_columns(cols, self.dst.relations.cols))

    def verify_certificate(self) -> bool:
        lhs = self.matrix @ self.src.relations
        rhs = self.dst.relations @ self.certificate
        return lhs == rhs

    def __call__(self, v: Sequence[int]) -> Vector:
        return self.matrix.apply(v)

    def compose(self, first: "GroupHom") -> "GroupHom":
        """``self ∘ first``."""
        if first.dst != self.src:
            raise ValueError("composition of homomorphisms with mismatched groups")
        return GroupHom(first.src, self.dst, self.matrix @ first.matrix,
                        self.certificate_for_composition(first))

    def certificate_for_composition(self, first: "GroupHom") -> IntMatrix:
        # g(f(r)) = g(R_mid c) = R_dst (cert_g c)
        return self.certificate @ first.certificate

    def __add__(self, other: "GroupHom") -> "GroupHom":
        self._check_parallel(other)
        return GroupHom(self.src, self.dst, self.matrix + other.matrix,
                        self.certificate + other.certificate)

    def __neg__(self) -> "GroupHom":
        return GroupHom(self.src, self.dst, -self.matrix, -self.certificate)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        return self + (-other)

    def _check_parallel(self, other: "GroupHom"):
        if self.src != other.src or self.dst != other.dst:
            raise ValueError("homomorphisms have different source or target")

    def is_zero(self) -> bool:
        return all(self.dst.is_zero_element(c) for c in self.matrix.columns())

    def equals(self, other: "GroupHom") -> bool:
        self._check_parallel(other)
        return (self - other).is_zero()


def identity_hom(g: PresentedGroup) -> GroupHom:
    return GroupHom(g, g, IntMatrix.identity(g.ambient_rank),
                    IntMatrix.identity(g.relations.cols))


def zero_hom(src: PresentedGroup, dst: PresentedGroup) -> GroupHom:
    return GroupHom(src, dst, IntMatrix.zeros(dst.ambient_rank, src.ambient_rank),
                    IntMatrix.zeros(dst.relations.cols, src.relations.cols))


def direct_sum_hom(homs: Sequence[GroupHom]) -> GroupHom:
    return GroupHom(direct_sum([f.src for f in homs]), direct_sum([f.dst for f in homs]),
                    block_diag([f.matrix for f in homs]),
                    block_diag([f.certificate for f in homs]))


def stack_homs(homs: Sequence[GroupHom], dst: Optional[PresentedGroup] = None) -> GroupHom:
    """``x -> (f1 x, f2 x, ...)`` into the direct sum of the targets."""
    src = homs[0].src
    if any(f.src != src for f in homs):
        raise ValueError("stacked homomorphisms need a common source")
    return GroupHom(src, dst or direct_sum([f.dst for f in homs]),
                    vstack([f.matrix for f in homs], src.ambient_rank))


def join_homs(homs: Sequence[GroupHom], src: Optional[PresentedGroup] = None) -> GroupHom:
    """``(x1, x2, ...) -> f1 x1 + f2 x2 + ...`` out of the direct sum of the sources."""
    dst = homs[0].dst
    if any(f.dst != dst for f in homs):
        raise ValueError("joined homomorphisms need a common target")
    return GroupHom(src or direct_sum([f.src for f in homs]), dst,
                    hstack([f.matrix for f in homs], dst.ambient_rank))


# subgroups and subquotients --------------------------------------------------------


class ContainmentError(ValueError):
    def __init__(self, message: str, witness: Vector = ()):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class Subgroup:
    """Subgroup of ``ambient`` generated by the columns of ``generators``."""

    ambient: PresentedGroup
    generators: IntMatrix

    def __post_init__(self):
        if self.generators.rows != self.ambient.ambient_rank:
            raise ValueError("generator length does not match the ambient rank")

    @classmethod
    def whole(cls, g: PresentedGroup) -> "Subgroup":
        return cls(g, IntMatrix.identity(g.ambient_rank))

    @classmethod
    def trivial(cls, g: PresentedGroup) -> "Subgroup":
        return cls(g, IntMatrix.zeros(g.ambient_rank, 0))

    @cached_property
    def _span(self) -> IntMatrix:
        gens = [c for c in self.generators.columns() if any(c)]
        gens += [c for c in self.ambient.relations.columns() if any(c)]
        return IntMatrix.from_columns(gens, self.ambient.ambient_rank)

    def contains(self, v: Sequence[int]) -> bool:
        if not any(v):
            return True
        return in_span(self._span, v)

    def non_member(self, vectors: Iterable[Sequence[int]]) -> Optional[Vector]:
        for v in vectors:
            if not self.contains(v):
                return tuple(v)
        return None

    def issubset(self, other: "Subgroup") -> bool:
        return other.non_member(self.generators.columns()) is None

    def equals(self, other: "Subgroup") -> bool:
        if self.ambient != other.ambient:
            raise ValueError("subgroups of different ambient groups")
        return self.issubset(other) and other.issubset(self)

    def __add__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.ambient, hstack([self.generators, other.generators],
                                             self.ambient.ambient_rank))

    def is_whole(self) -> bool:
        return Subgroup.whole(self.ambient).issubset(self)

    def is_trivial(self) -> bool:
        return all(self.ambient.is_zero_element(c) for c in self.generators.columns())

    @cached_property
    def view(self) -> "QuotientView":
        return QuotientView(self.ambient, self.generators,
                            IntMatrix.zeros(self.ambient.ambient_rank, 0))

    def as_group(self) -> PresentedGroup:
        return self.view.group


@dataclass(frozen=True, eq=False)
class Subquotient:
    """``numerator / denominator`` inside ``ambient``; containment checked."""

    ambient: PresentedGroup
    numerator: Subgroup
    denominator: Subgroup

    def __post_init__(self):
        bad = self.numerator.non_member(self.denominator.generators.columns())
        if bad is not None:
            raise ContainmentError(f"denominator generator {bad} is not in the numerator", bad)

    @cached_property
    def view(self) -> "QuotientView":
        return QuotientView(self.ambient, self.numerator.generators, self.denominator.generators)

    def as_group(self) -> PresentedGroup:
        return self.view.group

    @property
    def group(self) -> PresentedGroup:
        return self.view.group


class QuotientView:
    """Pruned diagonal presentation of ``span(N) / span(D)`` inside an ambient group.

    ``representatives`` holds one ambient vector per generator of ``group``;
    ``coords`` maps an ambient vector of the numerator to group coordinates.
    """

    def __init__(self, ambient: PresentedGroup, numerator: IntMatrix, denominator: IntMatrix):
        n = ambient.ambient_rank
        self.ambient = ambient
        self.numerator = numerator
        s = numerator.cols
        R = ambient.relations
        # y in Z^s is a relation iff N y lies in span(D) + span(R)
        ker = kernel_basis(hstack([numerator, denominator, R], n))
        rel = ker.select_rows(range(s))
        sd = smith(rel)
        diag = sd.diagonal
        kept, moduli = [], []
        for i in range(s):
            d = diag[i] if i < len(diag) else 0
            if d != 1:
                kept.append(i)
                moduli.append(d)
        self._U = sd.U.select_rows(kept)
        self.moduli = tuple(moduli)
        self.group = PresentedGroup(len(kept), IntMatrix.from_columns(
            [[d if k == i else 0 for k in range(len(kept))]
             for i, d in enumerate(moduli) if d], len(kept)))
        self.representatives = numerator @ sd.U_inv.select_columns(kept)
        self._lift = hstack([numerator, R], n)
        self._s = s

    def coords(self, v: Sequence[int]) -> Vector:
        if not any(v):
            return (0,) * self.group.ambient_rank
        x = solve(self._lift, v)
        if x is None:
            raise ContainmentError(f"{tuple(v)} is not in the numerator", tuple(v))
        w = self._U.apply(x[:self._s])
        return tuple(a % d if d else a for a, d in zip(w, self.moduli))

    def representative(self, j: int) -> Vector:
        return self.representatives.column(j)


# operations on homomorphisms -------------------------------------------------------


def hom_kernel(f: GroupHom) -> Subgroup:
    n = f.src.ambient_rank
    k = kernel_basis(hstack([f.matrix, f.dst.relations], f.dst.ambient_rank))
    return Subgroup(f.src, k.select_rows(range(n)))


def hom_image(f: GroupHom) -> Subgroup:
    return Subgroup(f.dst, f.matrix)


def hom_cokernel(f: GroupHom) -> PresentedGroup:
    return PresentedGroup(f.dst.ambient_rank,
                          hstack([f.dst.relations, f.matrix], f.dst.ambient_rank))


def image_of(f: GroupHom, sub: Subgroup) -> Subgroup:
    return Subgroup(f.dst, f.matrix @ sub.generators)


def preimage_of(f: GroupHom, sub: Subgroup) -> Subgroup:
    """Full preimage ``f^{-1}(sub)`` as a subgroup of the source."""
    n = f.src.ambient_rank
    k = kernel_basis(hstack([f.matrix, sub.generators, f.dst.relations], f.dst.ambient_rank))
    return Subgroup(f.src, k.select_rows(range(n)))


def is_injective(f: GroupHom) -> bool:
    return hom_kernel(f).is_trivial()


def is_surjective(f: GroupHom) -> bool:
    return hom_image(f).is_whole()


def is_isomorphism(f: GroupHom) -> bool:
    return is_injective(f) and is_surjective(f)


def inverse(f: GroupHom) -> GroupHom:
    """Inverse of an isomorphism, found by exact solving on the presentations."""
    if not is_injective(f):
        raise ValueError("homomorphism is not injective")
    m = f.dst.ambient_rank
    lift = hstack([f.matrix, f.dst.relations], m)
    cols = []
    for j in range(m):
        e = tuple(int(i == j) for i in range(m))
        x = solve(lift, e)
        if x is None:
            raise ValueError(f"generator {j} of the target is not in the image")
        cols.append(x[:f.src.ambient_rank])
    return GroupHom(f.dst, f.src, IntMatrix.from_columns(cols, f.src.ambient_rank))


def restrict(f: GroupHom, sub: Subgroup) -> GroupHom:
    """``f`` on the group ``sub`` (as presented by its quotient view)."""
    view = sub.view
    return GroupHom(view.group, f.dst, f.matrix @ view.representatives)


def induced_on_subquotient(f: GroupHom, S: Subquotient, T: Subquotient) -> GroupHom:
    """Map ``S.numerator/S.denominator -> T.numerator/T.denominator`` induced by ``f``."""
    for gen in S.numerator.generators.columns():
        if not T.numerator.contains(f(gen)):
            raise ContainmentError(f"numerator generator {gen} maps outside the target "
                                   "numerator", tuple(gen))
    for gen in S.denominator.generators.columns():
        if not T.denominator.contains(f(gen)):
            raise ContainmentError(f"denominator generator {gen} maps outside the target "
                                   "denominator", tuple(gen))
    sv, tv = S.view, T.view
    cols = [tv.coords(f(sv.representative(j))) for j in range(sv.group.ambient_rank)]
    return GroupHom(sv.group, tv.group, IntMatrix.from_columns(cols, tv.group.ambient_rank))


@dataclass(frozen=True)
class ExactnessResult:
    exact: bool
    witness: Optional[Vector] = None
    failure: Optional[str] = None

    def __bool__(self) -> bool:
        return self.exact


def is_exact_at(f: GroupHom, g: GroupHom) -> ExactnessResult:
    """Exactness of ``A --f--> B --g--> C`` at ``B``."""
    if f.dst != g.src:
        raise ValueError("middle groups of the two homomorphisms differ")
    for j, col in enumerate(f.matrix.columns()):
        if not g.dst.is_zero_element(g(col)):
            return ExactnessResult(False, col, "image not contained in kernel")
    im = hom_image(f)
    bad = im.non_member(hom_kernel(g).generators.columns())
    if bad is not None:
        return ExactnessResult(False, bad, "kernel not contained in image")
    return ExactnessResult(True)
