"""Chain complexes of presented groups and their homology."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .abgroup import (ContainmentError, GroupHom, IntMatrix, PresentedGroup, QuotientView,
                      Subgroup, Subquotient, direct_sum, direct_sum_hom, hom_kernel, hstack,
                      is_exact_at, is_injective, is_surjective, kron_identity, solve, zero_hom)

_ZERO = PresentedGroup.zero()


class ChainComplexError(ValueError):
    def __init__(self, message: str, degree: int):
        super().__init__(message)
        self.degree = degree


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """Groups ``C_n`` and differentials ``d_n: C_n -> C_{n-1}``.

    Degrees not listed carry the zero group.  ``d_{n-1} ∘ d_n = 0`` is checked
    on construction.
    """

    groups: Mapping[int, PresentedGroup]
    differentials: Mapping[int, GroupHom] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for n, d in self.differentials.items():
            if d.src != self.group(n) or d.dst != self.group(n - 1):
                raise ChainComplexError(f"differential d_{n} has the wrong source or target", n)
        for n in sorted(self.differentials):
            if n - 1 in self.differentials:
                dd = self.differentials[n - 1].compose(self.differentials[n])
                if not dd.is_zero():
                    raise ChainComplexError(f"d_{n - 1} ∘ d_{n} is nonzero", n)

    @property
    def degrees(self) -> range:
        if not self.groups:
            return range(0)
        return range(min(self.groups), max(self.groups) + 1)

    def group(self, n: int) -> PresentedGroup:
        return self.groups.get(n, _ZERO)

    def d(self, n: int) -> GroupHom:
        f = self.differentials.get(n)
        if f is None:
            f = zero_hom(self.group(n), self.group(n - 1))
        return f

    def cycles(self, n: int) -> Subgroup:
        return hom_kernel(self.d(n))

    def boundaries(self, n: int) -> Subgroup:
        return Subgroup(self.group(n), self.d(n + 1).matrix)

    def homology(self, n: int) -> "Homology":
        h = self._cache.get(("H", n))
        if h is None:
            h = Homology(self, n)
            self._cache[("H", n)] = h
        return h


class Homology:
    """``H_n = ker d_n / im d_{n+1}`` with representative cycles.

    ``group`` is a diagonal presentation; ``representatives`` are ambient
    vectors of ``C_n``, one per generator; ``coords`` classifies a cycle.
    """

    def __init__(self, complex: ChainComplex, n: int):
        self.complex = complex
        self.degree = n
        self.subquotient = Subquotient(complex.group(n), complex.cycles(n),
                                       complex.boundaries(n))
        self._view: QuotientView = self.subquotient.view

    @property
    def group(self) -> PresentedGroup:
        return self._view.group

    @property
    def representatives(self) -> IntMatrix:
        return self._view.representatives

    def coords(self, cycle) -> tuple:
        return self._view.coords(cycle)

    def __iter__(self):
        yield self.group
        yield self.representatives


def homology(C: ChainComplex, n: int) -> Homology:
    return C.homology(n)


@dataclass(frozen=True, eq=False)
class ChainMap:
    src: ChainComplex
    dst: ChainComplex
    components: Mapping[int, GroupHom] = field(default_factory=dict)
    check: bool = True

    def __post_init__(self):
        for n, f in self.components.items():
            if f.src != self.src.group(n) or f.dst != self.dst.group(n):
                raise ChainComplexError(f"component {n} has the wrong source or target", n)
        if self.check:
            degrees = set(self.src.degrees) | set(self.dst.degrees)
            for n in sorted(degrees):
                lhs = self.dst.d(n).compose(self.component(n))
                rhs = self.component(n - 1).compose(self.src.d(n))
                if not lhs.equals(rhs):
                    raise ChainComplexError(f"chain map does not commute with d_{n}", n)

    def component(self, n: int) -> GroupHom:
        f = self.components.get(n)
        if f is None:
            f = zero_hom(self.src.group(n), self.dst.group(n))
        return f

    def compose(self, first: "ChainMap") -> "ChainMap":
        degrees = set(first.src.degrees) | set(self.dst.degrees)
        return ChainMap(first.src, self.dst,
                        {n: self.component(n).compose(first.component(n)) for n in degrees},
                        check=False)


def induced_on_homology(f: ChainMap, n: int) -> GroupHom:
    hs, ht = f.src.homology(n), f.dst.homology(n)
    fn = f.component(n)
    reps = hs.representatives
    cols = [ht.coords(fn(reps.column(j))) for j in range(hs.group.ambient_rank)]
    return GroupHom(hs.group, ht.group, IntMatrix.from_columns(cols, ht.group.ambient_rank))


@dataclass(frozen=True, eq=False)
class ComplexSES:
    """``0 -> A --inclusion--> B --projection--> C -> 0``, exact in each degree."""

    inclusion: ChainMap
    projection: ChainMap
    check: bool = True

    def __post_init__(self):
        if self.inclusion.dst is not self.projection.src:
            raise ValueError("inclusion target and projection source differ")
        if self.check:
            B = self.inclusion.dst
            degrees = set(self.inclusion.src.degrees) | set(B.degrees) | \
                set(self.projection.dst.degrees)
            for n in sorted(degrees):
                i, p = self.inclusion.component(n), self.projection.component(n)
                if not is_injective(i):
                    raise ChainComplexError(f"inclusion is not injective in degree {n}", n)
                if not is_surjective(p):
                    raise ChainComplexError(f"projection is not surjective in degree {n}", n)
                if not is_exact_at(i, p):
                    raise ChainComplexError(f"sequence is not exact in degree {n}", n)

    @property
    def sub(self) -> ChainComplex:
        return self.inclusion.src

    @property
    def middle(self) -> ChainComplex:
        return self.inclusion.dst

    @property
    def quotient(self) -> ChainComplex:
        return self.projection.dst


class LiftingError(ValueError):
    pass


def connecting_hom(s: ComplexSES, n: int) -> GroupHom:
    """Snake-lemma map ``H_n(C) -> H_{n-1}(A)``: lift, apply ``d``, pull back.

    Lifts use the particular solution returned by exact solving, so the
    result is deterministic; no sign is introduced.
    """
    hc = s.quotient.homology(n)
    ha = s.sub.homology(n - 1)
    p = s.projection.component(n)
    i = s.inclusion.component(n - 1)
    dB = s.middle.d(n)
    B_prev = s.middle.group(n - 1)
    lift_p = hstack([p.matrix, s.quotient.group(n).relations], p.dst.ambient_rank)
    lift_i = hstack([i.matrix, B_prev.relations], B_prev.ambient_rank)
    cols = []
    for j in range(hc.group.ambient_rank):
        z = hc.representatives.column(j)
        b = solve(p.matrix, z)
        if b is None:
            x = solve(lift_p, z)
            if x is None:
                raise LiftingError(f"cycle {z} does not lift through the projection")
            b = x[:p.src.ambient_rank]
        db = dB(b)
        a = solve(lift_i, db)
        if a is None:
            raise LiftingError(f"boundary {db} is not in the image of the inclusion")
        a = a[:i.src.ambient_rank]
        try:
            cols.append(ha.coords(a))
        except ContainmentError as exc:
            raise LiftingError(f"pulled-back element {a} is not a cycle") from exc
    return GroupHom(hc.group, ha.group, IntMatrix.from_columns(cols, ha.group.ambient_rank))


def is_free_presentation(g: PresentedGroup) -> bool:
    return g.relations.is_zero()


def tensor_group(rank: int, M: PresentedGroup) -> PresentedGroup:
    """``Z^rank ⊗ M`` as ``rank`` copies of ``M``."""
    return direct_sum([M] * rank) if rank else _ZERO


def tensor_free_complex(C: ChainComplex, M: PresentedGroup) -> ChainComplex:
    """``C ⊗ M`` for a complex of free groups."""
    for n in C.degrees:
        if not is_free_presentation(C.group(n)):
            raise ValueError(f"C_{n} is not presented as a free group")
    m = M.ambient_rank
    groups = {n: tensor_group(C.group(n).ambient_rank, M) for n in C.degrees
              if C.group(n).ambient_rank}
    diffs = {}
    for n, d in C.differentials.items():
        if n in groups and n - 1 in groups:
            src, dst = groups[n], groups[n - 1]
            cert = kron_identity(d.matrix, M.relations.cols)
            diffs[n] = GroupHom(src, dst, kron_identity(d.matrix, m), cert)
    return ChainComplex(groups, diffs)


def direct_sum_complex(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    degrees = set(C.degrees) | set(D.degrees)
    groups = {n: direct_sum([C.group(n), D.group(n)]) for n in degrees}
    diffs = {n: direct_sum_hom([C.d(n), D.d(n)]) for n in degrees}
    for n in list(diffs):
        if n - 1 not in groups:
            groups[n - 1] = direct_sum([C.group(n - 1), D.group(n - 1)])
    return ChainComplex(groups, diffs)


def free_complex(boundaries: Mapping[int, IntMatrix],
                 ranks: Optional[Mapping[int, int]] = None) -> ChainComplex:
    """Free complex from integer boundary matrices ``d_n`` (rows ``C_{n-1}``)."""
    ranks = dict(ranks or {})
    for n, d in boundaries.items():
        ranks.setdefault(n, d.cols)
        ranks.setdefault(n - 1, d.rows)
    groups = {n: PresentedGroup.free(r) for n, r in ranks.items()}
    diffs = {n: GroupHom(groups[n], groups[n - 1], d) for n, d in boundaries.items()}
    return ChainComplex(groups, diffs)
