"""Homology theories given by graded coefficient groups, and their Postnikov truncations.

A theory ``h`` with coefficients ``h_q`` is evaluated on a pair of skeleta as

    h_n(X^a, X^b) = ⊕_q H_{n-q}(X^a, X^b; h_q),

and its truncation ``h^(r)`` keeps the summands with ``q <= r``.  Every value
keeps its summand decomposition and representative cycles so that maps
between values can be computed on elements.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .abgroup import (ContainmentError, ExactnessResult, GroupHom, IntMatrix, NotWellDefined,
                      PresentedGroup, Subgroup, block_diag, direct_sum, format_canonical,
                      hom_image, hom_kernel, inverse, is_exact_at, is_injective,
                      is_isomorphism, join_homs, stack_homs, zero_hom)
from .chain import (ChainMap, ComplexSES, Homology, connecting_hom, induced_on_homology,
                    tensor_free_complex)
from .cw import CWComplex, ComplexFormatError, parse_json, relative_chains_between


class TheoremViolation(AssertionError):
    """A computed instance contradicts one of the structural statements."""

    def __init__(self, statement: str, instance: str, witness=None):
        super().__init__(f"{statement} fails at {instance}"
                         + (f" (witness {witness})" if witness is not None else ""))
        self.statement = statement
        self.instance = instance
        self.witness = witness


# coefficients and theories -------------------------------------------------------


@dataclass(frozen=True)
class GradedCoefficients:
    """Coefficient groups ``h_q`` for ``q >= 0``, stored as ``(q, free_rank, torsion)``."""

    entries: tuple[tuple[int, int, tuple[int, ...]], ...]

    def __post_init__(self):
        normalized = []
        seen = set()
        for q, free_rank, torsion in self.entries:
            q, free_rank, torsion = int(q), int(free_rank), tuple(int(t) for t in torsion)
            if q < 0:
                raise ValueError("coefficients must be connective (q >= 0)")
            if free_rank < 0 or any(t < 2 for t in torsion):
                raise ValueError(f"invalid coefficient group at q = {q}")
            if q in seen:
                raise ValueError(f"coefficient degree {q} given twice")
            seen.add(q)
            if free_rank or torsion:
                normalized.append((q, free_rank, torsion))
        object.__setattr__(self, "entries", tuple(sorted(normalized)))

    @classmethod
    def of(cls, groups: dict) -> "GradedCoefficients":
        """``{q: (free_rank, torsion)}`` or ``{q: "Z"}`` / ``{q: "Z/2"}``."""
        entries = []
        for q, g in groups.items():
            if isinstance(g, str):
                g = _parse_cyclic(g)
            entries.append((q, g[0], tuple(g[1])))
        return cls(tuple(entries))

    @property
    def support(self) -> list[int]:
        return [q for q, _, _ in self.entries]

    @property
    def q_max(self) -> int:
        return self.entries[-1][0] if self.entries else -1

    @property
    def q_min(self) -> int:
        return self.entries[0][0] if self.entries else 0

    @property
    def connective(self) -> bool:
        return True

    @cached_property
    def _groups(self) -> dict[int, PresentedGroup]:
        return {q: PresentedGroup.from_invariants(f, t) for q, f, t in self.entries}

    def __getitem__(self, q: int) -> PresentedGroup:
        return self._groups.get(q, PresentedGroup.zero())

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return ", ".join(f"{format_canonical(f, t)}@{q}" for q, f, t in self.entries)


def _parse_cyclic(text: str) -> tuple[int, tuple[int, ...]]:
    text = text.strip()
    if text == "Z":
        return 1, ()
    if text.startswith("Z^"):
        return int(text[2:]), ()
    if text.startswith("Z/"):
        return 0, (int(text[2:]),)
    if text == "0":
        return 0, ()
    raise ValueError(f"cannot parse coefficient group {text!r}")


@dataclass(frozen=True)
class Theory:
    """A GEM theory; ``level`` is the truncation level (``None`` for no truncation)."""

    coeffs: GradedCoefficients
    level: Optional[int] = None
    name: str = field(default="", compare=False)

    def truncate(self, r: int) -> "Theory":
        level = r if self.level is None else min(self.level, r)
        return Theory(self.coeffs, level, self.name)

    @property
    def degrees(self) -> list[int]:
        return [q for q in self.coeffs.support if self.level is None or q <= self.level]

    def coefficient(self, q: int) -> PresentedGroup:
        if self.level is not None and q > self.level:
            return PresentedGroup.zero()
        return self.coeffs[q]

    @property
    def q_max(self) -> int:
        d = self.degrees
        return d[-1] if d else -1

    def __str__(self) -> str:
        label = self.name or str(self.coeffs)
        return label if self.level is None else f"{label}^({self.level})"


def truncate(h: Theory, r: int) -> Theory:
    return h.truncate(r)


def theory(groups: dict, name: str = "") -> Theory:
    return Theory(GradedCoefficients.of(groups), None, name)


# the default battery used by the verification suite
BUILTIN_THEORIES = {
    "Z": theory({0: "Z"}, "Z"),
    "Z2": theory({0: "Z/2"}, "Z2"),
    "Z+Z2[1]": theory({0: "Z", 1: "Z/2"}, "Z+Z2[1]"),
    "Z+Z[2]+Z2[3]": theory({0: "Z", 2: "Z", 3: "Z/2"}, "Z+Z[2]+Z2[3]"),
    "MSO5": theory({0: "Z", 4: "Z", 5: "Z/2"}, "MSO5"),
}


# file format ---------------------------------------------------------------------


def dumps_theory(h: Theory) -> str:
    lines = ["{", '  "coefficients": [']
    body = [f'    {{"q": {q}, "free_rank": {f}, "torsion": [{", ".join(map(str, t))}]}}'
            for q, f, t in h.coeffs.entries]
    lines.append(",\n".join(body))
    lines.append("  ]")
    lines.append("}")
    if not body:
        lines = ["{", '  "coefficients": []', "}"]
    return "\n".join(lines) + "\n"


def theory_from_object(obj) -> Theory:
    if not isinstance(obj, dict) or "coefficients" not in obj:
        raise ComplexFormatError("missing field", "coefficients")
    extra = set(obj) - {"coefficients"}
    if extra:
        raise ComplexFormatError("unknown field", sorted(extra)[0])
    items = obj["coefficients"]
    if not isinstance(items, list):
        raise ComplexFormatError("expected a list", "coefficients")
    entries = []
    for i, item in enumerate(items):
        where = f"coefficients[{i}]"
        if not isinstance(item, dict):
            raise ComplexFormatError("expected an object", where)
        for key in ("q", "free_rank", "torsion"):
            if key not in item:
                raise ComplexFormatError("missing field", f"{where}.{key}")
        q, f, t = item["q"], item["free_rank"], item["torsion"]
        if isinstance(q, bool) or not isinstance(q, int) or q < 0:
            raise ComplexFormatError("expected an integer >= 0", f"{where}.q")
        if isinstance(f, bool) or not isinstance(f, int) or f < 0:
            raise ComplexFormatError("expected an integer >= 0", f"{where}.free_rank")
        if not isinstance(t, list) or any(isinstance(x, bool) or not isinstance(x, int) or x < 2
                                          for x in t):
            raise ComplexFormatError("expected a list of integers > 1", f"{where}.torsion")
        entries.append((q, f, tuple(t)))
    qs = [e[0] for e in entries]
    if len(set(qs)) != len(qs):
        raise ComplexFormatError("duplicate degree", "coefficients")
    return Theory(GradedCoefficients(tuple(entries)))


def loads_theory(text: str) -> Theory:
    return theory_from_object(parse_json(text, "theory"))


def parse_inline_coeffs(text: str) -> Theory:
    """``"0:Z,1:Z/2"`` style coefficient list."""
    groups = {}
    try:
        for part in filter(None, (p.strip() for p in text.split(","))):
            q, g = part.split(":")
            groups[int(q)] = _parse_cyclic(g)
        return Theory(GradedCoefficients.of(groups), None, text)
    except ValueError as exc:
        raise ComplexFormatError(str(exc), "coeffs") from exc


# evaluation ---------------------------------------------------------------------


class SkeletalCache:
    """Per-complex memo of relative chain complexes, homology and induced maps.

    Entries are written once and never mutated; concurrent readers at worst
    compute an entry twice.
    """

    def __init__(self, X: CWComplex):
        self.X = X
        self.store: dict = {}

    def norm(self, a: int, b: int) -> tuple[int, int]:
        d = self.X.dimension
        a = max(-1, min(a, d))
        b = max(-1, min(b, d, a))
        return a, b

    def chains(self, a: int, b: int, M: PresentedGroup):
        key = ("C", a, b, M)
        c = self.store.get(key)
        if c is None:
            c = tensor_free_complex(relative_chains_between(self.X, a, b), M)
            self.store[key] = c
        return c

    def homology(self, a: int, b: int, M: PresentedGroup, k: int) -> Homology:
        return self.chains(a, b, M).homology(k)

    def pair_map(self, src: tuple[int, int], dst: tuple[int, int], M: PresentedGroup,
                 k: int) -> GroupHom:
        key = ("P", src, dst, M, k)
        f = self.store.get(key)
        if f is None:
            f = induced_on_homology(self.pair_chain_map(src, dst, M), k)
            self.store[key] = f
        return f

    def pair_chain_map(self, src, dst, M) -> ChainMap:
        key = ("PC", src, dst, M)
        f = self.store.get(key)
        if f is None:
            (a, b), (a2, b2) = src, dst
            if a > a2 or b > b2:
                raise ValueError(f"no map of pairs {src} -> {dst}")
            C, D = self.chains(a, b, M), self.chains(a2, b2, M)
            comps = {}
            for n in C.degrees:
                if b2 < n <= a:
                    g = C.group(n)
                    comps[n] = GroupHom(g, D.group(n), IntMatrix.identity(g.ambient_rank),
                                        IntMatrix.identity(g.relations.cols))
            f = ChainMap(C, D, comps)
            self.store[key] = f
        return f

    def triple_ses(self, a: int, b: int, c: int, M: PresentedGroup) -> ComplexSES:
        key = ("T", a, b, c, M)
        s = self.store.get(key)
        if s is None:
            s = ComplexSES(self.pair_chain_map((b, c), (a, c), M),
                           self.pair_chain_map((a, c), (a, b), M))
            self.store[key] = s
        return s

    def boundary(self, a: int, b: int, c: int, M: PresentedGroup, k: int) -> GroupHom:
        key = ("B", a, b, c, M, k)
        f = self.store.get(key)
        if f is None:
            f = connecting_hom(self.triple_ses(a, b, c, M), k)
            self.store[key] = f
        return f


_CACHES: dict = {}


def cache_for(X: CWComplex) -> SkeletalCache:
    c = _CACHES.get(X)
    if c is None:
        c = SkeletalCache(X)
        _CACHES[X] = c
    return c


def clear_caches() -> None:
    _CACHES.clear()


@dataclass(frozen=True, eq=False)
class TheoryValue:
    """``h_n(X^a, X^b)`` as a direct sum over ``q`` of ``H_{n-q}(X^a, X^b; h_q)``."""

    theory: Theory
    X: CWComplex
    pair: tuple[int, int]
    n: int
    summands: tuple[tuple[int, Homology], ...]

    @cached_property
    def group(self) -> PresentedGroup:
        return direct_sum([H.group for _, H in self.summands])

    @cached_property
    def offsets(self) -> dict[int, tuple[int, int]]:
        out, start = {}, 0
        for q, H in self.summands:
            size = H.group.ambient_rank
            out[q] = (start, start + size)
            start += size
        return out

    def summand(self, q: int) -> Optional[Homology]:
        for q2, H in self.summands:
            if q2 == q:
                return H
        return None

    def block(self, v: Sequence[int], q: int) -> tuple:
        lo, hi = self.offsets[q]
        return tuple(v[lo:hi])

    def __str__(self) -> str:
        return str(self.group)


def evaluate(h: Theory, X: CWComplex, n: int, pair: tuple[int, int] = None) -> TheoryValue:
    """``h_n(X^a, X^b)``; ``pair`` defaults to ``(dim X, -1)``, i.e. ``h_n(X)``."""
    cache = cache_for(X)
    a, b = cache.norm(*(pair if pair is not None else (X.dimension, -1)))
    key = ("V", h, a, b, n)
    v = cache.store.get(key)
    if v is None:
        summands = tuple((q, cache.homology(a, b, h.coefficient(q), n - q)) for q in h.degrees)
        v = TheoryValue(h, X, (a, b), n, summands)
        cache.store[key] = v
    return v


def skeleton_value(h: Theory, X: CWComplex, n: int, p: int) -> TheoryValue:
    """``h_n(X^p)``."""
    return evaluate(h, X, n, (p, -1))


def pair_map(h: Theory, X: CWComplex, n: int, src: tuple[int, int],
             dst: tuple[int, int]) -> GroupHom:
    """Map ``h_n(X^a, X^b) -> h_n(X^a', X^b')`` induced by inclusion of pairs."""
    cache = cache_for(X)
    src, dst = cache.norm(*src), cache.norm(*dst)
    key = ("HP", h, src, dst, n)
    f = cache.store.get(key)
    if f is None:
        V, W = evaluate(h, X, n, src), evaluate(h, X, n, dst)
        f = _block_hom(V, W, {q: cache.pair_map(src, dst, h.coefficient(q), n - q)
                              for q in h.degrees})
        cache.store[key] = f
    return f


def truncation_map(h: Theory, target: Theory, X: CWComplex, n: int,
                   pair: tuple[int, int] = None) -> GroupHom:
    """Natural map ``h_n(pair) -> target_n(pair)``; ``target`` must be a truncation of ``h``."""
    if target.coeffs != h.coeffs or (h.level is not None and
                                    (target.level is None or target.level > h.level)):
        raise ValueError(f"{target} is not a truncation of {h}")
    cache = cache_for(X)
    V, W = evaluate(h, X, n, pair), evaluate(target, X, n, pair)
    key = ("TR", h, target, V.pair, n)
    f = cache.store.get(key)
    if f is None:
        blocks = {}
        for q in target.degrees:
            g = V.summand(q).group
            blocks[q] = GroupHom(g, g, IntMatrix.identity(g.ambient_rank),
                                 IntMatrix.identity(g.relations.cols))
        f = _block_hom(V, W, blocks)
        cache.store[key] = f
    return f


def boundary_map(h: Theory, X: CWComplex, n: int, triple: tuple[int, int, int]) -> GroupHom:
    """Connecting map ``h_n(X^a, X^b) -> h_{n-1}(X^b, X^c)`` of a triple."""
    cache = cache_for(X)
    a, b = cache.norm(triple[0], triple[1])
    _, c = cache.norm(b, triple[2])
    key = ("HB", h, (a, b, c), n)
    f = cache.store.get(key)
    if f is None:
        V, W = evaluate(h, X, n, (a, b)), evaluate(h, X, n - 1, (b, c))
        f = _block_hom(V, W, {q: cache.boundary(a, b, c, h.coefficient(q), n - q)
                              for q in h.degrees})
        cache.store[key] = f
    return f


def _block_hom(V: TheoryValue, W: TheoryValue, blocks: dict[int, GroupHom]) -> GroupHom:
    rows = []
    for qw, Hw in W.summands:
        row = []
        for qv, Hv in V.summands:
            f = blocks.get(qw) if qw == qv else None
            if f is not None:
                row.append(f.matrix)
            else:
                row.append(IntMatrix.zeros(Hw.group.ambient_rank, Hv.group.ambient_rank))
        rows.append(row)
    m = IntMatrix.zeros(W.group.ambient_rank, V.group.ambient_rank)
    if rows and V.summands:
        data = []
        for row in rows:
            for i in range(row[0].rows):
                data.append(sum((blk.row(i) for blk in row), ()))
        m = IntMatrix(data, W.group.ambient_rank, V.group.ambient_rank)
    return GroupHom(V.group, W.group, m)


# the natural transformation Φ and the long exact sequence ----------------------------


def phi(h: Theory, r: int, X: CWComplex, n: int, top: Optional[int] = None,
        skeleton_index: Optional[int] = None) -> GroupHom:
    """``Φ: h^(r)_n(X) -> h_{n-1}(X^{n-r-1})``.

    The composite ``h^(r)_n(X) -> h^(r)_n(X, X^s) <- h_n(X, X^s) -> h_{n-1}(X^s)``
    with ``s = n - r - 1``; the middle isomorphism is inverted by exact solving.
    ``top`` replaces ``X`` by its skeleton ``X^top``; ``skeleton_index``
    overrides ``s`` (the long exact sequence keeps it fixed).
    """
    t = X.dimension if top is None else top
    s = n - r - 1 if skeleton_index is None else skeleton_index
    hr = h.truncate(r)
    to_rel = pair_map(hr, X, n, (t, -1), (t, s))
    middle = truncation_map(h, hr, X, n, (t, s))
    try:
        back = inverse(middle)
    except ValueError as exc:
        raise TheoremViolation("relative isomorphism", f"{h}, r={r}, n={n}, s={s}",
                               str(exc)) from exc
    bd = boundary_map(h, X, n, (t, s, -1))
    return bd.compose(back.compose(to_rel))


@dataclass
class ExactSequence:
    terms: list[tuple[str, PresentedGroup]]
    maps: list[tuple[str, Optional[GroupHom]]]
    problems: list[tuple[str, str]] = field(default_factory=list)

    def positions(self) -> Iterable[tuple[int, str]]:
        for i in range(1, len(self.terms) - 1):
            yield i, self.terms[i][0]

    def check(self) -> list[tuple[str, ExactnessResult]]:
        out = []
        for i, label in self.positions():
            f, g = self.maps[i - 1][1], self.maps[i][1]
            if f is None or g is None:
                out.append((label, ExactnessResult(False, None, "map not well defined")))
                continue
            out.append((label, is_exact_at(f, g)))
        return out


def les_postnikov(h: Theory, r: int, X: CWComplex, n: int, bottom: int = -1,
                  sabotage: Optional[str] = None) -> ExactSequence:
    """The sequence ``h_k(X^s) -> h^(r)_k(X^s) ⊕ h_k(X) -> h^(r)_k(X) -> h_{k-1}(X^s)``.

    ``s = n - r - 1`` is fixed by the top degree ``n``; terms run from
    ``h_n(X^s)`` down to degree ``bottom``.  At the top the first summand
    ``h^(r)_n(X^s)`` vanishes and the arrow out of ``h_n(X)`` is the truncation.
    """
    hr = h.truncate(r)
    d = X.dimension
    s = n - r - 1
    terms: list = []
    maps: list = []
    seq = ExactSequence(terms, maps)

    def build(label, fn):
        try:
            return fn()
        except NotWellDefined as exc:
            seq.problems.append((label, str(exc)))
            return None

    for k in range(n, bottom - 1, -1):
        A = skeleton_value(h, X, k, s).group
        Ar = skeleton_value(hr, X, k, s).group
        Xk = evaluate(h, X, k).group
        C = evaluate(hr, X, k).group
        B = direct_sum([Ar, Xk])
        if sabotage == "drop-relation" and C.relations.cols:
            C = PresentedGroup(C.ambient_rank, C.relations.select_columns(
                range(1, C.relations.cols)))
        trunc_s = truncation_map(h, hr, X, k, (s, -1))
        incl = pair_map(h, X, k, (s, -1), (d, -1))
        incl_r = pair_map(hr, X, k, (s, -1), (d, -1))
        trunc_x = truncation_map(h, hr, X, k)
        if terms:
            prev_label, prev_group = terms[-1]
            maps.append((f"Φ_{k + 1}", build(f"Φ_{k + 1}", lambda: GroupHom(
                prev_group, A, phi(h, r, X, k + 1, skeleton_index=s).matrix))))
        terms.append((f"h_{k}(X^{s})", A))
        maps.append((f"(τ, i)_{k}", build(f"(τ, i)_{k}", lambda: stack_homs(
            [trunc_s, incl], B))))
        terms.append((f"h^({r})_{k}(X^{s}) ⊕ h_{k}(X)", B))
        maps.append((f"(i, -τ)_{k}", build(f"(i, -τ)_{k}", lambda: GroupHom(
            B, C, join_homs([incl_r, -trunc_x]).matrix))))
        terms.append((f"h^({r})_{k}(X)", C))
    return seq


def verify_les(h: Theory, r: int, X: CWComplex, n: int, bottom: int = -1,
               sabotage: Optional[str] = None) -> list[tuple[str, str]]:
    """Failures of exactness as ``(position, description)``; empty when exact."""
    try:
        seq = les_postnikov(h, r, X, n, bottom, sabotage)
    except TheoremViolation as exc:
        return [("Φ", str(exc))]
    failures = [(label, msg) for label, msg in seq.problems]
    for label, res in seq.check():
        if not res:
            failures.append((label, f"{res.failure}; witness {res.witness}"))
    return failures


# lemma checks ---------------------------------------------------------------------


@dataclass
class CheckReport:
    statement: str
    violations: list[tuple[str, object]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    instances: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def check_trivial_truncation(h: Theory, X: CWComplex, r: int,
                             n_max: Optional[int] = None) -> CheckReport:
    """``h^(r)_n(X^k) = 0`` whenever ``n > k + r``."""
    rep = CheckReport("trivial truncation")
    hr = h.truncate(r)
    n_max = X.dimension + max(h.q_max, 0) + 2 if n_max is None else n_max
    for k in range(-1, X.dimension + 1):
        for n in range(k + r + 1, n_max + 1):
            rep.instances += 1
            g = skeleton_value(hr, X, n, k).group
            if not g.is_trivial():
                rep.violations.append((f"n={n}, k={k}", str(g)))
    return rep


def cellular_tensor_group(X: CWComplex, M: PresentedGroup, k: int) -> PresentedGroup:
    return cache_for(X).chains(X.dimension, -1, M).group(k)


def check_relative_cellular(h: Theory, X: CWComplex, r: int, k: int) -> CheckReport:
    """``h^(r)_{r+k}(X^k, X^{k-1}) ≅ h_r ⊗ C_k`` and ``h^(r)_{r+k}(X^k) ≅ ker(h_r ⊗ ∂_k)``.

    Besides comparing canonical forms, builds the comparison maps through the
    triple ``(X^k, X^{k-1}, X^{k-2})`` and certifies them.
    """
    rep = CheckReport("relative cellular")
    rep.instances = 1
    hr = h.truncate(r)
    M = h.coefficient(r)
    n = r + k
    cache = cache_for(X)
    full = cache.chains(X.dimension, -1, M)
    tensor_k = full.group(k)
    where = f"r={r}, k={k}"

    rel = evaluate(hr, X, n, (k, k - 1))
    if rel.group.canonical_form != tensor_k.canonical_form:
        rep.violations.append((where, f"h^(r)(X^k,X^k-1) = {rel.group} but h_r⊗C_k = {tensor_k}"))
        return rep
    # cellular identification: the q = r summand is H_k of a complex concentrated in degree k
    H = rel.summand(r)
    lo, hi = rel.offsets.get(r, (0, 0))
    ident = IntMatrix.zeros(tensor_k.ambient_rank, rel.group.ambient_rank)
    if H is not None and hi > lo:
        cols = [tuple(0 for _ in range(tensor_k.ambient_rank))] * lo + \
            list(H.representatives.columns()) + \
            [tuple(0 for _ in range(tensor_k.ambient_rank))] * (rel.group.ambient_rank - hi)
        ident = IntMatrix.from_columns(cols, tensor_k.ambient_rank)
    try:
        iota = GroupHom(rel.group, tensor_k, ident)
    except NotWellDefined as exc:
        rep.violations.append((where, f"cellular identification not well defined: {exc}"))
        return rep
    if not is_isomorphism(iota):
        rep.violations.append((where, "cellular identification is not an isomorphism"))

    absolute = skeleton_value(hr, X, n, k)
    kernel = hom_kernel(full.d(k))
    if absolute.group.canonical_form != kernel.as_group().canonical_form:
        rep.violations.append((where, f"h^(r)(X^k) = {absolute.group} but kernel = "
                                      f"{kernel.as_group()}"))
        return rep
    to_k2 = pair_map(hr, X, n, (k, -1), (k, k - 2))
    if not is_isomorphism(to_k2):
        rep.violations.append((where, "h^(r)(X^k) -> h^(r)(X^k, X^k-2) is not an isomorphism"))
    k2_to_k1 = pair_map(hr, X, n, (k, k - 2), (k, k - 1))
    if not is_injective(k2_to_k1):
        rep.violations.append((where, "triple sequence map is not injective"))
    comparison = iota.compose(k2_to_k1.compose(to_k2))
    if not is_injective(comparison):
        rep.violations.append((where, "comparison map h^(r)(X^k) -> h_r⊗C_k is not injective"))
    elif not hom_image(comparison).equals(kernel):
        rep.violations.append((where, "image of the comparison map differs from ker(h_r⊗∂_k)"))
    return rep


def check_relative_iso(h: Theory, X: CWComplex, r: int, k: int, n: int) -> tuple[bool, object]:
    """Whether ``h_n(X, X^k) -> h^(r)_n(X, X^k)`` is an isomorphism, with a witness if not."""
    f = truncation_map(h, h.truncate(r), X, n, (X.dimension, k))
    ker = hom_kernel(f)
    for v in ker.generators.columns():
        if not f.src.is_zero_element(v):
            return False, ("kernel", v)
    bad = hom_image(f).non_member(IntMatrix.identity(f.dst.ambient_rank).columns())
    if bad is not None:
        return False, ("cokernel", bad)
    return True, None


def check_image_identity(h: Theory, r: int, X: CWComplex, n: int) -> CheckReport:
    """``ker(h_n(X) -> h^(r)_n(X)) = ker(h_n(X) -> h_n(X, X^s)) = im(h_n(X^s) -> h_n(X))``."""
    rep = CheckReport("image identity")
    rep.instances = 1
    d = X.dimension
    s = n - r - 1
    where = f"r={r}, n={n}"
    trunc = truncation_map(h, h.truncate(r), X, n)
    to_rel = pair_map(h, X, n, (d, -1), (d, s))
    incl = pair_map(h, X, n, (s, -1), (d, -1))
    k1, k2, im = hom_kernel(trunc), hom_kernel(to_rel), hom_image(incl)
    if not k1.equals(im):
        rep.violations.append((where, "ker(truncation) != im(h_n(X^s) -> h_n(X))"))
    if not k2.equals(im):
        rep.violations.append((where, "ker(h_n(X) -> h_n(X,X^s)) != im(h_n(X^s) -> h_n(X))"))
    if hom_image(trunc).as_group().canonical_form != hom_image(to_rel).as_group().canonical_form:
        rep.violations.append((where, "the two images are not isomorphic"))
    return rep


def check_phi_naturality(h: Theory, r: int, X: CWComplex, n: int, m: int) -> bool:
    """Φ commutes with the inclusion ``X^m -> X`` (``Φ`` on ``X^m`` has skeleton ``min(s, m)``)."""
    d = X.dimension
    s = n - r - 1
    hr = h.truncate(r)
    phi_m = phi(h, r, X, n, top=m)
    phi_x = phi(h, r, X, n)
    lhs = phi_x.compose(pair_map(hr, X, n, (m, -1), (d, -1)))
    rhs = pair_map(h, X, n - 1, (min(s, m), -1), (s, -1)).compose(phi_m)
    return lhs.equals(rhs)
