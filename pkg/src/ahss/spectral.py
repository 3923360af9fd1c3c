"""Atiyah-Hirzebruch pages of the skeletal filtration, computed two ways.

``page_couple`` builds the classical subquotient

    E^r_{p,q} = im(h(X^p, X^{p-r}) -> h(X^p, X^{p-1})) / im(∂: h(X^{p+r-1}, X^p) -> h(X^p, X^{p-1}))

and ``page_truncation`` the image of ``h^(q+r-2)_{p+q}(X^p) -> h^(q)_{p+q}(X^{p+r-1})``.
``compare_page_forms`` builds the explicit isomorphism between them through
``h^(q)_{p+q}(X^{p+r-1}, X^{p-1})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .abgroup import (ContainmentError, GroupHom, IntMatrix, NotWellDefined, PresentedGroup,
                      Subgroup, Subquotient, hom_image, hom_kernel, hstack,
                      induced_on_subquotient, is_isomorphism, preimage_of, restrict, solve)
from .theory import (Theory, TheoremViolation, boundary_map, cache_for, evaluate, pair_map,
                     phi, truncation_map)
from .cw import CWComplex

SABOTAGE_MODES = ("drop-relation", "shift-skeleton", "drop-denominator")


def stable_page(X: CWComplex) -> int:
    return max(X.dimension, 0) + 2


@dataclass
class CouplePage:
    p: int
    q: int
    r: int
    subquotient: Subquotient
    lift: GroupHom  # h(X^p, X^{p-r}) -> h(X^p, X^{p-1})

    @property
    def group(self) -> PresentedGroup:
        return self.subquotient.group


@dataclass
class TruncationPage:
    p: int
    q: int
    r: int
    image: Subgroup
    composite: GroupHom  # h^(q+r-2)(X^p) -> h^(q)(X^{p+r-1})

    @property
    def group(self) -> PresentedGroup:
        return self.image.as_group()


def page_couple(h: Theory, X: CWComplex, r: int, p: int, q: int,
                sabotage: Optional[str] = None) -> CouplePage:
    if r < 2:
        raise ValueError("pages start at r = 2")
    n = p + q
    lift = pair_map(h, X, n, (p, p - r), (p, p - 1))
    ambient = lift.dst
    numerator = hom_image(lift)
    if sabotage == "drop-denominator":
        denominator = Subgroup.trivial(ambient)
    else:
        denominator = hom_image(boundary_map(h, X, n + 1, (p + r - 1, p, p - 1)))
    try:
        sq = Subquotient(ambient, numerator, denominator)
    except ContainmentError as exc:
        raise TheoremViolation("couple containment ker ⊆ im", f"p={p}, q={q}, r={r}",
                               exc.witness) from exc
    return CouplePage(p, q, r, sq, lift)


def page_truncation(h: Theory, X: CWComplex, r: int, p: int, q: int,
                    sabotage: Optional[str] = None) -> TruncationPage:
    if r < 2:
        raise ValueError("pages start at r = 2")
    n = p + q
    top = p + r - 2 if sabotage == "shift-skeleton" else p + r - 1
    src_theory = h.truncate(q + r - 2)
    dst_theory = h.truncate(q)
    trunc = truncation_map(src_theory, dst_theory, X, n, (p, -1))
    incl = pair_map(dst_theory, X, n, (p, -1), (top, -1))
    composite = incl.compose(trunc)
    return TruncationPage(p, q, r, hom_image(composite), composite)


@dataclass
class Page:
    p: int
    q: int
    r: int
    couple: CouplePage
    truncation: TruncationPage
    comparison: Optional[GroupHom] = None
    agree: bool = False
    comparison_iso: bool = False
    problems: list = field(default_factory=list)

    @property
    def couple_form(self) -> Subquotient:
        return self.couple.subquotient

    @property
    def image_form(self) -> PresentedGroup:
        return self.truncation.group

    def __str__(self) -> str:
        return str(self.couple.group)


def compare_page_forms(h: Theory, X: CWComplex, C: CouplePage,
                       T: TruncationPage) -> tuple[Optional[GroupHom], list[str]]:
    """Isomorphism ``couple -> truncation`` through ``G4 = h^(q)_{p+q}(X^{p+r-1}, X^{p-1})``.

    ``ψ: h(X^p, X^{p-1}) -> G4`` (inclusion then truncation) and
    ``j: h^(q)(X^{p+r-1}) -> G4`` must send the numerator and the truncation
    image onto the same subgroup of ``G4``; the induced map is then solved
    for on generators.
    """
    p, q, r = C.p, C.q, C.r
    n = p + q
    hq = h.truncate(q)
    problems = []
    psi = truncation_map(h, hq, X, n, (p + r - 1, p - 1)).compose(
        pair_map(h, X, n, (p, p - 1), (p + r - 1, p - 1)))
    j = pair_map(hq, X, n, (p + r - 1, -1), (p + r - 1, p - 1))
    G4 = psi.dst
    if j.src != T.image.ambient:
        return None, ["truncation page lives in a different group than expected"]
    for v in C.subquotient.denominator.generators.columns():
        if not G4.is_zero_element(psi(v)):
            problems.append(f"ψ does not kill denominator generator {v}")
    left = Subgroup(G4, psi.matrix @ C.subquotient.numerator.generators)
    right = Subgroup(G4, j.matrix @ T.image.generators)
    if not left.equals(right):
        problems.append("ψ(numerator) != j(truncation image) in h^(q)(X^{p+r-1}, X^{p-1})")
    tview = T.image.view
    cview = C.subquotient.view
    lift = hstack([j.matrix @ tview.representatives, G4.relations], G4.ambient_rank)
    cols = []
    for k in range(cview.group.ambient_rank):
        x = solve(lift, psi(cview.representative(k)))
        if x is None:
            problems.append(f"couple generator {k} has no preimage in the truncation image")
            return None, problems
        cols.append(x[:tview.group.ambient_rank])
    try:
        cmp = GroupHom(cview.group, tview.group,
                       IntMatrix.from_columns(cols, tview.group.ambient_rank))
    except NotWellDefined as exc:
        problems.append(f"comparison map not well defined: {exc}")
        return None, problems
    return cmp, problems


def page(h: Theory, X: CWComplex, r: int, p: int, q: int, compare: bool = True,
         sabotage: Optional[str] = None) -> Page:
    cache = cache_for(X)
    key = ("PAGE", h, r, p, q, compare, sabotage)
    pg = cache.store.get(key)
    if pg is not None:
        return pg
    C = page_couple(h, X, r, p, q, sabotage)
    T = page_truncation(h, X, r, p, q, sabotage)
    pg = Page(p, q, r, C, T)
    pg.agree = C.group.canonical_form == T.group.canonical_form
    if compare and sabotage is None:
        cmp, problems = compare_page_forms(h, X, C, T)
        pg.comparison = cmp
        pg.problems = problems
        pg.comparison_iso = cmp is not None and is_isomorphism(cmp)
    cache.store[key] = pg
    return pg


# differentials -------------------------------------------------------------------


def differential_couple(h: Theory, X: CWComplex, r: int, p: int, q: int) -> GroupHom:
    """``d^r: E^r_{p,q} -> E^r_{p-r,q+r-1}`` on couple forms: lift, connect, project."""
    src = page(h, X, r, p, q)
    dst = page(h, X, r, p - r, q + r - 1)
    n = p + q
    lift = src.couple.lift
    G1 = lift.dst
    solver = hstack([lift.matrix, G1.relations], G1.ambient_rank)
    bd = boundary_map(h, X, n, (p, p - r, p - r - 1))
    sview, tview = src.couple.subquotient.view, dst.couple.subquotient.view
    cols = []
    for k in range(sview.group.ambient_rank):
        x = solve(solver, sview.representative(k))
        if x is None:
            raise TheoremViolation("couple lift", f"p={p}, q={q}, r={r}", k)
        cols.append(tview.coords(bd(x[:lift.src.ambient_rank])))
    return GroupHom(sview.group, tview.group, IntMatrix.from_columns(cols, tview.group.ambient_rank))


def differential_phi(h: Theory, X: CWComplex, r: int, p: int, q: int) -> GroupHom:
    """``d^r`` on truncation forms via ``Φ`` applied to a lift in ``h^(q+r-2)_{p+q}(X^p)``."""
    src = page(h, X, r, p, q)
    dst = page(h, X, r, p - r, q + r - 1)
    n = p + q
    level = q + r - 2
    comp = src.truncation.composite
    solver = hstack([comp.matrix, comp.dst.relations], comp.dst.ambient_rank)
    s = min(n - level - 1, p)
    ph = phi(h, level, X, n, top=p)
    target_level = q + r - 1
    onward = pair_map(h.truncate(target_level), X, n - 1, (s, -1), (p - 1, -1)).compose(
        truncation_map(h, h.truncate(target_level), X, n - 1, (s, -1)))
    sview, tview = src.truncation.image.view, dst.truncation.image.view
    if onward.dst != dst.truncation.image.ambient:
        raise TheoremViolation("Φ differential target", f"p={p}, q={q}, r={r}")
    cols = []
    for k in range(sview.group.ambient_rank):
        x = solve(solver, sview.representative(k))
        if x is None:
            raise TheoremViolation("truncation lift", f"p={p}, q={q}, r={r}", k)
        cols.append(tview.coords(onward(ph(x[:comp.src.ambient_rank]))))
    return GroupHom(sview.group, tview.group, IntMatrix.from_columns(cols, tview.group.ambient_rank))


@dataclass
class DifferentialReport:
    couple: GroupHom
    via_phi: GroupHom
    agree: bool
    zero: bool


def differential(h: Theory, X: CWComplex, r: int, p: int, q: int) -> DifferentialReport:
    """Both constructions of ``d^r``, compared after transport to truncation forms."""
    a = differential_couple(h, X, r, p, q)
    b = differential_phi(h, X, r, p, q)
    src = page(h, X, r, p, q)
    dst = page(h, X, r, p - r, q + r - 1)
    agree = False
    if src.comparison is not None and dst.comparison is not None:
        agree = dst.comparison.compose(a).equals(b.compose(src.comparison))
    return DifferentialReport(a, b, agree, a.is_zero() and b.is_zero())


# identifications -------------------------------------------------------------------


@dataclass
class Identification:
    couple_map: Optional[GroupHom]
    truncation_map: Optional[GroupHom]
    ok: bool
    problems: list = field(default_factory=list)


def e2_identify(h: Theory, X: CWComplex, p: int, q: int) -> Identification:
    """``E^2_{p,q} ≅ H_p(X; h_q)`` for both page forms."""
    cache = cache_for(X)
    M = h.coefficient(q)
    full = cache.chains(X.dimension, -1, M)
    H = full.homology(p)
    pg = page(h, X, 2, p, q)
    problems = []
    G1 = pg.couple.subquotient.ambient
    V1 = evaluate(h, X, p + q, (p, p - 1))
    Cp = full.group(p)
    cols = [(0,) * Cp.ambient_rank] * G1.ambient_rank
    if q in V1.offsets and p >= 0:
        lo, hi = V1.offsets[q]
        reps = V1.summand(q).representatives
        for k in range(lo, hi):
            cols[k] = reps.column(k - lo)
    iota = GroupHom(G1, Cp, IntMatrix.from_columns(cols, Cp.ambient_rank))
    try:
        f1 = induced_on_subquotient(iota, pg.couple.subquotient, H.subquotient)
    except ContainmentError as exc:
        f1 = None
        problems.append(f"couple E^2 does not map into H_p(X; h_q): {exc}")
    # truncation form lives in h^(q)_{p+q}(X^{p+1}); its q-summand is H_p(X^{p+1}; h_q)
    V3 = evaluate(h.truncate(q), X, p + q, (p + 1, -1))
    f3 = None
    if q in V3.offsets:
        lo, hi = V3.offsets[q]
        proj_rows = [[int(j == lo + i) for j in range(V3.group.ambient_rank)]
                     for i in range(hi - lo)]
        Hs = V3.summand(q)
        proj = GroupHom(V3.group, Hs.group, IntMatrix(proj_rows, hi - lo, V3.group.ambient_rank))
        a, b = cache.norm(p + 1, -1)
        incl = cache.pair_map((a, b), cache.norm(X.dimension, -1), M, p)
        kappa = incl.compose(proj)
        if kappa.dst != H.group:
            problems.append("skeleton homology target mismatch")
        else:
            f3 = restrict(kappa, pg.truncation.image)
    elif not H.group.is_trivial():
        problems.append("truncation form has no q-summand but H_p(X; h_q) is nonzero")
    ok = not problems
    ok = ok and (f1 is not None and is_isomorphism(f1))
    if f3 is not None:
        ok = ok and is_isomorphism(f3)
    else:
        ok = ok and H.group.is_trivial() and pg.truncation.group.is_trivial()
    return Identification(f1, f3, ok, problems)


@dataclass
class InfinityReport:
    standard: Subquotient
    comparison: Optional[GroupHom]
    ok: bool
    kernel_sum_ok: bool
    kernel_image_ok: bool
    problems: list = field(default_factory=list)


def einf_identify(h: Theory, X: CWComplex, p: int, q: int) -> InfinityReport:
    """Stable page vs ``im(h(X^p) -> h(X)) / im(h(X^{p-1}) -> h(X))``."""
    d = X.dimension
    n = p + q
    r = stable_page(X)
    hq = h.truncate(q)
    problems = []
    G = evaluate(h, X, n).group
    N = hom_image(pair_map(h, X, n, (p, -1), (d, -1)))
    D = hom_image(pair_map(h, X, n, (p - 1, -1), (d, -1)))
    standard = Subquotient(G, N, D)
    pg = page(h, X, r, p, q)
    nxt = page(h, X, r + 1, p, q)
    if nxt.couple.group.canonical_form != pg.couple.group.canonical_form:
        problems.append(f"page not stable at r = {r}")
    tau = truncation_map(h, hq, X, n)
    T = pg.truncation.image
    cmp = None
    if tau.dst != T.ambient:
        problems.append("stable truncation page is not in h^(q)(X)")
    else:
        try:
            cmp = induced_on_subquotient(tau, standard, Subquotient(
                T.ambient, T, Subgroup.trivial(T.ambient)))
        except ContainmentError as exc:
            problems.append(f"standard filtration quotient does not map onto the stable page: {exc}")
    ok = cmp is not None and is_isomorphism(cmp) and not problems
    # ker(h(X^p) -> h^(q)(X)) = ker(h(X^p) -> h(X)) + ker(h(X^p) -> h^(q)(X^p))
    to_x = pair_map(h, X, n, (p, -1), (d, -1))
    to_trunc = truncation_map(h, hq, X, n, (p, -1))
    both = tau.compose(to_x)
    k1 = hom_kernel(both)
    k2 = hom_kernel(to_x) + hom_kernel(to_trunc)
    kernel_sum_ok = k1.equals(k2)
    from_below = hom_image(pair_map(h, X, n, (p - 1, -1), (p, -1)))
    kernel_image_ok = hom_kernel(to_trunc).equals(from_below)
    return InfinityReport(standard, cmp, ok and kernel_sum_ok and kernel_image_ok,
                          kernel_sum_ok, kernel_image_ok, problems)


# filtrations ---------------------------------------------------------------------


@dataclass
class FiltrationChain:
    p: int
    provenance: str
    levels: dict[int, Subgroup]

    def descending(self) -> bool:
        rs = sorted(self.levels)
        return all(self.levels[b].issubset(self.levels[a]) for a, b in zip(rs, rs[1:]))

    def top_is_whole(self) -> bool:
        return self.levels[min(self.levels)].is_whole()


@dataclass
class FiltrationReport:
    p: int
    chains: tuple[FiltrationChain, FiltrationChain, FiltrationChain]
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def filtration_compare(h: Theory, X: CWComplex, p: int,
                       r_max: Optional[int] = None) -> FiltrationReport:
    """Couple, truncation-image and relative-image filtrations of ``h^(0)_p(X)``."""
    d = X.dimension
    r_max = stable_page(X) if r_max is None else r_max
    h0 = h.truncate(0)
    F = evaluate(h0, X, p).group
    couple_levels, trunc_levels, rel_levels = {}, {}, {}
    mismatches = []
    j1 = pair_map(h0, X, p, (d, -1), (d, p - 1))
    j2 = pair_map(h0, X, p, (d, -1), (d, p - 2))
    psi = truncation_map(h, h0, X, p, (d, p - 1)).compose(
        pair_map(h, X, p, (p, p - 1), (d, p - 1)))
    for r in range(2, r_max + 1):
        C = page(h, X, r, p, 0).couple.subquotient
        pushed = Subgroup(j1.dst, psi.matrix @ C.numerator.generators)
        if not pushed.issubset(hom_image(j1)):
            mismatches.append((r, "couple level is not in the image of h^(0)_p(X)"))
        couple_levels[r] = preimage_of(j1, pushed)
        trunc_levels[r] = hom_image(truncation_map(h.truncate(r - 2), h0, X, p))
        rel = Subgroup(j2.dst, truncation_map(h, h0, X, p, (d, p - 2)).compose(
            pair_map(h, X, p, (d, p - r), (d, p - 2))).matrix)
        if not rel.issubset(hom_image(j2)):
            mismatches.append((r, "relative level is not in the image of h^(0)_p(X)"))
        rel_levels[r] = preimage_of(j2, rel)
        a, b, c = couple_levels[r], trunc_levels[r], rel_levels[r]
        if not a.equals(b):
            mismatches.append((r, "couple != truncation"))
        if not b.equals(c):
            mismatches.append((r, "truncation != relative"))
    chains = (FiltrationChain(p, "couple", couple_levels),
              FiltrationChain(p, "truncation-image", trunc_levels),
              FiltrationChain(p, "relative-image", rel_levels))
    for ch in chains:
        if not ch.descending():
            mismatches.append((None, f"{ch.provenance} filtration is not descending"))
        if F.ambient_rank and not ch.top_is_whole():
            mismatches.append((2, f"{ch.provenance} filtration does not start at the whole group"))
    return FiltrationReport(p, chains, mismatches)


# surjectivity -------------------------------------------------------------------


def check_surjectivity(h: Theory, X: CWComplex, n: int, r: int) -> list[str]:
    """``h^(r)_n(X) -> h^(r)_n(X, X^{n-r-2})`` and ``h_n(X, X^{n-r-2}) -> h^(r)_n(X, X^{n-r-2})``."""
    d = X.dimension
    s = n - r - 2
    hr = h.truncate(r)
    failures = []
    if not hom_image(pair_map(hr, X, n, (d, -1), (d, s))).is_whole():
        failures.append("h^(r)_n(X) -> h^(r)_n(X, X^s) is not surjective")
    if not hom_image(truncation_map(h, hr, X, n, (d, s))).is_whole():
        failures.append("h_n(X, X^s) -> h^(r)_n(X, X^s) is not surjective")
    return failures
