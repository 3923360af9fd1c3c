"""The verification battery: every structural check over a corpus of complexes and theories."""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .abgroup import ContainmentError, NotWellDefined, Subgroup, Subquotient, hom_kernel
from .cw import (CWComplex, cp, disjoint_union, disk, moore, random_complex, rp, sphere,
                 suspension, torus, wedge)
from .spectral import (SABOTAGE_MODES, check_surjectivity, differential, e2_identify,
                       einf_identify, filtration_compare, page, stable_page)
from .theory import (BUILTIN_THEORIES, TheoremViolation, Theory, check_image_identity,
                     check_phi_naturality, check_relative_cellular, check_relative_iso,
                     check_trivial_truncation, clear_caches, evaluate, verify_les)

STATEMENTS = (
    "trivial truncation",
    "relative cellular",
    "relative isomorphism",
    "postnikov LES",
    "image identity",
    "phi naturality",
    "surjective maps",
    "page formula",
    "E2 identification",
    "Einf identification",
    "GEM collapse",
    "stabilization",
    "page recursion",
    "associated graded",
    "filtration equality",
)
OUT_OF_RANGE = "relative isomorphism out of range"


def builder_corpus() -> list[tuple[str, CWComplex]]:
    out = [(f"S^{n}", sphere(n)) for n in range(0, 5)]
    out.append(("T^2", torus()))
    out += [(f"RP^{n}", rp(n)) for n in range(1, 6)]
    out += [(f"CP^{n}", cp(n)) for n in range(1, 4)]
    out += [("M(Z/6,2)", moore(6, 2)), ("M(Z/4,1)", moore(4, 1)), ("D^2", disk(2))]
    out.append(("S^1 v RP^2", wedge(sphere(1), rp(2))))
    out.append(("T^2 + RP^3", disjoint_union(torus(), rp(3))))
    out.append(("Susp RP^2", suspension(rp(2))))
    return out


def random_corpus(seed: int, count: int, budget: int = 40) -> list[tuple[str, CWComplex]]:
    rng = random.Random(seed)
    seeds = [rng.getrandbits(32) for _ in range(count)]
    return [(f"random[{s}]", random_complex(s, budget)) for s in seeds]


@dataclass
class Tally:
    instances: Counter = field(default_factory=Counter)
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def record(self, statement: str, ok: bool, instance: str, detail: object = ""):
        self.instances[statement] += 1
        if not ok:
            self.violations.append((statement, instance, str(detail)))

    def merge(self, other: "Tally"):
        self.instances.update(other.instances)
        self.violations.extend(other.violations)
        self.notes.extend(other.notes)


def _guard(tally: Tally, statement: str, instance: str, fn: Callable[[], object]):
    try:
        return fn()
    except (TheoremViolation, ContainmentError, NotWellDefined) as exc:
        tally.record(statement, False, instance, exc)
        return None


def check_complex(name: str, X: CWComplex, h: Theory, sabotage: Optional[str] = None,
                  les_r: range = range(0, 4)) -> Tally:
    """All checks for one complex and one theory."""
    t = Tally()
    d = X.dimension
    qmax = max(h.q_max, 0)
    n_top = d + qmax + 2
    tag = f"{name} | {h}"

    for r in range(0, qmax + 1):
        rep = check_trivial_truncation(h, X, r, n_top)
        t.instances["trivial truncation"] += rep.instances
        t.violations += [("trivial truncation", f"{tag} | r={r}, {w}", v)
                         for w, v in rep.violations]
        if not h.coefficient(r).is_trivial():
            for k in range(0, d + 1):
                rep = check_relative_cellular(h, X, r, k)
                t.instances["relative cellular"] += 1
                t.violations += [("relative cellular", f"{tag} | {w}", v)
                                 for w, v in rep.violations]
        for k in range(-1, d + 1):
            for n in range(0, n_top + 1):
                ok, witness = check_relative_iso(h, X, r, k, n)
                if n <= k + r + 1:
                    t.record("relative isomorphism", ok, f"{tag} | r={r}, k={k}, n={n}", witness)
                else:
                    t.instances[OUT_OF_RANGE] += 1
                    if not ok:
                        t.notes.append((OUT_OF_RANGE, f"{tag} | r={r}, k={k}, n={n}",
                                        str(witness[0])))

    for r in les_r:
        for n in range(0, n_top + 1):
            where = f"{tag} | r={r}, n={n}"
            failures = verify_les(h, r, X, n, sabotage=sabotage)
            t.record("postnikov LES", not failures, where, failures[:1])
            if sabotage is None:
                rep = _guard(t, "image identity", where, lambda: check_image_identity(h, r, X, n))
                if rep is not None:
                    t.record("image identity", rep.ok, where, rep.violations[:1])
                fails = check_surjectivity(h, X, n, r)
                t.record("surjective maps", not fails, where, fails[:1])
                for m in range(-1, d):
                    ok = _guard(t, "phi naturality", where,
                                lambda: check_phi_naturality(h, r, X, n, m))
                    if ok is not None:
                        t.record("phi naturality", ok, f"{where}, m={m}")

    compare = sabotage is None
    for r in range(2, d + 3):
        for p in range(0, d + 1):
            for q in range(0, qmax + 1):
                where = f"{tag} | r={r}, p={p}, q={q}"
                pg = _guard(t, "page formula", where,
                            lambda: page(h, X, r, p, q, compare=compare, sabotage=sabotage))
                if pg is None:
                    continue
                ok = pg.agree and (not compare or (pg.comparison_iso and not pg.problems))
                t.record("page formula", ok, where,
                         "; ".join([f"couple {pg.couple.group} vs truncation "
                                    f"{pg.truncation.group}"] + list(pg.problems)))
                if sabotage is not None:
                    continue
                dr = _guard(t, "GEM collapse", where, lambda: differential(h, X, r, p, q))
                if dr is not None:
                    t.record("GEM collapse", dr.agree and dr.zero, where,
                             f"agree={dr.agree}, zero={dr.zero}")
                    _check_recursion(t, h, X, r, p, q, where)

    if sabotage is not None:
        return t
    stable = stable_page(X)
    for p in range(0, d + 1):
        for q in range(0, qmax + 1):
            a, b = page(h, X, stable, p, q), page(h, X, stable + 1, p, q)
            t.record("stabilization", a.couple.group.canonical_form ==
                     b.couple.group.canonical_form and a.agree and b.agree,
                     f"{tag} | p={p}, q={q}", f"E^{stable} = {a} but E^{stable + 1} = {b}")
    for p in range(0, d + 1):
        for q in range(0, qmax + 1):
            where = f"{tag} | p={p}, q={q}"
            e2 = _guard(t, "E2 identification", where, lambda: e2_identify(h, X, p, q))
            if e2 is not None:
                t.record("E2 identification", e2.ok, where, e2.problems[:1])
            ei = _guard(t, "Einf identification", where, lambda: einf_identify(h, X, p, q))
            if ei is not None:
                t.record("Einf identification", ei.ok, where,
                         f"kernel sum {ei.kernel_sum_ok}, kernel image {ei.kernel_image_ok}; "
                         f"{ei.problems[:1]}")
    for n in range(0, n_top + 1):
        _check_associated_graded(t, h, X, n, f"{tag} | n={n}")
    if 0 in h.degrees:
        for p in range(0, d + 1):
            rep = _guard(t, "filtration equality", f"{tag} | p={p}",
                         lambda: filtration_compare(h, X, p))
            if rep is not None:
                t.record("filtration equality", rep.ok, f"{tag} | p={p}", rep.mismatches[:1])
    return t


def _check_recursion(t: Tally, h: Theory, X: CWComplex, r: int, p: int, q: int, where: str):
    """``E^{r+1} ≅ ker(d^r out) / im(d^r in)`` and ``d^r ∘ d^r = 0``."""
    out = differential(h, X, r, p, q).couple
    inc = differential(h, X, r, p + r, q - r + 1).couple
    E = out.src
    ker = hom_kernel(out)
    im = Subgroup(E, inc.matrix)
    try:
        H = Subquotient(E, ker, im).group
    except ContainmentError as exc:
        t.record("page recursion", False, where, f"d∘d != 0: {exc}")
        return
    nxt = page(h, X, r + 1, p, q).couple.group
    t.record("page recursion", H.canonical_form == nxt.canonical_form, where,
             f"homology {H} vs next page {nxt}")
    dd = differential(h, X, r, p - r, q + r - 1).couple.compose(out)
    t.record("page recursion", dd.is_zero(), where + " (d∘d)", "d∘d is nonzero")


def _check_associated_graded(t: Tally, h: Theory, X: CWComplex, n: int, where: str):
    """Ranks add up and torsion orders multiply along the filtration of ``h_n(X)``."""
    d = X.dimension
    r = d + 2
    total = evaluate(h, X, n).group
    rank = 0
    order = 1
    for p in range(0, d + 1):
        g = page(h, X, r, p, n - p).couple.group if n - p >= 0 else None
        if g is None:
            continue
        rank += g.free_rank
        for x in g.torsion:
            order *= x
    tot_order = 1
    for x in total.torsion:
        tot_order *= x
    t.record("associated graded", (rank, order) == (total.free_rank, tot_order), where,
             f"E∞ gives rank {rank}, torsion order {order}; h_n(X) = {total}")


@dataclass
class SuiteReport:
    tally: Tally
    corpus_size: int
    theories: list[str]
    seed: int
    random_count: int
    sabotage: Optional[str]

    @property
    def ok(self) -> bool:
        return not self.tally.violations

    def violations(self) -> list[tuple[str, str, str]]:
        order = {s: i for i, s in enumerate(STATEMENTS)}
        return sorted(self.tally.violations, key=lambda v: (order.get(v[0], len(order)), v[1], v[2]))

    def summary(self) -> dict:
        by = Counter(s for s, _, _ in self.tally.violations)
        return {
            "seed": self.seed, "random": self.random_count, "complexes": self.corpus_size,
            "theories": self.theories, "sabotage": self.sabotage,
            "statements": [{"statement": s, "instances": self.tally.instances[s],
                            "violations": by[s]} for s in STATEMENTS],
            "out_of_range": {"searched": self.tally.instances[OUT_OF_RANGE],
                             "witnessed": len(self.tally.notes)},
            "violations": [{"statement": s, "instance": i, "witness": w}
                           for s, i, w in self.violations()],
            "ok": self.ok,
        }

    def render(self) -> str:
        lines = [f"verify: seed={self.seed} random={self.random_count} "
                 f"complexes={self.corpus_size} theories={len(self.theories)}"
                 + (f" sabotage={self.sabotage}" if self.sabotage else "")]
        lines.append("theories: " + "; ".join(self.theories))
        by = Counter(s for s, _, _ in self.tally.violations)
        for s in STATEMENTS:
            if self.tally.instances[s] or by[s]:
                status = "PASS" if not by[s] else "FAIL"
                lines.append(f"{status}  {s:<24} instances={self.tally.instances[s]:<7} "
                             f"violations={by[s]}")
        lines.append(f"NOTE  {OUT_OF_RANGE}: searched={self.tally.instances[OUT_OF_RANGE]} "
                     f"witnessed={len(self.tally.notes)} (recorded, not asserted)")
        if self.tally.violations:
            lines.append("first violations:")
            seen = set()
            for s, inst, det in self.violations():
                if s in seen:
                    continue
                seen.add(s)
                lines.append(f"  [{s}] {inst}: {det}")
        lines.append("result: " + ("all checks passed" if self.ok else
                                   f"{len(self.tally.violations)} violations"))
        return "\n".join(lines) + "\n"


def _run_one(args) -> Tally:
    name, X, theory_names, sabotage = args
    t = Tally()
    for tn in theory_names:
        t.merge(check_complex(name, X, BUILTIN_THEORIES[tn], sabotage))
    clear_caches()
    return t


def run_suite(seed: int = 0, random_count: int = 50, budget: int = 40,
              theories: Optional[list[str]] = None, sabotage: Optional[str] = None,
              jobs: int = 1, include_builders: bool = True,
              corpus: Optional[list[tuple[str, CWComplex]]] = None) -> SuiteReport:
    """Run every check on ``corpus`` (default: builders plus seeded random complexes)."""
    if sabotage is not None and sabotage not in SABOTAGE_MODES:
        raise ValueError(f"unknown sabotage mode {sabotage!r}")
    theories = list(theories or BUILTIN_THEORIES)
    if corpus is not None:
        random_count = 0
    else:
        corpus = (builder_corpus() if include_builders else []) + \
            random_corpus(seed, random_count, budget)
    tasks = [(name, X, theories, sabotage) for name, X in corpus]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            tallies = list(pool.map(_run_one, tasks))
    else:
        tallies = [_run_one(task) for task in tasks]
    total = Tally()
    for tl in tallies:
        total.merge(tl)
    return SuiteReport(total, len(corpus), [str(BUILTIN_THEORIES[t]) for t in theories], seed,
                       random_count, sabotage)
