import pytest

from ahss.abgroup import hom_image
from ahss.cw import cp, empty_complex, random_complex, rp, sphere, torus
from ahss.spectral import (differential, e2_identify, einf_identify, filtration_compare, page,
                           page_couple, page_truncation, stable_page, check_surjectivity)
from ahss.theory import BUILTIN_THEORIES, theory, truncation_map

HZ = BUILTIN_THEORIES["Z"]
GRADED = BUILTIN_THEORIES["Z+Z2[1]"]


def form(h, X, r, p, q):
    pg = page(h, X, r, p, q)
    assert pg.agree and pg.comparison_iso and not pg.problems
    return str(pg.couple.group)


def test_page_examples():
    assert form(HZ, cp(2), 2, 2, 0) == "Z"
    assert form(HZ, rp(3), 2, 1, 0) == "Z/2"
    assert form(GRADED, rp(3), 2, 1, 1) == "Z/2"
    assert [form(HZ, cp(2), 2, p, 0) for p in range(5)] == ["Z", "0", "Z", "0", "Z"]


def test_out_of_range_pages_are_zero():
    X = rp(3)
    assert form(HZ, X, 2, 1, 3) == "0"
    assert str(page_couple(HZ, X, 2, -1, 0).group) == "0"
    assert str(page_truncation(HZ, X, 2, 0, -1).group) == "0"
    assert str(page_couple(HZ, empty_complex(), 2, 0, 0).group) == "0"


def test_both_forms_agree_on_random_complexes():
    for seed in (1, 2, 3):
        X = random_complex(seed, 30)
        for h in (HZ, GRADED, BUILTIN_THEORIES["Z+Z[2]+Z2[3]"]):
            for r in range(2, stable_page(X) + 1):
                for p in range(X.dimension + 1):
                    for q in range(h.q_max + 1):
                        form(h, X, r, p, q)


def test_stable_value_at_q_zero():
    X = rp(3)
    h = GRADED
    r = stable_page(X) + 1
    for p in range(X.dimension + 1):
        image = hom_image(truncation_map(h.truncate(r - 2), h.truncate(0), X, p))
        assert form(h, X, r, p, 0) == str(image.as_group())


@pytest.mark.parametrize("X", [rp(3), torus(), random_complex(4, 25)])
def test_differentials_vanish_and_agree(X):
    for h in (HZ, GRADED):
        for r in range(2, stable_page(X) + 1):
            for p in range(X.dimension + 1):
                for q in range(h.q_max + 1):
                    d = differential(h, X, r, p, q)
                    assert d.zero and d.agree


def test_e2_identification():
    e = e2_identify(HZ, torus(), 1, 0)
    assert e.ok and form(HZ, torus(), 2, 1, 0) == "Z^2"
    h = theory({1: "Z/2"})
    assert e2_identify(h, rp(2), 1, 1).ok and form(h, rp(2), 2, 1, 1) == "Z/2"
    assert form(h, rp(2), 2, 1, 0) == "0"


def test_einf_identification():
    X = rp(3)
    r = stable_page(X)
    assert [form(HZ, X, r, p, 0) for p in range(4)] == ["Z", "Z/2", "0", "Z"]
    for p in range(4):
        rep = einf_identify(HZ, X, p, 0)
        assert rep.ok and rep.kernel_sum_ok and rep.kernel_image_ok
    assert form(HZ, sphere(3), stable_page(sphere(3)), 3, 0) == "Z"
    assert form(HZ, X, r, 5, 0) == "0"


@pytest.mark.parametrize("X", [sphere(3), rp(3), random_complex(12, 30)])
def test_filtrations_coincide(X):
    for h in (HZ, GRADED):
        for p in range(X.dimension + 1):
            rep = filtration_compare(h, X, p)
            assert rep.ok, rep.mismatches


def test_filtration_sphere_levels():
    rep = filtration_compare(HZ, sphere(2), 2)
    for chain in rep.chains:
        assert {str(s.as_group()) for s in chain.levels.values()} == {"Z"}


def test_surjectivity():
    for X in (rp(4), torus()):
        for r in range(0, 3):
            for n in range(0, X.dimension + 3):
                assert check_surjectivity(GRADED, X, n, r) == []


@pytest.mark.parametrize("mode", ["shift-skeleton", "drop-denominator"])
def test_page_sabotage_breaks_agreement(mode):
    X = rp(3)
    bad = [page(HZ, X, r, p, 0, compare=False, sabotage=mode).agree
           for r in range(2, 5) for p in range(4)]
    assert not all(bad)
