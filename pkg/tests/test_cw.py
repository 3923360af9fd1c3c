import json

import pytest
from hypothesis import given, settings, strategies as st

from ahss.abgroup import IntMatrix
from ahss.chain import homology
from ahss.cw import (ALL_BUILDERS, CWComplex, ComplexFormatError, InvalidComplex, cellular_chains,
                     complex_from_object, cp, disjoint_union, dumps_complex, empty_complex,
                     flag_complex, loads_complex, moore, parse_builder, random_complex, rp,
                     skeleton, sphere, suspension, torus, validate, validated, wedge)
from oracles import cellular_homology


def hom(X):
    C = cellular_chains(X)
    return [str(homology(C, n).group) for n in range(X.dimension + 1)]


def oracle(X):
    from ahss.abgroup import format_canonical
    rows = [b.tolist() for b in X.boundaries]
    return [format_canonical(f, t) for f, t in cellular_homology(list(X.cells), rows)]


@pytest.mark.parametrize("X", [sphere(n) for n in range(5)] + [torus()] +
                         [rp(n) for n in range(1, 6)] + [cp(n) for n in range(1, 4)] +
                         [moore(6, 2), moore(4, 1)])
def test_known_homology_matches_oracle(X):
    assert hom(X) == oracle(X)


def test_closed_forms():
    assert hom(rp(3)) == ["Z", "Z/2", "0", "Z"]
    assert hom(rp(2)) == ["Z", "Z/2", "0"]
    assert hom(cp(2)) == ["Z", "0", "Z", "0", "Z"]
    assert hom(moore(6, 2)) == ["Z", "0", "Z/6", "0"]
    assert hom(sphere(0)) == ["Z^2"]
    assert hom(torus()) == ["Z", "Z^2", "Z"]


def test_combinators():
    assert hom(wedge(sphere(1), sphere(2))) == ["Z", "Z", "Z"]
    assert hom(disjoint_union(sphere(1), sphere(1))) == ["Z^2", "Z^2"]
    assert hom(suspension(rp(2))) == ["Z", "0", "Z/2", "0"]
    assert hom(suspension(empty_complex())) == ["Z"]


def test_flag_triangle_is_contractible():
    X = flag_complex(3, [(0, 1), (1, 2), (0, 2)])
    assert X.cells == (3, 3, 1)
    assert hom(X) == ["Z", "0", "0"]


def test_validate_negative():
    bad = CWComplex((1, 1, 1), (IntMatrix([[1]]), IntMatrix([[1]])))
    report = validate(bad)
    assert not report and report.degree == 2 and report.entry == (0, 0)
    with pytest.raises(InvalidComplex):
        validated(bad)
    assert validate(sphere(2)) and validate(torus())


def test_euler_characteristic():
    assert torus().euler_characteristic == 0
    assert cp(3).euler_characteristic == 4
    assert rp(4).euler_characteristic == 1


@given(st.integers(0, 10 ** 9), st.integers(0, 40))
@settings(max_examples=60, deadline=None)
def test_random_complexes_are_valid_and_round_trip(seed, budget):
    X = random_complex(seed, budget)
    assert validate(X)
    assert X.total_cells <= max(budget, 1)
    text = dumps_complex(X)
    assert loads_complex(text) == X
    assert dumps_complex(loads_complex(text)) == text
    assert random_complex(seed, budget) == X


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_euler_characteristic_from_homology(seed):
    X = random_complex(seed, 25)
    C = cellular_chains(X)
    chi = sum((-1) ** n * homology(C, n).group.free_rank for n in range(X.dimension + 1))
    assert chi == X.euler_characteristic


def test_budget_zero():
    assert random_complex(5, 0).cells == (1,)


def test_skeleton_composition():
    X = random_complex(17)
    for a in range(-1, X.dimension + 1):
        for b in range(-1, a + 1):
            assert skeleton(skeleton(X, a), b) == skeleton(X, b)


def test_parse_errors_name_the_field():
    with pytest.raises(ComplexFormatError) as exc:
        loads_complex('{"dimension": 1, "cells": [1, 1]}')
    assert exc.value.field == "boundaries"
    with pytest.raises(ComplexFormatError) as exc:
        loads_complex('{"dimension": 1, "cells": [1, 1], "boundaries": [[[0, 0]]]}')
    assert "boundaries" in exc.value.field
    with pytest.raises(ComplexFormatError) as exc:
        loads_complex('{"dimension": 1,\n "cells": [1, 1,]}')
    assert exc.value.line == 2
    with pytest.raises(InvalidComplex):
        complex_from_object(json.loads(
            '{"dimension": 2, "cells": [1, 1, 1], "boundaries": [[[1]], [[1]]]}'))


def test_builder_expressions():
    assert parse_builder("wedge(sphere(1), sphere(2))") == wedge(sphere(1), sphere(2))
    assert parse_builder("rp(3)") == rp(3)
    for bad in ("rp(", "os.system('x')", "rp(-1)", "nosuch(1)"):
        with pytest.raises(ComplexFormatError):
            parse_builder(bad)
    assert set(ALL_BUILDERS) >= {"sphere", "torus", "rp", "cp", "moore", "wedge", "random"}
