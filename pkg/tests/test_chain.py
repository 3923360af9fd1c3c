import pytest

from ahss.abgroup import GroupHom, IntMatrix, PresentedGroup, identity_hom, is_isomorphism
from ahss.chain import (ChainComplex, ChainComplexError, ChainMap, ComplexSES, connecting_hom,
                        free_complex, homology, induced_on_homology, tensor_free_complex)
from ahss.cw import cellular_chains, disk, relative_chains_between, rp, skeleton, sphere, torus
from ahss.theory import cache_for

Z = PresentedGroup.free(1)
Z2 = PresentedGroup.from_invariants(0, (2,))


def forms(C, degrees):
    return [str(homology(C, n).group) for n in degrees]


def test_zero_differential():
    C = free_complex({1: IntMatrix([[0]])})
    assert forms(C, [1, 0]) == ["Z", "Z"]


def test_multiplication_by_two():
    C = free_complex({1: IntMatrix([[2]])})
    assert forms(C, [1, 0]) == ["0", "Z/2"]


def test_dd_must_vanish():
    with pytest.raises(ChainComplexError) as exc:
        free_complex({1: IntMatrix([[1]]), 2: IntMatrix([[1]])})
    assert exc.value.degree == 2


def test_torus_h1():
    assert str(homology(cellular_chains(torus()), 1).group) == "Z^2"


def test_representatives_are_cycles():
    C = cellular_chains(rp(4))
    for n in range(5):
        H = homology(C, n)
        for v in H.representatives.columns():
            assert C.group(n - 1).is_zero_element(C.d(n)(v))


def test_identity_chain_map():
    C = cellular_chains(rp(3))
    ident = ChainMap(C, C, {n: identity_hom(C.group(n)) for n in C.degrees})
    for n in C.degrees:
        f = induced_on_homology(ident, n)
        assert f.equals(identity_hom(f.src))


def test_skeleton_inclusion_sphere():
    X = sphere(2)
    C0, C = cellular_chains(skeleton(X, 0)), cellular_chains(X)
    inc = ChainMap(C0, C, {0: identity_hom(C.group(0))})
    f = induced_on_homology(inc, 0)
    assert str(f.src) == "Z" and is_isomorphism(f)


def test_degree_two_circle_map():
    C = cellular_chains(sphere(1))
    f = ChainMap(C, C, {0: identity_hom(C.group(0)),
                        1: GroupHom(C.group(1), C.group(1), IntMatrix([[2]]))})
    g = induced_on_homology(f, 1)
    assert g.matrix == IntMatrix([[2]])


def test_commutation_is_checked():
    C = cellular_chains(disk(2))
    with pytest.raises(ChainComplexError):
        ChainMap(C, C, {2: identity_hom(C.group(2))})


def test_connecting_hom_disk():
    X = disk(2)
    s = cache_for(X).triple_ses(2, 1, -1, Z)
    delta = connecting_hom(s, 2)
    assert str(delta.src) == "Z" and str(delta.dst) == "Z"
    assert is_isomorphism(delta)


def test_connecting_hom_zero_quotient():
    C = cellular_chains(sphere(1))
    zero = ChainComplex({})
    s = ComplexSES(ChainMap(C, C, {n: identity_hom(C.group(n)) for n in C.degrees}),
                   ChainMap(C, zero, {}))
    assert connecting_hom(s, 1).is_zero()


def test_connecting_hom_matches_cellular_boundary():
    # triple (X^2, X^1, X^0) of the torus and of RP^2: the connecting map on
    # the relative groups is the cellular boundary itself
    for X in (torus(), rp(2)):
        s = cache_for(X).triple_ses(2, 1, 0, Z)
        delta = connecting_hom(s, 2)
        assert delta.matrix == X.boundary(2)


def test_tensor():
    C = cellular_chains(rp(2))
    assert forms(tensor_free_complex(C, Z), range(3)) == forms(C, range(3))
    assert forms(tensor_free_complex(cellular_chains(sphere(1)), Z2), [1, 0]) == ["Z/2", "Z/2"]
    assert forms(tensor_free_complex(C, Z2), range(3)) == ["Z/2"] * 3


def test_relative_chains():
    X = torus()
    R = relative_chains_between(X, 2, 1)
    assert forms(R, [2, 1]) == ["Z", "0"]
    assert forms(relative_chains_between(sphere(2), 2, 0), [2]) == ["Z"]
    assert forms(relative_chains_between(X, 2, 2), [0, 1, 2]) == ["0"] * 3
