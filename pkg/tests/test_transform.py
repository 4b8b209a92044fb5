import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import BUNDLED, bundled
from gelspec import bohr_section, context_from_basis, gelfand, gelfand_inverse
from gelspec.errors import DimMismatch, NotInContext, NotUpset
from gelspec.transform import CharacterFunction, function_from_json, restrict_section_function

DIAG4 = context_from_basis(np.eye(4))
coeffs = st.lists(st.floats(-5, 5, allow_nan=False), min_size=4, max_size=4)


def element(c, zs):
    return sum(z * q for z, q in zip(zs, c.minimal_projections))


@settings(max_examples=50, deadline=None)
@given(coeffs, coeffs, coeffs)
def test_gelfand_is_a_star_morphism(re, im, other):
    a = element(DIAG4, np.array(re) + 1j * np.array(im))
    b = element(DIAG4, other)
    fa, fb = gelfand(DIAG4, a).values, gelfand(DIAG4, b).values
    assert np.allclose(gelfand(DIAG4, a @ b).values, fa * fb, atol=1e-9)
    assert np.allclose(gelfand(DIAG4, a + b).values, fa + fb, atol=1e-9)
    assert np.allclose(gelfand(DIAG4, a.conj().T).values, np.conj(fa), atol=1e-9)
    assert np.allclose(gelfand_inverse(DIAG4, gelfand(DIAG4, a)), a, atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(coeffs)
def test_gelfand_is_isometric(zs):
    a = element(DIAG4, zs)
    assert gelfand(DIAG4, a).sup_norm() == pytest.approx(np.linalg.norm(a, 2), abs=1e-9)


def test_unit_goes_to_one_and_errors():
    assert np.allclose(gelfand(DIAG4, np.eye(4)).values, 1)
    with pytest.raises(NotInContext):
        gelfand(DIAG4, np.ones((4, 4)))
    with pytest.raises(DimMismatch):
        gelfand(DIAG4, np.eye(2))
    with pytest.raises(DimMismatch):
        CharacterFunction(DIAG4, np.zeros(3))


def test_json_round_trip():
    f = gelfand(DIAG4, np.diag([1, 2j, 0, -1]))
    g = function_from_json(DIAG4, f.to_json())
    assert np.array_equal(f.values, g.values)


@pytest.mark.parametrize("name", BUNDLED)
def test_bohr_sections_are_compatible_and_isometric(name):
    poset = bundled(name)
    rng = np.random.default_rng(3)
    for i, c in enumerate(poset.contexts):
        a = element(c, rng.normal(size=c.size))
        sf = bohr_section(poset, i, a)
        assert sf.upset == poset.upset(i)
        assert sf.is_compatible()
        assert sf.sup_norm() == pytest.approx(np.linalg.norm(a, 2), abs=1e-9)


def test_bohr_section_of_unit_and_trivial_context():
    poset = bundled("mermin_peres")
    triv = poset.trivial_index
    sf = bohr_section(poset, triv, 2.5 * np.eye(4))
    assert sf.upset == frozenset(range(len(poset)))
    assert all(np.allclose(f.values, 2.5) for f in sf.functions.values())


def test_bohr_section_in_m4_chain():
    poset = bundled("m4_chain")
    c = poset.index_by_label("C12|34")
    d = poset.index_by_label("Cdiag")
    a = np.diag([1.0, 1, 0, 0])
    sf = bohr_section(poset, c, a)
    assert sorted(sf.functions[c].values.real) == [0, 1]
    assert sorted(sf.functions[d].values.real) == [0, 0, 1, 1]
    table = poset.restriction(c, d)
    for mu in range(4):
        assert sf.functions[d].values[mu] == sf.functions[c].values[table[mu]]


def test_restrict_section_function():
    poset = bundled("m4_chain")
    c = poset.index_by_label("C12|34")
    sf = bohr_section(poset, c, np.diag([1.0, 1, 0, 0]))
    d = poset.index_by_label("C1|2|34")
    small = restrict_section_function(sf, poset.upset(d))
    assert small.upset == poset.upset(d)
    with pytest.raises(NotUpset):
        restrict_section_function(sf, [c, d])
    assert restrict_section_function(sf, sf.upset).upset == sf.upset
