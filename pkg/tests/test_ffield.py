import itertools

import pytest
from hypothesis import given, strategies as st

from moduli_census.errors import FieldMismatchError, InvalidCharacteristicError
from moduli_census.ffield import FieldElement, extend_field, make_field, quadratic_character


def test_prime_field_elements():
    F3 = make_field(3, 1)
    assert F3.order == 3
    assert [e.index for e in F3.elements()] == [0, 1, 2]
    assert F3.modulus == ()


def test_extension_order_and_determinism():
    F9a = make_field(3, 2)
    F9b = make_field(3, 2)
    assert F9a.order == 9
    assert F9a is F9b
    assert F9a.modulus == make_field(3, 2).modulus


def test_invalid_characteristic():
    with pytest.raises(InvalidCharacteristicError):
        make_field(2)
    with pytest.raises(InvalidCharacteristicError):
        make_field(9)
    with pytest.raises(InvalidCharacteristicError):
        make_field(15)


def test_squares_in_f9():
    # exhaustive oracle: squares of the 8 nonzero elements
    F9 = make_field(3, 2)
    squares = {(a * a).index for a in F9.elements() if not a.is_zero()}
    assert len(squares) == 4


def test_quadratic_character_examples():
    F3 = make_field(3)
    assert quadratic_character(F3, F3.element(0)) == 0
    assert quadratic_character(F3, F3.element(2)) == -1  # squares mod 3: {0, 1}
    F9 = make_field(3, 2)
    assert quadratic_character(F9, F9.element(-1)) == 1  # 9 = 1 mod 4


def test_character_counts_and_multiplicativity():
    for p, m in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (23, 1)]:
        K = make_field(p, m)
        chi = {a.index: quadratic_character(K, a) for a in K.elements()}
        assert sum(1 for v in chi.values() if v == 1) == (K.order - 1) // 2
        assert sum(1 for v in chi.values() if v == -1) == (K.order - 1) // 2
        for a, b in itertools.product(K.elements(), repeat=2):
            assert chi[(a * b).index] == chi[a.index] * chi[b.index]


def test_embedding_is_ring_homomorphism():
    for p, m in [(3, 1), (3, 2), (5, 1)]:
        base = make_field(p, m)
        if base.order > 9:
            continue
        for r in (2, 3):
            if base.order**r > 9**3:
                continue
            ext = extend_field(base, r)
            images = set()
            for a in base.elements():
                images.add(ext.embed(a).index)
            assert len(images) == base.order  # injective
            for a, b in itertools.product(base.elements(), repeat=2):
                assert ext.embed(a + b) == ext.embed(a) + ext.embed(b)
                assert ext.embed(a * b) == ext.embed(a) * ext.embed(b)
            assert ext.embed(base.element(1)) == ext.element(1)


def test_extend_identity_and_constants():
    F3 = make_field(3)
    assert extend_field(F3, 1) is F3
    E = extend_field(F3, 2)
    assert E.order == 9
    assert E.embed(F3.element(2)) == E.element(2)


def test_minus_one_square_in_f9():
    E = extend_field(make_field(3), 2)
    squares = {(a * a).index for a in E.elements()}
    assert E.element(-1).index in squares


def test_field_mismatch():
    F3 = make_field(3)
    F5 = make_field(5)
    with pytest.raises(FieldMismatchError):
        quadratic_character(F3, F5.element(1))
    with pytest.raises(FieldMismatchError):
        F3.element(1) + F5.element(1)


def test_inverse_and_fermat():
    for p, m in [(3, 2), (7, 1), (3, 3)]:
        K = make_field(p, m)
        for a in K.elements():
            if a.is_zero():
                continue
            assert (a * (K.element(1) / a)).index == 1
            assert (a ** (K.order - 1)).index == 1


def test_tower_arithmetic():
    F9 = make_field(3, 2)
    F81 = extend_field(F9, 2)
    assert F81.order == 81
    one = F81.element(1)
    for idx in (5, 17, 42):
        a = FieldElement(F81, F81.raw_of_index(idx))
        assert (a**80) == one or a.is_zero()
    # embedding commutes with arithmetic along the tower step
    for a in F9.elements():
        assert F81.embed(a * a) == F81.embed(a) * F81.embed(a)


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_f9_associativity_distributivity(i, j, k):
    F9 = make_field(3, 2)
    a, b, c = (FieldElement(F9, F9.raw_of_index(x)) for x in (i, j, k))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
