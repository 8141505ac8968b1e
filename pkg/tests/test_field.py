import itertools

import pytest
from hypothesis import given, strategies as st

from krawlp.errors import UnsupportedFieldError
from krawlp.field import FieldSpec, char_value, default_modulus, hamming_weight

FIELD_SIZES = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def naive_mul(a: int, b: int, p: int, modulus) -> int:
    """Schoolbook product of base-p digit polynomials, reduced by a monic modulus."""
    e = len(modulus) - 1
    da = [(a // p**i) % p for i in range(e)]
    db = [(b // p**i) % p for i in range(e)]
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    low = list(modulus)  # constant term first
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for i in range(e + 1):
                prod[k - e + i] = (prod[k - e + i] - c * low[i]) % p
    return sum(prod[i] * p**i for i in range(e))


def test_small_examples():
    f2, f3, f4 = FieldSpec.of(2), FieldSpec.of(3), FieldSpec.of(4)
    assert f2.add(1, 1) == 0
    assert f3.inv(2) == 2
    # x encodes as 2, x + 1 as 3
    assert f4.mul(2, 2) == 3


def test_default_moduli():
    assert default_modulus(2, 2) == (1, 1, 1)
    assert default_modulus(2, 3) == (1, 1, 0, 1)
    assert default_modulus(3, 2) == (1, 0, 1)


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27])
def test_multiplication_matches_polynomial_oracle(q):
    f = FieldSpec.of(q)
    for a, b in itertools.product(range(q), repeat=2):
        assert f.mul(a, b) == naive_mul(a, b, f.p, f.modulus)


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_prime_fields_are_modular_arithmetic(q):
    f = FieldSpec.of(q)
    for a, b in itertools.product(range(q), repeat=2):
        assert f.add(a, b) == (a + b) % q
        assert f.mul(a, b) == (a * b) % q


@pytest.mark.parametrize("q", FIELD_SIZES)
def test_inverses(q):
    f = FieldSpec.of(q)
    for a in range(1, q):
        assert f.mul(a, f.inv(a)) == 1
        assert f.div(a, a) == 1
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


@given(st.sampled_from(FIELD_SIZES), st.data())
def test_field_axioms(q, data):
    f = FieldSpec.of(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == 0
    assert f.sub(f.add(a, b), b) == a


@pytest.mark.parametrize("q", [1, 6, 10, 12, 49])
def test_unsupported_sizes(q):
    with pytest.raises((ValueError, UnsupportedFieldError)):
        FieldSpec.of(q)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FieldSpec.of(4, modulus=(1, 0, 1))  # x^2 + 1 = (x + 1)^2 over F_2


def test_hamming_weight():
    assert hamming_weight((0, 0, 0)) == 0
    assert hamming_weight((1, 1, 0)) == 2
    assert hamming_weight((1, 2, 0, 2)) == 3


def test_vectors_order_and_index():
    f = FieldSpec.of(3)
    vs = list(f.vectors(2))
    assert vs[:4] == [(0, 0), (0, 1), (0, 2), (1, 0)]
    assert [f.vector_index(v) for v in vs] == list(range(9))


def test_dot_product():
    f = FieldSpec.of(3)
    assert f.dot((1, 2), (2, 2)) == (2 + 4) % 3


def test_char_value():
    f = FieldSpec.of(2)
    zero = [(0, 0)]
    for x in f.vectors(2):
        assert char_value(f, zero, [x]) == 1
    assert char_value(f, [(1, 1)], [(1, 0)]) == -1
    assert char_value(f, [(1, 0), (0, 1)], [(1, 0), (0, 1)]) == 1


def test_char_value_needs_binary_field():
    with pytest.raises(UnsupportedFieldError):
        char_value(FieldSpec.of(3), [(1,)], [(1,)])
