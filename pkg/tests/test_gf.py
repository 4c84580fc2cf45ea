import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatcode.errors import (
    DivisionByZero,
    FieldMismatch,
    NonPrimeCharacteristic,
    ReducibleModulus,
    UnsupportedField,
    WrongLength,
)
from flatcode.gf import (
    ExtField,
    default_ext_modulus,
    ext_expand,
    ext_field_create,
    ext_pack,
    field_arith,
    field_create,
    frobenius,
    is_irreducible_over,
    smallest_binary_irreducible,
)


# -- independent oracles: schoolbook GF(2)[x] arithmetic by trial division -----------

def _bits_mod(a, f):
    df = f.bit_length() - 1
    while a and a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def _brute_irreducible_binary(f):
    deg = f.bit_length() - 1
    for g in range(2, 1 << (deg // 2 + 1)):
        if g.bit_length() - 1 >= 1 and _bits_mod(f, g) == 0:
            return False
    return True


def _slow_mul(a, b, f):
    """Shift-and-add multiplication in GF(2)[x]/f, no tables."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> (f.bit_length() - 1):
            a ^= f
    return out


# frozen from the sieve: the smallest irreducible binary octic is x^8+x^4+x^3+x+1
GF256_MODULUS = 0x11B


def test_gf256_default_modulus_matches_sieve():
    sieve = next(f for f in range(1 << 8, 1 << 9) if _brute_irreducible_binary(f))
    assert sieve == GF256_MODULUS
    assert smallest_binary_irreducible(8) == GF256_MODULUS
    F = field_create(2, 8)
    assert sum(c << i for i, c in enumerate(F.modulus)) == GF256_MODULUS


@pytest.mark.parametrize("s", range(2, 12))
def test_default_binary_modulus_is_smallest(s):
    sieve = next(f for f in range(1 << s, 1 << (s + 1)) if _brute_irreducible_binary(f))
    assert smallest_binary_irreducible(s) == sieve


def test_prime_fields():
    F2 = field_create(2)
    assert F2.modulus == (0, 1)
    assert F2.add(1, 1) == 0
    F3 = field_create(3)
    assert F3.mul(2, 2) == 1
    assert F3.order == 3


def test_gf4_example():
    F = field_create(2, 2, modulus=(1, 1, 1))
    x = 2
    assert F.mul(x, x) == 3  # x + 1


def test_create_errors():
    with pytest.raises(NonPrimeCharacteristic):
        field_create(4)
    with pytest.raises(ReducibleModulus):
        field_create(2, 2, modulus=(1, 0, 1))  # x^2 + 1 = (x + 1)^2
    with pytest.raises(ReducibleModulus):
        field_create(2, 3, modulus=(1, 1, 1))  # wrong degree
    with pytest.raises(UnsupportedField):
        field_create(3, 2)
    with pytest.raises(UnsupportedField):
        field_create(2, 17)


@pytest.mark.parametrize("p,s", [(2, 1), (3, 1), (5, 1), (2, 2), (2, 4), (2, 8), (251, 1)])
def test_inverse_exhaustive(p, s):
    F = field_create(p, s)
    a = np.arange(1, F.order)
    assert np.all(F.vmul(a, F.vinv(a)) == 1)
    for v in range(1, F.order):
        assert F.mul(v, F.inv(v)) == 1


def test_gf256_tables_match_schoolbook():
    F = field_create(2, 8)
    for a in range(0, 256, 7):
        for b in range(256):
            assert F.mul(a, b) == _slow_mul(a, b, GF256_MODULUS)


def test_division_by_zero():
    F = field_create(2, 8)
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(DivisionByZero):
        F.div(3, 0)


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from([(2, 1), (3, 1), (7, 1), (2, 4), (2, 8), (65521, 1)]),
    st.integers(0, 1 << 20),
    st.integers(0, 1 << 20),
    st.integers(0, 1 << 20),
)
def test_field_axioms(ps, a, b, c):
    F = field_create(*ps)
    a, b, c = a % F.order, b % F.order, c % F.order
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.sub(F.add(a, b), b) == a
    assert F.add(a, F.neg(a)) == 0


def test_field_arith_dispatch():
    F = field_create(3)
    a, b = F(2), F(2)
    assert field_arith(a, b, "mul").value == 1
    assert field_arith(a, None, "inv").value == 2
    assert field_arith(a, 3, "pow").value == 2
    G = field_create(5)
    with pytest.raises(FieldMismatch):
        field_arith(a, G(1), "add")
    with pytest.raises(DivisionByZero):
        field_arith(a, F(0), "div")


# -- irreducibility over non-prime bases --------------------------------------------

def _brute_irreducible_over(F, f):
    """No monic factor of degree 1..m/2, by polynomial division."""
    m = len(f) - 1
    q = F.order
    for dg in range(1, m // 2 + 1):
        for low in itertools.product(range(q), repeat=dg):
            g = list(low) + [1]
            a = list(f)
            while len(a) - 1 >= dg:
                c = a[-1]
                shift = len(a) - 1 - dg
                for i, gi in enumerate(g):
                    a[shift + i] = F.sub(a[shift + i], F.mul(c, gi))
                a.pop()
            if not any(a):
                return False
    return True


@pytest.mark.parametrize("p,s,m", [(2, 2, 2), (2, 2, 3), (3, 1, 3), (2, 2, 4), (3, 1, 4), (5, 1, 2)])
def test_ben_or_matches_trial_division(p, s, m):
    F = field_create(p, s)
    q = F.order
    for low in itertools.product(range(q), repeat=m):
        f = list(low) + [1]
        assert is_irreducible_over(F, f) == _brute_irreducible_over(F, f), f


@pytest.mark.parametrize("q,m", [(2, 5), (4, 3), (3, 4), (256, 2), (256, 8), (256, 11), (16, 6)])
def test_default_extension_modulus(q, m):
    from flatcode.matroid import field_for_order

    F = field_for_order(q)
    f = default_ext_modulus(F, m)
    assert len(f) == m + 1 and f[-1] == 1
    assert is_irreducible_over(F, f)
    assert default_ext_modulus(F, m) == f
    E = ext_field_create(F, m)
    assert E.modulus == f


# -- extension towers ----------------------------------------------------------------

def test_gf4_over_gf2_frobenius():
    E = ext_field_create(field_create(2), 2, modulus=(1, 1, 1))
    x = E(2)
    assert frobenius(x, 1).value == 3
    assert frobenius(x, 0).value == 2


@pytest.mark.parametrize("q,m", [(2, 4), (4, 3), (3, 3), (2, 12), (16, 3), (8, 4)])
def test_frobenius_order_and_linearity_exhaustive(q, m):
    from flatcode.matroid import field_for_order

    E = ext_field_create(field_for_order(q), m)
    for x in range(E.order):
        assert E.frobenius(x, m) == x
        assert E.frobenius(x, 1) == E.pow(x, q)
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b = E.random(rng), E.random(rng)
        c = int(rng.integers(q))
        for i in range(m):
            assert E.frobenius(E.add(a, b), i) == E.add(E.frobenius(a, i), E.frobenius(b, i))
            assert E.frobenius(E.scale(c, a), i) == E.scale(c, E.frobenius(a, i))
            assert E.frobenius(E.mul(a, b), i) == E.mul(E.frobenius(a, i), E.frobenius(b, i))
        assert E.frobenius(E.frobenius(a, 2), -2) == a


@pytest.mark.parametrize("q,m", [(2, 3), (3, 2), (4, 2), (5, 2)])
def test_expand_is_bijection(q, m):
    from flatcode.matroid import field_for_order

    E = ext_field_create(field_for_order(q), m)
    seen = set()
    for x in range(E.order):
        v = tuple(E.expand(x))
        assert E.pack(v) == x
        seen.add(v)
    assert len(seen) == q**m
    assert E.expand(0) == [0] * m
    assert E.expand(1) == [1] + [0] * (m - 1)


def test_expand_linear_and_errors(rng):
    from flatcode.matroid import field_for_order

    F = field_for_order(256)
    E = ext_field_create(F, 5)
    for _ in range(100):
        a, b = E.random(rng), E.random(rng)
        s = [F.add(x, y) for x, y in zip(E.expand(a), E.expand(b))]
        assert E.expand(E.add(a, b)) == s
    with pytest.raises(WrongLength):
        E.pack([1, 2])
    x = ext_pack(E, [0, 1, 0, 0, 0])
    assert ext_expand(x) == [0, 1, 0, 0, 0]
    with pytest.raises(FieldMismatch):
        ext_expand(F(3))


@pytest.mark.parametrize("q,m", [(2, 7), (3, 3), (256, 4), (256, 11), (7, 2)])
def test_extension_field_axioms(q, m, rng):
    from flatcode.matroid import field_for_order

    E = ext_field_create(field_for_order(q), m)
    for _ in range(100):
        a, b, c = E.random(rng), E.random(rng), E.random(rng)
        assert E.mul(a, E.add(b, c)) == E.add(E.mul(a, b), E.mul(a, c))
        assert E.mul(E.mul(a, b), c) == E.mul(a, E.mul(b, c))
        if a:
            assert E.mul(a, E.inv(a)) == 1
            assert E.inv(a) == E.pow(a, E.order - 2)
    assert isinstance(E, ExtField)


def test_ext_inverse_exhaustive_small():
    from flatcode.matroid import field_for_order

    E = ext_field_create(field_for_order(4), 3)
    for a in range(1, E.order):
        assert E.mul(a, E.inv(a)) == 1


def test_ext_modulus_validation():
    F = field_create(2)
    with pytest.raises(ReducibleModulus):
        ext_field_create(F, 2, modulus=(1, 0, 1))
    with pytest.raises(UnsupportedField):
        ext_field_create(F, 65)
