import random

import numpy as np
import pytest

from binary_fields import (BinaryField, FieldError, PolyGF2k, PrimeField, bit_mod, clmul,
                           field_from_descriptor, is_irreducible, least_irreducible)
from schemas import FieldDescriptor


def test_least_irreducible_moduli():
    assert least_irreducible(2) == 0x7
    assert least_irreducible(3) == 0xb
    assert least_irreducible(4) == 0x13
    assert least_irreducible(8) == 0x11b


def test_irreducibility():
    assert is_irreducible(0x13)
    assert not is_irreducible(0x11)  # x^4 + 1 = (x + 1)^4
    assert not is_irreducible(0x15)  # x^4 + x^2 + 1 = (x^2 + x + 1)^2


def test_constructor_errors():
    with pytest.raises(FieldError):
        BinaryField(0)
    with pytest.raises(FieldError):
        BinaryField(17)
    with pytest.raises(FieldError):
        BinaryField(4, 0x11)


def test_multiplication_against_carryless_oracle(gf16):
    for a in gf16.elements():
        for b in gf16.elements():
            assert gf16.mul(a, b) == bit_mod(clmul(a, b), 0x13)


def test_field_axioms_gf16(gf16):
    elements = list(gf16.elements())
    for a in elements:
        assert gf16.add(a, a) == 0
        assert gf16.sqrt(gf16.mul(a, a)) == a
        assert gf16.mul(gf16.sqrt(a), gf16.sqrt(a)) == a
        if a:
            assert gf16.mul(a, gf16.inv(a)) == 1
            assert gf16.pow(a, 15) == 1
        for b in elements:
            assert gf16.mul(a, b) == gf16.mul(b, a)
            for c in (1, 2, 7):
                left = gf16.mul(a, gf16.add(b, c))
                assert left == gf16.add(gf16.mul(a, b), gf16.mul(a, c))


def test_generator_has_full_order(gf256):
    powers = {gf256.pow(gf256.generator, e) for e in range(255)}
    assert len(powers) == 255


def test_inverse_of_zero(gf16):
    with pytest.raises(FieldError):
        gf16.inv(0)
    with pytest.raises(FieldError):
        gf16.div(3, 0)


def test_array_arithmetic_matches_scalars(gf256):
    rng = np.random.default_rng(1)
    a = rng.integers(0, 256, size=200)
    b = rng.integers(0, 256, size=200)
    products = gf256.mul_array(a, b)
    assert [int(x) for x in products] == [gf256.mul(int(x), int(y)) for x, y in zip(a, b)]
    cubes = gf256.pow_array(a, 3)
    assert [int(x) for x in cubes] == [gf256.pow(int(x), 3) for x in a]
    assert (gf256.add_array(a, a) == 0).all()


def test_parse_and_format(gf256):
    assert gf256.format(0x1b) == "0x1b"
    assert gf256.parse("0x1b") == 0x1b
    with pytest.raises(FieldError):
        gf256.parse("0x100")
    with pytest.raises(FieldError):
        gf256.parse("zz")


def test_descriptor_round_trip(gf256):
    assert gf256.descriptor() == FieldDescriptor(k=8, modulus="0x11b")
    assert field_from_descriptor(gf256.descriptor()) == gf256
    assert field_from_descriptor(FieldDescriptor(p=5)) == PrimeField(5)
    with pytest.raises(FieldError):
        field_from_descriptor(FieldDescriptor())


def test_prime_field():
    F = PrimeField(5)
    assert F.mul(3, 4) == 2
    assert F.inv(2) == 3
    assert F.sqrt(4) in (2, 3)
    assert F.is_square(4) and not F.is_square(2)
    with pytest.raises(FieldError):
        F.sqrt(2)
    with pytest.raises(FieldError):
        PrimeField(6)


def random_poly(field, rng, degree):
    return PolyGF2k(field, [field.random_element(rng) for _ in range(degree)] + [field.random_element(rng, nonzero=True)])


def test_division_with_remainder(gf16):
    rng = random.Random(11)
    for _ in range(50):
        a = random_poly(gf16, rng, rng.randrange(0, 12))
        b = random_poly(gf16, rng, rng.randrange(0, 6))
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.degree < b.degree
    with pytest.raises(FieldError):
        divmod(PolyGF2k.one(gf16), PolyGF2k.zero(gf16))


def test_from_roots_and_roots(gf16):
    f = PolyGF2k.from_roots(gf16, [1, 5, 9])
    assert f.degree == 3 and f.leading == 1
    assert f.roots() == [1, 5, 9]
    with pytest.raises(FieldError):
        PolyGF2k.zero(gf16).roots()


def test_shift_and_reversal(gf16):
    rng = random.Random(4)
    f = random_poly(gf16, rng, 6)
    for alpha in (0, 3, 14):
        shifted = f.shift(alpha)
        for x in gf16.elements():
            assert shifted(x) == f(gf16.add(x, alpha))
    reversed_f = f.reversal(8)
    for x in range(1, 16):
        assert reversed_f(x) == gf16.mul(gf16.pow(x, 8), f(gf16.inv(x)))
    with pytest.raises(FieldError):
        f.reversal(5)


def test_frobenius_and_derivative(gf16):
    rng = random.Random(9)
    f = random_poly(gf16, rng, 5)
    g = random_poly(gf16, rng, 4)
    assert (f + g) ** 2 == f ** 2 + g ** 2
    assert (f ** 2).derivative().is_zero()
    t = PolyGF2k.t(gf16)
    assert (t ** 3).derivative() == t ** 2


def test_gcd_and_exact_division(gf16):
    common = PolyGF2k.from_roots(gf16, [2, 3])
    a = common * PolyGF2k.from_roots(gf16, [4])
    b = common * PolyGF2k.from_roots(gf16, [7, 8])
    assert a.gcd(b) == common
    assert common.divides(a)
    assert a.exact_div(common) == PolyGF2k.linear(gf16, 4)
    with pytest.raises(FieldError):
        a.exact_div(PolyGF2k.linear(gf16, 9))


def test_valuation_and_hex(gf16):
    f = PolyGF2k(gf16, [0, 0, 3, 1])
    assert f.valuation() == 2
    assert f.to_hex() == ["0x0", "0x0", "0x3", "0x1"]
    assert PolyGF2k.from_hex(gf16, f.to_hex()) == f
    assert PolyGF2k(gf16, [1, 0, 0]).degree == 0
    assert PolyGF2k.zero(gf16).degree == -1


def test_polynomials_are_immutable(gf16):
    f = PolyGF2k.t(gf16)
    with pytest.raises(AttributeError):
        f.coeffs = (1,)


def test_mixing_fields_fails(gf16, gf256):
    with pytest.raises(FieldError):
        PolyGF2k.t(gf16) + PolyGF2k.t(gf256)
