import random

import pytest

import char2_weierstrass as cw
from binary_fields import FieldError, PolyGF2k


def poly(field, *coeffs):
    return PolyGF2k(field, coeffs)


def test_discriminant_agrees_with_b_invariant_oracle(gf256):
    rng = random.Random(7)
    for _ in range(100):
        w = cw.random_model(gf256, rng)
        assert cw.discriminant(w) == cw.discriminant_oracle(w)


def test_oracle_monomials():
    monomials = set(cw.discriminant_monomials_mod2())
    assert (0, 0, 4, 0, 0) in monomials  # a3^4
    assert (6, 0, 0, 0, 1) in monomials  # a1^6 a6
    assert (3, 0, 3, 0, 0) in monomials  # a1^3 a3^3
    assert len(monomials) == 6


def test_discriminant_of_simple_models(gf16):
    a6 = poly(gf16, 0, 1, 1)
    w = cw.WeierstrassModel(gf16, a1=PolyGF2k.one(gf16), a6=a6)
    assert cw.discriminant(w) == a6

    t = PolyGF2k.t(gf16)
    w = cw.WeierstrassModel(gf16, a3=t)
    assert cw.discriminant(w) == t ** 4
    assert cw.is_square(cw.discriminant(w)) == t ** 2


def test_degree_bounds(gf16):
    t = PolyGF2k.t(gf16)
    with pytest.raises(cw.WeierstrassShapeError):
        cw.WeierstrassModel(gf16, a1=t ** 3)
    with pytest.raises(cw.WeierstrassShapeError):
        cw.WeierstrassModel(gf16, a5=t)
    cw.WeierstrassModel(gf16, height=1, a6=t ** 6)


def test_model_data_round_trip(gf16, rng):
    w = cw.random_model(gf16, rng)
    assert cw.WeierstrassModel.from_data(w.to_data()) == w


def test_is_square(gf16):
    assert cw.is_square(poly(gf16, 1, 1)) is None
    f = poly(gf16, 3, 0, 5, 0, 1)
    root = cw.is_square(f)
    assert root is not None and root ** 2 == f


def test_vanishing_order(gf16):
    t = PolyGF2k.t(gf16)
    f = t ** 3 * poly(gf16, 1, 1)
    assert cw.vanishing_order(f, 0) == 3
    assert cw.vanishing_order(f, 1) == 1
    assert cw.vanishing_order(f, 2) == 0
    assert cw.vanishing_order(f, None) == 20
    with pytest.raises(FieldError):
        cw.vanishing_order(PolyGF2k.zero(gf16), 0)
    with pytest.raises(FieldError):
        cw.vanishing_order(f, None, total_degree=None)


def test_places(gf16):
    assert cw.parse_place(gf16, "inf") is None
    assert cw.parse_place(gf16, "0x3") == 3
    assert cw.format_place(gf16, None) == "inf"
    assert cw.format_place(gf16, 10) == "0xa"


def test_t23_coefficient(gf16):
    rng = random.Random(2)
    for _ in range(30):
        alpha, beta = rng.sample(range(16), 2)
        n1 = rng.randrange(1, 23, 2)
        n2 = rng.randrange(1, 24 - n1, 2)
        half = (24 - n1 - n2) // 2
        g = PolyGF2k(gf16, [rng.randrange(16) for _ in range(half)] + [1])
        result = cw.t23_argument(gf16, alpha, beta, n1, n2, g)
        assert result["matches"] and result["nonzero"]
        assert result["degree"] == 24


def test_t23_argument_rejects_bad_shapes(gf16):
    g = PolyGF2k.monomial(gf16, 1, 11)
    with pytest.raises(cw.WeierstrassShapeError):
        cw.t23_argument(gf16, 3, 3, 1, 1, g)
    with pytest.raises(cw.WeierstrassShapeError):
        cw.t23_argument(gf16, 1, 2, 2, 1, g)
    with pytest.raises(cw.WeierstrassShapeError):
        cw.t23_argument(gf16, 1, 2, 1, 1, PolyGF2k.monomial(gf16, 3, 11))
    with pytest.raises(cw.WeierstrassShapeError):
        cw.t23_argument(gf16, 1, 2, 1, 3, g)


@pytest.mark.parametrize("kind", ["III", "IV", "other"])
def test_normal_form_classification(gf16, kind):
    rng = random.Random(13)
    for _ in range(20):
        w = cw.random_normal_form(gf16, rng, kind)
        assert cw.classify_additive_normal_form(w) == kind
        assert cw.normal_form_discriminant(w) == cw.discriminant(w)


def test_normal_form_requires_shape(gf16, rng):
    with pytest.raises(cw.WeierstrassShapeError):
        cw.normal_form_parts(cw.WeierstrassModel(gf16, a1=PolyGF2k.one(gf16)))
    with pytest.raises(cw.WeierstrassShapeError):
        cw.random_normal_form(gf16, rng, "V")


def test_type_III_without_t_dividing_a3_has_non_square_discriminant(gf16):
    rng = random.Random(21)
    seen = 0
    for _ in range(40):
        w = cw.random_normal_form(gf16, rng, "III")
        report = cw.square_discriminant_check(w)
        assert report["consistent"]
        if not report["t_divides_a3p"]:
            seen += 1
            assert not report["delta_is_square"]
            assert report["v0_delta"] == 4
            wild = cw.wild_ramification_at(w, 0, "III")
            assert wild["delta"] == 1 and wild["status"] == "consistent"
    assert seen > 0


def test_square_discriminant_forces_excess_ramification(gf16, rng):
    w = cw.square_discriminant_normal_form(gf16, rng)
    report = cw.square_discriminant_check(w)
    assert report["classification"] == "III"
    assert report["delta_is_square"]
    assert report["t_divides_a3p"]
    assert report["v0_delta"] >= 8
    assert report["excess_ramification"]


def test_type_IV_is_tame(gf16, rng):
    w = cw.random_normal_form(gf16, rng, "IV")
    wild = cw.wild_ramification_at(w, 0, "IV")
    assert wild["v_delta"] == 4
    assert wild["delta"] == 0
    assert wild["status"] == "consistent"
    assert not wild["exceeds_two"]


def test_inconsistent_assertion(gf16, rng):
    w = cw.random_normal_form(gf16, rng, "IV")
    assert cw.wild_ramification_at(w, 0, "I*_1")["status"] == "inconsistent"


def test_place_reports_for_multiplicative_model(gf16):
    w = cw.WeierstrassModel(gf16, a1=PolyGF2k.one(gf16), a6=poly(gf16, 0, 1, 1))
    report = cw.place_reports(w)
    finite = {p["place"]: p for p in report["places"] if p["place"] != "inf"}
    assert set(finite) == {"0x0", "0x1"}
    assert all(p["classification"] == "I_1" and p["delta"] == 0 for p in finite.values())
    assert report["rational_total"] == 24
    assert report["splits"]
    assert report["odd_multiplicative"] == ["0x0", "0x1"]
    assert not report["square"]


def test_place_reports_reject_singular_models(gf16):
    with pytest.raises(cw.WeierstrassShapeError):
        cw.place_reports(cw.WeierstrassModel(gf16))


def test_shift_moves_places(gf16, rng):
    w = cw.random_model(gf16, rng)
    delta = cw.discriminant(w)
    for alpha in (1, 6):
        assert cw.discriminant(w.shift(alpha)) == delta.shift(alpha)
