"""
Weierstrass models y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over
GF(2^k)[t] and the discriminant bookkeeping used to rule out elliptic
fibrations with too few singular fibres.

Only the pieces of Tate's algorithm needed for the additive normal form
with a1 = t^2 are implemented; everything deeper is reported as "other".
"""

import random
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

import sympy

from binary_fields import BinaryField, FieldError, PolyGF2k, field_from_descriptor
from fiber_combinatorics import fiber_table
from schemas import PlaceReport, WeierstrassModelData

COEFFICIENTS = ("a1", "a2", "a3", "a4", "a6")
WEIGHTS = {"a1": 1, "a2": 2, "a3": 3, "a4": 4, "a6": 6}
K3_HEIGHT = 2
INFINITY = "inf"

Place = Optional[int]


class WeierstrassShapeError(ValueError):
    """Raised when a model violates its degree bounds or the requested normal form."""


class WeierstrassModel:
    """
    Coefficients a1, a2, a3, a4, a6 in K[t] with deg(a_i) <= height * i.

    height 2 is the K3 case (discriminant degree 24); height 1 gives
    rational elliptic surfaces and is only used for small examples.
    """

    def __init__(self, field: BinaryField, height: int = K3_HEIGHT, **coefficients: PolyGF2k):
        if field.characteristic != 2:
            raise WeierstrassShapeError("Weierstrass models here live in characteristic 2")
        unknown = set(coefficients) - set(COEFFICIENTS)
        if unknown:
            raise WeierstrassShapeError(f"Unknown coefficients: {sorted(unknown)}")
        self.field = field
        self.height = height
        for name in COEFFICIENTS:
            poly = coefficients.get(name) or PolyGF2k.zero(field)
            if poly.field != field:
                raise WeierstrassShapeError(f"{name} lives over a different field")
            bound = height * WEIGHTS[name]
            if poly.degree > bound:
                raise WeierstrassShapeError(f"deg({name}) = {poly.degree} exceeds {bound}")
            setattr(self, name, poly)

    @property
    def discriminant_degree(self) -> int:
        return 12 * self.height

    def coefficients(self) -> Dict[str, PolyGF2k]:
        return {name: getattr(self, name) for name in COEFFICIENTS}

    def shift(self, alpha: int) -> "WeierstrassModel":
        """Move the place t = alpha to t = 0."""
        return WeierstrassModel(self.field, self.height,
                                **{n: p.shift(alpha) for n, p in self.coefficients().items()})

    def at_infinity(self) -> "WeierstrassModel":
        """Model in s = 1/t, so that t = infinity becomes s = 0."""
        return WeierstrassModel(self.field, self.height,
                                **{n: p.reversal(self.height * WEIGHTS[n])
                                   for n, p in self.coefficients().items()})

    def to_data(self) -> WeierstrassModelData:
        return WeierstrassModelData(field=self.field.descriptor(),
                                    **{n: p.to_hex() for n, p in self.coefficients().items()})

    @classmethod
    def from_data(cls, data: WeierstrassModelData, height: int = K3_HEIGHT) -> "WeierstrassModel":
        try:
            field = field_from_descriptor(data.field)
        except FieldError as exc:
            raise WeierstrassShapeError(str(exc)) from exc
        return cls(field, height, **{n: PolyGF2k.from_hex(field, getattr(data, n)) for n in COEFFICIENTS})

    def __eq__(self, other):
        return (isinstance(other, WeierstrassModel) and self.height == other.height
                and self.coefficients() == other.coefficients())

    def __repr__(self):
        return f"WeierstrassModel({self.field!r}, height={self.height})"


def discriminant(w: WeierstrassModel) -> PolyGF2k:
    """Delta = a3^4 + a1^3 a3^3 + a1^4 a4^2 + a1^4 a2 a3^2 + a1^5 a3 a4 + a1^6 a6."""
    a1, a2, a3, a4, a6 = (w.a1, w.a2, w.a3, w.a4, w.a6)
    a1_4 = a1 ** 4
    return (a3 ** 4 + a1 ** 3 * a3 ** 3 + a1_4 * a4 ** 2 + a1_4 * a2 * a3 ** 2
            + a1_4 * a1 * a3 * a4 + a1_4 * a1 ** 2 * a6)


@lru_cache(maxsize=1)
def discriminant_monomials_mod2() -> Tuple[Tuple[int, ...], ...]:
    """
    Exponent vectors (in a1, a2, a3, a4, a6) of the classical integral
    discriminant whose coefficients are odd.
    """
    a1, a2, a3, a4, a6 = sympy.symbols("a1 a2 a3 a4 a6")
    b2 = a1 ** 2 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 ** 2 + 4 * a6
    b8 = a1 ** 2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 ** 2 - a4 ** 2
    delta = -b2 ** 2 * b8 - 8 * b4 ** 3 - 27 * b6 ** 2 + 9 * b2 * b4 * b6
    poly = sympy.Poly(sympy.expand(delta), a1, a2, a3, a4, a6)
    return tuple(sorted(monom for monom, coeff in poly.terms() if int(coeff) % 2))


def discriminant_oracle(w: WeierstrassModel) -> PolyGF2k:
    """Discriminant evaluated from the mod-2 reduction of the b-invariant formula."""
    values = [w.a1, w.a2, w.a3, w.a4, w.a6]
    total = PolyGF2k.zero(w.field)
    for monomial in discriminant_monomials_mod2():
        term = PolyGF2k.one(w.field)
        for poly, e in zip(values, monomial):
            if e:
                term = term * poly ** e
        total = total + term
    return total


def is_square(f: PolyGF2k) -> Optional[PolyGF2k]:
    """
    Square root of f in characteristic 2, or None.

    f is a square iff its odd-degree coefficients vanish; the root takes
    the Frobenius-inverse of each even coefficient.
    """
    field = f.field
    if field.characteristic != 2:
        raise FieldError("is_square works in characteristic 2")
    if any(c for c in f.coeffs[1::2]):
        return None
    return PolyGF2k(field, [field.sqrt(c) for c in f.coeffs[0::2]])


def parse_place(field: BinaryField, text: Union[str, int, None]) -> Place:
    if text is None or (isinstance(text, str) and text.lower() in ("inf", "infinity", "oo")):
        return None
    return field.parse(text)


def format_place(field: BinaryField, place: Place) -> str:
    return INFINITY if place is None else field.format(place)


def vanishing_order(f: PolyGF2k, place: Place, total_degree: Optional[int] = 24) -> int:
    """
    Order of vanishing of f at t = place, or at infinity when place is None.

    At infinity f is read as a form of degree ``total_degree`` (24 for a K3
    discriminant). With ``total_degree=None`` the plain co-degree is not
    defined and infinity raises.
    """
    if f.is_zero():
        raise FieldError("The zero polynomial has no vanishing order")
    if place is None:
        if total_degree is None:
            raise FieldError("Vanishing order at infinity needs a total degree")
        if f.degree > total_degree:
            raise FieldError(f"Degree {f.degree} exceeds total degree {total_degree}")
        return total_degree - f.degree
    return f.shift(place).valuation()


def t23_argument(field: BinaryField, alpha: int, beta: int, n1: int, n2: int,
                 square_part: PolyGF2k) -> Dict:
    """
    Build Delta = (t + alpha)^n1 (t + beta)^n2 g^2 and read off its t^23 coefficient.

    With n1, n2 odd and g monic the coefficient is alpha + beta, which is
    nonzero for distinct places; a K3 discriminant needs it to vanish.
    """
    if alpha == beta:
        raise WeierstrassShapeError("The two odd multiplicative places must differ")
    if n1 % 2 == 0 or n2 % 2 == 0:
        raise WeierstrassShapeError(f"n1 and n2 must be odd, got {n1}, {n2}")
    if square_part.is_zero() or square_part.leading != 1:
        raise WeierstrassShapeError("The square part must be monic")
    if n1 + n2 + 2 * square_part.degree != 24:
        raise WeierstrassShapeError(
            f"Degrees do not add to 24: {n1} + {n2} + 2*{square_part.degree}")

    delta = (PolyGF2k(field, [alpha, 1]) ** n1 * PolyGF2k(field, [beta, 1]) ** n2
             * square_part ** 2)
    coefficient = delta.coeff(23)
    expected = field.add(alpha, beta)
    return {
        "alpha": field.format(alpha),
        "beta": field.format(beta),
        "n1": n1,
        "n2": n2,
        "degree": delta.degree,
        "coefficient_t23": field.format(coefficient),
        "alpha_plus_beta": field.format(expected),
        "matches": coefficient == expected,
        "nonzero": coefficient != 0,
    }


def normal_form_parts(w: WeierstrassModel) -> Dict[str, PolyGF2k]:
    """
    Split a model of shape a1 = t^2, a2 = t a2', a3 = t a3', a4 = t a4', a6 = t^2 a6'.

    Returns:
        Dictionary with the primed coefficients
    """
    t = PolyGF2k.t(w.field)
    if w.a1 != t ** 2:
        raise WeierstrassShapeError(f"Normal form needs a1 = t^2, got {w.a1.to_hex()}")
    parts = {}
    for name, power in (("a2", 1), ("a3", 1), ("a4", 1), ("a6", 2)):
        quotient, remainder = divmod(getattr(w, name), t ** power)
        if not remainder.is_zero():
            raise WeierstrassShapeError(f"Normal form needs t^{power} | {name}")
        parts[name + "p"] = quotient
    return parts


def classify_additive_normal_form(w: WeierstrassModel) -> str:
    """III iff t does not divide a4'; IV iff t | a4' but not a3'; else other."""
    parts = normal_form_parts(w)
    if parts["a4p"].coeff(0) != 0:
        return "III"
    if parts["a3p"].coeff(0) != 0:
        return "IV"
    return "other"


def normal_form_discriminant(w: WeierstrassModel) -> PolyGF2k:
    """t^4 (a3'^4 + t^5 a3'^3 + t^6 a4'^2 + t^7 a2' a3'^2 + t^8 a3' a4' + t^10 a6')."""
    p = normal_form_parts(w)
    field = w.field

    def t_pow(n):
        return PolyGF2k.monomial(field, 1, n)

    inner = (p["a3p"] ** 4 + t_pow(5) * p["a3p"] ** 3 + t_pow(6) * p["a4p"] ** 2
             + t_pow(7) * p["a2p"] * p["a3p"] ** 2 + t_pow(8) * p["a3p"] * p["a4p"]
             + t_pow(10) * p["a6p"])
    return t_pow(4) * inner


def wild_ramification_at(w: WeierstrassModel, place: Place, asserted: str) -> Dict:
    """
    delta = v(Delta) - e for an asserted Kodaira type at ``place``.

    The report is "consistent" when delta respects the table's lower bound
    (and equals it for types with fixed delta).
    """
    record = fiber_table(asserted)
    v = vanishing_order(discriminant(w), place, w.discriminant_degree)
    delta = v - record.e_v
    if delta < 0:
        status = "inconsistent"
    elif delta < record.delta_min or (record.delta_fixed and delta != record.delta_min):
        status = "inconsistent"
    else:
        status = "consistent"
    return {
        "place": format_place(w.field, place),
        "type": record.kodaira,
        "v_delta": v,
        "e_v": record.e_v,
        "delta": delta,
        "delta_min": record.delta_min,
        "exceeds_two": delta > 2,
        "status": status,
    }


def _classify_place(w: WeierstrassModel, place: Place, v: int) -> Tuple[str, Optional[int]]:
    local = w.at_infinity() if place is None else w.shift(place)
    if local.a1.coeff(0) != 0:
        return f"I_{v}", 0
    try:
        kind = classify_additive_normal_form(local)
    except WeierstrassShapeError:
        return "additive", None
    if kind == "other":
        return "additive-other", None
    return kind, v - fiber_table(kind).e_v


def place_reports(w: WeierstrassModel) -> Dict:
    """
    Local data of Delta at every rational place and at infinity.

    Multiplicative places (a1 nonzero there) are I_v with delta 0;
    additive places in the t^2 normal form are classified as III or IV.
    The accounting total equals deg Delta at infinity plus every finite
    order, which is 24 exactly when Delta splits over the field.
    """
    delta = discriminant(w)
    if delta.is_zero():
        raise WeierstrassShapeError("Singular model: the discriminant vanishes identically")
    reports: List[PlaceReport] = []
    places: List[Place] = list(w.field.elements()) + [None]
    finite_total = 0
    for place in places:
        v = vanishing_order(delta, place, w.discriminant_degree)
        if v == 0:
            continue
        if place is not None:
            finite_total += v
        classification, wild = _classify_place(w, place, v)
        reports.append(PlaceReport(place=format_place(w.field, place), v_delta=v,
                                   classification=classification, delta=wild))
    at_infinity = w.discriminant_degree - delta.degree
    odd_multiplicative = [r.place for r in reports
                          if r.classification.startswith("I_") and r.v_delta % 2]
    return {
        "places": [r.model_dump() for r in reports],
        "rational_total": finite_total + at_infinity,
        "splits": finite_total == delta.degree,
        "odd_multiplicative": odd_multiplicative,
        "square": is_square(delta) is not None,
    }


# seeded generators

def random_model(field: BinaryField, rng: random.Random, height: int = K3_HEIGHT) -> WeierstrassModel:
    return WeierstrassModel(field, height, **{
        name: PolyGF2k.random(field, rng, height * WEIGHTS[name]) for name in COEFFICIENTS})


def random_normal_form(field: BinaryField, rng: random.Random, kind: Optional[str] = None) -> WeierstrassModel:
    """
    Random K3 model in the additive normal form at t = 0.

    Args:
        kind: "III" forces a4'(0) != 0, "IV" forces a4'(0) = 0 and a3'(0) != 0,
            "other" forces both to vanish; None leaves them random
    """
    t = PolyGF2k.t(field)
    a2p = PolyGF2k.random(field, rng, 3)
    a3p = PolyGF2k.random(field, rng, 5)
    a4p = PolyGF2k.random(field, rng, 7)
    a6p = PolyGF2k.random(field, rng, 10)

    def with_constant(poly, c):
        coeffs = list(poly.coeffs) or [0]
        coeffs[0] = c
        return PolyGF2k(field, coeffs)

    if kind == "III":
        a4p = with_constant(a4p, field.random_element(rng, nonzero=True))
    elif kind == "IV":
        a4p = with_constant(a4p, 0)
        a3p = with_constant(a3p, field.random_element(rng, nonzero=True))
    elif kind == "other":
        a4p = with_constant(a4p, 0)
        a3p = with_constant(a3p, 0)
    elif kind is not None:
        raise WeierstrassShapeError(f"Unknown normal-form kind: {kind}")
    return WeierstrassModel(field, a1=t ** 2, a2=t * a2p, a3=t * a3p, a4=t * a4p, a6=t ** 2 * a6p)


def square_discriminant_normal_form(field: BinaryField, rng: random.Random) -> WeierstrassModel:
    """III-shaped model with a3 = 0, a4' = 1 and a6' a square, so Delta = t^10 (1 + t^4 h^2)."""
    t = PolyGF2k.t(field)
    h = PolyGF2k.random(field, rng, 5)
    return WeierstrassModel(field, a1=t ** 2, a2=t * PolyGF2k.random(field, rng, 3),
                            a4=t, a6=t ** 2 * h ** 2)


def square_discriminant_check(w: WeierstrassModel) -> Dict:
    """
    For a III-shaped normal form: a square discriminant forces t | a3',
    and then v_0(Delta) >= 8, i.e. wild ramification above 2 at t = 0.
    """
    parts = normal_form_parts(w)
    kind = classify_additive_normal_form(w)
    delta = discriminant(w)
    square = is_square(delta) is not None
    t_divides_a3p = parts["a3p"].coeff(0) == 0
    v0 = vanishing_order(delta, 0, w.discriminant_degree)
    return {
        "classification": kind,
        "delta_is_square": square,
        "t_divides_a3p": t_divides_a3p,
        "v0_delta": v0,
        "delta_at_0": v0 - fiber_table("III").e_v if kind == "III" else None,
        "consistent": (not square) or t_divides_a3p,
        "excess_ramification": kind == "III" and t_divides_a3p and v0 - 3 > 2,
    }
