"""
Finite fields and univariate polynomials over them.

GF(2^k) elements are Python ints whose bits are polynomial coefficients
in the generator, reduced by a fixed irreducible modulus. Multiplication
goes through discrete log/exp tables so whole numpy arrays can be
multiplied at once. Small prime fields share the same interface.
"""

from functools import lru_cache
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from schemas import FieldDescriptor

MAX_BINARY_DEGREE = 16


class FieldError(ValueError):
    """Raised for invalid field parameters, zero divisions and bad elements."""


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def bit_degree(a: int) -> int:
    return a.bit_length() - 1


def bit_mod(a: int, m: int) -> int:
    """Remainder of bit-polynomial ``a`` modulo ``m``."""
    dm = bit_degree(m)
    while a and bit_degree(a) >= dm:
        a ^= m << (bit_degree(a) - dm)
    return a


def is_irreducible(m: int) -> bool:
    """Trial division by every polynomial of degree up to deg(m) / 2."""
    k = bit_degree(m)
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for divisor in range(1 << d, 1 << (d + 1)):
            if bit_mod(m, divisor) == 0:
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(k: int) -> int:
    """Numerically least irreducible polynomial of degree k over GF(2)."""
    for candidate in range((1 << k) | 1, 1 << (k + 1), 2):
        if is_irreducible(candidate):
            return candidate
    raise FieldError(f"No irreducible polynomial of degree {k}")


def _prime_factors(n: int) -> List[int]:
    factors, p = [], 2
    while p * p <= n:
        if n % p == 0:
            factors.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        factors.append(n)
    return factors


class BinaryField:
    """GF(2^k) for 1 <= k <= 16."""

    characteristic = 2

    def __init__(self, k: int, modulus: Optional[Union[int, str]] = None):
        if not 1 <= k <= MAX_BINARY_DEGREE:
            raise FieldError(f"GF(2^k) needs 1 <= k <= {MAX_BINARY_DEGREE}, got k={k}")
        if modulus is None:
            modulus = least_irreducible(k)
        elif isinstance(modulus, str):
            modulus = int(modulus, 16)
        if bit_degree(modulus) != k or not is_irreducible(modulus):
            raise FieldError(f"Modulus {modulus:#x} is not irreducible of degree {k}")

        self.k = k
        self.modulus = modulus
        self.size = 1 << k
        self.order = self.size - 1
        self.generator = self._find_generator()

        self.exp = np.zeros(2 * self.order, dtype=np.int64)
        self.log = np.zeros(self.size, dtype=np.int64)
        x = 1
        for i in range(self.order):
            self.exp[i] = x
            self.log[x] = i
            x = self._slow_mul(x, self.generator)
        self.exp[self.order:] = self.exp[:self.order]

    def _slow_mul(self, a: int, b: int) -> int:
        return bit_mod(clmul(a, b), self.modulus)

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        if self.order == 1:
            return 1
        primes = _prime_factors(self.order)
        for g in range(2, self.size):
            if all(self._slow_pow(g, self.order // p) != 1 for p in primes):
                return g
        raise FieldError("Multiplicative group has no generator")

    def __repr__(self):
        return f"BinaryField(k={self.k}, modulus={self.modulus:#x})"

    def __eq__(self, other):
        return isinstance(other, BinaryField) and (self.k, self.modulus) == (other.k, other.modulus)

    def __hash__(self):
        return hash(("GF2k", self.k, self.modulus))

    # scalar arithmetic

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.size:
            raise FieldError(f"{a:#x} is not an element of GF(2^{self.k})")
        return a

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def from_int(self, n: int) -> int:
        return n & 1

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add

    def neg(self, a: int) -> int:
        return a

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 0 if e > 0 else 1
        return int(self.exp[(int(self.log[a]) * e) % self.order])

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("Division by zero in GF(2^k)")
        return int(self.exp[(self.order - int(self.log[a])) % self.order])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def sqrt(self, a: int) -> int:
        """Inverse Frobenius: every element of GF(2^k) has exactly one square root."""
        return self.pow(a, self.size // 2)

    def is_square(self, a: int) -> bool:
        return True

    # vectorised arithmetic

    def add_array(self, a, b) -> np.ndarray:
        return np.bitwise_xor(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))

    def mul_array(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        product = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, product)

    def pow_array(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        powered = self.exp[(self.log[a] * e) % self.order]
        return np.where(a == 0, 0, powered)

    # enumeration and I/O

    def elements(self) -> Iterator[int]:
        return iter(range(self.size))

    def random_element(self, rng, nonzero: bool = False) -> int:
        if nonzero:
            return rng.randrange(1, self.size)
        return rng.randrange(self.size)

    def format(self, a: int) -> str:
        return f"{int(a):#x}"

    def parse(self, text: Union[str, int]) -> int:
        try:
            value = int(text, 16) if isinstance(text, str) else int(text)
        except ValueError as exc:
            raise FieldError(f"Not a hex field element: {text!r}") from exc
        return self.check(value)

    def descriptor(self) -> FieldDescriptor:
        return FieldDescriptor(k=self.k, modulus=f"{self.modulus:#x}")


class PrimeField:
    """GF(p) for a small prime p, used for the odd-characteristic checks."""

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.size = p
        self.order = p - 1

    def __repr__(self):
        return f"PrimeField(p={self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and self.p == other.p

    def __hash__(self):
        return hash(("GFp", self.p))

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.p:
            raise FieldError(f"{a} is not an element of GF({self.p})")
        return a

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def from_int(self, n: int) -> int:
        return n % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        return pow(a, e, self.p)

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise FieldError(f"Division by zero in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def is_square(self, a: int) -> bool:
        return a == 0 or self.p == 2 or pow(a, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, a: int) -> int:
        for x in range(self.p):
            if x * x % self.p == a % self.p:
                return x
        raise FieldError(f"{a} is not a square in GF({self.p})")

    def add_array(self, a, b) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % self.p

    def mul_array(self, a, b) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64)) % self.p

    def pow_array(self, a, e: int) -> np.ndarray:
        result = np.ones_like(np.asarray(a, dtype=np.int64))
        for _ in range(e):
            result = self.mul_array(result, a)
        return result

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def random_element(self, rng, nonzero: bool = False) -> int:
        return rng.randrange(1 if nonzero else 0, self.p)

    def format(self, a: int) -> str:
        return f"{int(a):#x}"

    def parse(self, text: Union[str, int]) -> int:
        try:
            value = int(text, 16) if isinstance(text, str) else int(text)
        except ValueError as exc:
            raise FieldError(f"Not a field element: {text!r}") from exc
        return self.check(value)

    def descriptor(self) -> FieldDescriptor:
        return FieldDescriptor(p=self.p)


Field = Union[BinaryField, PrimeField]


def field_from_descriptor(descriptor: FieldDescriptor) -> Field:
    if descriptor.p is not None:
        if descriptor.k is not None:
            raise FieldError("Field descriptor gives both k and p")
        return PrimeField(descriptor.p)
    if descriptor.k is None:
        raise FieldError("Field descriptor needs k or p")
    return BinaryField(descriptor.k, descriptor.modulus)


class PolyGF2k:
    """
    Immutable univariate polynomial over a finite field.

    Coefficients are stored lowest degree first with trailing zeros
    stripped; the zero polynomial has degree -1.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable[int] = ()):
        values = [field.check(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(values))

    def __setattr__(self, name, value):
        raise AttributeError("PolyGF2k is immutable")

    # constructors

    @classmethod
    def zero(cls, field: Field) -> "PolyGF2k":
        return cls(field)

    @classmethod
    def one(cls, field: Field) -> "PolyGF2k":
        return cls(field, [1])

    @classmethod
    def t(cls, field: Field) -> "PolyGF2k":
        return cls(field, [0, 1])

    @classmethod
    def constant(cls, field: Field, c: int) -> "PolyGF2k":
        return cls(field, [c])

    @classmethod
    def monomial(cls, field: Field, c: int, degree: int) -> "PolyGF2k":
        return cls(field, [0] * degree + [c])

    @classmethod
    def linear(cls, field: Field, root: int) -> "PolyGF2k":
        """t - root."""
        return cls(field, [field.neg(root), 1])

    @classmethod
    def from_roots(cls, field: Field, roots: Sequence[int]) -> "PolyGF2k":
        result = cls.one(field)
        for r in roots:
            result = result * cls.linear(field, r)
        return result

    @classmethod
    def random(cls, field: Field, rng, max_degree: int) -> "PolyGF2k":
        return cls(field, [field.random_element(rng) for _ in range(max_degree + 1)])

    @classmethod
    def from_hex(cls, field: Field, values: Sequence[str]) -> "PolyGF2k":
        return cls(field, [field.parse(v) for v in values])

    def to_hex(self) -> List[str]:
        return [self.field.format(c) for c in self.coeffs]

    # basic queries

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def valuation(self) -> int:
        """Largest power of t dividing a nonzero polynomial."""
        if self.is_zero():
            raise FieldError("The zero polynomial has no valuation")
        return next(i for i, c in enumerate(self.coeffs) if c)

    def __eq__(self, other):
        return isinstance(other, PolyGF2k) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"PolyGF2k({self.field!r}, {list(self.to_hex())})"

    def _same_field(self, other: "PolyGF2k") -> None:
        if not isinstance(other, PolyGF2k) or other.field != self.field:
            raise FieldError("Polynomials over different fields")

    # arithmetic

    def __add__(self, other: "PolyGF2k") -> "PolyGF2k":
        self._same_field(other)
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyGF2k(f, [f.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self) -> "PolyGF2k":
        return PolyGF2k(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: "PolyGF2k") -> "PolyGF2k":
        return self + (-other)

    def scale(self, c: int) -> "PolyGF2k":
        return PolyGF2k(self.field, [self.field.mul(c, a) for a in self.coeffs])

    def __mul__(self, other) -> "PolyGF2k":
        if not isinstance(other, PolyGF2k):
            return self.scale(self.field.check(other))
        self._same_field(other)
        if self.is_zero() or other.is_zero():
            return PolyGF2k(self.field)
        f = self.field
        b = np.array(other.coeffs, dtype=np.int64)
        out = np.zeros(len(self.coeffs) + len(b) - 1, dtype=np.int64)
        for i, c in enumerate(self.coeffs):
            if c:
                window = slice(i, i + len(b))
                out[window] = f.add_array(out[window], f.mul_array(c, b))
        return PolyGF2k(f, out.tolist())

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "PolyGF2k":
        if e < 0:
            raise FieldError("Negative powers of polynomials are undefined")
        result, base = PolyGF2k.one(self.field), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "PolyGF2k") -> Tuple["PolyGF2k", "PolyGF2k"]:
        self._same_field(other)
        if other.is_zero():
            raise FieldError("Division by the zero polynomial")
        f = self.field
        remainder = list(self.coeffs)
        quotient = [0] * max(len(remainder) - other.degree, 0)
        lead_inv = f.inv(other.leading)
        for shift in range(len(remainder) - len(other.coeffs), -1, -1):
            c = f.mul(remainder[shift + other.degree], lead_inv)
            if c == 0:
                continue
            quotient[shift] = c
            for i, b in enumerate(other.coeffs):
                remainder[shift + i] = f.sub(remainder[shift + i], f.mul(c, b))
        return PolyGF2k(f, quotient), PolyGF2k(f, remainder)

    def __floordiv__(self, other: "PolyGF2k") -> "PolyGF2k":
        return divmod(self, other)[0]

    def __mod__(self, other: "PolyGF2k") -> "PolyGF2k":
        return divmod(self, other)[1]

    def divides(self, other: "PolyGF2k") -> bool:
        return (other % self).is_zero()

    def exact_div(self, other: "PolyGF2k") -> "PolyGF2k":
        quotient, remainder = divmod(self, other)
        if not remainder.is_zero():
            raise FieldError("Polynomial division is not exact")
        return quotient

    def monic(self) -> "PolyGF2k":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading))

    def gcd(self, other: "PolyGF2k") -> "PolyGF2k":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "PolyGF2k":
        f = self.field
        return PolyGF2k(f, [f.mul(f.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int) -> int:
        f = self.field
        result = 0
        for c in reversed(self.coeffs):
            result = f.add(f.mul(result, x), c)
        return result

    def shift(self, alpha: int) -> "PolyGF2k":
        """The polynomial g(t) = f(t + alpha)."""
        f = self.field
        step = PolyGF2k(f, [alpha, 1])
        result = PolyGF2k(f)
        for c in reversed(self.coeffs):
            result = result * step + PolyGF2k.constant(f, c)
        return result

    def reversal(self, total_degree: int) -> "PolyGF2k":
        """t^total_degree * f(1/t); total_degree must be at least deg f."""
        if total_degree < self.degree:
            raise FieldError(f"Reversal degree {total_degree} below polynomial degree {self.degree}")
        padded = list(self.coeffs) + [0] * (total_degree + 1 - len(self.coeffs))
        return PolyGF2k(self.field, reversed(padded))

    def roots(self) -> List[int]:
        """Rational roots, by evaluation at every field element."""
        if self.is_zero():
            raise FieldError("The zero polynomial vanishes everywhere")
        return [x for x in self.field.elements() if self(x) == 0]
