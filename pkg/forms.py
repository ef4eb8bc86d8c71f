"""
Multivariate forms and linear algebra over the finite fields of
``binary_fields``, plus projective point enumeration.

A form is a dictionary from exponent tuples to nonzero field elements.
Evaluation at many points at once is vectorised with numpy through the
field's array operations.
"""

from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from binary_fields import Field, FieldError

Monomial = Tuple[int, ...]
Point = Tuple[int, ...]


def monomials(degree: int, nvars: int) -> List[Monomial]:
    """All exponent tuples of the given total degree, x0^degree first."""
    if nvars == 1:
        return [(degree,)]
    result = []
    for first in range(degree, -1, -1):
        for rest in monomials(degree - first, nvars - 1):
            result.append((first,) + rest)
    return result


def monomial_key(m: Monomial) -> str:
    return ",".join(str(e) for e in m)


class Form:
    """Polynomial in ``nvars`` variables over a finite field (usually homogeneous)."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms: Mapping[Monomial, int] = None):
        clean: Dict[Monomial, int] = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != nvars or any(e < 0 for e in m):
                raise FieldError(f"Bad exponent tuple {m} for {nvars} variables")
            c = field.check(c)
            if c:
                clean[m] = c
        self.field = field
        self.nvars = nvars
        self.terms = clean

    # constructors

    @classmethod
    def zero(cls, field: Field, nvars: int) -> "Form":
        return cls(field, nvars)

    @classmethod
    def constant(cls, field: Field, nvars: int, c: int) -> "Form":
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, field: Field, nvars: int, i: int) -> "Form":
        exponent = [0] * nvars
        exponent[i] = 1
        return cls(field, nvars, {tuple(exponent): 1})

    @classmethod
    def linear(cls, field: Field, coefficients: Sequence[int]) -> "Form":
        n = len(coefficients)
        return cls(field, n, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coefficients)})

    @classmethod
    def from_coefficients(cls, field: Field, nvars: int, degree: int, coefficients: Sequence[int]) -> "Form":
        basis = monomials(degree, nvars)
        if len(coefficients) != len(basis):
            raise FieldError(f"A degree-{degree} form in {nvars} variables needs {len(basis)} coefficients")
        return cls(field, nvars, dict(zip(basis, coefficients)))

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def coefficients(self, degree: Optional[int] = None) -> List[int]:
        degree = self.degree if degree is None else degree
        return [self.coefficient(m) for m in monomials(degree, self.nvars)]

    def __eq__(self, other):
        return (isinstance(other, Form) and self.field == other.field
                and self.nvars == other.nvars and self.terms == other.terms)

    def __hash__(self):
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Form(nvars={self.nvars}, terms={len(self.terms)}, degree={self.degree})"

    def _same(self, other: "Form") -> None:
        if not isinstance(other, Form) or other.field != self.field or other.nvars != self.nvars:
            raise FieldError("Forms over different fields or variable sets")

    # arithmetic

    def __add__(self, other: "Form") -> "Form":
        self._same(other)
        f = self.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = f.add(terms.get(m, 0), c)
        return Form(f, self.nvars, terms)

    def __neg__(self) -> "Form":
        return Form(self.field, self.nvars, {m: self.field.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c: int) -> "Form":
        return Form(self.field, self.nvars, {m: self.field.mul(c, a) for m, a in self.terms.items()})

    def __mul__(self, other) -> "Form":
        if not isinstance(other, Form):
            return self.scale(self.field.check(other))
        self._same(other)
        f = self.field
        terms: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = f.add(terms.get(m, 0), f.mul(c1, c2))
        return Form(f, self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Form":
        result = Form.constant(self.field, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def partial(self, i: int) -> "Form":
        """Formal partial derivative in x_i (exponents reduced mod the characteristic)."""
        f = self.field
        terms: Dict[Monomial, int] = {}
        for m, c in self.terms.items():
            if m[i] == 0:
                continue
            lowered = m[:i] + (m[i] - 1,) + m[i + 1:]
            terms[lowered] = f.add(terms.get(lowered, 0), f.mul(f.from_int(m[i]), c))
        return Form(f, self.nvars, terms)

    def gradient(self) -> List["Form"]:
        return [self.partial(i) for i in range(self.nvars)]

    def evaluate(self, point: Sequence[int]) -> int:
        f = self.field
        total = 0
        for m, c in self.terms.items():
            term = c
            for x, e in zip(point, m):
                if e:
                    term = f.mul(term, f.pow(x, e))
            total = f.add(total, term)
        return total

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Values at every row of an (N, nvars) array of field elements."""
        f = self.field
        points = np.asarray(points, dtype=np.int64)
        total = np.zeros(points.shape[0], dtype=np.int64)
        powers: Dict[Tuple[int, int], np.ndarray] = {}
        for m, c in self.terms.items():
            term = np.full(points.shape[0], c, dtype=np.int64)
            for i, e in enumerate(m):
                if e:
                    if (i, e) not in powers:
                        powers[i, e] = f.pow_array(points[:, i], e)
                    term = f.mul_array(term, powers[i, e])
            total = f.add_array(total, term)
        return total

    def substitute(self, images: Sequence["Form"]) -> "Form":
        """The form obtained by replacing x_i with images[i]."""
        if len(images) != self.nvars:
            raise FieldError("One image per variable is required")
        target = images[0].nvars
        f = self.field
        cache: Dict[Tuple[int, int], Form] = {}
        result = Form.zero(f, target)
        for m, c in self.terms.items():
            term = Form.constant(f, target, c)
            for i, e in enumerate(m):
                if e:
                    if (i, e) not in cache:
                        cache[i, e] = images[i] ** e
                    term = term * cache[i, e]
            result = result + term
        return result

    def linear_substitution(self, matrix: Sequence[Sequence[int]]) -> "Form":
        """F(M y): x_i is replaced by the i-th row of M applied to new variables y."""
        return self.substitute([Form.linear(self.field, row) for row in matrix])

    def all_exponents_even(self) -> bool:
        return all(e % 2 == 0 for m in self.terms for e in m)

    def square_root(self) -> Optional["Form"]:
        """Square root of a form in characteristic 2, or None if it is not a square."""
        f = self.field
        if f.characteristic != 2:
            raise FieldError("square_root works in characteristic 2")
        if not self.all_exponents_even():
            return None
        return Form(f, self.nvars, {tuple(e // 2 for e in m): f.sqrt(c) for m, c in self.terms.items()})

    def part_in(self, i: int, e: int) -> "Form":
        """Terms of exact degree e in x_i, with x_i removed (the x_i^e coefficient)."""
        terms = {m[:i] + (0,) + m[i + 1:]: c for m, c in self.terms.items() if m[i] == e}
        return Form(self.field, self.nvars, terms)

    def drop_variable(self, i: int) -> "Form":
        """Reindex a form not involving x_i into nvars - 1 variables."""
        if any(m[i] for m in self.terms):
            raise FieldError(f"Form still involves x{i}")
        return Form(self.field, self.nvars - 1, {m[:i] + m[i + 1:]: c for m, c in self.terms.items()})

    def to_hex(self) -> Dict[str, str]:
        return {monomial_key(m): self.field.format(c) for m, c in sorted(self.terms.items(), reverse=True)}

    @classmethod
    def from_hex(cls, field: Field, nvars: int, data: Mapping[str, str]) -> "Form":
        terms = {}
        for key, value in data.items():
            terms[tuple(int(e) for e in key.split(","))] = field.parse(value)
        return cls(field, nvars, terms)


# linear algebra over a finite field

def row_reduce(field: Field, rows: Sequence[Sequence[int]]) -> Tuple[List[List[int]], List[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    matrix = [[field.check(x) for x in row] for row in rows]
    width = len(matrix[0]) if matrix else 0
    pivots: List[int] = []
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, len(matrix)) if matrix[i][col]), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        inv = field.inv(matrix[r][col])
        matrix[r] = [field.mul(inv, x) for x in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][col]:
                factor = matrix[i][col]
                matrix[i] = [field.sub(a, field.mul(factor, b)) for a, b in zip(matrix[i], matrix[r])]
        pivots.append(col)
        r += 1
    return matrix[:r], pivots


def rank(field: Field, rows: Sequence[Sequence[int]]) -> int:
    return len(row_reduce(field, rows)[1])


def kernel(field: Field, rows: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """Basis of {x : rows . x = 0} in F^ncols."""
    reduced, pivots = row_reduce(field, rows) if rows else ([], [])
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vector = [0] * ncols
        vector[free] = 1
        for row, col in zip(reduced, pivots):
            vector[col] = field.neg(row[free])
        basis.append(vector)
    return basis


def inverse(field: Field, matrix: Sequence[Sequence[int]]) -> List[List[int]]:
    n = len(matrix)
    augmented = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    reduced, pivots = row_reduce(field, augmented)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        raise FieldError("Matrix is singular")
    return [row[n:] for row in reduced]


def complete_basis(field: Field, rows: Sequence[Sequence[int]], n: int) -> List[List[int]]:
    """Extend linearly independent rows to a basis of F^n with unit vectors."""
    basis = [list(r) for r in rows]
    if rank(field, basis) != len(basis):
        raise FieldError("Rows are linearly dependent")
    for i in range(n):
        if len(basis) == n:
            break
        candidate = [int(i == j) for j in range(n)]
        if rank(field, basis + [candidate]) > len(basis):
            basis.append(candidate)
    return basis


def mat_vec(field: Field, matrix: Sequence[Sequence[int]], vector: Sequence[int]) -> List[int]:
    result = []
    for row in matrix:
        total = 0
        for a, b in zip(row, vector):
            total = field.add(total, field.mul(a, b))
        result.append(total)
    return result


def transpose(matrix: Sequence[Sequence[int]]) -> List[List[int]]:
    return [list(col) for col in zip(*matrix)]


# projective points

def normalize(field: Field, point: Iterable[int]) -> Point:
    """Scale so that the first nonzero coordinate is 1."""
    coords = [field.check(x) for x in point]
    lead = next((x for x in coords if x), None)
    if lead is None:
        raise FieldError("The zero vector is not a projective point")
    inv = field.inv(lead)
    return tuple(field.mul(inv, x) for x in coords)


def projective_point_count(size: int, dim: int) -> int:
    return (size ** (dim + 1) - 1) // (size - 1)


def projective_points(field: Field, dim: int) -> np.ndarray:
    """All normalized points of P^dim(F) as an (N, dim + 1) int64 array."""
    q = field.size
    blocks = []
    for lead in range(dim + 1):
        free = dim - lead
        tail = np.array(list(product(range(q), repeat=free)), dtype=np.int64).reshape(q ** free, free)
        block = np.zeros((tail.shape[0], dim + 1), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = tail
        blocks.append(block)
    return np.concatenate(blocks, axis=0)


def format_point(field: Field, point: Sequence[int]) -> List[str]:
    return [field.format(x) for x in point]
