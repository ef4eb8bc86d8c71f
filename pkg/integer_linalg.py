"""
Exact integer linear algebra on numpy object arrays.

Normal forms by elementary row/column operations over the integers,
integer kernels and saturations, fraction-free determinants and a few
helpers over the rationals and over GF(2).
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np


def as_int_matrix(rows) -> np.ndarray:
    """Copy anything matrix-like into a 2-d numpy object array of Python ints."""
    matrix = np.array(rows, dtype=object)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    return np.vectorize(int, otypes=[object])(matrix) if matrix.size else matrix


def exgcd(a: int, b: int) -> np.ndarray:
    """
    Unimodular 2x2 matrix M with M @ [a, b] = [gcd(a, b), 0].

    If a divides b, M[0, 1] is 0.
    """
    if a == 0 and b == 0:
        return np.eye(2, dtype=object)
    a_sign = -1 if a < 0 else 1
    b_sign = -1 if b < 0 else 1
    a, b = a * a_sign, b * b_sign

    M = np.array([[b, 0, 1],
                  [a, 1, 0]], dtype=object)
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1]

    g = M[0, 0]
    M = M[:, 1:].copy()
    M *= np.array([a_sign, b_sign], dtype=object)
    if g != 0:
        M[1] = [-b_sign * b // g, a_sign * a // g]
    return M


def inv_2x2_det1(M: np.ndarray) -> np.ndarray:
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=object)


def normal_form(A) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Diagonalise an integer matrix by unimodular row and column operations.

    Returns:
        Tuple (S, D, T, Sinv, Tinv) with A == S @ D @ T, D diagonal of the
        shape of A, S and T unimodular with the given inverses. The diagonal
        carries no divisibility guarantee; see ``invariant_factors``.
    """
    A = as_int_matrix(A)
    D = A.copy()
    rows, cols = D.shape
    S, T = np.eye(rows, dtype=object), np.eye(cols, dtype=object)
    Sinv, Tinv = S.copy(), T.copy()

    def clear_row(i):
        if all(D[i, j] == 0 for j in range(i + 1, cols)):
            return False
        for j in range(i + 1, cols):
            M = exgcd(D[i, i], D[i, j]).T
            D[:, [i, j]] = D[:, [i, j]] @ M
            T[[i, j]] = inv_2x2_det1(M) @ T[[i, j]]
            Tinv[:, [i, j]] = Tinv[:, [i, j]] @ M
        return True

    def clear_col(i):
        if all(D[j, i] == 0 for j in range(i + 1, rows)):
            return False
        for j in range(i + 1, rows):
            M = exgcd(D[i, i], D[j, i])
            D[[i, j]] = M @ D[[i, j]]
            S[:, [i, j]] = S[:, [i, j]] @ inv_2x2_det1(M)
            Sinv[[i, j]] = M @ Sinv[[i, j]]
        return True

    for i in range(min(rows, cols)):
        clear_col(i)
        while clear_row(i) and clear_col(i):
            pass

    return S, D, T, Sinv, Tinv


def diagonal(D: np.ndarray) -> List[int]:
    return [int(D[i, i]) for i in range(min(D.shape))]


def invariant_factors(A) -> List[int]:
    """
    Invariant factors d1 | d2 | ... of the cokernel of a square integer matrix.

    Zero entries stand for free summands; units are dropped.
    """
    _, D, _, _, _ = normal_form(A)
    entries = [abs(d) for d in diagonal(D)]
    entries += [0] * (as_int_matrix(A).shape[0] - len(entries))
    torsion = [d for d in entries if d != 0]
    free = len(entries) - len(torsion)
    primes = {}
    for d in torsion:
        for p, e in factorize(d).items():
            primes.setdefault(p, []).append(e)
    factors = [1] * len(torsion)
    for p, exponents in primes.items():
        exponents = [0] * (len(torsion) - len(exponents)) + sorted(exponents)
        for k, e in enumerate(exponents):
            factors[k] *= p ** e
    return [f for f in factors if f != 1] + [0] * free


def factorize(n: int) -> dict:
    n = abs(n)
    result = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            result[p] = result.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        result[n] = result.get(n, 0) + 1
    return result


def determinant(A) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    A = as_int_matrix(A)
    if A.size == 0:
        return 1
    M = [list(map(int, row)) for row in A]
    n = len(M)
    sign, previous = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // previous
        previous = M[k][k]
    return sign * M[n - 1][n - 1]


def kernel(A) -> np.ndarray:
    """Integer matrix whose columns form a basis of {x in Z^n : A x = 0}."""
    A = as_int_matrix(A)
    if A.shape[0] == 0:
        return np.eye(A.shape[1], dtype=object)
    _, D, _, _, Tinv = normal_form(A)
    diag = diagonal(D) + [0] * (A.shape[1] - min(A.shape))
    mask = [d == 0 for d in diag]
    return Tinv[:, mask]


def saturation(generators) -> Tuple[np.ndarray, int]:
    """
    Saturate the row span of ``generators`` inside Z^n.

    Returns:
        Tuple (basis, index): rows of ``basis`` span (span_Q ∩ Z^n) and
        ``index`` is the index of the row lattice in it (0 if the rows are
        dependent).
    """
    G = as_int_matrix(generators)
    S, D, _, _, _ = normal_form(G.T)
    diag = diagonal(D)
    nonzero = [i for i, d in enumerate(diag) if d != 0]
    basis = S[:, nonzero].T
    index = 1
    for i in nonzero:
        index *= abs(diag[i])
    if len(nonzero) < G.shape[0]:
        index = 0
    return basis, index


def rank(A) -> int:
    A = as_int_matrix(A)
    if A.size == 0:
        return 0
    _, D, _, _, _ = normal_form(A)
    return sum(1 for d in diagonal(D) if d != 0)


def solve_rational(basis, target) -> Optional[List[Fraction]]:
    """
    Coefficients c with sum_i c_i * basis[i] == target, or None.

    ``basis`` rows must be linearly independent.
    """
    B = [[Fraction(int(x)) for x in row] for row in as_int_matrix(basis)]
    k = len(B)
    n = len(B[0]) if k else 0
    # augmented system B^T c = target, n equations in k unknowns
    system = [[B[i][j] for i in range(k)] + [Fraction(int(target[j]))] for j in range(n)]
    pivot_cols = []
    row = 0
    for col in range(k):
        pivot = next((r for r in range(row, n) if system[r][col] != 0), None)
        if pivot is None:
            continue
        system[row], system[pivot] = system[pivot], system[row]
        lead = system[row][col]
        system[row] = [x / lead for x in system[row]]
        for r in range(n):
            if r != row and system[r][col] != 0:
                factor = system[r][col]
                system[r] = [a - factor * b for a, b in zip(system[r], system[row])]
        pivot_cols.append(col)
        row += 1
    if any(system[r][k] != 0 for r in range(row, n)):
        return None
    if len(pivot_cols) < k:
        return None
    coefficients = [Fraction(0)] * k
    for r, col in enumerate(pivot_cols):
        coefficients[col] = system[r][k]
    return coefficients


def solve_integer(basis, target) -> Optional[List[int]]:
    """Integer coefficients expressing ``target`` in the rows of ``basis``, or None."""
    coefficients = solve_rational(basis, target)
    if coefficients is None or any(c.denominator != 1 for c in coefficients):
        return None
    return [int(c) for c in coefficients]


def gf2_kernel(rows: Sequence[Sequence[int]], size: int) -> List[Tuple[int, ...]]:
    """
    Basis of {c in GF(2)^size : sum_i c_i * rows[i] == 0 mod 2}.

    ``rows`` has ``size`` entries, each an integer vector.
    """
    vectors = [[int(x) % 2 for x in row] for row in rows]
    width = len(vectors[0]) if vectors else 0
    # columns of the matrix whose columns are ``rows``: solve M c = 0
    matrix = [[vectors[i][j] for i in range(size)] for j in range(width)]
    pivots = []
    r = 0
    for col in range(size):
        pivot = next((i for i in range(r, width) if matrix[i][col]), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        for i in range(width):
            if i != r and matrix[i][col]:
                matrix[i] = [a ^ b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(size) if c not in pivots]
    basis = []
    for f in free:
        vector = [0] * size
        vector[f] = 1
        for i, col in enumerate(pivots):
            vector[col] = matrix[i][f]
        basis.append(tuple(vector))
    return basis
