import random

import numpy as np
import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

import integer_linalg as zla
from lattice_core import ade_gram


def smith_oracle(rows):
    D = smith_normal_form(Matrix(rows), domain=ZZ)
    return sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if abs(int(D[i, i])) != 1)


@pytest.mark.parametrize("label", ["A1", "A4", "D4", "D5", "D8", "E6", "E7", "E8"])
def test_invariant_factors_match_sympy(label):
    gram = ade_gram(label).gram
    assert sorted(zla.invariant_factors(gram)) == smith_oracle(gram)


def test_invariant_factors_form_a_chain():
    factors = zla.invariant_factors([[2, 0, 0], [0, 4, 0], [0, 0, 6]])
    assert factors == [2, 2, 12]
    for a, b in zip(factors, factors[1:]):
        assert b % a == 0


def test_normal_form_reconstructs_the_matrix():
    rng = random.Random(3)
    for _ in range(20):
        A = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(3)]
        S, D, T, Sinv, Tinv = zla.normal_form(A)
        assert (S @ D @ T == zla.as_int_matrix(A)).all()
        assert (S @ Sinv == np.eye(3, dtype=object)).all()
        assert (T @ Tinv == np.eye(4, dtype=object)).all()
        assert all(D[i, j] == 0 for i in range(3) for j in range(4) if i != j)


def test_determinant_matches_sympy():
    rng = random.Random(5)
    for n in range(1, 6):
        A = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        assert zla.determinant(A) == Matrix(A).det()


def test_determinant_of_singular_matrix():
    assert zla.determinant([[1, 2], [2, 4]]) == 0
    assert zla.determinant([[0, 1], [1, 0]]) == -1


def test_kernel_is_annihilated_and_full():
    A = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]]
    K = zla.kernel(A)
    assert K.shape == (4, 4 - zla.rank(A))
    assert not (zla.as_int_matrix(A) @ K).any()


def test_saturation_index():
    basis, index = zla.saturation([[2, 0], [0, 1]])
    assert index == 2
    assert abs(zla.determinant(basis)) == 1


def test_saturation_of_dependent_rows():
    _, index = zla.saturation([[1, 1], [2, 2]])
    assert index == 0


def test_solve_integer_and_rational():
    assert zla.solve_integer([[2, 0], [0, 1]], [4, 3]) == [2, 3]
    assert zla.solve_integer([[2, 0], [0, 1]], [1, 3]) is None
    assert zla.solve_rational([[2, 0], [0, 1]], [1, 3]) is not None


def test_gf2_kernel():
    rows = [[1, 1], [1, 1], [0, 2]]
    kernel = zla.gf2_kernel(rows, 3)
    assert set(kernel) == {(1, 1, 0), (0, 0, 1)}
