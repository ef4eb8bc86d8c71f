from itertools import product

import networkx as nx
import numpy as np
import pytest

import dynkin
import lattice_core as lc


@pytest.mark.parametrize("label,count", [
    ("A1", 2), ("A3", 12), ("D4", 24), ("D5", 40), ("D8", 112), ("E6", 72), ("E7", 126), ("E8", 240),
])
def test_root_counts(label, count):
    assert len(lc.enumerate_roots(lc.ade_gram(label))) == count


ADE_UP_TO_14 = ([f"A{n}" for n in range(1, 15)] + [f"D{n}" for n in range(4, 15)]
                + ["E6", "E7", "E8"])


@pytest.mark.parametrize("label", ADE_UP_TO_14)
def test_root_strategies_agree(label):
    L = lc.ade_gram(label)
    bounded = lc.enumerate_roots(L, "bounded")
    assert bounded == lc.enumerate_roots(L, "reflection")
    assert bounded == lc.enumerate_roots(L, "both")


@pytest.mark.parametrize("label", ["A2", "A3", "D4"])
def test_roots_against_box_scan(label):
    L = lc.ade_gram(label)
    G = L.matrix()
    box = [v for v in product(range(-3, 4), repeat=L.rank)
           if int(np.array(v) @ G @ np.array(v)) == -2]
    assert lc.enumerate_roots(L) == sorted(box)
    assert lc.enumerate_roots(L, "box") == sorted(box)


def test_gram_convention():
    D4 = lc.ade_gram("D4").matrix()
    assert (np.diag(D4) == -2).all()
    assert D4[1, 2] == 1 and D4[1, 3] == 1 and D4[2, 3] == 0
    assert lc.is_negative_definite(lc.ade_gram("E8"))


def test_label_errors():
    with pytest.raises(lc.LatticeDomainError):
        lc.ade_gram("F4")
    with pytest.raises(lc.LatticeRangeError):
        lc.ade_gram("E9")
    with pytest.raises(lc.LatticeRangeError):
        lc.ade_gram("D1")


def test_indefinite_lattice_is_rejected():
    L = lc.RootLatticeModel(rank=2, gram=[[-2, 3], [3, -2]])
    with pytest.raises(lc.LatticeDomainError):
        lc.enumerate_roots(L)


@pytest.mark.parametrize("label,factors", [
    ("A2", [3]), ("D4", [2, 2]), ("D5", [4]), ("D6", [2, 2]), ("E6", [3]), ("E7", [2]), ("E8", []),
])
def test_discriminant_groups(label, factors):
    group = lc.discriminant_group(lc.ade_gram(label))
    assert group.invariant_factors == factors


def test_degenerate_discriminant_group():
    L = lc.RootLatticeModel(rank=2, gram=[[-2, 2], [2, -2]])
    with pytest.raises(lc.LatticeDomainError):
        lc.discriminant_group(L)


def test_two_length_table():
    for row in lc.l2_table(20):
        assert row["l2"] == row["expected"], row


def test_reflection_is_an_involution():
    L = lc.ade_gram("D5")
    roots = lc.enumerate_roots(L)
    r = roots[0]
    assert lc.reflect(L, r, r) == tuple(-c for c in r)
    for x in roots[:10]:
        assert lc.reflect(L, lc.reflect(L, x, r), r) == x
    with pytest.raises(lc.LatticeDomainError):
        lc.reflect(L, r, tuple(2 * c for c in r))


def test_complement_and_closure():
    D4 = lc.ade_gram("D4")
    complement = lc.orthogonal_complement(lc.embed(D4, [lc.unit(4, 0)]))
    assert complement.rank == 3
    for v in complement.images:
        assert lc.inner(D4, v, lc.unit(4, 0)) == 0

    closure, index = lc.primitive_closure(lc.embed(D4, [(2, 0, 0, 0)]))
    assert index == 2
    assert closure.images == [[1, 0, 0, 0]] or closure.images == [[-1, 0, 0, 0]]


@pytest.mark.parametrize("n", range(4, 15))
def test_complement_of_d1(n):
    cert = lc.verify_complement_isometry(n)
    assert cert.status == "verified"
    assert cert.detail["det"] == 8


def test_delta_root():
    D5 = lc.ade_gram("D5")
    delta = lc.delta_root(2)
    assert delta == (1, 1, 1, 1, 1)
    assert lc.norm(D5, delta) == -2
    assert lc.delta_chain(2).status == "verified"


def test_identify_ade():
    assert lc.identify_ade(lc.ade_gram("E7"), [("E", 7)])["isometric"]
    assert lc.identify_ade(lc.ade_gram("D3"), [("A", 3)])["isometric"]
    assert not lc.identify_ade(lc.ade_gram("D5"), [("A", 5)])["isometric"]


@pytest.mark.parametrize("label", ["D4", "D5", "D6", "E6"])
def test_max_orthogonal_roots_against_cliques(label):
    L = lc.ade_gram(label)
    roots = [r for r in lc.enumerate_roots(L) if lc.is_positive(r)]
    graph = nx.Graph()
    graph.add_nodes_from(range(len(roots)))
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if lc.inner(L, roots[i], roots[j]) == 0:
                graph.add_edge(i, j)
    clique = max(len(c) for c in nx.find_cliques(graph))
    assert lc.max_orthogonal_roots(L) == clique


def test_maximal_orthogonal_root_sets():
    sets = lc.maximal_orthogonal_root_sets(lc.ade_gram("D4"))
    assert len(sets) == 3
    assert all(len(s) == 4 for s in sets)
    assert [len(s) for s in lc.maximal_orthogonal_root_sets(lc.ade_gram("A2"))] == [1, 1, 1]


def test_root_system_type():
    L = lc.orthogonal_sum(lc.ade_gram("A2"), lc.ade_gram("A1"))
    assert sorted((letter, n) for letter, n, _ in lc.root_system_type(L)) == [("A", 1), ("A", 2)]
    [(letter, n, simple)] = lc.root_system_type(lc.ade_gram("E6"))
    assert (letter, n, len(simple)) == ("E", 6, 6)


def test_find_disjoint_A1():
    e = lc.find_disjoint_A1(lc.ade_gram("D4"), 4)
    assert e is not None
    assert e.sub_gram == (-2 * np.eye(4, dtype=int)).tolist()
    assert lc.find_disjoint_A1(lc.ade_gram("D5"), 5) is None
    with pytest.raises(lc.LatticeRangeError):
        lc.find_disjoint_A1(lc.ade_gram("D4"), 0)


def test_roots_in_quotient_of_A1_4_in_D4():
    report = lc.roots_in_quotient(lc.find_disjoint_A1(lc.ade_gram("D4"), 4))
    assert report["order"] == 2
    assert report["subgroups"] == []
    assert len(report["representatives"]) == 1


@pytest.mark.parametrize("r,m", [(2, 1), (2, 2), (4, 2), (6, 3)])
def test_factor_through(r, m):
    cert = lc.verify_factor_through(r, m)
    assert cert.status == "verified"
    assert cert.detail["witnesses"]


def test_factor_through_over_budget():
    cert = lc.verify_factor_through(4, 7, budget=13)
    assert cert.status == "not_checked"


@pytest.mark.parametrize("label", ["D6", "D7", "D8", "E7", "E8"])
def test_index_lemma(label):
    cert = lc.verify_index_lemma(label)
    assert cert.status == "verified"
    assert cert.detail["embeds"]
    assert cert.detail["min_index"] >= 4


def test_index_lemma_without_embedding():
    cert = lc.verify_index_lemma("E6")
    assert cert.detail["r"] == 5
    assert not cert.detail["embeds"]
    assert cert.status == "verified"
    assert cert.detail["vacuous"] is True
    assert lc.verify_index_lemma("D8").detail["vacuous"] is False


def test_index_lemma_ranks():
    assert lc.index_lemma_rank("D6") == 6
    assert lc.index_lemma_rank("D7") == 6
    assert lc.index_lemma_rank("E8") == 6
    with pytest.raises(lc.LatticeRangeError):
        lc.index_lemma_rank("A5")


def test_nonexistence_by_discriminant():
    cert = lc.nonexistence_by_discriminant(5, "D5")
    assert cert.status == "verified"
    assert cert.detail["det_V"] == 4
    assert not cert.detail["ratio_is_square"]


def test_extended_lattice_has_fibre_radical():
    for kodaira in ["I*_0", "I*_3", "IV*", "III*", "II*"]:
        X = lc.extended_lattice(kodaira)
        assert not (X.matrix() @ np.array(X.multiplicities)).any()
        assert lc.is_negative_definite(lc.finite_part(X))


def test_section_and_projection_are_inverse():
    X = lc.extended_lattice("I*_2")
    rank = len(X.vertices) - 1
    for i in range(rank):
        v = lc.unit(rank, i)
        assert lc.project_mod_fiber(X, lc.section_vector(X, v)) == v


def test_parity_without_vectors_is_vacuous():
    cert = lc.verify_parity_argument(lc.extended_lattice("I*_2"), [])
    assert cert.status == "verified"
    assert cert.detail["vacuous"]


def test_root_subgroups_D6():
    cert = lc.verify_root_subgroups("D6")
    assert cert.status == "verified"
    assert cert.detail["extended"] == "I*_2"


def test_affine_diagram_multiplicities_sum():
    for letter, n, total in (("D", 6, 10), ("E", 6, 12), ("E", 7, 18), ("E", 8, 30)):
        adjacency, multiplicities, _ = dynkin.affine_diagram(letter, n)
        assert sum(multiplicities) == total
        gram = dynkin.gram_from_adjacency(adjacency)
        assert not (gram @ np.array(multiplicities)).any()


def test_reflection_closure_needs_simple_root_basis():
    L = lc.RootLatticeModel(rank=2, gram=[[-2, -2], [-2, -4]])
    assert len(lc.enumerate_roots(L, "bounded")) == 4
    assert not lc.is_simple_root_basis(L)
    with pytest.raises(lc.LatticeDomainError):
        lc.enumerate_roots(L, "reflection")
    with pytest.raises(lc.LatticeDomainError):
        lc.enumerate_roots(L, "both")


@pytest.mark.parametrize("label", ["A4", "D6", "E7"])
def test_reflection_is_an_isometry(label, rng):
    L = lc.ade_gram(label)
    for i in range(L.rank):
        r = lc.unit(L.rank, i)
        for _ in range(20):
            x = [rng.randint(-5, 5) for _ in range(L.rank)]
            y = [rng.randint(-5, 5) for _ in range(L.rank)]
            assert lc.inner(L, lc.reflect(L, x, r), lc.reflect(L, y, r)) == lc.inner(L, x, y)


def test_eight_disjoint_A1_in_E8():
    e = lc.find_disjoint_A1(lc.ade_gram("E8"), 8)
    assert e is not None
    assert e.sub_gram == (-2 * np.eye(8, dtype=int)).tolist()


def test_root_subgroup_for_A1_8_in_D10():
    report = lc.roots_in_quotient(lc.find_disjoint_A1(lc.ade_gram("D10"), 8))
    assert report["subgroups"]
    for a, b, ab in report["subgroups"]:
        for cls in (a, b, ab):
            assert cls in report["representatives"]


def test_parity_on_four_outer_curves_of_I0_star():
    X = lc.extended_lattice("I*_0")
    size = len(X.vertices)
    outer = [lc.unit(size, i) for i, m in enumerate(X.multiplicities) if m == 1]
    assert len(outer) == 4
    cert = lc.verify_parity_argument(X, outer)
    assert cert.status == "verified"
    assert cert.detail["quotient_order"] == 2
    [cls] = cert.detail["classes"]
    element = cls["two_divisible"]
    assert any(element)
    assert all(t % 2 == 0 for t in element)


def test_root_subgroups_D10_eight_roots():
    cert = lc.verify_root_subgroups("D10")
    assert cert.status == "verified"
    assert cert.detail["r"] == 8
    assert cert.detail["extended"] == "I*_6"
    assert cert.detail["rows"]
    assert all(row["subgroups"] and row["parity"] == "verified" for row in cert.detail["rows"])
