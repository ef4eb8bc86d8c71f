from itertools import combinations

import networkx as nx
import pytest

import fiber_combinatorics as fc
from schemas import IncidenceProblem


@pytest.mark.parametrize("label,expected", [
    ("I*_1", ("I*", 1)), ("I1*", ("I*", 1)), ("I_0^*", ("I*", 0)), ("I6", ("I", 6)),
    ("I_12", ("I", 12)), ("IV*", ("IV*", None)), ("III", ("III", None)), ("II*", ("II*", None)),
])
def test_parse_kodaira(label, expected):
    assert fc.parse_kodaira(label) == expected


@pytest.mark.parametrize("label", ["I_0", "V", "I*_", ""])
def test_parse_kodaira_rejects(label):
    with pytest.raises(fc.FiberTypeError):
        fc.parse_kodaira(label)


@pytest.mark.parametrize("label,e_v,delta_min,n_v", [
    ("I_5", 5, 0, 2), ("II", 2, 2, 0), ("III", 3, 1, 1), ("IV", 4, 0, 1),
    ("I*_0", 6, 2, 4), ("I*_1", 7, 1, 4), ("I*_4", 10, 2, 6),
    ("IV*", 8, 0, 4), ("III*", 9, 1, 5), ("II*", 10, 1, 5),
])
def test_fiber_table(label, e_v, delta_min, n_v):
    record = fc.fiber_table(label)
    assert (record.e_v, record.delta_min, record.n_v) == (e_v, delta_min, n_v)


def test_delta_fixed_types():
    assert fc.fiber_table("I*_1").delta_fixed
    assert fc.fiber_table("IV").delta_fixed
    assert fc.fiber_table("IV*").delta_fixed
    assert not fc.fiber_table("I*_2").delta_fixed
    assert not fc.fiber_table("III*").delta_fixed


def mis_oracle(label):
    graph = fc.dual_graph(label)
    vertices = fc.smooth_rational_vertices(label)
    complement = nx.Graph()
    complement.add_nodes_from(vertices)
    for u, v in combinations(vertices, 2):
        if not graph.adjacency[u][v]:
            complement.add_edge(u, v)
    return max((len(c) for c in nx.find_cliques(complement)), default=0)


@pytest.mark.parametrize("label", fc.all_types(12))
def test_max_disjoint_against_clique_oracle(label):
    assert fc.max_disjoint(label) == mis_oracle(label)


def test_nv_table_report():
    rows = fc.nv_table_report(40)
    assert all(row["ok"] for row in rows)
    assert {row["type"]: row["computed"] for row in rows}["I*_1"] == 4


def test_dual_graph_of_small_fibres():
    assert fc.smooth_rational_vertices("I_1") == []
    assert fc.smooth_rational_vertices("II") == []
    assert fc.max_disjoint("I_2") == 1
    assert fc.max_disjoint("III") == 1
    assert fc.max_disjoint("IV") == 1


def test_max_disjoint_with_A2():
    assert fc.max_disjoint_with_A2("I*_1", 0) == 4
    assert fc.max_disjoint_with_A2("IV*", 3) == 3
    assert fc.max_disjoint_with_A2("IV", 1) == 1
    assert fc.max_disjoint_with_A2("I_2", 1) is None
    assert fc.max_disjoint_with_A2("III", 1) is None
    with pytest.raises(fc.FiberTypeError):
        fc.max_disjoint_with_A2("IV", -1)


def test_max_disjoint_omitting():
    assert fc.max_disjoint_omitting("I*_0", 0) == 3
    assert fc.max_disjoint_omitting("I*_0", "d2") == 4
    with pytest.raises(fc.FiberTypeError):
        fc.max_disjoint_omitting("I*_0", "x9")


def test_nv_bound():
    assert fc.check_Nv_bound("I*_1", 1)
    assert fc.check_Nv_bound("IV*", 0)
    with pytest.raises(fc.FiberTypeError):
        fc.check_Nv_bound("I*_2", 1)


def test_a2_packing_bound_only_exception_is_IV_star():
    report = fc.a2_packing_bound_report()
    assert report["ok"]
    assert report["violations"] == [{"type": "IV*", "i": 3, "value": 3}]


def test_omitted_vertex_bound():
    report = fc.omitted_vertex_bound_report()
    assert report["ok"]
    assert report["checked"] > 0


def test_enumerator_small_budget():
    result = fc.enumerate_configurations(4)
    assert result.max == 2
    assert not result.standard_budget
    found = sorted(tuple((e.type, e.n) for e in conf.fibers) for conf in result.configurations)
    assert found == [(("I", 2), ("I", 2)), (("I", 4),)]


def test_enumerator_k3_budget():
    result = fc.enumerate_configurations(fc.STANDARD_BUDGET)
    assert result.max == 12
    assert result.types_at_max == ["I_2n", "I*_2n", "I*_1", "IV*", "III*"]
    assert fc.optimal_at_minimal_delta(result)
    for conf in result.configurations:
        assert conf.cost == 24
        assert conf.N_total == 12


def test_a2_exclusion():
    one = fc.a2_exclusion(1)
    assert one["max"] <= 11
    assert one["excluded"]
    assert fc.a2_exclusion(4, needed=11)["excluded"]


def test_forced_point_count():
    assert fc.forced_point_count(4, 6, 2) == 15


def test_census_thirteen_nodes_is_infeasible():
    report = fc.census_check(IncidenceProblem(num_points=13, points_per_block=6,
                                              blocks_per_point=3, max_shared_points=2))
    assert not report.arithmetic_feasible
    assert report.num_blocks is None


def test_census_twelve_nodes():
    report = fc.census_check(IncidenceProblem(num_points=12, points_per_block=6,
                                              blocks_per_point=2, max_shared_points=2))
    assert report.arithmetic_feasible
    assert report.num_blocks == 4
    assert report.exhaustive_searched and report.exhaustive_feasible
    assert all(sum(col) == 2 for col in zip(*report.incidence))
    for a, b in combinations(report.incidence, 2):
        assert sum(x and y for x, y in zip(a, b)) <= 2
