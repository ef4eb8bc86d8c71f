"""
Kodaira fibre data in characteristic 2 and the wild-ramification budget.

Dual graphs come from ``dynkin``; the disjoint-curve counts N_v, N_v^(i)
and N_v' are computed by exhaustive search on them and compared with the
table. The configuration enumerator distributes the Euler-number budget
sum(e_v + delta_v) = 24 over singular fibres.
"""

import re
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np

import dynkin
from schemas import (
    CensusReport,
    DualGraph,
    EnumerationResult,
    FiberConfiguration,
    FiberEntry,
    FiberTypeRecord,
    IncidenceProblem,
)

STANDARD_BUDGET = 24
MAX_I_N = 24
MAX_I_STAR_N = 18

SYMBOL_ORDER = ["I", "II", "III", "IV", "I*", "IV*", "III*", "II*"]

I_N_PATTERN = re.compile(r"^I\s*_?\s*\{?(\d+)\}?$")
I_STAR_PATTERN = re.compile(r"^I\s*(?:\*|\^\*)\s*_?\s*\{?(\d+)\}?$|^I\s*_?\s*\{?(\d+)\}?\s*(?:\*|\^\*)$")
ADDITIVE_PATTERN = re.compile(r"^(II|III|IV)\s*(\*|\^\*)?$")


class FiberTypeError(ValueError):
    """Unknown Kodaira label or invalid request on a fibre type."""


# Labels and table

def parse_kodaira(label: str) -> Tuple[str, Optional[int]]:
    """
    Parse a Kodaira label.

    Accepts ``I_6``, ``I6``, ``I*_1``, ``I1*``, ``I_0^*``, ``II``, ``IV*``...

    Returns:
        Tuple (symbol, n) with symbol in SYMBOL_ORDER and n only for I and I*
    """
    text = label.strip().replace(" ", "")
    match = I_STAR_PATTERN.match(text)
    if match:
        return "I*", int(match.group(1) or match.group(2))
    match = I_N_PATTERN.match(text)
    if match:
        n = int(match.group(1))
        if n < 1:
            raise FiberTypeError("I_0 is a smooth fibre")
        return "I", n
    match = ADDITIVE_PATTERN.match(text)
    if match:
        return match.group(1) + ("*" if match.group(2) else ""), None
    raise FiberTypeError(f"Unknown Kodaira label: {label!r}")


def format_kodaira(symbol: str, n: Optional[int] = None) -> str:
    if symbol in ("I", "I*"):
        return f"{symbol}_{n}"
    return symbol


def type_family(symbol: str, n: Optional[int]) -> str:
    """Grouping used when reporting optimal configurations."""
    if symbol == "I":
        return "I_2n" if n % 2 == 0 else "I_2n+1"
    if symbol == "I*":
        if n == 1:
            return "I*_1"
        return "I*_2n" if n % 2 == 0 else "I*_2n+1"
    return symbol


def fiber_table(label: str) -> FiberTypeRecord:
    """The characteristic-2 table row (m_v, e_v, delta_min, N_v) for a Kodaira type."""
    symbol, n = parse_kodaira(label)
    if symbol == "I":
        row = dict(m_v=n, e_v=n, delta_min=0, delta_fixed=True, n_v=n // 2,
                   dynkin=f"A{n - 1}" if n >= 2 else None, reduced=True)
    elif symbol == "II":
        row = dict(m_v=1, e_v=2, delta_min=2, delta_fixed=False, n_v=0, dynkin=None, reduced=True)
    elif symbol == "III":
        row = dict(m_v=2, e_v=3, delta_min=1, delta_fixed=False, n_v=1, dynkin="A1", reduced=True)
    elif symbol == "IV":
        row = dict(m_v=3, e_v=4, delta_min=0, delta_fixed=True, n_v=1, dynkin="A2", reduced=True)
    elif symbol == "I*":
        if n == 1:
            row = dict(m_v=6, e_v=7, delta_min=1, delta_fixed=True, n_v=4, dynkin="D5", reduced=False)
        else:
            row = dict(m_v=n + 5, e_v=n + 6, delta_min=2, delta_fixed=False, n_v=4 + n // 2,
                       dynkin=f"D{n + 4}", reduced=False)
    elif symbol == "IV*":
        row = dict(m_v=7, e_v=8, delta_min=0, delta_fixed=True, n_v=4, dynkin="E6", reduced=False)
    elif symbol == "III*":
        row = dict(m_v=8, e_v=9, delta_min=1, delta_fixed=False, n_v=5, dynkin="E7", reduced=False)
    else:
        row = dict(m_v=9, e_v=10, delta_min=1, delta_fixed=False, n_v=5, dynkin="E8", reduced=False)
    return FiberTypeRecord(kodaira=format_kodaira(symbol, n), symbol=symbol, n=n,
                           family=type_family(symbol, n), **row)


def all_types(max_n: int = 40) -> List[str]:
    labels = [format_kodaira("I", n) for n in range(1, max_n + 1)]
    labels += ["II", "III", "IV"]
    labels += [format_kodaira("I*", n) for n in range(0, max_n + 1)]
    labels += ["IV*", "III*", "II*"]
    return labels


# Dual graphs

def dual_graph(label: str) -> DualGraph:
    """
    Components, intersection numbers and multiplicities of a singular fibre.

    I_1 and II have a single singular rational component. I_2 and III are
    two components meeting with total intersection 2; IV is three
    components through one point, recorded as pairwise adjacent.
    """
    symbol, n = parse_kodaira(label)
    if symbol in ("I", "II", "III", "IV") and (symbol != "I" or n <= 2):
        size = {"II": 1, "III": 2, "IV": 3}.get(symbol, n)
        names = [f"c{i}" for i in range(size)]
        if size == 1:
            adjacency = np.zeros((1, 1), dtype=np.int64)
        elif size == 2:
            adjacency = np.array([[0, 2], [2, 0]], dtype=np.int64)
        else:
            adjacency = np.ones((3, 3), dtype=np.int64) - np.eye(3, dtype=np.int64)
        return DualGraph(vertices=names, adjacency=adjacency.tolist(), multiplicities=[1] * size)
    if symbol == "I":
        adjacency, multiplicities, _ = dynkin.affine_diagram("A", n - 1)
        names = [f"c{i}" for i in range(n)]
    elif symbol == "I*":
        adjacency, multiplicities, names = dynkin.affine_diagram("D", n + 4)
    else:
        adjacency, multiplicities, names = dynkin.affine_diagram("E", {"IV*": 6, "III*": 7, "II*": 8}[symbol])
    return DualGraph(vertices=names, adjacency=adjacency.tolist(), multiplicities=multiplicities)


def fiber_gram(label: str) -> np.ndarray:
    """Intersection matrix of the fibre components (singular irreducible fibres have C^2 = 0)."""
    graph = dual_graph(label)
    adjacency = np.array(graph.adjacency, dtype=np.int64)
    if len(graph.vertices) == 1:
        return np.zeros((1, 1), dtype=np.int64)
    return dynkin.gram_from_adjacency(adjacency)


def smooth_rational_vertices(label: str) -> List[int]:
    """Components that are (-2)-curves."""
    gram = fiber_gram(label)
    return [i for i in range(gram.shape[0]) if gram[i, i] == -2]


def _neighbours(adjacency: Sequence[Sequence[int]]) -> List[FrozenSet[int]]:
    return [frozenset(j for j, a in enumerate(row) if a and j != i) for i, row in enumerate(adjacency)]


# Independent sets and packings

def maximum_independent_set(adjacency: Sequence[Sequence[int]],
                            candidates: Optional[Sequence[int]] = None) -> List[int]:
    """
    Exact maximum independent set by branch and bound.

    A vertex of degree <= 1 in the remaining graph always lies in some
    maximum independent set and is taken without branching; otherwise the
    search branches on a vertex of maximum degree.
    """
    neighbours = _neighbours(adjacency)
    start = frozenset(range(len(adjacency)) if candidates is None else candidates)
    best: List[int] = []

    def branch(chosen: List[int], remaining: FrozenSet[int]):
        nonlocal best
        if len(chosen) + len(remaining) <= len(best):
            return
        if not remaining:
            best = sorted(chosen)
            return
        degree = {v: len(neighbours[v] & remaining) for v in remaining}
        v = min(remaining, key=lambda u: (degree[u], u))
        if degree[v] <= 1:
            branch(chosen + [v], remaining - neighbours[v] - {v})
            return
        v = max(remaining, key=lambda u: (degree[u], -u))
        branch(chosen + [v], remaining - neighbours[v] - {v})
        branch(chosen, remaining - {v})

    branch([], start)
    return best


def max_disjoint(label: str) -> int:
    """N_v: the most pairwise disjoint (-2)-curves among the fibre components."""
    graph = dual_graph(label)
    return len(maximum_independent_set(graph.adjacency, smooth_rational_vertices(label)))


def max_disjoint_with_A2(label: str, i: int) -> Optional[int]:
    """
    N_v^(i): the largest r for r mutually disjoint configurations of which
    exactly i are A2's (two components meeting once) and the rest single curves.

    Returns:
        The maximum r, or None if i disjoint A2's do not fit
    """
    if i < 0:
        raise FiberTypeError("i must be non-negative")
    graph = dual_graph(label)
    adjacency = graph.adjacency
    neighbours = _neighbours(adjacency)
    start = frozenset(smooth_rational_vertices(label))

    @lru_cache(maxsize=None)
    def best(remaining: FrozenSet[int], pairs: int) -> Optional[int]:
        if not remaining:
            return 0 if pairs == 0 else None
        v = min(remaining)
        options = []
        rest = best(remaining - {v}, pairs)
        if rest is not None:
            options.append(rest)
        rest = best(remaining - neighbours[v] - {v}, pairs)
        if rest is not None:
            options.append(rest + 1)
        if pairs:
            for u in sorted(neighbours[v] & remaining):
                if adjacency[v][u] != 1:
                    continue
                rest = best(remaining - neighbours[v] - neighbours[u] - {u, v}, pairs - 1)
                if rest is not None:
                    options.append(rest + 1)
        return max(options) if options else None

    return best(start, i)


def _vertex_index(graph: DualGraph, vertex: Union[int, str]) -> int:
    if isinstance(vertex, str) and not vertex.isdigit():
        if vertex not in graph.vertices:
            raise FiberTypeError(f"no component named {vertex!r}")
        return graph.vertices.index(vertex)
    index = int(vertex)
    if not 0 <= index < len(graph.vertices):
        raise FiberTypeError(f"component index {index} out of range")
    return index


def max_disjoint_omitting(label: str, vertex: Union[int, str]) -> int:
    """N_v': maximum independent set of the dual graph with one component removed."""
    graph = dual_graph(label)
    removed = _vertex_index(graph, vertex)
    candidates = [v for v in smooth_rational_vertices(label) if v != removed]
    return len(maximum_independent_set(graph.adjacency, candidates))


def check_Nv_bound(label: str, delta: int) -> bool:
    """N_v <= (e_v + delta) / 2."""
    record = fiber_table(label)
    if delta < record.delta_min:
        raise FiberTypeError(f"delta {delta} below the minimum {record.delta_min} for {record.kodaira}")
    return 2 * max_disjoint(label) <= record.e_v + delta


# Exhaustive reports over all types

def nv_table_report(max_n: int = 40) -> List[Dict]:
    rows = []
    for label in all_types(max_n):
        record = fiber_table(label)
        computed = max_disjoint(label)
        rows.append({"type": record.kodaira, "table": record.n_v, "computed": computed,
                     "ok": computed == record.n_v})
    return rows


def a2_packing_bound_report(max_n: int = 40, max_i: int = 4) -> Dict:
    """
    N_v^(i) <= (e_v + delta_min - i)/2 for every type and 0 <= i <= max_i.

    The one permitted exception is IV* with i = 3, where the value is 3.
    """
    violations = []
    checked = 0
    for label in all_types(max_n):
        record = fiber_table(label)
        for i in range(max_i + 1):
            value = max_disjoint_with_A2(label, i)
            if value is None:
                continue
            checked += 1
            if 2 * value > record.e_v + record.delta_min - i:
                violations.append({"type": record.kodaira, "i": i, "value": value})
    expected = [{"type": "IV*", "i": 3, "value": 3}]
    return {"checked": checked, "violations": violations, "ok": violations == expected}


def omitted_vertex_bound_report(max_n: int = 40) -> Dict:
    """
    Removing a simple component of a non-reduced fibre leaves at most
    (e_v + delta_min)/2 - 1 disjoint curves; the same holds for any
    component of odd multiplicity.
    """
    violations = []
    checked = 0
    for label in all_types(max_n):
        record = fiber_table(label)
        if record.reduced:
            continue
        graph = dual_graph(label)
        for vertex, multiplicity in enumerate(graph.multiplicities):
            if multiplicity % 2 == 0:
                continue
            checked += 1
            value = max_disjoint_omitting(label, vertex)
            if 2 * value > record.e_v + record.delta_min - 2:
                violations.append({"type": record.kodaira, "vertex": graph.vertices[vertex],
                                   "multiplicity": multiplicity, "value": value})
    return {"checked": checked, "violations": violations, "ok": not violations}


# Configuration enumerator

def _catalogue(budget: int, required_a2: int,
               order: Optional[Sequence[str]] = None) -> List[Tuple[FiberEntry, int, int]]:
    """Every (fibre, delta, number of A2's) of cost at most the budget, with cost and value."""
    symbols = list(order) if order is not None else SYMBOL_ORDER
    items = []
    for symbol in symbols:
        if symbol == "I":
            labels = [format_kodaira("I", n) for n in range(1, min(MAX_I_N, budget) + 1)]
        elif symbol == "I*":
            labels = [format_kodaira("I*", n) for n in range(0, MAX_I_STAR_N + 1)]
        else:
            labels = [symbol]
        for label in labels:
            record = fiber_table(label)
            top = record.delta_min if record.delta_fixed else budget - record.e_v
            for delta in range(record.delta_min, top + 1):
                cost = record.e_v + delta
                if cost > budget:
                    continue
                for i in range(required_a2 + 1):
                    value = record.n_v if i == 0 else max_disjoint_with_A2(label, i)
                    if value is None:
                        continue
                    entry = FiberEntry(type=record.symbol, n=record.n, delta=delta, a2=i)
                    items.append((entry, cost, value))
    return items


def _entry_key(entry: FiberEntry) -> Tuple:
    return (SYMBOL_ORDER.index(entry.type), entry.n or 0, entry.delta, entry.a2)


def enumerate_configurations(budget: int = STANDARD_BUDGET, required_a2: int = 0,
                             order: Optional[Sequence[str]] = None) -> EnumerationResult:
    """
    All fibre multisets with sum(e_v + delta_v) = budget maximising the curve count.

    Args:
        budget: Euler-number budget (24 for a K3 surface)
        required_a2: prescribed total number of A2 configurations; with 0 the
            objective is sum N_v, otherwise sum N_v^(i_v) with sum i_v fixed
        order: order in which fibre symbols are considered

    Returns:
        EnumerationResult with the optimum and every optimal configuration
    """
    items = _catalogue(budget, required_a2, order)
    count = len(items)
    NEG = None
    # best[k][c][j]: optimum over items k.. with cost exactly c and j A2's
    best = [[[NEG] * (required_a2 + 1) for _ in range(budget + 1)] for _ in range(count + 1)]
    best[count][0][0] = 0
    for k in range(count - 1, -1, -1):
        entry, cost, value = items[k]
        for c in range(budget + 1):
            for j in range(required_a2 + 1):
                candidate = best[k + 1][c][j]
                if c >= cost and j >= entry.a2:
                    inner = best[k][c - cost][j - entry.a2]
                    if inner is not None and (candidate is None or inner + value > candidate):
                        candidate = inner + value
                best[k][c][j] = candidate

    optimum = best[0][budget][required_a2] if count else None
    configurations = []

    def collect(k: int, c: int, j: int, target: int, prefix: List[FiberEntry]):
        if c == 0 and j == 0:
            if target == 0:
                configurations.append(list(prefix))
            return
        for idx in range(k, count):
            entry, cost, value = items[idx]
            if cost > c or entry.a2 > j:
                continue
            rest = best[idx][c - cost][j - entry.a2]
            if rest is not None and rest + value == target:
                prefix.append(entry)
                collect(idx, c - cost, j - entry.a2, target - value, prefix)
                prefix.pop()

    if optimum is not None:
        collect(0, budget, required_a2, optimum, [])

    results = []
    families = set()
    for fibers in configurations:
        fibers = sorted(fibers, key=_entry_key)
        for entry in fibers:
            families.add(type_family(entry.type, entry.n))
        cost = sum(fiber_table(format_kodaira(e.type, e.n)).e_v + e.delta for e in fibers)
        results.append(FiberConfiguration(fibers=fibers, cost=cost, N_total=optimum))
    results.sort(key=lambda conf: [_entry_key(e) for e in conf.fibers])
    family_order = ["I_2n", "I_2n+1", "I*_2n", "I*_1", "I*_2n+1", "II", "III", "IV", "IV*", "III*", "II*"]
    return EnumerationResult(
        budget=budget,
        standard_budget=budget == STANDARD_BUDGET,
        objective="sum N_v" if required_a2 == 0 else f"sum N_v^(i) with sum i = {required_a2}",
        required_a2=required_a2,
        max=optimum,
        types_at_max=[f for f in family_order if f in families],
        count=len(results),
        configurations=results,
    )


def optimal_at_minimal_delta(result: EnumerationResult) -> bool:
    return all(
        entry.delta == fiber_table(format_kodaira(entry.type, entry.n)).delta_min
        for conf in result.configurations for entry in conf.fibers
    )


def a2_exclusion(required_a2: int = 1, needed: int = 12) -> Dict:
    """
    Largest number of disjoint configurations on the fibres when
    ``required_a2`` of them are A2's, against the ``needed`` count.

    One A2 caps the count at 11, so twelve configurations one of which is
    an A2 cannot sit in the fibres; with four A2's it stays below 11.
    """
    result = enumerate_configurations(STANDARD_BUDGET, required_a2)
    return {
        "required_a2": required_a2,
        "max": result.max,
        "needed": needed,
        "excluded": result.max is None or result.max < needed,
    }


# Incidence census

def forced_point_count(blocks: int, per_block: int, shared: int) -> int:
    """Points forced by ``blocks`` blocks through a common point, pairwise sharing ``shared``."""
    return 1 + blocks * (per_block - 1) - comb(blocks, 2) * (shared - 1)


def _search_incidence(problem: IncidenceProblem, num_blocks: int) -> Optional[List[List[int]]]:
    points = problem.num_points
    k = problem.points_per_block
    degree = [0] * points
    blocks: List[Tuple[int, ...]] = []
    candidates = list(combinations(range(points), k))

    def place(start: int) -> bool:
        if len(blocks) == num_blocks:
            return all(d == problem.blocks_per_point for d in degree)
        for idx in range(start, len(candidates)):
            block = candidates[idx]
            if not blocks and block != tuple(range(k)):
                return False
            if any(degree[p] >= problem.blocks_per_point for p in block):
                continue
            if any(len(set(block) & set(other)) > problem.max_shared_points for other in blocks):
                continue
            blocks.append(block)
            for p in block:
                degree[p] += 1
            if place(idx + 1):
                return True
            blocks.pop()
            for p in block:
                degree[p] -= 1
        return False

    if not place(0):
        return None
    return [[1 if p in block else 0 for p in range(points)] for block in blocks]


def census_check(problem: IncidenceProblem, exhaustive_limit: int = 16) -> CensusReport:
    """
    Feasibility of a point/block incidence: m blocks of k points, s blocks
    through every point, any two blocks sharing at most t points.

    The counting identity m * k = points * s comes first; small problems are
    then searched exhaustively (the first block is fixed up to relabelling).
    """
    total = problem.num_points * problem.blocks_per_point
    if total % problem.points_per_block:
        return CensusReport(
            problem=problem,
            arithmetic_feasible=False,
            reason=f"{problem.points_per_block}m = {problem.num_points}*{problem.blocks_per_point}"
                   f" = {total} has no integer solution",
        )
    num_blocks = total // problem.points_per_block
    report = CensusReport(problem=problem, arithmetic_feasible=True, num_blocks=num_blocks,
                          reason=f"m = {num_blocks}")
    if problem.num_points <= exhaustive_limit and num_blocks <= 8:
        incidence = _search_incidence(problem, num_blocks)
        report.exhaustive_searched = True
        report.exhaustive_feasible = incidence is not None
        report.incidence = incidence
    return report
