"""
Dynkin diagram builders.

Finite ADE diagrams and their affine (extended) versions with a fixed
vertex labelling shared by the lattice and fibre modules:

* A_n: chain a1 - a2 - ... - an.
* D_n: chain d1 - ... - d(n-2), with d(n-2) joined to d(n-1) and dn.
  D_2 = A_1 + A_1 and D_3 = A_3 fall out of the same rule.
* E_n (n = 6, 7, 8): chain e1 - e3 - e4 - ... - en, with e2 joined to e4.

Affine diagrams put the extra vertex first (index 0).
"""

import re
from typing import List, Tuple

import numpy as np

ADE_PATTERN = re.compile(r"^\s*([ADE])\s*_?\s*(\d+)\s*$", re.IGNORECASE)


class DynkinLabelError(ValueError):
    """Raised for unknown or out-of-range Dynkin labels."""


def parse_label(label: str) -> Tuple[str, int]:
    """
    Parse a Dynkin label such as ``"D4"``, ``"E_8"`` or ``"a1"``.

    Returns:
        Tuple (letter, index) with the letter upper-cased.
    """
    match = ADE_PATTERN.match(label)
    if not match:
        raise DynkinLabelError(f"Unknown Dynkin label: {label!r}")
    return match.group(1).upper(), int(match.group(2))


def check_range(letter: str, n: int) -> None:
    if letter == "A" and n >= 1:
        return
    if letter == "D" and n >= 2:
        return
    if letter == "E" and n in (6, 7, 8):
        return
    raise DynkinLabelError(f"Index out of range for type {letter}: {n}")


def ade_edges(letter: str, n: int) -> List[Tuple[int, int]]:
    """Edges of the finite Dynkin diagram (0-based vertex indices)."""
    check_range(letter, n)
    if letter == "A":
        return [(i, i + 1) for i in range(n - 1)]
    if letter == "D":
        if n == 2:
            return []
        chain = [(i, i + 1) for i in range(n - 3)]
        return chain + [(n - 3, n - 2), (n - 3, n - 1)]
    chain = [(0, 2)] + [(i, i + 1) for i in range(2, n - 1)]
    return chain + [(1, 3)]


def adjacency_from_edges(size: int, edges: List[Tuple[int, int]]) -> np.ndarray:
    adjacency = np.zeros((size, size), dtype=np.int64)
    for i, j in edges:
        adjacency[i, j] += 1
        adjacency[j, i] += 1
    return adjacency


def ade_adjacency(letter: str, n: int) -> np.ndarray:
    return adjacency_from_edges(n, ade_edges(letter, n))


def vertex_names(letter: str, n: int) -> List[str]:
    prefix = {"A": "a", "D": "d", "E": "e"}[letter]
    return [f"{prefix}{i + 1}" for i in range(n)]


def affine_diagram(letter: str, n: int) -> Tuple[np.ndarray, List[int], List[str]]:
    """
    Extended Dynkin diagram of type ~A_n (n >= 2), ~D_n (n >= 4) or ~E_n.

    Returns:
        Tuple (adjacency, multiplicities, vertex names); vertex 0 is the
        extending node.
    """
    if letter == "A":
        if n < 2:
            raise DynkinLabelError("~A_n with n < 2 has no simple-graph model")
        size = n + 1
        edges = [(i, (i + 1) % size) for i in range(size)]
        names = [f"a{i}" for i in range(size)]
        return adjacency_from_edges(size, edges), [1] * size, names

    if letter == "D":
        if n < 4:
            raise DynkinLabelError(f"~D_{n} needs n >= 4")
        edges = [(i + 1, j + 1) for i, j in ade_edges("D", n)] + [(0, 2)]
        multiplicities = [1, 1] + [2] * (n - 3) + [1, 1]
        names = ["d0"] + vertex_names("D", n)
        return adjacency_from_edges(n + 1, edges), multiplicities, names

    if letter == "E":
        check_range("E", n)
        edges = [(i + 1, j + 1) for i, j in ade_edges("E", n)]
        # extending node: on the e2 arm for E6, at e1 for E7, at e8 for E8
        attach = {6: 2, 7: 1, 8: 8}[n]
        edges.append((0, attach))
        multiplicities = {
            6: [1, 1, 2, 2, 3, 2, 1],
            7: [1, 2, 2, 3, 4, 3, 2, 1],
            8: [1, 2, 3, 4, 6, 5, 4, 3, 2],
        }[n]
        names = ["e0"] + vertex_names("E", n)
        return adjacency_from_edges(n + 1, edges), multiplicities, names

    raise DynkinLabelError(f"Unknown Dynkin letter: {letter}")


def gram_from_adjacency(adjacency: np.ndarray) -> np.ndarray:
    """Negative-definite convention: -2 on the diagonal, adjacency elsewhere."""
    gram = np.array(adjacency, dtype=np.int64)
    np.fill_diagonal(gram, -2)
    return gram
