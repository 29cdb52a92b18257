"""Equivalence closure of relation edges over a finite universe of inference bases.

Two independent component computations are provided (union-find and
breadth-first search) so each can check the other.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Callable, Iterable, Sequence

from .ancillarity import related_C, related_C_durbin
from .certificate import ChainCertificate, Link, normalize_kind
from .model import InferenceBase
from .relations import related_G, related_L, related_S

DECIDERS: dict[str, Callable[[InferenceBase, InferenceBase], Any]] = {
    "L": related_L,
    "S": related_S,
    "C": related_C,
    "C_durbin": related_C_durbin,
    "G": related_G,
}


class IndexOutOfRange(IndexError):
    pass


@dataclass(frozen=True)
class RelationEdge:
    left: int
    right: int
    kind: str
    witness: Any = None


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, i: int) -> int:
        parent = self.parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(self, i: int, j: int) -> bool:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return False
        if self.size[ri] < self.size[rj]:
            ri, rj = rj, ri
        self.parent[rj] = ri
        self.size[ri] += self.size[rj]
        return True


def _universe_size(universe) -> int:
    return universe if isinstance(universe, int) else len(universe)


def _check_edges(n: int, edges: Iterable[RelationEdge]) -> list[RelationEdge]:
    edges = list(edges)
    for e in edges:
        if not (0 <= e.left < n and 0 <= e.right < n):
            raise IndexOutOfRange(f"edge ({e.left}, {e.right}) outside universe of size {n}")
    return edges


def _sorted_classes(groups) -> list[list[int]]:
    return sorted(sorted(g) for g in groups)


def equivalence_classes(universe: Sequence | int, edges: Iterable[RelationEdge]) -> list[list[int]]:
    """Classes of the smallest equivalence relation containing ``edges``."""
    n = _universe_size(universe)
    uf = UnionFind(n)
    for e in _check_edges(n, edges):
        uf.union(e.left, e.right)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(i)
    return _sorted_classes(groups.values())


def _adjacency(n: int, edges: list[RelationEdge]) -> list[list[tuple[int, RelationEdge]]]:
    adj: list[list[tuple[int, RelationEdge]]] = [[] for _ in range(n)]
    for e in edges:
        adj[e.left].append((e.right, e))
        adj[e.right].append((e.left, e))
    return adj


def reachability_classes(universe: Sequence | int, edges: Iterable[RelationEdge]) -> list[list[int]]:
    """Same classes as :func:`equivalence_classes`, computed by finite chains (BFS)."""
    n = _universe_size(universe)
    adj = _adjacency(n, _check_edges(n, edges))
    seen = [False] * n
    classes = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        comp, queue = [start], deque([start])
        while queue:
            i = queue.popleft()
            for j, _ in adj[i]:
                if not seen[j]:
                    seen[j] = True
                    comp.append(j)
                    queue.append(j)
        classes.append(comp)
    return _sorted_classes(classes)


def closure_edges(universe: Sequence | int, edges: Iterable[RelationEdge], kind: str = "closure"):
    """Materialise the closure as an explicit edge list (one edge per related pair)."""
    return [
        RelationEdge(i, j, kind)
        for cls in equivalence_classes(universe, edges)
        for i, j in combinations(cls, 2)
    ]


def find_chain(
    universe: Sequence[InferenceBase], edges: Iterable[RelationEdge], start: int, end: int
) -> ChainCertificate | None:
    """Shortest chain of witnessed edges from ``start`` to ``end``, or None."""
    n = len(universe)
    edges = _check_edges(n, edges)
    for i in (start, end):
        if not 0 <= i < n:
            raise IndexOutOfRange(f"index {i} outside universe of size {n}")
    adj = _adjacency(n, edges)
    came_from: dict[int, tuple[int, RelationEdge] | None] = {start: None}
    queue = deque([start])
    while queue and end not in came_from:
        i = queue.popleft()
        for j, e in adj[i]:
            if j not in came_from:
                came_from[j] = (i, e)
                queue.append(j)
    if end not in came_from:
        return None
    path, links = [end], []
    node = end
    while came_from[node] is not None:
        prev, e = came_from[node]
        link = Link.make(e.kind, e.witness)
        links.append(link if e.left == prev else link.inverse())
        path.append(prev)
        node = prev
    return ChainCertificate(tuple(universe[i] for i in reversed(path)), tuple(reversed(links)))


def _decide(task):
    kind, i, j, b1, b2 = task
    return i, j, kind, DECIDERS[kind](b1, b2)


def build_relation_graph(
    universe: Sequence[InferenceBase], kinds: Iterable[str], workers: int = 1
) -> list[RelationEdge]:
    """Run the chosen decision procedures on every unordered pair.

    Edges come out ordered by pair, then by kind in the order given.
    Reflexive pairs are skipped; the closure adds them anyway.
    """
    kinds = [normalize_kind(k) for k in kinds]
    tasks = [
        (k, i, j, universe[i], universe[j])
        for i, j in combinations(range(len(universe)), 2)
        for k in kinds
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_decide, tasks, chunksize=8))
    else:
        results = [_decide(t) for t in tasks]
    return [RelationEdge(i, j, k, w) for i, j, k, w in results if w is not None]
