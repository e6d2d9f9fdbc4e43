"""Brute-force ground truth on small labelled graphs.

Graphs on n <= 8 vertices are bitmasks over the C(n, 2) vertex pairs,
pair (i, j) with i < j taking bit ``pair_index(n)[(i, j)]``.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from multiprocessing import Pool

import numpy as np

from .errors import ConfigError, PreconditionViolation, TooLarge
from .schemas import ORACLE_MAX_N, GraphClass, OracleCounts
from .utils import get_logger

logger = get_logger()

MAX_VERTICES = 8
CHUNK_BITS = 22


class ConnectivityClass(str, Enum):
    DISCONNECTED = "disconnected"
    CONNECTED = "connected"
    BICONNECTED = "biconnected"


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


@lru_cache(maxsize=None)
def pair_index(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(pairs(n))}


def minor_edges(graph_class: GraphClass) -> tuple[tuple[int, int], ...]:
    """Edges of the excluded minor on vertices 0..5 (parts {0, 1, 2} and {3, 4, 5})."""
    edges = [(a, b) for a in range(3) for b in range(3, 6)]
    if graph_class == GraphClass.K33PLUS:
        edges.append((0, 1))
    elif graph_class != GraphClass.K33:
        raise ValueError(f"no excluded minor for class {graph_class.value}")
    return tuple(edges)


@dataclass(frozen=True)
class SmallGraph:
    """Simple undirected graph on vertices 0..n-1 stored as an edge bitmask."""

    n: int
    mask: int = 0

    def __post_init__(self):
        if self.n > MAX_VERTICES:
            raise TooLarge(f"{self.n} vertices exceeds the oracle limit of {MAX_VERTICES}")
        if self.mask >> len(pairs(self.n)):
            raise ValueError(f"mask {self.mask:#x} has bits beyond C({self.n}, 2)")

    @classmethod
    def from_edges(cls, n: int, edges) -> "SmallGraph":
        index = pair_index(n)
        mask = 0
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed")
            mask |= 1 << index[(min(u, v), max(u, v))]
        return cls(n, mask)

    @classmethod
    def complete(cls, n: int) -> "SmallGraph":
        return cls(n, (1 << len(pairs(n))) - 1)

    @classmethod
    def minor(cls, graph_class: GraphClass) -> "SmallGraph":
        return cls.from_edges(6, minor_edges(graph_class))

    def edges(self) -> list[tuple[int, int]]:
        return [p for k, p in enumerate(pairs(self.n)) if self.mask >> k & 1]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.mask >> pair_index(self.n)[(min(u, v), max(u, v))] & 1)

    def with_edge(self, u: int, v: int) -> "SmallGraph":
        return SmallGraph(self.n, self.mask | 1 << pair_index(self.n)[(min(u, v), max(u, v))])

    def non_edges(self) -> list[tuple[int, int]]:
        return [p for k, p in enumerate(pairs(self.n)) if not self.mask >> k & 1]

    def neighbours(self) -> list[int]:
        """Neighbourhood bitmask of every vertex."""
        rows = [0] * self.n
        for u, v in self.edges():
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return rows

    def relabel(self, perm) -> "SmallGraph":
        return SmallGraph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])


def _reach(rows: list[int], start: int, allowed: int) -> int:
    seen = frontier = 1 << start
    while frontier:
        grown = 0
        for v in range(len(rows)):
            if frontier >> v & 1:
                grown |= rows[v]
        frontier = grown & allowed & ~seen
        seen |= frontier
    return seen


def _is_connected_set(rows: list[int], vertices: int) -> bool:
    if not vertices:
        return False
    start = (vertices & -vertices).bit_length() - 1
    return _reach(rows, start, vertices) == vertices


def classify_connectivity(graph: SmallGraph) -> ConnectivityClass:
    if graph.n < 1:
        raise ValueError("a graph needs at least one vertex")
    rows = graph.neighbours()
    everything = (1 << graph.n) - 1
    if not _is_connected_set(rows, everything):
        return ConnectivityClass.DISCONNECTED
    if graph.n < 3:
        return ConnectivityClass.CONNECTED
    for v in range(graph.n):
        if not _is_connected_set(rows, everything & ~(1 << v)):
            return ConnectivityClass.CONNECTED
    return ConnectivityClass.BICONNECTED


# minor models


def _set_partitions(items: list[int], k: int):
    """Partitions of ``items`` into exactly k nonempty blocks."""
    if k == 0:
        if not items:
            yield []
        return
    if len(items) < k:
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest, k - 1):
        yield [[first]] + partition
    for partition in _set_partitions(rest, k):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1 :]


def branch_partitions(n: int, blocks: int = 6):
    """All ways to pick disjoint nonempty vertex sets (unordered) covering a subset."""
    for size in range(blocks, n + 1):
        for used in itertools.combinations(range(n), size):
            yield from _set_partitions(list(used), blocks)


@lru_cache(maxsize=None)
def placements(graph_class: GraphClass) -> tuple[frozenset, ...]:
    """Distinct edge sets of the minor placed on six labelled positions."""
    edges = minor_edges(graph_class)
    seen = set()
    for perm in itertools.permutations(range(6)):
        seen.add(frozenset(frozenset((perm[a], perm[b])) for a, b in edges))
    return tuple(seen)


def has_minor(graph: SmallGraph, graph_class: GraphClass) -> bool:
    """Six disjoint connected branch sets with every minor edge realized between them."""
    if graph.n > MAX_VERTICES:
        raise TooLarge(f"{graph.n} vertices exceeds the oracle limit")
    needed = len(minor_edges(graph_class))
    if graph.n < 6 or graph.mask.bit_count() < needed:
        return False
    rows = graph.neighbours()
    options = placements(graph_class)
    for partition in branch_partitions(graph.n):
        sets = [sum(1 << v for v in block) for block in partition]
        if not all(_is_connected_set(rows, s) for s in sets):
            continue
        reach = []
        for s in sets:
            out = 0
            for v in range(graph.n):
                if s >> v & 1:
                    out |= rows[v]
            reach.append(out)
        joined = {
            frozenset((i, j))
            for i, j in itertools.combinations(range(6), 2)
            if reach[i] & sets[j]
        }
        if any(placement <= joined for placement in options):
            return True
    return False


def _spanning_trees(block: list[int]):
    """Edge lists of all spanning trees on the block (Pruefer sequences)."""
    k = len(block)
    if k == 1:
        yield []
        return
    if k == 2:
        yield [(block[0], block[1])]
        return
    for code in itertools.product(range(k), repeat=k - 2):
        degree = [1] * k
        for c in code:
            degree[c] += 1
        edges = []
        for c in code:
            leaf = min(i for i in range(k) if degree[i] == 1)
            edges.append((block[leaf], block[c]))
            degree[leaf] -= 1
            degree[c] -= 1
        u, v = [i for i in range(k) if degree[i] == 1]
        edges.append((block[u], block[v]))
        yield edges


@lru_cache(maxsize=None)
def minor_models(n: int, graph_class: GraphClass) -> tuple[int, ...]:
    """
    Edge masks of the minor models on n labelled vertices.

    A graph has the minor iff it contains one of these masks. Models in
    which some vertex of a non-singleton branch set is a leaf are skipped:
    they contain a smaller model.
    """
    if n > MAX_VERTICES:
        raise TooLarge(f"{n} vertices exceeds the oracle limit")
    index = pair_index(n)

    def bit(u, v):
        return 1 << index[(min(u, v), max(u, v))]

    masks: set[int] = set()
    for partition in branch_partitions(n):
        trees = [list(_spanning_trees(block)) for block in partition]
        for placement in placements(graph_class):
            links = [tuple(sorted(edge)) for edge in placement]
            choices = [list(itertools.product(partition[i], partition[j])) for i, j in links]
            for tree_pick in itertools.product(*trees):
                tree_edges = [e for tree in tree_pick for e in tree]
                for link_pick in itertools.product(*choices):
                    degree: dict[int, int] = {}
                    for u, v in itertools.chain(tree_edges, link_pick):
                        degree[u] = degree.get(u, 0) + 1
                        degree[v] = degree.get(v, 0) + 1
                    if any(
                        len(block) > 1 and degree.get(v, 0) < 2
                        for block in partition
                        for v in block
                    ):
                        continue
                    mask = 0
                    for u, v in itertools.chain(tree_edges, link_pick):
                        mask |= bit(u, v)
                    masks.add(mask)
    logger.debug(f"{len(masks)} {graph_class.value} models on {n} vertices")
    return tuple(sorted(masks))


def is_maximal_k33_free(graph: SmallGraph) -> bool:
    if has_minor(graph, GraphClass.K33):
        raise PreconditionViolation("graph already has a K33 minor")
    return all(has_minor(graph.with_edge(u, v), GraphClass.K33) for u, v in graph.non_edges())


# vectorised counting


def _contains_any(graphs: np.ndarray, masks) -> np.ndarray:
    hit = np.zeros(graphs.shape, dtype=bool)
    for m in masks:
        m = np.uint32(m)
        hit |= (graphs & m) == m
    return hit


def _rows(graphs: np.ndarray, n: int) -> list[np.ndarray]:
    rows = [np.zeros(graphs.shape, dtype=np.uint32) for _ in range(n)]
    for k, (u, v) in enumerate(pairs(n)):
        present = (graphs >> np.uint32(k)) & np.uint32(1)
        rows[u] |= present << np.uint32(v)
        rows[v] |= present << np.uint32(u)
    return rows


def _spans(rows: list[np.ndarray], n: int, removed: int | None = None) -> np.ndarray:
    """Whether the vertices other than ``removed`` induce a connected graph."""
    everything = (1 << n) - 1
    allowed = np.uint32(everything & ~(1 << removed) if removed is not None else everything)
    start = 1 if removed == 0 else 0
    seen = np.full(rows[0].shape, np.uint32(1 << start))
    for _ in range(n):
        grown = seen.copy()
        for v in range(n):
            if removed == v:
                continue
            inside = (seen >> np.uint32(v)) & np.uint32(1)
            grown |= np.where(inside.astype(bool), rows[v], np.uint32(0))
        seen = grown & allowed
    return seen == allowed


def _forbidden(graphs: np.ndarray, n: int, graph_class: GraphClass) -> np.ndarray:
    has_k33 = _contains_any(graphs, minor_models(n, GraphClass.K33))
    if graph_class == GraphClass.K33:
        return has_k33
    # a K33+ model contains a K33 model and has at least ten edges
    candidates = has_k33 & (np.bitwise_count(graphs) >= 10)
    hit = np.zeros(graphs.shape, dtype=bool)
    hit[candidates] = _contains_any(graphs[candidates], minor_models(n, GraphClass.K33PLUS))
    return hit


def _forbidden_range(args: tuple[int, int, int, str]) -> np.ndarray:
    start, stop, n, class_value = args
    graphs = np.arange(start, stop, dtype=np.uint32)
    return _forbidden(graphs, n, GraphClass(class_value))


def count_all(
    n: int, graph_class: GraphClass, jobs: int = 1, allow_n8: bool = False
) -> OracleCounts:
    """Exhaustive counts over all 2^C(n, 2) labelled graphs on n vertices."""
    if n < 1:
        raise ConfigError("n must be positive")
    if n > MAX_VERTICES or (n > ORACLE_MAX_N and not allow_n8):
        raise TooLarge(f"oracle sweep at n={n} needs allow_n8 (limit {ORACLE_MAX_N})")
    if graph_class == GraphClass.MAXIMAL:
        raise ConfigError("maximal graphs are counted within the K33 sweep")
    total = 1 << len(pairs(n))
    chunk = min(total, 1 << CHUNK_BITS)
    ranges = [(s, min(s + chunk, total), n, graph_class.value) for s in range(0, total, chunk)]
    logger.info(f"Oracle sweep n={n} {graph_class.value}: {total} graphs in {len(ranges)} chunks")

    if jobs > 1 and len(ranges) > 1:
        with Pool(jobs) as pool:
            parts = pool.map(_forbidden_range, ranges)
    else:
        parts = [_forbidden_range(r) for r in ranges]
    forbidden = np.concatenate(parts)

    g = c = b = m = 0
    for start, stop, _, _ in ranges:
        graphs = np.arange(start, stop, dtype=np.uint32)
        free = ~forbidden[start:stop]
        rows = _rows(graphs, n)
        connected = _spans(rows, n) & free
        biconnected = np.zeros(graphs.shape, dtype=bool)
        if n >= 3:
            biconnected = connected.copy()
            for v in range(n):
                biconnected &= _spans(rows, n, removed=v)
        g += int(free.sum())
        c += int(connected.sum())
        b += int(biconnected.sum())
        if graph_class == GraphClass.K33:
            maximal = free.copy()
            for k in range(len(pairs(n))):
                bit = np.uint32(1 << k)
                maximal &= ((graphs & bit) != 0) | forbidden[graphs | bit]
            m += int(maximal.sum())

    counts = OracleCounts(
        n=n, graph_class=graph_class, g=g, c=c, b=b,
        m=m if graph_class == GraphClass.K33 else None,
    )  # fmt: skip
    logger.info(f"Oracle n={n} {graph_class.value}: g={g} c={c} b={b} m={counts.m}")
    return counts
