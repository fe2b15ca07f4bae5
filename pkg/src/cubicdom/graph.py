"""Cubic graphs: edge-list I/O, girth, maximum matching, random generation and
the decomposition of the matched vertices into short paths with mates.
"""
from __future__ import annotations

import heapq
import math
import random
from collections import deque
from dataclasses import dataclass

import numpy as np


class GraphFormatError(ValueError):
    pass


class Graph:
    """Simple undirected graph on vertices ``0..n-1`` with sorted adjacency lists."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, edges=()):
        self.n = n
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}")
            if v in nbrs[u]:
                raise GraphFormatError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.adj = tuple(tuple(sorted(s)) for s in nbrs)

    @classmethod
    def from_adjacency(cls, adj) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(adj)
        g.adj = tuple(tuple(sorted(a)) for a in adj)
        return g

    def edges(self):
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def is_cubic(self) -> bool:
        return all(len(a) == 3 for a in self.adj)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def load_graph(text: str) -> Graph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphFormatError("empty graph file")
    try:
        n = int(lines[0])
    except ValueError:
        raise GraphFormatError(f"first line must be the vertex count, got {lines[0]!r}") from None
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'u v', got {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphFormatError(f"non-integer vertex in {ln!r}") from None
    return Graph(n, edges)


def save_graph(g: Graph) -> str:
    return "".join([f"{g.n}\n"] + [f"{u} {v}\n" for u, v in g.edges()])


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh.read())


# --- small named graphs, mostly for tests and the CLI ---------------------

def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def prism_graph(k: int) -> Graph:
    """Circular ladder on ``2k`` vertices (cubic for k >= 3)."""
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges += [(k + i, k + (i + 1) % k) for i in range(k)]
    edges += [(i, k + i) for i in range(k)]
    return Graph(2 * k, edges)


# --- girth -----------------------------------------------------------------

@dataclass(frozen=True)
class GirthReport:
    girth: float  # int, or math.inf for forests
    cycle: tuple = ()


def _bfs_cycle(adj, source: int, limit: float):
    """Shortest closed walk through a BFS from ``source`` shorter than ``limit``.

    Returns ``(length, u, w, parent)`` for the best closing edge ``u-w`` found,
    or ``None``. The BFS stops once no shorter cycle can be closed.
    """
    dist = {source: 0}
    parent = {source: -1}
    queue = deque([source])
    best = None
    best_len = limit
    while queue:
        u = queue.popleft()
        du = dist[u]
        if 2 * du + 1 >= best_len:
            break
        for w in adj[u]:
            if w == parent[u]:
                continue
            dw = dist.get(w)
            if dw is None:
                dist[w] = du + 1
                parent[w] = u
                queue.append(w)
            else:
                length = du + dw + 1
                if length < best_len:
                    best_len = length
                    best = (length, u, w)
    if best is None:
        return None
    return best + (parent,)


def _extract_cycle(found) -> tuple:
    _, u, w, parent = found
    left = [u]
    while parent[left[-1]] != -1:
        left.append(parent[left[-1]])
    right = [w]
    while parent[right[-1]] != -1:
        right.append(parent[right[-1]])
    # trim the shared root path so only the simple cycle remains
    while len(left) > 1 and len(right) > 1 and left[-2] == right[-2]:
        left.pop()
        right.pop()
    return tuple(reversed(left)) + tuple(right[:-1])


def girth(g: Graph) -> GirthReport:
    """Exact girth by breadth-first search from every vertex, pruned by the best so far."""
    adj = g.adj
    best = math.inf
    best_found = None
    for s in range(g.n):
        found = _bfs_cycle(adj, s, best)
        if found is not None:
            best = found[0]
            best_found = found
            if best == 3:
                break
    if best_found is None:
        return GirthReport(math.inf, ())
    return GirthReport(best, _extract_cycle(best_found))


def short_cycle_near(adj, v: int, limit: int):
    """A cycle of length < ``limit`` detected by BFS from ``v``, or ``None``.

    Every cycle shorter than ``limit`` through ``v`` is found; cycles found
    may also pass near ``v`` without containing it.
    """
    found = _bfs_cycle(adj, v, limit)
    return None if found is None else _extract_cycle(found)


# --- matching --------------------------------------------------------------

@dataclass(frozen=True)
class Matching:
    partner: tuple  # partner[v] or -1

    def __len__(self) -> int:
        return sum(1 for p in self.partner if p >= 0) // 2

    def edges(self):
        return [(v, p) for v, p in enumerate(self.partner) if p > v]

    def is_valid(self, g: Graph) -> bool:
        for v, p in enumerate(self.partner):
            if p < 0:
                continue
            if p == v or self.partner[p] != v or not g.has_edge(v, p):
                return False
        return True


def _greedy_matching(adj, n):
    # min-degree greedy (lowest id first); leaves few free vertices on cubic graphs
    mate = [-1] * n
    deg = [len(a) for a in adj]
    heaps = [[] for _ in range(max(deg, default=0) + 1)]
    for v in range(n):
        heaps[deg[v]].append(v)
    alive = [True] * n

    def remove(x):
        alive[x] = False
        for y in adj[x]:
            if alive[y]:
                deg[y] -= 1
                heapq.heappush(heaps[deg[y]], y)

    def pop_min():
        for d, h in enumerate(heaps):
            while h:
                v = heapq.heappop(h)
                if alive[v] and deg[v] == d:
                    return v, d
        return None, None

    while True:
        v, d = pop_min()
        if v is None:
            break
        if d == 0:
            alive[v] = False
            continue
        u = min((y for y in adj[v] if alive[y]), key=lambda y: (deg[y], y))
        mate[v], mate[u] = u, v
        remove(v)
        remove(u)
    return mate


def maximum_matching(g: Graph) -> Matching:
    """Maximum-cardinality matching in a general graph (Edmonds' blossom algorithm).

    Starts from a greedy matching and grows alternating trees from each free
    vertex, contracting odd cycles into blossoms via a base array.
    """
    n, adj = g.n, g.adj
    mate = _greedy_matching(adj, n)
    base = list(range(n))
    members = [[v] for v in range(n)]  # vertices whose base is v
    parent = [-1] * n
    used = [False] * n
    blossom = [False] * n
    marked = []
    touched = []

    def lca(a, b):
        seen = set()
        while True:
            a = base[a]
            seen.add(a)
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if b in seen:
                return b
            b = parent[mate[b]]

    def mark(x):
        if not blossom[x]:
            blossom[x] = True
            marked.append(x)

    def mark_path(v, b, child):
        while base[v] != b:
            mark(base[v])
            mark(base[mate[v]])
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    def find_path(root):
        for v in touched:
            used[v] = False
            parent[v] = -1
            base[v] = v
            members[v] = [v]
        touched.clear()
        used[root] = True
        touched.append(root)
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    cur = lca(v, to)
                    mark_path(v, cur, to)
                    mark_path(to, cur, v)
                    for x in marked:
                        blossom[x] = False
                        group = members[x]
                        for i in group:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                        if x != cur:
                            members[cur].extend(group)
                            members[x] = []
                    marked.clear()
                elif parent[to] == -1:
                    parent[to] = v
                    touched.append(to)
                    if mate[to] == -1:
                        return to
                    m = mate[to]
                    used[m] = True
                    touched.append(m)
                    queue.append(m)
        return -1

    for root in range(n):
        if mate[root] != -1 or not adj[root]:
            continue
        end = find_path(root)
        while end != -1:
            pv = parent[end]
            ppv = mate[pv]
            mate[end] = pv
            mate[pv] = end
            end = ppv
    return Matching(tuple(mate))


# --- path decomposition ----------------------------------------------------

def path_length_bounds(g: int, K: int):
    """``(L_min, L_max)`` in vertices, clamped so both are at least 1."""
    L_min = max(1, math.ceil(g / (4 * K)))
    L_max = max(L_min, math.ceil(g / (2 * K)) - 1)
    return L_min, L_max


@dataclass(frozen=True)
class PathSystem:
    paths: tuple  # of tuples of vertices
    mate: dict  # covered vertex -> covered vertex
    uncovered: frozenset
    g: int
    K: int
    L_min: int
    L_max: int
    preserved_short: int = 0  # remainder paths kept whole because they were short
    undersized: int = 0  # split segments that could not reach L_min

    def path_of(self) -> dict:
        return {v: k for k, path in enumerate(self.paths) for v in path}


def _split(seq, L_max: int):
    m = len(seq)
    if m <= L_max:
        return [tuple(seq)]
    parts = -(-m // L_max)
    size, extra = divmod(m, parts)
    out, start = [], 0
    for k in range(parts):
        length = size + (1 if k < extra else 0)
        out.append(tuple(seq[start:start + length]))
        start += length
    return out


def decompose_paths(g: Graph, matching: Matching, girth_param: int, K: int) -> PathSystem:
    """Split the matched part of ``g`` into short paths whose vertices pair up
    through matching edges.

    Removing unmatched vertices and matching edges leaves paths and cycles;
    cycles (cut at their lowest vertex) and long paths are cut into
    consecutive segments of near-equal size at most ``L_max``.
    """
    if not g.is_cubic():
        raise ValueError("decompose_paths needs a cubic graph")
    partner = matching.partner
    n = g.n
    covered = [partner[v] >= 0 for v in range(n)]
    rest = [
        [w for w in g.adj[v] if covered[w] and w != partner[v]] if covered[v] else []
        for v in range(n)
    ]
    L_min, L_max = path_length_bounds(girth_param, K)
    seen = [False] * n
    chains = []  # (sequence, is_cycle)

    def walk(start, first):
        seq = [start]
        seen[start] = True
        prev, cur = start, first
        while cur is not None and not seen[cur]:
            seq.append(cur)
            seen[cur] = True
            nxt = [w for w in rest[cur] if w != prev]
            prev, cur = cur, (nxt[0] if nxt else None)
        return seq

    for v in range(n):
        if covered[v] and not seen[v] and len(rest[v]) <= 1:
            chains.append((walk(v, rest[v][0] if rest[v] else None), False))
    for v in range(n):
        if covered[v] and not seen[v]:
            chains.append((walk(v, min(rest[v])), True))

    paths = []
    preserved = undersized = 0
    for seq, is_cycle in chains:
        if not is_cycle and len(seq) <= L_max:
            preserved += 1
        pieces = _split(seq, L_max)
        if len(pieces) > 1:
            undersized += sum(1 for p in pieces if len(p) < L_min)
        paths.extend(pieces)
    mate = {v: partner[v] for v in range(n) if covered[v]}
    uncovered = frozenset(v for v in range(n) if not covered[v])
    return PathSystem(
        tuple(paths), mate, uncovered, girth_param, K, L_min, L_max, preserved, undersized
    )


# --- random cubic graphs ---------------------------------------------------

def generate_random_cubic(n: int, seed=None, max_tries: int = 1000) -> Graph:
    """Pairing-model random cubic graph, resampled until simple."""
    if n < 4 or n % 2:
        raise ValueError(f"need an even n >= 4, got {n}")
    rng = np.random.default_rng(seed)
    points = np.repeat(np.arange(n), 3)
    for _ in range(max_tries):
        pairs = rng.permutation(points).reshape(-1, 2)
        u, v = pairs[:, 0], pairs[:, 1]
        if np.any(u == v):
            continue
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        keys = lo.astype(np.int64) * n + hi
        if np.unique(keys).size != keys.size:
            continue
        return Graph(n, zip(lo.tolist(), hi.tolist()))
    raise RuntimeError(f"no simple pairing in {max_tries} tries")


@dataclass(frozen=True)
class BoostResult:
    graph: Graph
    girth: float
    target: int
    swaps: int
    iterations: int

    @property
    def converged(self) -> bool:
        return self.girth >= self.target


def _dist_at_most(adj, a: int, b: int, skip_edge, depth: int) -> bool:
    """Is ``b`` within ``depth`` of ``a`` in the graph minus edge ``skip_edge``?"""
    if depth <= 0:
        return a == b
    frontier = {a}
    seen = {a}
    x, y = skip_edge
    for _ in range(depth):
        nxt = set()
        for u in frontier:
            for w in adj[u]:
                if (u == x and w == y) or (u == y and w == x):
                    continue
                if w == b:
                    return True
                if w not in seen:
                    seen.add(w)
                    nxt.add(w)
        frontier = nxt
    return False


def boost_girth(g: Graph, target: int, seed=None, max_iters: int = 100_000) -> BoostResult:
    """Raise the girth of a cubic graph to ``target`` by degree-preserving 2-swaps.

    Each step takes an edge ``a-b`` on a short cycle and a random edge ``c-d``
    and rewires them to ``a-c, b-d`` (or ``a-d, b-c``), keeping the swap only
    if neither new edge closes a cycle shorter than ``target``. Removing edges
    never creates cycles, so the set of short cycles strictly shrinks and a
    single pass over the vertices suffices.
    """
    if girth(g).girth >= target:
        return BoostResult(g, girth(g).girth, target, 0, 0)
    rng = random.Random(seed)
    adj = [set(a) for a in g.adj]
    edges = g.edges()
    index = {e: k for k, e in enumerate(edges)}

    def drop(u, v):
        e = (u, v) if u < v else (v, u)
        k = index.pop(e)
        last = edges.pop()
        if k < len(edges):
            edges[k] = last
            index[last] = k
        adj[u].discard(v)
        adj[v].discard(u)

    def add(u, v):
        e = (u, v) if u < v else (v, u)
        index[e] = len(edges)
        edges.append(e)
        adj[u].add(v)
        adj[v].add(u)

    iters = swaps = 0
    pending = list(range(g.n - 1, -1, -1))
    while pending and iters < max_iters:
        v = pending[-1]
        cycle = short_cycle_near(adj, v, target)
        if cycle is None:
            pending.pop()
            continue
        iters += 1
        k = rng.randrange(len(cycle))
        a, b = cycle[k], cycle[(k + 1) % len(cycle)]
        c, d = edges[rng.randrange(len(edges))]
        if rng.random() < 0.5:
            c, d = d, c
        if len({a, b, c, d}) < 4 or c in adj[a] or d in adj[b]:
            continue
        drop(a, b)
        drop(c, d)
        add(a, c)
        add(b, d)
        if _dist_at_most(adj, a, c, (a, c), target - 2) or _dist_at_most(
            adj, b, d, (b, d), target - 2
        ):
            drop(a, c)
            drop(b, d)
            add(a, b)
            add(c, d)
            continue
        swaps += 1
    out = Graph.from_adjacency(adj)
    return BoostResult(out, girth(out).girth, target, swaps, iters)
