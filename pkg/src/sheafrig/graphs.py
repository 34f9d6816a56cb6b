"""Hypergraphs, multigraphs, incidence graphs, sparsity and extension moves."""

from __future__ import annotations

import itertools
import logging
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .errors import BudgetExceeded, PreconditionError

log = logging.getLogger(__name__)

Vertex = Hashable


@dataclass(frozen=True)
class Multigraph:
    """Loopless multigraph.  Edge ids are positions in ``edges``.

    ``labels`` optionally records where each edge came from, e.g. ``(e, i)``
    for the i-th copy of edge e produced by :func:`multiply_edges`.
    """

    vertices: tuple
    edges: tuple
    labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            raise PreconditionError("duplicate vertex ids")
        known = set(self.vertices)
        for e in self.edges:
            if len(e) != 2:
                raise PreconditionError(f"edge {e} is not a pair")
            u, v = e
            if u not in known or v not in known:
                raise PreconditionError(f"edge {e} has an unknown endpoint")
            if u == v:
                raise PreconditionError(f"loop at {u!r}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != len(self.edges):
                raise PreconditionError("one label per edge required")

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable | None = None) -> "Multigraph":
        edges = [tuple(e) for e in edges]
        if vertices is None:
            vertices = list(dict.fromkeys(x for e in edges for x in e))
        return cls(tuple(vertices), tuple(edges))

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def label(self, e: int):
        return e if self.labels is None else self.labels[e]

    def multiplicities(self) -> Counter:
        return Counter(frozenset(e) for e in self.edges)

    def max_multiplicity(self) -> int:
        return max(self.multiplicities().values(), default=0)

    def degree(self, v) -> int:
        return sum(v in e for e in self.edges)

    def incident_edges(self, v) -> list[int]:
        return [i for i, e in enumerate(self.edges) if v in e]

    def induced_edge_count(self, subset) -> int:
        subset = set(subset)
        return sum(u in subset and v in subset for u, v in self.edges)

    def components(self) -> list[list]:
        return _components(self.vertices, self.edges)

    def is_connected(self) -> bool:
        return self.n_vertices > 0 and len(self.components()) == 1

    def as_hypergraph(self) -> "Hypergraph":
        return Hypergraph(self.vertices, tuple(frozenset(e) for e in self.edges))

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple
    hyperedges: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "hyperedges", tuple(frozenset(e) for e in self.hyperedges))
        if len(set(self.vertices)) != len(self.vertices):
            raise PreconditionError("duplicate vertex ids")
        known = set(self.vertices)
        for e in self.hyperedges:
            if len(e) < 2:
                raise PreconditionError(f"hyperedge {set(e)} has fewer than two vertices")
            if not e <= known:
                raise PreconditionError(f"hyperedge {set(e)} has an unknown vertex")

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable | None = None) -> "Hypergraph":
        edges = [tuple(e) for e in edges]
        if vertices is None:
            vertices = list(dict.fromkeys(x for e in edges for x in e))
        return cls(tuple(vertices), tuple(frozenset(e) for e in edges))

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.hyperedges)

    @property
    def uniformity(self) -> int | None:
        sizes = {len(e) for e in self.hyperedges}
        return sizes.pop() if len(sizes) == 1 else None

    def is_graph(self) -> bool:
        return all(len(e) == 2 for e in self.hyperedges)

    def ordered_edge(self, j: int) -> tuple:
        """Endpoints of hyperedge j in vertex order."""
        return tuple(sorted(self.hyperedges[j], key=self.index.__getitem__))

    def as_multigraph(self) -> Multigraph:
        if not self.is_graph():
            raise PreconditionError("hypergraph is not a graph")
        return Multigraph(self.vertices, tuple(self.ordered_edge(j) for j in range(self.n_edges)))

    def components(self) -> list[list]:
        return _components(self.vertices, self.hyperedges)

    def is_connected(self) -> bool:
        return self.n_vertices > 0 and len(self.components()) == 1

    def induced_edges(self, subset) -> list[int]:
        subset = set(subset)
        return [j for j, e in enumerate(self.hyperedges) if e <= subset]

    def sub(self, vertices: Iterable, edges: Iterable[int]) -> "Hypergraph":
        vertices = [v for v in self.vertices if v in set(vertices)]
        return Hypergraph(vertices, tuple(self.hyperedges[j] for j in edges))

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "hyperedges": [list(self.ordered_edge(j)) for j in range(self.n_edges)],
        }


def _components(vertices, edges) -> list[list]:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        e = list(e)
        for x in e[1:]:
            ra, rb = find(e[0]), find(x)
            if ra != rb:
                parent[rb] = ra
    groups: dict = {}
    for v in vertices:
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


@dataclass(frozen=True)
class IncidenceGraph:
    """I(G): one node per vertex and per edge of G, one link per incidence.

    Node ids are ``("v", vertex)`` and ``("e", edge_index)``.  For each
    incidence the vertex side carries sign -1 and the edge side +1.
    """

    nodes: tuple
    incidences: tuple  # (vertex, edge_index)

    def sign(self, incidence: int, node) -> int:
        v, j = self.incidences[incidence]
        if node == ("v", v):
            return -1
        if node == ("e", j):
            return 1
        raise KeyError(node)

    def as_multigraph(self) -> Multigraph:
        return Multigraph(self.nodes, tuple((("v", v), ("e", j)) for v, j in self.incidences))


def incidence_graph(g: Hypergraph | Multigraph) -> IncidenceGraph:
    h = g.as_hypergraph() if isinstance(g, Multigraph) else g
    nodes = tuple(("v", v) for v in h.vertices) + tuple(("e", j) for j in range(h.n_edges))
    incidences = tuple((v, j) for j in range(h.n_edges) for v in h.ordered_edge(j))
    return IncidenceGraph(nodes, incidences)


def complete_graph(n: int) -> Multigraph:
    return Multigraph.from_edges(itertools.combinations(range(n), 2), range(n))


def parallel_pair(copies: int, vertices: tuple = (0, 1)) -> Multigraph:
    """K_2 with ``copies`` parallel edges."""
    return Multigraph(tuple(vertices), tuple(tuple(vertices) for _ in range(copies)))


def multiply_edges(g: Multigraph | Hypergraph, a: int) -> Multigraph:
    """a copies of every edge; copy i of edge e sits at index e*a + (i-1) with label (e, i)."""
    if a < 1:
        raise PreconditionError("multiplier must be at least 1")
    if isinstance(g, Hypergraph):
        g = g.as_multigraph()
    edges = []
    labels = []
    for e, uv in enumerate(g.edges):
        for i in range(1, a + 1):
            edges.append(uv)
            labels.append((e, i))
    return Multigraph(g.vertices, tuple(edges), tuple(labels))


# ---------------------------------------------------------------- sparsity


@dataclass(frozen=True)
class SparsityResult:
    sparse: bool
    tight: bool
    violating_set: frozenset | None = None

    def to_json(self) -> dict:
        witness = None
        if self.violating_set is not None:
            witness = sorted(self.violating_set, key=repr)
        return {"sparse": self.sparse, "tight": self.tight, "witness": witness}


class PebbleGame:
    """(k, l)-pebble game on a loopless multigraph, valid for 0 <= l < 2k."""

    def __init__(self, vertices: Sequence, k: int, l: int):
        if not 0 <= l < 2 * k:
            raise PreconditionError(f"pebble game needs 0 <= l < 2k, got k={k}, l={l}")
        self.k, self.l = k, l
        self.pebbles = {v: k for v in vertices}
        self.out: dict = {v: [] for v in vertices}  # v -> list of heads (multi)
        self.accepted = 0

    def _find(self, start, exclude) -> list | None:
        """Path start -> ... -> x with a free pebble at x not in ``exclude``."""
        seen = {start}
        stack = [(start, iter(self.out[start]))]
        path = [start]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                path.pop()
                continue
            if nxt in seen:
                continue
            seen.add(nxt)
            path.append(nxt)
            if self.pebbles[nxt] > 0 and nxt not in exclude:
                return list(path)
            stack.append((nxt, iter(self.out[nxt])))
        return None

    def _pull(self, target, exclude) -> bool:
        path = self._find(target, exclude)
        if path is None:
            return False
        # reverse every edge along the path; the pebble moves back to target
        for a, b in zip(path, path[1:]):
            self.out[a].remove(b)
            self.out[b].append(a)
        self.pebbles[path[-1]] -= 1
        self.pebbles[target] += 1
        return True

    def reach(self, roots) -> set:
        seen = set(roots)
        stack = list(roots)
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def try_insert(self, u, v) -> bool:
        need = self.l + 1
        ends = (u, v)
        while self.pebbles[u] + self.pebbles[v] < need:
            moved = False
            for w in ends:
                if self.pebbles[w] < self.k and self._pull(w, ends):
                    moved = True
                    break
            if not moved:
                return False
        src = u if self.pebbles[u] > 0 else v
        dst = v if src == u else u
        self.pebbles[src] -= 1
        self.out[src].append(dst)
        self.accepted += 1
        return True


def _pebble_sparsity(g: Multigraph, d: int, l: int) -> SparsityResult:
    game = PebbleGame(g.vertices, d, l)
    for u, v in g.edges:
        if not game.try_insert(u, v):
            witness = frozenset(game.reach((u, v)))
            return SparsityResult(False, False, witness)
    return SparsityResult(True, g.n_edges == d * g.n_vertices - l)


def _enumerated_sparsity(h: Hypergraph, d: int, l: int) -> SparsityResult:
    r = h.uniformity or 2
    for size in range(r, h.n_vertices + 1):
        for subset in itertools.combinations(h.vertices, size):
            if len(h.induced_edges(subset)) > d * size - l:
                return SparsityResult(False, False, frozenset(subset))
    return SparsityResult(True, h.n_edges == d * h.n_vertices - l)


def is_sparse(g: Multigraph | Hypergraph, d: int, l: int) -> SparsityResult:
    """(d, l)-sparsity: every V' with |V'| >= r spans at most d|V'| - l edges.

    Graphs and multigraphs go through the pebble game (0 <= l < 2d);
    genuine hypergraphs fall back to subset enumeration.
    """
    if isinstance(g, Hypergraph) and not g.is_graph():
        r = g.uniformity
        if r is None:
            raise PreconditionError("sparsity is defined for uniform hypergraphs only")
        if l > d * r - 1:
            raise PreconditionError(f"need l <= d*r - 1 = {d * r - 1}, got l={l}")
        return _enumerated_sparsity(g, d, l)
    if isinstance(g, Hypergraph):
        g = g.as_multigraph()
    if not 0 <= l < 2 * d:
        raise PreconditionError(
            f"pebble game requires 0 <= l < 2d (got d={d}, l={l}); use oracles.brute_sparsity"
        )
    return _pebble_sparsity(g, d, l)


# ---------------------------------------------------------------- extensions


@dataclass(frozen=True)
class ExtensionMove:
    """A d-dimensional k-extension.

    Deleted edge j (endpoints u_j, u_j' in stored order) is replaced by
    f_{2j-1} = u_j v* and f_{2j} = u_j' v*; the attach vertices give
    f_{2k+j} = v_j v*.
    """

    dim_d: int
    order_k: int
    deleted_edges: tuple
    new_vertex: Vertex
    attach_vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "deleted_edges", tuple(self.deleted_edges))
        object.__setattr__(self, "attach_vertices", tuple(self.attach_vertices))
        d, k = self.dim_d, self.order_k
        if not 0 <= k <= d:
            raise PreconditionError(f"need 0 <= k <= d, got k={k}, d={d}")
        if len(self.deleted_edges) != k:
            raise PreconditionError(f"{k}-extension needs {k} deleted edges")
        if len(set(self.deleted_edges)) != k:
            raise PreconditionError("deleted edges must be distinct")
        if len(self.attach_vertices) != d - k:
            raise PreconditionError(f"need d - k = {d - k} attach vertices")

    def to_json(self) -> dict:
        return {
            "d": self.dim_d,
            "k": self.order_k,
            "deleted_edges": list(self.deleted_edges),
            "new_vertex": self.new_vertex,
            "attach_vertices": list(self.attach_vertices),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExtensionMove":
        return cls(obj["d"], obj["k"], tuple(obj["deleted_edges"]), obj["new_vertex"],
                   tuple(obj["attach_vertices"]))


def new_edge_list(g: Multigraph, m: ExtensionMove) -> list[tuple]:
    """The edges f_1 .. f_{d+k} of the move, in order."""
    for e in m.deleted_edges:
        if not 0 <= e < g.n_edges:
            raise PreconditionError(f"deleted edge {e} does not exist")
    known = set(g.vertices)
    for v in m.attach_vertices:
        if v not in known:
            raise PreconditionError(f"attach vertex {v!r} does not exist")
    if m.new_vertex in known:
        raise PreconditionError(f"new vertex {m.new_vertex!r} already exists")
    fs = []
    for e in m.deleted_edges:
        u, u2 = g.edges[e]
        fs.append((u, m.new_vertex))
        fs.append((u2, m.new_vertex))
    fs.extend((v, m.new_vertex) for v in m.attach_vertices)
    return fs


def apply_extension(g: Multigraph, m: ExtensionMove) -> Multigraph:
    """Remaining edges keep their relative order; f_1 .. f_{d+k} are appended last."""
    fs = new_edge_list(g, m)
    gone = set(m.deleted_edges)
    kept = [e for i, e in enumerate(g.edges) if i not in gone]
    labels = None
    if g.labels is not None:
        labels = [g.labels[i] for i in range(g.n_edges) if i not in gone]
        labels += [("f", j + 1) for j in range(len(fs))]
    return Multigraph(g.vertices + (m.new_vertex,), tuple(kept + fs), labels)


def extension_respects_bound(g: Multigraph, m: ExtensionMove, bound: int) -> bool:
    """No pair of vertices ends up with more than ``bound`` parallel edges."""
    counts = Counter(u for u, _ in new_edge_list(g, m))
    return max(counts.values(), default=0) <= bound


def creates_parallel_edges(g: Multigraph, m: ExtensionMove) -> bool:
    h = apply_extension(g, m)
    return h.max_multiplicity() > 1


@dataclass(frozen=True)
class TightGeneration:
    graph: Multigraph
    moves: tuple
    base: tuple = (0, 1)


def _random_move(g: Multigraph, d: int, bound: int, new_vertex, rng: random.Random) -> ExtensionMove:
    while True:
        k = rng.randint(0, min(d, g.n_edges))
        deleted = tuple(rng.sample(range(g.n_edges), k))
        attach = tuple(rng.choice(g.vertices) for _ in range(d - k))
        move = ExtensionMove(d, k, deleted, new_vertex, attach)
        if extension_respects_bound(g, move, bound):
            return move


def generate_tight(n: int, target_vertices: int, rng_seed=None) -> TightGeneration:
    """Random (n-1, n)-tight multigraph grown from K_2^{n-2} by (n-1)-dimensional k-extensions."""
    if n < 3:
        raise PreconditionError("need n >= 3")
    if target_vertices < 2:
        raise PreconditionError("need at least 2 vertices")
    rng = rng_seed if isinstance(rng_seed, random.Random) else random.Random(rng_seed)
    d, bound = n - 1, n - 2
    g = parallel_pair(bound)
    moves = []
    for v in range(2, target_vertices):
        move = _random_move(g, d, bound, v, rng)
        g = apply_extension(g, move)
        moves.append(move)
    return TightGeneration(Multigraph(g.vertices, g.edges), tuple(moves))


def replay_moves(n: int, moves: Sequence[ExtensionMove], base: tuple = (0, 1)) -> Multigraph:
    g = parallel_pair(n - 2, base)
    for m in moves:
        g = apply_extension(g, m)
    return g


def same_multigraph(a: Multigraph, b: Multigraph) -> bool:
    """Equal vertex sets and equal edge multisets (edge order ignored)."""
    return set(a.vertices) == set(b.vertices) and a.multiplicities() == b.multiplicities()


@dataclass(frozen=True)
class _ReverseStep:
    new_vertex: Vertex
    pairs: tuple
    attach: tuple


def _pairings(counts: Counter, k: int):
    """Ways to pick k disjoint pairs {a, b}, a != b, out of a multiset."""
    if k == 0:
        yield ()
        return
    items = sorted((x for x, c in counts.items() if c > 0), key=repr)
    if not items:
        return
    first = items[0]
    # either first is left unpaired entirely, or one copy pairs with a larger item
    rest = Counter(counts)
    for partner in items[1:]:
        rest2 = Counter(counts)
        rest2[first] -= 1
        rest2[partner] -= 1
        for tail in _pairings(+rest2, k - 1):
            if not tail or repr(tail[0][0]) >= repr(first):
                yield ((first, partner),) + tail
    del rest[first]
    yield from _pairings(rest, k)


def _reverse(g: Multigraph, step: _ReverseStep) -> Multigraph:
    v = step.new_vertex
    vertices = tuple(x for x in g.vertices if x != v)
    edges = [e for e in g.edges if v not in e]
    edges += [tuple(sorted(p, key=g.index.__getitem__)) for p in step.pairs]
    return Multigraph(vertices, tuple(edges))


def decompose_tight(g: Multigraph, n: int, budget: int = 200_000) -> list[ExtensionMove] | None:
    """Find (n-1)-dimensional k-extensions rebuilding ``g`` from K_2^{n-2}.

    Backtracking over reverse moves.  Returns ``None`` only when ``budget``
    search nodes are exhausted.  The base pair is whatever two vertices of
    ``g`` are never introduced as a new vertex (see :func:`decomposition_base`).
    """
    d, l, bound = n - 1, n, n - 2
    res = is_sparse(g, d, l)
    if not res.tight:
        raise PreconditionError(f"graph is not ({d},{l})-tight")
    if g.max_multiplicity() > bound:
        raise PreconditionError(f"more than {bound} parallel edges between a pair")
    if g.n_vertices < 2:
        raise PreconditionError("need at least two vertices")

    state = {"nodes": 0}
    failed: set = set()

    def key(h: Multigraph):
        return frozenset(h.vertices), frozenset(h.multiplicities().items())

    def search(h: Multigraph) -> list[_ReverseStep] | None:
        if h.n_vertices == 2:
            return []
        state["nodes"] += 1
        if state["nodes"] > budget:
            raise BudgetExceeded
        hk = key(h)
        if hk in failed:
            return None
        by_degree = sorted(h.vertices, key=lambda x: (h.degree(x), repr(x)))
        for v in by_degree:
            deg = h.degree(v)
            if not d <= deg <= 2 * d:
                continue
            k = deg - d
            nbrs = Counter(u if w == v else w for u, w in (h.edges[i] for i in h.incident_edges(v)))
            for pairs in _pairings(nbrs, k):
                rest = Counter(nbrs)
                for a, b in pairs:
                    rest[a] -= 1
                    rest[b] -= 1
                attach = tuple(sorted(rest.elements(), key=repr))
                step = _ReverseStep(v, pairs, attach)
                smaller = _reverse(h, step)
                if smaller.max_multiplicity() > bound:
                    continue
                if not is_sparse(smaller, d, l).sparse:
                    continue
                tail = search(smaller)
                if tail is not None:
                    return tail + [step]
        failed.add(hk)
        return None

    try:
        steps = search(g)
    except BudgetExceeded:
        log.warning("decompose_tight: search budget of %d nodes exhausted", budget)
        return None
    if steps is None:
        return None
    created = {s.new_vertex for s in steps}
    base = tuple(v for v in g.vertices if v not in created)
    # translate reverse steps into forward moves indexed against the replayed graph
    h = parallel_pair(bound, base)
    moves = []
    for step in steps:
        used: set = set()
        deleted = []
        for a, b in step.pairs:
            idx = next(i for i, e in enumerate(h.edges) if set(e) == {a, b} and i not in used)
            used.add(idx)
            deleted.append(idx)
        move = ExtensionMove(d, len(step.pairs), tuple(deleted), step.new_vertex, step.attach)
        h = apply_extension(h, move)
        moves.append(move)
    return moves


def decomposition_base(g: Multigraph, moves: Sequence[ExtensionMove]) -> tuple:
    created = {m.new_vertex for m in moves}
    return tuple(v for v in g.vertices if v not in created)


# ---------------------------------------------------------------- I/O


def graph_from_json(obj: dict) -> Multigraph | Hypergraph:
    """Parse ``{"vertices": [...], "edges": [[u, v], ...]}`` or ``{"hyperedges": [...]}``."""
    if "edges" in obj:
        return Multigraph.from_edges([tuple(e) for e in obj["edges"]], obj.get("vertices"))
    if "hyperedges" in obj:
        h = Hypergraph.from_edges([tuple(e) for e in obj["hyperedges"]], obj.get("vertices"))
        return h
    raise PreconditionError('graph JSON needs an "edges" or "hyperedges" key')


def _dot_id(x) -> str:
    return '"' + str(x).replace('"', '\\"') + '"'


def to_dot(g: Multigraph | Hypergraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    if isinstance(g, Hypergraph) and not g.is_graph():
        for v in g.vertices:
            lines.append(f"  {_dot_id(v)};")
        for j in range(g.n_edges):
            hub = _dot_id(f"e{j}")
            lines.append(f"  {hub} [shape=point];")
            for v in g.ordered_edge(j):
                lines.append(f"  {hub} -- {_dot_id(v)};")
    else:
        mg = g.as_multigraph() if isinstance(g, Hypergraph) else g
        for v in mg.vertices:
            lines.append(f"  {_dot_id(v)};")
        for u, v in mg.edges:
            lines.append(f"  {_dot_id(u)} -- {_dot_id(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def incidence_to_dot(g: Multigraph | Hypergraph, name: str = "I") -> str:
    ig = incidence_graph(g)
    lines = [f"graph {name} {{"]
    for kind, x in ig.nodes:
        shape = "circle" if kind == "v" else "box"
        label = str(x) if kind == "v" else f"e{x}"
        lines.append(f"  {_dot_id(f'{kind}:{x}')} [shape={shape}, label={_dot_id(label)}];")
    for v, j in ig.incidences:
        lines.append(f"  {_dot_id(f'v:{v}')} -- {_dot_id(f'e:{j}')};")
    lines.append("}")
    return "\n".join(lines) + "\n"
