"""Motion sheaves V/S on incidence graphs and the rigidity predicates."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from . import linalg
from .errors import ConsistencyError, PreconditionError
from .graphs import Hypergraph, Multigraph, incidence_graph, is_sparse, multiply_edges
from .sheaf import CellularSheaf, CohomologyReport, cohomology
from .subspaces import (
    Subspace,
    complement_projection,
    intersect,
    make_rng,
    sample_subspace,
)


@dataclass(frozen=True, eq=False)
class MotionSheafSpec:
    """A hypergraph with one subspace S(v) of Q^n per vertex."""

    base: Hypergraph
    ambient_dim: int
    vertex_subspaces: Mapping

    def __post_init__(self):
        base = self.base
        if isinstance(base, Multigraph):
            base = base.as_hypergraph()
            object.__setattr__(self, "base", base)
        object.__setattr__(self, "vertex_subspaces", dict(self.vertex_subspaces))
        if set(self.vertex_subspaces) != set(base.vertices):
            raise PreconditionError("exactly one subspace per vertex required")
        for v, s in self.vertex_subspaces.items():
            if s.ambient_dim != self.ambient_dim:
                raise PreconditionError(f"subspace at {v!r} lives in dimension {s.ambient_dim}")

    def S(self, v) -> Subspace:
        return self.vertex_subspaces[v]

    @cached_property
    def edge_subspaces(self) -> tuple:
        """S(e) = intersection of S(v) over v in e."""
        return tuple(intersect([self.S(v) for v in self.base.ordered_edge(j)])
                     for j in range(self.base.n_edges))

    @property
    def s(self) -> int | None:
        dims = {x.dim for x in self.vertex_subspaces.values()}
        return dims.pop() if len(dims) == 1 else None

    def restricted(self, vertices, edges) -> "MotionSheafSpec":
        sub = self.base.sub(vertices, edges)
        return MotionSheafSpec(sub, self.ambient_dim, {v: self.S(v) for v in sub.vertices})

    def to_json(self) -> dict:
        return {
            "graph": self.base.to_json() if not self.base.is_graph() else self.base.as_multigraph().to_json(),
            "n": self.ambient_dim,
            "subspaces": {str(v): self.S(v).to_json() for v in self.base.vertices},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MotionSheafSpec":
        from .graphs import graph_from_json

        g = graph_from_json(obj["graph"])
        h = g.as_hypergraph() if isinstance(g, Multigraph) else g
        n = obj["n"]
        subs = {}
        for v in h.vertices:
            rows = obj["subspaces"].get(str(v), obj["subspaces"].get(v))
            if rows is None:
                raise PreconditionError(f"no subspace given for vertex {v!r}")
            subs[v] = Subspace.span(rows, n) if rows else Subspace.zero(n)
        return cls(h, n, subs)


@dataclass(frozen=True)
class RigidityVerdict:
    h0: int
    h1: int
    trivial_dim: int
    independent: bool
    rigid: bool
    minimally_rigid: bool
    note: str | None = None

    def to_json(self) -> dict:
        out = {
            "h0": self.h0,
            "h1": self.h1,
            "trivial_dim": self.trivial_dim,
            "independent": self.independent,
            "rigid": self.rigid,
            "minimally_rigid": self.minimally_rigid,
        }
        if self.note:
            out["note"] = self.note
        return out


def build_motion_sheaf(spec: MotionSheafSpec) -> CellularSheaf:
    """The sheaf V/S on I(G).

    Each quotient V/S is coordinatized by Q_S, the echelon annihilator basis
    of S.  On the vertex side of an incidence the restriction is the
    identity; on the edge side it is the matrix A with A Q_{S(e)} = Q_{S(v)}.
    Signs follow the incidence graph: edge node +1, vertex node -1.
    """
    h = spec.base
    ig = incidence_graph(h)
    g = ig.as_multigraph()
    quot_v = {v: spec.S(v).quotient_matrix() for v in h.vertices}
    quot_e = [s.quotient_matrix() for s in spec.edge_subspaces]
    dims = {}
    for v in h.vertices:
        dims[("v", v)] = quot_v[v].nrows()
    for j in range(h.n_edges):
        dims[("e", j)] = quot_e[j].nrows()
    edge_dims = []
    restr, orient = {}, {}
    for i, (v, j) in enumerate(ig.incidences):
        k = quot_v[v].nrows()
        edge_dims.append(k)
        restr[(("v", v), i)] = linalg.identity(k)
        restr[(("e", j), i)] = linalg.solve_left(quot_e[j], quot_v[v])
        orient[(("v", v), i)] = ig.sign(i, ("v", v))
        orient[(("e", j), i)] = ig.sign(i, ("e", j))
    return CellularSheaf(g, dims, tuple(edge_dims), restr, orient)


def maxwell_defect(spec: MotionSheafSpec) -> int:
    """Sum of node stalk dims minus sum of incidence stalk dims."""
    n = spec.ambient_dim
    h = spec.base
    total = sum(n - spec.S(v).dim for v in h.vertices)
    total += sum(n - s.dim for s in spec.edge_subspaces)
    total -= sum(n - spec.S(v).dim for e in h.hyperedges for v in e)
    return total


def motion_cohomology(spec: MotionSheafSpec, sections: bool = False) -> CohomologyReport:
    return cohomology(build_motion_sheaf(spec), sections=sections)


def trivial_dim(spec: MotionSheafSpec) -> int:
    """Sum over components C of n - dim(intersection of S(v), v in C)."""
    n = spec.ambient_dim
    return sum(n - intersect([spec.S(v) for v in comp]).dim for comp in spec.base.components())


def analyze(spec: MotionSheafSpec) -> RigidityVerdict:
    rep = motion_cohomology(spec)
    defect = maxwell_defect(spec)
    if rep.h0 - rep.h1 != defect:
        raise ConsistencyError(f"h0 - h1 = {rep.h0 - rep.h1} but Maxwell count is {defect}")
    triv = trivial_dim(spec)
    if rep.h0 < triv:
        raise ConsistencyError(f"h0 = {rep.h0} is smaller than the trivial motions {triv}")
    connected = spec.base.is_connected()
    independent = rep.h1 == 0
    rigid = connected and rep.h0 == triv
    note = None if connected else "base is disconnected; rigidity is only defined for connected graphs"
    return RigidityVerdict(rep.h0, rep.h1, triv, independent, rigid, independent and rigid, note)


@dataclass(frozen=True)
class NecessaryConditionResult:
    holds: bool
    mode: str
    witness: tuple | None = None  # (vertices, edge indices) of a violating subgraph

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            w = {"vertices": list(self.witness[0]), "edges": list(self.witness[1])}
        return {"holds": self.holds, "mode": self.mode, "witness": w}


EXACT_MODE_MAX_VERTICES = 8


def _sparsity_mode_applies(spec: MotionSheafSpec) -> bool:
    h = spec.base
    s = spec.s
    if s is None or not h.is_graph():
        return False
    return all(x.dim == 0 for x in spec.edge_subspaces)


def necessary_condition(spec: MotionSheafSpec, mode: str = "auto") -> NecessaryConditionResult:
    """Counting condition every independent spec must satisfy.

    ``sparsity`` checks (n-s, n)-sparsity of (n-2s)G by pebble game (graphs,
    uniform s, trivial intersections across every edge).  ``exact`` tests
    the inequality subgraph by subgraph for vertex sets with trivial common
    intersection, up to 8 vertices.
    """
    if mode not in ("auto", "sparsity", "exact"):
        raise PreconditionError(f"unknown mode {mode!r}")
    applies = _sparsity_mode_applies(spec)
    if mode == "sparsity" and not applies:
        raise PreconditionError("sparsity mode needs a graph, uniform s and trivial edge intersections")
    if mode == "auto":
        mode = "sparsity" if applies else "exact"
    h = spec.base
    n = spec.ambient_dim
    if mode == "sparsity":
        s = spec.s
        mult = n - 2 * s
        if mult <= 0:
            return NecessaryConditionResult(True, mode)
        g = h.as_multigraph()
        res = is_sparse(multiply_edges(g, mult), n - s, n)
        if res.sparse:
            return NecessaryConditionResult(True, mode)
        vs = tuple(v for v in h.vertices if v in res.violating_set)
        return NecessaryConditionResult(False, mode, (vs, tuple(h.induced_edges(vs))))
    if h.n_vertices > EXACT_MODE_MAX_VERTICES:
        raise PreconditionError(f"exact mode is limited to {EXACT_MODE_MAX_VERTICES} vertices")
    mdim = {v: n - spec.S(v).dim for v in h.vertices}
    edim = [n - x.dim for x in spec.edge_subspaces]
    for size in range(1, h.n_vertices + 1):
        for vs in itertools.combinations(h.vertices, size):
            if intersect([spec.S(v) for v in vs]).dim != 0:
                continue
            es = h.induced_edges(vs)
            lhs = sum(sum(mdim[v] for v in h.hyperedges[j]) - edim[j] for j in es)
            rhs = sum(mdim[v] for v in vs) - n
            if lhs > rhs:
                return NecessaryConditionResult(False, mode, (vs, tuple(es)))
    return NecessaryConditionResult(True, mode)


def projection_trick_sheaf(spec: MotionSheafSpec) -> CellularSheaf:
    """Sheaf on I(G) with every stalk Q^n and both restrictions at v~e equal to P_v.

    P_v is the orthogonal projection with kernel S(v).
    """
    h = spec.base
    n = spec.ambient_dim
    ig = incidence_graph(h)
    g = ig.as_multigraph()
    proj = {v: complement_projection(spec.S(v)) for v in h.vertices}
    restr, orient = {}, {}
    for i, (v, j) in enumerate(ig.incidences):
        restr[(("v", v), i)] = proj[v]
        restr[(("e", j), i)] = proj[v]
        orient[(("v", v), i)] = ig.sign(i, ("v", v))
        orient[(("e", j), i)] = ig.sign(i, ("e", j))
    dims = {x: n for x in g.vertices}
    return CellularSheaf(g, dims, (n,) * len(ig.incidences), restr, orient)


def projection_trick_h0(spec: MotionSheafSpec) -> int:
    """h0 of V/S recovered from the full-stalk sheaf by subtracting the S(v) and S(e) fibres."""
    rep = cohomology(projection_trick_sheaf(spec))
    fibres = sum(spec.S(v).dim for v in spec.base.vertices)
    fibres += sum(x.dim for x in spec.edge_subspaces)
    return rep.h0 - fibres


def check_dual_paths(spec: MotionSheafSpec) -> CohomologyReport:
    rep = motion_cohomology(spec)
    alt = projection_trick_h0(spec)
    if rep.h0 != alt:
        raise ConsistencyError(f"quotient path h0 = {rep.h0}, projection path h0 = {alt}")
    return rep


def sample_generic_spec(g, s: int, n: int, rng_seed=None) -> MotionSheafSpec:
    if not 0 <= s <= n:
        raise PreconditionError(f"need 0 <= s <= n, got s={s}, n={n}")
    h = g.as_hypergraph() if isinstance(g, Multigraph) else g
    rng = make_rng(rng_seed)
    return MotionSheafSpec(h, n, {v: sample_subspace(s, n, rng) for v in h.vertices})


@dataclass(frozen=True)
class TrialResult:
    seed: int
    h0: int
    h1: int
    independent: bool
    matches: bool

    def to_json(self) -> dict:
        return {"seed": self.seed, "h0": self.h0, "h1": self.h1,
                "independent": self.independent, "matches": self.matches}


@dataclass(frozen=True)
class MainTheoremCheck:
    sparse: bool
    agrees: bool
    trials: tuple

    def to_json(self) -> dict:
        return {"sparse": self.sparse, "agrees": self.agrees,
                "trials": [t.to_json() for t in self.trials]}


def check_main_theorem(g, n: int, trials: int = 5, rng_seed=0) -> MainTheoremCheck:
    """Compare h1 = 0 of sampled lines-in-Q^n specs against sparsity of (n-2)G."""
    if n < 3:
        raise PreconditionError("the main theorem needs n >= 3")
    mg = g.as_multigraph() if isinstance(g, Hypergraph) else g
    sparse = is_sparse(multiply_edges(mg, n - 2), n - 1, n).sparse
    master = random.Random(rng_seed)
    out = []
    for _ in range(trials):
        seed = master.randrange(2**32)
        spec = sample_generic_spec(mg, 1, n, seed)
        rep = motion_cohomology(spec)
        out.append(TrialResult(seed, rep.h0, rep.h1, rep.h1 == 0, (rep.h1 == 0) == sparse))
    return MainTheoremCheck(sparse, all(t.matches for t in out), tuple(out))
