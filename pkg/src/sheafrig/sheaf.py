"""Cellular sheaves on (multi)graphs and their cohomology."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import flint

from . import linalg
from .errors import ConsistencyError, PreconditionError
from .graphs import Multigraph
from .linalg import Matrix


@dataclass(frozen=True, eq=False)
class CellularSheaf:
    """Stalk dimensions on vertices and edges, one restriction per incidence.

    ``restrictions[(v, e)]`` maps the stalk at vertex ``v`` to the stalk at
    edge ``e`` (shape edge_dim x vertex_dim).  ``orientation[(v, e)]`` is
    +1 or -1 with opposite signs at the two ends of every edge; by default
    the endpoint listed first in the edge gets +1.
    """

    base: Multigraph
    vertex_dims: Mapping
    edge_dims: tuple
    restrictions: Mapping
    orientation: Mapping = field(default=None)

    def __post_init__(self):
        g = self.base
        object.__setattr__(self, "vertex_dims", dict(self.vertex_dims))
        object.__setattr__(self, "edge_dims", tuple(self.edge_dims))
        object.__setattr__(self, "restrictions", dict(self.restrictions))
        if set(self.vertex_dims) != set(g.vertices):
            raise PreconditionError("vertex stalk dimensions must cover exactly the vertices")
        if len(self.edge_dims) != g.n_edges:
            raise PreconditionError("one edge stalk dimension per edge required")
        if any(x < 0 for x in self.vertex_dims.values()) or any(x < 0 for x in self.edge_dims):
            raise PreconditionError("stalk dimensions must be nonnegative")
        expected = {(v, e) for e, uv in enumerate(g.edges) for v in uv}
        if set(self.restrictions) != expected:
            raise PreconditionError("restrictions must be given for exactly the incidences")
        for (v, e), m in self.restrictions.items():
            if (m.nrows(), m.ncols()) != (self.edge_dims[e], self.vertex_dims[v]):
                raise PreconditionError(
                    f"restriction at ({v!r}, {e}) has shape {m.nrows()}x{m.ncols()}, "
                    f"expected {self.edge_dims[e]}x{self.vertex_dims[v]}"
                )
        if self.orientation is None:
            orient = {}
            for e, (a, b) in enumerate(g.edges):
                orient[(a, e)] = 1
                orient[(b, e)] = -1
            object.__setattr__(self, "orientation", orient)
        else:
            object.__setattr__(self, "orientation", dict(self.orientation))
            for e, (a, b) in enumerate(g.edges):
                sa, sb = self.orientation.get((a, e)), self.orientation.get((b, e))
                if {sa, sb} != {1, -1}:
                    raise PreconditionError(f"edge {e} needs opposite signs at its ends")

    @property
    def total_vertex_dim(self) -> int:
        return sum(self.vertex_dims.values())

    @property
    def total_edge_dim(self) -> int:
        return sum(self.edge_dims)

    def euler_characteristic(self) -> int:
        return self.total_vertex_dim - self.total_edge_dim

    def vertex_offsets(self) -> dict:
        out, c = {}, 0
        for v in self.base.vertices:
            out[v] = c
            c += self.vertex_dims[v]
        return out

    def to_json(self) -> dict:
        g = self.base
        return {
            "graph": g.to_json(),
            "vertex_dims": [self.vertex_dims[v] for v in g.vertices],
            "edge_dims": list(self.edge_dims),
            "restrictions": [
                {"vertex": v, "edge": e, "sign": self.orientation[(v, e)],
                 "matrix": linalg.to_strings(self.restrictions[(v, e)])}
                for e, uv in enumerate(g.edges) for v in uv
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CellularSheaf":
        g = Multigraph.from_edges([tuple(e) for e in obj["graph"]["edges"]], obj["graph"]["vertices"])
        vdims = dict(zip(g.vertices, obj["vertex_dims"]))
        edims = obj["edge_dims"]
        restr, orient = {}, {}
        for r in obj["restrictions"]:
            key = (r["vertex"], r["edge"])
            restr[key] = linalg.matrix(r["matrix"], vdims[r["vertex"]]) if r["matrix"] else linalg.zeros(
                edims[r["edge"]], vdims[r["vertex"]])
            orient[key] = r["sign"]
        return cls(g, vdims, edims, restr, orient)


@dataclass(frozen=True)
class CohomologyReport:
    h0: int
    h1: int
    coboundary_rank: int
    sections: Matrix | None = None  # rows span ker d, in echelon form

    def to_json(self) -> dict:
        return {"h0": self.h0, "h1": self.h1, "rank": self.coboundary_rank}


def coboundary(f: CellularSheaf) -> Matrix:
    """Block matrix: row block per edge, column block per vertex, block = sign * restriction."""
    g = f.base
    offsets = f.vertex_offsets()
    d = flint.fmpq_mat(f.total_edge_dim, f.total_vertex_dim)
    r0 = 0
    for e, uv in enumerate(g.edges):
        for v in uv:
            m = f.restrictions[(v, e)]
            sign = f.orientation[(v, e)]
            c0 = offsets[v]
            for i in range(m.nrows()):
                for j in range(m.ncols()):
                    x = m[i, j]
                    if x:
                        d[r0 + i, c0 + j] += sign * x
        r0 += f.edge_dims[e]
    return d


def cohomology(f: CellularSheaf, sections: bool = False) -> CohomologyReport:
    d = coboundary(f)
    rk = linalg.rank(d)
    basis = linalg.nullspace(d) if sections else None
    return CohomologyReport(f.total_vertex_dim - rk, f.total_edge_dim - rk, rk, basis)


def constant_sheaf(base: Multigraph, v_dim: int) -> CellularSheaf:
    if v_dim < 0:
        raise PreconditionError("stalk dimension must be nonnegative")
    eye = linalg.identity(v_dim)
    restr = {(v, e): eye for e, uv in enumerate(base.edges) for v in uv}
    return CellularSheaf(base, {v: v_dim for v in base.vertices}, (v_dim,) * base.n_edges, restr)


def reoriented(f: CellularSheaf, rng_seed=None) -> CellularSheaf:
    """Same sheaf with a random choice of sign per edge."""
    rng = rng_seed if isinstance(rng_seed, random.Random) else random.Random(rng_seed)
    orient = dict(f.orientation)
    for e, (a, b) in enumerate(f.base.edges):
        if rng.random() < 0.5:
            orient[(a, e)], orient[(b, e)] = orient[(b, e)], orient[(a, e)]
    return CellularSheaf(f.base, f.vertex_dims, f.edge_dims, f.restrictions, orient)


def restrict(f: CellularSheaf, vertices: Iterable, edges: Iterable[int], kind: int = 1,
             verify: bool = False) -> CellularSheaf:
    """Restrict to the subgraph (vertices, edges).

    kind 1 lives on the subgraph itself (edges renumbered in increasing
    order); kind 2 keeps the whole base and zeroes stalks outside it.  With
    ``verify`` the two constructions are built and their cohomology compared.
    """
    g = f.base
    vs = set(vertices)
    es = sorted(set(edges))
    if not vs <= set(g.vertices):
        raise PreconditionError("subgraph vertices must belong to the base")
    for e in es:
        if not 0 <= e < g.n_edges:
            raise PreconditionError(f"edge {e} is not in the base")
        if not set(g.edges[e]) <= vs:
            raise PreconditionError(f"edge {e} has an endpoint outside the subgraph")
    if kind not in (1, 2):
        raise PreconditionError("kind must be 1 or 2")

    def first():
        sub = Multigraph(tuple(v for v in g.vertices if v in vs), tuple(g.edges[e] for e in es))
        restr, orient = {}, {}
        for new, old in enumerate(es):
            for v in g.edges[old]:
                restr[(v, new)] = f.restrictions[(v, old)]
                orient[(v, new)] = f.orientation[(v, old)]
        return CellularSheaf(sub, {v: f.vertex_dims[v] for v in sub.vertices},
                             tuple(f.edge_dims[e] for e in es), restr, orient)

    def second():
        keep = set(es)
        vdims = {v: (f.vertex_dims[v] if v in vs else 0) for v in g.vertices}
        edims = tuple(f.edge_dims[e] if e in keep else 0 for e in range(g.n_edges))
        restr = {}
        for e, uv in enumerate(g.edges):
            for v in uv:
                restr[(v, e)] = f.restrictions[(v, e)] if e in keep else linalg.zeros(0, vdims[v])
        return CellularSheaf(g, vdims, edims, restr, f.orientation)

    out = first() if kind == 1 else second()
    if verify:
        other = second() if kind == 1 else first()
        a, b = cohomology(out), cohomology(other)
        if (a.h0, a.h1) != (b.h0, b.h1):
            raise ConsistencyError(f"restriction kinds disagree: {(a.h0, a.h1)} vs {(b.h0, b.h1)}")
    return out
