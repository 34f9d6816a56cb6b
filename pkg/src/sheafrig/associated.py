"""Associated sheaves on multigraphs: vertex stalks V/S_v, one-dimensional edge stalks given by forms."""

from __future__ import annotations

import itertools
import logging
import random
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import flint

from . import linalg
from .errors import ConsistencyError, PreconditionError
from .graphs import (
    ExtensionMove,
    Multigraph,
    apply_extension,
    decompose_tight,
    is_sparse,
    multiply_edges,
    parallel_pair,
)
from .motion import MotionSheafSpec, motion_cohomology
from .sheaf import CellularSheaf, CohomologyReport, cohomology
from .subspaces import (
    LinearForm,
    Subspace,
    forms_independent,
    forms_kernel,
    make_rng,
    projection_of,
    random_matrix,
    sample_form_annihilating,
    sample_subspace,
    sample_subspace_within,
    subspace_sum,
)

log = logging.getLogger(__name__)

MAX_RETRIES = 200


@dataclass(frozen=True, eq=False)
class AssociatedSheafSpec:
    """A point of Z_{s,n}: multigraph, subspaces S_v and forms alpha_e.

    Membership: alpha_e vanishes on S_v for both endpoints, and the two
    endpoint subspaces of every edge meet trivially.
    """

    base: Multigraph
    ambient_dim: int
    vertex_subspaces: Mapping
    edge_forms: tuple

    def __post_init__(self):
        g = self.base
        object.__setattr__(self, "vertex_subspaces", dict(self.vertex_subspaces))
        object.__setattr__(self, "edge_forms", tuple(self.edge_forms))
        n = self.ambient_dim
        if set(self.vertex_subspaces) != set(g.vertices):
            raise PreconditionError("exactly one subspace per vertex required")
        if len(self.edge_forms) != g.n_edges:
            raise PreconditionError("exactly one form per edge required")
        for v, s in self.vertex_subspaces.items():
            if s.ambient_dim != n:
                raise PreconditionError(f"subspace at {v!r} lives in dimension {s.ambient_dim}")
        for e, (u, v) in enumerate(g.edges):
            a = self.edge_forms[e]
            if a.ambient_dim != n:
                raise PreconditionError(f"form on edge {e} has the wrong length")
            if not (a.annihilates(self.S(u)) and a.annihilates(self.S(v))):
                raise PreconditionError(f"form on edge {e} does not vanish on its endpoint subspaces")
            if (self.S(u) & self.S(v)).dim != 0:
                raise PreconditionError(f"endpoint subspaces of edge {e} intersect nontrivially")

    def S(self, v) -> Subspace:
        return self.vertex_subspaces[v]

    @property
    def s(self) -> int | None:
        dims = {x.dim for x in self.vertex_subspaces.values()}
        return dims.pop() if len(dims) == 1 else None

    def with_forms(self, forms: Mapping) -> "AssociatedSheafSpec":
        new = list(self.edge_forms)
        for e, a in forms.items():
            new[e] = a
        return AssociatedSheafSpec(self.base, self.ambient_dim, self.vertex_subspaces, tuple(new))

    def to_json(self) -> dict:
        return {
            "graph": self.base.to_json(),
            "n": self.ambient_dim,
            "subspaces": {str(v): self.S(v).to_json() for v in self.base.vertices},
            "forms": [a.to_json() for a in self.edge_forms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AssociatedSheafSpec":
        g = Multigraph.from_edges([tuple(e) for e in obj["graph"]["edges"]], obj["graph"].get("vertices"))
        n = obj["n"]
        subs = {}
        for v in g.vertices:
            rows = obj["subspaces"].get(str(v), obj["subspaces"].get(v))
            if rows is None:
                raise PreconditionError(f"no subspace given for vertex {v!r}")
            subs[v] = Subspace.span(rows, n) if rows else Subspace.zero(n)
        return cls(g, n, subs, tuple(LinearForm.of(a) for a in obj["forms"]))


def _require_graph(spec: MotionSheafSpec) -> Multigraph:
    if not spec.base.is_graph():
        raise PreconditionError("base must be a graph")
    return spec.base.as_multigraph()


def collapse_to_graph_sheaf(spec: MotionSheafSpec, verify: bool = False) -> CellularSheaf:
    """Sheaf on G itself: V/S(v) on vertices, V/(S(u)+S(v)) on edges."""
    g = _require_graph(spec)
    quot = {v: spec.S(v).quotient_matrix() for v in g.vertices}
    vdims = {v: q.nrows() for v, q in quot.items()}
    edims, restr = [], {}
    for e, (u, v) in enumerate(g.edges):
        qe = subspace_sum(spec.S(u), spec.S(v)).quotient_matrix()
        edims.append(qe.nrows())
        restr[(u, e)] = linalg.solve_left(quot[u], qe)
        restr[(v, e)] = linalg.solve_left(quot[v], qe)
    f = CellularSheaf(g, vdims, tuple(edims), restr)
    if verify:
        a, b = cohomology(f), motion_cohomology(spec)
        if (a.h0, a.h1) != (b.h0, b.h1):
            raise ConsistencyError(f"collapsed sheaf {(a.h0, a.h1)} != motion sheaf {(b.h0, b.h1)}")
    return f


def expand_to_multigraph(spec: MotionSheafSpec, rng_seed=None, verify: bool = False) -> AssociatedSheafSpec:
    """(n-2s) copies of each edge carrying a basis of the annihilator of S_u + S_v.

    Without a seed the echelon basis is used; with a seed, a random basis.
    """
    g = _require_graph(spec)
    n, s = spec.ambient_dim, spec.s
    if s is None:
        raise PreconditionError("subspaces must share one dimension")
    if 2 * s > n:
        raise PreconditionError("need s <= n/2")
    mult = n - 2 * s
    if mult == 0:
        raise PreconditionError("n = 2s gives zero edge copies")
    rng = None if rng_seed is None else make_rng(rng_seed)
    forms = []
    for u, v in g.edges:
        if (spec.S(u) & spec.S(v)).dim != 0:
            raise PreconditionError(f"endpoint subspaces of edge {u!r}{v!r} intersect")
        q = subspace_sum(spec.S(u), spec.S(v)).quotient_matrix()
        if rng is not None:
            while True:
                c = random_matrix(mult, mult, rng)
                if linalg.rank(c) == mult:
                    break
            q = c * q
        forms.extend(LinearForm(linalg.row(q, i)) for i in range(mult))
    out = AssociatedSheafSpec(multiply_edges(g, mult), n, spec.vertex_subspaces, tuple(forms))
    if verify:
        a, b = cohomology_associated(out), motion_cohomology(spec)
        if (a.h0, a.h1) != (b.h0, b.h1):
            raise ConsistencyError(f"expanded sheaf {(a.h0, a.h1)} != motion sheaf {(b.h0, b.h1)}")
    return out


def associated_sheaf(spec: AssociatedSheafSpec) -> CellularSheaf:
    """Direct sheaf: restriction at v~e is the row c with c Q_{S_v} = alpha_e."""
    g = spec.base
    quot = {v: spec.S(v).quotient_matrix() for v in g.vertices}
    restr = {}
    for e, uv in enumerate(g.edges):
        a = spec.edge_forms[e].coefficients
        for v in uv:
            restr[(v, e)] = linalg.solve_left(quot[v], a)
    return CellularSheaf(g, {v: q.nrows() for v, q in quot.items()}, (1,) * g.n_edges, restr)


def r_matrix(spec: AssociatedSheafSpec):
    """|E| x n|V| matrix with +-alpha_e (Id - P_v) in the endpoint blocks.

    P_v is the orthogonal projection onto S_v, so dim ker R = h0 + sum dim S_v.
    """
    g = spec.base
    n = spec.ambient_dim
    col = {v: i * n for i, v in enumerate(g.vertices)}
    comp = {v: linalg.identity(n) - projection_of(spec.S(v)).matrix for v in g.vertices}
    r = flint.fmpq_mat(g.n_edges, n * g.n_vertices)
    for e, (u, v) in enumerate(g.edges):
        a = spec.edge_forms[e].coefficients
        for w, sign in ((u, 1), (v, -1)):
            row = a * comp[w]
            for j in range(n):
                x = row[0, j]
                if x:
                    r[e, col[w] + j] = sign * x
    return r


def r_matrix_h0(spec: AssociatedSheafSpec) -> int:
    r = r_matrix(spec)
    kernel = r.ncols() - linalg.rank(r)
    return kernel - sum(spec.S(v).dim for v in spec.base.vertices)


def cohomology_associated(spec: AssociatedSheafSpec) -> CohomologyReport:
    """Direct sheaf cohomology, cross-checked against the R-matrix count."""
    rep = cohomology(associated_sheaf(spec))
    alt = r_matrix_h0(spec)
    if rep.h0 != alt:
        raise ConsistencyError(f"direct path h0 = {rep.h0}, R-matrix path h0 = {alt}")
    return rep


def _edge_form_space(spec: AssociatedSheafSpec, u, v) -> Subspace:
    return subspace_sum(spec.S(u), spec.S(v))


def extend_associated(spec: AssociatedSheafSpec, move: ExtensionMove,
                      new_forms: Sequence[LinearForm] | None = None, rng_seed=None,
                      verify: bool = True) -> AssociatedSheafSpec:
    """Apply a (n-s)-dimensional k-extension.

    The pair f_{2j-1}, f_{2j} inherits the form of deleted edge e_j; f_{2k+j}
    gets a fresh form vanishing on S(v_j).  S(v*) is the common kernel of all
    d forms.  When ``verify`` is set and the input has h1 = 0, the output is
    re-checked to have h1 = 0.
    """
    n, s = spec.ambient_dim, spec.s
    if s is None:
        raise PreconditionError("subspaces must share one dimension")
    d, k = move.dim_d, move.order_k
    if d != n - s:
        raise PreconditionError(f"extension dimension must be n - s = {n - s}, got {d}")
    g = spec.base
    for e in move.deleted_edges:
        if not 0 <= e < g.n_edges:
            raise PreconditionError(f"deleted edge {e} does not exist")
    inherited = [spec.edge_forms[e] for e in move.deleted_edges]
    if new_forms is not None:
        new_forms = list(new_forms)
        if len(new_forms) != d - k:
            raise PreconditionError(f"need {d - k} fresh forms")
        for a, v in zip(new_forms, move.attach_vertices):
            if not a.annihilates(spec.S(v)):
                raise PreconditionError(f"fresh form does not vanish on S({v!r})")
        candidates = [new_forms]
    else:
        rng = make_rng(rng_seed)
        candidates = ([sample_form_annihilating(spec.S(v), rng) for v in move.attach_vertices]
                      for _ in range(MAX_RETRIES))
    g2 = apply_extension(g, move)
    last_error = None
    for fresh in candidates:
        forms = inherited + list(fresh)
        if not forms_independent(forms):
            last_error = "the d forms are linearly dependent"
            continue
        star = forms_kernel(forms, n)
        if star.dim != s:
            raise ConsistencyError(f"new vertex subspace has dimension {star.dim}, expected {s}")
        gone = set(move.deleted_edges)
        edge_forms = [a for e, a in enumerate(spec.edge_forms) if e not in gone]
        for a in inherited:
            edge_forms += [a, a]
        edge_forms += list(fresh)
        subs = dict(spec.vertex_subspaces)
        subs[move.new_vertex] = star
        try:
            out = AssociatedSheafSpec(Multigraph(g2.vertices, g2.edges), n, subs, tuple(edge_forms))
        except PreconditionError as exc:
            last_error = str(exc)
            continue
        if verify and cohomology_associated(spec).h1 == 0:
            h1 = cohomology_associated(out).h1
            if h1 != 0:
                raise ConsistencyError(f"extension produced h1 = {h1} from an independent sheaf")
        return out
    raise PreconditionError(f"no valid extension: {last_error}")


def find_independent_forms(spec: AssociatedSheafSpec, edge_subset: Sequence[int],
                           rng_seed=None) -> AssociatedSheafSpec | None:
    """Reassign forms so that those on ``edge_subset`` are linearly independent.

    First resamples only the selected forms; failing that, follows the
    constructive route: pick independent forms, then choose each S_v inside
    the kernels of its selected incident forms and resample all other forms.
    The result never has larger h1 than the input.
    """
    g = spec.base
    n, s = spec.ambient_dim, spec.s
    if s is None:
        raise PreconditionError("subspaces must share one dimension")
    edges = list(dict.fromkeys(edge_subset))
    if len(edges) > n - s:
        raise PreconditionError(f"at most n - s = {n - s} edges can carry independent forms")
    load = Counter(v for e in edges for v in g.edges[e])
    if load and max(load.values()) > n - 2 * s:
        raise PreconditionError(f"more than n - 2s = {n - 2 * s} selected edges at one vertex")
    rng = make_rng(rng_seed)
    base_h1 = cohomology_associated(spec).h1

    def good(cand: AssociatedSheafSpec) -> bool:
        return (forms_independent([cand.edge_forms[e] for e in edges])
                and cohomology_associated(cand).h1 <= base_h1)

    if forms_independent([spec.edge_forms[e] for e in edges]):
        return spec
    for _ in range(MAX_RETRIES // 4):
        new = {}
        for e in edges:
            u, v = g.edges[e]
            new[e] = sample_form_annihilating(_edge_form_space(spec, u, v), rng)
        cand = spec.with_forms(new)
        if good(cand):
            return cand
    for _ in range(MAX_RETRIES // 4):
        chosen = {}
        while True:
            for e in edges:
                chosen[e] = LinearForm(random_matrix(1, n, rng))
            if forms_independent(list(chosen.values())):
                break
        subs = {}
        for v in g.vertices:
            host = forms_kernel([chosen[e] for e in edges if v in g.edges[e]], n)
            subs[v] = sample_subspace_within(s, host, rng)
        forms = []
        ok = True
        for e, (u, v) in enumerate(g.edges):
            if e in chosen:
                forms.append(chosen[e])
                continue
            space = subspace_sum(subs[u], subs[v])
            if space.dim == n:
                ok = False
                break
            forms.append(sample_form_annihilating(space, rng))
        if not ok:
            continue
        try:
            cand = AssociatedSheafSpec(g, n, subs, tuple(forms))
        except PreconditionError:
            continue
        if good(cand):
            return cand
    return None


def resample_forms(spec: AssociatedSheafSpec, edges: Sequence[int] | None = None,
                   rng_seed=None) -> AssociatedSheafSpec | None:
    """Fresh random forms on ``edges`` (default all), keeping the subspaces.

    Moves a point within its fibre towards general position; accepted only if
    h1 does not grow.
    """
    g = spec.base
    rng = make_rng(rng_seed)
    edges = range(g.n_edges) if edges is None else edges
    base_h1 = cohomology_associated(spec).h1
    for _ in range(MAX_RETRIES // 4):
        new = {e: sample_form_annihilating(_edge_form_space(spec, *g.edges[e]), rng) for e in edges}
        cand = spec.with_forms(new)
        if cohomology_associated(cand).h1 <= base_h1:
            return cand
    return None


# ---------------------------------------------------------------- main pipeline


@dataclass(frozen=True)
class IndependentSheafResult:
    spec: AssociatedSheafSpec | None
    method: str  # "induction", "sampling" or "not-sparse"
    witness: frozenset | None = None

    def to_json(self) -> dict:
        return {
            "found": self.spec is not None,
            "method": self.method,
            "witness": None if self.witness is None else sorted(self.witness, key=repr),
            "spec": None if self.spec is None else self.spec.to_json(),
        }


def augment_to_tight(g: Multigraph, n: int, rng_seed=None) -> Multigraph:
    """Add random edges to an (n-1, n)-sparse multigraph until it is tight."""
    rng = make_rng(rng_seed)
    d, l = n - 1, n
    target = d * g.n_vertices - l
    pairs = [p for p in itertools.combinations(g.vertices, 2) for _ in range(n - 2)]
    rng.shuffle(pairs)
    cur = g
    for p in pairs:
        if cur.n_edges >= target:
            break
        cand = Multigraph(cur.vertices, cur.edges + (p,))
        if is_sparse(cand, d, l).sparse:
            cur = cand
    if cur.n_edges != target:
        raise ConsistencyError("could not complete a sparse graph to a tight one")
    return cur


def sample_associated(g: Multigraph, s: int, n: int, rng_seed=None) -> AssociatedSheafSpec:
    """Random subspaces, then a random form vanishing on both endpoints of each edge."""
    rng = make_rng(rng_seed)
    while True:
        subs = {v: sample_subspace(s, n, rng) for v in g.vertices}
        try:
            forms = [sample_form_annihilating(subspace_sum(subs[u], subs[v]), rng) for u, v in g.edges]
            return AssociatedSheafSpec(g, n, subs, tuple(forms))
        except PreconditionError:
            continue


def base_case_spec(n: int, vertices=(0, 1), rng_seed=None) -> AssociatedSheafSpec:
    """Lines at the two vertices of K_2^{n-2} and a random basis of Ann(S_0 + S_1) on the copies."""
    rng = make_rng(rng_seed)
    g = parallel_pair(n - 2, vertices)
    while True:
        subs = {v: sample_subspace(1, n, rng) for v in vertices}
        if (subs[vertices[0]] & subs[vertices[1]]).dim:
            continue
        q = subspace_sum(*subs.values()).quotient_matrix()
        c = random_matrix(n - 2, n - 2, rng)
        if linalg.rank(c) != n - 2:
            continue
        q = c * q
        forms = tuple(LinearForm(linalg.row(q, i)) for i in range(n - 2))
        return AssociatedSheafSpec(g, n, subs, forms)


def _restrict_to_edges(spec: AssociatedSheafSpec, g: Multigraph) -> AssociatedSheafSpec:
    """Keep one edge of ``spec.base`` for every edge of ``g`` (same endpoints)."""
    pool: dict = {}
    for i, (u, v) in enumerate(spec.base.edges):
        pool.setdefault(frozenset((u, v)), []).append(i)
    forms = []
    for u, v in g.edges:
        idx = pool[frozenset((u, v))].pop(0)
        forms.append(spec.edge_forms[idx])
    return AssociatedSheafSpec(g, spec.ambient_dim, spec.vertex_subspaces, tuple(forms))


def build_independent_sheaf(g: Multigraph, n: int, rng_seed=None, budget: int = 200_000) -> IndependentSheafResult:
    """A point of Z_{1,n}(g) with h1 = 0, built by induction from K_2^{n-2}.

    g must be (n-1, n)-sparse.  It is completed to a tight graph, decomposed
    into k-extensions, and the moves are replayed with extend_associated.
    When decomposition runs out of budget, random sampling is used instead.
    """
    if n < 3:
        raise PreconditionError("need n >= 3")
    res = is_sparse(g, n - 1, n)
    if not res.sparse:
        return IndependentSheafResult(None, "not-sparse", res.violating_set)
    rng = make_rng(rng_seed)
    if g.n_vertices < 2:
        spec = sample_associated(g, 1, n, rng)
        return IndependentSheafResult(spec, "sampling")
    tight = augment_to_tight(g, n, rng)
    moves = decompose_tight(tight, n, budget=budget)
    if moves is not None:
        created = {m.new_vertex for m in moves}
        base = tuple(v for v in tight.vertices if v not in created)
        cur = None
        for _ in range(20):
            cur = base_case_spec(n, base, rng)
            if cohomology_associated(cur).h1 == 0:
                break
        else:
            raise ConsistencyError("base case sheaf is not independent")
        for m in moves:
            try:
                cur = extend_associated(cur, m, rng_seed=rng)
            except PreconditionError:
                # inherited forms can sit in special position (e.g. the two
                # copies made by an earlier move); move to a generic fibre point
                fixed = resample_forms(cur, rng_seed=rng)
                if fixed is None:
                    raise
                cur = extend_associated(fixed, m, rng_seed=rng)
        spec = _restrict_to_edges(cur, g)
        h1 = cohomology_associated(spec).h1
        if h1 != 0:
            raise ConsistencyError(f"induction produced h1 = {h1}")
        return IndependentSheafResult(spec, "induction")
    log.info("decomposition out of budget; sampling directly")
    for _ in range(MAX_RETRIES):
        spec = sample_associated(g, 1, n, rng)
        if cohomology_associated(spec).h1 == 0:
            return IndependentSheafResult(spec, "sampling")
    raise ConsistencyError("no independent sample found for a sparse graph")
