"""Brute-force baselines.  Nothing here touches the flint-based core.

Size caps come from the SHEAFRIG_BUDGET environment variable, written as
comma separated ``key=value`` pairs, e.g.
``SHEAFRIG_BUDGET="sparsity_vertices=10,h0_unknowns=400"``.  A bare integer
sets ``h0_unknowns``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, PreconditionError

DEFAULT_BUDGET = {"sparsity_vertices": 12, "h0_unknowns": 200}


def budget() -> dict:
    out = dict(DEFAULT_BUDGET)
    raw = os.environ.get("SHEAFRIG_BUDGET", "").strip()
    if not raw:
        return out
    if raw.isdigit():
        out["h0_unknowns"] = int(raw)
        return out
    for part in raw.split(","):
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in out or not val.strip().isdigit():
            raise PreconditionError(f"bad SHEAFRIG_BUDGET entry {part!r}")
        out[key] = int(val)
    return out


def fraction_rank(rows) -> int:
    """Plain Gaussian elimination over Fractions."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][c]
        for i in range(rank + 1, len(m)):
            f = m[i][c]
            if f:
                f /= p
                row_i, row_r = m[i], m[rank]
                for j in range(c, ncols):
                    row_i[j] -= f * row_r[j]
        rank += 1
        if rank == len(m):
            break
    return rank


def _frac(x) -> Fraction:
    if hasattr(x, "p") and hasattr(x, "q"):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


@dataclass(frozen=True)
class RigidityMatrix:
    rows: tuple
    d: int
    n_vertices: int
    rank: int

    @property
    def motions(self) -> int:
        return self.d * self.n_vertices - self.rank


def rigidity_matrix(fw, d: int | None = None) -> RigidityMatrix:
    """Classical bar-joint rigidity matrix: row uv has p(u)-p(v) at u and p(v)-p(u) at v."""
    d = fw.dim if d is None else d
    g = fw.graph
    verts = list(g.vertices)
    col = {v: i * d for i, v in enumerate(verts)}
    pos = {v: [_frac(x) for x in fw.positions[v]] for v in verts}
    edges = list(g.edges) if hasattr(g, "edges") else [tuple(e) for e in g.hyperedges]
    rows = []
    for u, v in edges:
        diff = [a - b for a, b in zip(pos[u], pos[v])]
        if not any(diff):
            raise PreconditionError(f"adjacent vertices {u!r}, {v!r} coincide")
        r = [Fraction(0)] * (d * len(verts))
        for k in range(d):
            r[col[u] + k] = diff[k]
            r[col[v] + k] = -diff[k]
        rows.append(r)
    return RigidityMatrix(tuple(tuple(r) for r in rows), d, len(verts), fraction_rank(rows))


@dataclass(frozen=True)
class BruteSparsity:
    sparse: bool
    tight: bool
    witness: frozenset | None = None


def brute_sparsity(g, d: int, l: int) -> BruteSparsity:
    """Subset enumeration straight from the definition (subsets of size >= r)."""
    verts = list(g.vertices)
    cap = budget()["sparsity_vertices"]
    if len(verts) > cap:
        raise BudgetExceeded(f"{len(verts)} vertices exceeds the sparsity budget of {cap}")
    if hasattr(g, "hyperedges"):
        edges = [frozenset(e) for e in g.hyperedges]
    else:
        edges = [frozenset(e) for e in g.edges]
    sizes = {len(e) for e in edges}
    r = sizes.pop() if len(sizes) == 1 else 2
    for size in range(r, len(verts) + 1):
        for sub in itertools.combinations(verts, size):
            ss = set(sub)
            if sum(e <= ss for e in edges) > d * size - l:
                return BruteSparsity(False, False, frozenset(sub))
    return BruteSparsity(True, len(edges) == d * len(verts) - l)


def _basis_rows(subspace) -> list[list[Fraction]]:
    b = subspace.basis
    return [[_frac(b[i, j]) for j in range(b.ncols())] for i in range(b.nrows())]


def _intersection_dim(bases: list[list[list[Fraction]]], n: int) -> int:
    """dim of the common span: unknowns x and coefficient vectors a_u with x = B_u^T a_u."""
    sizes = [len(b) for b in bases]
    ncols = n + sum(sizes)
    rows = []
    off = n
    for b in bases:
        for i in range(n):
            r = [Fraction(0)] * ncols
            r[i] = Fraction(1)
            for k, vec in enumerate(b):
                r[off + k] = -vec[i]
            rows.append(r)
        off += len(b)
    return ncols - fraction_rank(rows)


def brute_h0(spec) -> int:
    """h0 of V/S from one linear system over representatives.

    Unknowns: w_v and w_e in Q^n for every vertex and edge, and c_{v,e} with
    w_e - w_v = B_v^T c_{v,e} at every incidence.  The map to sections is
    onto with fibre of dimension sum dim S(v) + sum dim S(e).
    """
    h = spec.base
    n = spec.ambient_dim
    verts = list(h.vertices)
    edges = [h.ordered_edge(j) for j in range(h.n_edges)]
    bases = {v: _basis_rows(spec.vertex_subspaces[v]) for v in verts}
    inc = [(v, j) for j, e in enumerate(edges) for v in e]
    unknowns = n * (len(verts) + len(edges)) + sum(len(bases[v]) for v, _ in inc)
    cap = budget()["h0_unknowns"]
    if unknowns > cap:
        raise BudgetExceeded(f"{unknowns} unknowns exceeds the h0 budget of {cap}")
    vcol = {v: i * n for i, v in enumerate(verts)}
    ecol = {j: n * len(verts) + j * n for j in range(len(edges))}
    off = n * (len(verts) + len(edges))
    rows = []
    for v, j in inc:
        b = bases[v]
        for i in range(n):
            r = [Fraction(0)] * unknowns
            r[ecol[j] + i] += 1
            r[vcol[v] + i] -= 1
            for k, vec in enumerate(b):
                r[off + k] = -vec[i]
            rows.append(r)
        off += len(b)
    nullity = unknowns - fraction_rank(rows)
    fibre = sum(len(bases[v]) for v in verts)
    fibre += sum(_intersection_dim([bases[v] for v in e], n) for e in edges)
    return nullity - fibre

