"""Concrete Lie algebra models: the Euclidean algebra e(d) and dilations plus translations.

Elements of e(d) are coordinatized as (rotation part, translation t).  The
rotation coordinates read entries of the skew matrix Omega:

* d = 2: omega = Omega[1,0], so stab(x, y) is spanned by (1, y, -x);
* d = 3: (Omega[2,1], Omega[0,2], Omega[1,0]), i.e. Omega v = omega x v;
* d >= 4: Omega[i,j] for i < j.

The parallel-redrawing algebra uses coordinates (l, t_1..t_n) in the basis
L, T_1..T_n with [L, T_i] = T_i and [T_i, T_j] = 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

import flint

from . import linalg
from .errors import ConsistencyError, PreconditionError
from .graphs import Hypergraph, Multigraph
from .linalg import Matrix
from .motion import MotionSheafSpec
from .subspaces import SAMPLE_BOX, Subspace, contains, intersect, make_rng, subspace_sum


def _vec(x) -> list:
    return [linalg._q(Fraction(v) if isinstance(v, float) else v) for v in x]


def _rotation_positions(d: int) -> list[tuple[int, int]]:
    if d == 2:
        return [(1, 0)]
    if d == 3:
        return [(2, 1), (0, 2), (1, 0)]
    return [(i, j) for i in range(d) for j in range(i + 1, d)]


@dataclass(frozen=True)
class EuclideanModel:
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise PreconditionError("need d >= 1")

    @property
    def algebra_dim(self) -> int:
        return comb(self.d + 1, 2)

    @property
    def rotation_dim(self) -> int:
        return comb(self.d, 2)

    def skew(self, k: int) -> Matrix:
        """Skew matrix whose k-th rotation coordinate is 1."""
        i, j = _rotation_positions(self.d)[k]
        m = flint.fmpq_mat(self.d, self.d)
        m[i, j] = 1
        m[j, i] = -1
        return m

    def to_matrix(self, x: Sequence) -> Matrix:
        """(d+1) x (d+1) homogeneous matrix [[Omega, t], [0, 0]]."""
        d, r = self.d, self.rotation_dim
        x = _vec(x)
        m = flint.fmpq_mat(d + 1, d + 1)
        for k, (i, j) in enumerate(_rotation_positions(d)):
            m[i, j] += x[k]
            m[j, i] -= x[k]
        for i in range(d):
            m[i, d] = x[r + i]
        return m

    def from_matrix(self, m: Matrix) -> list:
        d = self.d
        out = [m[i, j] for i, j in _rotation_positions(d)]
        out += [m[i, d] for i in range(d)]
        return out

    def bracket(self, x, y) -> list:
        a, b = self.to_matrix(x), self.to_matrix(y)
        return self.from_matrix(a * b - b * a)

    def group_element(self, rotation: Matrix, translation: Sequence) -> Matrix:
        d = self.d
        g = flint.fmpq_mat(d + 1, d + 1)
        for i in range(d):
            for j in range(d):
                g[i, j] = rotation[i, j]
            g[i, d] = _vec(translation)[i]
        g[d, d] = 1
        return g

    def random_group_element(self, rng: random.Random, box: int = 50) -> Matrix:
        """Rational rotation by the Cayley transform of a random skew matrix, then a random translation."""
        d = self.d
        a = flint.fmpq_mat(d, d)
        for i in range(d):
            for j in range(i + 1, d):
                x = flint.fmpq(rng.randint(-box, box), rng.randint(1, box))
                a[i, j] = x
                a[j, i] = -x
        eye = linalg.identity(d)
        rot = (eye - a).inv() * (eye + a)
        t = [flint.fmpq(rng.randint(-SAMPLE_BOX, SAMPLE_BOX), rng.randint(1, box)) for _ in range(d)]
        return self.group_element(rot, t)

    def adjoint(self, g: Matrix, x) -> list:
        return self.from_matrix(g * self.to_matrix(x) * g.inv())

    def base_algebra(self) -> Subspace:
        """Stabilizer of the origin, the rotation algebra o(d)."""
        return point_stabilizer_algebra(self, [0] * self.d)


@dataclass(frozen=True)
class ParallelModel:
    """Dilations and translations of Q^n; coordinates (l, t_1..t_n)."""

    n: int

    @property
    def algebra_dim(self) -> int:
        return self.n + 1

    def to_matrix(self, x) -> Matrix:
        n = self.n
        x = _vec(x)
        m = flint.fmpq_mat(n + 1, n + 1)
        for i in range(n):
            m[i, i] = x[0]
            m[i, n] = x[1 + i]
        return m

    def from_matrix(self, m: Matrix) -> list:
        return [m[0, 0]] + [m[i, self.n] for i in range(self.n)]

    def bracket(self, x, y) -> list:
        x, y = _vec(x), _vec(y)
        # [l L + t.T, l' L + t'.T] = l t' - l' t  (translation part only)
        return [flint.fmpq(0)] + [x[0] * y[1 + i] - y[0] * x[1 + i] for i in range(self.n)]

    def random_group_element(self, rng: random.Random, box: int = 50) -> Matrix:
        n = self.n
        lam = flint.fmpq(rng.randint(1, box), rng.randint(1, box)) * rng.choice((1, -1))
        g = flint.fmpq_mat(n + 1, n + 1)
        for i in range(n):
            g[i, i] = lam
            g[i, n] = flint.fmpq(rng.randint(-SAMPLE_BOX, SAMPLE_BOX), rng.randint(1, box))
        g[n, n] = 1
        return g

    def adjoint(self, g: Matrix, x) -> list:
        return self.from_matrix(g * self.to_matrix(x) * g.inv())

    def base_algebra(self) -> Subspace:
        """Stabilizer of the origin: the dilation generator L."""
        return affine_stabilizer_algebra(self, AffineSubspace([0] * self.n))


@dataclass(frozen=True)
class AffineSubspace:
    point: tuple
    directions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "point", tuple(_vec(self.point)))
        object.__setattr__(self, "directions", tuple(tuple(_vec(r)) for r in self.directions))
        n = len(self.point)
        if any(len(r) != n for r in self.directions):
            raise PreconditionError("direction vectors must match the point's dimension")
        if self.directions and linalg.rank(linalg.matrix(self.directions)) != len(self.directions):
            raise PreconditionError("direction vectors must be independent")

    @property
    def dim(self) -> int:
        return len(self.directions)

    def to_json(self) -> dict:
        s = lambda x: str(Fraction(int(x.p), int(x.q)))
        return {"point": [s(x) for x in self.point], "directions": [[s(x) for x in r] for r in self.directions]}


@dataclass(frozen=True, eq=False)
class Framework:
    """A graph with a position per vertex: a point (bar-joint) or an affine subspace."""

    graph: Multigraph | Hypergraph
    dim: int
    positions: Mapping

    def __post_init__(self):
        object.__setattr__(self, "positions", dict(self.positions))
        if set(self.positions) != set(self.graph.vertices):
            raise PreconditionError("one position per vertex required")
        for v, p in self.positions.items():
            width = len(p.point) if isinstance(p, AffineSubspace) else len(p)
            if width != self.dim:
                raise PreconditionError(f"position of {v!r} is not in dimension {self.dim}")
        if not isinstance(next(iter(self.positions.values()), None), AffineSubspace):
            conv = {v: tuple(_vec(p)) for v, p in self.positions.items()}
            object.__setattr__(self, "positions", conv)

    def point(self, v) -> tuple:
        return self.positions[v]

    def to_json(self) -> dict:
        s = lambda x: str(Fraction(int(x.p), int(x.q)))
        pos = {}
        for v, p in self.positions.items():
            pos[str(v)] = p.to_json() if isinstance(p, AffineSubspace) else [s(x) for x in p]
        return {"graph": self.graph.to_json(), "dim": self.dim, "positions": pos}

    @classmethod
    def from_json(cls, obj: dict) -> "Framework":
        from .graphs import graph_from_json

        g = graph_from_json(obj["graph"])
        raw = obj["positions"]
        pos = {}
        for v in g.vertices:
            p = raw.get(str(v), raw.get(v))
            if p is None:
                raise PreconditionError(f"no position for vertex {v!r}")
            pos[v] = AffineSubspace(p["point"], p.get("directions", ())) if isinstance(p, dict) else p
        return cls(g, obj["dim"], pos)


def _edges_of(g) -> list[tuple]:
    if isinstance(g, Multigraph):
        return list(g.edges)
    return [g.ordered_edge(j) for j in range(g.n_edges)]


# ---------------------------------------------------------------- Euclidean


def point_stabilizer_algebra(model: EuclideanModel, q) -> Subspace:
    """{(Omega, -Omega q)}: one basis vector per rotation coordinate."""
    q = _vec(q)
    d = model.d
    if len(q) != d:
        raise PreconditionError(f"point must have {d} coordinates")
    qcol = flint.fmpq_mat(d, 1, q)
    rows = []
    for k in range(model.rotation_dim):
        t = model.skew(k) * qcol
        row = [0] * model.rotation_dim
        row[k] = 1
        rows.append(row + [-t[i, 0] for i in range(d)])
    if not rows:
        return Subspace.zero(model.algebra_dim)
    return Subspace.span(rows, model.algebra_dim)


def _cross(a, b) -> list:
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def edge_stabilizer_algebra(model: EuclideanModel, q1, q2) -> Subspace:
    q1, q2 = _vec(q1), _vec(q2)
    if q1 == q2:
        raise PreconditionError("edge endpoints coincide")
    out = intersect([point_stabilizer_algebra(model, q1), point_stabilizer_algebra(model, q2)])
    if model.d == 3:
        diff = [a - b for a, b in zip(q1, q2)]
        closed = Subspace.span([diff + _cross(q2, q1)], 6)
        if closed != out:
            raise ConsistencyError("e(3) edge stabilizer disagrees with its closed form")
    return out


def e3_edge_closed_form(q1, q2) -> Subspace:
    q1, q2 = _vec(q1), _vec(q2)
    return Subspace.span([[a - b for a, b in zip(q1, q2)] + _cross(q2, q1)], 6)


def bar_joint_spec(model: EuclideanModel, fw: Framework) -> MotionSheafSpec:
    if fw.dim != model.d:
        raise PreconditionError("framework and model dimensions differ")
    for u, v in _edges_of(fw.graph):
        if fw.point(u) == fw.point(v):
            raise PreconditionError(f"adjacent vertices {u!r}, {v!r} share a position")
    h = fw.graph.as_hypergraph() if isinstance(fw.graph, Multigraph) else fw.graph
    subs = {v: point_stabilizer_algebra(model, fw.point(v)) for v in h.vertices}
    return MotionSheafSpec(h, model.algebra_dim, subs)


def collinear(model: EuclideanModel, x, y, z) -> bool:
    """h_x inside h_y + h_z, checked against the rank of [y - x; z - x]."""
    x, y, z = _vec(x), _vec(y), _vec(z)
    if x == y or y == z or x == z:
        raise PreconditionError("points must be pairwise distinct")
    hx, hy, hz = (point_stabilizer_algebra(model, p) for p in (x, y, z))
    algebraic = contains(subspace_sum(hy, hz), hx)
    geometric = linalg.rank(linalg.matrix([[a - b for a, b in zip(y, x)],
                                           [a - b for a, b in zip(z, x)]])) <= 1
    if algebraic != geometric:
        raise ConsistencyError("algebraic and geometric collinearity disagree")
    return algebraic


def sample_framework(g, d: int, rng_seed=None, box: int = SAMPLE_BOX) -> Framework:
    rng = make_rng(rng_seed)
    pos = {v: [rng.randint(-box, box) for _ in range(d)] for v in g.vertices}
    return Framework(g, d, pos)


def point_on_line(p, q, rng_seed=None) -> list:
    """Random point on the line through p and q, distinct from both."""
    rng = make_rng(rng_seed)
    p, q = _vec(p), _vec(q)
    while True:
        t = flint.fmpq(rng.randint(-1000, 1000), rng.randint(1, 1000))
        if t not in (0, 1):
            return [a + t * (b - a) for a, b in zip(p, q)]


# ---------------------------------------------------------------- parallel redrawings


def affine_stabilizer_algebra(model: ParallelModel, a: AffineSubspace) -> Subspace:
    """span{L - sum p_i T_i} plus the translations along the directions."""
    if len(a.point) != model.n:
        raise PreconditionError(f"affine subspace must live in dimension {model.n}")
    rows = [[1] + [-x for x in a.point]]
    rows += [[0] + list(r) for r in a.directions]
    return Subspace.span(rows, model.n + 1)


def is_subalgebra(model, s: Subspace) -> bool:
    basis = linalg.rows_of(s.basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if not s.contains_vector(model.bracket(basis[i], basis[j])):
                return False
    return True


def affine_join(a: AffineSubspace, b: AffineSubspace) -> AffineSubspace:
    """Smallest affine subspace containing both."""
    n = len(a.point)
    gens = list(a.directions) + list(b.directions) + [[y - x for x, y in zip(a.point, b.point)]]
    dirs = Subspace.span(gens, n) if gens else Subspace.zero(n)
    return AffineSubspace(a.point, tuple(tuple(r) for r in linalg.rows_of(dirs.basis)))


def parallel_spec(model: ParallelModel, arrangement: Framework) -> MotionSheafSpec:
    h = arrangement.graph
    h = h.as_hypergraph() if isinstance(h, Multigraph) else h
    subs = {}
    dims = set()
    for v in h.vertices:
        p = arrangement.positions[v]
        a = p if isinstance(p, AffineSubspace) else AffineSubspace(p)
        dims.add(a.dim)
        subs[v] = affine_stabilizer_algebra(model, a)
    if len(dims) > 1:
        raise PreconditionError("arrangement subspaces must share one dimension")
    return MotionSheafSpec(h, model.n + 1, subs)


# ---------------------------------------------------------------- orbit sampling


def conjugate(model, g: Matrix, s: Subspace) -> Subspace:
    rows = [model.adjoint(g, r) for r in linalg.rows_of(s.basis)]
    if not rows:
        return s
    return Subspace.span(rows, s.ambient_dim)


def sample_orbit_spec(model, g, rng_seed=None, base_algebra: Subspace | None = None) -> MotionSheafSpec:
    """Vertex subspaces Ad(g_v) h for independent random group elements g_v.

    ``model`` needs ``random_group_element(rng)``, ``adjoint(g, x)`` and,
    unless ``base_algebra`` is given, ``base_algebra()``.
    """
    rng = make_rng(rng_seed)
    h0 = base_algebra if base_algebra is not None else model.base_algebra()
    hg = g.as_hypergraph() if isinstance(g, Multigraph) else g
    subs = {v: conjugate(model, model.random_group_element(rng), h0) for v in hg.vertices}
    return MotionSheafSpec(hg, h0.ambient_dim, subs)
