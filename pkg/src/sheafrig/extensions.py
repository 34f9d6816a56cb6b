"""Certified k-extensions of motion sheaves on graphs."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConsistencyError, PreconditionError
from .graphs import ExtensionMove, apply_extension, new_edge_list
from .motion import MotionSheafSpec, motion_cohomology
from .subspaces import Subspace, intersect, subspace_sum


@dataclass(frozen=True)
class MotionExtensionCertificate:
    move: ExtensionMove
    new_subspace: Subspace
    pair_conditions: tuple  # per deleted edge: S*+S(u) = S*+S(u') = S(u)+S(u')
    attach_conditions: tuple  # per attach vertex v_j
    deleted_conditions: tuple  # per deleted edge, endpoint u_j

    @property
    def valid(self) -> bool:
        return all(self.pair_conditions) and all(self.attach_conditions) and all(self.deleted_conditions)

    def to_json(self) -> dict:
        return {
            "move": self.move.to_json(),
            "new_subspace": self.new_subspace.to_json(),
            "pair_conditions": list(self.pair_conditions),
            "attach_conditions": list(self.attach_conditions),
            "deleted_conditions": list(self.deleted_conditions),
            "valid": self.valid,
        }


def check_motion_extension(spec: MotionSheafSpec, move: ExtensionMove,
                           new_subspace: Subspace) -> MotionExtensionCertificate:
    """Evaluate the three families of subspace conditions exactly.

    Writing S* for the new subspace, A_i = S(v_i) + S* for attach vertices
    and B_i = S(u_i) + S(u_i') for deleted edges:

    * S* + S(u_i) = S* + S(u_i') = S(u_i) + S(u_i') for every deleted edge;
    * (cap_{i != j} A_i  cap  cap_i B_i) + S(v_j) = V for every attach vertex;
    * (cap_i A_i  cap  cap_{i != j} B_i) + S(u_j) = V for every deleted edge.

    An empty intersection is the whole space.
    """
    if not spec.base.is_graph():
        raise PreconditionError("motion extensions are defined on graphs")
    n = spec.ambient_dim
    if new_subspace.ambient_dim != n:
        raise PreconditionError("new subspace lives in the wrong dimension")
    g = spec.base.as_multigraph()
    fs = new_edge_list(g, move)
    ends = [u for u, _ in fs]
    if len(set(ends)) != len(ends):
        raise PreconditionError("the move creates parallel edges")
    star = new_subspace
    pairs = [g.edges[e] for e in move.deleted_edges]
    attach = list(move.attach_vertices)
    A = [spec.S(v) + star for v in attach]
    B = [spec.S(u) + spec.S(w) for u, w in pairs]
    full = Subspace.full(n)

    pair_ok = []
    for (u, w), b in zip(pairs, B):
        pair_ok.append(star + spec.S(u) == b and star + spec.S(w) == b)
    attach_ok = []
    for j, v in enumerate(attach):
        core = intersect([a for i, a in enumerate(A) if i != j] + B, n)
        attach_ok.append(core + spec.S(v) == full)
    deleted_ok = []
    for j, (u, _) in enumerate(pairs):
        core = intersect(A + [b for i, b in enumerate(B) if i != j], n)
        deleted_ok.append(core + spec.S(u) == full)
    return MotionExtensionCertificate(move, star, tuple(pair_ok), tuple(attach_ok), tuple(deleted_ok))


def extend_motion(spec: MotionSheafSpec, cert: MotionExtensionCertificate,
                  check_input: bool = True) -> MotionSheafSpec:
    """Apply a validated certificate and re-verify independence of the result."""
    if not cert.valid:
        raise PreconditionError("certificate has a failing condition")
    if check_input:
        h1 = motion_cohomology(spec).h1
        if h1 != 0:
            raise PreconditionError(f"input sheaf is not independent (h1 = {h1})")
    g2 = apply_extension(spec.base.as_multigraph(), cert.move)
    subs = dict(spec.vertex_subspaces)
    subs[cert.move.new_vertex] = cert.new_subspace
    out = MotionSheafSpec(g2.as_hypergraph(), spec.ambient_dim, subs)
    h1 = motion_cohomology(out).h1
    if h1 != 0:
        raise ConsistencyError(f"certified extension produced h1 = {h1}")
    return out
