import json

import pytest
from hypothesis import given, settings, strategies as st

from sheafrig.errors import PreconditionError
from sheafrig.graphs import Hypergraph, Multigraph, complete_graph
from sheafrig.motion import (
    MotionSheafSpec,
    analyze,
    build_motion_sheaf,
    check_dual_paths,
    check_main_theorem,
    maxwell_defect,
    motion_cohomology,
    necessary_condition,
    projection_trick_h0,
    sample_generic_spec,
    trivial_dim,
)
from sheafrig.oracles import brute_h0
from sheafrig.subspaces import Subspace, sample_subspace

from conftest import multigraphs, seeds, subspaces, triangle


def lines(g, rows, n=3):
    return MotionSheafSpec(g.as_hypergraph(), n, {v: Subspace.span([r], n) for v, r in zip(g.vertices, rows)})


EQUAL = ([1, 0, 0], [1, 0, 0], [1, 0, 0])
SPANNING = ([1, 0, 0], [0, 1, 0], [0, 0, 1])
COPLANAR = ([1, 0, 0], [0, 1, 0], [1, 1, 0])


@pytest.mark.parametrize("rows,h0", [(EQUAL, 2), (SPANNING, 3), (COPLANAR, 4)])
def test_k3_triple(rows, h0):
    spec = lines(triangle(), rows)
    assert motion_cohomology(spec).h0 == h0
    assert projection_trick_h0(spec) == h0


def test_k3_equal_lines_verdict():
    v = analyze(lines(triangle(), EQUAL))
    assert (v.h0, v.h1, v.trivial_dim) == (2, 2, 2)
    assert v.rigid and not v.independent


def test_k3_distinct_lines_defect():
    assert maxwell_defect(lines(triangle(), SPANNING)) == 3


def test_no_edges_defect():
    g = Hypergraph.from_edges([], range(4))
    spec = sample_generic_spec(g, 1, 3, 0)
    assert maxwell_defect(spec) == 4 * 2
    assert motion_cohomology(spec).h0 == 8


def test_single_edge_minimally_rigid():
    spec = sample_generic_spec(Multigraph.from_edges([(0, 1)]), 1, 3, 5)
    v = analyze(spec)
    assert (v.h0, v.h1) == (3, 0) and v.minimally_rigid


def test_disconnected_not_rigid():
    g = Multigraph.from_edges([(0, 1), (2, 3)])
    v = analyze(sample_generic_spec(g, 1, 3, 1))
    assert not v.rigid and v.note


def test_stalk_dims_of_motion_sheaf():
    spec = lines(triangle(), SPANNING)
    f = build_motion_sheaf(spec)
    # vertex nodes V/S(v), edge nodes V/S(e) = V, incidences V/S(v)
    assert sorted(f.vertex_dims.values()) == [2, 2, 2, 3, 3, 3]
    assert f.edge_dims == (2,) * 6


def test_spec_validation():
    with pytest.raises(PreconditionError):
        MotionSheafSpec(triangle().as_hypergraph(), 3, {0: Subspace.zero(3)})
    with pytest.raises(PreconditionError):
        MotionSheafSpec(triangle().as_hypergraph(), 3, {v: Subspace.zero(2) for v in range(3)})


def test_spec_json_round_trip():
    spec = sample_generic_spec(complete_graph(4), 2, 5, 9)
    back = MotionSheafSpec.from_json(json.loads(json.dumps(spec.to_json())))
    assert all(back.S(v) == spec.S(v) for v in spec.base.vertices)
    h = Hypergraph.from_edges([(0, 1, 2), (1, 3)])
    spec = sample_generic_spec(h, 1, 4, 2)
    back = MotionSheafSpec.from_json(json.loads(json.dumps(spec.to_json())))
    assert back.base.hyperedges == h.hyperedges


def test_sampling_deterministic():
    a = sample_generic_spec(triangle(), 1, 3, 11)
    b = sample_generic_spec(triangle(), 1, 3, 11)
    assert all(a.S(v) == b.S(v) for v in range(3))


def test_generic_k3_has_h0_three():
    assert all(motion_cohomology(sample_generic_spec(triangle(), 1, 3, s)).h0 == 3 for s in range(200))


@pytest.mark.parametrize("g,n,sparse", [
    (triangle(), 3, True),
    (complete_graph(4), 3, False),
    (Multigraph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)]), 3, True),
    (complete_graph(5), 4, False),
    (Multigraph.from_edges([(0, 1), (1, 2)]), 4, True),
    (triangle(), 4, False),
])
def test_main_theorem_examples(g, n, sparse):
    res = check_main_theorem(g, n, trials=3, rng_seed=7)
    assert res.sparse == sparse and res.agrees


def test_main_theorem_needs_n_three():
    with pytest.raises(PreconditionError):
        check_main_theorem(triangle(), 2)


def test_necessary_condition_k4():
    spec = sample_generic_spec(complete_graph(4), 1, 3, 0)
    res = necessary_condition(spec)
    assert res.mode == "sparsity" and not res.holds
    assert set(res.witness[0]) == {0, 1, 2, 3}
    assert necessary_condition(spec, "exact").holds is False


def test_necessary_condition_sparsity_mode_guard():
    spec = lines(triangle(), EQUAL)
    with pytest.raises(PreconditionError):
        necessary_condition(spec, "sparsity")
    with pytest.raises(PreconditionError):
        necessary_condition(spec, "bogus")


def test_minimally_rigid_count():
    laman = Multigraph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    spec = sample_generic_spec(laman, 1, 3, 4)
    v = analyze(spec)
    assert v.minimally_rigid
    n, s, r = 3, 1, 2
    assert ((r - 1) * n - r * s) * laman.n_edges == (n - s) * laman.n_vertices - n


# ---- properties


@st.composite
def specs(draw, max_vertices=4, n_max=4):
    g = draw(multigraphs(max_vertices=max_vertices, max_mult=2))
    n = draw(st.integers(2, n_max))
    subs = {v: draw(subspaces(n, max_dim=n - 1)) for v in g.vertices}
    return MotionSheafSpec(g.as_hypergraph(), n, subs)


@given(specs())
def test_maxwell_identity(spec):
    rep = motion_cohomology(spec)
    assert rep.h0 - rep.h1 == maxwell_defect(spec)


@given(specs())
def test_dual_paths_agree(spec):
    check_dual_paths(spec)


@settings(max_examples=25)
@given(specs(max_vertices=3, n_max=3))
def test_brute_h0_agrees(spec):
    assert brute_h0(spec) == motion_cohomology(spec).h0


@given(specs())
def test_h0_at_least_trivial(spec):
    assert motion_cohomology(spec).h0 >= trivial_dim(spec)


@given(multigraphs(max_vertices=5, max_mult=2, min_vertices=2), st.integers(3, 5), seeds, st.data())
def test_independence_is_monotone(g, n, seed, data):
    spec = sample_generic_spec(g, 1, n, seed)
    if motion_cohomology(spec).h1 != 0 or g.n_edges == 0:
        return
    es = data.draw(st.sets(st.integers(0, g.n_edges - 1)))
    vs = {v for e in es for v in g.edges[e]} or {g.vertices[0]}
    assert motion_cohomology(spec.restricted(vs, sorted(es))).h1 == 0


@given(multigraphs(max_vertices=5, max_mult=2, min_vertices=2), st.integers(3, 5), seeds)
def test_independent_implies_necessary_condition(g, n, seed):
    spec = sample_generic_spec(g, 1, n, seed)
    if motion_cohomology(spec).h1 == 0:
        assert necessary_condition(spec).holds


@settings(max_examples=20)
@given(multigraphs(max_vertices=5, max_mult=2, min_vertices=2), seeds)
def test_necessary_condition_modes_agree(g, seed):
    spec = sample_generic_spec(g, 1, 4, seed)
    assert necessary_condition(spec, "sparsity").holds == necessary_condition(spec, "exact").holds


@settings(max_examples=15)
@given(multigraphs(max_vertices=4, max_mult=2), st.sampled_from([(1, 3), (1, 4), (2, 5)]), seeds)
def test_genericity_stable_across_seeds(g, sn, seed):
    s, n = sn
    reps = {tuple(vars(motion_cohomology(sample_generic_spec(g, s, n, seed + i))).values())[:2]
            for i in range(5)}
    assert len(reps) == 1
