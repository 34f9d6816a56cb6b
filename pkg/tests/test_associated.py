import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from sheafrig.associated import (
    AssociatedSheafSpec,
    associated_sheaf,
    base_case_spec,
    build_independent_sheaf,
    cohomology_associated,
    collapse_to_graph_sheaf,
    expand_to_multigraph,
    extend_associated,
    find_independent_forms,
    r_matrix,
    r_matrix_h0,
    resample_forms,
    sample_associated,
)
from sheafrig.errors import PreconditionError
from sheafrig.graphs import ExtensionMove, Multigraph, complete_graph, generate_tight, is_sparse, parallel_pair
from sheafrig.motion import motion_cohomology, sample_generic_spec
from sheafrig.sheaf import cohomology
from sheafrig.subspaces import LinearForm, Subspace, forms_independent, sample_form_annihilating

from conftest import multigraphs, seeds, simple_graphs, triangle


def test_membership_checks():
    g = Multigraph.from_edges([(0, 1)])
    subs = {0: Subspace.span([[1, 0, 0]]), 1: Subspace.span([[0, 1, 0]])}
    AssociatedSheafSpec(g, 3, subs, (LinearForm.of([0, 0, 1]),))
    with pytest.raises(PreconditionError):
        AssociatedSheafSpec(g, 3, subs, (LinearForm.of([1, 0, 1]),))
    same = {0: Subspace.span([[1, 0, 0]]), 1: Subspace.span([[1, 0, 0]])}
    with pytest.raises(PreconditionError):
        AssociatedSheafSpec(g, 3, same, (LinearForm.of([0, 0, 1]),))
    with pytest.raises(PreconditionError):
        AssociatedSheafSpec(g, 3, subs, ())


def test_json_round_trip():
    spec = sample_associated(triangle(), 1, 4, 3)
    back = AssociatedSheafSpec.from_json(json.loads(json.dumps(spec.to_json())))
    assert back.edge_forms == spec.edge_forms
    assert all(back.S(v) == spec.S(v) for v in range(3))


def test_r_matrix_shape():
    spec = sample_associated(triangle(), 1, 4, 1)
    r = r_matrix(spec)
    assert (r.nrows(), r.ncols()) == (3, 12)


def test_base_case_is_independent():
    for seed in range(5):
        spec = base_case_spec(5, rng_seed=seed)
        rep = cohomology_associated(spec)
        assert spec.base.n_edges == 3 and rep.h1 == 0


def test_expand_requires_small_s():
    spec = sample_generic_spec(triangle(), 2, 4, 0)
    with pytest.raises(PreconditionError):
        expand_to_multigraph(spec)


def test_extension_dimension_checked():
    spec = base_case_spec(4, rng_seed=0)
    with pytest.raises(PreconditionError):
        extend_associated(spec, ExtensionMove(2, 0, (), 2, (0, 1)), rng_seed=0)


def test_extension_fresh_form_count_checked():
    spec = base_case_spec(4, rng_seed=0)
    move = ExtensionMove(3, 0, (), 2, (0, 1, 1))
    with pytest.raises(PreconditionError):
        extend_associated(spec, move, new_forms=[sample_form_annihilating(spec.S(0), 1)])


def test_extension_edge_layout():
    spec = base_case_spec(4, rng_seed=2)
    move = ExtensionMove(3, 1, (0,), 2, (0, 1))
    out = extend_associated(spec, move, rng_seed=3)
    # the inherited form sits on the two new edges that replace edge 0
    assert out.edge_forms[1] == out.edge_forms[2] == spec.edge_forms[0]
    assert out.base.edges[1:3] == ((0, 2), (1, 2))
    assert out.S(2).dim == 1
    assert cohomology_associated(out).h1 == 0


def test_build_independent_rejects_non_sparse():
    res = build_independent_sheaf(complete_graph(4), 3, 0)
    assert res.spec is None and res.method == "not-sparse"
    assert res.witness == frozenset(range(4))


def test_build_independent_laman():
    g = Multigraph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    res = build_independent_sheaf(g, 3, 1)
    assert res.method == "induction" and cohomology_associated(res.spec).h1 == 0


def test_find_independent_forms_limits():
    spec = sample_associated(parallel_pair(4), 1, 4, 0)
    with pytest.raises(PreconditionError):
        find_independent_forms(spec, [0, 1, 2, 3])  # more than n - s = 3
    with pytest.raises(PreconditionError):
        find_independent_forms(spec, [0, 1, 2])  # three at one vertex, n - 2s = 2


def test_find_independent_forms_on_parallel_pair():
    spec = sample_associated(parallel_pair(2), 1, 4, 0)
    # force the two copies to carry the same form
    spec = spec.with_forms({1: spec.edge_forms[0]})
    out = find_independent_forms(spec, [0, 1], rng_seed=1)
    assert out is not None
    assert forms_independent([out.edge_forms[0], out.edge_forms[1]])


# ---- properties


@settings(max_examples=30)
@given(simple_graphs(max_vertices=5, min_vertices=2), st.sampled_from([(1, 3), (1, 4), (1, 5), (2, 5)]), seeds)
def test_collapse_and_expand_match_motion_sheaf(g, sn, seed):
    s, n = sn
    spec = sample_generic_spec(g, s, n, seed)
    collapse_to_graph_sheaf(spec, verify=True)
    expand_to_multigraph(spec, verify=True)
    expand_to_multigraph(spec, rng_seed=seed, verify=True)


@given(multigraphs(max_vertices=5, max_mult=3), st.sampled_from([(1, 3), (1, 4), (2, 5), (0, 3)]), seeds)
def test_direct_and_r_matrix_paths_agree(g, sn, seed):
    s, n = sn
    spec = sample_associated(g, s, n, seed)
    rep = cohomology(associated_sheaf(spec))
    assert rep.h0 == r_matrix_h0(spec)
    assert rep.h0 - rep.h1 == sum(n - s for _ in g.vertices) - g.n_edges


@settings(max_examples=20)
@given(multigraphs(max_vertices=4, max_mult=2), seeds)
def test_degenerate_forms_still_agree(g, seed):
    # copy one form onto every edge where it is admissible, to force dependencies
    spec = sample_associated(g, 1, 4, seed)
    if g.n_edges:
        a = spec.edge_forms[0]
        spec = spec.with_forms({e: a for e, (u, v) in enumerate(g.edges)
                                if a.annihilates(spec.S(u)) and a.annihilates(spec.S(v))})
    cohomology_associated(spec)


@settings(max_examples=25)
@given(st.integers(3, 5), st.integers(2, 5), seeds)
def test_extensions_preserve_independence(n, k, seed):
    rng = random.Random(seed)
    g = generate_tight(n, k, rng).graph
    res = build_independent_sheaf(g, n, rng)
    spec = res.spec
    assert cohomology_associated(spec).h1 == 0
    for step in range(2):
        d = n - 1
        kk = rng.randint(0, min(2, spec.base.n_edges))
        move = ExtensionMove(d, kk, tuple(rng.sample(range(spec.base.n_edges), kk)),
                             spec.base.n_vertices + 100 + step,
                             tuple(rng.choice(spec.base.vertices) for _ in range(d - kk)))
        try:
            spec = extend_associated(spec, move, rng_seed=rng)
        except PreconditionError:
            continue  # degenerate configuration for this move; nothing to check
        assert cohomology_associated(spec).h1 == 0


@settings(max_examples=20)
@given(st.integers(3, 5), st.integers(2, 6), seeds)
def test_build_independent_on_tight_graphs(n, k, seed):
    g = generate_tight(n, k, seed).graph
    res = build_independent_sheaf(g, n, seed)
    assert res.spec is not None
    assert cohomology_associated(res.spec).h1 == 0
    assert res.spec.base.edges == g.edges


@settings(max_examples=20)
@given(multigraphs(max_vertices=5, max_mult=2, min_vertices=2), seeds)
def test_build_independent_iff_sparse(g, seed):
    res = build_independent_sheaf(g, 4, seed)
    assert (res.spec is not None) == is_sparse(g, 3, 4).sparse
    if res.spec is not None:
        assert cohomology_associated(res.spec).h1 == 0


@settings(max_examples=15)
@given(multigraphs(max_vertices=4, max_mult=2), seeds)
def test_resample_never_increases_h1(g, seed):
    spec = sample_associated(g, 1, 4, seed)
    out = resample_forms(spec, rng_seed=seed)
    if out is not None:
        assert cohomology_associated(out).h1 <= cohomology_associated(spec).h1
