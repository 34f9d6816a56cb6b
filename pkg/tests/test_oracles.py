"""Brute-force baselines with frozen expected values."""

import pytest

from sheafrig.errors import BudgetExceeded, PreconditionError
from sheafrig.graphs import Multigraph, complete_graph
from sheafrig.lie import Framework
from sheafrig.motion import MotionSheafSpec
from sheafrig.oracles import brute_h0, brute_sparsity, budget, fraction_rank, rigidity_matrix
from sheafrig.subspaces import Subspace

from conftest import triangle


def k3_lines(*rows):
    return MotionSheafSpec(triangle().as_hypergraph(), 3,
                           {v: Subspace.span([r], 3) for v, r in enumerate(rows)})


# frozen values: equal, spanning and coplanar lines on a triangle
K3_EQUAL = ([1, 0, 0], [1, 0, 0], [1, 0, 0])
K3_SPANNING = ([1, 0, 0], [0, 1, 0], [0, 0, 1])
K3_COPLANAR = ([1, 0, 0], [0, 1, 0], [1, 1, 0])


@pytest.mark.parametrize("rows,expected", [(K3_EQUAL, 2), (K3_SPANNING, 3), (K3_COPLANAR, 4)])
def test_brute_h0_k3_triple(rows, expected):
    assert brute_h0(k3_lines(*rows)) == expected


def test_fraction_rank_small():
    assert fraction_rank([]) == 0
    assert fraction_rank([[1, 2], [2, 4]]) == 1
    assert fraction_rank([[1, 2, 3], [0, 1, 1], [1, 3, 4]]) == 2
    assert fraction_rank([[0, 0], [0, 0]]) == 0


def test_rigidity_matrix_triangle():
    fw = Framework(triangle(), 2, {0: [0, 0], 1: [3, 1], 2: [1, 4]})
    r = rigidity_matrix(fw)
    assert (r.rank, r.motions) == (3, 3)


def test_rigidity_matrix_single_edge():
    fw = Framework(Multigraph.from_edges([(0, 1)]), 2, {0: [0, 0], 1: [2, 5]})
    r = rigidity_matrix(fw)
    assert (r.rank, r.motions) == (1, 3)


def test_rigidity_matrix_four_cycle():
    c4 = Multigraph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    fw = Framework(c4, 2, {0: [0, 0], 1: [5, 1], 2: [4, 7], 3: [-1, 3]})
    r = rigidity_matrix(fw)
    assert (r.rank, r.motions) == (4, 4)


def test_rigidity_matrix_row_layout():
    fw = Framework(Multigraph.from_edges([(0, 1)]), 2, {0: [1, 2], 1: [4, 6]})
    assert [int(x) for x in rigidity_matrix(fw).rows[0]] == [-3, -4, 3, 4]


def test_rigidity_matrix_rejects_coincident_points():
    fw = Framework(Multigraph.from_edges([(0, 1)]), 2, {0: [1, 1], 1: [1, 1]})
    with pytest.raises(PreconditionError):
        rigidity_matrix(fw)


def test_brute_sparsity_frozen():
    assert brute_sparsity(triangle(), 2, 3).tight
    k4 = brute_sparsity(complete_graph(4), 2, 3)
    assert not k4.sparse and k4.witness == frozenset(range(4))
    assert brute_sparsity(complete_graph(5), 3, 4).sparse
    assert not brute_sparsity(complete_graph(6), 3, 4).sparse
    double = Multigraph.from_edges([(0, 1), (0, 1)])
    assert brute_sparsity(double, 2, 2).tight
    assert not brute_sparsity(double, 2, 3).sparse


def test_budget_parsing(monkeypatch):
    monkeypatch.delenv("SHEAFRIG_BUDGET", raising=False)
    assert budget() == {"sparsity_vertices": 12, "h0_unknowns": 200}
    monkeypatch.setenv("SHEAFRIG_BUDGET", "50")
    assert budget()["h0_unknowns"] == 50
    monkeypatch.setenv("SHEAFRIG_BUDGET", "sparsity_vertices=3,h0_unknowns=7")
    assert budget() == {"sparsity_vertices": 3, "h0_unknowns": 7}
    monkeypatch.setenv("SHEAFRIG_BUDGET", "nonsense=1")
    with pytest.raises(PreconditionError):
        budget()


def test_budget_enforced(monkeypatch):
    monkeypatch.setenv("SHEAFRIG_BUDGET", "sparsity_vertices=3,h0_unknowns=10")
    with pytest.raises(BudgetExceeded):
        brute_sparsity(complete_graph(4), 2, 3)
    with pytest.raises(BudgetExceeded):
        brute_h0(k3_lines(*K3_SPANNING))
