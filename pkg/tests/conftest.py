import itertools

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from sheafrig.graphs import Multigraph
from sheafrig.subspaces import Subspace

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("ci", deadline=None, max_examples=15)
settings.load_profile("default")


def from_nx(h) -> Multigraph:
    return Multigraph.from_edges(sorted(tuple(sorted(e)) for e in h.edges()), sorted(h.nodes()))


def atlas(max_vertices: int, connected: bool = False, min_vertices: int = 1):
    """Graphs from the networkx atlas (all graphs up to 7 vertices, up to isomorphism)."""
    out = []
    for h in nx.graph_atlas_g():
        k = h.number_of_nodes()
        if k < min_vertices or k > max_vertices:
            continue
        if connected and not nx.is_connected(h):
            continue
        out.append(from_nx(h))
    return out


def triangle() -> Multigraph:
    return Multigraph.from_edges([(0, 1), (1, 2), (0, 2)])


@st.composite
def multigraphs(draw, max_vertices=5, max_mult=3, min_vertices=1):
    k = draw(st.integers(min_vertices, max_vertices))
    pairs = list(itertools.combinations(range(k), 2))
    mults = draw(st.lists(st.integers(0, max_mult), min_size=len(pairs), max_size=len(pairs)))
    edges = [p for p, m in zip(pairs, mults) for _ in range(m)]
    return Multigraph.from_edges(edges, range(k))


@st.composite
def simple_graphs(draw, max_vertices=5, min_vertices=1):
    return draw(multigraphs(max_vertices=max_vertices, max_mult=1, min_vertices=min_vertices))


@st.composite
def subspaces(draw, n, max_dim=None):
    max_dim = n if max_dim is None else max_dim
    k = draw(st.integers(0, max_dim))
    rows = draw(st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=k, max_size=k))
    return Subspace.span(rows, n) if rows else Subspace.zero(n)


seeds = st.integers(0, 2**32 - 1)


@pytest.fixture
def tri():
    return triangle()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
