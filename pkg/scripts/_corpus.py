"""Random graph corpora shared by the sweep scripts."""

import itertools
import random

from sheafrig.graphs import Multigraph


def random_graph(rng: random.Random, k: int, p: float) -> Multigraph:
    edges = [e for e in itertools.combinations(range(k), 2) if rng.random() < p]
    return Multigraph.from_edges(edges, range(k))


def random_connected_graph(rng: random.Random, k: int, p: float) -> Multigraph:
    while True:
        g = random_graph(rng, k, p)
        if g.is_connected():
            return g
