"""Grow an independent associated sheaf by random k-extensions and log (h0, h1) per step.

    python scripts/extension_chain.py --n 4 --steps 15 --seed 3
"""

import argparse
import json
import random

from sheafrig.associated import base_case_spec, cohomology_associated, extend_associated
from sheafrig.errors import PreconditionError
from sheafrig.graphs import ExtensionMove, extension_respects_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--steps", type=int, default=10)
    ap.add_argument("--max-k", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    n, d = args.n, args.n - 1
    spec = base_case_spec(n, rng_seed=rng)
    log = []
    rep = cohomology_associated(spec)
    log.append({"step": 0, "vertices": spec.base.n_vertices, "edges": spec.base.n_edges,
                "h0": rep.h0, "h1": rep.h1})
    step = 0
    while step < args.steps:
        g = spec.base
        k = rng.randint(0, min(args.max_k, d, g.n_edges))
        move = ExtensionMove(d, k, tuple(rng.sample(range(g.n_edges), k)), g.n_vertices,
                             tuple(rng.choice(g.vertices) for _ in range(d - k)))
        if not extension_respects_bound(g, move, n - 2):
            continue
        try:
            spec = extend_associated(spec, move, rng_seed=rng)
        except PreconditionError as exc:
            log.append({"step": step + 1, "skipped": str(exc)})
            continue
        step += 1
        rep = cohomology_associated(spec)
        log.append({"step": step, "k": k, "vertices": spec.base.n_vertices,
                    "edges": spec.base.n_edges, "h0": rep.h0, "h1": rep.h1})
    print(json.dumps(log, indent=2))


if __name__ == "__main__":
    main()
