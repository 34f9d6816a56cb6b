"""Parallel redrawings of point arrangements: which multiple of G predicts h1 = 0?

For each n the sweep compares independence with (n, n+1)-sparsity of c*G for
c = n - 2 and c = n - 1 (the group has dimension n + 1).

    python scripts/parallel_readings.py --n 2 3 4 --graphs 150
"""

import argparse
import json
import random

from sheafrig.graphs import is_sparse, multiply_edges
from sheafrig.lie import ParallelModel, parallel_spec, sample_framework
from sheafrig.motion import analyze

from _corpus import random_graph


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--graphs", type=int, default=100)
    ap.add_argument("--max-vertices", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = []
    for n in args.n:
        model = ParallelModel(n)
        miss = {n - 2: 0, n - 1: 0}
        for _ in range(args.graphs):
            g = random_graph(rng, rng.randint(2, args.max_vertices), rng.uniform(0.2, 0.8))
            v = analyze(parallel_spec(model, sample_framework(g, n, rng)))
            for c in miss:
                sparse = True if c == 0 else is_sparse(multiply_edges(g, c), n, n + 1).sparse
                miss[c] += (v.h1 == 0) != sparse
        out.append({"n": n, "graphs": args.graphs,
                    "mismatches_by_multiplier": {str(c): m for c, m in miss.items()}})
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
