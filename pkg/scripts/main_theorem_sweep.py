"""Sampled lines-in-Q^n specs versus sparsity of (n-2)G on random connected graphs.

    python scripts/main_theorem_sweep.py --n 3 4 5 --graphs 200 --max-vertices 8 --seed 1
"""

import argparse
import json
import random
import time
from collections import Counter

from sheafrig.motion import check_main_theorem

from _corpus import random_connected_graph


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[3, 4])
    ap.add_argument("--graphs", type=int, default=100)
    ap.add_argument("--max-vertices", type=int, default=7)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    rows = []
    for n in args.n:
        t = time.perf_counter()
        tally = Counter()
        mismatches = []
        for _ in range(args.graphs):
            g = random_connected_graph(rng, rng.randint(2, args.max_vertices), rng.uniform(0.2, 0.9))
            res = check_main_theorem(g, n, args.trials, rng.randrange(2**32))
            tally["sparse" if res.sparse else "not sparse"] += 1
            if not res.agrees:
                mismatches.append([list(e) for e in g.edges])
        rows.append({"n": n, "graphs": args.graphs, "counts": dict(tally),
                     "mismatches": mismatches, "seconds": round(time.perf_counter() - t, 2)})
    print(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()
