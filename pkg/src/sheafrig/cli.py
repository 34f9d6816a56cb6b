"""Command line front end.  Every command writes one JSON (or DOT) report.

Exit codes: 0 success, 1 internal failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass

from . import __version__
from .errors import PreconditionError
from .graphs import (
    ExtensionMove,
    Hypergraph,
    Multigraph,
    apply_extension,
    generate_tight,
    graph_from_json,
    incidence_to_dot,
    is_sparse,
    multiply_edges,
    to_dot,
)

log = logging.getLogger("sheafrig")


@dataclass(frozen=True)
class RunConfig:
    command: str
    paths: dict  # input files by role
    inputs: dict  # content digests of those files
    params: dict
    seed: int | None
    output: str | None
    format: str = "json"

    def config_hash(self) -> str:
        blob = json.dumps({"command": self.command, "inputs": self.inputs, "params": self.params,
                           "seed": self.seed, "format": self.format}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise PreconditionError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"{path}: invalid JSON ({exc})")


def _digest(path: str) -> str:
    try:
        with open(path, "rb") as fh:
            return hashlib.sha256(fh.read()).hexdigest()
    except FileNotFoundError:
        raise PreconditionError(f"no such file: {path}")


def _graph(path: str):
    return graph_from_json(_read_json(path))


def _as_multigraph(g) -> Multigraph:
    if isinstance(g, Hypergraph):
        return g.as_multigraph()
    return g


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".sheafrig-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _report(cfg: RunConfig, result: dict) -> str:
    doc = {
        "tool": "sheafrig",
        "version": __version__,
        "command": cfg.command,
        "config_hash": cfg.config_hash(),
        "seed": cfg.seed,
        "result": result,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------- commands


def cmd_analyze(cfg: RunConfig) -> str:
    from .lie import EuclideanModel, Framework, ParallelModel, bar_joint_spec, parallel_spec
    from .motion import MotionSheafSpec, analyze, maxwell_defect

    p = cfg.params
    if "spec" in cfg.paths:
        spec = MotionSheafSpec.from_json(_read_json(cfg.paths["spec"]))
    else:
        fw = Framework.from_json(_read_json(cfg.paths["framework"]))
        if p["model"] == "euclidean":
            d = p.get("d") or fw.dim
            spec = bar_joint_spec(EuclideanModel(d), fw)
        else:
            spec = parallel_spec(ParallelModel(fw.dim), fw)
    out = analyze(spec).to_json()
    out["maxwell_defect"] = maxwell_defect(spec)
    return _report(cfg, out)


def cmd_sparsity(cfg: RunConfig) -> str:
    p = cfg.params
    g = _graph(cfg.paths["graph"])
    if p.get("brute"):
        from .oracles import brute_sparsity

        r = brute_sparsity(g, p["d"], p["l"])
        w = None if r.witness is None else sorted(r.witness, key=repr)
        return _report(cfg, {"sparse": r.sparse, "tight": r.tight, "witness": w})
    return _report(cfg, is_sparse(g, p["d"], p["l"]).to_json())


def cmd_generate(cfg: RunConfig) -> str:
    p = cfg.params
    res = generate_tight(p["n"], p["vertices"], cfg.seed)
    return _report(cfg, {"graph": res.graph.to_json(), "moves": [m.to_json() for m in res.moves]})


def cmd_extend(cfg: RunConfig) -> str:
    p = cfg.params
    moves = _read_json(cfg.paths["moves"])
    moves = [ExtensionMove.from_json(m) for m in (moves if isinstance(moves, list) else [moves])]
    if "spec" in cfg.paths:
        from .associated import AssociatedSheafSpec, cohomology_associated, extend_associated
        from .subspaces import make_rng

        spec = AssociatedSheafSpec.from_json(_read_json(cfg.paths["spec"]))
        rng = make_rng(cfg.seed)
        before = cohomology_associated(spec)
        for m in moves:
            spec = extend_associated(spec, m, rng_seed=rng)
        after = cohomology_associated(spec)
        return _report(cfg, {"before": before.to_json(), "after": after.to_json(), "spec": spec.to_json()})
    g = _as_multigraph(_graph(cfg.paths["graph"]))
    for m in moves:
        g = apply_extension(g, m)
    return _report(cfg, {"graph": g.to_json()})


def cmd_maintheorem(cfg: RunConfig) -> str:
    from .motion import check_main_theorem

    p = cfg.params
    g = _as_multigraph(_graph(cfg.paths["graph"]))
    return _report(cfg, check_main_theorem(g, p["n"], p["trials"], cfg.seed).to_json())


def cmd_parallel(cfg: RunConfig) -> str:
    from .lie import ParallelModel, parallel_spec, sample_framework
    from .motion import analyze

    p = cfg.params
    g = _as_multigraph(_graph(cfg.paths["graph"]))
    n = p["n"]
    fw = sample_framework(g, n, cfg.seed)
    verdict = analyze(parallel_spec(ParallelModel(n), fw))
    # the algebra has dimension n + 1, so the general count uses (n - 1) copies
    general = is_sparse(multiply_edges(g, n - 1), n, n + 1).sparse
    literal = is_sparse(multiply_edges(g, n - 2), n, n + 1).sparse if n > 2 else True
    return _report(cfg, {
        "verdict": verdict.to_json(),
        "sparse_dimG_minus_2_copies": general,
        "sparse_n_minus_2_copies": literal,
        "agrees": verdict.independent == general,
    })


def cmd_independent(cfg: RunConfig) -> str:
    from .associated import build_independent_sheaf

    p = cfg.params
    g = _as_multigraph(_graph(cfg.paths["graph"]))
    return _report(cfg, build_independent_sheaf(g, p["n"], cfg.seed).to_json())


def cmd_dot(cfg: RunConfig) -> str:
    g = _graph(cfg.paths["graph"])
    return incidence_to_dot(g) if cfg.params.get("incidence") else to_dot(g)


COMMANDS = {
    "analyze": cmd_analyze,
    "sparsity": cmd_sparsity,
    "generate": cmd_generate,
    "extend": cmd_extend,
    "maintheorem": cmd_maintheorem,
    "parallel": cmd_parallel,
    "independent": cmd_independent,
    "dot": cmd_dot,
}

INPUT_KEYS = ("spec", "framework", "graph", "moves")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sheafrig", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"sheafrig {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("-o", "--out", help="output path (default: stdout)")
        return p

    p = add("analyze", "h0/h1 and rigidity predicates of a motion sheaf")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="motion sheaf spec JSON")
    src.add_argument("--framework", help="framework JSON")
    p.add_argument("--model", choices=("euclidean", "parallel"), default="euclidean")
    p.add_argument("--d", type=int)

    p = add("sparsity", "(d,l)-sparsity of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--brute", action="store_true", help="use subset enumeration")

    p = add("generate", "random (n-1,n)-tight multigraph from K_2^{n-2}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = add("extend", "apply k-extension moves to a graph or an associated sheaf")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph")
    src.add_argument("--spec", help="associated sheaf spec JSON")
    p.add_argument("--moves", required=True, help="JSON move or list of moves")
    p.add_argument("--seed", type=int)

    p = add("maintheorem", "compare sampled independence with sparsity of (n-2)G")
    p.add_argument("--graph", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, required=True)

    p = add("parallel", "parallel redrawing sheaf of a random point placement")
    p.add_argument("--graph", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = add("independent", "build an associated sheaf with h1 = 0 by induction")
    p.add_argument("--graph", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = add("dot", "DOT export of a graph or its incidence graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--incidence", action="store_true")
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    raw = {k: v for k, v in vars(args).items() if k not in ("command", "out", "verbose") and v is not None}
    seed = raw.pop("seed", None)
    paths = {k: raw.pop(k) for k in INPUT_KEYS if k in raw}
    # the hash covers input contents, not where the files happen to live
    inputs = {k: _digest(v) for k, v in paths.items()}
    fmt = "dot" if args.command == "dot" else "json"
    return RunConfig(args.command, paths, inputs, raw, seed, args.out, fmt)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        if args.command == "extend" and args.spec and args.seed is None:
            raise PreconditionError("--seed is required when extending a sheaf")
        text = COMMANDS[args.command](cfg)
        _write(text, args.out)
    except PreconditionError as exc:
        print(f"sheafrig: error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, TypeError, ValueError) as exc:
        print(f"sheafrig: error: malformed input ({exc})", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.exception("internal failure")
        print(f"sheafrig: internal error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
