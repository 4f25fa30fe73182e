"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 statistical FLAG from a
run.  Output is deterministic given inputs and seed; timestamps appear
only in file names and can be suppressed with --no-timestamp.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import limits
from .experiments import (ExperimentSpec, result_to_csv, result_to_json, run)
from .groups import parse_group
from .intmat import (MatrixParseError, cokernel, format_matrix, parse_matrix,
                     smith_normal_form)
from .randsrc import Rng
from .sampling import laplacian, sample_digraph, total_sandpile

USAGE_ERROR = 2
FLAG_EXIT = 3


def _read_matrix(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        print(f"error: cannot read {path}: {e}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)
    try:
        return parse_matrix(text)
    except MatrixParseError as e:
        print(f"error: {path}: {e}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _cmd_snf(args) -> int:
    m = _read_matrix(args.matrix_file)
    res = smith_normal_form(m, want_transforms=args.transforms)
    factors = " ".join(str(d) for d in res.invariant_factors)
    print(f"rank {res.rank}:" + (f" {factors}" if factors else ""))
    if args.transforms:
        print("left:")
        print(format_matrix(res.left_transform), end="")
        print("right:")
        print(format_matrix(res.right_transform), end="")
    return 0


def _cmd_cok(args) -> int:
    print(str(cokernel(_read_matrix(args.matrix_file))))
    return 0


def _cmd_sandpile(args) -> int:
    if args.adjacency_file:
        adj = _read_matrix(args.adjacency_file)
    else:
        if args.n is None or args.q is None:
            print("error: need either an adjacency file or --n and --q",
                  file=sys.stderr)
            return USAGE_ERROR
        g = sample_digraph(args.n, Fraction(args.q), Rng(args.seed))
        adj = g.adjacency_matrix()
    print(str(total_sandpile(laplacian(adj))))
    return 0


_CONSTANTS = {
    "zeta": (["k"], lambda a, tol: limits.zeta(int(a[0]), tol)),
    "zeta-tail-product": (["u"], lambda a, tol: limits.zeta_tail_product(int(a[0]), tol)),
    "cohen-lenstra": (["group", "u"],
                      lambda a, tol: limits.cohen_lenstra_prob(_group(a[0]), int(a[1]), tol)),
    "cyclic": (["u"], lambda a, tol: limits.cyclic_prob(int(a[0]), tol)),
    "squarefree-det": (["u"], lambda a, tol: limits.squarefree_det_prob(int(a[0]), tol)),
    "sandpile": (["group"], lambda a, tol: limits.sandpile_prob(_group(a[0]), tol)),
    "sandpile-cyclic": ([], lambda a, tol: limits.sandpile_cyclic_prob(tol)),
    "prodcyc": (["group", "k0"],
                lambda a, tol: limits.prodcyc_prob(_group(a[0]), int(a[1]), tol)),
    "sylow-restricted": (["group", "u", "primes"],
                         lambda a, tol: limits.sylow_restricted_prob(
                             _group(a[0]), int(a[1]),
                             [int(p) for p in a[2].split(",")], tol)),
    "uniform-fullrank": (["n", "u", "p"],
                         lambda a, tol: limits.uniform_fullrank_prob(
                             int(a[0]), int(a[1]), int(a[2]))),
    "heuristic-surjective": (["n", "p"],
                             lambda a, tol: limits.heuristic_surjective_mod_p(
                                 int(a[0]), int(a[1]))),
}


def _group(text: str):
    return parse_group(text.replace("trivial", "0"))


def _cmd_constants(args) -> int:
    name = args.name
    if name not in _CONSTANTS:
        print(f"error: unknown constant {name!r}; choices: "
              + " ".join(sorted(_CONSTANTS)), file=sys.stderr)
        return USAGE_ERROR
    params, fn = _CONSTANTS[name]
    if len(args.params) != len(params):
        print(f"error: {name} expects parameters: {' '.join(params)}",
              file=sys.stderr)
        return USAGE_ERROR
    try:
        out = fn(args.params, args.tol)
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    if isinstance(out, limits.TolerancedReal):
        print(f"{out.value:.12f} +- {out.abs_error_bound:.3e}")
    else:
        print(f"{out:.12f}")
    return 0


def _cmd_run(args) -> int:
    try:
        spec_obj = json.loads(Path(args.spec).read_text())
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: cannot load spec {args.spec}: {e}", file=sys.stderr)
        return USAGE_ERROR
    env_seed = os.environ.get("COKLAB_SEED")
    if env_seed is not None:
        spec_obj["seed"] = int(env_seed)
    try:
        spec = ExperimentSpec.from_json(spec_obj)
    except (ValueError, KeyError) as e:
        print(f"error: bad spec: {e}", file=sys.stderr)
        return USAGE_ERROR
    result = run(spec, workers=args.threads)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = f"{spec.kind}_seed{spec.seed}"
    if not args.no_timestamp:
        stem += time.strftime("_%Y%m%dT%H%M%S")
    (outdir / f"{stem}.csv").write_text(result_to_csv(result))
    (outdir / f"{stem}.json").write_text(
        json.dumps(result_to_json(result), indent=2) + "\n")
    for r in result.reports:
        theory = "" if r.theory is None else f" theory={r.theory:.6f}"
        print(f"{r.target}: {r.count}/{r.trials} = {r.estimate:.6f}"
              f"{theory} [{r.status}]")
    return FLAG_EXIT if result.flagged else 0


def _cmd_report(args) -> int:
    if not args.files:
        print("error: no result files given", file=sys.stderr)
        return USAGE_ERROR
    groups: dict[str, list] = {}
    for path in args.files:
        try:
            obj = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            print(f"error: cannot load {path}: {e}", file=sys.stderr)
            return USAGE_ERROR
        groups.setdefault(obj["spec"]["kind"], []).append((path, obj))
    for kind in sorted(groups):
        print(f"== {kind} ==")
        print(f"{'target':<20} {'estimate':>10} {'ci':>23} {'theory':>10} "
              f"{'z':>8} status")
        for path, obj in groups[kind]:
            for r in obj["reports"]:
                ci = f"[{r['lo']:.4f}, {r['hi']:.4f}]"
                theory = "-" if r["theory"] is None else f"{r['theory']:.6f}"
                z = "-" if r["z"] is None else f"{r['z']:+.2f}"
                print(f"{r['target']:<20} {r['estimate']:>10.6f} {ci:>23} "
                      f"{theory:>10} {z:>8} {r['status']}")
        print()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coklab",
        description="Exact cokernels of random integer matrices, total "
                    "sandpile groups of random digraphs, their limiting "
                    "probabilities, and Monte-Carlo verification runs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("snf", help="Smith normal form of a matrix file")
    p.add_argument("matrix_file")
    p.add_argument("--transforms", action="store_true",
                   help="also print unimodular left/right transforms")
    p.set_defaults(fn=_cmd_snf)

    p = sub.add_parser("cok", help="cokernel of a matrix file")
    p.add_argument("matrix_file")
    p.set_defaults(fn=_cmd_cok)

    p = sub.add_parser("sandpile", help="total sandpile group of a digraph")
    p.add_argument("adjacency_file", nargs="?",
                   help="adjacency matrix in the matrix text format")
    p.add_argument("--n", type=int, help="vertices of a sampled digraph")
    p.add_argument("--q", help="edge probability of a sampled digraph")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_sandpile)

    p = sub.add_parser("constants", help="evaluate a limiting probability")
    p.add_argument("name")
    p.add_argument("params", nargs="*")
    p.add_argument("--tol", type=float, default=limits.DEFAULT_TOL)
    p.set_defaults(fn=_cmd_constants)

    p = sub.add_parser("run", help="run a Monte-Carlo experiment spec")
    p.add_argument("spec", help="experiment spec JSON file")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp from output file names")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("report", help="merge result JSON files into a table")
    p.add_argument("files", nargs="*")
    p.set_defaults(fn=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.fn(args)
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else USAGE_ERROR
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        code = USAGE_ERROR
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
