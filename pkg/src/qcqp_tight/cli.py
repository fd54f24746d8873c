"""Command-line front end.

Subcommands: ``solve`` (relaxation solution), ``test`` (exactness test
plus recovery; exit code 0 when an optimizer was recovered, 2 when the
gap certificate holds), ``slemma`` (certificate procedures), ``generate``
(random instance files), ``experiment`` (batch sweep with a markdown
report), ``oracle`` (n = 2 brute-force check).  All results print as
JSON documents on stdout.
"""
from __future__ import annotations

import argparse
import json
import pathlib
import sys

from . import jsonio
from .experiment import markdown_table, run_experiment
from .generator import GeneratorConfig, generate_instance
from .linalg import COMPLEX, REAL
from .oracle import brute_force_value
from .sdp import DEFAULT_EPS1, DEFAULT_EPS2, purify, solve_sdp
from .slemma import (s_lemma_four_complex, s_lemma_three,
                     yuan_lemma_four_complex, yuan_lemma_three)
from .tightness import solve_and_diagnose

_SLEMMA_MODES = {
    "three": (s_lemma_three, 3, REAL, True),
    "yuan3": (yuan_lemma_three, 3, REAL, False),
    "four": (s_lemma_four_complex, 4, COMPLEX, True),
    "yuan4": (yuan_lemma_four_complex, 4, COMPLEX, False),
}


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _parse_dims(text: str) -> list[int]:
    """"2..10" -> [2, ..., 10]; "2,4,6" -> [2, 4, 6]; "5" -> [5]."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",") if p]


def _cmd_solve(args) -> int:
    inst = jsonio.load_instance(args.instance)
    pair = purify(solve_sdp(inst, eps1=args.eps1), args.eps2)
    _emit(jsonio.pair_to_json(pair, inst.field))
    return 0


def _cmd_test(args) -> int:
    inst = jsonio.load_instance(args.instance)
    pair, verdict = solve_and_diagnose(inst, eps1=args.eps1, eps2=args.eps2)
    doc = jsonio.verdict_to_json(verdict)
    doc["primal_value"] = float(pair.primal_value)
    _emit(doc)
    return 0 if verdict.recovered else 2


def _cmd_slemma(args) -> int:
    fn, k, field, needs_x0 = _SLEMMA_MODES[args.mode]
    with open(args.matrices, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("field", field) != field:
        raise SystemExit(f"mode {args.mode} expects {field} matrices")
    mats = [jsonio.decode_matrix(m, field) for m in doc["matrices"]]
    if len(mats) != k:
        raise SystemExit(f"mode {args.mode} expects {k} matrices, "
                         f"got {len(mats)}")
    kwargs = {"eps1": args.eps1, "eps2": args.eps2}
    if needs_x0:
        raw = json.loads(args.x0) if args.x0 else doc.get("x0")
        if raw is None:
            raise SystemExit(
                "this mode needs a strictly feasible point: pass --x0 or "
                "put an \"x0\" entry in the matrices file")
        args_list = mats + [jsonio.decode_vector(raw, field)]
    else:
        args_list = mats
        kwargs["seed"] = args.seed
    cert = fn(*args_list, **kwargs)
    _emit(jsonio.certificate_to_json(cert, field))
    return 0


def _cmd_generate(args) -> int:
    cfg = GeneratorConfig(args.field, args.n, args.seed, args.count)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for index in range(args.count):
        inst = generate_instance(cfg, index)
        name = f"{args.field}_n{args.n}_seed{args.seed}_{index:04d}.json"
        jsonio.save_instance(inst, out / name)
    print(f"wrote {args.count} instance files to {out}", file=sys.stderr)
    return 0


def _cmd_experiment(args) -> int:
    dims = _parse_dims(args.n)
    summary = run_experiment(args.field, dims, args.count, args.seed,
                             eps1=args.eps1, eps2=args.eps2)
    if args.report:
        pathlib.Path(args.report).write_text(markdown_table(summary),
                                             encoding="utf-8")
    _emit(jsonio.summary_to_json(summary))
    return 0


def _cmd_oracle(args) -> int:
    inst = jsonio.load_instance(args.instance)
    res = brute_force_value(inst, args.resolution)
    _emit(jsonio.oracle_to_json(res, inst.field))
    return 0


def _add_eps(p, eps1=True, eps2=True) -> None:
    if eps1:
        p.add_argument("--eps1", type=float, default=DEFAULT_EPS1,
                       help="solver accuracy target")
    if eps2:
        p.add_argument("--eps2", type=float, default=DEFAULT_EPS2,
                       help="rank/clause decision threshold")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcqp-tight", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the relaxation of an instance")
    p.add_argument("instance")
    _add_eps(p)
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("test", help="exactness test and recovery")
    p.add_argument("instance")
    _add_eps(p)
    p.set_defaults(fn=_cmd_test)

    p = sub.add_parser("slemma", help="certificate procedures")
    p.add_argument("mode", choices=sorted(_SLEMMA_MODES))
    p.add_argument("matrices", help="JSON file with a \"matrices\" list")
    p.add_argument("--x0", help="strictly feasible point as a JSON vector")
    p.add_argument("--seed", type=int, default=0,
                   help="search seed for the yuan modes")
    _add_eps(p)
    p.set_defaults(fn=_cmd_slemma)

    p = sub.add_parser("generate", help="write random instance files")
    p.add_argument("--field", choices=(REAL, COMPLEX), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("experiment", help="batch sweep over random instances")
    p.add_argument("--field", choices=(REAL, COMPLEX), required=True)
    p.add_argument("--n", required=True,
                   help="dimensions, e.g. 2..10 or 2,4,6")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--report", help="also write a markdown table here")
    _add_eps(p)
    p.set_defaults(fn=_cmd_experiment)

    p = sub.add_parser("oracle", help="n = 2 brute-force grid check")
    p.add_argument("instance")
    p.add_argument("--resolution", type=int, default=200)
    p.set_defaults(fn=_cmd_oracle)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
