"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 an index too large for the bit
budget, 4 a failed verification.  Results are JSON on stdout, or written
atomically to ``--out``.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Sequence

from . import codec
from .errors import BUDGET_ENV_VAR, BWError, ValidationError, default_budget_bits
from .io import atomic_write_text

__all__ = ["main", "build_parser"]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file whose keys supply defaults for this command's options")
    p.add_argument("--budget-bits", type=int, default=None,
                   help=f"bit budget for big integers (default: ${BUDGET_ENV_VAR} or 2**20)")
    p.add_argument("--out", default=None, help="write the JSON result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bwcantor",
        description="Generalized Bing-Whitehead defining sequences: schedules, certificates and tori.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="block schedule of C(s)")
    p.add_argument("--seed", required=False, help="seed literal, e.g. affine:1,0 or prefix:1,2,3")
    p.add_argument("--blocks", type=int, default=2, help="number of blocks j_max (default 2)")
    p.add_argument("--gap", default="pow2", help="gap rule: pow2 or sigma+1")
    _add_common(p)

    p = sub.add_parser("check-cantor", help="divergence verdict for sum 2^-sigma_i")
    p.add_argument("--spec", required=False, help="cs:<seed>, zeros:D, standard:1,2(0), inline JSON or a JSON file")
    p.add_argument("--stage", type=int, default=None, help="also report the exact partial sum up to this stage")
    _add_common(p)

    p = sub.add_parser("compare", help="inequivalence certificate for two seeds")
    p.add_argument("--seed-a", required=False)
    p.add_argument("--seed-b", required=False)
    p.add_argument("--value-bound", type=int, default=10**6, help="enumeration bound for undecided seed kinds")
    _add_common(p)

    p = sub.add_parser("rigidity", help="tail-distinctness witnesses for pairs of rays of C(s)")
    p.add_argument("--seed", required=False)
    p.add_argument("--pair", nargs=2, action="append", metavar=("RAY_A", "RAY_B"), default=None,
                   help="ray pair such as 0(0) 0(1); repeatable")
    p.add_argument("--random", type=int, default=None, metavar="N", help="sample N random distinct pairs")
    p.add_argument("--seed-rng", type=int, default=0, help="RNG seed for --random")
    p.add_argument("--max-prefix", type=int, default=32)
    p.add_argument("--max-period", type=int, default=8)
    p.add_argument("--gap", default="pow2")
    _add_common(p)

    p = sub.add_parser("mesh", help="nested tori: OBJ mesh, curves JSON and a verification report")
    p.add_argument("--spec", required=False)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--params", default=None, help="geometry parameters (JSON file or inline object)")
    p.add_argument("--obj", default=None, help="OBJ output path")
    p.add_argument("--curves", default=None, help="curves JSON output path")
    _add_common(p)

    p = sub.add_parser("verify-witness", help="replay a witness document (file path or - for stdin)")
    p.add_argument("witness", nargs="?", default=None)
    _add_common(p)

    p = sub.add_parser("index", help="geometric index of a nesting chain")
    p.add_argument("--chain", default=None, help="e.g. bing,whitehead,bing or BWB; empty for identity")
    p.add_argument("--stages", type=int, nargs=2, default=None, metavar=("I", "K"))
    _add_common(p)
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._subparsers._group_actions:  # type: ignore[union-attr]
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str], args: argparse.Namespace) -> argparse.Namespace:
    """Reparse with the config file's values as defaults; unknown keys are errors."""
    if not args.config:
        return args
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config {args.config}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {args.config} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ValidationError("config must be a JSON object")
    sub = _subparser(parser, args.command)
    allowed = {a.dest for a in sub._actions if a.dest not in ("help", "config")}
    norm = {k.replace("-", "_"): v for k, v in cfg.items()}
    unknown = sorted(set(norm) - allowed)
    if unknown:
        raise ValidationError(f"unknown config keys for {args.command}: {unknown}")
    if "params" in norm and isinstance(norm["params"], dict):
        norm["params"] = json.dumps(norm["params"])
    sub.set_defaults(**norm)
    return parser.parse_args(argv)


def _budget(args: argparse.Namespace) -> int:
    if args.budget_bits is not None:
        if args.budget_bits < 1:
            raise ValidationError("--budget-bits must be positive")
        return args.budget_bits
    return default_budget_bits()


def _need(args: argparse.Namespace, *names: str) -> None:
    for n in names:
        if getattr(args, n) in (None, ""):
            raise ValidationError(f"--{n.replace('_', '-')} is required")


def _emit(args: argparse.Namespace, doc: dict) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)


def cmd_generate(args: argparse.Namespace) -> int:
    from .construction import schedule

    _need(args, "seed")
    s = schedule(codec.parse_seed(args.seed), args.blocks, args.gap, _budget(args))
    _emit(args, codec.schedule_to_json(s))
    return 0


def cmd_check_cantor(args: argparse.Namespace) -> int:
    from .criterion import divergence_report, series_state

    _need(args, "spec")
    spec = codec.parse_spec(args.spec, _budget(args))
    doc = {"spec": codec.spec_to_json(spec), "verdict": codec.verdict_to_json(divergence_report(spec))}
    if args.stage is not None:
        doc["series"] = codec.series_to_json(series_state(spec, args.stage))
    _emit(args, doc)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    from .sequences import inequivalence_certificate

    _need(args, "seed_a", "seed_b")
    if args.value_bound < 1:
        raise ValidationError("--value-bound must be positive")
    cert = inequivalence_certificate(codec.parse_seed(args.seed_a), codec.parse_seed(args.seed_b), args.value_bound)
    _emit(args, codec.certificate_to_json(cert))
    return 0


def cmd_rigidity(args: argparse.Namespace) -> int:
    from .sequences import random_distinct_ray_pairs, rigidity_report
    from .tree import parse_ray

    _need(args, "seed")
    pairs = [(parse_ray(a), parse_ray(b)) for a, b in (args.pair or [])]
    if args.random is not None:
        if args.random < 0:
            raise ValidationError("--random must be >= 0")
        pairs += random_distinct_ray_pairs(args.random, args.seed_rng, args.max_prefix, args.max_period)
    if not pairs:
        raise ValidationError("give --pair RAY_A RAY_B or --random N")
    report = rigidity_report(codec.parse_seed(args.seed), pairs, args.gap, _budget(args))
    _emit(args, codec.rigidity_to_json(report, args.gap))
    return 0 if report.ok else 4


def _geometry_params(text: str | None):
    from .geometry import GeometryParams

    if text is None:
        return GeometryParams()
    raw = text.strip()
    if not raw.startswith("{"):
        try:
            with open(raw, encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read geometry parameters {text}: {exc}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"geometry parameters are not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ValidationError("geometry parameters must be a JSON object")
    return GeometryParams.from_dict(data)


def cmd_mesh(args: argparse.Namespace) -> int:
    from .geometry import embed_stage_tree, export_curves, export_mesh, verify_embedding

    _need(args, "spec")
    params = _geometry_params(args.params)
    spec = codec.parse_spec(args.spec, _budget(args))
    tori = embed_stage_tree(spec, args.depth, params)
    report = verify_embedding(tori)
    meta = {"spec": codec.spec_to_json(spec), "depth": args.depth, "params": params.to_dict()}
    if args.obj:
        export_mesh(tori, args.obj, params.tube_segments)
    if args.curves:
        export_curves(tori, args.curves, meta)
    doc = dict(meta)
    doc["tori"] = [t.name for t in tori]
    doc["report"] = codec.report_to_json(report)
    _emit(args, doc)
    return 0 if report.passed else 4


def cmd_verify_witness(args: argparse.Namespace) -> int:
    from .sequences import replay_witness

    _need(args, "witness")
    try:
        if args.witness == "-":
            doc = json.load(sys.stdin)
        else:
            with open(args.witness, encoding="utf-8") as fh:
                doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read witness: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"witness is not valid JSON: {exc}") from None
    seed, ray_a, ray_b, w, gap = codec.witness_doc_from_json(doc)
    replay = replay_witness(seed, ray_a, ray_b, w, gap, _budget(args))
    _emit(args, codec.replay_to_json(replay))
    return 0 if replay.ok else 4


def cmd_index(args: argparse.Namespace) -> int:
    from .index import compose_index, parse_chain, stage_index

    if args.stages is not None:
        i, k = args.stages
        _emit(args, {"stages": [i, k], "index": str(stage_index(i, k))})
        return 0
    if args.chain is None:
        raise ValidationError("give --chain or --stages")
    chain = parse_chain(args.chain)
    _emit(args, {"chain": [k.value for k in chain.chain], "index": str(compose_index(chain))})
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "check-cantor": cmd_check_cantor,
    "compare": cmd_compare,
    "rigidity": cmd_rigidity,
    "mesh": cmd_mesh,
    "verify-witness": cmd_verify_witness,
    "index": cmd_index,
}


def main(argv: Sequence[str] | None = None) -> int:
    warnings.filterwarnings("ignore", message=".*TBB threading layer.*")
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(parser, argv, args)
        return COMMANDS[args.command](args)
    except BWError as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        sys.stderr.write(json.dumps(err) + "\n")
        return exc.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
