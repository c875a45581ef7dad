"""Command-line interface: generate, rewrite, split, evaluate, leakage, info.

Exit status: 0 on success, 1 on a validation/usage error, 2 on an IO error.
All outputs are deterministic under fixed seeds; report files embed the
sha256 digests of their inputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .analysis import (
    avg_min_levenshtein,
    format_eval_table,
    format_leakage_table,
    leakage_report,
    score_predictions,
)
from .datasets import (
    DEFAULT_RATIOS,
    read_pairs,
    split as split_pairs,
    write_dataset,
    write_pairs,
)
from .generation import PRESETS, GenConfig, gen_dataset
from .rewriting import group_pairs, load_rules, synth_pairs
from .terms import INFIX, TPTP, Syntax, parse_term

SYNTAXES = {"infix": INFIX, "tptp": TPTP}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are exit 1
        raise UsageError(message)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _input_digests(**paths: Path | None) -> dict:
    return {
        name: {"path": str(path), "sha256": _sha256(path)}
        for name, path in paths.items()
        if path is not None
    }


def _read_lines(path: Path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def _write_report(report: dict, table: str, path: Path | None) -> None:
    print(table)
    if path is not None:
        path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _parse_ratios(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"--ratios: expected 3 comma-separated values, got {text!r}")
    try:
        ratios = tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--ratios: not numeric: {text!r}") from None
    return ratios


def _load_config(args) -> GenConfig:
    if args.config is not None:
        config = GenConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
    elif args.preset is not None:
        if args.preset not in PRESETS:
            raise UsageError(f"--preset: unknown preset {args.preset!r}; choices: {', '.join(PRESETS)}")
        config = PRESETS[args.preset]
    else:
        raise UsageError("--preset or --config is required")
    overrides = {}
    if args.count is not None:
        overrides["count"] = args.count
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.max_output_tokens is not None:
        overrides["max_output_tokens"] = args.max_output_tokens
    return replace(config, **overrides) if overrides else config


def _cmd_generate(args) -> int:
    config = _load_config(args)
    out = Path(args.out)
    manifest = {
        "config": json.loads(config.to_json()),
        "preset": args.preset,
        "seed": config.seed,
    }
    n = write_pairs(gen_dataset(config), out, manifest)
    print(f"wrote {n} pairs to {out}")
    return 0


def _cmd_rewrite(args) -> int:
    rules = []
    for path in args.rules:
        rules.extend(load_rules(path))
    terms = [parse_term(line, TPTP) for line in _read_lines(Path(args.terms)) if line.strip()]
    mode = args.mode.replace("_", "-")
    groups = group_pairs(synth_pairs(rules, terms, mode=mode))
    out = Path(args.out)
    total = 0
    for name, pairs in sorted(groups.items()):
        directory = out if mode == "joint" else out / name
        manifest = {
            "rules": [r.name for r in rules] if mode == "joint" else [name],
            "mode": mode,
            "inputs": _input_digests(terms=Path(args.terms)),
        }
        total += write_pairs(pairs, directory, manifest)
    print(f"wrote {total} pairs across {len(groups)} dataset(s) to {out}")
    return 0


def _cmd_split(args) -> int:
    ratios = _parse_ratios(args.ratios)
    pairs = read_pairs(args.inp)
    try:
        dataset = split_pairs(pairs, ratios=ratios, seed=args.seed, source=str(args.inp))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    write_dataset(dataset, args.out)
    counts = dataset.manifest["counts"]
    print(f"split {len(pairs)} pairs into {counts['train']}/{counts['valid']}/{counts['test']} at {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    syntax: Syntax = SYNTAXES[args.syntax]
    pred = _read_lines(Path(args.pred))
    ref = _read_lines(Path(args.ref))
    src = _read_lines(Path(args.src))
    train_src = _read_lines(Path(args.train_src)) if args.train_src else None
    report = score_predictions(pred, ref, src, syntax, train_src=train_src)
    payload = report.to_dict()
    payload["inputs"] = _input_digests(
        pred=Path(args.pred),
        ref=Path(args.ref),
        src=Path(args.src),
        train_src=Path(args.train_src) if args.train_src else None,
    )
    _write_report(payload, format_eval_table(report), Path(args.report) if args.report else None)
    return 0


def _cmd_leakage(args) -> int:
    train = _read_lines(Path(args.train))
    test = _read_lines(Path(args.test))
    report = leakage_report(train, test, with_sign=args.sign)
    if args.levenshtein_sample:
        report.levenshtein = avg_min_levenshtein(
            test, train, sample_size=args.levenshtein_sample, seed=args.seed
        )
    payload = report.to_dict()
    payload["inputs"] = _input_digests(train=Path(args.train), test=Path(args.test))
    table = format_leakage_table([(Path(args.test).name, report)])
    _write_report(payload, table, Path(args.report) if args.report else None)
    return 0


def _cmd_info(args) -> int:
    print(f"rewritebench {__version__}")
    print("presets:")
    for name, config in PRESETS.items():
        fns = ", ".join(config.functions)
        consts = ", ".join(str(c) for c in config.constants)
        print(f"  {name}: functions {{{fns}}}, constants {{{consts}}}, {len(config.variables)} variable(s)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rewritebench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a polynomial normalization pair set")
    p.add_argument("--preset", help=f"one of: {', '.join(PRESETS)}")
    p.add_argument("--config", help="JSON generator config (overrides --preset)")
    p.add_argument("--count", type=int, help="number of examples")
    p.add_argument("--seed", type=int, help="rng seed")
    p.add_argument("--max-output-tokens", type=int, dest="max_output_tokens")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("rewrite", help="synthesize single-step rewrite pairs")
    p.add_argument("--rules", required=True, nargs="+", help="rule file(s), one 'lhs = rhs' per line")
    p.add_argument("--terms", required=True, help="term file, one term per line")
    p.add_argument("--mode", choices=["per-rule", "joint"], default="joint")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_rewrite)

    p = sub.add_parser("split", help="split a pair set into train/valid/test")
    p.add_argument("--in", dest="inp", required=True, help="directory with pairs.src/pairs.tgt")
    p.add_argument("--ratios", default=",".join(str(r) for r in DEFAULT_RATIOS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output dataset directory")
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("evaluate", help="score a prediction file")
    p.add_argument("--pred", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--src", required=True)
    p.add_argument("--train-src", dest="train_src", help="training sources for renamed-overlap filtering")
    p.add_argument("--syntax", choices=sorted(SYNTAXES), default="infix")
    p.add_argument("--report", help="write the JSON report here")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("leakage", help="masked train/test overlap analysis")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--sign", action="store_true", help="also mask minus signs")
    p.add_argument("--levenshtein-sample", type=int, dest="levenshtein_sample",
                   help="sample size for nearest-neighbour edit distances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="write the JSON report here")
    p.set_defaults(func=_cmd_leakage)

    p = sub.add_parser("info", help="show version and preset table")
    p.set_defaults(func=_cmd_info)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
