"""CLI: train a model on a dataset directory, then emit predictions."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .trainer import DatasetError, TrainerConfig, predict, train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="baseline-trainer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train on a train/valid/test dataset directory")
    p.add_argument("--data", required=True, help="dataset directory")
    p.add_argument("--out", required=True, help="artifact output directory")
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stop-at-valid-exact", type=float, default=1.0,
                   help="early-exit threshold on validation exact match (1.0 = run all steps)")

    q = sub.add_parser("predict", help="greedy-decode a source file with a trained model")
    q.add_argument("--model", required=True, help="artifact directory from train")
    q.add_argument("--src", required=True, help="source token file")
    q.add_argument("--out", default=None, help="output file (default: predictions.txt next to model)")

    return parser


def run(argv: list[str]) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            config = TrainerConfig(
                data_dir=args.data,
                out_dir=args.out,
                steps=args.steps,
                batch_size=args.batch_size,
                seed=args.seed,
                stop_at_valid_exact=args.stop_at_valid_exact,
            )
            artifact = train(config)
            print(f"model written to {artifact}")
        else:
            out = Path(args.out) if args.out else Path(args.model) / "predictions.txt"
            lines = predict(args.model, args.src, out)
            print(f"wrote {len(lines)} predictions to {out}")
        return 0
    except (DatasetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
