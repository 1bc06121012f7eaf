"""Command line: features or corpus in, metrics JSON out."""
from __future__ import annotations

import argparse
import json
import sys

from . import io
from .embed import HashingEncoder, embed_all
from .errors import DataError, SetupError, TrainingError
from .model import ModelConfig
from .preprocess import preprocess
from .train import classification_report, standardize, train_toy


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="newsattn",
        description="Train a toy attention or LSTM classifier and report "
                    "training-set metrics.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="fit one model on a feature CSV or news JSONL")
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument("--features",
                        help="feature CSV (record_id,<features>,label); "
                             "columns are standardized before training")
    source.add_argument("--news", help="labeled news JSONL; bodies are embedded first")
    run.add_argument("--arch", choices=["attention", "lstm"], default="attention")
    run.add_argument("--layers", type=int, default=2, help="attention layers")
    run.add_argument("--heads", type=int, default=4)
    run.add_argument("--hidden", type=int, default=64)
    run.add_argument("--lr", type=float, default=0.1)
    run.add_argument("--steps", type=int, default=200)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", help="write the metrics JSON here instead of stdout")
    return parser


def cmd_run(args) -> int:
    if args.features:
        table = io.load_feature_csv(args.features)
        features, labels = standardize(table.features), table.labels
        source = "features"
    else:
        docs = io.load_labeled_news(args.news)
        articles = [preprocess(doc.body_text) for doc in docs]
        features = embed_all(articles, HashingEncoder())
        labels = tuple(doc.label for doc in docs)
        source = "embedding"
    cfg = ModelConfig(mha_layers=args.layers, heads=args.heads,
                      hidden_dim=args.hidden, lr=args.lr,
                      steps=args.steps, seed=args.seed)
    result = train_toy(features, labels, cfg, architecture=args.arch)
    report = classification_report(labels, result.predictions,
                                   method=f"{source}+{args.arch}")
    if args.out:
        io.write_report(args.out, report)
    else:
        print(json.dumps(report, indent=2))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return cmd_run(args)
    except (DataError, SetupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TrainingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
