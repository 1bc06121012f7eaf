"""Batch command-line driver for the pipeline.

Subcommands: annotate-news, label-tweets, stats, topics, train, eval.
Exit codes: 0 success, 1 usage, 2 input validation, 3 referential
integrity. Every command is deterministic for a fixed config and seed;
outputs are canonically ordered (sorted by record id) and JSON is
emitted with sorted keys.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .annotate import (
    NewsCredibility,
    Stance,
    TweetLabel,
    fuse_source,
    label_tweet,
    load_ratings,
    rating_for_url,
)
from .baselines import (
    Dataset,
    evaluate,
    save_model,
    train_boost,
    train_logreg,
    train_tree,
)
from .config import MODEL_KINDS, PipelineConfig, load_config
from .corpus import (
    NewsArticle,
    TweetRecord,
    compute_stats,
    load_news,
    load_tweets,
    save_news,
    save_tweets,
    tweet_label_counts,
)
from .errors import (
    CredpipeError,
    ReferentialIntegrityError,
    ValidationError,
)
from .features import FEATURE_NAMES, classifier_vector
from .stance import StanceConfig, score_stance_text
from .textmetrics import tokenize
from .topics import build_report, fit_lda

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_REFERENTIAL = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the pipeline reserves 2 for data
    validation, so usage problems are remapped to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump_json(obj, pretty: bool) -> str:
    if pretty:
        return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _id_key(record_id: str):
    return (len(record_id), record_id)


def _load_labeled_news(path: str) -> list[NewsArticle]:
    articles = load_news(path)
    for art in articles:
        if art.label is None:
            raise ValidationError(
                "article is unlabeled; run annotate-news first",
                record=art.news_id, field="label",
            )
    return articles


# ---------------------------------------------------------------- annotate

def cmd_annotate_news(args, cfg: PipelineConfig) -> int:
    ratings_path = args.ratings or cfg.ratings_path
    if ratings_path is None:
        raise ValidationError("no ratings file given (flag --ratings or config paths.ratings)")
    ratings = load_ratings(ratings_path)
    articles = load_news(args.news)

    labeled: list[NewsArticle] = []
    excluded: list[NewsArticle] = []
    for art in articles:
        rating = rating_for_url(art.url, ratings)
        verdict = NewsCredibility.EXCLUDED if rating is None else fuse_source(rating)
        if verdict is NewsCredibility.EXCLUDED:
            excluded.append(_with_label(art, None))
        else:
            labeled.append(_with_label(art, verdict))

    labeled.sort(key=lambda a: _id_key(a.news_id))
    excluded.sort(key=lambda a: _id_key(a.news_id))
    save_news(args.out, labeled)
    excluded_path = args.excluded or f"{args.out}.excluded.jsonl"
    save_news(excluded_path, excluded)

    summary = {
        "reliable": sum(1 for a in labeled if a.label is NewsCredibility.RELIABLE),
        "unreliable": sum(1 for a in labeled if a.label is NewsCredibility.UNRELIABLE),
        "excluded": len(excluded),
    }
    sys.stdout.write(_dump_json(summary, args.pretty))
    return EXIT_OK


def _with_label(art: NewsArticle, label: NewsCredibility | None) -> NewsArticle:
    return NewsArticle(
        news_id=art.news_id, url=art.url, publisher=art.publisher,
        publish_date=art.publish_date, authors=art.authors, title=art.title,
        image_refs=art.image_refs, body_text=art.body_text, label=label,
    )


# ------------------------------------------------------------ label-tweets

_WORKER_NEWS: dict[str, tuple[str, int]] = {}
_WORKER_CFG: StanceConfig | None = None


def _stance_worker_init(news_map: dict[str, tuple[str, int]], cfg: StanceConfig) -> None:
    global _WORKER_NEWS, _WORKER_CFG
    _WORKER_NEWS = news_map
    _WORKER_CFG = cfg


def _score_one_tweet(item: tuple[str, str, str]) -> tuple:
    tweet_id, text, news_ref = item
    body, label_code = _WORKER_NEWS[news_ref]
    try:
        scores = score_stance_text(body, text, _WORKER_CFG)
        label = label_tweet(NewsCredibility.from_code(label_code), scores.stance)
    except CredpipeError as e:
        return ("error", tweet_id, str(e))
    return (
        "ok", tweet_id, scores.sim_hcf, scores.sim_text, scores.sim_avg,
        scores.stance.value, label.code,
    )


def cmd_label_tweets(args, cfg: PipelineConfig) -> int:
    news = _load_labeled_news(args.news)
    tweets = load_tweets(args.tweets, news)
    stance_cfg = cfg.stance_config()
    news_map = {a.news_id: (a.body_text, a.label.code) for a in news}

    items = [(t.tweet_id, t.text, t.news_ref) for t in tweets]
    if args.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(
            max_workers=args.jobs,
            initializer=_stance_worker_init,
            initargs=(news_map, stance_cfg),
        ) as pool:
            chunk = max(1, len(items) // (args.jobs * 4))
            results = list(pool.map(_score_one_tweet, items, chunksize=chunk))
    else:
        _stance_worker_init(news_map, stance_cfg)
        results = [_score_one_tweet(item) for item in items]

    failures = sorted((r for r in results if r[0] == "error"), key=lambda r: _id_key(r[1]))
    if failures:
        _, tweet_id, message = failures[0]
        raise ValidationError(message, record=tweet_id)

    by_id = {r[1]: r for r in results}
    tweet_by_id = {t.tweet_id: t for t in tweets}
    order = sorted(by_id, key=_id_key)

    labeled_tweets = []
    scores_rows = []
    for tid in order:
        _, _, sim_hcf, sim_text, sim_avg, stance_value, label_code = by_id[tid]
        src = tweet_by_id[tid]
        labeled_tweets.append(TweetRecord(
            tweet_id=src.tweet_id, text=src.text, news_ref=src.news_ref,
            stance=Stance.parse(stance_value), label=TweetLabel.from_code(label_code),
        ))
        scores_rows.append({
            "tweet_id": tid, "news_ref": src.news_ref,
            "sim_hcf": sim_hcf, "sim_text": sim_text, "sim_avg": sim_avg,
            "stance": stance_value, "label": label_code,
        })

    save_tweets(args.out, labeled_tweets)
    scores_path = args.scores or f"{args.out}.scores.jsonl"
    with open(scores_path, "w", encoding="utf-8") as f:
        for row in scores_rows:
            f.write(json.dumps(row, sort_keys=True, ensure_ascii=False, separators=(",", ":")))
            f.write("\n")

    counts: dict[int, int] = {}
    for t in labeled_tweets:
        counts[t.label.code] = counts.get(t.label.code, 0) + 1
    summary = {"labeled": len(labeled_tweets),
               "label_counts": {str(k): v for k, v in sorted(counts.items())}}
    sys.stdout.write(_dump_json(summary, args.pretty))
    return EXIT_OK


# ------------------------------------------------------------------- stats

def cmd_stats(args, cfg: PipelineConfig) -> int:
    news = _load_labeled_news(args.news)
    report: dict = {"news": compute_stats(news).to_json_dict()}
    if args.tweets:
        tweets = load_tweets(args.tweets, news)
        counts = tweet_label_counts(tweets)
        report["tweets"] = {
            "label_counts": {str(k): v for k, v in sorted(counts.items())},
            "total": sum(counts.values()),
        }
    _emit(_dump_json(report, args.pretty), args.out)
    return EXIT_OK


# ------------------------------------------------------------------ topics

def cmd_topics(args, cfg: PipelineConfig) -> int:
    news = load_news(args.news)
    news.sort(key=lambda a: _id_key(a.news_id))
    if not news:
        raise ValidationError("topic extraction needs a nonempty corpus")
    docs = [tokenize(a.body_text) for a in news]
    labels = None
    if all(a.label is not None for a in news):
        labels = [a.label.code for a in news]
    model = fit_lda(
        docs,
        k=cfg.lda_topics,
        alpha=cfg.lda_alpha,
        beta=cfg.lda_beta,
        iterations=cfg.lda_iterations,
        seed=cfg.seed,
        stop_words=cfg.stop_words(),
    )
    report = build_report(model, labels, n_words=cfg.lda_top_words)
    _emit(_dump_json(report, args.pretty), args.out)
    return EXIT_OK


# ------------------------------------------------------------- train / eval

def _feature_dataset(args, cfg: PipelineConfig) -> tuple[Dataset, list[str]]:
    """Build (features, labels) rows in canonical id order from either a
    labeled news corpus or a labeled tweet corpus."""
    tag_lexicon = cfg.tag_lexicon()
    affect = cfg.affect_lexicons()
    easy = cfg.easy_words()

    rows: list[tuple[str, str, int]] = []
    if args.news and not args.tweets:
        for art in _load_labeled_news(args.news):
            rows.append((art.news_id, art.body_text, art.label.code))
    elif args.tweets:
        news = _load_labeled_news(args.news) if args.news else None
        for tw in load_tweets(args.tweets, news):
            if tw.label is None:
                raise ValidationError("tweet is unlabeled; run label-tweets first",
                                      record=tw.tweet_id, field="label")
            rows.append((tw.tweet_id, tw.text, tw.label.code))
    else:
        raise ValidationError("need --news or --tweets input")

    rows.sort(key=lambda r: _id_key(r[0]))
    ids, xs, ys = [], [], []
    for rid, text, label in rows:
        t = tokenize(text)
        try:
            vec = classifier_vector(t, tag_lexicon, affect, easy, cfg.mtld_threshold)
        except CredpipeError as e:
            raise ValidationError(f"cannot featurize record: {e}", record=rid)
        ids.append(rid)
        xs.append(vec.values)
        ys.append(label)
    return Dataset(np.asarray(xs, dtype=float), np.asarray(ys, dtype=int)), ids


def _export_features(path: str, ids: list[str], d: Dataset) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(("record_id",) + FEATURE_NAMES + ("label",))
        for rid, row, label in zip(ids, d.x, d.y):
            writer.writerow([rid] + [repr(float(v)) for v in row] + [int(label)])


def _make_trainer(cfg: PipelineConfig):
    if cfg.model == "logreg":
        return lambda d: train_logreg(d, cfg.logreg_lr, cfg.logreg_epochs, cfg.logreg_l2)
    if cfg.model == "tree":
        return lambda d: train_tree(d, cfg.tree_max_depth, cfg.tree_min_leaf)
    return lambda d: train_boost(d, cfg.boost_rounds, cfg.boost_shrinkage, cfg.boost_depth)


def cmd_train(args, cfg: PipelineConfig) -> int:
    dataset, ids = _feature_dataset(args, cfg)
    if args.export_features:
        _export_features(args.export_features, ids, dataset)
    model = _make_trainer(cfg)(dataset)
    if args.out:
        save_model(args.out, model)
    train_acc = float(np.mean(model.predict(dataset.x) == dataset.y))
    summary = {
        "model": cfg.model,
        "samples": dataset.n,
        "classes": list(dataset.classes),
        "train_accuracy": train_acc,
    }
    sys.stdout.write(_dump_json(summary, args.pretty))
    return EXIT_OK


def cmd_eval(args, cfg: PipelineConfig) -> int:
    dataset, _ = _feature_dataset(args, cfg)
    report = evaluate(_make_trainer(cfg), dataset, folds=cfg.folds, seed=cfg.seed)
    _emit(_dump_json(report.to_json_dict(), args.pretty), args.out)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML config path (default: CREDPIPE_CONFIG env var)")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--pretty", action="store_true", help="indent JSON output")

    parser = _Parser(prog="credpipe", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("annotate-news", parents=[common],
                       help="label news articles from source ratings")
    p.add_argument("--news", required=True, help="input news JSONL")
    p.add_argument("--ratings", help="ratings CSV (overrides config)")
    p.add_argument("--out", required=True, help="labeled news JSONL output")
    p.add_argument("--excluded", help="sidecar JSONL for excluded articles "
                                      "(default: OUT.excluded.jsonl)")
    p.set_defaults(func=cmd_annotate_news)

    p = sub.add_parser("label-tweets", parents=[common],
                       help="score stances and label tweets against labeled news")
    p.add_argument("--news", required=True, help="labeled news JSONL")
    p.add_argument("--tweets", required=True, help="input tweets JSONL")
    p.add_argument("--out", required=True, help="labeled tweets JSONL output")
    p.add_argument("--scores", help="stance score JSONL (default: OUT.scores.jsonl)")
    p.add_argument("--jobs", type=_positive_int, default=1,
                   help="worker processes for stance scoring")
    p.set_defaults(func=cmd_label_tweets)

    p = sub.add_parser("stats", parents=[common], help="corpus statistics report")
    p.add_argument("--news", required=True, help="labeled news JSONL")
    p.add_argument("--tweets", help="labeled tweets JSONL (optional)")
    p.add_argument("--out", help="report path (default: stdout)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("topics", parents=[common], help="fit topics and report top words")
    p.add_argument("--news", required=True, help="news JSONL")
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--topics", type=_positive_int, dest="lda_topics", help="topic count")
    p.add_argument("--iterations", type=_positive_int, dest="lda_iterations",
                   help="Gibbs sweeps")
    p.add_argument("--alpha", type=float, dest="lda_alpha", help="document smoothing")
    p.add_argument("--beta", type=float, dest="lda_beta", help="topic-word smoothing")
    p.add_argument("--top-words", type=_positive_int, dest="lda_top_words",
                   help="words reported per topic")
    p.set_defaults(func=cmd_topics)

    for name, func in (("train", cmd_train), ("eval", cmd_eval)):
        p = sub.add_parser(name, parents=[common],
                           help=f"{name} a baseline on corpus features")
        p.add_argument("--news", help="labeled news JSONL")
        p.add_argument("--tweets", help="labeled tweets JSONL")
        p.add_argument("--model", choices=MODEL_KINDS, help="baseline kind")
        if name == "train":
            p.add_argument("--out", help="model JSON path")
            p.add_argument("--export-features",
                           help="write the feature matrix as CSV (record_id, 48 features, label)")
        else:
            p.add_argument("--out", help="report path (default: stdout)")
            p.add_argument("--folds", type=_positive_int, help="cross-validation folds")
        p.set_defaults(func=func)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        for name in ("model", "folds", "lda_topics", "lda_iterations",
                     "lda_alpha", "lda_beta", "lda_top_words"):
            if getattr(args, name, None) is not None:
                overrides[name] = getattr(args, name)
        cfg = cfg.with_overrides(**overrides)
        return args.func(args, cfg)
    except ReferentialIntegrityError as e:
        detail = f" (orphan ids: {', '.join(e.orphans)})" if e.orphans else ""
        print(f"credpipe: error: {e}{detail}", file=sys.stderr)
        return EXIT_REFERENTIAL
    except CredpipeError as e:
        print(f"credpipe: error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as e:
        print(f"credpipe: error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
