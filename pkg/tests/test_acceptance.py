"""Acceptance suite: one test per shipping criterion, each checked at its
stated tolerance. `pytest -v tests/test_acceptance.py` prints one
pass/fail line per criterion.

Covered criteria, in order:
  C1 text metrics match frozen independent oracles to 1e-9, under 1 s
  C2 stance pipeline: summary tweet supports, orthogonal/disjoint pair
     refutes, 1000-value threshold partition with boundaries owned by NEI
  C3 annotation truth tables: 6 levels x 6 chart scores, 2x3 tweet table
  C4 corpus statistics reproduce the reference corpus shape exactly and
     agree with an independent one-pass recount
  C5 topic model: seeded byte-identical reports, rows sum to 1 +- 1e-9,
     3-topic recovery with top-10 words >= 80% pure, under 60 s
  C6 baselines: >= 0.95 five-fold accuracy on separable 48-dim blobs for
     all three trainers, XOR memorized by tree and boosting, exact F
  C7 every CLI command byte-identical across reruns; the whole pipeline
     imports without any neural/tensor dependency present
"""

import itertools
import json
import math
import re
import statistics
import subprocess
import sys
import time
from collections import Counter

import numpy as np
import pytest

from metric_fixture import EASY_WORDS, METRIC_FIXTURE, MTLD_STREAM_ORACLE, stream_tokens

from credpipe.annotate import (
    MbfcLevel,
    NewsCredibility,
    SourceRating,
    Stance,
    TweetLabel,
    fuse_source,
    label_tweet,
)
from credpipe.baselines import (
    Dataset,
    binary_metrics,
    evaluate,
    train_boost,
    train_logreg,
    train_tree,
)
from credpipe.cli import main as cli_main
from credpipe.corpus import (
    NewsArticle,
    TweetRecord,
    compute_stats,
    load_news,
    load_tweets,
    save_news,
    save_tweets,
    tweet_label_counts,
)
from credpipe.stance import (
    StanceConfig,
    bow_pair,
    cosine,
    decide_stance,
    score_stance_text,
    summarize,
)
from credpipe.textmetrics import (
    lexical_diversity,
    readability,
    tokenize,
    vocabulary_richness,
)
from credpipe.topics import build_report, fit_lda, top_words

TOL = 1e-9


# ------------------------------------------------------------ C1: metrics

def test_c1_text_metrics_match_frozen_oracles():
    start = time.perf_counter()

    for case in METRIC_FIXTURE:
        t = tokenize(case["text"])
        assert t.sentence_count == case["sentence_count"]
        assert t.word_count == case["word_count"]
        assert t.char_count == case["char_count"]
        assert t.syllable_count == case["syllable_count"]

        ld = lexical_diversity(t)
        rd = readability(t, EASY_WORDS)
        vr = vocabulary_richness(t)
        got = {
            "ttr": ld.ttr, "rttr": ld.rttr, "cttr": ld.cttr, "mtld": ld.mtld,
            "ari": rd.ari, "fkg": rd.fkg, "fre": rd.fre, "dcr": rd.dcr,
            "honore_hs": vr.honore_hs, "sichel": vr.sichel, "brunet_w": vr.brunet_w,
        }
        for name, value in got.items():
            assert abs(value - case[name]) <= TOL, (case["text"], name)

    for i, expected in enumerate(MTLD_STREAM_ORACLE):
        tokens = tuple(stream_tokens(i))
        sentences = (tokens,)
        t = tokenize(" ".join(tokens) + ".")
        assert t.tokens == tokens and t.sentences == sentences
        assert abs(lexical_diversity(t).mtld - expected) <= TOL, f"stream {i}"

    assert time.perf_counter() - start < 1.0


# ------------------------------------------------------------- C2: stance

def test_c2_stance_support_refute_and_threshold_partition():
    # a tweet that is exactly the article summary must Support it
    body = ("The reservoir fell to a record low in August. Water managers "
            "warned that supplies may tighten. Households cut lawn watering.")
    summary = summarize(tokenize(body), 280, frozenset())
    tweet = ". ".join(" ".join(sent) for sent in summary.sentences) + "."
    scores = score_stance_text(body, tweet, StanceConfig(stop_words=frozenset()))
    assert scores.sim_text == pytest.approx(1.0)
    assert scores.stance is Stance.SUPPORT

    # same claim when the summary truncates a longer article and the
    # handcrafted channel is computed on the summary
    long_body = body + (" A bake sale happened downtown. Someone painted a "
                        "fence near the park. A cat show drew a modest crowd. "
                        "Several unrelated gatherings took place across town.")
    cfg = StanceConfig(summary_budget=120, hcf_on_summary=True,
                       stop_words=frozenset())
    short = summarize(tokenize(long_body), 120, frozenset())
    assert len(short.tokens) < len(tokenize(long_body).tokens)
    tweet2 = ". ".join(" ".join(sent) for sent in short.sentences) + "."
    scores2 = score_stance_text(long_body, tweet2, cfg)
    assert scores2.sim_hcf == pytest.approx(1.0)
    assert scores2.sim_text == pytest.approx(1.0)
    assert scores2.stance is Stance.SUPPORT

    # disjoint vocabulary and orthogonal handcrafted vectors must Refute
    hcf_a = (1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0)
    hcf_b = (0.0, 2.0, 0.0, 2.0, 0.0, 2.0, 0.0, 2.0)
    sim_hcf = cosine(hcf_a, hcf_b)
    assert sim_hcf == 0.0
    left, right = bow_pair(["alpha", "beta"], ["gamma", "delta"], frozenset())
    sim_text = cosine(left.counts, right.counts)
    assert sim_text == 0.0
    sim_avg = (sim_hcf + sim_text) / 2.0
    assert decide_stance(sim_avg) is Stance.REFUTE

    # 1000 synthetic averages partition exactly; boundaries belong to NEI
    values = [i / 1000 for i in range(1000)]
    decisions = [decide_stance(v) for v in values]
    assert decisions.count(Stance.REFUTE) == 400
    assert decisions.count(Stance.NOT_ENOUGH_INFO) == 201
    assert decisions.count(Stance.SUPPORT) == 399
    for v, got in zip(values, decisions):
        if v < 0.4:
            assert got is Stance.REFUTE
        elif v > 0.6:
            assert got is Stance.SUPPORT
        else:
            assert got is Stance.NOT_ENOUGH_INFO
    assert decide_stance(0.4) is Stance.NOT_ENOUGH_INFO
    assert decide_stance(0.6) is Stance.NOT_ENOUGH_INFO


# ---------------------------------------------------- C3: labeling tables

def test_c3_annotation_truth_tables():
    r, u, x = NewsCredibility.RELIABLE, NewsCredibility.UNRELIABLE, NewsCredibility.EXCLUDED

    # expected fusion outcome for every level at both rule boundaries
    outcomes = {
        MbfcLevel.VERY_HIGH: {0: x, 23: x, 24: x, 42: x, 43: r, 64: r},
        MbfcLevel.HIGH: {0: x, 23: x, 24: x, 42: x, 43: r, 64: r},
        MbfcLevel.MOST_FACTUAL: {0: x, 23: x, 24: x, 42: x, 43: x, 64: x},
        MbfcLevel.MIXED: {0: x, 23: x, 24: x, 42: x, 43: x, 64: x},
        MbfcLevel.LOW: {0: u, 23: u, 24: x, 42: x, 43: x, 64: x},
        MbfcLevel.VERY_LOW: {0: u, 23: u, 24: x, 42: x, 43: x, 64: x},
    }
    checked = 0
    for level, by_score in outcomes.items():
        for score, expected in by_score.items():
            got = fuse_source(SourceRating("d.com", level, float(score)))
            assert got is expected, (level, score)
            checked += 1
    assert checked == 36

    table = {
        (r, Stance.SUPPORT): TweetLabel.RELIABLE,
        (u, Stance.REFUTE): TweetLabel.RELIABLE,
        (r, Stance.NOT_ENOUGH_INFO): TweetLabel.INCONCLUSIVE,
        (u, Stance.NOT_ENOUGH_INFO): TweetLabel.INCONCLUSIVE,
        (r, Stance.REFUTE): TweetLabel.UNRELIABLE,
        (u, Stance.SUPPORT): TweetLabel.UNRELIABLE,
    }
    for news, stance in itertools.product((r, u), Stance):
        assert label_tweet(news, stance) is table[(news, stance)]


# -------------------------------------------------------- C4: corpus shape

NEWS_SHAPE = {0: 958, 1: 1635}
TWEET_SHAPE = {0: 3092, 1: 17234, 2: 3858}
_WORD = re.compile(r"(?:[^\W_]|')+")


def _reference_corpus(tmp_path):
    import random

    rng = random.Random(2024)
    news = []
    for label, count in sorted(NEWS_SHAPE.items()):
        for i in range(count):
            nid = f"n{label}_{i:05d}"
            n_words = rng.randint(20, 90)
            body = " ".join(f"word{rng.randrange(400)}" for _ in range(n_words)) + "."
            news.append(NewsArticle(
                news_id=nid,
                url=f"https://pub{label}.example/{i}",
                publisher=f"pub{label}.example",
                publish_date=f"2020-0{1 + label}-{1 + i % 28:02d}",
                authors=tuple(f"author{j}" for j in range(i % 4)),
                title=f"title {nid}",
                image_refs=(),
                body_text=body,
                label=NewsCredibility.from_code(label),
            ))
    news_ids = [a.news_id for a in news]

    tweets = []
    tid = 0
    for label, count in sorted(TWEET_SHAPE.items()):
        for _ in range(count):
            tweets.append(TweetRecord(
                tweet_id=str(10_000_000 + tid),
                text=f"tweet number {tid} talking about things.",
                news_ref=news_ids[tid % len(news_ids)],
                stance=Stance.NOT_ENOUGH_INFO,
                label=TweetLabel.from_code(label),
            ))
            tid += 1

    news_path = tmp_path / "news.jsonl"
    tweets_path = tmp_path / "tweets.jsonl"
    save_news(news_path, news)
    save_tweets(tweets_path, tweets)
    return news_path, tweets_path


def test_c4_corpus_statistics_match_reference_shape(tmp_path):
    news_path, tweets_path = _reference_corpus(tmp_path)

    news = load_news(news_path)
    tweets = load_tweets(tweets_path, news)
    stats = compute_stats(news)

    assert stats.label_counts == NEWS_SHAPE
    assert stats.total == 2593
    counts = tweet_label_counts(tweets)
    assert counts == TWEET_SHAPE
    assert sum(counts.values()) == 24184

    # independent one-pass recount straight off the saved records
    recount: dict[int, list[int]] = {}
    with open(news_path, encoding="utf-8") as f:
        for line in f:
            rec = json.loads(line)
            words = [w for w in _WORD.findall(rec["body_text"].lower())
                     if any(c.isalnum() for c in w)]
            recount.setdefault(rec["label"], []).append(len(words))

    for label, values in recount.items():
        got = stats.word_counts[label]
        assert got.mean == sum(values) / len(values)
        assert got.median == sorted(values)[(len(values) - 1) // 2]
        tally = Counter(values)
        top = max(tally.values())
        assert got.mode == min(v for v, c in tally.items() if c == top)
        assert got.median == statistics.median_low(values)


# -------------------------------------------------------------- C5: topics

def test_c5_topic_model_determinism_and_recovery():
    import random

    groups = [
        ["river", "water", "flood", "rain", "dam", "levee",
         "basin", "creek", "tide", "storm", "drain", "bank"],
        ["vote", "ballot", "poll", "senate", "law", "bill",
         "party", "mayor", "county", "seat", "debate", "term"],
        ["genome", "cell", "protein", "virus", "lab", "assay",
         "enzyme", "tissue", "strain", "dose", "trial", "gene"],
    ]
    rng = random.Random(17)
    docs, truth = [], []
    for di in range(300):
        g = di % 3
        words = [rng.choice(groups[g]) for _ in range(30)]
        docs.append(tokenize(" ".join(words) + "."))
        truth.append(g)

    start = time.perf_counter()
    fit = lambda: fit_lda(docs, k=3, iterations=150, seed=11, stop_words=frozenset())
    m1 = fit()
    m2 = fit()
    reports = [
        json.dumps(build_report(m, truth), sort_keys=True, separators=(",", ":"))
        for m in (m1, m2)
    ]
    assert reports[0] == reports[1]

    for row in m1.phi:
        assert abs(sum(row) - 1.0) <= TOL
    for row in m1.theta:
        assert abs(sum(row) - 1.0) <= TOL

    vocab_sets = [set(g) for g in groups]
    for t in range(3):
        top10 = top_words(m1, t, 10)
        purity = max(sum(1 for w in top10 if w in vs) for vs in vocab_sets)
        assert purity >= 8, (t, top10)

    assert time.perf_counter() - start < 60.0


# ----------------------------------------------------------- C6: baselines

def test_c6_baseline_accuracy_and_metric_identities():
    rng = np.random.default_rng(0)
    x = np.vstack([
        rng.normal(0.0, 1.0, size=(500, 48)),
        rng.normal(3.0, 1.0, size=(500, 48)),
    ])
    y = np.concatenate([np.zeros(500, dtype=int), np.ones(500, dtype=int)])
    blobs = Dataset(x, y)

    for trainer in (train_logreg, train_tree, train_boost):
        report = evaluate(trainer, blobs, folds=5, seed=0)
        assert report.accuracy >= 0.95, trainer.__name__

    xor = Dataset(
        np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]),
        np.array([0, 1, 1, 0]),
    )
    tree = train_tree(xor, max_depth=2)
    assert float(np.mean(tree.predict(xor.x) == xor.y)) == 1.0
    boost = train_boost(xor, n_rounds=30, depth=2)
    assert float(np.mean(boost.predict(xor.x) == xor.y)) == 1.0

    # F = 2PR/(P+R) holds exactly over a grid of confusion counts
    for tp, fp, fn in itertools.product(range(5), repeat=3):
        y_true = np.array([1] * tp + [0] * fp + [1] * fn + [0])
        y_pred = np.array([1] * tp + [1] * fp + [0] * fn + [0])
        m = binary_metrics(y_true, y_pred, positive=1)
        p, r = m["precision"], m["recall"]
        expected = 2 * p * r / (p + r) if p + r else 0.0
        assert m["f_score"] == expected


# ------------------------------------------------- C7: CLI determinism

RATINGS_CSV = """domain,mbfc_level,chart_score
reliable.org,high,60
junk.net,very_low,5
dull.com,mixed,30
"""

N1_BODY = ("The reservoir fell to a record low level this August. "
           "Water managers warned that supplies may tighten before winter. "
           "Households were asked to cut lawn watering.")
N2_BODY = ("Secret ballots were destroyed by a shadow committee last night. "
           "The committee denies everything. Voters remain uneasy about the claims.")

TRAIN_TEXTS = [
    "The river crested early and flooded the lower meadows completely.",
    "Officials counted votes late into the night without any pause.",
    "A small bakery opened beside the train station last weekend.",
    "Researchers sequenced the virus sample within a single afternoon.",
    "The council approved a modest budget for road repairs.",
    "Farmers reported an unusually dry spring across the valley.",
    "The museum extended its evening hours for the summer exhibit.",
    "Engineers reinforced the old bridge before the heavy rains arrived.",
    "A local choir performed in the park despite the cold wind.",
    "The library digitized its oldest maps for public viewing.",
    "Fishing crews returned with the largest catch of the year.",
    "Students planted three hundred saplings along the school fence.",
]


def _write_inputs(root):
    (root / "ratings.csv").write_text(RATINGS_CSV, encoding="utf-8")

    def news_rec(news_id, url, publisher, body):
        return {"news_id": news_id, "url": url, "publisher": publisher,
                "publish_date": "2024-05-01", "authors": ["A. Writer"],
                "title": f"Story {news_id}", "image_refs": [],
                "body_text": body, "label": None}

    rows = [
        news_rec("n1", "https://reliable.org/a", "reliable.org", N1_BODY),
        news_rec("n2", "https://www.junk.net/b", "junk.net", N2_BODY),
        news_rec("n3", "https://dull.com/d", "dull.com", "Nothing notable happened today."),
    ]
    (root / "news.jsonl").write_text(
        "".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")

    tweets = [
        {"tweet_id": "9", "text": N1_BODY, "news_ref": "n1",
         "stance": None, "label": None},
        {"tweet_id": "10", "text": "Totally unrelated chatter about pets.",
         "news_ref": "n2", "stance": None, "label": None},
    ]
    (root / "tweets.jsonl").write_text(
        "".join(json.dumps(r) + "\n" for r in tweets), encoding="utf-8")

    train = [
        {"tweet_id": str(100 + i), "text": TRAIN_TEXTS[i], "news_ref": "n1",
         "stance": "support", "label": i % 3}
        for i in range(12)
    ]
    (root / "train_tweets.jsonl").write_text(
        "".join(json.dumps(r) + "\n" for r in train), encoding="utf-8")


def _run_pipeline(root, inputs, capsys) -> dict[str, bytes]:
    """Run every subcommand into `root`, returning {artifact: bytes}."""
    labeled = root / "labeled.jsonl"
    tweets_out = root / "tweets_labeled.jsonl"
    stats_out = root / "stats.json"
    topics_out = root / "topics.json"
    features_out = root / "features.csv"
    model_out = root / "model.json"
    eval_out = root / "eval.json"

    stdouts = []
    commands = [
        ["annotate-news", "--news", inputs / "news.jsonl",
         "--ratings", inputs / "ratings.csv", "--out", labeled],
        ["label-tweets", "--news", labeled, "--tweets", inputs / "tweets.jsonl",
         "--out", tweets_out],
        ["stats", "--news", labeled, "--tweets", tweets_out, "--out", stats_out],
        ["topics", "--news", labeled, "--topics", "2", "--iterations", "30",
         "--seed", "1", "--out", topics_out],
        ["train", "--tweets", inputs / "train_tweets.jsonl", "--model", "tree",
         "--out", model_out, "--export-features", features_out],
        ["eval", "--tweets", inputs / "train_tweets.jsonl", "--model", "tree",
         "--folds", "3", "--seed", "0", "--out", eval_out],
    ]
    for argv in commands:
        code = cli_main([str(a) for a in argv])
        out = capsys.readouterr()
        assert code == 0, (argv[0], out.err)
        stdouts.append(out.out)

    artifacts = {
        "stdout": "\n".join(stdouts).encode(),
        "labeled": labeled.read_bytes(),
        "excluded": (root / "labeled.jsonl.excluded.jsonl").read_bytes(),
        "tweets": tweets_out.read_bytes(),
        "scores": (root / "tweets_labeled.jsonl.scores.jsonl").read_bytes(),
        "stats": stats_out.read_bytes(),
        "topics": topics_out.read_bytes(),
        "features": features_out.read_bytes(),
        "model": model_out.read_bytes(),
        "eval": eval_out.read_bytes(),
    }
    return artifacts


def test_c7_cli_byte_determinism_and_standalone_import(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("CREDPIPE_CONFIG", raising=False)
    inputs = tmp_path / "inputs"
    inputs.mkdir()
    _write_inputs(inputs)

    run_a = tmp_path / "run_a"
    run_b = tmp_path / "run_b"
    run_a.mkdir()
    run_b.mkdir()
    artifacts_a = _run_pipeline(run_a, inputs, capsys)
    artifacts_b = _run_pipeline(run_b, inputs, capsys)

    assert set(artifacts_a) == set(artifacts_b)
    for name in artifacts_a:
        assert artifacts_a[name] == artifacts_b[name], name

    # the whole pipeline must import and run without any tensor stack
    check = (
        "import sys\n"
        "import credpipe, credpipe.annotate, credpipe.baselines, credpipe.cli, "
        "credpipe.config, credpipe.corpus, credpipe.errors, credpipe.features, "
        "credpipe.resources, credpipe.stance, credpipe.textmetrics, credpipe.topics\n"
        "assert 'torch' not in sys.modules, 'tensor stack leaked into imports'\n"
        "print('standalone-ok')\n"
    )
    proc = subprocess.run([sys.executable, "-c", check],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "standalone-ok"
