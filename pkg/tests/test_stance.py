"""Tests for the stance scoring pipeline: cosine, summarizer, bag-of-words
vectors, and threshold decisions."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credpipe.annotate import Stance
from credpipe.corpus import NewsArticle, TweetRecord
from credpipe.errors import DegenerateTextError, DimensionMismatchError, ValidationError
from credpipe.stance import (
    BowVector,
    StanceConfig,
    StanceThresholds,
    Summary,
    bow_pair,
    cosine,
    decide_stance,
    detect_stance,
    score_stance_text,
    summarize,
)
from credpipe.textmetrics import tokenize

NO_STOPS = frozenset()


class TestCosine:
    def test_identical_vectors(self):
        assert cosine([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == pytest.approx(1.0)

    def test_orthogonal_vectors(self):
        assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_opposite_vectors(self):
        assert cosine([1.0, -2.0], [-1.0, 2.0]) == pytest.approx(-1.0)

    def test_zero_vector_gives_zero(self):
        assert cosine([0.0, 0.0], [1.0, 2.0]) == 0.0
        assert cosine([3.0, 4.0], [0.0, 0.0]) == 0.0

    def test_length_mismatch_raises(self):
        with pytest.raises(DimensionMismatchError):
            cosine([1.0], [1.0, 2.0])

    def test_empty_raises(self):
        with pytest.raises(DimensionMismatchError):
            cosine([], [])

    def test_known_value(self):
        # (1,1) vs (1,0): dot 1, norms sqrt(2) and 1
        assert cosine([1.0, 1.0], [1.0, 0.0]) == pytest.approx(1 / math.sqrt(2))

    @given(
        st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=8),
        st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=8),
    )
    def test_bounded_and_symmetric(self, a, b):
        n = min(len(a), len(b))
        a, b = a[:n], b[:n]
        s = cosine(a, b)
        assert -1.0 - 1e-9 <= s <= 1.0 + 1e-9
        assert cosine(b, a) == pytest.approx(s, abs=1e-12)

    @given(
        st.lists(st.floats(-100, 100), min_size=2, max_size=6),
        st.floats(0.1, 50.0),
    )
    def test_scale_invariance(self, a, factor):
        b = [x + 1.0 for x in a]
        scaled = [x * factor for x in a]
        assert cosine(scaled, b) == pytest.approx(cosine(a, b), abs=1e-9)


class TestSummary:
    def test_empty_summary_length(self):
        s = Summary(sentences=(), char_budget=280)
        assert s.tokens == ()
        assert s.char_length == 0

    def test_char_length_counts_joining_spaces(self):
        s = Summary(sentences=(("cat", "sat"), ("mat",)), char_budget=280)
        # "cat sat mat" when joined by single spaces
        assert s.char_length == len("cat sat mat")
        assert s.tokens == ("cat", "sat", "mat")


class TestSummarize:
    def test_single_sentence_within_budget(self):
        text = tokenize("The cat sat on the mat.")
        s = summarize(text, 280, NO_STOPS)
        assert s.sentences == text.sentences

    def test_budget_must_be_positive(self):
        text = tokenize("Words here.")
        with pytest.raises(ValidationError):
            summarize(text, 0, NO_STOPS)

    def test_empty_text_raises(self):
        with pytest.raises(DegenerateTextError):
            summarize(tokenize(""), 280, NO_STOPS)

    def test_frequent_tokens_win(self):
        # "cat" appears four times so the all-cat sentence ranks first
        text = tokenize("Cat cat cat. Cat dog dog horse horse kite lamp pond moss. Dog pig.")
        s = summarize(text, len("cat cat cat"), NO_STOPS)
        assert s.sentences == (("cat", "cat", "cat"),)

    def test_tie_broken_by_earlier_position(self):
        # both sentences score identically; budget fits exactly one
        text = tokenize("Alpha beta. Alpha beta.")
        s = summarize(text, len("alpha beta"), NO_STOPS)
        assert s.sentences == (("alpha", "beta"),)
        assert s.char_length == len("alpha beta")

    def test_selection_stops_at_first_overflow(self):
        # ranked order: cat-sentence (4.0), long sentence (2.0), dog-pig (2.0).
        # With budget 20 the long sentence overflows; the loop stops there even
        # though "dog pig" would still have fit.
        text = tokenize("Cat cat cat. Cat dog dog horse horse kite lamp pond moss. Dog pig.")
        s = summarize(text, 20, NO_STOPS)
        assert s.sentences == (("cat", "cat", "cat"),)

    def test_oversized_best_sentence_kept_alone(self):
        text = tokenize(
            "Gargantuan sesquipedalian interminable circumlocution galore galore galore galore. Tiny."
        )
        s = summarize(text, 10, NO_STOPS)
        assert len(s.sentences) == 1
        assert s.sentences[0][0] == "gargantuan"
        assert s.char_length > 10

    def test_output_in_article_order(self):
        # third sentence outranks the second; both fit, order must follow the text
        text = tokenize("Apple pear. Plum kiwi quince fig date melon grape lime peach berry. Apple pear.")
        s = summarize(text, len("apple pear apple pear") + 5, NO_STOPS)
        assert s.sentences == (("apple", "pear"), ("apple", "pear"))

    def test_stop_words_drag_score_down(self):
        # stops score zero in the numerator but still widen the denominator,
        # so the shorter all-content sentence wins the single slot
        text = tokenize("Cat the the. Cat.")
        s = summarize(text, 3, frozenset({"the"}))
        assert s.sentences == (("cat",),)

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_budget_respected_or_single_sentence(self, data):
        words = ["red", "blue", "green", "gold", "teal", "plum"]
        n_sents = data.draw(st.integers(1, 5))
        sents = []
        for _ in range(n_sents):
            toks = data.draw(st.lists(st.sampled_from(words), min_size=1, max_size=6))
            sents.append(" ".join(toks).capitalize() + ".")
        text = tokenize(" ".join(sents))
        budget = data.draw(st.integers(1, 60))
        s = summarize(text, budget, NO_STOPS)
        assert len(s.sentences) >= 1
        if len(s.sentences) > 1 or s.char_length <= budget:
            assert s.char_length <= budget
        # selected sentences form an in-order subsequence of the article
        it = iter(text.sentences)
        assert all(any(sent == cand for cand in it) for sent in s.sentences)


class TestBowPair:
    def test_worked_example(self):
        left, right = bow_pair(["cat", "cat", "dog"], ["dog"], NO_STOPS)
        assert left.vocabulary == ("cat", "dog")
        assert right.vocabulary == ("cat", "dog")
        assert left.counts == (2, 1)
        assert right.counts == (0, 1)

    def test_as_dict(self):
        left, _ = bow_pair(["b", "a", "b"], ["a"], NO_STOPS)
        assert left.as_dict() == {"a": 1, "b": 2}

    def test_vocabulary_sorted(self):
        left, right = bow_pair(["zebra", "apple"], ["mango"], NO_STOPS)
        assert left.vocabulary == ("apple", "mango", "zebra")
        assert left.vocabulary == right.vocabulary

    def test_stop_words_removed_from_both_sides(self):
        left, right = bow_pair(["the", "cat"], ["the", "the", "dog"], frozenset({"the"}))
        assert left.vocabulary == ("cat", "dog")
        assert left.counts == (1, 0)
        assert right.counts == (0, 1)

    def test_all_stop_words_raises(self):
        with pytest.raises(DegenerateTextError):
            bow_pair(["the", "a"], ["a"], frozenset({"the", "a"}))

    def test_identical_sides_have_cosine_one(self):
        left, right = bow_pair(["cat", "dog"], ["dog", "cat"], NO_STOPS)
        assert cosine(left.counts, right.counts) == pytest.approx(1.0)

    @given(
        st.lists(st.sampled_from(["u", "v", "w", "x"]), min_size=1, max_size=8),
        st.lists(st.sampled_from(["w", "x", "y", "z"]), min_size=1, max_size=8),
    )
    def test_counts_are_exact_multiset_counts(self, a, b):
        left, right = bow_pair(a, b, NO_STOPS)
        assert left.vocabulary == tuple(sorted(set(a) | set(b)))
        for vec, toks in ((left, a), (right, b)):
            for word, count in vec.as_dict().items():
                assert count == toks.count(word)
        assert sum(left.counts) == len(a)
        assert sum(right.counts) == len(b)


class TestDecideStance:
    def test_default_partition(self):
        assert decide_stance(0.39) is Stance.REFUTE
        assert decide_stance(0.0) is Stance.REFUTE
        assert decide_stance(0.4) is Stance.NOT_ENOUGH_INFO
        assert decide_stance(0.5) is Stance.NOT_ENOUGH_INFO
        assert decide_stance(0.6) is Stance.NOT_ENOUGH_INFO
        assert decide_stance(0.61) is Stance.SUPPORT
        assert decide_stance(1.0) is Stance.SUPPORT

    def test_custom_thresholds(self):
        t = StanceThresholds(refute_upper=0.2, support_lower=0.8)
        assert decide_stance(0.3, t) is Stance.NOT_ENOUGH_INFO
        assert decide_stance(0.1, t) is Stance.REFUTE
        assert decide_stance(0.9, t) is Stance.SUPPORT

    def test_invalid_thresholds(self):
        with pytest.raises(ValidationError):
            StanceThresholds(refute_upper=0.7, support_lower=0.6)
        with pytest.raises(ValidationError):
            StanceThresholds(refute_upper=-0.1, support_lower=0.5)
        with pytest.raises(ValidationError):
            StanceThresholds(refute_upper=0.4, support_lower=1.2)

    @given(st.floats(0.0, 1.0))
    def test_every_value_gets_exactly_one_label(self, v):
        got = decide_stance(v)
        if v < 0.4:
            assert got is Stance.REFUTE
        elif v > 0.6:
            assert got is Stance.SUPPORT
        else:
            assert got is Stance.NOT_ENOUGH_INFO


class TestScoreStance:
    def test_tweet_quoting_article_supports(self):
        body = (
            "The reservoir level dropped sharply this summer. Officials warn that "
            "the reservoir may not refill before spring. Households face new limits."
        )
        tweet = "Officials warn that the reservoir may not refill before spring."
        scores = score_stance_text(body, tweet)
        assert scores.stance is Stance.SUPPORT
        assert scores.sim_text > 0.6

    def test_average_is_mean_of_channels(self):
        scores = score_stance_text(
            "Rain fell on the hills for days. Rivers rose quickly after that.",
            "Rivers rose quickly after heavy rain.",
        )
        assert scores.sim_avg == pytest.approx((scores.sim_hcf + scores.sim_text) / 2.0)
        assert -1.0 <= scores.sim_hcf <= 1.0
        assert -1.0 <= scores.sim_text <= 1.0

    def test_stop_word_only_tweet_raises(self):
        with pytest.raises(DegenerateTextError):
            score_stance_text(
                "The the the. Of of of.",
                "The of and to.",
            )

    def test_empty_article_raises(self):
        with pytest.raises(DegenerateTextError):
            score_stance_text("", "A perfectly fine tweet.")

    def test_hcf_channel_can_use_summary(self):
        body = (
            "Storms battered the coast and flooding closed several roads overnight. "
            "Storms and flooding dominated the coast news cycle all week long. "
            "Meanwhile a community bake sale raised funds for the library. A cat show "
            "happened. Someone painted a fence. The weather was notable. Cakes. Sales. "
            "People attended various unrelated gatherings across town with enthusiasm."
        )
        tweet = "Flooding from storms closed coastal roads overnight."
        full = score_stance_text(body, tweet, StanceConfig(summary_budget=120))
        summ = score_stance_text(
            body, tweet, StanceConfig(summary_budget=120, hcf_on_summary=True)
        )
        # text channel identical; handcrafted channel computed on different text
        assert full.sim_text == pytest.approx(summ.sim_text)
        assert full.sim_hcf != pytest.approx(summ.sim_hcf)

    def test_record_wrapper_matches_text_scorer(self):
        news = NewsArticle(
            news_id="n1",
            url="https://example.org/a",
            publisher="example.org",
            publish_date="2024-01-15",
            authors=("A. Writer",),
            title="Reservoir warning",
            image_refs=(),
            body_text="The reservoir level dropped sharply. Officials warn of limits.",
        )
        tweet = TweetRecord(tweet_id="1", text="Officials warn of limits.", news_ref="n1")
        direct = score_stance_text(news.body_text, tweet.text)
        wrapped = detect_stance(news, tweet)
        assert wrapped == direct
