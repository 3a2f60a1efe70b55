import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kidvoice.corpus import AssociationEntry, FrequencyDictionary, Lexicon
from kidvoice.errors import EmptyLexicon, UnknownKeyword
from kidvoice.lm import (
    UNK,
    UnigramModel,
    adapt_with_associations,
    load_model,
    log_prob,
    save_model,
    train_unigram,
)


def two_word_model(mama=3, ball=1):
    freq = FrequencyDictionary(entries=(("mama", mama), ("ball", ball)))
    return train_unigram(freq, Lexicon(words=("mama", "ball")))


class TestTrainUnigram:
    def test_hand_normalized_example(self):
        # counts {3, 1}: total 4, denominator 4 + 2 + 1 = 7
        model = two_word_model()
        assert model.prob("mama") == pytest.approx(4 / 7)
        assert model.prob("ball") == pytest.approx(2 / 7)
        assert model.prob(UNK) == pytest.approx(1 / 7)

    def test_all_zero_counts_uniform(self):
        freq = FrequencyDictionary(entries=())
        model = train_unigram(freq, Lexicon(words=("a", "b", "c")))
        for w in ("a", "b", "c", UNK):
            assert model.prob(w) == pytest.approx(1 / 4)

    def test_missing_dict_words_get_zero(self):
        freq = FrequencyDictionary(entries=(("mama", 6),))
        model = train_unigram(freq, Lexicon(words=("mama", "ball")))
        assert model.counts["ball"] == 0

    def test_oov_falls_back_to_unk(self):
        model = two_word_model()
        assert model.prob("xyz") == model.prob(UNK)
        assert log_prob(model, "xyz") == model.log_prob(UNK)

    def test_empty_lexicon(self):
        with pytest.raises(EmptyLexicon):
            train_unigram(FrequencyDictionary(entries=()), Lexicon(words=()))


class TestLogProb:
    def test_ln_half(self):
        model = UnigramModel(vocab=("a", "b"), counts={"a": 1, "b": 0})
        # P(a) = (1 + 1) / (1 + 3) = 0.5
        assert model.log_prob("a") == pytest.approx(-0.6931, abs=1e-4)

    @given(st.dictionaries(st.sampled_from(["a", "b", "c"]), st.integers(0, 500)))
    def test_always_negative(self, counts):
        model = UnigramModel(vocab=("a", "b", "c"), counts=counts)
        for w in ("a", "b", "c", UNK, "oov"):
            assert model.log_prob(w) < 0

    @given(st.integers(0, 100), st.integers(0, 100))
    def test_probabilities_sum_to_one(self, ca, cb):
        model = UnigramModel(vocab=("a", "b"), counts={"a": ca, "b": cb})
        total = model.prob("a") + model.prob("b") + model.prob(UNK)
        assert total == pytest.approx(1.0, abs=1e-9)


class TestAdaptation:
    def assoc(self, keyword, count):
        return AssociationEntry(
            utterance_id="u", keyword=keyword, context="ctx", count=count
        )

    def test_counts_fold_in(self):
        model = two_word_model()
        adapted = adapt_with_associations(model, [self.assoc("ball", 2)])
        assert adapted.counts["ball"] == 3
        # equivalent to retraining on the merged counts
        assert adapted.prob("ball") == two_word_model(ball=3).prob("ball")

    def test_original_unmodified(self):
        model = two_word_model()
        adapt_with_associations(model, [self.assoc("ball", 2)])
        assert model.counts["ball"] == 1

    def test_empty_list_is_identity(self):
        model = two_word_model()
        adapted = adapt_with_associations(model, [])
        assert all(adapted.prob(w) == model.prob(w) for w in ("mama", "ball", UNK))

    def test_adaptation_raises_keyword_probability(self):
        model = two_word_model()
        adapted = adapt_with_associations(model, [self.assoc("ball", 5)])
        assert adapted.prob("ball") > model.prob("ball")

    def test_unknown_keyword(self):
        with pytest.raises(UnknownKeyword):
            adapt_with_associations(two_word_model(), [self.assoc("zebra", 1)])

    def test_sum_preserved_after_adaptation(self):
        adapted = adapt_with_associations(two_word_model(), [self.assoc("mama", 7)])
        total = adapted.prob("mama") + adapted.prob("ball") + adapted.prob(UNK)
        assert total == pytest.approx(1.0, abs=1e-9)

    @given(st.integers(0, 50), st.integers(1, 50))
    def test_log_prob_monotone_in_counts(self, base, bump):
        lo = UnigramModel(vocab=("a", "b"), counts={"a": base, "b": 5})
        hi = UnigramModel(vocab=("a", "b"), counts={"a": base + bump, "b": 5})
        assert hi.log_prob("a") > lo.log_prob("a")


class TestSerialization:
    def test_roundtrip_exact(self, tmp_path):
        model = two_word_model()
        save_model(model, tmp_path / "lm.json")
        back = load_model(tmp_path / "lm.json")
        assert back == model
        assert back.log_prob("mama") == model.log_prob("mama")
