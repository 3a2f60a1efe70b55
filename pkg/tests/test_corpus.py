import warnings

import pytest

from kidvoice.corpus import (
    CorpusStore,
    FrequencyDictionary,
    Lexicon,
    WordCountWarning,
    largest_remainder,
    load_freq_dict,
    save_freq_dict,
    select_vocabulary,
)
from kidvoice.errors import (
    AgeOutOfRange,
    CorpusError,
    DuplicateUtteranceId,
    TooFewRecordings,
    UnknownKeyword,
    UnknownWord,
)

from .conftest import make_wav

LEX = Lexicon(
    words=("mama", "tato", "ball", "grandma"),
    concept_tags={"mama": "family", "tato": "family", "ball": "toy", "grandma": "family"},
)


@pytest.fixture
def store(tmp_path):
    (tmp_path / "wav").mkdir()
    (tmp_path / "wav" / "clip.wav").write_bytes(make_wav(n=800))
    s = CorpusStore(tmp_path, clock=lambda: 1000.0)
    s.set_lexicon(LEX)
    return s


def import_n(store, n, speaker="kid1", age=5, word="mama", start=0):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WordCountWarning)
        for i in range(start, start + n):
            store.import_recording(speaker, age, word, "wav/clip.wav", f"u{i:04d}")


class TestImportRecording:
    def test_known_word_stored(self, store):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", WordCountWarning)
            entry = store.import_recording("kid1", 5, "mama", "wav/clip.wav", "u1")
        assert entry.split == "unassigned"
        assert store.recordings["u1"].word == "mama"
        assert store.speakers["kid1"].age_years == 5

    @pytest.mark.parametrize("age", [1, 8, 9, 0])
    def test_age_out_of_range(self, store, age):
        with pytest.raises(AgeOutOfRange):
            store.import_recording("kid1", age, "mama", "wav/clip.wav", "u1")

    @pytest.mark.parametrize("age", [2, 7])
    def test_age_bounds_inclusive(self, store, age):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", WordCountWarning)
            store.import_recording(f"kid{age}", age, "mama", "wav/clip.wav", f"u{age}")

    def test_unknown_word(self, store):
        with pytest.raises(UnknownWord):
            store.import_recording("kid1", 5, "zebra", "wav/clip.wav", "u1")

    def test_duplicate_utterance_id(self, store):
        import_n(store, 1)
        with pytest.raises(DuplicateUtteranceId):
            store.import_recording("kid1", 5, "mama", "wav/clip.wav", "u0000")

    def test_conflicting_age_rejected(self, store):
        import_n(store, 1)
        with pytest.raises(CorpusError):
            store.import_recording("kid1", 6, "mama", "wav/clip.wav", "zz")

    def test_warning_below_target(self, store):
        with pytest.warns(WordCountWarning, match="42 recordings"):
            import_n(store, 41)
            store.import_recording("kid1", 5, "mama", "wav/clip.wav", "u9999")

    def test_warning_above_target(self, store):
        import_n(store, 101)
        with pytest.warns(WordCountWarning, match="102 recordings"):
            store.import_recording("kid1", 5, "mama", "wav/clip.wav", "u9999")

    def test_no_warning_inside_target(self, store):
        import_n(store, 79)
        with warnings.catch_warnings():
            warnings.simplefilter("error", WordCountWarning)
            store.import_recording("kid1", 5, "mama", "wav/clip.wav", "u0079")
            assert store.word_tally("kid1") == 80


class TestSelectVocabulary:
    def test_tie_broken_lexicographically(self):
        freq = FrequencyDictionary(entries=(("tato", 50), ("mama", 50), ("ball", 10)))
        lex = select_vocabulary(freq, 2)
        assert lex.words == ("mama", "tato")

    def test_saturation(self):
        freq = FrequencyDictionary(entries=(("a", 3), ("b", 2), ("c", 1)))
        assert select_vocabulary(freq, 100).words == ("a", "b", "c")

    def test_empty_dictionary_warns(self):
        with pytest.warns(UserWarning, match="empty frequency dictionary"):
            lex = select_vocabulary(FrequencyDictionary(entries=()), 5)
        assert len(lex) == 0

    def test_counts_non_increasing(self):
        freq = FrequencyDictionary(entries=(("x", 1), ("y", 9), ("z", 5)))
        lex = select_vocabulary(freq, 3)
        counts = [freq.count(w) for w in lex.words]
        assert counts == sorted(counts, reverse=True)


class TestSplits:
    def fill(self, store, per_word=10):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", WordCountWarning)
            i = 0
            for word in ("mama", "tato", "ball"):
                for _ in range(per_word):
                    store.import_recording("kid1", 5, word, "wav/clip.wav", f"u{i:04d}")
                    i += 1

    def test_largest_remainder_example(self):
        assert largest_remainder(10, (0.8, 0.1, 0.1)) == [8, 1, 1]
        assert largest_remainder(100, (0.8, 0.1, 0.1)) == [80, 10, 10]
        assert largest_remainder(7, (0.8, 0.1, 0.1)) == [5, 1, 1]

    def test_sizes_and_partition(self, store):
        self.fill(store)
        summary = store.assign_splits((0.8, 0.1, 0.1), seed=3)
        assert summary.sizes == {"train": 24, "dev": 3, "eval": 3}
        assert summary.total == len(store.recordings)
        assert all(r.split in ("train", "dev", "eval") for r in store.recordings.values())

    def test_per_word_stratification(self, store):
        self.fill(store)
        store.assign_splits((0.8, 0.1, 0.1), seed=3)
        for word in ("mama", "tato", "ball"):
            by_split = {"train": 0, "dev": 0, "eval": 0}
            for r in store.recordings.values():
                if r.word == word:
                    by_split[r.split] += 1
            assert by_split == {"train": 8, "dev": 1, "eval": 1}

    def test_deterministic_in_seed(self, store):
        self.fill(store)
        store.assign_splits((0.8, 0.1, 0.1), seed=99)
        first = {u: r.split for u, r in store.recordings.items()}
        store.assign_splits((0.8, 0.1, 0.1), seed=99)
        assert {u: r.split for u, r in store.recordings.items()} == first

    def test_too_few_recordings(self, store):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", WordCountWarning)
            store.import_recording("kid1", 5, "mama", "wav/clip.wav", "u1")
            store.import_recording("kid1", 5, "mama", "wav/clip.wav", "u2")
        with pytest.raises(TooFewRecordings):
            store.assign_splits((0.8, 0.1, 0.1), seed=1)

    def test_bad_ratios(self, store):
        self.fill(store)
        with pytest.raises(ValueError):
            store.assign_splits((0.9, 0.2, 0.1), seed=1)


class TestAssociations:
    def test_first_association(self, store):
        entry = store.record_association("utt9", "grandma", "ask_family")
        assert entry.count == 1
        assert entry.timestamp == 1000.0

    def test_increment_same_pair(self, store):
        store.record_association("utt9", "grandma", "ask_family")
        entry = store.record_association("utt10", "grandma", "ask_family")
        assert entry.count == 2
        assert len(store.associations) == 1

    def test_distinct_context_separate_entry(self, store):
        store.record_association("utt9", "grandma", "ask_family")
        store.record_association("utt9", "grandma", "greet")
        assert len(store.associations) == 2

    def test_unknown_keyword(self, store):
        with pytest.raises(UnknownKeyword):
            store.record_association("utt9", "zebra", "greet")

    def test_retrievable_by_keyword_and_context(self, store):
        store.record_association("u1", "grandma", "ask_family")
        store.record_association("u2", "ball", "ask_toy")
        assert [a.keyword for a in store.associations_for_keyword("grandma")] == ["grandma"]
        assert [a.context for a in store.associations_for_context("ask_toy")] == ["ask_toy"]


class TestPersistence:
    def test_manifest_roundtrip_is_byte_identical(self, store, tmp_path):
        import_n(store, 5)
        store.assign_splits((0.6, 0.2, 0.2), seed=2)
        store.record_association("u0001", "grandma", "greet")
        store.save()
        first = store.manifest_path.read_bytes()

        reloaded = CorpusStore.open(tmp_path)
        reloaded.save()
        assert reloaded.manifest_path.read_bytes() == first
        assert reloaded.recordings.keys() == store.recordings.keys()
        assert reloaded.lexicon.words == LEX.words

    def test_freq_dict_roundtrip(self, tmp_path):
        freq = FrequencyDictionary(entries=(("mama", 50), ("ball", 10)))
        save_freq_dict(freq, tmp_path / "freq.tsv")
        assert load_freq_dict(tmp_path / "freq.tsv") == freq


class TestLexicon:
    def test_tokens_validated(self):
        with pytest.raises(CorpusError):
            Lexicon(words=("Mama",))
        with pytest.raises(CorpusError):
            Lexicon(words=("two words",))
        with pytest.raises(CorpusError):
            Lexicon(words=("dup", "dup"))

    def test_concept_defaults_to_word(self):
        lex = Lexicon(words=("red",), concept_tags={})
        assert lex.concept_for("red") == "red"
