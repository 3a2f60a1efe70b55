"""The speech database: speakers, recordings, splits, vocabulary, associations.

Persistence is a directory of plain files so the whole store stays
inspectable: a JSON manifest (canonical key order, hence byte-stable),
a word<TAB>count frequency dictionary, and WAV files on disk.
"""

import json
import math
import random
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .audio import decode_wav
from .errors import (
    AgeOutOfRange,
    CorpusError,
    DuplicateUtteranceId,
    TooFewRecordings,
    UnknownKeyword,
    UnknownWord,
)

SCHEMA_VERSION = 1
AGE_MIN, AGE_MAX = 2, 7
WORDS_PER_CHILD = (80, 100)
SPLITS = ("train", "dev", "eval")


class WordCountWarning(UserWarning):
    """A speaker's recording tally is outside the per-child target band."""


@dataclass(frozen=True)
class SpeakerRecord:
    speaker_id: str
    age_years: int
    notes: str = ""


@dataclass
class RecordingEntry:
    utterance_id: str
    speaker_id: str
    word: str
    wav_path: str  # relative to the store root
    split: str = "unassigned"


@dataclass(frozen=True)
class FrequencyDictionary:
    """Word-frequency list used to pick the child vocabulary."""

    entries: tuple  # of (word, count)

    def __post_init__(self):
        words = [w for w, _ in self.entries]
        if len(set(words)) != len(words):
            raise CorpusError("frequency dictionary words must be unique")
        if any(c < 0 for _, c in self.entries):
            raise CorpusError("frequency dictionary counts must be non-negative")

    def count(self, word: str) -> int:
        for w, c in self.entries:
            if w == word:
                return c
        return 0


@dataclass(frozen=True)
class Lexicon:
    """Active vocabulary with a dialog concept tag per word."""

    words: tuple
    concept_tags: dict = field(default_factory=dict)
    phonemes: dict = field(default_factory=dict)

    def __post_init__(self):
        seen = set()
        for w in self.words:
            if w != w.lower() or any(ch.isspace() for ch in w) or not w:
                raise CorpusError(f"lexicon token {w!r} must be lowercase, no spaces")
            if w in seen:
                raise CorpusError(f"duplicate lexicon token {w!r}")
            seen.add(w)

    def __contains__(self, word) -> bool:
        return word in set(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def concept_for(self, word: str) -> str:
        """Concept tag of a word; words without an explicit tag map to themselves."""
        return self.concept_tags.get(word, word)

    def concept_map(self) -> dict:
        return {w: self.concept_for(w) for w in self.words}


@dataclass
class AssociationEntry:
    """An unrecognized input tied to a keyword and the dialog context it hit."""

    utterance_id: str
    keyword: str
    context: str
    count: int = 1
    timestamp: float = 0.0


@dataclass(frozen=True)
class SplitSummary:
    sizes: dict  # split name -> count

    @property
    def total(self) -> int:
        return sum(self.sizes.values())


def largest_remainder(n: int, ratios) -> list:
    """Apportion n items over ratios, giving leftovers to largest remainders."""
    raw = [r * n for r in ratios]
    base = [math.floor(x) for x in raw]
    leftover = n - sum(base)
    order = sorted(range(len(ratios)), key=lambda i: (-(raw[i] - base[i]), i))
    for i in order[:leftover]:
        base[i] += 1
    return base


def select_vocabulary(freq: FrequencyDictionary, n: int) -> Lexicon:
    """Top-n words by count, ties broken lexicographically, ordered by rank."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not freq.entries:
        warnings.warn("empty frequency dictionary yields an empty lexicon")
        return Lexicon(words=())
    ranked = sorted(freq.entries, key=lambda e: (-e[1], e[0]))
    return Lexicon(words=tuple(w for w, _ in ranked[:n]))


def load_freq_dict(path) -> FrequencyDictionary:
    entries = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        word, count = line.split("\t")
        entries.append((word, int(count)))
    return FrequencyDictionary(entries=tuple(entries))


def save_freq_dict(freq: FrequencyDictionary, path) -> None:
    lines = [f"{w}\t{c}" for w, c in freq.entries]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


class CorpusStore:
    """Single-writer view over the on-disk speech database."""

    def __init__(self, root, clock=time.time):
        self.root = Path(root)
        self.clock = clock
        self.speakers: dict = {}
        self.recordings: dict = {}
        self.associations: list = []
        self.lexicon: Lexicon | None = None

    # --- persistence ---------------------------------------------------------

    @property
    def manifest_path(self) -> Path:
        return self.root / "corpus.json"

    @classmethod
    def open(cls, root, clock=time.time) -> "CorpusStore":
        store = cls(root, clock=clock)
        if store.manifest_path.exists():
            store._load()
        return store

    def _load(self) -> None:
        doc = json.loads(self.manifest_path.read_text(encoding="utf-8"))
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise CorpusError(f"unsupported manifest schema: {doc.get('schema_version')}")
        self.speakers = {
            s["speaker_id"]: SpeakerRecord(**s) for s in doc.get("speakers", [])
        }
        self.recordings = {
            r["utterance_id"]: RecordingEntry(**r) for r in doc.get("recordings", [])
        }
        self.associations = [AssociationEntry(**a) for a in doc.get("associations", [])]
        lex = doc.get("lexicon")
        if lex:
            self.lexicon = Lexicon(
                words=tuple(lex["words"]),
                concept_tags=dict(lex.get("concept_tags", {})),
                phonemes={k: tuple(v) for k, v in lex.get("phonemes", {}).items()},
            )

    def save(self) -> None:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "speakers": [
                vars(s) for _, s in sorted(self.speakers.items())
            ],
            "recordings": [
                vars(r) for _, r in sorted(self.recordings.items())
            ],
            "associations": [vars(a) for a in self.associations],
            "lexicon": None
            if self.lexicon is None
            else {
                "words": list(self.lexicon.words),
                "concept_tags": dict(self.lexicon.concept_tags),
                "phonemes": {k: list(v) for k, v in self.lexicon.phonemes.items()},
            },
        }
        self.root.mkdir(parents=True, exist_ok=True)
        text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)
        self.manifest_path.write_text(text + "\n", encoding="utf-8")

    def set_lexicon(self, lexicon: Lexicon) -> None:
        self.lexicon = lexicon

    # --- recordings ----------------------------------------------------------

    def word_tally(self, speaker_id: str) -> int:
        return sum(1 for r in self.recordings.values() if r.speaker_id == speaker_id)

    def import_recording(
        self, speaker_id, age_years, word, wav_path, utterance_id=None
    ) -> RecordingEntry:
        """Register one recording row; the WAV must decode and the word must
        be in the lexicon. Warns while a speaker's tally sits outside the
        80-100 recordings-per-child target."""
        if not AGE_MIN <= int(age_years) <= AGE_MAX:
            raise AgeOutOfRange(f"age {age_years} outside [{AGE_MIN}, {AGE_MAX}]")
        if self.lexicon is None or word not in self.lexicon:
            raise UnknownWord(f"word {word!r} not in lexicon")

        wav_path = Path(wav_path)
        abs_path = wav_path if wav_path.is_absolute() else self.root / wav_path
        decode_wav(abs_path.read_bytes())  # raises if not ingestible

        utterance_id = utterance_id or abs_path.stem
        if utterance_id in self.recordings:
            raise DuplicateUtteranceId(utterance_id)

        if speaker_id in self.speakers:
            if self.speakers[speaker_id].age_years != int(age_years):
                raise CorpusError(f"conflicting age for speaker {speaker_id!r}")
        else:
            self.speakers[speaker_id] = SpeakerRecord(
                speaker_id=speaker_id, age_years=int(age_years)
            )

        rel = abs_path.relative_to(self.root) if abs_path.is_relative_to(self.root) else abs_path
        entry = RecordingEntry(
            utterance_id=utterance_id,
            speaker_id=speaker_id,
            word=word,
            wav_path=str(rel),
        )
        self.recordings[utterance_id] = entry

        tally = self.word_tally(speaker_id)
        low, high = WORDS_PER_CHILD
        if not low <= tally <= high:
            warnings.warn(
                f"speaker {speaker_id!r} has {tally} recordings, "
                f"outside the {low}-{high} target",
                WordCountWarning,
                stacklevel=2,
            )
        return entry

    def wav_bytes(self, utterance_id: str) -> bytes:
        entry = self.recordings[utterance_id]
        path = Path(entry.wav_path)
        if not path.is_absolute():
            path = self.root / path
        return path.read_bytes()

    def recordings_in_split(self, split: str) -> list:
        return sorted(
            (r for r in self.recordings.values() if r.split == split),
            key=lambda r: r.utterance_id,
        )

    # --- splits --------------------------------------------------------------

    def assign_splits(self, ratios, seed: int) -> SplitSummary:
        """Stratify recordings per word into train/dev/eval at the given
        ratios with largest-remainder rounding; deterministic in the seed."""
        if len(ratios) != 3 or any(r < 0 for r in ratios):
            raise ValueError("ratios must be three non-negative numbers")
        if abs(sum(ratios) - 1.0) > 1e-9:
            raise ValueError("ratios must sum to 1")

        by_word: dict = {}
        for r in self.recordings.values():
            by_word.setdefault(r.word, []).append(r)
        for word, recs in sorted(by_word.items()):
            if len(recs) < 3:
                raise TooFewRecordings(f"word {word!r} has only {len(recs)} recordings")

        sizes = dict.fromkeys(SPLITS, 0)
        for word, recs in sorted(by_word.items()):
            recs = sorted(recs, key=lambda r: r.utterance_id)
            random.Random(f"{seed}:{word}").shuffle(recs)
            quotas = largest_remainder(len(recs), ratios)
            start = 0
            for split, quota in zip(SPLITS, quotas):
                for r in recs[start : start + quota]:
                    r.split = split
                sizes[split] += quota
                start += quota
        self.save()
        return SplitSummary(sizes=sizes)

    # --- associations --------------------------------------------------------

    def record_association(self, utterance_id, keyword, context) -> AssociationEntry:
        """Link an unrecognized utterance to a keyword and dialog context;
        repeated (keyword, context) pairs increment the existing entry."""
        if self.lexicon is None or keyword not in self.lexicon:
            raise UnknownKeyword(f"keyword {keyword!r} not in lexicon")
        for entry in self.associations:
            if entry.keyword == keyword and entry.context == context:
                entry.count += 1
                entry.utterance_id = utterance_id  # most recent evidence
                return entry
        entry = AssociationEntry(
            utterance_id=utterance_id,
            keyword=keyword,
            context=context,
            count=1,
            timestamp=float(self.clock()),
        )
        self.associations.append(entry)
        return entry

    def associations_for_keyword(self, keyword: str) -> list:
        return [a for a in self.associations if a.keyword == keyword]

    def associations_for_context(self, context: str) -> list:
        return [a for a in self.associations if a.context == context]
