"""Add-one smoothed unigram priors over the child vocabulary.

The model reserves one UNK pseudo-word so every query has positive
probability; recorded keyword associations can be folded back in to bias
the priors toward words children actually use.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .corpus import FrequencyDictionary, Lexicon
from .errors import EmptyLexicon, UnknownKeyword

UNK = "<unk>"


@dataclass(frozen=True)
class UnigramModel:
    vocab: tuple
    counts: dict  # word -> non-negative int
    smoothing: float = 1.0

    @property
    def total(self) -> float:
        return sum(self.counts.values())

    def prob(self, word: str) -> float:
        """P(word) = (count + k) / (total + k * (|V| + 1)); OOV falls back to UNK."""
        denom = self.total + self.smoothing * (len(self.vocab) + 1)
        count = self.counts.get(word, 0) if word in set(self.vocab) else 0
        return (count + self.smoothing) / denom

    def log_prob(self, word: str) -> float:
        return math.log(self.prob(word))


def train_unigram(freq: FrequencyDictionary, lexicon: Lexicon) -> UnigramModel:
    """Counts come from the frequency dictionary; lexicon words missing
    there get count zero."""
    if len(lexicon) == 0:
        raise EmptyLexicon("cannot train a unigram model on an empty lexicon")
    counts = {w: freq.count(w) for w in lexicon.words}
    return UnigramModel(vocab=tuple(lexicon.words), counts=counts)


def log_prob(model: UnigramModel, word: str) -> float:
    return model.log_prob(word)


def adapt_with_associations(model: UnigramModel, associations) -> UnigramModel:
    """Fold association counts into the priors; returns a new model."""
    vocab = set(model.vocab)
    for assoc in associations:
        if assoc.keyword not in vocab:
            raise UnknownKeyword(f"association keyword {assoc.keyword!r} not in vocab")
    counts = dict(model.counts)
    for assoc in associations:
        counts[assoc.keyword] = counts.get(assoc.keyword, 0) + assoc.count
    return UnigramModel(vocab=model.vocab, counts=counts, smoothing=model.smoothing)


def save_model(model: UnigramModel, path) -> None:
    doc = {
        "vocab": list(model.vocab),
        "counts": {w: int(c) for w, c in model.counts.items()},
        "smoothing": model.smoothing,
    }
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_model(path) -> UnigramModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return UnigramModel(
        vocab=tuple(doc["vocab"]),
        counts={w: int(c) for w, c in doc["counts"].items()},
        smoothing=float(doc.get("smoothing", 1.0)),
    )
