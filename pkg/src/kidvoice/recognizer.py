"""Template-matching decoder: DTW against enrolled words, LM-weighted scores.

Scores combine the normalized DTW distance with the unigram prior as
``score = distance - lm_weight * ln P(word)``; lower is better. A result
whose best score exceeds the rejection threshold is flagged rejected and
can be fed back into the speech database as a keyword association.
"""

import json
from dataclasses import dataclass
from pathlib import Path

from .corpus import CorpusStore, Lexicon
from .dtw import dtw_distance
from .errors import EmptyTemplateStore, NotRejected, UnknownWord
from .features import FeatureMatrix, load_features, save_features
from .lm import UnigramModel


@dataclass
class Template:
    word: str
    speaker_id: str
    features: FeatureMatrix
    warp_alpha: float = 1.0


@dataclass(frozen=True)
class Hypothesis:
    word: str
    acoustic_cost: float
    lm_logprob: float
    combined_score: float
    best_warp: float = 1.0


@dataclass
class NBestList:
    hypotheses: list  # sorted by ascending combined_score
    rejected: bool = False

    @property
    def top(self) -> Hypothesis:
        return self.hypotheses[0]


@dataclass(frozen=True)
class DecoderConfig:
    """Decoder knobs; ``lm_weight`` is the lambda in the score combination."""

    lm_weight: float = 1.0
    tau: float = 8.0
    band_fraction: float = 0.2
    n_best: int = 5
    vtln_search: bool = False

    def __post_init__(self):
        if self.lm_weight < 0 or self.tau <= 0 or self.n_best < 1:
            raise ValueError("lm_weight >= 0, tau > 0 and n_best >= 1 required")
        if not 0 <= self.band_fraction <= 1:
            raise ValueError("band_fraction must be in [0, 1]")


class TemplateStore:
    """Enrolled reference pronunciations, several per word allowed."""

    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon
        self.templates: list = []

    def __len__(self) -> int:
        return len(self.templates)

    def enroll(self, features, word, speaker_id, warp_alpha=1.0) -> Template:
        if word not in self.lexicon:
            raise UnknownWord(f"cannot enroll unknown word {word!r}")
        tpl = Template(
            word=word, speaker_id=speaker_id, features=features, warp_alpha=warp_alpha
        )
        self.templates.append(tpl)
        return tpl

    def count_for(self, word: str) -> int:
        return sum(1 for t in self.templates if t.word == word)

    def words(self) -> list:
        seen: dict = {}
        for t in self.templates:
            seen.setdefault(t.word, True)
        return list(seen)

    # --- persistence: one binary container per template plus a manifest -------

    def save(self, directory) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        rows = []
        for i, tpl in enumerate(self.templates):
            name = f"tpl{i:05d}.kvf"
            save_features(tpl.features, directory / name)
            rows.append(
                {
                    "word": tpl.word,
                    "speaker_id": tpl.speaker_id,
                    "warp_alpha": tpl.warp_alpha,
                    "path": name,
                }
            )
        doc = {"templates": rows, "lexicon_words": list(self.lexicon.words)}
        text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)
        (directory / "templates.json").write_text(text + "\n", encoding="utf-8")

    @classmethod
    def load(cls, directory, lexicon: Lexicon) -> "TemplateStore":
        directory = Path(directory)
        doc = json.loads((directory / "templates.json").read_text(encoding="utf-8"))
        store = cls(lexicon)
        for row in doc["templates"]:
            store.templates.append(
                Template(
                    word=row["word"],
                    speaker_id=row["speaker_id"],
                    features=load_features(directory / row["path"]),
                    warp_alpha=row["warp_alpha"],
                )
            )
        return store


def enroll_template(store: TemplateStore, features, word, speaker_id, warp_alpha=1.0):
    return store.enroll(features, word, speaker_id, warp_alpha)


def recognize(
    features: FeatureMatrix,
    store: TemplateStore,
    lm: UnigramModel,
    cfg: DecoderConfig,
    warp_variants=None,
) -> NBestList:
    """Score every enrolled word against the input and return the n-best list.

    ``warp_variants`` maps warp factor -> input features re-extracted at
    that warp; when ``cfg.vtln_search`` is set the per-word acoustic cost
    is minimized over templates and warps, otherwise only the plain
    features are used.
    """
    if len(store) == 0:
        raise EmptyTemplateStore("no templates enrolled")

    if cfg.vtln_search and warp_variants:
        candidates = sorted(warp_variants.items())
    else:
        candidates = [(1.0, features)]

    best: dict = {}  # word -> (acoustic_cost, warp)
    for warp, feats in candidates:
        for tpl in store.templates:
            cost = dtw_distance(feats, tpl.features, cfg.band_fraction)
            current = best.get(tpl.word)
            if current is None or cost < current[0]:
                best[tpl.word] = (cost, warp)

    hypotheses = []
    for word, (cost, warp) in best.items():
        lp = lm.log_prob(word)
        hypotheses.append(
            Hypothesis(
                word=word,
                acoustic_cost=cost,
                lm_logprob=lp,
                combined_score=cost - cfg.lm_weight * lp,
                best_warp=warp,
            )
        )
    hypotheses.sort(key=lambda h: (h.combined_score, h.word))
    hypotheses = hypotheses[: cfg.n_best]
    return NBestList(
        hypotheses=hypotheses, rejected=hypotheses[0].combined_score > cfg.tau
    )


def feedback_unrecognized(
    utterance_id, nbest: NBestList, context, store: CorpusStore, on_event=None
):
    """Record a rejected result as a keyword association in the database.

    The keyword is the top hypothesis; ``on_event`` is an optional hook for
    adaptation listeners (e.g. LM re-training) and receives the entry.
    """
    if not nbest.rejected:
        raise NotRejected("feedback path is only valid for rejected results")
    if not nbest.hypotheses:
        raise ValueError("rejected n-best list carries no hypotheses")
    entry = store.record_association(utterance_id, nbest.top.word, context)
    if on_event is not None:
        on_event(entry)
    return entry
