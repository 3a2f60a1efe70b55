"""Evaluation harness: enroll from the train split, decode a held-out split,
report accuracy, per-age breakdown, confusion counts and rejection rate."""

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from .audio import PreprocessConfig
from .corpus import CorpusStore
from .errors import EmptySplit, NoTemplates
from .features import FeatureConfig
from .lm import UnigramModel
from .pipeline import FrontEnd
from .recognizer import DecoderConfig, NBestList, TemplateStore, recognize


@dataclass(frozen=True)
class DecodedUtterance:
    utterance_id: str
    age_years: int
    reference: str
    hypothesis: str
    rejected: bool


@dataclass
class EvalReport:
    overall_accuracy: float
    per_age_group: dict  # age -> {"n": int, "accuracy": float}
    words: list
    confusion: list  # row = reference word, column = hypothesis word
    rejection_rate: float
    n_utterances: int
    config: dict

    def to_json(self) -> str:
        doc = {
            "overall_accuracy": self.overall_accuracy,
            "per_age_group": {str(k): v for k, v in sorted(self.per_age_group.items())},
            "confusion": {"words": self.words, "matrix": self.confusion},
            "rejection_rate": self.rejection_rate,
            "n_utterances": self.n_utterances,
            "config": self.config,
        }
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def render_table(self) -> str:
        lines = [
            f"utterances       {self.n_utterances}",
            f"top-1 accuracy   {self.overall_accuracy:.3f}",
            f"rejection rate   {self.rejection_rate:.3f}",
            "",
            "age   n     accuracy",
        ]
        for age, row in sorted(self.per_age_group.items()):
            lines.append(f"{age:<5} {row['n']:<5} {row['accuracy']:.3f}")
        errors = []
        for i, ref in enumerate(self.words):
            for j, hyp in enumerate(self.words):
                if i != j and self.confusion[i][j]:
                    errors.append((self.confusion[i][j], ref, hyp))
        if errors:
            lines.append("")
            lines.append("confusions (ref -> hyp):")
            for n, ref, hyp in sorted(errors, reverse=True):
                lines.append(f"  {ref} -> {hyp}: {n}")
        return "\n".join(lines) + "\n"


def build_report(results, words, config) -> EvalReport:
    """Aggregate per-utterance decodes into the report; the weighted mean of
    the per-age accuracies equals the overall accuracy by construction."""
    if not results:
        raise EmptySplit("no utterances to aggregate")
    index = {w: i for i, w in enumerate(words)}
    confusion = [[0] * len(words) for _ in words]
    by_age: dict = {}
    correct = 0
    rejected = 0
    for r in results:
        confusion[index[r.reference]][index[r.hypothesis]] += 1
        ok = r.reference == r.hypothesis
        correct += ok
        rejected += r.rejected
        n, c = by_age.get(r.age_years, (0, 0))
        by_age[r.age_years] = (n + 1, c + ok)
    per_age = {
        age: {"n": n, "accuracy": c / n} for age, (n, c) in sorted(by_age.items())
    }
    return EvalReport(
        overall_accuracy=correct / len(results),
        per_age_group=per_age,
        words=list(words),
        confusion=confusion,
        rejection_rate=rejected / len(results),
        n_utterances=len(results),
        config=config,
    )


def enroll_split(
    store: CorpusStore, split: str, frontend: FrontEnd, warp_alpha: float = 1.0
) -> TemplateStore:
    """Extract features for every recording in a split and enroll them."""
    recordings = store.recordings_in_split(split)
    if not recordings:
        raise EmptySplit(f"split {split!r} holds no recordings")
    templates = TemplateStore(store.lexicon)
    for rec in recordings:
        feats = frontend.features_from_wav(
            store.wav_bytes(rec.utterance_id), warp_alpha, meta=rec.utterance_id
        )
        templates.enroll(feats, rec.word, rec.speaker_id, warp_alpha)
    return templates


def config_snapshot(
    split: str,
    decoder: DecoderConfig,
    pre: PreprocessConfig,
    feat: FeatureConfig,
) -> dict:
    snap = {
        "split": split,
        "decoder": asdict(decoder),
        "preprocess": asdict(pre),
        "features": asdict(feat),
    }
    snap["features"]["vtln_grid"] = list(snap["features"]["vtln_grid"])
    return snap


def run_evaluation(
    store: CorpusStore,
    split: str,
    templates: TemplateStore,
    lm: UnigramModel,
    decoder_cfg: DecoderConfig,
    frontend: FrontEnd,
) -> EvalReport:
    """Decode every utterance in a split against the enrolled templates."""
    if len(templates) == 0:
        raise NoTemplates("enroll templates before evaluating")
    if split not in ("dev", "eval"):
        raise ValueError("evaluation runs on the dev or eval split")
    recordings = store.recordings_in_split(split)
    if not recordings:
        raise EmptySplit(f"split {split!r} holds no recordings")

    results = []
    for rec in recordings:
        frames = frontend.frames_from_wav(store.wav_bytes(rec.utterance_id))
        feats = frontend.features_from_frames(frames, meta=rec.utterance_id)
        variants = (
            frontend.warp_variants(frames, meta=rec.utterance_id)
            if decoder_cfg.vtln_search
            else None
        )
        nbest: NBestList = recognize(feats, templates, lm, decoder_cfg, variants)
        results.append(
            DecodedUtterance(
                utterance_id=rec.utterance_id,
                age_years=store.speakers[rec.speaker_id].age_years,
                reference=rec.word,
                hypothesis=nbest.top.word,
                rejected=nbest.rejected,
            )
        )
    config = config_snapshot(
        split, decoder_cfg, frontend.pre_cfg, frontend.feat_cfg
    )
    return build_report(results, list(store.lexicon.words), config)


def write_report(report: EvalReport, path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(report.to_json(), encoding="utf-8")
