"""Synthetic corpus generation: sinusoid-pattern words at desk scale.

Each word is a two-sinusoid signature whose frequency ratio is unique to
the word; pseudo-speakers scale all frequencies by an age-dependent factor
(younger voices sit higher), which is exactly the mismatch the warp search
is meant to absorb. Utterances get a silent lead-in so the noise estimator
has something to look at, plus white noise at a configurable SNR.
"""

import json
import warnings
import wave
from pathlib import Path

import numpy as np

from .audio import CANONICAL_RATE
from .corpus import (
    WORDS_PER_CHILD,
    CorpusStore,
    FrequencyDictionary,
    Lexicon,
    WordCountWarning,
    save_freq_dict,
)

# (word, concept tag, dictionary count), most frequent first
WORD_BANK = (
    ("mama", "family", 220),
    ("tato", "family", 180),
    ("ball", "toy", 160),
    ("hello", "greeting", 140),
    ("cat", "animal", 120),
    ("dog", "animal", 110),
    ("red", "color", 90),
    ("blue", "color", 70),
    ("yes", "confirm", 60),
    ("bye", "farewell", 50),
)

LEAD_SILENCE_S = 0.12
TAIL_SILENCE_S = 0.05
BASE_DURATION_S = 0.45


def word_signature(index: int) -> tuple:
    """Per-word acoustic pattern: a two-tone pair plus a frequency movement.

    The tone ratio is unchanged under a speaker's linear frequency scaling,
    and the second-half movement (up for even words, down for odd ones)
    gives each word a temporal shape that alignment cannot trade away.
    """
    f1 = 270.0 + 85.0 * index
    ratio = 2.1 + 0.2 * index
    move = 1.3 if index % 2 == 0 else 0.72
    return f1, f1 * ratio, move


def speaker_profile(index: int) -> tuple:
    """(speaker_id, age_years, frequency scale); younger speakers sit higher."""
    age = 3 + index % 5
    return f"spk{index + 1}", age, 1.3 - 0.1 * (age - 3)


def _two_tone(t, f1, f2, rng):
    return np.sin(2 * np.pi * f1 * t + rng.uniform(0, 2 * np.pi)) + 0.8 * np.sin(
        2 * np.pi * f2 * t + rng.uniform(0, 2 * np.pi)
    )


def synth_utterance(word_index: int, scale: float, snr_db: float, rng) -> np.ndarray:
    f1, f2, move = word_signature(word_index)
    dur = BASE_DURATION_S * (0.9 + 0.2 * rng.random())
    n_speech = int(dur * CANONICAL_RATE)
    n_lead = int(LEAD_SILENCE_S * CANONICAL_RATE)
    n_tail = int(TAIL_SILENCE_S * CANONICAL_RATE)

    n_first = int(0.55 * n_speech)
    t1 = np.arange(n_first) / CANONICAL_RATE
    t2 = np.arange(n_speech - n_first) / CANONICAL_RATE
    tones = np.concatenate(
        [
            _two_tone(t1, f1 * scale, f2 * scale, rng),
            _two_tone(t2, f1 * move * scale, f2 * move * scale, rng),
        ]
    )
    amp = 0.32 * (0.9 + 0.2 * rng.random())
    speech = amp * np.hanning(n_speech) * tones
    clip = np.concatenate([np.zeros(n_lead), speech, np.zeros(n_tail)])

    power = float(np.mean(speech**2))
    sigma = np.sqrt(power / 10 ** (snr_db / 10))
    clip = clip + rng.normal(0.0, sigma, size=len(clip))
    return np.clip(clip, -1.0, 1.0)


def write_wav(path, samples: np.ndarray, sample_rate: int = CANONICAL_RATE) -> None:
    pcm = np.clip(np.round(samples * 32767.0), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(sample_rate)
        fh.writeframes(pcm.tobytes())


def make_word_list(n_words: int) -> list:
    words = list(WORD_BANK[:n_words])
    for i in range(len(WORD_BANK), n_words):
        words.append((f"word{i:02d}", f"word{i:02d}", max(40 - i, 1)))
    return words


def generate_corpus(
    root,
    n_words: int = 10,
    n_speakers: int = 5,
    utterances_per_word: int = 8,
    snr_db: float = 20.0,
    seed: int = 42,
) -> CorpusStore:
    """Build a ready-to-use store: WAVs, frequency dictionary, lexicon,
    manifest, and the default dialog assets. Splits are left unassigned."""
    root = Path(root)
    (root / "wav").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    bank = make_word_list(n_words)
    freq = FrequencyDictionary(entries=tuple((w, c) for w, _, c in bank))
    save_freq_dict(freq, root / "freq_dict.tsv")
    lexicon = Lexicon(
        words=tuple(w for w, _, _ in bank),
        concept_tags={w: tag for w, tag, _ in bank},
    )

    store = CorpusStore(root)
    store.set_lexicon(lexicon)

    with warnings.catch_warnings():
        # bulk import; per-speaker totals are summarized below instead
        warnings.simplefilter("ignore", WordCountWarning)
        for s in range(n_speakers):
            speaker_id, age, scale = speaker_profile(s)
            for w, (word, _tag, _count) in enumerate(bank):
                for k in range(utterances_per_word):
                    clip = synth_utterance(w, scale, snr_db, rng)
                    utt_id = f"{speaker_id}-{word}-{k:02d}"
                    wav_path = root / "wav" / f"{utt_id}.wav"
                    write_wav(wav_path, clip)
                    store.import_recording(speaker_id, age, word, wav_path, utt_id)

    low, high = WORDS_PER_CHILD
    for speaker_id in sorted(store.speakers):
        tally = store.word_tally(speaker_id)
        if not low <= tally <= high:
            warnings.warn(
                f"speaker {speaker_id!r} ends at {tally} recordings, "
                f"outside the {low}-{high} target",
                WordCountWarning,
                stacklevel=2,
            )

    install_default_assets(root)
    config_path = root / "config.json"
    if not config_path.exists():
        # LM weight tuned on the synthetic dev split; the stock 1.0 lets the
        # prior spread dominate the normalized template distances
        config_path.write_text(
            json.dumps({"decoder": {"lm_weight": 0.1}}, indent=2) + "\n",
            encoding="utf-8",
        )
    store.save()
    return store


def install_default_assets(root) -> None:
    """Copy packaged dialog assets (responses, G2P rules, default agenda)
    into a data directory, leaving existing files alone."""
    from importlib import resources

    root = Path(root)
    (root / "agendas").mkdir(parents=True, exist_ok=True)
    assets = resources.files("kidvoice") / "assets"
    targets = {
        "responses.json": root / "responses.json",
        "g2p_rules.json": root / "g2p_rules.json",
        "agenda_default.json": root / "agendas" / "default.json",
    }
    for name, target in targets.items():
        if not target.exists():
            target.write_text(
                (assets / name).read_text(encoding="utf-8"), encoding="utf-8"
            )
