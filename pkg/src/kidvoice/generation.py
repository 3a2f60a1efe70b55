"""Response generation and phonetic output.

Responses are intent-id lookups into slot-bearing text templates; the
phonetic side is a greedy longest-match grapheme-to-phoneme pass over a
data-file rule table, so languages are assets rather than code.
"""

import json
import re
import string
from dataclasses import dataclass
from pathlib import Path

from .errors import MissingSlot, UnknownIntent, UnmappedGrapheme

WORD_BOUNDARY = "|"

_WORD_RE = re.compile(r"[^\W\d_]+", re.UNICODE)


def _placeholders(text: str) -> set:
    names = set()
    for literal, name, _spec, _conv in string.Formatter().parse(text):
        if name is not None:
            if name == "":
                raise ValueError("positional placeholders are not allowed")
            names.add(name)
        if "{" in literal or "}" in literal:
            raise ValueError("literal braces are not allowed in templates")
    return names


@dataclass(frozen=True)
class ResponseTemplate:
    intent_id: str
    text: str
    required_slots: frozenset = frozenset()

    def __post_init__(self):
        extra = _placeholders(self.text) - set(self.required_slots)
        if extra:
            raise ValueError(f"placeholders {sorted(extra)} missing from required_slots")


def load_templates(path) -> dict:
    """responses.json: {intent_id: {"text": ..., "required_slots": [...]}}."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return {
        intent: ResponseTemplate(
            intent_id=intent,
            text=body["text"],
            required_slots=frozenset(body.get("required_slots", [])),
        )
        for intent, body in doc.items()
    }


def generate_response(intent_id: str, slots, templates) -> str:
    """Render the template for an intent; every required slot must be given."""
    if intent_id not in templates:
        raise UnknownIntent(intent_id)
    template = templates[intent_id]
    for slot in template.required_slots:
        if slot not in slots:
            raise MissingSlot(f"intent {intent_id!r} needs slot {slot!r}")
    return template.text.format(**{k: slots[k] for k in template.required_slots})


@dataclass(frozen=True)
class PhonemeSequence:
    phonemes: tuple

    def __iter__(self):
        return iter(self.phonemes)

    def __len__(self):
        return len(self.phonemes)


@dataclass(frozen=True)
class G2PRuleTable:
    """Ordered grapheme -> phoneme-list rules over a declared inventory."""

    rules: dict
    inventory: frozenset

    def __post_init__(self):
        for grapheme, phones in self.rules.items():
            if not grapheme:
                raise ValueError("empty grapheme string in rule table")
            unknown = set(phones) - set(self.inventory)
            if unknown:
                raise ValueError(f"rule {grapheme!r} emits symbols outside inventory: {sorted(unknown)}")

    @property
    def max_grapheme_len(self) -> int:
        return max(len(g) for g in self.rules)


def load_g2p_rules(path) -> G2PRuleTable:
    """g2p_rules.json: {"inventory": [...], "rules": [[grapheme, [phonemes]], ...]}."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    rules: dict = {}
    for grapheme, phones in doc["rules"]:
        if grapheme in rules:
            raise ValueError(f"duplicate grapheme rule {grapheme!r}")
        rules[grapheme] = tuple(phones)
    inventory = frozenset(doc["inventory"]) | {WORD_BOUNDARY}
    return G2PRuleTable(rules=rules, inventory=inventory)


def phonemize(text: str, rules: G2PRuleTable) -> PhonemeSequence:
    """Greedy longest-match G2P per word; words join on a boundary marker.

    Input is lowercased and punctuation/whitespace is treated as word
    boundaries. Raises UnmappedGrapheme naming the first uncovered
    character and its position within the word.
    """
    words = _WORD_RE.findall(text.lower())
    out: list = []
    longest = rules.max_grapheme_len
    for w, word in enumerate(words):
        if w > 0:
            out.append(WORD_BOUNDARY)
        i = 0
        while i < len(word):
            for length in range(min(longest, len(word) - i), 0, -1):
                chunk = word[i : i + length]
                if chunk in rules.rules:
                    out.extend(rules.rules[chunk])
                    i += length
                    break
            else:
                raise UnmappedGrapheme(word[i], i, word)
    return PhonemeSequence(phonemes=tuple(out))
