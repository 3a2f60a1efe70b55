"""Agenda-based dialog sessions with mixed initiative and full history.

The agenda is an ordered stack of handlers, each waiting for a set of
concept tags. A turn's accepted word is mapped to its tag and the first
handler (scanning from the top) that expects the tag consumes it and
leaves the stack; handlers above it stay put, so the user may answer a
question other than the one just asked. The module never touches audio or
features: its input is a recognition result (or a typed word) only.
"""

import json
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DuplicateHandlerName, EmptyAgenda, SessionFinished

# Reserved response intents, fixed so scripted transcripts stay stable.
CLARIFY_INTENT = "clarify"
REPEAT_INTENT = "repeat"
CLOSING_INTENT = "closing"

ACTIVE, FINISHED = "active", "finished"


@dataclass
class Handler:
    name: str
    expected_concepts: frozenset
    prompt_intent: str
    completed: bool = False
    captured_value: str | None = None


@dataclass
class Turn:
    index: int
    user_input: object  # NBestList or plain word
    matched_handler: str | None
    response_intent: str
    response_text: str
    timestamp: float


@dataclass
class DialogState:
    session_id: str
    agenda: list  # of Handler, top at index 0
    history: list = field(default_factory=list)
    completed: list = field(default_factory=list)
    status: str = ACTIVE

    @property
    def finished(self) -> bool:
        return self.status == FINISHED

    def current_intent(self) -> str:
        return self.agenda[0].prompt_intent if self.agenda else CLOSING_INTENT


def load_agenda_spec(path) -> list:
    """Agenda spec file: JSON list of {name, expected_concepts, prompt_intent}."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        Handler(
            name=h["name"],
            expected_concepts=frozenset(h["expected_concepts"]),
            prompt_intent=h["prompt_intent"],
        )
        for h in doc
    ]


def init_session(agenda_spec, session_id=None) -> DialogState:
    """Load the agenda in spec order; the opening response is the top
    handler's prompt intent (see DialogState.current_intent)."""
    handlers = []
    for h in agenda_spec:
        if isinstance(h, Handler):
            h = Handler(h.name, frozenset(h.expected_concepts), h.prompt_intent)
        else:
            h = Handler(
                name=h["name"],
                expected_concepts=frozenset(h["expected_concepts"]),
                prompt_intent=h["prompt_intent"],
            )
        if not h.expected_concepts:
            raise EmptyAgenda(f"handler {h.name!r} expects no concepts")
        handlers.append(h)
    if not handlers:
        raise EmptyAgenda("agenda spec is empty")
    names = [h.name for h in handlers]
    if len(set(names)) != len(names):
        raise DuplicateHandlerName("handler names must be unique")
    return DialogState(
        session_id=session_id or uuid.uuid4().hex,
        agenda=handlers,
    )


def _top_word(user_input):
    if isinstance(user_input, str):
        return user_input, False
    rejected = bool(user_input.rejected)
    word = user_input.hypotheses[0].word if user_input.hypotheses else None
    return word, rejected


def dialog_turn(
    state: DialogState,
    user_input,
    concept_map,
    renderer=None,
    on_rejected=None,
    clock=time.time,
):
    """Advance the session by one turn and return (response_intent, state).

    ``concept_map`` maps lexicon words to concept tags. ``renderer`` turns
    an intent id into the spoken text recorded in the history; ``on_rejected``
    is called with (user_input, top_handler_name) when the recognizer
    rejected the input, which is where the database feedback hook plugs in.
    Every call appends exactly one Turn.
    """
    if state.status != ACTIVE:
        raise SessionFinished(f"session {state.session_id} is finished")

    word, rejected = _top_word(user_input)
    matched = None

    if rejected:
        intent = REPEAT_INTENT
        if on_rejected is not None:
            on_rejected(user_input, state.agenda[0].name)
    else:
        tag = concept_map.get(word)
        for i, handler in enumerate(state.agenda):
            if tag is not None and tag in handler.expected_concepts:
                handler.completed = True
                handler.captured_value = word
                state.completed.append(state.agenda.pop(i))
                matched = handler.name
                break
        if matched is None:
            intent = CLARIFY_INTENT
        elif state.agenda:
            intent = state.agenda[0].prompt_intent
        else:
            intent = CLOSING_INTENT
            state.status = FINISHED

    text = renderer(intent) if renderer is not None else ""
    state.history.append(
        Turn(
            index=len(state.history),
            user_input=user_input,
            matched_handler=matched,
            response_intent=intent,
            response_text=text,
            timestamp=float(clock()),
        )
    )
    return intent, state


def transcript(state: DialogState) -> list:
    """All turns in order; one entry per dialog_turn call."""
    return list(state.history)


def transcript_to_jsonable(state: DialogState) -> list:
    """Turns as plain dicts (stable shapes for golden-transcript checks)."""
    rows = []
    for t in state.history:
        if isinstance(t.user_input, str):
            user = {"word": t.user_input}
        else:
            user = {
                "rejected": bool(t.user_input.rejected),
                "hypotheses": [
                    {"word": h.word, "combined_score": h.combined_score}
                    for h in t.user_input.hypotheses
                ],
            }
        rows.append(
            {
                "index": t.index,
                "user_input": user,
                "matched_handler": t.matched_handler,
                "response_intent": t.response_intent,
                "response_text": t.response_text,
                "timestamp": t.timestamp,
            }
        )
    return rows
