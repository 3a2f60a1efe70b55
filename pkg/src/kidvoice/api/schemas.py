"""Request/response models for the /api/v1 surface."""

from pydantic import BaseModel


class HypothesisModel(BaseModel):
    word: str
    acoustic_cost: float
    lm_logprob: float
    combined_score: float
    best_warp: float = 1.0


class NBestModel(BaseModel):
    hypotheses: list[HypothesisModel]
    rejected: bool = False


class RecognizeResponse(BaseModel):
    hypotheses: list[HypothesisModel]
    rejected: bool


class SessionCreateRequest(BaseModel):
    agenda: str = "default"


class SessionCreateResponse(BaseModel):
    session_id: str
    opening_intent: str
    response_text: str
    phonemes: list[str]
    agenda_size: int
    finished: bool = False


class TurnRequest(BaseModel):
    word: str | None = None
    nbest: NBestModel | None = None


class TurnResponse(BaseModel):
    response_text: str
    phonemes: list[str]
    agenda_size: int
    finished: bool
    intent: str
    matched_handler: str | None = None
    turn_index: int
    nbest: NBestModel | None = None


class TurnRecord(BaseModel):
    index: int
    user_input: dict
    matched_handler: str | None
    response_intent: str
    response_text: str
    timestamp: float


class HistoryResponse(BaseModel):
    session_id: str
    finished: bool
    turns: list[TurnRecord]


class CorpusStatsResponse(BaseModel):
    n_speakers: int
    n_recordings: int
    n_words: int
    n_templates: int
    n_associations: int
    splits: dict[str, int]
    per_speaker: dict[str, int]


class ErrorBody(BaseModel):
    code: str
    detail: str
