"""HTTP service wiring the pipeline: recognition, dialog sessions, corpus stats.

State lives in the data directory (env KIDVOICE_DATA_DIR or the create_app
argument): corpus manifest, enrolled templates, language model, response
templates, G2P rules and agenda specs. The service itself keeps only the
session registry in memory, so a restart with the same files reproduces
identical recognition responses.
"""

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import dialog as dlg
from ..audio import PreprocessConfig
from ..corpus import CorpusStore
from ..errors import (
    CorruptHeader,
    EmptySignal,
    EmptyTemplateStore,
    KidvoiceError,
    MissingSlot,
    NoTemplates,
    SessionFinished,
    TooFewFrames,
    UnknownIntent,
    UnknownKeyword,
    UnknownSession,
    UnknownWord,
    UnsupportedFormat,
)
from ..features import FeatureConfig
from ..generation import generate_response, load_g2p_rules, load_templates, phonemize
from ..lm import load_model, train_unigram
from ..pipeline import FrontEnd
from ..recognizer import (
    DecoderConfig,
    Hypothesis,
    NBestList,
    TemplateStore,
    feedback_unrecognized,
    recognize,
)
from . import schemas

API_PREFIX = "/api/v1"

_ERROR_STATUS = {
    UnsupportedFormat: 400,
    CorruptHeader: 400,
    EmptySignal: 400,
    TooFewFrames: 400,
    UnknownWord: 400,
    UnknownKeyword: 400,
    NoTemplates: 409,
    EmptyTemplateStore: 409,
    SessionFinished: 409,
    UnknownSession: 404,
    UnknownIntent: 500,
    MissingSlot: 500,
}


def load_configs(data_dir: Path):
    """config.json sections mirror the config dataclass field names."""
    doc = {}
    path = data_dir / "config.json"
    if path.exists():
        doc = json.loads(path.read_text(encoding="utf-8"))
    pre = PreprocessConfig(**doc.get("preprocess", {}))
    feat_kwargs = doc.get("features", {})
    if "vtln_grid" in feat_kwargs:
        feat_kwargs["vtln_grid"] = tuple(feat_kwargs["vtln_grid"])
    feat = FeatureConfig(**feat_kwargs)
    decoder = DecoderConfig(**doc.get("decoder", {}))
    return pre, feat, decoder


@dataclass
class Session:
    state: dlg.DialogState
    created_at: float = field(default_factory=time.time)


class ServiceContext:
    """Everything the routes need, loaded once per app instance."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        pre, feat, decoder = load_configs(self.data_dir)
        self.frontend = FrontEnd(pre, feat)
        self.decoder_cfg = decoder

        self.store = CorpusStore.open(self.data_dir)
        self.templates: TemplateStore | None = None
        tpl_dir = self.data_dir / "templates"
        if (tpl_dir / "templates.json").exists() and self.store.lexicon is not None:
            self.templates = TemplateStore.load(tpl_dir, self.store.lexicon)

        lm_path = self.data_dir / "lm.json"
        if lm_path.exists():
            self.lm = load_model(lm_path)
        elif self.store.lexicon is not None and (self.data_dir / "freq_dict.tsv").exists():
            from ..corpus import load_freq_dict

            self.lm = train_unigram(
                load_freq_dict(self.data_dir / "freq_dict.tsv"), self.store.lexicon
            )
        else:
            self.lm = None

        self.response_templates = load_templates(self.data_dir / "responses.json")
        self.g2p = load_g2p_rules(self.data_dir / "g2p_rules.json")

        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()

    def require_templates(self) -> TemplateStore:
        if self.templates is None or len(self.templates) == 0:
            raise NoTemplates("no templates enrolled; run `kidvoice enroll` first")
        return self.templates

    def agenda_path(self, agenda_id: str) -> Path:
        return self.data_dir / "agendas" / f"{agenda_id}.json"

    def render(self, intent: str) -> tuple[str, list[str]]:
        text = generate_response(intent, {}, self.response_templates)
        return text, list(phonemize(text, self.g2p))

    def run_recognize(self, wav: bytes) -> NBestList:
        templates = self.require_templates()
        frames = self.frontend.frames_from_wav(wav)
        feats = self.frontend.features_from_frames(frames)
        variants = (
            self.frontend.warp_variants(frames) if self.decoder_cfg.vtln_search else None
        )
        return recognize(feats, templates, self.lm, self.decoder_cfg, variants)

    def get_session(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no session {session_id!r}")
        return session


def _nbest_to_model(nbest: NBestList) -> schemas.NBestModel:
    return schemas.NBestModel(
        hypotheses=[
            schemas.HypothesisModel(
                word=h.word,
                acoustic_cost=h.acoustic_cost,
                lm_logprob=h.lm_logprob,
                combined_score=h.combined_score,
                best_warp=h.best_warp,
            )
            for h in nbest.hypotheses
        ],
        rejected=nbest.rejected,
    )


def _nbest_from_model(model: schemas.NBestModel) -> NBestList:
    return NBestList(
        hypotheses=[
            Hypothesis(
                word=h.word,
                acoustic_cost=h.acoustic_cost,
                lm_logprob=h.lm_logprob,
                combined_score=h.combined_score,
                best_warp=h.best_warp,
            )
            for h in model.hypotheses
        ],
        rejected=model.rejected,
    )


def create_app(data_dir=None, static_dir=None) -> FastAPI:
    data_dir = Path(
        data_dir or os.environ.get("KIDVOICE_DATA_DIR", "kidvoice-data")
    )
    ctx = ServiceContext(data_dir)
    app = FastAPI(title="kidvoice", version="0.1.0")
    app.state.ctx = ctx

    @app.exception_handler(KidvoiceError)
    async def domain_error(_request, exc: KidvoiceError):
        status = 500
        for cls, code in _ERROR_STATUS.items():
            if isinstance(exc, cls):
                status = code
                break
        return JSONResponse(
            status_code=status,
            content={"code": type(exc).__name__, "detail": str(exc)},
        )

    @app.post(f"{API_PREFIX}/recognize", response_model=schemas.RecognizeResponse)
    async def recognize_route(request: Request):
        wav = await request.body()
        nbest = ctx.run_recognize(wav)
        model = _nbest_to_model(nbest)
        return schemas.RecognizeResponse(
            hypotheses=model.hypotheses, rejected=model.rejected
        )

    @app.post(f"{API_PREFIX}/sessions", response_model=schemas.SessionCreateResponse)
    async def create_session(body: schemas.SessionCreateRequest):
        path = ctx.agenda_path(body.agenda)
        if not path.exists():
            return JSONResponse(
                status_code=404,
                content={"code": "UnknownAgenda", "detail": f"no agenda {body.agenda!r}"},
            )
        state = dlg.init_session(dlg.load_agenda_spec(path))
        with ctx.lock:
            ctx.sessions[state.session_id] = Session(state=state)
        intent = state.current_intent()
        text, phonemes = ctx.render(intent)
        return schemas.SessionCreateResponse(
            session_id=state.session_id,
            opening_intent=intent,
            response_text=text,
            phonemes=phonemes,
            agenda_size=len(state.agenda),
            finished=state.finished,
        )

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/turn", response_model=schemas.TurnResponse)
    async def turn_route(session_id: str, request: Request):
        session = ctx.get_session(session_id)
        content_type = request.headers.get("content-type", "")

        nbest_model = None
        if content_type.startswith("audio/") or content_type == "application/octet-stream":
            nbest = ctx.run_recognize(await request.body())
            nbest_model = _nbest_to_model(nbest)
            user_input = nbest
        else:
            body = schemas.TurnRequest.model_validate(await request.json())
            if body.nbest is not None:
                user_input = _nbest_from_model(body.nbest)
                nbest_model = body.nbest
            elif body.word:
                user_input = body.word
            else:
                return JSONResponse(
                    status_code=422,
                    content={"code": "BadTurnRequest", "detail": "provide word or nbest"},
                )

        def on_rejected(nb, context):
            if ctx.store.lexicon is not None and nb.hypotheses:
                utt_id = f"turn-{session_id[:8]}-{len(session.state.history)}"
                try:
                    feedback_unrecognized(utt_id, nb, context, ctx.store)
                    ctx.store.save()
                except UnknownKeyword:
                    pass  # hypothesis outside the live lexicon; nothing to record

        with ctx.lock:
            intent, state = dlg.dialog_turn(
                session.state,
                user_input,
                ctx.store.lexicon.concept_map() if ctx.store.lexicon else {},
                renderer=lambda i: ctx.render(i)[0],
                on_rejected=on_rejected,
            )
        turn = state.history[-1]
        text, phonemes = ctx.render(intent)
        return schemas.TurnResponse(
            response_text=text,
            phonemes=phonemes,
            agenda_size=len(state.agenda),
            finished=state.finished,
            intent=intent,
            matched_handler=turn.matched_handler,
            turn_index=turn.index,
            nbest=nbest_model,
        )

    @app.get(f"{API_PREFIX}/sessions/{{session_id}}/history", response_model=schemas.HistoryResponse)
    async def history_route(session_id: str):
        session = ctx.get_session(session_id)
        rows = dlg.transcript_to_jsonable(session.state)
        return schemas.HistoryResponse(
            session_id=session_id,
            finished=session.state.finished,
            turns=[
                schemas.TurnRecord(
                    index=r["index"],
                    user_input=r["user_input"],
                    matched_handler=r["matched_handler"],
                    response_intent=r["response_intent"],
                    response_text=r["response_text"],
                    timestamp=r["timestamp"],
                )
                for r in rows
            ],
        )

    @app.get(f"{API_PREFIX}/corpus/stats", response_model=schemas.CorpusStatsResponse)
    async def stats_route():
        store = ctx.store
        splits: dict[str, int] = {}
        for rec in store.recordings.values():
            splits[rec.split] = splits.get(rec.split, 0) + 1
        return schemas.CorpusStatsResponse(
            n_speakers=len(store.speakers),
            n_recordings=len(store.recordings),
            n_words=0 if store.lexicon is None else len(store.lexicon),
            n_templates=0 if ctx.templates is None else len(ctx.templates),
            n_associations=len(store.associations),
            splits=dict(sorted(splits.items())),
            per_speaker={
                sid: store.word_tally(sid) for sid in sorted(store.speakers)
            },
        )

    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True))

    return app
