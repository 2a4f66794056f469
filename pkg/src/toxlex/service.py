"""HTTP service for real-time scoring and lexicon curation.

Scoring requests read an immutable snapshot (lexicon + compiled matcher)
grabbed once per request, so a response is always internally consistent
with exactly one lexicon version. Annotation writes serialize through a
single lock: annotate, recompile, then swap the snapshot atomically.
Readers never block writers and never observe a half-applied update.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .errors import LexiconSchemaError, UnknownEntryError
from .lexicon import (
    DISPUTED,
    Annotation,
    LabelSet,
    Lexicon,
    LexiconEntry,
    parse_lexicon,
    serialize_lexicon,
    upsert_annotation,
)
from .matcher import CompiledLexicon, compile_lexicon
from .scorer import ScoreConfig, score_message

MAX_BATCH = 1000


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8300
    lexicon_path: str | None = None
    secret_hex: str | None = None
    score_config: ScoreConfig = field(default_factory=ScoreConfig)
    static_dir: str | None = None
    persist_path: str | None = None  # annotation writes re-serialize here


@dataclass(frozen=True)
class Snapshot:
    lexicon: Lexicon
    compiled: CompiledLexicon


class EngineState:
    """Shared engine state with copy-on-write lexicon swaps."""

    def __init__(self, lexicon: Lexicon, score_config: ScoreConfig = ScoreConfig(),
                 persist_path: str | None = None):
        self.score_config = score_config
        self.persist_path = persist_path
        self._write_lock = threading.Lock()
        self._snapshot = Snapshot(lexicon, compile_lexicon(lexicon))

    @property
    def snapshot(self) -> Snapshot:
        # single attribute read: immutable pair, safe without a lock
        return self._snapshot

    def annotate(self, entry_id: str, annotation: Annotation,
                 expected_version: int | None = None) -> Snapshot:
        with self._write_lock:
            current = self._snapshot
            if expected_version is not None and expected_version != current.lexicon.version:
                raise VersionConflict(current.lexicon.version)
            lexicon = upsert_annotation(current.lexicon, entry_id, annotation)
            snapshot = Snapshot(lexicon, compile_lexicon(lexicon))
            self._snapshot = snapshot
            if self.persist_path:
                Path(self.persist_path).write_text(
                    serialize_lexicon(lexicon), encoding="utf-8"
                )
            return snapshot


class VersionConflict(Exception):
    def __init__(self, current_version: int):
        self.current_version = current_version
        super().__init__(f"lexicon is now at version {current_version}")


class ScoreRequest(BaseModel):
    text: str


class AnnotationRequest(BaseModel):
    annotator: str = Field(min_length=1)
    score: int = Field(ge=0, le=4)
    labels: list[str] = Field(default_factory=list)
    version: int | None = None


def entry_record(entry: LexiconEntry) -> dict:
    consensus = entry.consensus
    if consensus is DISPUTED:
        consensus_value = "DISPUTED"
    else:
        consensus_value = consensus
    return {
        "id": entry.id,
        "pattern": entry.pattern,
        "language": entry.language,
        "translation": entry.translation,
        "kind": entry.kind,
        "status": entry.status,
        "consensus": consensus_value,
        "labels": entry.labels.to_list(),
        "annotations": [
            {
                "annotator": a.annotator_id,
                "score": a.score,
                "labels": a.labels.to_list(),
                "timestamp": a.timestamp.isoformat() if a.timestamp else None,
            }
            for a in sorted(entry.annotations, key=lambda a: a.annotator_id)
        ],
    }


def score_response(snapshot: Snapshot, text: str, config: ScoreConfig) -> dict:
    """The one score wire record; the CLI emits byte-identical JSON."""
    score = score_message(snapshot.compiled, text, config)
    return score.to_record(lexicon_version=snapshot.lexicon.version)


def create_app(state: EngineState, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="toxlex", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.post("/v1/score")
    def score_one(body: ScoreRequest):
        return JSONResponse(score_response(state.snapshot, body.text, state.score_config))

    @app.post("/v1/score/batch")
    def score_batch(body: list[ScoreRequest]):
        if len(body) > MAX_BATCH:
            raise HTTPException(status_code=413,
                                detail=f"batch limited to {MAX_BATCH} messages")
        snapshot = state.snapshot
        return JSONResponse([
            score_response(snapshot, item.text, state.score_config) for item in body
        ])

    @app.get("/v1/lexicon")
    def get_lexicon(lang: str | None = None, status: str | None = None,
                    q: str | None = None):
        snapshot = state.snapshot
        entries = []
        needle = q.lower() if q else None
        for entry in sorted(snapshot.lexicon, key=lambda e: e.id):
            if lang and entry.language != lang:
                continue
            if status and entry.status != status.upper():
                continue
            if needle and not entry.pattern.lower().startswith(needle):
                continue
            entries.append(entry_record(entry))
        return {"version": snapshot.lexicon.version, "entries": entries}

    @app.get("/v1/candidates")
    def get_candidates():
        snapshot = state.snapshot
        entries = [
            entry_record(e)
            for e in sorted(snapshot.lexicon, key=lambda e: e.id)
            if e.status == "PROVISIONAL"
        ]
        return {"version": snapshot.lexicon.version, "entries": entries}

    @app.put("/v1/lexicon/{entry_id}/annotation")
    def put_annotation(entry_id: str, body: AnnotationRequest):
        try:
            labels = LabelSet.from_names(body.labels)
        except LexiconSchemaError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        annotation = Annotation(
            annotator_id=body.annotator,
            score=body.score,
            labels=labels,
            timestamp=datetime.now(timezone.utc),
        )
        try:
            snapshot = state.annotate(entry_id, annotation, body.version)
        except UnknownEntryError:
            raise HTTPException(status_code=404, detail=f"no entry {entry_id!r}") from None
        except VersionConflict as exc:
            raise HTTPException(
                status_code=409,
                detail={"message": "lexicon changed, refetch and retry",
                        "current_version": exc.current_version},
            ) from None
        return {
            "version": snapshot.lexicon.version,
            "entry": entry_record(snapshot.lexicon.get(entry_id)),
        }

    @app.get("/v1/health")
    def health():
        snapshot = state.snapshot
        return {
            "version": snapshot.lexicon.version,
            "entries": len(snapshot.lexicon),
            "compiled_entries": len(snapshot.compiled),
        }

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


def build_service(config: ServiceConfig) -> FastAPI:
    if not config.lexicon_path:
        raise ValueError("service requires a lexicon path")
    with open(config.lexicon_path, "r", encoding="utf-8") as fh:
        lexicon = parse_lexicon(fh)
    state = EngineState(lexicon, config.score_config,
                        persist_path=config.persist_path)
    return create_app(state, static_dir=config.static_dir)
