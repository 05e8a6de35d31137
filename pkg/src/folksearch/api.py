"""JSON HTTP surface over the search service."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .errors import (
    EmptyCorpus,
    EmptyLog,
    FolksearchError,
    NoPendingChoice,
    ParseError,
    UnknownFacet,
    UnknownOption,
    UnknownSession,
)
from .service import SearchService, parse_judgments


class IngestRequest(BaseModel):
    content: str | None = None
    path: str | None = None


class SessionRequest(BaseModel):
    reader_id: str = "reader"


class QueryRequest(BaseModel):
    text: str


class RefineRequest(BaseModel):
    facet: str


class CollapseRequest(BaseModel):
    option: str


class EvalRequest(BaseModel):
    content: str


_STATUS = {
    UnknownSession: 404,
    UnknownFacet: 400,
    UnknownOption: 400,
    NoPendingChoice: 409,
    ParseError: 400,
    EmptyCorpus: 409,
    EmptyLog: 409,
}


def _http_error(exc: FolksearchError) -> HTTPException:
    status = _STATUS.get(type(exc), 400)
    return HTTPException(
        status_code=status,
        detail={"error": type(exc).__name__, "message": str(exc)},
    )


def create_app(service: SearchService | None = None) -> FastAPI:
    service = service if service is not None else SearchService()
    app = FastAPI(title="folksearch", version="0.1.0")
    app.state.service = service

    @app.post("/ingest")
    def ingest(request: IngestRequest):
        try:
            if request.content is not None:
                snapshot_id = service.ingest_text(request.content)
            elif request.path is not None:
                snapshot_id = service.ingest(request.path)
            else:
                raise HTTPException(status_code=400, detail="content or path required")
            snapshot = service.snapshot(snapshot_id)
        except FolksearchError as exc:
            raise _http_error(exc) from None
        return {
            "snapshot": snapshot_id,
            "contributions": len(snapshot.contributions),
            "speakers": len(snapshot.collection.members),
        }

    @app.post("/sessions")
    def create_session(request: SessionRequest):
        try:
            session_id = service.create_session(request.reader_id)
        except FolksearchError as exc:
            raise _http_error(exc) from None
        return {"session": session_id, "snapshot": service.current_snapshot_id}

    @app.post("/sessions/{session_id}/query")
    def query(session_id: str, request: QueryRequest):
        try:
            return service.query(session_id, request.text)
        except FolksearchError as exc:
            raise _http_error(exc) from None

    @app.post("/sessions/{session_id}/refine")
    def refine(session_id: str, request: RefineRequest):
        try:
            return service.refine(session_id, request.facet)
        except FolksearchError as exc:
            raise _http_error(exc) from None

    @app.post("/sessions/{session_id}/collapse")
    def collapse(session_id: str, request: CollapseRequest):
        try:
            return service.choose_collapse(session_id, request.option)
        except FolksearchError as exc:
            raise _http_error(exc) from None

    @app.get("/sessions/{session_id}")
    def session_view(session_id: str):
        try:
            return service.session_view(session_id)
        except FolksearchError as exc:
            raise _http_error(exc) from None

    @app.get("/stats")
    def service_stats():
        try:
            return service.service_stats().as_dict()
        except FolksearchError as exc:
            raise _http_error(exc) from None

    @app.post("/eval")
    def evaluate(request: EvalRequest):
        try:
            judgments = parse_judgments(request.content)
            return service.evaluate(judgments)
        except FolksearchError as exc:
            raise _http_error(exc) from None

    return app
