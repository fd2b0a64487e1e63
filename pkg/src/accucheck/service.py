"""HTTP service for the hybrid annotation workflow.

An annotator opens a session over a set of documents, sees machine
pre-annotations as suggestions, and edits a working mistake list per
document.  Edits are optimistic: each carries the document-state version it
was based on, and a mismatch is rejected as a stale write.  Acknowledged
edits are appended (and fsynced) to a per-session journal before the
response goes out, so a restart replays exactly the acknowledged state.

A session has one active writer, enforced by a lease that any authorized
request refreshes; reads are always allowed.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel

from .gamedata import (
    DoubleStatus,
    GameData,
    double_double_status,
    halftime_scores,
    team_leaders,
)
from .gsml import (
    GsmlError,
    Mistake,
    MistakeCategory,
    MistakeList,
    TokenizedText,
    validate_mistakes,
    write_gsml,
)

LEASE_SECONDS = 60.0

EDIT_KINDS = (
    "accept_pre", "reject_pre", "add", "remove", "move_span",
    "set_category", "set_note",
)


class ServiceError(Exception):
    def __init__(self, status_code: int, detail: str):
        self.status_code = status_code
        self.detail = detail
        super().__init__(detail)


@dataclass
class DocState:
    doc_id: str
    status: str = "pending"  # pending | in_progress | done
    version: int = 0
    working: dict[int, Mistake] = field(default_factory=dict)
    origins: dict[int, int] = field(default_factory=dict)  # mistake id -> suggestion id
    rejected: set[int] = field(default_factory=set)
    next_id: int = 1
    first_edit_at: float | None = None
    done_at: float | None = None
    edit_count: int = 0


@dataclass
class Session:
    session_id: str
    annotator_id: str  # creator; initial lease holder
    doc_ids: list[str]
    created_at: float
    docs: dict[str, DocState] = field(default_factory=dict)
    lease_holder: str = ""
    lease_expires: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionStore:
    """Sessions over one corpus of documents, suggestions, and games."""

    def __init__(
        self,
        texts: Mapping[str, TokenizedText],
        suggestions: MistakeList,
        games: Mapping[str, GameData] | None,
        state_dir: str | Path,
    ):
        report = validate_mistakes(suggestions, texts)
        if not report.ok:
            raise GsmlError(f"pre-annotation list invalid:\n{report}")
        self.texts = dict(texts)
        self.games = dict(games or {})
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.suggestions: dict[str, list[dict]] = {}
        for doc_id, doc_mistakes in suggestions.by_doc().items():
            self.suggestions[doc_id] = [
                {
                    "id": i,
                    "start": m.start,
                    "end": m.end,
                    "category": m.category.value,
                    "note": m.note,
                }
                for i, m in enumerate(sorted(doc_mistakes))
            ]
        self.sessions: dict[str, Session] = {}
        self._journals: dict[str, Any] = {}
        self._restore()

    # -- persistence --------------------------------------------------------

    def _session_dir(self, session_id: str) -> Path:
        return self.state_dir / session_id

    def _append(self, session: Session, record: dict) -> None:
        journal = self._journals[session.session_id]
        journal.write(json.dumps(record, separators=(",", ":")) + "\n")
        journal.flush()
        os.fsync(journal.fileno())

    def _restore(self) -> None:
        for meta_path in sorted(self.state_dir.glob("*/meta.json")):
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            session = Session(
                session_id=meta["session_id"],
                annotator_id=meta["annotator_id"],
                doc_ids=list(meta["doc_ids"]),
                created_at=meta["created_at"],
            )
            for doc_id in session.doc_ids:
                session.docs[doc_id] = DocState(doc_id)
            log_path = meta_path.parent / "edits.jsonl"
            if log_path.exists():
                with open(log_path, encoding="utf-8") as fh:
                    for line in fh:
                        if line.strip():
                            record = json.loads(line)
                            self._apply_record(session, record, replay=True)
            self.sessions[session.session_id] = session
            self._journals[session.session_id] = open(
                log_path, "a", encoding="utf-8"
            )

    # -- session lifecycle ---------------------------------------------------

    def create_session(
        self, annotator_id: str, doc_ids: list[str] | None = None
    ) -> Session:
        chosen = doc_ids if doc_ids is not None else sorted(self.texts)
        if len(set(chosen)) != len(chosen):
            raise ServiceError(422, "duplicate doc_id in session document set")
        unknown = [d for d in chosen if d not in self.texts]
        if unknown:
            raise ServiceError(404, f"unknown documents: {unknown}")
        if not annotator_id.strip():
            raise ServiceError(422, "annotator_id must be non-empty")
        session = Session(
            session_id=uuid.uuid4().hex[:12],
            annotator_id=annotator_id,
            doc_ids=list(chosen),
            created_at=time.time(),
            lease_holder=annotator_id,
            lease_expires=time.time() + LEASE_SECONDS,
        )
        for doc_id in chosen:
            session.docs[doc_id] = DocState(doc_id)
        sdir = self._session_dir(session.session_id)
        sdir.mkdir(parents=True)
        meta = {
            "session_id": session.session_id,
            "annotator_id": session.annotator_id,
            "doc_ids": session.doc_ids,
            "created_at": session.created_at,
        }
        (sdir / "meta.json").write_text(json.dumps(meta, indent=1), encoding="utf-8")
        self._journals[session.session_id] = open(
            sdir / "edits.jsonl", "a", encoding="utf-8"
        )
        self.sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        if session_id not in self.sessions:
            raise ServiceError(404, f"no session {session_id!r}")
        return self.sessions[session_id]

    def _check_lease(self, session: Session, annotator_id: str) -> None:
        # One active writer: the lease holder, refreshed on every write
        # (heartbeat).  Another writer may take over once the lease lapses.
        now = time.time()
        holder = session.lease_holder or session.annotator_id
        if annotator_id != holder and session.lease_expires > now:
            raise ServiceError(423, "session is leased to another writer")
        session.lease_holder = annotator_id
        session.lease_expires = now + LEASE_SECONDS

    # -- edits ----------------------------------------------------------------

    def apply_edit(
        self,
        session_id: str,
        doc_id: str,
        annotator_id: str,
        version: int,
        command: dict,
    ) -> DocState:
        session = self.get(session_id)
        with session.lock:
            self._check_lease(session, annotator_id)
            doc = self._doc(session, doc_id)
            if version != doc.version:
                raise ServiceError(
                    409,
                    f"stale write: document version is {doc.version}, "
                    f"edit was based on {version}",
                )
            if doc.status == "done" and command.get("kind") != "set_status":
                raise ServiceError(409, "document is done; reopen it to edit")
            record = {
                "type": "edit",
                "doc_id": doc_id,
                "command": command,
                "ts": time.time(),
            }
            self._apply_record(session, record, replay=False)
            self._append(session, record)
            return doc

    def _doc(self, session: Session, doc_id: str) -> DocState:
        if doc_id not in session.docs:
            raise ServiceError(404, f"document {doc_id!r} not in session")
        return session.docs[doc_id]

    def _apply_record(self, session: Session, record: dict, replay: bool) -> None:
        doc = session.docs[record["doc_id"]]
        command = record["command"]
        kind = command.get("kind")
        if kind == "set_status":
            self._set_status(doc, command, record["ts"])
        elif kind in EDIT_KINDS:
            self._apply_command(doc, command)
            if doc.status == "pending":
                doc.status = "in_progress"
            if doc.first_edit_at is None:
                doc.first_edit_at = record["ts"]
            doc.edit_count += 1
        else:
            raise ServiceError(422, f"unknown command kind {kind!r}")
        doc.version += 1

    def _set_status(self, doc: DocState, command: dict, ts: float) -> None:
        status = command.get("status")
        if status not in ("pending", "in_progress", "done"):
            raise ServiceError(422, f"unknown status {status!r}")
        doc.status = status
        doc.done_at = ts if status == "done" else None

    def _apply_command(self, doc: DocState, command: dict) -> None:
        # Work on copies; commit only after the result validates, so a
        # rejected command leaves the document exactly as it was.
        kind = command["kind"]
        working = dict(doc.working)
        origins = dict(doc.origins)
        rejected = set(doc.rejected)
        next_id = doc.next_id
        doc_id = doc.doc_id

        if kind == "accept_pre":
            suggestion = self._suggestion(doc_id, command.get("suggestion_id"))
            if suggestion["id"] not in origins.values():  # re-accept is a no-op
                working[next_id] = Mistake(
                    doc_id, suggestion["start"], suggestion["end"],
                    MistakeCategory.from_label(suggestion["category"]),
                    suggestion["note"],
                )
                origins[next_id] = suggestion["id"]
                next_id += 1
                rejected.discard(suggestion["id"])
        elif kind == "reject_pre":
            suggestion = self._suggestion(doc_id, command.get("suggestion_id"))
            rejected.add(suggestion["id"])
            for mid, sid in list(origins.items()):
                if sid == suggestion["id"]:
                    working.pop(mid, None)
                    origins.pop(mid, None)
        elif kind == "add":
            mistake = self._mistake_from(doc_id, command)
            working[next_id] = mistake
            next_id += 1
        elif kind in ("remove", "move_span", "set_category", "set_note"):
            target = command.get("mistake_id")
            if target not in working:
                raise ServiceError(404, f"no working mistake {target!r}")
            if kind == "remove":
                working.pop(target)
                origins.pop(target, None)
            elif kind == "move_span":
                old = working[target]
                working[target] = Mistake(
                    doc_id, int(command["start"]), int(command["end"]),
                    old.category, old.note,
                )
            elif kind == "set_category":
                old = working[target]
                working[target] = Mistake(
                    doc_id, old.start, old.end,
                    MistakeCategory.from_label(command["category"]), old.note,
                )
            else:
                old = working[target]
                working[target] = Mistake(
                    doc_id, old.start, old.end, old.category,
                    command.get("note") or None,
                )
        else:
            raise ServiceError(422, f"unknown command kind {kind!r}")

        report = validate_mistakes(
            MistakeList(tuple(working.values())), {doc_id: self.texts[doc_id]}
        )
        if not report.ok:
            raise ServiceError(422, f"edit rejected: {report}")
        doc.working = working
        doc.origins = origins
        doc.rejected = rejected
        doc.next_id = next_id

    def _suggestion(self, doc_id: str, suggestion_id: Any) -> dict:
        for s in self.suggestions.get(doc_id, []):
            if s["id"] == suggestion_id:
                return s
        raise ServiceError(404, f"no suggestion {suggestion_id!r} for {doc_id!r}")

    def _mistake_from(self, doc_id: str, command: dict) -> Mistake:
        try:
            return Mistake(
                doc_id,
                int(command["start"]),
                int(command["end"]),
                MistakeCategory.from_label(command["category"]),
                command.get("note") or None,
            )
        except (KeyError, ValueError, GsmlError) as exc:
            raise ServiceError(422, f"bad mistake payload: {exc}") from exc

    # -- outputs ---------------------------------------------------------------

    def export_gsml(self, session_id: str) -> str:
        session = self.get(session_id)
        with session.lock:
            entries: list[Mistake] = []
            for doc_id in session.doc_ids:
                entries.extend(sorted(session.docs[doc_id].working.values()))
            return write_gsml(MistakeList(tuple(entries)))

    def session_metrics(self, session_id: str) -> dict:
        session = self.get(session_id)
        with session.lock:
            done_docs = [d for d in session.docs.values() if d.status == "done"]
            total_suggestions = sum(
                len(self.suggestions.get(d.doc_id, [])) for d in done_docs
            )
            accepted = sum(len(d.origins) for d in done_docs)
            seconds_per_doc = {
                d.doc_id: (
                    round(d.done_at - d.first_edit_at, 3)
                    if d.done_at and d.first_edit_at else None
                )
                for d in done_docs
            }
            return {
                "docs_total": len(session.docs),
                "docs_done": len(done_docs),
                "edits": sum(d.edit_count for d in session.docs.values()),
                "suggestion_acceptance": (
                    accepted / total_suggestions if total_suggestions else None
                ),
                "seconds_per_done_doc": seconds_per_doc,
            }


# ---------------------------------------------------------------------------
# HTTP layer
# ---------------------------------------------------------------------------

class CreateSessionBody(BaseModel):
    annotator_id: str
    doc_ids: list[str] | None = None


class EditBody(BaseModel):
    annotator_id: str
    version: int
    command: dict


class StatusBody(BaseModel):
    annotator_id: str
    version: int
    status: str


def _session_payload(store: SessionStore, session: Session) -> dict:
    return {
        "session_id": session.session_id,
        "annotator_id": session.annotator_id,
        "doc_ids": session.doc_ids,
        "docs": {
            d.doc_id: {"status": d.status, "version": d.version}
            for d in session.docs.values()
        },
        "metrics": store.session_metrics(session.session_id),
    }


def _doc_payload(store: SessionStore, session: Session, doc_id: str) -> dict:
    doc = session.docs[doc_id]
    game = store.games.get(doc_id)
    return {
        "doc_id": doc_id,
        "tokens": list(store.texts[doc_id].tokens),
        "version": doc.version,
        "status": doc.status,
        "suggestions": [
            dict(s, rejected=s["id"] in doc.rejected,
                 accepted=s["id"] in doc.origins.values())
            for s in store.suggestions.get(doc_id, [])
        ],
        "working": [
            {
                "id": mid,
                "start": m.start,
                "end": m.end,
                "category": m.category.value,
                "note": m.note,
                "from_suggestion": doc.origins.get(mid),
            }
            for mid, m in sorted(doc.working.items())
        ],
        "game": _game_panel(game) if game else None,
    }


def _game_panel(game: GameData) -> dict:
    home_half, visitor_half = halftime_scores(game)
    doubles = []
    for p in game.players:
        if not p.played:
            continue
        status = double_double_status(p)
        if status is not DoubleStatus.NONE:
            doubles.append({"name": p.name, "status": status.value})

    def team_block(side: str) -> dict:
        team = game.team(side)  # type: ignore[arg-type]
        return {
            "city": team.city,
            "nickname": team.nickname,
            "wins": team.wins,
            "losses": team.losses,
            "total_points": team.total_points,
            "quarter_points": list(team.quarter_points),
            "halftime_points": home_half if side == "home" else visitor_half,
            "points_leaders": sorted(
                p.name for p in team_leaders(game, side, "points")  # type: ignore[arg-type]
            ),
            "players": [
                {
                    "name": p.name, "points": p.points, "rebounds": p.rebounds,
                    "assists": p.assists, "steals": p.steals, "blocks": p.blocks,
                    "played": p.played,
                }
                for p in game.roster(side)  # type: ignore[arg-type]
            ],
        }

    return {
        "day": game.day_of_week,
        "home": team_block("home"),
        "visitor": team_block("visitor"),
        "doubles": doubles,
    }


def create_app(store: SessionStore) -> FastAPI:
    app = FastAPI(title="accucheck annotation service")

    @app.exception_handler(ServiceError)
    async def _service_error(_, exc: ServiceError):  # type: ignore[misc]
        from fastapi.responses import JSONResponse

        return JSONResponse(
            status_code=exc.status_code, content={"detail": exc.detail}
        )

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "docs": len(store.texts)}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        session = store.create_session(body.annotator_id, body.doc_ids)
        return _session_payload(store, session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return _session_payload(store, store.get(session_id))

    @app.get("/sessions/{session_id}/docs/{doc_id}")
    def get_doc(session_id: str, doc_id: str) -> dict:
        session = store.get(session_id)
        if doc_id not in session.docs:
            raise HTTPException(404, f"document {doc_id!r} not in session")
        return _doc_payload(store, session, doc_id)

    @app.post("/sessions/{session_id}/docs/{doc_id}/edits")
    def post_edit(session_id: str, doc_id: str, body: EditBody) -> dict:
        doc = store.apply_edit(
            session_id, doc_id, body.annotator_id, body.version, body.command
        )
        session = store.get(session_id)
        return _doc_payload(store, session, doc.doc_id)

    @app.post("/sessions/{session_id}/docs/{doc_id}/status")
    def post_status(session_id: str, doc_id: str, body: StatusBody) -> dict:
        doc = store.apply_edit(
            session_id, doc_id, body.annotator_id, body.version,
            {"kind": "set_status", "status": body.status},
        )
        session = store.get(session_id)
        return _doc_payload(store, session, doc.doc_id)

    @app.post("/sessions/{session_id}/export")
    def export(session_id: str) -> Response:
        content = store.export_gsml(session_id)
        return Response(content=content, media_type="text/csv")

    return app
