"""Corpus ingestion, immutable snapshots, reader sessions, and evaluation.

Ingest rebuilds everything (contexts, lattices, basis, frameworks, rank
tables) from the corpus bytes; the snapshot id is a digest of those bytes, so
identical input always produces the identical snapshot. Sessions talk to one
snapshot; their responses depend only on (snapshot, session history, query),
which makes recorded dialogues replayable byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime
from importlib import resources
from typing import Iterable, Mapping, Sequence

from . import meaning
from .context import normalize_label
from .errors import (
    EmptyCorpus,
    EmptyLog,
    EmptyRelevant,
    EmptyRetrieved,
    NoPendingChoice,
    ParseError,
    PendingCollapse,
    UnknownFacet,
    UnknownSession,
)
from .meaning import FrameworkCollection, Ontology, Session, load_ontology

#: Tokens removed from query text before matching.
STOP_WORDS = frozenset({"a", "an", "the", "i", "im", "for", "of", "to"})


def tokenize(text: str) -> list[str]:
    """Whitespace split, normalize, strip punctuation, drop stop words."""
    tokens = []
    for raw in text.split():
        token = "".join(ch for ch in raw.lower() if ch.isalnum() or ch == " ")
        token = normalize_label(token)
        if token and token not in STOP_WORDS:
            tokens.append(token)
    return tokens


def _parse_timestamp(raw: str, lineno: int) -> datetime:
    try:
        return datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError:
        raise ParseError(lineno, f"bad RFC 3339 timestamp {raw!r}") from None


@dataclass(frozen=True)
class Contribution:
    """One corpus line: a speaker's tagged statement about a facet."""

    contribution_id: str
    speaker_id: str
    facet: str
    tag: str
    incidence: str
    timestamp: datetime | None = None
    body: str | None = None


def parse_contributions(content: str) -> list[Contribution]:
    """Parse the TAB-separated contributions format.

    Fields: speaker, facet, tag, incidence, optional RFC 3339 timestamp,
    optional body. Lines starting with "#" are ignored. Timestamps must be
    non-decreasing in line order; they define the linear version order.
    """
    rows: list[Contribution] = []
    last_timestamp: datetime | None = None
    for lineno, raw in enumerate(content.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 4:
            raise ParseError(lineno, f"expected at least 4 TAB fields, got {len(parts)}")
        if len(parts) > 6:
            raise ParseError(lineno, f"expected at most 6 TAB fields, got {len(parts)}")
        speaker = normalize_label(parts[0])
        facet = normalize_label(parts[1])
        tag = normalize_label(parts[2])
        incidence = normalize_label(parts[3])
        if not (speaker and facet and tag and incidence):
            raise ParseError(lineno, "empty field after normalization")
        timestamp = None
        if len(parts) >= 5 and parts[4].strip():
            timestamp = _parse_timestamp(parts[4].strip(), lineno)
            if last_timestamp is not None and timestamp < last_timestamp:
                raise ParseError(lineno, "timestamps must be non-decreasing")
            last_timestamp = timestamp
        body = parts[5] if len(parts) == 6 else None
        rows.append(
            Contribution(
                contribution_id=f"c-{len(rows) + 1:04d}",
                speaker_id=speaker,
                facet=facet,
                tag=tag,
                incidence=incidence,
                timestamp=timestamp,
                body=body,
            )
        )
    if not rows:
        raise EmptyCorpus("no contribution lines")
    return rows


@dataclass(frozen=True)
class Snapshot:
    """Immutable, fully rebuilt view of one corpus version."""

    snapshot_id: str
    contributions: tuple[Contribution, ...]
    collection: FrameworkCollection
    dr_tables: Mapping[tuple[str, str], Mapping[str, float]]

    def contributions_for(self, speaker: str, facet: str, tag: str) -> list[Contribution]:
        return [
            c
            for c in self.contributions
            if c.speaker_id == speaker and c.facet == facet and c.tag == tag
        ]


def build_snapshot(content: str) -> Snapshot:
    contributions = parse_contributions(content)
    by_speaker: dict[str, list[tuple]] = {}
    for c in contributions:
        by_speaker.setdefault(c.speaker_id, []).append(
            (c.facet, c.tag, c.incidence, c.timestamp)
        )
    collection = meaning.build_speaker_frameworks(by_speaker)
    dr_tables = meaning.dr_tables_for(collection)
    digest = hashlib.sha256(content.encode("utf-8")).hexdigest()[:16]
    return Snapshot(
        snapshot_id=digest,
        contributions=tuple(contributions),
        collection=collection,
        dr_tables=dr_tables,
    )


def default_taxonomy() -> Ontology:
    """The bundled ~50-node reader taxonomy."""
    data = resources.files("folksearch.data").joinpath("taxonomy.tsv").read_text("utf-8")
    return load_ontology(data.splitlines())


# --------------------------------------------------------------------------
# Evaluation metrics
# --------------------------------------------------------------------------

def precision(retrieved: set, relevant: set) -> float:
    """Fraction of retrieved items that are relevant."""
    if not retrieved:
        raise EmptyRetrieved("precision undefined without retrieved items")
    return len(set(retrieved) & set(relevant)) / len(set(retrieved))


def recall(retrieved: set, relevant: set) -> float:
    """Fraction of relevant items that were retrieved."""
    if not relevant:
        raise EmptyRelevant("recall undefined without relevant items")
    return len(set(retrieved) & set(relevant)) / len(set(relevant))


@dataclass(frozen=True)
class QueryLogEntry:
    reader_id: str
    query: str
    tokens: tuple[str, ...] = ()
    topic: str | None = None
    visited: tuple[str, ...] = ()


@dataclass(frozen=True)
class EvalStats:
    """Aggregates over a query log, in the shape of the usual dataset tables."""

    users: int
    queries: int
    mean_queries_per_user: float
    mean_topic_preferences_per_user: float
    mean_visited_contributions_per_user: float
    mean_alternative_words_per_user: float
    mean_nodes_per_incidence_context: float
    repeated_query_fraction: float
    unique_query_fraction: float

    def as_dict(self) -> dict:
        return {
            "users": self.users,
            "queries": self.queries,
            "mean_queries_per_user": self.mean_queries_per_user,
            "mean_topic_preferences_per_user": self.mean_topic_preferences_per_user,
            "mean_visited_contributions_per_user": self.mean_visited_contributions_per_user,
            "mean_alternative_words_per_user": self.mean_alternative_words_per_user,
            "mean_nodes_per_incidence_context": self.mean_nodes_per_incidence_context,
            "repeated_query_fraction": self.repeated_query_fraction,
            "unique_query_fraction": self.unique_query_fraction,
        }

    def text_summary(self) -> str:
        lines = [
            f"Number of users\t{self.users}",
            f"Number of queries\t{self.queries}",
            f"Avg. # of queries/user\t{self.mean_queries_per_user:.2f}",
            f"Avg. # of topic preference/user\t{self.mean_topic_preferences_per_user:.2f}",
            f"Avg. # of visited speakers contribution/user\t{self.mean_visited_contributions_per_user:.2f}",
            f"Avg. # of alternative words/user\t{self.mean_alternative_words_per_user:.2f}",
            f"Avg. # of nodes/incidence context\t{self.mean_nodes_per_incidence_context:.2f}",
            f"Repeated queries\t{self.repeated_query_fraction:.0%}",
            f"Unique queries\t{self.unique_query_fraction:.0%}",
        ]
        return "\n".join(lines)


def stats(log: Sequence[QueryLogEntry], snapshot: Snapshot | None = None) -> EvalStats:
    """Table-style aggregates; alternative words are distinct tokens per user."""
    if not log:
        raise EmptyLog("no query log entries")
    readers = sorted({entry.reader_id for entry in log})
    per_reader = {r: [e for e in log if e.reader_id == r] for r in readers}

    def user_mean(value) -> float:
        return sum(value(entries) for entries in per_reader.values()) / len(readers)

    counts: dict[tuple[str, str], int] = {}
    for entry in log:
        key = (entry.reader_id, normalize_label(entry.query))
        counts[key] = counts.get(key, 0) + 1
    repeated = sum(1 for e in log if counts[(e.reader_id, normalize_label(e.query))] > 1)
    unique = len(log) - repeated

    nodes_per_context = 0.0
    if snapshot is not None and snapshot.collection.members:
        nodes_per_context = sum(
            len(m.lattice.concepts) for m in snapshot.collection.members
        ) / len(snapshot.collection.members)

    return EvalStats(
        users=len(readers),
        queries=len(log),
        mean_queries_per_user=len(log) / len(readers),
        mean_topic_preferences_per_user=user_mean(
            lambda es: len({e.topic for e in es if e.topic})
        ),
        mean_visited_contributions_per_user=user_mean(
            lambda es: len({v for e in es for v in e.visited})
        ),
        mean_alternative_words_per_user=user_mean(
            lambda es: len({t for e in es for t in (e.tokens or tokenize(e.query))})
        ),
        mean_nodes_per_incidence_context=nodes_per_context,
        repeated_query_fraction=repeated / len(log),
        unique_query_fraction=unique / len(log),
    )


def parse_query_log(content: str) -> list[QueryLogEntry]:
    """JSONL log: {"reader": ..., "query": ..., "topic"?: ..., "visited"?: [...]}."""
    entries = []
    for lineno, raw in enumerate(content.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            data = json.loads(line)
            entries.append(
                QueryLogEntry(
                    reader_id=str(data["reader"]),
                    query=str(data["query"]),
                    tokens=tuple(data.get("tokens", ())),
                    topic=data.get("topic"),
                    visited=tuple(data.get("visited", ())),
                )
            )
        except (json.JSONDecodeError, KeyError) as exc:
            raise ParseError(lineno, f"bad log entry: {exc}") from None
    return entries


def parse_judgments(content: str) -> list[tuple[str, list[str]]]:
    """Lines "query_text<TAB>id[,id...]" mapping queries to relevant ids."""
    judgments = []
    for lineno, raw in enumerate(content.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(lineno, "expected query_text<TAB>ids")
        ids = [x.strip() for x in parts[1].split(",") if x.strip()]
        if not ids:
            raise ParseError(lineno, "no contribution ids")
        judgments.append((parts[0], ids))
    return judgments


# --------------------------------------------------------------------------
# The service itself
# --------------------------------------------------------------------------

@dataclass
class SessionRecord:
    session: Session
    snapshot_id: str
    current_tags: list[str] = field(default_factory=list)
    current_query: str = ""
    current_filter: str | None = None
    offered_facets: list[str] = field(default_factory=list)
    last_choice: meaning.PendingChoice | None = None


class SearchService:
    """One writer, many readers: snapshots in, session dialogues out."""

    def __init__(self, ontology: Ontology | None = None):
        self.ontology = ontology if ontology is not None else default_taxonomy()
        self.snapshots: dict[str, Snapshot] = {}
        self.current_snapshot_id: str | None = None
        self.records: dict[str, SessionRecord] = {}
        self.query_log: list[QueryLogEntry] = []
        self._session_counter = 0

    # -- ingestion ---------------------------------------------------------

    def ingest(self, source) -> str:
        """Build a snapshot from a path, file object, or raw text."""
        if hasattr(source, "read"):
            content = source.read()
        else:
            with open(source, encoding="utf-8") as handle:
                content = handle.read()
        return self.ingest_text(content)

    def ingest_text(self, content: str) -> str:
        snapshot = build_snapshot(content)
        self.snapshots[snapshot.snapshot_id] = snapshot
        self.current_snapshot_id = snapshot.snapshot_id
        return snapshot.snapshot_id

    def snapshot(self, snapshot_id: str | None = None) -> Snapshot:
        sid = snapshot_id or self.current_snapshot_id
        if sid is None or sid not in self.snapshots:
            raise EmptyCorpus("no snapshot ingested")
        return self.snapshots[sid]

    def release_snapshot(self, snapshot_id: str) -> None:
        self.snapshots.pop(snapshot_id, None)
        if self.current_snapshot_id == snapshot_id:
            self.current_snapshot_id = None

    # -- sessions ----------------------------------------------------------

    def create_session(self, reader_id: str = "reader") -> str:
        snapshot = self.snapshot()
        self._session_counter += 1
        session_id = f"s-{self._session_counter:04d}"
        record = SessionRecord(
            session=Session(
                session_id=session_id,
                reader_id=reader_id,
                snapshot_id=snapshot.snapshot_id,
            ),
            snapshot_id=snapshot.snapshot_id,
        )
        self.records[session_id] = record
        return session_id

    def _record(self, session_id: str) -> SessionRecord:
        if session_id not in self.records:
            raise UnknownSession(f"no session {session_id!r}")
        return self.records[session_id]

    def session_view(self, session_id: str) -> dict:
        record = self._record(session_id)
        return {
            "session": session_id,
            "reader": record.session.reader_id,
            "snapshot": record.snapshot_id,
            "history": list(record.session.history),
        }

    # -- dialogue ----------------------------------------------------------

    def query(self, session_id: str, text: str) -> dict:
        record = self._record(session_id)
        tokens = tokenize(text)
        record.current_tags = tokens
        record.current_query = text
        record.current_filter = None
        record.session.pending = None
        response = self._resolve(record, kind="query")
        record.session.record(
            {"step": "query", "text": text, "tags": tokens, "status": response["status"]}
        )
        self._log_query(record, response)
        return response

    def refine(self, session_id: str, facet: str) -> dict:
        record = self._record(session_id)
        facet = normalize_label(facet)
        if facet not in record.offered_facets:
            raise UnknownFacet(f"facet {facet!r} not among offered refinements")
        record.current_filter = facet
        response = self._resolve(record, kind="refine")
        record.session.record(
            {"step": "refine", "facet": facet, "status": response["status"]}
        )
        self._log_query(record, response)
        return response

    def choose_collapse(self, session_id: str, option: str) -> dict:
        record = self._record(session_id)
        session = record.session
        pending = session.pending or record.last_choice
        if pending is None:
            raise NoPendingChoice("nothing to collapse in this session")
        chosen = meaning.collapse(pending.choice, option)
        session.decided.pop(pending.key, None)
        session.decide(pending.key, chosen, pending.choice)
        record.last_choice = pending
        response = self._resolve(record, kind="collapse")
        session.record(
            {"step": "collapse", "option": chosen.option_id, "status": response["status"]}
        )
        self._log_query(record, response)
        return response

    def _resolve(self, record: SessionRecord, kind: str) -> dict:
        snapshot = self.snapshot(record.snapshot_id)
        session = record.session
        if not record.current_tags:
            record.offered_facets = []
            return self._results_response(record, snapshot, [])
        try:
            items = meaning.resolve_query(
                record.current_tags,
                snapshot.collection,
                self.ontology,
                session,
                facet_filter=record.current_filter,
                dr_tables=snapshot.dr_tables,
            )
        except PendingCollapse as pending:
            record.last_choice = session.pending
            return {
                "status": "collapse_required",
                "snapshot": snapshot.snapshot_id,
                "session": session.session_id,
                "options": [
                    {
                        "option": o.option_id,
                        "speakers": list(o.speakers),
                        "distinct_speakers": list(o.distinct_speakers),
                        "facet": o.representative_facet,
                        "score": o.score,
                    }
                    for o in pending.choice.options
                ],
            }
        if record.current_filter is None:
            record.offered_facets = self._order_facets(snapshot, items)
        return self._results_response(record, snapshot, items)

    def _order_facets(self, snapshot: Snapshot, items: Sequence[meaning.RankedItem]) -> list[str]:
        best: dict[str, float] = {}
        for item in items:
            best[item.facet] = max(best.get(item.facet, 0.0), item.rank)
        return sorted(best, key=lambda f: (-best[f], f))

    def _results_response(
        self,
        record: SessionRecord,
        snapshot: Snapshot,
        items: Sequence[meaning.RankedItem],
    ) -> dict:
        results = []
        for item in items:
            lines = snapshot.contributions_for(item.speaker_id, item.facet, item.tag)
            if not lines:
                continue
            for line in lines:
                results.append(
                    {
                        "id": line.contribution_id,
                        "speaker": item.speaker_id,
                        "facet": item.facet,
                        "tag": item.tag,
                        "incidence": item.incidence,
                        "body": line.body,
                        "joint": item.joint,
                        "dr": item.rank,
                        "score": item.score,
                        "degree": item.degree,
                    }
                )
        return {
            "status": "ok",
            "snapshot": snapshot.snapshot_id,
            "session": record.session.session_id,
            "query": record.current_query,
            "tags": list(record.current_tags),
            "facet_filter": record.current_filter,
            "results": results,
            "refinements": list(record.offered_facets),
        }

    def _log_query(self, record: SessionRecord, response: dict) -> None:
        visited = tuple(r["id"] for r in response.get("results", ()))
        self.query_log.append(
            QueryLogEntry(
                reader_id=record.session.reader_id,
                query=record.current_query,
                tokens=tuple(record.current_tags),
                topic=record.current_filter,
                visited=visited,
            )
        )

    # -- evaluation ----------------------------------------------------------

    def service_stats(self) -> EvalStats:
        snapshot = None
        if self.current_snapshot_id is not None:
            snapshot = self.snapshots[self.current_snapshot_id]
        return stats(self.query_log, snapshot)

    def evaluate(self, judgments: Iterable[tuple[str, list[str]]]) -> dict:
        """Headless precision/recall per judged query, plus macro means."""
        snapshot = self.snapshot()
        rows = []
        precisions, recalls = [], []
        for query_text, relevant_ids in judgments:
            tokens = tokenize(query_text)
            scratch = Session(session_id="eval", reader_id="eval")
            try:
                items = meaning.resolve_query(
                    tokens,
                    snapshot.collection,
                    self.ontology,
                    scratch,
                    auto_collapse=True,
                    dr_tables=snapshot.dr_tables,
                ) if tokens else []
            except PendingCollapse:  # pragma: no cover - auto_collapse resolves
                items = []
            retrieved: list[str] = []
            for item in items:
                for line in snapshot.contributions_for(item.speaker_id, item.facet, item.tag):
                    retrieved.append(line.contribution_id)
            relevant = set(relevant_ids)
            try:
                p = precision(set(retrieved), relevant)
            except EmptyRetrieved:
                p = 0.0
            try:
                r = recall(set(retrieved), relevant)
            except EmptyRelevant:
                r = 0.0
            precisions.append(p)
            recalls.append(r)
            rows.append(
                {
                    "query": query_text,
                    "retrieved": retrieved,
                    "relevant": sorted(relevant),
                    "precision": p,
                    "recall": r,
                }
            )
        macro_p = sum(precisions) / len(precisions) if precisions else 0.0
        macro_r = sum(recalls) / len(recalls) if recalls else 0.0
        return {
            "snapshot": snapshot.snapshot_id,
            "queries": rows,
            "macro_precision": macro_p,
            "macro_recall": macro_r,
        }
