"""Corpus loading, validation, and statistics for DocRED-schema data.

A corpus file is a JSON array of document records with keys "title",
"sents" (array of token arrays), "vertexSet" (one mention cluster per
entity) and optionally "labels" (gold triples).  Documents are frozen
dataclasses and safe to share across threads.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

ENTITY_TYPES = frozenset({"PER", "LOC", "ORG", "TIME", "NUM", "MISC"})

_P_CODE = re.compile(r"^P[0-9]+$")


@dataclass(frozen=True)
class RelationId:
    """One predefined relation: Wikidata property code plus display name."""

    code: str
    name: str

    def __post_init__(self) -> None:
        if not _P_CODE.match(self.code):
            raise ValidationError(f"relation code {self.code!r} is not of the form P<digits>")
        if not self.name or not self.name.strip():
            raise ValidationError(f"relation {self.code} has an empty name")


class RelationRegistry:
    """Ordered set of relations, addressable by code and by case-folded name.

    An optional alias map resolves extra surface labels (case-folded) to
    codes already present in the registry.
    """

    def __init__(self, entries: Iterable[RelationId], alias_map: Mapping[str, str] | None = None):
        self.entries: tuple[RelationId, ...] = tuple(entries)
        if not self.entries:
            raise ValidationError("relation registry is empty")
        self.by_code: dict[str, RelationId] = {}
        self.by_name: dict[str, RelationId] = {}
        self._position: dict[str, int] = {}
        for pos, rel in enumerate(self.entries):
            if rel.code in self.by_code:
                raise ValidationError(f"duplicate relation code {rel.code}")
            folded = rel.name.casefold()
            if folded in self.by_name:
                raise ValidationError(f"duplicate relation name {rel.name!r}")
            self.by_code[rel.code] = rel
            self.by_name[folded] = rel
            self._position[rel.code] = pos
        self.alias_map: dict[str, str] = {}
        for surface, code in (alias_map or {}).items():
            if code not in self.by_code:
                raise ValidationError(f"alias {surface!r} targets unknown relation code {code}")
            self.alias_map[surface.casefold()] = code

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, code: str) -> bool:
        return code in self.by_code

    def position(self, code: str) -> int:
        """Registry order of a code; raises ValidationError for unknown codes."""
        try:
            return self._position[code]
        except KeyError:
            raise ValidationError(f"unknown relation code {code!r}") from None

    def name_of(self, code: str) -> str:
        try:
            return self.by_code[code].name
        except KeyError:
            raise ValidationError(f"unknown relation code {code!r}") from None

    def with_aliases(self, alias_map: Mapping[str, str]) -> "RelationRegistry":
        """A copy of this registry with the given alias map installed."""
        return RelationRegistry(self.entries, alias_map)


@dataclass(frozen=True)
class Mention:
    """One surface occurrence of an entity: half-open token span in a sentence."""

    name: str
    sent_id: int
    start: int
    end: int
    etype: str


@dataclass(frozen=True)
class Entity:
    index: int
    mentions: tuple[Mention, ...]

    def representative_name(self) -> str:
        """Longest mention surface; ties go to the earliest mention."""
        return max(self.mentions, key=lambda m: len(m.name)).name


@dataclass(frozen=True)
class GoldTriple:
    h: int
    t: int
    r: str
    evidence: tuple[int, ...] = ()


@dataclass(frozen=True)
class Document:
    title: str
    sents: tuple[tuple[str, ...], ...]
    entities: tuple[Entity, ...]
    gold: tuple[GoldTriple, ...] = ()


@dataclass(frozen=True)
class CorpusStats:
    n_docs: int
    mean_entities: float
    mean_sentences: float
    mean_triples: float


def validate_document(doc: Document) -> None:
    """Raise ValidationError naming the document and offending field."""
    where = f"document {doc.title!r}"
    for ent in doc.entities:
        if not ent.mentions:
            raise ValidationError(f"{where}: entity {ent.index} has no mentions")
        for m in ent.mentions:
            if not m.name:
                raise ValidationError(f"{where}: entity {ent.index} has a mention with empty name")
            if m.etype not in ENTITY_TYPES:
                raise ValidationError(f"{where}: entity {ent.index} has unknown type {m.etype!r}")
            if not 0 <= m.sent_id < len(doc.sents):
                raise ValidationError(f"{where}: mention {m.name!r} sent_id {m.sent_id} out of range")
            sent_len = len(doc.sents[m.sent_id])
            if not 0 <= m.start < m.end <= sent_len:
                raise ValidationError(
                    f"{where}: mention {m.name!r} span [{m.start}, {m.end}) invalid for "
                    f"sentence {m.sent_id} of length {sent_len}"
                )
    n = len(doc.entities)
    for g in doc.gold:
        if g.h == g.t:
            raise ValidationError(f"{where}: gold triple has h == t == {g.h}")
        if not (0 <= g.h < n and 0 <= g.t < n):
            raise ValidationError(f"{where}: gold triple ({g.h}, {g.r}, {g.t}) out of entity bounds")
        if not _P_CODE.match(g.r):
            raise ValidationError(f"{where}: gold relation {g.r!r} is not a P-code")
        for ev in g.evidence:
            if not 0 <= ev < len(doc.sents):
                raise ValidationError(f"{where}: evidence sentence {ev} out of range")


def _parse_record(rec: object, index: int, expect_gold: bool) -> Document:
    if not isinstance(rec, dict):
        raise ParseError(f"record {index}: expected an object, got {type(rec).__name__}")
    title = rec.get("title")
    if not isinstance(title, str) or not title:
        raise ParseError(f"record {index}: missing or empty 'title'")
    sents_raw = rec.get("sents")
    if not isinstance(sents_raw, list):
        raise ParseError(f"record {index} ({title!r}): missing 'sents' array")
    sents = []
    for si, s in enumerate(sents_raw):
        if not isinstance(s, list) or not all(isinstance(tok, str) for tok in s):
            raise ParseError(f"record {index} ({title!r}): sentence {si} is not a token array")
        sents.append(tuple(s))
    vertex_set = rec.get("vertexSet")
    if not isinstance(vertex_set, list):
        raise ParseError(f"record {index} ({title!r}): missing 'vertexSet' array")
    entities = []
    for ei, cluster in enumerate(vertex_set):
        if not isinstance(cluster, list):
            raise ParseError(f"record {index} ({title!r}): vertexSet[{ei}] is not an array")
        mentions = []
        for m in cluster:
            if not isinstance(m, dict):
                raise ParseError(f"record {index} ({title!r}): mention of entity {ei} is not an object")
            pos = m.get("pos")
            if not (isinstance(pos, list) and len(pos) == 2 and all(isinstance(p, int) for p in pos)):
                raise ParseError(f"record {index} ({title!r}): entity {ei} mention has bad 'pos'")
            mentions.append(
                Mention(
                    name=str(m.get("name", "")),
                    sent_id=int(m.get("sent_id", -1)),
                    start=pos[0],
                    end=pos[1],
                    etype=str(m.get("type", "")),
                )
            )
        entities.append(Entity(index=ei, mentions=tuple(mentions)))
    if expect_gold and "labels" not in rec:
        raise ValidationError(f"document {title!r}: gold labels expected but 'labels' key is absent")
    labels_raw = rec.get("labels", [])
    if not isinstance(labels_raw, list):
        raise ParseError(f"record {index} ({title!r}): 'labels' is not an array")
    gold = []
    for li, lab in enumerate(labels_raw):
        if not isinstance(lab, dict) or not all(k in lab for k in ("h", "t", "r")):
            raise ParseError(f"record {index} ({title!r}): label {li} missing h/t/r")
        evidence = lab.get("evidence", [])
        if not (isinstance(evidence, list) and all(isinstance(e, int) for e in evidence)):
            raise ParseError(f"record {index} ({title!r}): label {li} has bad 'evidence'")
        gold.append(GoldTriple(h=int(lab["h"]), t=int(lab["t"]), r=str(lab["r"]), evidence=tuple(evidence)))
    doc = Document(title=title, sents=tuple(sents), entities=tuple(entities), gold=tuple(gold))
    validate_document(doc)
    return doc


def load_corpus(path: str | Path, expect_gold: bool = False, permissive: bool = False) -> list[Document]:
    """Load a corpus file, preserving document order.

    Strict by default: the first malformed record or invariant violation
    raises.  With permissive=True invalid records are dropped and counted
    in a warning instead.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(raw, list):
        raise ParseError(f"{path}: expected a JSON array of documents")
    docs: list[Document] = []
    dropped = 0
    for i, rec in enumerate(raw):
        try:
            docs.append(_parse_record(rec, i, expect_gold))
        except (ParseError, ValidationError) as exc:
            if not permissive:
                raise
            dropped += 1
            logger.warning("dropping record %d from %s: %s", i, path, exc)
    if dropped:
        logger.warning("dropped %d invalid record(s) out of %d from %s", dropped, len(raw), path)
    return docs


def document_to_record(doc: Document) -> dict:
    """Serialize a Document back to the input JSON schema."""
    return {
        "title": doc.title,
        "sents": [list(s) for s in doc.sents],
        "vertexSet": [
            [
                {"name": m.name, "sent_id": m.sent_id, "pos": [m.start, m.end], "type": m.etype}
                for m in ent.mentions
            ]
            for ent in doc.entities
        ],
        "labels": [
            {"h": g.h, "t": g.t, "r": g.r, "evidence": list(g.evidence)} for g in doc.gold
        ],
    }


def save_corpus(docs: Iterable[Document], path: str | Path) -> None:
    records = [document_to_record(d) for d in docs]
    Path(path).write_text(json.dumps(records, ensure_ascii=False), encoding="utf-8")


def load_relation_registry(path: str | Path, alias_path: str | Path | None = None) -> RelationRegistry:
    """Load a registry from a JSON object mapping P-code -> name.

    The optional alias file is a JSON object mapping surface label -> P-code.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: expected a JSON object mapping code -> name")
    if not raw:
        raise ValidationError(f"{path}: relation file is empty")
    entries = [RelationId(code=str(code), name=str(name)) for code, name in raw.items()]
    alias_map: dict[str, str] = {}
    if alias_path is not None:
        alias_path = Path(alias_path)
        try:
            alias_raw = json.loads(alias_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{alias_path}: not valid JSON ({exc})") from exc
        if not isinstance(alias_raw, dict):
            raise ParseError(f"{alias_path}: expected a JSON object mapping surface -> code")
        alias_map = {str(k): str(v) for k, v in alias_raw.items()}
    return RelationRegistry(entries, alias_map)


def candidate_pairs(doc: Document) -> list[tuple[int, int]]:
    """All n*(n-1) ordered pairs of distinct entity indices, lexicographic."""
    n = len(doc.entities)
    return [(h, t) for h in range(n) for t in range(n) if h != t]


def corpus_stats(docs: list[Document]) -> CorpusStats:
    if not docs:
        raise ValidationError("cannot compute statistics over an empty corpus")
    n = len(docs)
    return CorpusStats(
        n_docs=n,
        mean_entities=sum(len(d.entities) for d in docs) / n,
        mean_sentences=sum(len(d.sents) for d in docs) / n,
        mean_triples=sum(len(d.gold) for d in docs) / n,
    )
