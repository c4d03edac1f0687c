"""Shared domain types for evolving test-collection evaluation.

An evaluation environment bundles one timestamped state of the three
test-collection components: the document corpus, the topic set, and the
relevance judgments (qrels). Runs hold a system's ranked results against
one such environment. All types are immutable after construction and
validate their invariants eagerly, so downstream code can rely on them
without re-checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Iterator, NamedTuple


class DocId(str):
    """Document identifier: a non-empty token without whitespace."""

    __slots__ = ()

    def __new__(cls, value: str) -> "DocId":
        if not value:
            raise ValueError("DocId must be non-empty")
        if any(ch.isspace() for ch in value):
            raise ValueError(f"DocId must not contain whitespace: {value!r}")
        return super().__new__(cls, value)


class TopicId(str):
    """Topic identifier: a non-empty token without whitespace."""

    __slots__ = ()

    def __new__(cls, value: str) -> "TopicId":
        if not value:
            raise ValueError("TopicId must be non-empty")
        if any(ch.isspace() for ch in value):
            raise ValueError(f"TopicId must not contain whitespace: {value!r}")
        return super().__new__(cls, value)


class RankedDoc(NamedTuple):
    doc: DocId
    rank: int
    score: float


@dataclass(frozen=True)
class Ranking:
    """One topic's ranked document list, best first.

    Ranks run 1..n in list order and scores are non-increasing; parsers
    canonicalize raw input into this form before construction.
    """

    topic: TopicId
    entries: tuple[RankedDoc, ...]

    def __post_init__(self) -> None:
        seen: set[DocId] = set()
        prev_score: float | None = None
        for i, entry in enumerate(self.entries):
            if entry.doc in seen:
                raise ValueError(
                    f"Ranking for topic {self.topic}: duplicate doc id {entry.doc}"
                )
            seen.add(entry.doc)
            if entry.rank != i + 1:
                raise ValueError(
                    f"Ranking for topic {self.topic}: ranks must be 1..n in order, "
                    f"got rank {entry.rank} at position {i + 1}"
                )
            if prev_score is not None and entry.score > prev_score:
                raise ValueError(
                    f"Ranking for topic {self.topic}: scores must be non-increasing, "
                    f"got {entry.score} after {prev_score}"
                )
            prev_score = entry.score

    def __len__(self) -> int:
        return len(self.entries)

    def docs(self) -> list[DocId]:
        """Document ids in rank order."""
        return [e.doc for e in self.entries]


@dataclass(frozen=True)
class RunFile:
    """A system's rankings for every topic it answered in one environment."""

    system_tag: str
    ee_label: str
    rankings: dict[TopicId, Ranking]

    def __post_init__(self) -> None:
        if not self.system_tag:
            raise ValueError("RunFile system_tag must be non-empty")
        for topic, ranking in self.rankings.items():
            if ranking.topic != topic:
                raise ValueError(
                    f"RunFile: ranking keyed {topic} carries topic {ranking.topic}"
                )

    def topics(self) -> set[TopicId]:
        return set(self.rankings)


@dataclass(frozen=True)
class Qrels:
    """Graded relevance judgments keyed by (topic, doc); grades are >= 0.

    Grades stay raw integers here; measures binarize (grade >= 1 counts as
    relevant) where their definition needs it.
    """

    judgments: dict[tuple[TopicId, DocId], int]

    def __post_init__(self) -> None:
        by_topic: dict[TopicId, dict[DocId, int]] = {}
        for (topic, doc), grade in self.judgments.items():
            if grade < 0:
                raise ValueError(
                    f"Qrels grade must be >= 0, got {grade} for ({topic}, {doc})"
                )
            by_topic.setdefault(topic, {})[doc] = grade
        # per-topic index, built once; the frozen dataclass guard is bypassed
        # deliberately for this derived cache
        object.__setattr__(self, "_by_topic", by_topic)

    def __len__(self) -> int:
        return len(self.judgments)

    def topics(self) -> set[TopicId]:
        return set(self._by_topic)

    def for_topic(self, topic: TopicId) -> dict[DocId, int]:
        """All judged docs of one topic with their grades."""
        return dict(self._by_topic.get(topic, {}))

    def relevant_docs(self, topic: TopicId) -> set[DocId]:
        """Judged docs with grade >= 1."""
        return {
            doc for doc, grade in self._by_topic.get(topic, {}).items() if grade >= 1
        }

    def nonrelevant_docs(self, topic: TopicId) -> set[DocId]:
        """Judged docs with grade 0."""
        return {
            doc for doc, grade in self._by_topic.get(topic, {}).items() if grade == 0
        }

    def restricted_to_docs(self, docs: set[DocId]) -> "Qrels":
        """Qrels containing only pairs whose document is in `docs`."""
        return Qrels(
            {
                (topic, doc): grade
                for (topic, doc), grade in self.judgments.items()
                if doc in docs
            }
        )


@dataclass(frozen=True)
class DocMeta:
    """Per-document facts a corpus manifest carries: length in characters,
    optional timestamp, optional content hash (used for update detection
    when both sides of a diff have one)."""

    doc_id: DocId
    length: int
    timestamp: datetime | None = None
    content_hash: str | None = None

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError(f"DocMeta length must be >= 0, got {self.length}")


@dataclass(frozen=True)
class CorpusSnapshot:
    """Document component of an environment: id -> metadata."""

    docs: dict[DocId, DocMeta]

    def __post_init__(self) -> None:
        for doc_id, meta in self.docs.items():
            if meta.doc_id != doc_id:
                raise ValueError(
                    f"CorpusSnapshot: entry keyed {doc_id} carries doc_id {meta.doc_id}"
                )

    def __len__(self) -> int:
        return len(self.docs)

    def __contains__(self, doc_id: DocId) -> bool:
        return doc_id in self.docs

    def __iter__(self) -> Iterator[DocId]:
        return iter(self.docs)


@dataclass(frozen=True)
class TopicDef:
    topic_id: TopicId
    text: str | None = None


@dataclass(frozen=True)
class EvaluationEnvironment:
    """One labelled snapshot of (documents, topics, qrels).

    Labels are opaque; their temporal order comes from the sequence the
    caller supplies, never from parsing the label text. Qrels topics
    missing from the topic map are tolerated at construction and surfaced
    by :func:`validate_environment` as warnings.
    """

    label: str
    corpus: CorpusSnapshot
    topics: dict[TopicId, TopicDef]
    qrels: Qrels

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("EvaluationEnvironment label must be non-empty")
        for topic_id, topic in self.topics.items():
            if topic.topic_id != topic_id:
                raise ValueError(
                    f"EvaluationEnvironment: topic keyed {topic_id} carries "
                    f"id {topic.topic_id}"
                )

    def topic_ids(self) -> set[TopicId]:
        return set(self.topics)


class MeasureKind(Enum):
    PRECISION = "p"
    NDCG = "ndcg"
    BPREF = "bpref"


@dataclass(frozen=True)
class MeasureSpec:
    """An effectiveness measure instantiation, e.g. P@10, nDCG@20, bpref.

    Precision requires a cutoff; nDCG takes an optional one (none means
    full ranking depth); bpref takes none.
    """

    kind: MeasureKind
    cutoff: int | None = None

    def __post_init__(self) -> None:
        if self.kind is MeasureKind.PRECISION:
            if self.cutoff is None or self.cutoff < 1:
                raise ValueError("precision measure requires cutoff >= 1")
        elif self.kind is MeasureKind.BPREF:
            if self.cutoff is not None:
                raise ValueError("bpref takes no cutoff")
        elif self.cutoff is not None and self.cutoff < 1:
            raise ValueError("ndcg cutoff must be >= 1 when given")

    @property
    def name(self) -> str:
        """Canonical spelling: p@K, ndcg, ndcg@K, bpref."""
        if self.kind is MeasureKind.BPREF:
            return "bpref"
        if self.cutoff is None:
            return self.kind.value
        return f"{self.kind.value}@{self.cutoff}"

    @classmethod
    def parse(cls, text: str) -> "MeasureSpec":
        """Parse a canonical measure name (case-insensitive)."""
        base, _, cut = text.strip().lower().partition("@")
        cutoff: int | None = None
        if cut:
            try:
                cutoff = int(cut)
            except ValueError:
                raise ValueError(f"bad measure cutoff in {text!r}") from None
        if base == "p":
            if cutoff is None:
                raise ValueError(f"precision measure needs a cutoff: {text!r}")
            return cls(MeasureKind.PRECISION, cutoff)
        if base == "ndcg":
            return cls(MeasureKind.NDCG, cutoff)
        if base == "bpref":
            if cutoff is not None:
                raise ValueError(f"bpref takes no cutoff: {text!r}")
            return cls(MeasureKind.BPREF)
        raise ValueError(f"unknown measure {text!r} (expected p@K, ndcg[@K], bpref)")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PerTopicScores:
    """Per-topic effectiveness of one system under one measure in one EE."""

    measure: MeasureSpec
    system_tag: str
    ee_label: str
    scores: dict[TopicId, float]

    def __post_init__(self) -> None:
        for topic, score in self.scores.items():
            if not 0.0 <= score <= 1.0:
                raise ValueError(
                    f"per-topic score must lie in [0, 1], got {score} for {topic}"
                )

    def topics(self) -> set[TopicId]:
        return set(self.scores)


@dataclass(frozen=True)
class ValidationFinding:
    severity: str  # "warning" or "error"
    location: str
    message: str


def validate_environment(ee: EvaluationEnvironment) -> list[ValidationFinding]:
    """Cross-component consistency checks over an assembled environment.

    Type-level invariants are already guaranteed at construction; this
    reports the soft issues that are tolerated but worth surfacing: qrels
    topics missing from the topic set and judged documents absent from the
    corpus snapshot. Returns an empty list iff nothing was found.
    """
    findings: list[ValidationFinding] = []
    topic_ids = ee.topic_ids()
    for topic in sorted(ee.qrels.topics() - topic_ids):
        findings.append(
            ValidationFinding(
                severity="warning",
                location=f"qrels topic {topic}",
                message=f"qrels topic {topic} does not appear in the topic set",
            )
        )
    missing_docs = sorted(
        {doc for (_, doc) in ee.qrels.judgments if doc not in ee.corpus}
    )
    for doc in missing_docs:
        findings.append(
            ValidationFinding(
                severity="warning",
                location=f"qrels doc {doc}",
                message=f"judged document {doc} is absent from the corpus snapshot",
            )
        )
    return findings
