"""Create/update/delete statistics between two evaluation environments.

Each of the three components diffs by identifier: documents by doc id,
topics by topic id, qrels by (topic, doc) pair. An identifier present in
both snapshots counts as updated when its payload changed — document
length (or content hash when both sides carry one), topic text, or grade.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Hashable

from .model import CorpusSnapshot, EvaluationEnvironment, Qrels, TopicDef, TopicId


@dataclass(frozen=True)
class ComponentDiff:
    """Identifier-level change sets between two snapshots of one component.

    ``relative_delta`` is the signed total growth (to - from) / from; it is
    +inf when the first snapshot was empty and the second is not, and 0
    when both are empty.
    """

    created: frozenset
    updated: frozenset
    deleted: frozenset
    total_from: int
    total_to: int
    relative_delta: float

    def __post_init__(self) -> None:
        if self.created & self.deleted:
            raise ValueError("created and deleted sets must be disjoint")
        if self.total_from < 0 or self.total_to < 0:
            raise ValueError("totals must be >= 0")
        if self.total_to != self.total_from + len(self.created) - len(self.deleted):
            raise ValueError(
                "inconsistent totals: total_to must equal "
                "total_from + |created| - |deleted|"
            )

    @classmethod
    def build(
        cls,
        created: set,
        updated: set,
        deleted: set,
        total_from: int,
        total_to: int,
    ) -> "ComponentDiff":
        if total_from > 0:
            delta = (total_to - total_from) / total_from
        elif total_to > 0:
            delta = math.inf
        else:
            delta = 0.0
        return cls(
            created=frozenset(created),
            updated=frozenset(updated),
            deleted=frozenset(deleted),
            total_from=total_from,
            total_to=total_to,
            relative_delta=delta,
        )


@dataclass(frozen=True)
class ChangeSummary:
    """Component diffs for one ordered pair of environments."""

    from_label: str
    to_label: str
    documents: ComponentDiff
    topics: ComponentDiff
    qrels: ComponentDiff


def _diff_ids(a: dict, b: dict, changed: Callable[[Hashable], bool]) -> ComponentDiff:
    ids_a = set(a)
    ids_b = set(b)
    created = ids_b - ids_a
    deleted = ids_a - ids_b
    updated = {key for key in ids_a & ids_b if changed(key)}
    return ComponentDiff.build(created, updated, deleted, len(ids_a), len(ids_b))


def diff_documents(a: CorpusSnapshot, b: CorpusSnapshot) -> ComponentDiff:
    """Diff two corpus snapshots by doc id.

    Updates are detected by comparing string lengths for documents sharing
    an id; when both sides carry a content hash, the hash comparison takes
    precedence (length collisions can hide updates).
    """

    def changed(doc_id) -> bool:
        meta_a = a.docs[doc_id]
        meta_b = b.docs[doc_id]
        if meta_a.content_hash is not None and meta_b.content_hash is not None:
            return meta_a.content_hash != meta_b.content_hash
        return meta_a.length != meta_b.length

    return _diff_ids(a.docs, b.docs, changed)


def diff_topics(
    a: dict[TopicId, TopicDef], b: dict[TopicId, TopicDef]
) -> ComponentDiff:
    """Diff two topic maps by id; an update is a text change, detected only
    when both sides carry text."""

    def changed(topic_id) -> bool:
        text_a = a[topic_id].text
        text_b = b[topic_id].text
        return text_a is not None and text_b is not None and text_a != text_b

    return _diff_ids(a, b, changed)


def diff_qrels(a: Qrels, b: Qrels) -> ComponentDiff:
    """Diff two qrels sets by (topic, doc) pair; an update is a changed grade."""

    def changed(pair) -> bool:
        return a.judgments[pair] != b.judgments[pair]

    return _diff_ids(a.judgments, b.judgments, changed)


def summarize(
    a: EvaluationEnvironment, b: EvaluationEnvironment
) -> ChangeSummary:
    """Bundle the three component diffs for an ordered environment pair."""
    return ChangeSummary(
        from_label=a.label,
        to_label=b.label,
        documents=diff_documents(a.corpus, b.corpus),
        topics=diff_topics(a.topics, b.topics),
        qrels=diff_qrels(a.qrels, b.qrels),
    )
