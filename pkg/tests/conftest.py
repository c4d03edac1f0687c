"""Shared builders for tests.

Synthetic data is derived from SHA-256 so fixtures are bit-identical
across runs, platforms, and Python versions (the builtin hash() is
salted per process and must not be used here).
"""

from __future__ import annotations

import hashlib
from datetime import date, datetime, timedelta, timezone

from irdrift.model import (
    CorpusSnapshot,
    DocId,
    DocMeta,
    EvaluationEnvironment,
    Qrels,
    RankedDoc,
    Ranking,
    RunFile,
    TopicDef,
    TopicId,
)


def unit_hash(*parts: str) -> float:
    """Deterministic pseudo-uniform value in [0, 1) keyed by the parts."""
    digest = hashlib.sha256("|".join(parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


def make_ranking(topic: str, docs: list[str], scores: list[float] | None = None) -> Ranking:
    """Ranking with the given docs in order; scores default to n, n-1, ..."""
    if scores is None:
        scores = [float(len(docs) - i) for i in range(len(docs))]
    return Ranking(
        topic=TopicId(topic),
        entries=tuple(
            RankedDoc(doc=DocId(d), rank=i + 1, score=s)
            for i, (d, s) in enumerate(zip(docs, scores))
        ),
    )


def make_qrels(judgments: dict[tuple[str, str], int]) -> Qrels:
    return Qrels({(TopicId(t), DocId(d)): g for (t, d), g in judgments.items()})


def make_run(tag: str, label: str, rankings: dict[str, list[str]]) -> RunFile:
    return RunFile(
        system_tag=tag,
        ee_label=label,
        rankings={TopicId(t): make_ranking(t, docs) for t, docs in rankings.items()},
    )


def synth_corpus(n_docs: int, start: date = date(2019, 1, 1)) -> CorpusSnapshot:
    """Dated corpus of n docs, one per consecutive day."""
    docs: dict[DocId, DocMeta] = {}
    for i in range(n_docs):
        doc_id = DocId(f"d{i:05d}")
        docs[doc_id] = DocMeta(
            doc_id=doc_id,
            length=50 + int(unit_hash("len", str(doc_id)) * 1000),
            timestamp=datetime.combine(
                start + timedelta(days=i), datetime.min.time(), tzinfo=timezone.utc
            ),
        )
    return CorpusSnapshot(docs)


def synth_qrels(doc_ids: list[str], topics: list[str]) -> Qrels:
    """Pseudo-random judgments: ~5%% of docs relevant per topic (grade 1 or
    2), the next ~5%% judged non-relevant (grade 0)."""
    judgments: dict[tuple[TopicId, DocId], int] = {}
    for topic in topics:
        for doc in doc_ids:
            u = unit_hash("qrel", topic, doc)
            if u < 0.015:
                judgments[(TopicId(topic), DocId(doc))] = 2
            elif u < 0.05:
                judgments[(TopicId(topic), DocId(doc))] = 1
            elif u < 0.10:
                judgments[(TopicId(topic), DocId(doc))] = 0
    return Qrels(judgments)


def synth_run(tag: str, label: str, doc_ids: list[str], topics: list[str], depth: int = 100) -> RunFile:
    """A synthetic retrieval system: per topic, docs ranked by a
    deterministic pseudo-score keyed by (system, topic, doc)."""
    rankings: dict[TopicId, Ranking] = {}
    for topic in topics:
        scored = sorted(
            ((unit_hash("score", tag, topic, doc), doc) for doc in doc_ids),
            key=lambda pair: (-pair[0], pair[1]),
        )[:depth]
        rankings[TopicId(topic)] = Ranking(
            topic=TopicId(topic),
            entries=tuple(
                RankedDoc(doc=DocId(doc), rank=i + 1, score=score)
                for i, (score, doc) in enumerate(scored)
            ),
        )
    return RunFile(system_tag=tag, ee_label=label, rankings=rankings)


def make_environment(
    label: str,
    corpus: CorpusSnapshot,
    qrels: Qrels,
    topic_ids: list[str] | None = None,
) -> EvaluationEnvironment:
    if topic_ids is None:
        topics = {t: TopicDef(topic_id=t) for t in sorted(qrels.topics())}
    else:
        topics = {TopicId(t): TopicDef(topic_id=TopicId(t)) for t in topic_ids}
    return EvaluationEnvironment(label=label, corpus=corpus, topics=topics, qrels=qrels)
