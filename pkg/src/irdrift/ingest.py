"""Parsers and writers for the on-disk formats.

Supported formats:

* run files: 6 whitespace-separated columns ``topic Q0 doc rank score tag``
  (the ``Q0`` literal is accepted case-insensitively),
* qrels: 4 columns ``topic iteration doc grade``,
* corpus manifests: JSON lines with ``doc_id``, ``length``, optional
  ``timestamp`` (ISO-8601 date or instant) and optional ``hash``,
* topic files: JSON lines with ``topic_id`` and optional ``text``,
* environment configs: one JSON array of entries ``{label, manifest,
  qrels, topics?}``; array order defines the temporal sequence t0..tn.

Parsing is strict: every input line either contributes data or raises
:class:`ParseError` naming its line number. Recoverable oddities (mixed
run tags, duplicate identical qrels, negative grades) emit
:class:`IngestWarning` instead. Run rankings are canonicalized on ingest:
entries are re-sorted by (score descending, doc id ascending) and ranks
renumbered 1..n, trusting scores over the file's rank column.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Iterable

from .model import (
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
    validate_environment,
)


class ParseError(ValueError):
    """Malformed input; the message carries file/line context."""


class IngestWarning(UserWarning):
    """Recoverable input oddity that was repaired or ignored."""


@dataclass(frozen=True)
class EEConfig:
    """One environment's file locations, as listed in a config document."""

    label: str
    manifest_path: Path
    qrels_path: Path
    topics_path: Path | None = None

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("EEConfig label must be non-empty")
        if not str(self.manifest_path):
            raise ValueError("EEConfig manifest_path must be non-empty")
        if not str(self.qrels_path):
            raise ValueError("EEConfig qrels_path must be non-empty")


def _tokens(line: str) -> list[str]:
    return line.split()


def parse_run(lines: Iterable[str], expected_ee_label: str) -> RunFile:
    """Parse a TREC-format run, canonicalizing each topic's ranking.

    The system tag is taken from column 6 of the first line; later lines
    with a different tag warn and keep the first. Duplicate (topic, doc)
    pairs are errors.
    """
    system_tag: str | None = None
    by_topic: dict[TopicId, list[tuple[DocId, float]]] = {}
    seen_pairs: set[tuple[TopicId, DocId]] = set()
    for lineno, raw in enumerate(lines, start=1):
        cols = _tokens(raw)
        if not cols:
            continue
        if len(cols) != 6:
            raise ParseError(
                f"line {lineno}: expected 6 columns (topic Q0 doc rank score tag), "
                f"got {len(cols)}"
            )
        topic_s, q0, doc_s, rank_s, score_s, tag = cols
        if q0.lower() != "q0":
            raise ParseError(f"line {lineno}: column 2 must be the literal Q0, got {q0!r}")
        try:
            topic = TopicId(topic_s)
            doc = DocId(doc_s)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        try:
            int(rank_s)  # the rank column is validated but not trusted
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric rank {rank_s!r}") from None
        try:
            score = float(score_s)
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric score {score_s!r}") from None
        if (topic, doc) in seen_pairs:
            raise ParseError(f"line {lineno}: duplicate entry for topic {topic}, doc {doc}")
        seen_pairs.add((topic, doc))
        if system_tag is None:
            system_tag = tag
        elif tag != system_tag:
            warnings.warn(
                f"line {lineno}: mixed run tags ({tag!r} after {system_tag!r}); "
                f"keeping the first",
                IngestWarning,
                stacklevel=2,
            )
        by_topic.setdefault(topic, []).append((doc, score))
    if system_tag is None:
        raise ParseError("empty run: no lines to take a system tag from")
    rankings = {
        topic: _canonical_ranking(topic, entries)
        for topic, entries in by_topic.items()
    }
    return RunFile(system_tag=system_tag, ee_label=expected_ee_label, rankings=rankings)


def _canonical_ranking(topic: TopicId, entries: list[tuple[DocId, float]]) -> Ranking:
    ordered = sorted(entries, key=lambda e: (-e[1], e[0]))
    return Ranking(
        topic=topic,
        entries=tuple(
            RankedDoc(doc=doc, rank=i + 1, score=score)
            for i, (doc, score) in enumerate(ordered)
        ),
    )


def parse_qrels(lines: Iterable[str]) -> Qrels:
    """Parse TREC-format qrels; the iteration column is ignored.

    Negative grades are clamped to 0 (non-relevant) with a warning, which
    is how standard TREC tooling treats them. Duplicate pairs error when
    their grades conflict and dedup with a warning when they agree.
    """
    judgments: dict[tuple[TopicId, DocId], int] = {}
    for lineno, raw in enumerate(lines, start=1):
        cols = _tokens(raw)
        if not cols:
            continue
        if len(cols) != 4:
            raise ParseError(
                f"line {lineno}: expected 4 columns (topic iteration doc grade), "
                f"got {len(cols)}"
            )
        topic_s, _iteration, doc_s, grade_s = cols
        try:
            topic = TopicId(topic_s)
            doc = DocId(doc_s)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        try:
            grade = int(grade_s)
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer grade {grade_s!r}") from None
        if grade < 0:
            warnings.warn(
                f"line {lineno}: negative grade {grade} for ({topic}, {doc}) "
                f"clamped to 0",
                IngestWarning,
                stacklevel=2,
            )
            grade = 0
        key = (topic, doc)
        if key in judgments:
            if judgments[key] != grade:
                raise ParseError(
                    f"line {lineno}: conflicting grades for topic {topic}, doc {doc}: "
                    f"{judgments[key]} vs {grade}"
                )
            warnings.warn(
                f"line {lineno}: duplicate judgment for ({topic}, {doc}) with equal "
                f"grade; deduplicated",
                IngestWarning,
                stacklevel=2,
            )
            continue
        judgments[key] = grade
    return Qrels(judgments)


def _parse_timestamp(value: str, lineno: int) -> datetime:
    # Accept bare dates and full instants; everything is normalized to an
    # aware UTC datetime so timestamps sort consistently.
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        if len(text) == 10:
            parsed = datetime.combine(date.fromisoformat(text), datetime.min.time())
        else:
            parsed = datetime.fromisoformat(text)
    except ValueError:
        raise ParseError(f"line {lineno}: unparsable timestamp {value!r}") from None
    if parsed.tzinfo is None:
        return parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def parse_manifest(lines: Iterable[str]) -> CorpusSnapshot:
    """Parse a JSON-lines corpus manifest into a snapshot."""
    docs: dict[DocId, DocMeta] = {}
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise ParseError(f"line {lineno}: manifest line must be a JSON object")
        for field_name in ("doc_id", "length"):
            if field_name not in obj:
                raise ParseError(f"line {lineno}: missing required field {field_name!r}")
        if not isinstance(obj["doc_id"], str):
            raise ParseError(f"line {lineno}: doc_id must be a string")
        if not isinstance(obj["length"], int) or isinstance(obj["length"], bool):
            raise ParseError(f"line {lineno}: length must be an integer")
        try:
            doc_id = DocId(obj["doc_id"])
            timestamp = None
            if obj.get("timestamp") is not None:
                if not isinstance(obj["timestamp"], str):
                    raise ParseError(f"line {lineno}: timestamp must be a string")
                timestamp = _parse_timestamp(obj["timestamp"], lineno)
            content_hash = obj.get("hash")
            if content_hash is not None and not isinstance(content_hash, str):
                raise ParseError(f"line {lineno}: hash must be a string")
            meta = DocMeta(
                doc_id=doc_id,
                length=obj["length"],
                timestamp=timestamp,
                content_hash=content_hash,
            )
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        if doc_id in docs:
            raise ParseError(f"line {lineno}: duplicate doc_id {doc_id}")
        docs[doc_id] = meta
    return CorpusSnapshot(docs)


def parse_topics(lines: Iterable[str]) -> dict[TopicId, TopicDef]:
    """Parse a JSON-lines topic file: ``{"topic_id": ..., "text": ...}``."""
    topics: dict[TopicId, TopicDef] = {}
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict) or "topic_id" not in obj:
            raise ParseError(f"line {lineno}: topic line must carry topic_id")
        try:
            topic_id = TopicId(obj["topic_id"])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        text = obj.get("text")
        if text is not None and not isinstance(text, str):
            raise ParseError(f"line {lineno}: text must be a string")
        if topic_id in topics:
            raise ParseError(f"line {lineno}: duplicate topic_id {topic_id}")
        topics[topic_id] = TopicDef(topic_id=topic_id, text=text)
    return topics


def load_config(path: Path | str) -> list[EEConfig]:
    """Load an environment config: a JSON array ordered t0..tn.

    Relative file paths are resolved against the config file's directory.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(doc, list):
        raise ParseError(f"{path}: config must be a JSON array of environments")
    base = path.parent
    configs: list[EEConfig] = []
    labels: set[str] = set()
    for i, entry in enumerate(doc):
        if not isinstance(entry, dict):
            raise ParseError(f"{path}: entry {i} must be a JSON object")
        for field_name in ("label", "manifest", "qrels"):
            if field_name not in entry:
                raise ParseError(f"{path}: entry {i} missing {field_name!r}")
        label = entry["label"]
        if label in labels:
            raise ParseError(f"{path}: duplicate environment label {label!r}")
        labels.add(label)
        topics = entry.get("topics")
        try:
            configs.append(
                EEConfig(
                    label=label,
                    manifest_path=base / entry["manifest"],
                    qrels_path=base / entry["qrels"],
                    topics_path=base / topics if topics is not None else None,
                )
            )
        except ValueError as exc:
            raise ParseError(f"{path}: entry {i}: {exc}") from None
    return configs


def load_environment(config: EEConfig) -> EvaluationEnvironment:
    """Assemble an environment from its files.

    Without a topics file the topic set is inferred from the qrels' topic
    ids with empty text. Validation findings are emitted as warnings; they
    never block assembly.
    """
    corpus = _parse_file(parse_manifest, config.manifest_path)
    qrels = _parse_file(parse_qrels, config.qrels_path)
    if config.topics_path is not None:
        topics = _parse_file(parse_topics, config.topics_path)
    else:
        topics = {
            topic: TopicDef(topic_id=topic, text=None)
            for topic in sorted(qrels.topics())
        }
    ee = EvaluationEnvironment(
        label=config.label, corpus=corpus, topics=topics, qrels=qrels
    )
    for finding in validate_environment(ee):
        warnings.warn(
            f"environment {config.label}: {finding.message}",
            IngestWarning,
            stacklevel=2,
        )
    return ee


def load_environments(config_path: Path | str) -> list[EvaluationEnvironment]:
    """Load every environment listed in a config, in sequence order."""
    return [load_environment(cfg) for cfg in load_config(config_path)]


def _parse_file(parser, path: Path):
    try:
        with open(path, encoding="utf-8") as handle:
            return parser(handle)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from None
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def load_run(path: Path | str, ee_label: str) -> RunFile:
    """Parse a run file from disk."""
    return _parse_file(lambda lines: parse_run(lines, ee_label), Path(path))


def load_qrels(path: Path | str) -> Qrels:
    """Parse a qrels file from disk."""
    return _parse_file(parse_qrels, Path(path))


def load_manifest(path: Path | str) -> CorpusSnapshot:
    """Parse a corpus manifest from disk."""
    return _parse_file(parse_manifest, Path(path))


def _format_score(score: float) -> str:
    # repr gives the shortest exact round-trip form, keeping
    # serialize(parse(x)) byte-stable for files this module wrote
    return repr(score)


def format_run(run: RunFile) -> str:
    """Canonical run serialization: one line per entry, sorted by topic, rank."""
    out: list[str] = []
    for topic in sorted(run.rankings):
        for entry in run.rankings[topic].entries:
            out.append(
                f"{topic} Q0 {entry.doc} {entry.rank} "
                f"{_format_score(entry.score)} {run.system_tag}"
            )
    return "\n".join(out) + ("\n" if out else "")


def format_qrels(qrels: Qrels) -> str:
    """Canonical qrels serialization, sorted by (topic, doc)."""
    out = [
        f"{topic} 0 {doc} {qrels.judgments[(topic, doc)]}"
        for topic, doc in sorted(qrels.judgments)
    ]
    return "\n".join(out) + ("\n" if out else "")


def format_manifest(corpus: CorpusSnapshot) -> str:
    """Canonical manifest serialization, sorted by doc id."""
    out: list[str] = []
    for doc_id in sorted(corpus.docs):
        meta = corpus.docs[doc_id]
        obj: dict[str, object] = {"doc_id": str(doc_id), "length": meta.length}
        if meta.timestamp is not None:
            obj["timestamp"] = meta.timestamp.isoformat()
        if meta.content_hash is not None:
            obj["hash"] = meta.content_hash
        out.append(json.dumps(obj))
    return "\n".join(out) + ("\n" if out else "")


def format_topics(topics: dict[TopicId, TopicDef]) -> str:
    """Canonical topic-file serialization, sorted by topic id."""
    out: list[str] = []
    for topic_id in sorted(topics):
        topic = topics[topic_id]
        obj: dict[str, object] = {"topic_id": str(topic_id)}
        if topic.text is not None:
            obj["text"] = topic.text
        out.append(json.dumps(obj))
    return "\n".join(out) + ("\n" if out else "")
