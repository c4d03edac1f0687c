"""Measures of how retrieval results change between two environments.

Four complementary views:

* :func:`rbo_topic` / :func:`mean_rbo` — rank-biased overlap between the
  rankings a system produced in two environments; purely document-level,
  relevance plays no part.
* :func:`rmse` — root mean square error between per-topic effectiveness
  scores, for the setting where both runs were scored against the same
  qrels (unchanged recall base).
* :func:`result_delta` — relative change of a system's ARP over time,
  normalized by the earlier value.
* :func:`relative_improvement` / :func:`delta_ri` — a system's ARP margin
  over a pivot system within one environment, and how that margin shifts
  between environments.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .effectiveness import ArpResult
from .model import PerTopicScores, Ranking, RunFile, TopicId


class ChangeWarning(UserWarning):
    """Non-fatal oddity during change measurement."""


@dataclass(frozen=True)
class RboConfig:
    """Rank-biased overlap parameters.

    ``phi`` is the persistence: the weight of rank i decays as phi**(i-1),
    so smaller values concentrate weight near the top. ``depth`` truncates
    the evaluation; with ``normalize`` the truncated sum is rescaled so
    identical rankings score exactly 1.
    """

    phi: float = 0.9
    depth: int = 100
    normalize: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.phi < 1.0:
            raise ValueError(f"phi must lie strictly between 0 and 1, got {self.phi}")
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")


@dataclass(frozen=True)
class ChangeScores:
    """Per-topic change values and their arithmetic mean."""

    per_topic: dict[TopicId, float]
    mean: float

    @classmethod
    def from_per_topic(cls, per_topic: dict[TopicId, float]) -> "ChangeScores":
        if not per_topic:
            raise ValueError("ChangeScores needs at least one topic")
        ordered = [per_topic[t] for t in sorted(per_topic)]
        return cls(per_topic=dict(per_topic), mean=sum(ordered) / len(ordered))


def rbo_topic(r: Ranking, r_prime: Ranking, cfg: RboConfig) -> float:
    """Rank-biased overlap between two rankings of the same topic.

    Computes the truncated sum (1-phi) * sum_{i=1..d} phi**(i-1) * A_i
    where A_i is the fraction of agreement between the two depth-i
    prefixes, |prefix_i(r) & prefix_i(r')| / i, and d is the configured
    depth capped at the longer ranking's length. A ranking shorter than i
    contributes its full list as the prefix. Two empty rankings count as
    identical (1.0).
    """
    if r.topic != r_prime.topic:
        raise ValueError(
            f"rbo_topic compares rankings of one topic, got {r.topic} vs {r_prime.topic}"
        )
    longest = max(len(r), len(r_prime))
    if longest == 0:
        return 1.0
    depth = min(cfg.depth, longest)
    docs_a = r.docs()
    docs_b = r_prime.docs()
    # unmatched prefix docs per side; a doc moves from one set into the
    # running overlap count the moment the other ranking reaches it
    pending_a: set[str] = set()
    pending_b: set[str] = set()
    overlap = 0
    total = 0.0
    norm = 0.0
    weight = 1.0  # phi**(i-1)
    for i in range(1, depth + 1):
        if i <= len(docs_a):
            doc = docs_a[i - 1]
            if doc in pending_b:
                pending_b.remove(doc)
                overlap += 1
            else:
                pending_a.add(doc)
        if i <= len(docs_b):
            doc = docs_b[i - 1]
            if doc in pending_a:
                pending_a.remove(doc)
                overlap += 1
            else:
                pending_b.add(doc)
        total += weight * (overlap / i)
        norm += weight
        weight *= cfg.phi
    # norm accumulates sum(phi**(i-1)) the same way as total, so
    # (1-phi)*total / ((1-phi)*norm) is exactly 1.0 for identical rankings;
    # (1-phi)*norm equals the closed form 1 - phi**depth
    if cfg.normalize:
        return total / norm
    return (1.0 - cfg.phi) * total


def mean_rbo(
    run: RunFile,
    run_prime: RunFile,
    cfg: RboConfig,
    topic_filter: set[TopicId],
) -> ChangeScores:
    """Average per-topic rank-biased overlap across a topic set.

    Rank comparison only makes sense when both runs answer the same
    topics, so the caller supplies the common topic set explicitly. A
    topic missing from either run contributes 0.0 with a warning.
    """
    if not topic_filter:
        raise ValueError("mean_rbo requires a non-empty topic filter")
    per_topic: dict[TopicId, float] = {}
    for topic in sorted(topic_filter):
        a = run.rankings.get(topic)
        b = run_prime.rankings.get(topic)
        if a is None or b is None:
            missing = run.system_tag if a is None else run_prime.system_tag
            warnings.warn(
                f"topic {topic} missing from run {missing!r}; scoring overlap 0.0",
                ChangeWarning,
                stacklevel=2,
            )
            per_topic[topic] = 0.0
            continue
        per_topic[topic] = rbo_topic(a, b, cfg)
    return ChangeScores.from_per_topic(per_topic)


def rmse(scores: PerTopicScores, scores_prime: PerTopicScores) -> float:
    """Root mean square error between two per-topic score sets.

    Meaningful only when both sets were computed with the same measure
    against the same qrels; the common topics are compared.
    """
    if scores.measure != scores_prime.measure:
        raise ValueError(
            f"rmse requires matching measures, got {scores.measure.name} vs "
            f"{scores_prime.measure.name}"
        )
    common = sorted(scores.topics() & scores_prime.topics())
    if not common:
        raise ValueError("rmse requires a non-empty common topic set")
    a = np.array([scores.scores[t] for t in common])
    b = np.array([scores_prime.scores[t] for t in common])
    return float(np.sqrt(np.mean((a - b) ** 2)))


def result_delta(arp_initial: ArpResult, arp_evolved: ArpResult) -> float:
    """Relative ARP change between an initial and an evolved environment:
    (initial - evolved) / initial. Negative values mean the effectiveness
    improved over time."""
    if arp_initial.system_tag != arp_evolved.system_tag:
        raise ValueError(
            f"result_delta compares one system over time, got "
            f"{arp_initial.system_tag!r} vs {arp_evolved.system_tag!r}"
        )
    if arp_initial.measure != arp_evolved.measure:
        raise ValueError(
            f"result_delta requires matching measures, got "
            f"{arp_initial.measure.name} vs {arp_evolved.measure.name}"
        )
    if arp_initial.mean == 0.0:
        raise ValueError("undefined result delta (zero baseline)")
    return (arp_initial.mean - arp_evolved.mean) / arp_initial.mean


def relative_improvement(arp_system: ArpResult, arp_pivot: ArpResult) -> float:
    """A system's ARP margin over the pivot system within one environment:
    (system - pivot) / pivot."""
    if arp_system.ee_label != arp_pivot.ee_label:
        raise ValueError(
            f"relative_improvement compares systems within one environment, got "
            f"{arp_system.ee_label!r} vs {arp_pivot.ee_label!r}"
        )
    if arp_system.measure != arp_pivot.measure:
        raise ValueError(
            f"relative_improvement requires matching measures, got "
            f"{arp_system.measure.name} vs {arp_pivot.measure.name}"
        )
    if arp_pivot.mean == 0.0:
        raise ValueError("undefined relative improvement (zero pivot mean)")
    return (arp_system.mean - arp_pivot.mean) / arp_pivot.mean


def delta_ri(ri_initial: float, ri_evolved: float) -> float:
    """Shift of the pivot-relative margin between two environments:
    initial minus evolved. Zero means the margin reproduced perfectly;
    positive values mean the improvement over the pivot shrank."""
    return ri_initial - ri_evolved
