"""irdrift: quantify how IR retrieval results drift across evolving test
collections.

The library diffs evaluation environments (documents, topics, qrels) with
create/update/delete semantics, scores runs with P@k, nDCG, and bpref,
and measures temporal change through rank-biased overlap, per-topic score
RMSE, relative ARP deltas, and pivot-relative margin shifts, with paired
significance testing and deterministic report rendering.
"""

from .change import (
    ChangeScores,
    RboConfig,
    delta_ri,
    mean_rbo,
    rbo_topic,
    relative_improvement,
    result_delta,
    rmse,
)
from .diff import (
    ChangeSummary,
    ComponentDiff,
    diff_documents,
    diff_qrels,
    diff_topics,
    summarize,
)
from .effectiveness import ArpResult, arp, bpref, evaluate_run, ndcg, precision_at_k
from .ingest import (
    EEConfig,
    IngestWarning,
    ParseError,
    format_manifest,
    format_qrels,
    format_run,
    format_topics,
    load_config,
    load_environment,
    load_environments,
    load_manifest,
    load_qrels,
    load_run,
    parse_manifest,
    parse_qrels,
    parse_run,
    parse_topics,
)
from .model import (
    CorpusSnapshot,
    DocId,
    DocMeta,
    EvaluationEnvironment,
    MeasureKind,
    MeasureSpec,
    PerTopicScores,
    Qrels,
    RankedDoc,
    Ranking,
    RunFile,
    TopicDef,
    TopicId,
    ValidationFinding,
    validate_environment,
)
from .report import (
    ChangeReport,
    LongitudinalMatrix,
    Scenario,
    matrix_from_json,
    render,
    render_change_summary,
)
from .significance import TestResult, bonferroni, compare, paired_t_test
from .simulate import SimulationPlan, common_topics, split_append_only

__version__ = "0.1.0"

__all__ = [
    "ArpResult",
    "ChangeReport",
    "ChangeScores",
    "ChangeSummary",
    "ComponentDiff",
    "CorpusSnapshot",
    "DocId",
    "DocMeta",
    "EEConfig",
    "EvaluationEnvironment",
    "IngestWarning",
    "LongitudinalMatrix",
    "MeasureKind",
    "MeasureSpec",
    "ParseError",
    "PerTopicScores",
    "Qrels",
    "RankedDoc",
    "Ranking",
    "RboConfig",
    "RunFile",
    "Scenario",
    "SimulationPlan",
    "TestResult",
    "TopicDef",
    "TopicId",
    "ValidationFinding",
    "arp",
    "bonferroni",
    "bpref",
    "common_topics",
    "compare",
    "delta_ri",
    "diff_documents",
    "diff_qrels",
    "diff_topics",
    "evaluate_run",
    "format_manifest",
    "format_qrels",
    "format_run",
    "format_topics",
    "load_config",
    "load_environment",
    "load_environments",
    "load_manifest",
    "load_qrels",
    "load_run",
    "matrix_from_json",
    "mean_rbo",
    "ndcg",
    "paired_t_test",
    "parse_manifest",
    "parse_qrels",
    "parse_run",
    "parse_topics",
    "precision_at_k",
    "rbo_topic",
    "relative_improvement",
    "render",
    "render_change_summary",
    "result_delta",
    "rmse",
    "split_append_only",
    "summarize",
    "validate_environment",
]
