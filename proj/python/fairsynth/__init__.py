"""Fairness evaluation toolkit for zero-shot speech cloning pipelines.

Thin python surface over the C++ core: manifest parsing, WER/CER alignment,
speaker-similarity resolution, parity-difference / disparate-impact audits
and deterministic report rendering.
"""

from ._core import (
    AlignmentCounts,
    AuditReport,
    FairnessLevel,
    FairnessRow,
    FairsynthError,
    GroupKey,
    GroupStats,
    MetricKind,
    MetricPolarity,
    NormalizationPolicy,
    TaskResultTable,
    Thresholds,
    UtteranceMetrics,
    UtteranceRecord,
    ValidationReport,
    __version__,
    align,
    audit,
    classify,
    compare_conditions,
    cosine_similarity,
    default_metrics,
    delta_metric,
    disparate_impact,
    emit_plot_data,
    error_rate,
    group_mean,
    load_result_table,
    load_result_table_file,
    metric_by_name,
    normalize_and_tokenize,
    parity_difference,
    parse_manifest,
    parse_manifest_file,
    parse_report_json,
    relative_change,
    render_fairness_table,
    render_key_insights,
    resolve_autopcp,
    resolve_simo,
    round_half_up,
    score_utterance,
    serialize_records,
    softmax_normalize,
    validate_records,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
