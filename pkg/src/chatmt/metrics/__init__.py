from .bleu import SMOOTHING_ADD_EPSILON, SMOOTHING_NONE, BleuBreakdown, bleu
from .evaluate import (
    ALL_METRICS,
    MetricScore,
    SystemReport,
    evaluate_system,
    format_mean_std,
    render_jsonl,
    render_table,
)
from .integrity import (
    FINDING_EMOJI_ADDED,
    FINDING_EMOJI_DROPPED,
    FINDING_URL_DROPPED,
    FINDING_URL_MUTATED,
    Finding,
    IntegrityReport,
    check_integrity,
)
from .meteor import MeteorBreakdown, meteor
from .stemmer import porter_stem
from .ter import TerBreakdown, edit_distance, legal_shifts, ter
from .tokenizer import (
    CASING_FOLDED,
    CASING_PRESERVED,
    TokenSequence,
    extract_emoji,
    extract_urls,
    tokenize,
)

__all__ = [
    "ALL_METRICS",
    "BleuBreakdown",
    "CASING_FOLDED",
    "CASING_PRESERVED",
    "FINDING_EMOJI_ADDED",
    "FINDING_EMOJI_DROPPED",
    "FINDING_URL_DROPPED",
    "FINDING_URL_MUTATED",
    "Finding",
    "IntegrityReport",
    "MeteorBreakdown",
    "MetricScore",
    "SMOOTHING_ADD_EPSILON",
    "SMOOTHING_NONE",
    "SystemReport",
    "TerBreakdown",
    "TokenSequence",
    "bleu",
    "check_integrity",
    "edit_distance",
    "evaluate_system",
    "extract_emoji",
    "extract_urls",
    "format_mean_std",
    "legal_shifts",
    "meteor",
    "porter_stem",
    "render_jsonl",
    "render_table",
    "ter",
    "tokenize",
]
