from .api import create_app, export_votes_jsonl
from .cost import CostComparison, HumanCost, ModelPricing, TokenUsage, cost_report
from .stats import (
    CLUSTER_BOTH,
    CLUSTER_QUESTION,
    CLUSTER_RESPONDENT,
    PreferenceAnalysis,
    analyze_preferences,
    exact_binomial_two_sided,
    unblind_votes,
)
from .survey import (
    CYBER_LEVELS,
    ENGLISH_LEVELS,
    MODEL_BASE,
    MODEL_FINETUNED,
    RespondentProfile,
    SurveyQuestion,
    SurveyStore,
    VoteRecord,
    generate_survey,
)

__all__ = [
    "CLUSTER_BOTH",
    "CLUSTER_QUESTION",
    "CLUSTER_RESPONDENT",
    "CYBER_LEVELS",
    "CostComparison",
    "ENGLISH_LEVELS",
    "HumanCost",
    "MODEL_BASE",
    "MODEL_FINETUNED",
    "ModelPricing",
    "PreferenceAnalysis",
    "RespondentProfile",
    "SurveyQuestion",
    "SurveyStore",
    "TokenUsage",
    "VoteRecord",
    "analyze_preferences",
    "cost_report",
    "create_app",
    "exact_binomial_two_sided",
    "export_votes_jsonl",
    "generate_survey",
    "unblind_votes",
]
