"""Cost comparison between human translation and model translation."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidInputError


@dataclass(frozen=True)
class HumanCost:
    per_message: float  # flat analyst rate
    per_word: float | None = None  # specialised-service rate, priced per word


@dataclass(frozen=True)
class ModelPricing:
    per_1k_input_tokens: float
    per_1k_output_tokens: float


@dataclass(frozen=True)
class TokenUsage:
    input_tokens: int
    output_tokens: int


@dataclass(frozen=True)
class CostComparison:
    model_cost_per_message: float
    human_cost_per_message_low: float
    human_cost_per_message_high: float
    ratio_low: float
    ratio_high: float
    ratio_infinite: bool


def cost_report(
    human: HumanCost,
    pricing: ModelPricing,
    usage: TokenUsage,
    n_messages: int,
    words_per_message: float | None = None,
) -> CostComparison:
    if n_messages < 1:
        raise InvalidInputError("n_messages must be >= 1")
    if pricing.per_1k_input_tokens < 0 or pricing.per_1k_output_tokens < 0:
        raise InvalidInputError("model prices must be non-negative")
    if human.per_message <= 0:
        raise InvalidInputError("human per-message cost must be positive")

    model_total = (
        usage.input_tokens / 1000.0 * pricing.per_1k_input_tokens
        + usage.output_tokens / 1000.0 * pricing.per_1k_output_tokens
    )
    model_per_message = model_total / n_messages

    human_low = human.per_message
    if human.per_word is not None:
        if words_per_message is None:
            raise InvalidInputError(
                "per-word human pricing needs a words_per_message input"
            )
        human_high = human.per_word * words_per_message
    else:
        human_high = human.per_message
    human_low, human_high = sorted((human_low, human_high))

    if model_per_message == 0:
        return CostComparison(
            model_cost_per_message=0.0,
            human_cost_per_message_low=human_low,
            human_cost_per_message_high=human_high,
            ratio_low=float("inf"),
            ratio_high=float("inf"),
            ratio_infinite=True,
        )
    return CostComparison(
        model_cost_per_message=model_per_message,
        human_cost_per_message_low=human_low,
        human_cost_per_message_high=human_high,
        ratio_low=human_low / model_per_message,
        ratio_high=human_high / model_per_message,
        ratio_infinite=False,
    )
