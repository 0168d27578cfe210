"""Blinded A/B survey generation and vote capture.

Position assignment is Bernoulli(0.5) from a seeded PRNG; the unblinding
map lives server-side only and is never part of a served payload. Votes
are append-only and partial participation is first-class.
"""

from __future__ import annotations

import random
import secrets
from dataclasses import dataclass
from datetime import datetime, timezone

from ..errors import ConflictError, InvalidInputError, NotFoundError
from ..store import Store

MODEL_BASE = "base"
MODEL_FINETUNED = "finetuned"

ENGLISH_LEVELS = ("A1A2", "B1B2", "C1C2")
CYBER_LEVELS = ("beginner", "intermediate", "advanced", "expert")


@dataclass(frozen=True)
class SurveyQuestion:
    question_id: str
    survey_id: str
    order_index: int
    source_text: str
    option_a_text: str
    option_b_text: str
    hidden_map: dict[str, str]  # position -> model id; server-side only
    indistinguishable: bool = False

    def blinded(self) -> dict:
        """The only shape ever served to respondents."""
        return {
            "question_id": self.question_id,
            "order_index": self.order_index,
            "source_text": self.source_text,
            "option_a_text": self.option_a_text,
            "option_b_text": self.option_b_text,
        }


@dataclass(frozen=True)
class RespondentProfile:
    respondent_id: str
    english_level: str
    cyber_level: str
    consented: bool


@dataclass(frozen=True)
class VoteRecord:
    respondent_id: str
    question_id: str
    chosen_position: str  # "a" | "b"
    captured_at: datetime
    resolved_model: str | None = None  # filled at analysis time only


def generate_survey(
    questions: list[tuple[str, str, str]],
    seed: int,
    survey_id: str = "default",
) -> list[SurveyQuestion]:
    """questions: (source, base_translation, finetuned_translation) triples."""
    if not questions:
        raise InvalidInputError("cannot generate a survey without questions")
    rng = random.Random(seed)
    out = []
    for index, (source, base_text, finetuned_text) in enumerate(questions):
        if not base_text or not finetuned_text:
            raise InvalidInputError(f"question {index} has an empty translation")
        finetuned_at_a = rng.random() < 0.5
        if finetuned_at_a:
            option_a, option_b = finetuned_text, base_text
            hidden = {"a": MODEL_FINETUNED, "b": MODEL_BASE}
        else:
            option_a, option_b = base_text, finetuned_text
            hidden = {"a": MODEL_BASE, "b": MODEL_FINETUNED}
        out.append(
            SurveyQuestion(
                question_id=f"{survey_id}-q{index:04d}",
                survey_id=survey_id,
                order_index=index,
                source_text=source,
                option_a_text=option_a,
                option_b_text=option_b,
                hidden_map=hidden,
                indistinguishable=base_text == finetuned_text,
            )
        )
    return out


class SurveyStore:
    """Survey questions, respondents, and votes over the shared store."""

    def __init__(self, store: Store):
        self.store = store

    # -- questions ---------------------------------------------------------

    def save_survey(self, questions: list[SurveyQuestion]) -> None:
        for q in questions:
            self.store.execute(
                "INSERT OR REPLACE INTO survey_questions (question_id, survey_id,"
                " order_index, source_text, option_a_text, option_b_text,"
                " model_at_a, model_at_b, indistinguishable)"
                " VALUES (?,?,?,?,?,?,?,?,?)",
                (
                    q.question_id,
                    q.survey_id,
                    q.order_index,
                    q.source_text,
                    q.option_a_text,
                    q.option_b_text,
                    q.hidden_map["a"],
                    q.hidden_map["b"],
                    int(q.indistinguishable),
                ),
            )

    def _row_to_question(self, row) -> SurveyQuestion:
        return SurveyQuestion(
            question_id=row["question_id"],
            survey_id=row["survey_id"],
            order_index=row["order_index"],
            source_text=row["source_text"],
            option_a_text=row["option_a_text"],
            option_b_text=row["option_b_text"],
            hidden_map={"a": row["model_at_a"], "b": row["model_at_b"]},
            indistinguishable=bool(row["indistinguishable"]),
        )

    def get_question(self, question_id: str) -> SurveyQuestion:
        row = self.store.query_one(
            "SELECT * FROM survey_questions WHERE question_id=?", (question_id,)
        )
        if row is None:
            raise NotFoundError(f"question {question_id!r} not found")
        return self._row_to_question(row)

    def list_questions(self, survey_id: str = "default") -> list[SurveyQuestion]:
        rows = self.store.query(
            "SELECT * FROM survey_questions WHERE survey_id=? ORDER BY order_index",
            (survey_id,),
        )
        return [self._row_to_question(r) for r in rows]

    # -- respondents -------------------------------------------------------

    def create_respondent(
        self, english_level: str, cyber_level: str, consented: bool
    ) -> RespondentProfile:
        if english_level not in ENGLISH_LEVELS:
            raise InvalidInputError(f"unknown english_level {english_level!r}")
        if cyber_level not in CYBER_LEVELS:
            raise InvalidInputError(f"unknown cyber_level {cyber_level!r}")
        respondent_id = secrets.token_urlsafe(16)
        self.store.execute(
            "INSERT INTO respondents (respondent_id, english_level, cyber_level,"
            " consented, created_at) VALUES (?,?,?,?,?)",
            (
                respondent_id,
                english_level,
                cyber_level,
                int(consented),
                datetime.now(timezone.utc).isoformat(),
            ),
        )
        return RespondentProfile(respondent_id, english_level, cyber_level, consented)

    def get_respondent(self, respondent_id: str) -> RespondentProfile:
        row = self.store.query_one(
            "SELECT * FROM respondents WHERE respondent_id=?", (respondent_id,)
        )
        if row is None:
            raise NotFoundError(f"respondent {respondent_id!r} not found")
        return RespondentProfile(
            respondent_id=row["respondent_id"],
            english_level=row["english_level"],
            cyber_level=row["cyber_level"],
            consented=bool(row["consented"]),
        )

    # -- votes -------------------------------------------------------------

    def record_vote(
        self, respondent_id: str, question_id: str, chosen_position: str
    ) -> VoteRecord:
        if chosen_position not in ("a", "b"):
            raise InvalidInputError(f"chosen_position must be 'a' or 'b'")
        respondent = self.get_respondent(respondent_id)
        if not respondent.consented:
            raise InvalidInputError("respondent has not consented; vote rejected")
        self.get_question(question_id)
        existing = self.store.query_one(
            "SELECT 1 FROM votes WHERE respondent_id=? AND question_id=?",
            (respondent_id, question_id),
        )
        if existing is not None:
            raise ConflictError(
                f"respondent already voted on question {question_id!r}"
            )
        captured_at = datetime.now(timezone.utc)
        self.store.execute(
            "INSERT INTO votes (respondent_id, question_id, chosen_position,"
            " captured_at) VALUES (?,?,?,?)",
            (respondent_id, question_id, chosen_position, captured_at.isoformat()),
        )
        return VoteRecord(
            respondent_id=respondent_id,
            question_id=question_id,
            chosen_position=chosen_position,
            captured_at=captured_at,
        )

    def list_votes(self) -> list[VoteRecord]:
        rows = self.store.query("SELECT * FROM votes ORDER BY captured_at, rowid")
        return [
            VoteRecord(
                respondent_id=r["respondent_id"],
                question_id=r["question_id"],
                chosen_position=r["chosen_position"],
                captured_at=datetime.fromisoformat(r["captured_at"]),
            )
            for r in rows
        ]
