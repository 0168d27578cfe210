"""HTTP JSON API consumed by the survey UI.

Served payloads are blinded: question responses carry source and option
texts plus an order index, never model identifiers. The admin analysis
endpoint is the only unblinded surface and is meant for local binds.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..errors import ConflictError, InvalidInputError, NotFoundError
from ..store import Store
from .stats import CLUSTER_BOTH, analyze_preferences
from .survey import SurveyStore, VoteRecord


class RespondentRequest(BaseModel):
    english_level: str
    cyber_level: str
    consent: bool


class VoteRequest(BaseModel):
    respondent_id: str
    question_id: str
    chosen_position: str


def export_votes_jsonl(votes: list[VoteRecord]) -> str:
    lines = [
        json.dumps(
            {
                "respondent_id": v.respondent_id,
                "question_id": v.question_id,
                "chosen_position": v.chosen_position,
                "captured_at": v.captured_at.isoformat(),
            },
            ensure_ascii=False,
        )
        for v in votes
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def create_app(store: Store, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="blinded translation preference survey")
    surveys = SurveyStore(store)

    @app.post("/api/respondent")
    def create_respondent(req: RespondentRequest):
        if not req.consent:
            raise HTTPException(status_code=403, detail="consent is required")
        try:
            profile = surveys.create_respondent(
                req.english_level, req.cyber_level, consented=True
            )
        except InvalidInputError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"respondent_id": profile.respondent_id}

    @app.get("/api/survey/{survey_id}/questions")
    def get_questions(survey_id: str):
        questions = surveys.list_questions(survey_id)
        if not questions:
            raise HTTPException(status_code=404, detail="survey not found")
        return {"questions": [q.blinded() for q in questions]}

    @app.post("/api/vote")
    def post_vote(req: VoteRequest):
        try:
            vote = surveys.record_vote(
                req.respondent_id, req.question_id, req.chosen_position
            )
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except InvalidInputError as exc:
            raise HTTPException(status_code=403, detail=str(exc))
        return {
            "question_id": vote.question_id,
            "chosen_position": vote.chosen_position,
            "captured_at": vote.captured_at.isoformat(),
        }

    @app.get("/api/admin/analysis")
    def admin_analysis(
        clusters: str = CLUSTER_BOTH, reps: int = 10_000, seed: int = 0
    ):
        votes = surveys.list_votes()
        questions = {
            q.question_id: q
            for survey in {
                r["survey_id"]
                for r in store.query("SELECT DISTINCT survey_id FROM survey_questions")
            }
            for q in surveys.list_questions(survey)
        }
        try:
            analysis = analyze_preferences(
                votes, questions, clusters=clusters, bootstrap_reps=reps, seed=seed
            )
        except InvalidInputError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {
            "n_votes": analysis.n_votes,
            "n_pref_finetuned": analysis.n_pref_finetuned,
            "proportion": analysis.proportion,
            "exact_binomial_p_two_sided": analysis.exact_binomial_p_two_sided,
            "bootstrap_ci_95": list(analysis.bootstrap_ci_95),
            "bootstrap_reps": analysis.bootstrap_reps,
            "clusters": analysis.clusters,
            "method_note": analysis.method_note,
        }

    if static_dir is not None and Path(static_dir).is_dir():
        static_path = Path(static_dir)

        @app.get("/")
        def index():
            return FileResponse(static_path / "index.html")

        # API routes above take precedence; the mount only sees the rest,
        # so index.html's relative asset links resolve without a prefix.
        app.mount("/", StaticFiles(directory=static_path), name="static")

    return app
