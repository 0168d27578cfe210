from __future__ import annotations

import json

import pytest

from chatmt.errors import ConflictError, InvalidInputError, NotFoundError
from chatmt.evalharness import (
    MODEL_BASE,
    MODEL_FINETUNED,
    SurveyStore,
    generate_survey,
)


def triples(n):
    return [
        (f"сообщение {i}", f"base translation {i}", f"finetuned translation {i}")
        for i in range(n)
    ]


def make_survey(store, n=30, seed=42):
    surveys = SurveyStore(store)
    questions = generate_survey(triples(n), seed=seed)
    surveys.save_survey(questions)
    return surveys, questions


def consenting_respondent(surveys):
    return surveys.create_respondent("B1B2", "intermediate", consented=True)


# -- generation --------------------------------------------------------------


def test_generate_30_questions_bijective_maps():
    questions = generate_survey(triples(30), seed=1)
    assert len(questions) == 30
    for q in questions:
        assert sorted(q.hidden_map) == ["a", "b"]
        assert sorted(q.hidden_map.values()) == [MODEL_BASE, MODEL_FINETUNED]


def test_generate_seeded_determinism():
    a = generate_survey(triples(50), seed=7)
    b = generate_survey(triples(50), seed=7)
    c = generate_survey(triples(50), seed=8)
    assert a == b
    assert [q.hidden_map for q in a] != [q.hidden_map for q in c]


def test_generate_positional_fairness_10000():
    questions = generate_survey(triples(10_000), seed=20260823)
    frac_a = sum(
        1 for q in questions if q.hidden_map["a"] == MODEL_FINETUNED
    ) / len(questions)
    assert 0.48 <= frac_a <= 0.52


def test_generate_rejects_empty_list():
    with pytest.raises(InvalidInputError):
        generate_survey([], seed=0)


def test_generate_rejects_empty_translation():
    with pytest.raises(InvalidInputError):
        generate_survey([("src", "", "finetuned")], seed=0)


def test_identical_translations_flagged_indistinguishable():
    questions = generate_survey([("src", "same", "same")], seed=0)
    assert questions[0].indistinguishable


def test_blinded_payload_hides_models():
    questions = generate_survey(triples(20), seed=3)
    for q in questions:
        payload = json.dumps(q.blinded())
        assert "hidden_map" not in payload
        assert MODEL_BASE not in json.loads(payload).values()
        assert MODEL_FINETUNED not in json.loads(payload).values()
        assert set(q.blinded()) == {
            "question_id", "order_index", "source_text",
            "option_a_text", "option_b_text",
        }


# -- persistence -------------------------------------------------------------


def test_save_and_list_round_trip(store):
    surveys, questions = make_survey(store)
    assert surveys.list_questions() == questions


def test_get_unknown_question(store):
    surveys, _ = make_survey(store)
    with pytest.raises(NotFoundError):
        surveys.get_question("nope")


# -- respondents -------------------------------------------------------------


def test_respondent_opaque_token(store):
    surveys, _ = make_survey(store)
    a = consenting_respondent(surveys)
    b = consenting_respondent(surveys)
    assert a.respondent_id != b.respondent_id
    assert len(a.respondent_id) >= 16
    assert surveys.get_respondent(a.respondent_id) == a


def test_respondent_level_validation(store):
    surveys, _ = make_survey(store)
    with pytest.raises(InvalidInputError):
        surveys.create_respondent("C2", "expert", consented=True)
    with pytest.raises(InvalidInputError):
        surveys.create_respondent("C1C2", "guru", consented=True)


# -- votes -------------------------------------------------------------------


def test_103_votes_from_7_respondents(store):
    surveys, questions = make_survey(store)
    respondents = [consenting_respondent(surveys) for _ in range(7)]
    # Partial completion: respondents answer different prefixes, 103 total.
    per_respondent = [30, 30, 13, 10, 10, 5, 5]
    assert sum(per_respondent) == 103
    for r, count in zip(respondents, per_respondent):
        for q in questions[:count]:
            surveys.record_vote(r.respondent_id, q.question_id, "a")
    assert len(surveys.list_votes()) == 103


def test_duplicate_vote_conflicts(store):
    surveys, questions = make_survey(store)
    r = consenting_respondent(surveys)
    surveys.record_vote(r.respondent_id, questions[0].question_id, "a")
    with pytest.raises(ConflictError):
        surveys.record_vote(r.respondent_id, questions[0].question_id, "b")


def test_vote_without_consent_rejected(store):
    surveys, questions = make_survey(store)
    r = surveys.create_respondent("A1A2", "beginner", consented=False)
    with pytest.raises(InvalidInputError):
        surveys.record_vote(r.respondent_id, questions[0].question_id, "a")


def test_vote_unknown_question_rejected(store):
    surveys, _ = make_survey(store)
    r = consenting_respondent(surveys)
    with pytest.raises(NotFoundError):
        surveys.record_vote(r.respondent_id, "ghost-q1", "a")


def test_vote_invalid_position_rejected(store):
    surveys, questions = make_survey(store)
    r = consenting_respondent(surveys)
    with pytest.raises(InvalidInputError):
        surveys.record_vote(r.respondent_id, questions[0].question_id, "c")
