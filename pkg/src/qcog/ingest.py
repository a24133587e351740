"""Survey file ingestion and serialization.

Survey schema (JSON)::

    {"sample_label": str,
     "questions": [{"text": str, "yes": number, "unsure": number,
                    "no": number, "polarity": "favour"|"oppose"|"neutral"}]}

Percentages are divided by 100 and renormalized; a question whose
percentages sum outside [99, 101] is rejected with the offending row.

Order-effect pair schema (JSON)::

    {"label": str, "question_names": [str, str],
     "ordering_1": [[yes, no], [yes, no]],   # asked order: Q0 then Q1
     "ordering_2": [[yes, no], [yes, no]]}   # asked order: Q1 then Q0
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .feasibility import Polarity, Question, SurveyChain
from .states import ProbabilityVector, StateError


class IngestError(ValueError):
    """Input file is missing, malformed, or violates the schema."""


def fixture_path(name: str) -> Path:
    """Path of a bundled data file (table1.json, table2.json, moore.json)."""
    return Path(resources.files("qcog.data") / name)


def _load_json(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise IngestError(f"no such file: {path}")
    try:
        with path.open() as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise IngestError(f"{path}: not valid JSON ({exc})") from exc


def load_survey(path) -> SurveyChain:
    """Read a survey sample file into a question chain."""
    doc = _load_json(path)
    try:
        label = doc["sample_label"]
        rows = doc["questions"]
    except (KeyError, TypeError) as exc:
        raise IngestError(f"{path}: missing sample_label/questions") from exc
    if not rows:
        raise IngestError(f"{path}: empty question list")

    questions = []
    for i, row in enumerate(rows, start=1):
        try:
            percents = [row["yes"], row["unsure"], row["no"]]
            polarity = Polarity(row.get("polarity", "neutral"))
            text = str(row["text"])
        except (KeyError, TypeError, ValueError) as exc:
            raise IngestError(f"{path}: bad question row {i}: {row!r}") from exc
        try:
            probs = ProbabilityVector.from_percents(percents)
        except StateError as exc:
            raise IngestError(f"{path}: question {i} ({text!r}): {exc}") from exc
        questions.append(Question(text=text, probs=probs, polarity=polarity))
    return SurveyChain(label=str(label), questions=tuple(questions))


def survey_to_dict(chain: SurveyChain) -> dict:
    """Inverse of load_survey up to renormalization (round-trip stable)."""
    rows = []
    for q in chain.questions:
        yes, unsure, no = (q.probs.probs * 100.0).tolist()
        rows.append({"text": q.text, "yes": yes, "unsure": unsure, "no": no,
                     "polarity": q.polarity.value})
    return {"sample_label": chain.label, "questions": rows}


def load_order_pair(path) -> dict:
    """Read an order-effect pair file.

    Returns label, question names, and the two orderings as
    ProbabilityVector pairs in asked order.
    """
    doc = _load_json(path)
    try:
        names = list(doc["question_names"])
        o1 = doc["ordering_1"]
        o2 = doc["ordering_2"]
    except (KeyError, TypeError) as exc:
        raise IngestError(f"{path}: missing order-pair fields") from exc
    if len(names) != 2 or len(o1) != 2 or len(o2) != 2:
        raise IngestError(f"{path}: order-pair files describe exactly 2 questions")

    def to_pv(row):
        try:
            return ProbabilityVector.from_percents(np.asarray(row, dtype=float))
        except (StateError, ValueError) as exc:
            raise IngestError(f"{path}: bad marginal row {row!r}: {exc}") from exc

    return {
        "label": str(doc.get("label", "")),
        "question_names": names,
        "ordering_1": [to_pv(r) for r in o1],
        "ordering_2": [to_pv(r) for r in o2],
    }
