"""Schema, validation, and aggregation for manual interface scores.

The five interface-design metrics are always human-assigned. This
module enforces score ranges and evidence discipline, suggests
candidate evidentiary sentences from cue phrases, and aggregates
assessments into a cross-platform table. It never scores anything
itself.
"""

import json
import os
from dataclasses import dataclass, field
from importlib import resources

from .errors import AssessmentError, LexiconError
from .matching import PhraseMatcher

# Metric name -> inclusive score range, in table column order.
METRIC_RANGES = {
    "unticked_checkbox": (0, 1),
    "review_before_consent": (0, 1),
    "separate_consent_steps": (0, 2),
    "explicit_denial": (0, 2),
    "reversibility_cue": (0, 2),
}
METRICS = tuple(METRIC_RANGES)


@dataclass
class EvidenceRecord:
    metric: str
    excerpt: str
    sentence_index: int = -1


@dataclass
class InterfaceAssessment:
    platform: str
    unticked_checkbox: int = 0
    review_before_consent: int = 0
    separate_consent_steps: int = 0
    explicit_denial: int = 0
    reversibility_cue: int = 0
    evidence: list = field(default_factory=list)
    assessor: str = ""
    assessed_at: str = ""

    def score(self, metric):
        return getattr(self, metric)


def validate_assessment(assessment, doc=None):
    """All schema violations in one pass; empty list means valid.

    With doc given, evidence excerpts must also be verbatim substrings
    of the document text.
    """
    errors = []
    if not assessment.platform:
        errors.append("missing platform")
    for metric, (lo, hi) in METRIC_RANGES.items():
        value = assessment.score(metric)
        if not isinstance(value, int) or isinstance(value, bool):
            errors.append(f"{metric}: score must be an integer")
            continue
        if not lo <= value <= hi:
            errors.append(f"{metric}: score {value} out of range {lo}..{hi}")
    evidence_by_metric = {}
    for i, ev in enumerate(assessment.evidence):
        if ev.metric not in METRIC_RANGES:
            errors.append(f"evidence[{i}]: unknown metric {ev.metric!r}")
            continue
        if not ev.excerpt:
            errors.append(f"evidence[{i}]: empty excerpt")
            continue
        evidence_by_metric.setdefault(ev.metric, []).append(ev)
        if doc is not None and ev.excerpt not in doc.text:
            errors.append(
                f"evidence[{i}]: excerpt is not a verbatim substring "
                "of the document")
    for metric in METRIC_RANGES:
        value = assessment.score(metric)
        if isinstance(value, int) and not isinstance(value, bool) \
                and value > 0 and not evidence_by_metric.get(metric):
            errors.append(f"{metric}: nonzero score without evidence")
    return errors


def assessment_to_dict(assessment):
    d = {"platform": assessment.platform}
    for metric in METRICS:
        d[metric] = assessment.score(metric)
    d["evidence"] = [
        {"metric": ev.metric, "excerpt": ev.excerpt,
         "sentence_index": ev.sentence_index}
        for ev in assessment.evidence
    ]
    d["assessor"] = assessment.assessor
    d["assessed_at"] = assessment.assessed_at
    return d


def assessment_from_dict(data):
    try:
        assessment = InterfaceAssessment(
            platform=data["platform"],
            evidence=[
                EvidenceRecord(
                    metric=ev["metric"],
                    excerpt=ev["excerpt"],
                    sentence_index=int(ev.get("sentence_index", -1)),
                )
                for ev in data.get("evidence", [])
            ],
            assessor=data.get("assessor", ""),
            assessed_at=data.get("assessed_at", ""),
        )
    except (KeyError, TypeError) as exc:
        raise AssessmentError(f"malformed assessment: {exc}") from None
    for metric in METRICS:
        if metric in data:
            setattr(assessment, metric, data[metric])
    return assessment


def load_assessment(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise AssessmentError(f"malformed assessment file {path}: {exc}") from None
    return assessment_from_dict(data)


def store_assessment(dir_path, assessment, overwrite=False):
    """Write an assessment file; refuses silent replacement."""
    os.makedirs(dir_path, exist_ok=True)
    path = os.path.join(dir_path, f"{assessment.platform}.json")
    if os.path.exists(path) and not overwrite:
        raise AssessmentError(
            f"assessment for {assessment.platform!r} already exists "
            "(pass overwrite to replace)")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(assessment_to_dict(assessment), fh, sort_keys=True,
                  indent=2, ensure_ascii=False)
        fh.write("\n")
    return path


def default_cue_lexicon_path():
    return resources.files("tosaudit.data").joinpath("interface_cues.json")


def load_cue_lexicon(path=None):
    """Per-metric cue phrases; defaults to the shipped file."""
    if path is None:
        data = json.loads(
            default_cue_lexicon_path().read_text(encoding="utf-8"))
    else:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    metrics = data.get("metrics", data)
    cues = {}
    for metric in METRICS:
        phrases = metrics.get(metric, [])
        if not phrases:
            raise LexiconError(f"cue lexicon: no phrases for {metric}")
        cues[metric] = tuple(phrases)
    return cues


def suggest_evidence(doc, cues):
    """Candidate sentences per metric, ranked by cue hits.

    Advisory only: returns (sentence_index, sentence_text, cue_count)
    triples and never touches an assessment.
    """
    matchers = {}
    for metric, phrases in cues.items():
        matcher = PhraseMatcher(fold_case=True)
        for phrase in phrases:
            matcher.add(phrase, phrase)
        matchers[metric] = matcher
    suggestions = {metric: [] for metric in cues}
    for sentence in doc.sentences:
        for metric, matcher in matchers.items():
            hits = matcher.find(sentence.text)
            if hits:
                suggestions[metric].append(
                    (sentence.index, sentence.text, len(hits)))
    for metric in suggestions:
        suggestions[metric].sort(key=lambda t: (-t[2], t[0]))
    return suggestions


def aggregate_interface(assessments):
    """Rows of (platform, five scores) sorted by platform name."""
    seen = set()
    for a in assessments:
        if a.platform in seen:
            raise AssessmentError(f"duplicate platform: {a.platform}")
        seen.add(a.platform)
    rows = []
    for a in sorted(assessments, key=lambda a: a.platform):
        rows.append((a.platform,) + tuple(a.score(m) for m in METRICS))
    return rows
