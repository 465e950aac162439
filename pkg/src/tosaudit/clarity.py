"""Vague-term detection: density, diversity, and per-term frequencies.

Scans each sentence with the shared phrase matcher, so matching is
case-insensitive, word-bounded, longest-match-wins, and never crosses
a sentence boundary. A multi-word match counts as one occurrence.
"""

import json
from dataclasses import dataclass, field
from importlib import resources

from .errors import LexiconError
from .matching import PhraseMatcher

CATEGORIES = ("uncertainty", "actor_ambiguity", "scope_ambiguity", "other")


@dataclass(frozen=True)
class VagueTerm:
    canonical: str
    variants: tuple
    category: str


@dataclass(frozen=True)
class VagueLexicon:
    terms: tuple
    version: str

    def categories(self):
        return {t.canonical: t.category for t in self.terms}


@dataclass
class ClarityReport:
    platform: str
    word_count: int
    vague_count: int
    density_pct: float
    unique_terms: int
    per_term_counts: dict = field(default_factory=dict)
    matches: list = field(default_factory=list)


def default_lexicon_path():
    return resources.files("tosaudit.data").joinpath("vague_terms.json")


def load_vague_lexicon(path=None):
    """Load and validate a vague-term lexicon.

    Accepts either {"version": ..., "terms": [...]} or a bare JSON list
    of {canonical, variants, category} objects.
    """
    if path is None:
        data = json.loads(default_lexicon_path().read_text(encoding="utf-8"))
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LexiconError(f"malformed lexicon file: {exc}") from None
    if isinstance(data, dict):
        version = str(data.get("version", ""))
        raw_terms = data.get("terms")
    else:
        version = ""
        raw_terms = data
    if not isinstance(raw_terms, list) or not raw_terms:
        raise LexiconError("lexicon has no terms")

    terms = []
    seen = set()
    for item in raw_terms:
        canonical = (item.get("canonical") or "").strip()
        if not canonical:
            raise LexiconError("empty term")
        category = item.get("category", "other")
        if category not in CATEGORIES:
            raise LexiconError(
                f"unknown category {category!r} for term {canonical!r}")
        variants = tuple(v.strip() for v in item.get("variants", []))
        for surface in (canonical,) + variants:
            folded = surface.lower()
            if folded in seen:
                raise LexiconError(f"duplicate surface form: {surface!r}")
            seen.add(folded)
        terms.append(VagueTerm(
            canonical=canonical, variants=variants, category=category))
    return VagueLexicon(terms=tuple(terms), version=version)


def density_pct(vague_count, word_count):
    """Vague occurrences per hundred document words."""
    if word_count <= 0:
        return 0.0
    return 100.0 * vague_count / word_count


def build_matcher(lex):
    matcher = PhraseMatcher(fold_case=True)
    for term in lex.terms:
        matcher.add(term.canonical, term.canonical)
        for variant in term.variants:
            matcher.add(variant, term.canonical)
    return matcher


def scan_vague_terms(doc, lex, matcher=None):
    """Scan a Document for vague terms and build its ClarityReport.

    Match spans are absolute offsets into doc.text. Variant hits are
    attributed to their canonical term.
    """
    if matcher is None:
        matcher = build_matcher(lex)
    per_term = {}
    matches = []
    for sentence in doc.sentences:
        base = sentence.char_span[0]
        for start, end, canonical, _surface in matcher.find(sentence.text):
            matches.append(
                (sentence.index, (base + start, base + end), canonical))
            per_term[canonical] = per_term.get(canonical, 0) + 1
    vague_count = len(matches)
    word_count = doc.stats.word_count
    density = density_pct(vague_count, word_count)
    return ClarityReport(
        platform=doc.platform,
        word_count=word_count,
        vague_count=vague_count,
        density_pct=density,
        unique_terms=len(per_term),
        per_term_counts=per_term,
        matches=matches,
    )


def top_terms(report, k):
    """Top k canonical terms by count; ties break alphabetically."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(report.per_term_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]
