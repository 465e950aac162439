"""Corpus-wide orchestration: snapshot to per-platform result records.

Results are a pure function of the snapshot digests, lexicons, and
options: no timestamps are generated, platforms are processed in
alphabetical order, and serialization is canonical, so re-runs over a
frozen corpus are byte-identical.
"""

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import clarity as clarity_mod
from . import corpus as corpus_mod
from . import interface_assess
from . import readability as readability_mod
from . import specificity as specificity_mod
from . import textprep
from .errors import ReviewError, TosAuditError

RESULTS_SCHEMA_VERSION = 1

EXTRACTION_CONFIG_NAME = "extraction_config.json"
ASSESSMENTS_DIR = "assessments"


@dataclass
class PlatformResult:
    platform: str
    source_digest: str
    document: object
    profile: object
    bands: dict
    fluency: dict
    clarity: object
    findings: list
    auto_counts: object
    auto_scores: object
    post_counts: object
    post_scores: object
    coverage: dict
    interface: object = None


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _doc_stats_dict(stats):
    return {
        "word_count": stats.word_count,
        "sentence_count": stats.sentence_count,
        "syllable_count": stats.syllable_count,
        "letter_count": stats.letter_count,
        "character_count": stats.character_count,
        "complex_word_count": stats.complex_word_count,
        "polysyllable_count": stats.polysyllable_count,
        "easy_word_count": stats.easy_word_count,
        "hard_word_count": stats.hard_word_count,
        "letters_per_100_words": stats.letters_per_100_words,
        "sentences_per_100_words": stats.sentences_per_100_words,
        "degenerate": stats.degenerate,
    }


def _counts_dict(counts):
    return {
        "dt": counts.dt,
        "en": counts.en,
        "re_explicit": counts.re_explicit,
        "re_vague": counts.re_vague,
        "sg": counts.sg,
        "ss": counts.ss,
    }


def _scores_dict(scores):
    return {
        "dt_s": scores.dt_s,
        "en_s": scores.en_s,
        "r_s": scores.r_s,
        "s_s": scores.s_s,
        "composite": scores.composite,
        "stage": scores.stage,
    }


def result_to_dict(result):
    d = {
        "platform": result.platform,
        "source_digest": result.source_digest,
        "doc_stats": _doc_stats_dict(result.document.stats),
        "readability": {
            "scores": {m: getattr(result.profile, m)
                       for m in readability_mod.METRICS},
            "bands": dict(result.bands),
        },
        "fluency": result.fluency,
        "clarity": {
            "word_count": result.clarity.word_count,
            "vague_count": result.clarity.vague_count,
            "density_pct": result.clarity.density_pct,
            "unique_terms": result.clarity.unique_terms,
            "per_term_counts": dict(result.clarity.per_term_counts),
            "matches": [
                [idx, [span[0], span[1]], canonical]
                for idx, span, canonical in result.clarity.matches
            ],
        },
        "specificity": {
            "findings": [specificity_mod.finding_to_dict(f)
                         for f in result.findings],
            "auto": {
                "counts": _counts_dict(result.auto_counts),
                "scores": _scores_dict(result.auto_scores),
            },
            "post_review": {
                "counts": _counts_dict(result.post_counts),
                "scores": _scores_dict(result.post_scores),
            },
            "coverage": dict(result.coverage),
        },
        "interface": (interface_assess.assessment_to_dict(result.interface)
                      if result.interface is not None else None),
    }
    return d


class PipelineContext:
    """Lexicons and options loaded once per run."""

    def __init__(self, lexicons_dir=None, corpus_dir=None,
                 classic_lensear=False):
        if lexicons_dir is not None and not os.path.isdir(lexicons_dir):
            raise TosAuditError(f"lexicon not found: {lexicons_dir}")

        def optional(name):
            if lexicons_dir is None:
                return None
            path = os.path.join(lexicons_dir, name)
            return path if os.path.exists(path) else None

        vague_path = optional("vague_terms.json")
        self.vague_lexicon = clarity_mod.load_vague_lexicon(vague_path)
        self.vague_matcher = clarity_mod.build_matcher(self.vague_lexicon)
        spec_dir = lexicons_dir
        if lexicons_dir is not None:
            required = ("data_types.json", "entities.json",
                        "retention.json", "sharing.json")
            if not all(os.path.exists(os.path.join(lexicons_dir, n))
                       for n in required):
                spec_dir = None
        self.spec_lexicons = specificity_mod.ensure_compiled(
            specificity_mod.load_specificity_lexicons(spec_dir))
        self.reader_groups = readability_mod.load_reader_groups(
            optional("reader_groups.json"))
        syl_path = optional("syllable_exceptions.txt")
        self.syllable_overrides = (
            textprep.load_syllable_overrides(syl_path) if syl_path else None)
        self.classic_lensear = classic_lensear
        self.extraction_config = None
        if corpus_dir is not None:
            cfg_path = os.path.join(corpus_dir, EXTRACTION_CONFIG_NAME)
            if os.path.exists(cfg_path):
                self.extraction_config = textprep.load_extraction_config(cfg_path)


def analyze_entry(entry, payload, ctx):
    """Analyze one snapshot payload into a PlatformResult."""
    text = textprep.extract_text(
        payload, entry.media_kind,
        extraction_config=ctx.extraction_config, platform=entry.platform)
    doc = textprep.build_document(
        entry.platform, text, syllable_overrides=ctx.syllable_overrides)
    profile = readability_mod.compute_readability_profile(
        doc.stats, classic_lensear=ctx.classic_lensear)
    bands = readability_mod.profile_bands(profile)
    fluency = {}
    for group in ctx.reader_groups:
        estimate = readability_mod.estimate_reading_time(
            doc.stats.word_count, group)
        fluency[group.name] = {
            "wpm_low": group.wpm_low,
            "wpm_high": group.wpm_high,
            "minutes_low": estimate.minutes_low,
            "minutes_high": estimate.minutes_high,
        }
    clarity_report = clarity_mod.scan_vague_terms(
        doc, ctx.vague_lexicon, matcher=ctx.vague_matcher)
    findings = specificity_mod.analyze_document(doc, ctx.spec_lexicons)
    auto_counts = specificity_mod.aggregate_counts(findings, use_review=False)
    auto_scores = specificity_mod.map_scores(auto_counts, "auto")
    post_counts = specificity_mod.aggregate_counts(findings, use_review=True)
    post_scores = specificity_mod.map_scores(post_counts, "post_review")
    coverage = specificity_mod.sentence_coverage(
        findings, doc.stats.sentence_count)
    return PlatformResult(
        platform=entry.platform,
        source_digest=entry.content_digest,
        document=doc,
        profile=profile,
        bands=bands,
        fluency=fluency,
        clarity=clarity_report,
        findings=findings,
        auto_counts=auto_counts,
        auto_scores=auto_scores,
        post_counts=post_counts,
        post_scores=post_scores,
        coverage=coverage,
    )


def _attach_interface(result, corpus_dir):
    """Load and validate this platform's assessment, if present."""
    path = os.path.join(corpus_dir, ASSESSMENTS_DIR,
                        f"{result.platform}.json")
    if not os.path.exists(path):
        return None
    assessment = interface_assess.load_assessment(path)
    errors = interface_assess.validate_assessment(
        assessment, doc=result.document)
    if errors:
        return "; ".join(errors)
    result.interface = assessment
    return None


def run_pipeline(corpus_dir, lexicons_dir=None, workers=1,
                 classic_lensear=False):
    """Analyze every platform in the corpus.

    Returns (results, failures): PlatformResults sorted by platform,
    and (platform, message) pairs for documents that could not be
    analyzed. Lexicon problems raise instead of being collected.
    """
    manifest = corpus_mod.load_manifest(
        os.path.join(corpus_dir, corpus_mod.MANIFEST_NAME))
    ctx = PipelineContext(lexicons_dir=lexicons_dir, corpus_dir=corpus_dir,
                          classic_lensear=classic_lensear)
    entries = sorted(manifest.entries, key=lambda e: e.platform)

    def work(entry):
        payload = corpus_mod.read_payload(corpus_dir, entry)
        return analyze_entry(entry, payload, ctx)

    results = []
    failures = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [(e, pool.submit(work, e)) for e in entries]
            outcomes = [(e, f) for e, f in futures]
    else:
        outcomes = []
        for entry in entries:
            outcomes.append((entry, None))
    for entry, future in outcomes:
        try:
            result = future.result() if future is not None else work(entry)
        except TosAuditError as exc:
            failures.append((entry.platform, str(exc)))
            continue
        problem = _attach_interface(result, corpus_dir)
        if problem:
            failures.append((entry.platform, f"invalid assessment: {problem}"))
        results.append(result)
    results.sort(key=lambda r: r.platform)
    failures.sort()
    return results, failures


def results_payload(results, failures):
    return {
        "schema_version": RESULTS_SCHEMA_VERSION,
        "results": [result_to_dict(r) for r in results],
        "failures": [{"platform": p, "error": e} for p, e in failures],
    }


def save_results(payload, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(payload))


def load_results(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise TosAuditError(f"results not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise TosAuditError(f"malformed results file {path}: {exc}") from None


def export_review_from_results(payload, out_path, include_dt_en=False):
    """Export all reviewable findings in a results file to JSONL."""
    findings = []
    for result in payload.get("results", []):
        for d in result["specificity"]["findings"]:
            findings.append(specificity_mod.finding_from_dict(d))
    return specificity_mod.export_review(
        findings, out_path, include_dt_en=include_dt_en)


def apply_review_to_results(payload, review_path):
    """Apply a review file across a results payload.

    Rebuilds each platform's post-review counts and scores from the
    human labels; auto values are recomputed from auto labels and stay
    untouched by review actions. Returns the revised payload.
    """
    records = specificity_mod.parse_review_file(review_path)
    by_platform = {}
    for rec in records:
        platform = rec.get("platform")
        by_platform.setdefault(platform, []).append(rec)
    known = {r["platform"] for r in payload.get("results", [])}
    for platform in by_platform:
        if platform not in known:
            raise ReviewError(f"unmatched review record: platform {platform!r}")
    for result in payload.get("results", []):
        findings = [specificity_mod.finding_from_dict(d)
                    for d in result["specificity"]["findings"]]
        platform_records = by_platform.get(result["platform"], [])
        specificity_mod.apply_review_records(findings, platform_records)
        auto_counts = specificity_mod.aggregate_counts(
            findings, use_review=False)
        post_counts = specificity_mod.aggregate_counts(
            findings, use_review=True)
        result["specificity"]["findings"] = [
            specificity_mod.finding_to_dict(f) for f in findings]
        result["specificity"]["auto"] = {
            "counts": _counts_dict(auto_counts),
            "scores": _scores_dict(
                specificity_mod.map_scores(auto_counts, "auto")),
        }
        result["specificity"]["post_review"] = {
            "counts": _counts_dict(post_counts),
            "scores": _scores_dict(
                specificity_mod.map_scores(post_counts, "post_review")),
        }
        sentence_count = result["doc_stats"]["sentence_count"]
        result["specificity"]["coverage"] = specificity_mod.sentence_coverage(
            findings, sentence_count)
    return payload
