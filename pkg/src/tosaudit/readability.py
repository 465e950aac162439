"""Readability formulas, difficulty bands, and reading-time estimates.

Seven classic formulas computed from DocStats, an easy/moderate/hard
band per formula, and words-per-minute fluency estimates for three
reader groups.
"""

import json
import math
from dataclasses import dataclass
from importlib import resources

from .errors import DegenerateDocumentError, LexiconError

METRICS = (
    "flesch_reading_ease",
    "gunning_fog",
    "flesch_kincaid_grade",
    "coleman_liau",
    "smog",
    "lensear",
    "ari",
)

EASY = "easy"
MODERATE = "moderate"
HARD = "hard"


@dataclass(frozen=True)
class ReadabilityProfile:
    flesch_reading_ease: float
    gunning_fog: float
    flesch_kincaid_grade: float
    coleman_liau: float
    smog: float
    lensear: float
    ari: float


@dataclass(frozen=True)
class ReadabilityBand:
    metric: str
    band: str


@dataclass(frozen=True)
class ReaderGroup:
    name: str
    wpm_low: float
    wpm_high: float


@dataclass(frozen=True)
class FluencyEstimate:
    minutes_low: float
    minutes_high: float


def compute_readability_profile(stats, classic_lensear=False):
    """Evaluate all seven formulas on one document's statistics.

    classic_lensear applies the traditional halving adjustment to the
    Lensear raw score; the default reports the raw easy/hard weighted
    ratio unadjusted.
    """
    if stats.degenerate or stats.word_count < 1 or stats.sentence_count < 1:
        raise DegenerateDocumentError("degenerate document")
    words = stats.word_count
    sentences = stats.sentence_count
    syllables = stats.syllable_count
    wps = words / sentences
    spw = syllables / words

    flesch = 206.835 - 1.015 * wps - 84.6 * spw
    fog = 0.4 * (wps + 100.0 * stats.complex_word_count / words)
    fk = 0.39 * wps + 11.8 * spw - 15.59
    cli = (0.0588 * stats.letters_per_100_words
           - 0.296 * stats.sentences_per_100_words - 15.8)
    smog = 1.0430 * math.sqrt(stats.polysyllable_count * 30.0 / sentences) + 3.1291
    lensear = (stats.easy_word_count * 1.0 + stats.hard_word_count * 3.0) / sentences
    if classic_lensear:
        lensear = lensear / 2.0 if lensear > 20.0 else lensear / 2.0 - 1.0
    ari = (4.71 * stats.character_count / words + 0.5 * wps - 21.43)

    return ReadabilityProfile(
        flesch_reading_ease=flesch,
        gunning_fog=fog,
        flesch_kincaid_grade=fk,
        coleman_liau=cli,
        smog=smog,
        lensear=lensear,
        ari=ari,
    )


def classify_band(metric, score):
    """Band a score as easy, moderate, or hard."""
    if metric == "flesch_reading_ease":
        if score >= 60.0:
            band = EASY
        elif score >= 30.0:
            band = MODERATE
        else:
            band = HARD
    elif metric == "gunning_fog":
        if score <= 8.0:
            band = EASY
        elif score < 12.0:
            band = MODERATE
        else:
            band = HARD
    elif metric in ("flesch_kincaid_grade", "coleman_liau", "smog"):
        if score <= 8.0:
            band = EASY
        elif score < 13.0:
            band = MODERATE
        else:
            band = HARD
    elif metric in ("lensear", "ari"):
        if score <= 9.0:
            band = EASY
        elif score < 13.0:
            band = MODERATE
        else:
            band = HARD
    else:
        raise ValueError(f"unknown metric: {metric}")
    return ReadabilityBand(metric=metric, band=band)


def profile_bands(profile):
    """Band every metric of a profile; returns metric -> band string."""
    return {m: classify_band(m, getattr(profile, m)).band for m in METRICS}


def estimate_reading_time(word_count, group):
    """Minutes to read word_count words at the group's WPM range."""
    if word_count < 0:
        raise ValueError("negative word count")
    if group.wpm_low <= 0 or group.wpm_high <= 0:
        raise ValueError("wpm must be positive")
    return FluencyEstimate(
        minutes_low=word_count / group.wpm_high,
        minutes_high=word_count / group.wpm_low,
    )


def default_reader_groups_path():
    return resources.files("tosaudit.data").joinpath("reader_groups.json")


def load_reader_groups(path=None):
    """Load reader groups from JSON; defaults to the shipped table."""
    if path is None:
        raw = default_reader_groups_path().read_text(encoding="utf-8")
        data = json.loads(raw)
    else:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    groups = data["groups"] if isinstance(data, dict) else data
    out = []
    for item in groups:
        group = ReaderGroup(
            name=item["name"],
            wpm_low=float(item["wpm_low"]),
            wpm_high=float(item["wpm_high"]),
        )
        if group.wpm_low > group.wpm_high:
            raise LexiconError(f"wpm_low > wpm_high for group {group.name}")
        out.append(group)
    if not out:
        raise LexiconError("no reader groups defined")
    return out
