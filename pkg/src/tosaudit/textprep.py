"""Turn raw snapshots into normalized, fully counted documents.

Covers text extraction, sentence segmentation, word tokenization,
syllable counting, and the document statistics every readability
formula consumes. All rules here are deterministic so identical input
always yields identical counts.
"""

import json
import re
from dataclasses import dataclass, field

from .errors import ExtractionError, LexiconError
from .htmltext import html_to_text

# Maximal runs of letters/digits; internal apostrophes and hyphens are
# kept, so "third-party" and "don't" are single tokens. Underscore is
# excluded from the class on purpose.
WORD_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*", re.UNICODE)

# Case-sensitive suppression list for sentence splitting.
ABBREVIATIONS = frozenset({
    "Inc.", "Ltd.", "Corp.", "e.g.", "i.e.", "etc.", "No.", "U.S.", "v.",
    "Mr.", "Dr.",
})

_SENT_END_RE = re.compile(r"[.!?]+")
_OPENING_QUOTES = "\"'“‘"
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")


@dataclass(frozen=True)
class Sentence:
    """One sentence with its word tokens and span in the document text."""

    index: int
    text: str
    tokens: tuple
    char_span: tuple


@dataclass(frozen=True)
class DocStats:
    word_count: int = 0
    sentence_count: int = 0
    syllable_count: int = 0
    letter_count: int = 0
    character_count: int = 0
    complex_word_count: int = 0
    polysyllable_count: int = 0
    easy_word_count: int = 0
    hard_word_count: int = 0
    letters_per_100_words: float = 0.0
    sentences_per_100_words: float = 0.0
    degenerate: bool = False


@dataclass(frozen=True)
class Document:
    platform: str
    text: str
    sentences: tuple = field(default_factory=tuple)
    stats: DocStats = field(default_factory=DocStats)


def normalize_text(text):
    """Collapse whitespace; any run holding a blank line becomes '\n\n'."""

    def repl(m):
        return "\n\n" if m.group(0).count("\n") >= 2 else " "

    return re.sub(r"\s+", repl, text).strip()


def extract_text(payload, media_kind, extraction_config=None, platform=None):
    """Decode a snapshot payload into normalized plain text.

    media_kind is 'html' or 'plain_text'. extraction_config maps a
    platform name to {"include": [...], "exclude": [...]} selector
    lists applied to HTML payloads.
    """
    if not payload:
        raise ExtractionError("empty document")
    text = payload.decode("utf-8", errors="replace")
    if media_kind == "html":
        include = exclude = None
        if extraction_config and platform and platform in extraction_config:
            rules = extraction_config[platform]
            if isinstance(rules, list):
                include = rules
            else:
                include = rules.get("include")
                exclude = rules.get("exclude")
        text = html_to_text(text, include=include, exclude=exclude)
    elif media_kind != "plain_text":
        raise ExtractionError(f"unknown media kind: {media_kind}")
    return normalize_text(text)


def load_extraction_config(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def tokenize_words(sentence_text):
    """Word tokens of a string, case preserved."""
    return WORD_RE.findall(sentence_text)


def _paragraphs(text):
    pos = 0
    for part in text.split("\n\n"):
        yield pos, part
        pos += len(part) + 2


def _split_points(para):
    """Indexes where a new sentence starts inside one paragraph."""
    points = []
    for m in _SENT_END_RE.finditer(para):
        end = m.end()
        ws = re.match(r"\s+", para[end:])
        if not ws:
            continue
        nxt = end + ws.end()
        if nxt >= len(para):
            continue
        ch = para[nxt]
        if not (ch.isupper() or ch.isdigit() or ch in _OPENING_QUOTES):
            continue
        tail = re.search(r"\S+$", para[:end])
        chunk = tail.group(0).lstrip("([" + _OPENING_QUOTES) if tail else ""
        if chunk in ABBREVIATIONS:
            continue
        points.append((end, nxt))
    return points


def segment_sentences(text):
    """Split text into Sentences; spans index into the given text.

    Splits after '.', '!' or '?' when followed by whitespace and an
    uppercase letter, digit, or opening quote; a shipped abbreviation
    list and decimal numbers never split. Blank lines always end a
    sentence. Segments without any word token are dropped.
    """
    sentences = []
    for para_start, para in _paragraphs(text):
        points = _split_points(para)
        starts = [0] + [nxt for _, nxt in points]
        ends = [end for end, _ in points] + [len(para)]
        for seg_start, seg_end in zip(starts, ends):
            segment = para[seg_start:seg_end]
            stripped = segment.strip()
            if not stripped:
                continue
            tokens = tuple(tokenize_words(stripped))
            if not tokens:
                continue
            lead = len(segment) - len(segment.lstrip())
            abs_start = para_start + seg_start + lead
            sentences.append(Sentence(
                index=len(sentences),
                text=stripped,
                tokens=tokens,
                char_span=(abs_start, abs_start + len(stripped)),
            ))
    return sentences


def count_syllables(word, overrides=None):
    """Heuristic syllable count: vowel groups with a silent-e rule.

    Vowels are a, e, i, o, u, y. A terminal 'e' is silent unless the
    word ends in consonant + 'le'. Any non-empty token counts at least
    one syllable. overrides maps lowercased words to fixed counts.
    """
    if not word:
        return 0
    lw = word.lower()
    if overrides:
        fixed = overrides.get(lw)
        if fixed is not None:
            return fixed
    groups = len(_VOWEL_GROUP_RE.findall(lw))
    if groups == 0:
        return 1
    if lw.endswith("e"):
        if not (lw.endswith("le") and len(lw) >= 3 and lw[-3] not in "aeiouy"):
            groups -= 1
    return max(groups, 1)


def load_syllable_overrides(path):
    """Read a word<TAB>count override file; '#' starts a comment line."""
    overrides = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise LexiconError(
                    f"{path}:{lineno}: expected word<TAB>count")
            word, count = parts
            try:
                overrides[word.strip().lower()] = int(count)
            except ValueError:
                raise LexiconError(
                    f"{path}:{lineno}: count is not an integer") from None
    return overrides


def compute_doc_stats(sentences, syllable_overrides=None):
    """Aggregate counts over sentences; zero words flags degenerate."""
    word_count = 0
    syllable_count = 0
    letter_count = 0
    character_count = 0
    hard = 0
    easy = 0
    for sentence in sentences:
        for token in sentence.tokens:
            word_count += 1
            syllables = count_syllables(token, syllable_overrides)
            syllable_count += syllables
            letter_count += sum(1 for ch in token if ch.isalpha())
            character_count += sum(1 for ch in token if ch.isalnum())
            if syllables >= 3:
                hard += 1
            else:
                easy += 1
    sentence_count = len(sentences)
    if word_count == 0:
        return DocStats(degenerate=True)
    return DocStats(
        word_count=word_count,
        sentence_count=sentence_count,
        syllable_count=syllable_count,
        letter_count=letter_count,
        character_count=character_count,
        complex_word_count=hard,
        polysyllable_count=hard,
        easy_word_count=easy,
        hard_word_count=hard,
        letters_per_100_words=100.0 * letter_count / word_count,
        sentences_per_100_words=100.0 * sentence_count / word_count,
    )


def build_document(platform, text, syllable_overrides=None):
    """Normalize text, segment it, and compute document statistics."""
    normalized = normalize_text(text)
    sentences = tuple(segment_sentences(normalized))
    stats = compute_doc_stats(sentences, syllable_overrides)
    return Document(
        platform=platform,
        text=normalized,
        sentences=sentences,
        stats=stats,
    )
