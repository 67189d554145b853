"""Deterministic text segmentation and counting.

Everything the grade formulas consume comes from here: sentence and word
counts, syllable estimates, and per-token character/letter counts. All
functions are pure and rule-based; no language models, no randomness, so
the same text always yields the same numbers.

Legal texts are dense with "Art. 5" style citations, so the sentence
splitter carries a small abbreviation list that suppresses boundaries
after those tokens. Decimal numbers ("1.5") never split because a
boundary requires whitespace (or end of text) after the terminator.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

__all__ = [
    "TextMetrics",
    "segment_sentences",
    "tokenize_words",
    "count_syllables",
    "compute_metrics",
]

# Tokens that end with '.' without ending a sentence (compared lowercase).
ABBREVIATIONS = frozenset(
    {"art.", "no.", "e.g.", "i.e.", "cf.", "p.", "mr.", "mrs.", "dr."}
)

# Terminator, optionally followed by closing quotes/brackets, then
# whitespace or end of text.
_BOUNDARY = re.compile(r"[.!?][\"'’”)\]»]*(?=\s|$)")

_VOWELS = frozenset("aeiouy")

# Opening punctuation stripped before abbreviation comparison.
_OPENERS = "\"'([{‘“«"


@dataclass(frozen=True)
class TextMetrics:
    """Raw counts for one text.

    characters are alphanumeric characters inside word tokens (what ARI
    calls characters); letters are the alphabetic subset (what
    Coleman-Liau counts). Punctuation and whitespace belong to neither.
    """

    sentence_count: int
    word_count: int
    syllable_count: int
    polysyllable_count: int
    character_count: int
    letter_count: int
    easy_word_count: int
    hard_word_count: int


def _normalize(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def _has_word(fragment: str) -> bool:
    return any(ch.isalnum() for ch in fragment)


def segment_sentences(text: str) -> list[str]:
    """Split text into sentences.

    Boundaries are '.', '!' or '?' (plus any closing quotes/brackets)
    followed by whitespace or end of text, except after a known
    abbreviation. Fragments without a single word token are merged into
    the neighbouring sentence, so every returned sentence contains at
    least one word. Text without a terminator is one sentence.
    """
    text = _normalize(text)
    if not _has_word(text):
        return []

    cuts = []
    for match in _BOUNDARY.finditer(text):
        if text[match.start()] == "." and _is_abbreviation(text, match.start()):
            continue
        cuts.append(match.end())

    spans = []
    prev = 0
    for cut in cuts:
        spans.append((prev, cut))
        prev = cut
    if text[prev:].strip():
        spans.append((prev, len(text)))

    # Merge word-less fragments so no sentence is pure punctuation.
    merged: list[list[int]] = []
    carry_start: int | None = None
    for start, end in spans:
        if not _has_word(text[start:end]):
            if merged:
                merged[-1][1] = end
            elif carry_start is None:
                carry_start = start
            continue
        if carry_start is not None:
            start = carry_start
            carry_start = None
        merged.append([start, end])

    return [text[s:e].strip() for s, e in merged]


def _is_abbreviation(text: str, dot_index: int) -> bool:
    start = dot_index
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    token = text[start : dot_index + 1].lstrip(_OPENERS)
    return token.lower() in ABBREVIATIONS


def tokenize_words(text: str) -> list[str]:
    """Split text into word tokens.

    A word token is a maximal run of non-whitespace characters containing
    at least one alphanumeric character; pure-punctuation runs are
    dropped. Hyphenated forms stay one token.
    """
    return [tok for tok in _normalize(text).split() if _has_word(tok)]


def count_syllables(word: str) -> int:
    """Estimate syllables in one word token; always at least 1.

    Counts maximal vowel-group runs (a, e, i, o, u, y) over the
    lowercased alphabetic content, subtracting one for a silent final
    "e" unless the word ends in "le" after a consonant. Hyphen-separated
    parts are counted separately and summed. Tokens without alphabetic
    content (numbers, "2016/679") count as one syllable.
    """
    total = 0
    for part in word.split("-"):
        content = "".join(ch for ch in part.lower() if ch.isalpha())
        if not content:
            continue
        runs = 0
        in_run = False
        for ch in content:
            is_vowel = ch in _VOWELS
            if is_vowel and not in_run:
                runs += 1
            in_run = is_vowel
        if (
            content.endswith("e")
            and runs > 1
            and not (
                content.endswith("le")
                and len(content) >= 3
                and content[-3] not in _VOWELS
            )
        ):
            runs -= 1
        total += max(1, runs)
    return max(1, total)


def compute_metrics(text: str) -> TextMetrics:
    """Count sentences, words, syllables and characters for one text.

    Degenerate text (no word tokens) yields all-zero metrics; rejecting
    it is the grade layer's job.
    """
    text = _normalize(text)
    sentences = segment_sentences(text)
    words = tokenize_words(text)

    syllables = 0
    polysyllables = 0
    characters = 0
    letters = 0
    for token in words:
        n = count_syllables(token)
        syllables += n
        if n >= 3:
            polysyllables += 1
        characters += sum(ch.isalnum() for ch in token)
        letters += sum(ch.isalpha() for ch in token)

    return TextMetrics(
        sentence_count=len(sentences),
        word_count=len(words),
        syllable_count=syllables,
        polysyllable_count=polysyllables,
        character_count=characters,
        letter_count=letters,
        easy_word_count=len(words) - polysyllables,
        hard_word_count=polysyllables,
    )
