"""The five readability grades and their common truncation rule.

Four indices are plain ratio formulas over TextMetrics; Linsear Write
scores 100-word samples instead. Every raw value is truncated UP to the
nearest integer (negative grades are possible and preserved). A small
guard snaps values that sit within 1e-9 of an integer before the
ceiling, so products like 0.39 * 20 that are integers in exact
arithmetic do not gain a spurious +1 from binary rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateTextError
from .segmenter import (
    TextMetrics,
    compute_metrics,
    count_syllables,
    segment_sentences,
    tokenize_words,
)

__all__ = [
    "GradeVector",
    "LINSEAR_MODES",
    "flesch_kincaid",
    "smog",
    "ari",
    "coleman_liau",
    "linsear_write",
    "grade_all",
    "grade_metrics",
]

#: windowed  - average the scaled score of consecutive 100-word windows
#: compat    - score only the first 100 words (first-sample behaviour)
LINSEAR_MODES = ("windowed", "compat")

_SNAP = 1e-9


@dataclass(frozen=True)
class GradeVector:
    """The five truncated grades plus the three-index sum variable.

    sum_variable is the arithmetic mean of the Flesch-Kincaid, SMOG and
    ARI grades; the other two indices never contribute to it.
    """

    g1_flesch_kincaid: int
    g2_smog: int
    g3_ari: int
    g4_coleman_liau: int
    g5_linsear: int
    sum_variable: float


def _ceil_grade(raw: float) -> int:
    nearest = round(raw)
    if abs(raw - nearest) <= _SNAP:
        return int(nearest)
    return math.ceil(raw)


def _require(condition: bool, what: str) -> None:
    if not condition:
        raise DegenerateTextError(f"text has no measurable prose: {what}")


def flesch_kincaid(m: TextMetrics) -> int:
    _require(m.sentence_count >= 1, "sentence count is zero")
    _require(m.word_count >= 1, "word count is zero")
    raw = (
        0.39 * (m.word_count / m.sentence_count)
        + 11.8 * (m.syllable_count / m.word_count)
        - 15.59
    )
    return _ceil_grade(raw)


def smog(m: TextMetrics) -> int:
    _require(m.sentence_count >= 1, "sentence count is zero")
    raw = 1.0430 * math.sqrt(30 * m.polysyllable_count / m.sentence_count) + 3.1291
    return _ceil_grade(raw)


def ari(m: TextMetrics) -> int:
    _require(m.sentence_count >= 1, "sentence count is zero")
    _require(m.word_count >= 1, "word count is zero")
    raw = (
        4.71 * (m.character_count / m.word_count)
        + 0.5 * (m.word_count / m.sentence_count)
        - 21.43
    )
    return _ceil_grade(raw)


def coleman_liau(m: TextMetrics) -> int:
    _require(m.word_count >= 1, "word count is zero")
    letters_per_100 = 100 * m.letter_count / m.word_count
    sentences_per_100 = 100 * m.sentence_count / m.word_count
    raw = 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8
    return _ceil_grade(raw)


def _check_mode(mode: str) -> None:
    if mode not in LINSEAR_MODES:
        raise ValueError(f"unknown linsear mode {mode!r}; expected one of {LINSEAR_MODES}")


def _sample_score(window: list[str]) -> float:
    """Scaled Linsear score of one word-token window."""
    easy = 0
    hard = 0
    for token in window:
        if count_syllables(token) >= 3:
            hard += 1
        else:
            easy += 1
    # A window with no detected terminator still counts as one sentence
    # (heading-only windows must not divide by zero).
    sentences = max(1, len(segment_sentences(" ".join(window))))
    score = (easy * 1 + hard * 3) / sentences
    if score > 20:
        return score / 2
    return (score - 2) / 2


def _windows(tokens: list[str]) -> list[list[str]]:
    if len(tokens) <= 100:
        return [tokens]
    chunks = [tokens[i : i + 100] for i in range(0, len(tokens), 100)]
    # A short trailing window (< 50 words) merges into the previous one.
    if len(chunks) > 1 and len(chunks[-1]) < 50:
        tail = chunks.pop()
        chunks[-1] = chunks[-1] + tail
    return chunks


def linsear_write(text: str, mode: str = "windowed") -> int:
    """Linsear Write grade of a text.

    Each 100-word sample scores one point per easy word (two syllables
    or less) and three per hard word (three or more), divided by the
    sentences in the sample; the quotient r is rescaled to r/2 when
    r > 20 and (r - 2)/2 otherwise. Windowed mode averages the scaled
    scores over consecutive non-overlapping 100-word windows; compat
    mode scores only the first 100 words. The result is truncated up.
    """
    _check_mode(mode)
    tokens = tokenize_words(text)
    if not tokens:
        raise DegenerateTextError("text has no measurable prose: no word tokens")
    if mode == "compat":
        return _ceil_grade(_sample_score(tokens[:100]))
    scores = [_sample_score(window) for window in _windows(tokens)]
    return _ceil_grade(sum(scores) / len(scores))


def grade_metrics(m: TextMetrics, text: str, mode: str = "windowed") -> GradeVector:
    """Grade a text whose metrics are already computed.

    Used by batch analysis to avoid counting the same document twice;
    `text` must be the text `m` was computed from.
    """
    _check_mode(mode)
    g1 = flesch_kincaid(m)
    g2 = smog(m)
    g3 = ari(m)
    g4 = coleman_liau(m)
    g5 = linsear_write(text, mode)
    return GradeVector(
        g1_flesch_kincaid=g1,
        g2_smog=g2,
        g3_ari=g3,
        g4_coleman_liau=g4,
        g5_linsear=g5,
        sum_variable=(g1 + g2 + g3) / 3,
    )


def grade_all(text: str, mode: str = "windowed") -> GradeVector:
    """Compute all five grades and the sum variable for one text."""
    return grade_metrics(compute_metrics(text), text, mode)
