"""Edit-distance baseline for the recognition trials.

The reference text is compared with each choice text (exactly as they appear in
the prompt) and the closest choice wins. Ties are scored two ways: unweighted
counts the trial correct if the right choice is among the closest, weighted
credits 1/k for a k-way tie.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance, bit-parallel (Myers 1999 / Hyyro 2003) over Python ints.

    Runs in O(len(a) * len(b) / wordsize); the 48x48 translation texts are
    ~2,350 characters each, which a plain DP table handles far too slowly.
    """
    if len(a) < len(b):
        a, b = b, a
    m = len(b)
    if m == 0:
        return len(a)
    peq: dict[str, int] = {}
    for i, ch in enumerate(b):
        peq[ch] = peq.get(ch, 0) | (1 << i)
    mask = (1 << m) - 1
    last = 1 << (m - 1)
    pv, mv, score = mask, 0, m
    for ch in a:
        eq = peq.get(ch, 0)
        xv = eq | mv
        xh = ((((eq & pv) + pv) & mask) ^ pv) | eq
        ph = mv | (~(xh | pv) & mask)
        mh = pv & xh
        if ph & last:
            score += 1
        elif mh & last:
            score -= 1
        ph = ((ph << 1) | 1) & mask
        mh = (mh << 1) & mask
        pv = mh | (~(xv | ph) & mask)
        mv = ph & xv
    return score


@dataclass(frozen=True)
class BaselineScore:
    unweighted: int
    weighted: Fraction
    distances: tuple[int, ...]
    predicted: tuple[str, ...]  # labels at the minimum distance


def score_texts(reference: str, choices: Mapping[str, str], correct_label: str) -> BaselineScore:
    labels = sorted(choices)
    dists = tuple(levenshtein(reference, choices[lab]) for lab in labels)
    best = min(dists)
    winners = tuple(lab for lab, d in zip(labels, dists) if d == best)
    hit = correct_label in winners
    return BaselineScore(int(hit), Fraction(1, len(winners)) if hit else Fraction(0), dists, winners)


def score_trial(trial) -> BaselineScore:
    """Score a RecognitionTrial (or anything with reference_text, choices and correct_label)."""
    return score_texts(trial.reference_text, dict(trial.choices), trial.correct_label)
