import itertools
from fractions import Fraction

from hypothesis import given, strategies as st

from boxart.baseline import levenshtein, score_texts, score_trial
from boxart.kinds import TaskKind
from boxart.trials import build_trials, make_settings


def dp_levenshtein(a: str, b: str) -> int:
    """Textbook Wagner-Fischer table."""
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def test_examples():
    assert levenshtein("abc", "abc") == 0
    assert levenshtein("", "ab") == 2
    assert levenshtein("kitten", "sitting") == 3


def test_exhaustive_small_alphabet():
    words = ["".join(p) for n in range(5) for p in itertools.product("ab-", repeat=n)]
    for a in words[::3]:
        for b in words:
            assert levenshtein(a, b) == dp_levenshtein(a, b)


@given(st.text(" -|\nab", max_size=7), st.text(" -|\nab", max_size=7))
def test_matches_dp_short(a, b):
    assert levenshtein(a, b) == dp_levenshtein(a, b)


@given(st.text(" -|\n@a", max_size=150), st.text(" -|\n@a", max_size=150))
def test_matches_dp_multiword(a, b):
    # longer than one 64-bit word, so carries cross word boundaries
    assert levenshtein(a, b) == dp_levenshtein(a, b)


@given(st.text(max_size=40), st.text(max_size=40))
def test_symmetric(a, b):
    assert levenshtein(a, b) == levenshtein(b, a)


def test_tie_rules():
    s = score_texts("xyz", {"A": "aaa", "B": "bbb", "C": "ccc"}, "B")
    assert s.distances == (3, 3, 3) and s.unweighted == 1 and s.weighted == Fraction(1, 3)
    s = score_texts("abc", {"A": "abc", "B": "abd", "C": "zzz"}, "B")
    assert (s.unweighted, s.weighted) == (0, 0)


def test_verbatim_trial_scores_one():
    s = make_settings(TaskKind.RECOG_VERBATIM, size=0.3)
    for _, t in build_trials(s, 20, seed=4):
        sc = score_trial(t)
        assert sc.unweighted == 1 and sc.weighted == 1
        assert sc.distances[ord(t.correct_label) - 65] == 0


def test_weighted_never_exceeds_unweighted():
    s = make_settings(TaskKind.RECOG_ROTATION, size=0.3)
    for _, t in build_trials(s, 60, seed=4):
        sc = score_trial(t)
        assert sc.weighted <= sc.unweighted
