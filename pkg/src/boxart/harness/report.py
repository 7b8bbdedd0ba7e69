"""Accuracy tables from grade records."""

from __future__ import annotations

import csv
import io
from collections import OrderedDict
from typing import Iterable

from ..stats import clopper_pearson, pct

CSV_HEADER = ("setting", "acc", "ci_lo", "ci_hi", "n", "grader")


def summarize(grades: Iterable[dict]) -> list[dict]:
    """One row per (setting, grader). Flagged grades are left out of n."""
    tally: dict = OrderedDict()
    for g in grades:
        if g.get("flagged") or g.get("correct") is None:
            continue
        k, n = tally.get((g["setting"], g["grader"]), (0, 0))
        tally[(g["setting"], g["grader"])] = (k + bool(g["correct"]), n + 1)
    rows = []
    for (setting, grader), (k, n) in sorted(tally.items()):
        lo, hi = clopper_pearson(k, n)
        rows.append({"setting": setting, "acc": str(pct(k / n)), "ci_lo": str(pct(lo)),
                     "ci_hi": str(pct(hi)), "n": n, "grader": grader, "k": k})
    return rows


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r[c] for c in CSV_HEADER])
    return buf.getvalue()


def to_markdown(rows: list[dict]) -> str:
    lines = ["| setting | grader | acc (%) | 95% CI | k/n |", "|---|---|---|---|---|"]
    for r in rows:
        lines.append(f"| {r['setting']} | {r['grader']} | {r['acc']} | [{r['ci_lo']}, {r['ci_hi']}] "
                     f"| {r['k']}/{r['n']} |")
    return "\n".join(lines) + "\n"
