"""Reading boxes back out of character grids and grading generated art.

Parsed boxes use storage coordinates: (top, left, bottom, right) with row 0
at the top. ``ParsedBox.to_box`` converts to the y-up coordinates of
``diagram.Box`` given the canvas height.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Optional

from .diagram import CORNERS, Box, Corner, Diagram, render, rotate_cw
from .grid import DEFAULT_NOISE_CHARSET, CharGrid, strip_margins, trim_ragged, upscale2
from .kinds import TaskKind

EDGE_CHARS = "-|"
RUNAWAY_REPEATS = 8
RUNAWAY_HEIGHT_FACTOR = 4

_ALNUM_PAIR = re.compile(r"[A-Za-z0-9]{2}")
_FENCE = "```"


@dataclass(frozen=True)
class ParsedBox:
    top: int
    left: int
    bottom: int
    right: int
    name: Optional[str] = None
    corner: Optional[Corner] = None

    @property
    def shape(self) -> tuple[int, int]:
        return (self.bottom - self.top + 1, self.right - self.left + 1)

    @property
    def rect(self) -> tuple[int, int, int, int]:
        return (self.top, self.left, self.bottom, self.right)

    def to_box(self, height: int) -> Box:
        return Box(self.left, height - 1 - self.bottom, self.right, height - 1 - self.top,
                   self.name, self.corner or Corner.LL)


@dataclass
class StructureReport:
    boxes: list[ParsedBox]
    stray_cells: list[tuple[int, int, str]]

    @property
    def is_clean(self) -> bool:
        return not self.stray_cells

    def to_diagram(self, side: int) -> Diagram:
        return Diagram(side, tuple(b.to_box(side) for b in self.boxes))

    def to_json(self) -> dict:
        return {
            "boxes": [{"top": b.top, "left": b.left, "bottom": b.bottom, "right": b.right,
                       "name": b.name, "corner": b.corner.value if b.corner else None}
                      for b in self.boxes],
            "stray_cells": [list(c) for c in self.stray_cells],
            "is_clean": self.is_clean,
        }


def _interior_cells(top: int, left: int, bottom: int, right: int):
    # storage-row form of Box.interior_corner, in CORNERS order
    for c in CORNERS:
        col = left + 1 if c in (Corner.LL, Corner.UL) else right - 1
        row = bottom - 1 if c in (Corner.LL, Corner.LR) else top + 1
        yield c, row, col


def parse_boxes(grid: CharGrid) -> StructureReport:
    """Find every box drawn in the render convention, then attribute names and strays.

    A box needs a top-left corner cell that is not an edge character, a maximal
    dash run to its right, a maximal pipe run below it, and the matching
    opposite edges with the same extents. Because both runs are maximal, each
    top-left admits at most one candidate. Cells of accepted boxes are consumed.
    """
    cell = grid.cell
    h, w = grid.height, grid.width
    used: set[tuple[int, int]] = set()
    found: list[ParsedBox] = []
    for r in range(h):
        for c in range(w):
            if cell(r, c) in EDGE_CHARS or cell(r, c + 1) != "-" or cell(r + 1, c) != "|":
                continue
            right = c + 1
            while cell(r, right) == "-":
                right += 1
            bottom = r + 1
            while cell(bottom, c) == "|":
                bottom += 1
            if cell(r, right) == "|" or cell(bottom, c) == "-":
                continue
            edge = [(r, x) for x in range(c + 1, right)] + [(y, c) for y in range(r + 1, bottom)]
            ok = True
            for y in range(r + 1, bottom):
                if cell(y, right) != "|":
                    ok = False
                    break
            if not ok or cell(r, right) == "|" or cell(bottom, right) in EDGE_CHARS:
                continue
            for x in range(c + 1, right):
                if cell(bottom, x) != "-":
                    ok = False
                    break
            if not ok:
                continue
            edge += [(bottom, x) for x in range(c + 1, right)] + [(y, right) for y in range(r + 1, bottom)]
            if any(p in used for p in edge):
                continue
            used.update(edge)
            found.append(ParsedBox(r, c, bottom, right))

    named: list[ParsedBox] = []
    for b in found:
        for corner, row, col in _interior_cells(b.top, b.left, b.bottom, b.right):
            ch = cell(row, col)
            if ch.isascii() and ch.isalnum() and (row, col) not in used:
                used.add((row, col))
                b = ParsedBox(b.top, b.left, b.bottom, b.right, ch, corner)
                break
        named.append(b)

    strays = [(i, j, ch) for i, row in enumerate(grid.rows) for j, ch in enumerate(row)
              if ch != " " and (i, j) not in used]
    return StructureReport(named, strays)


def has_vertex_signature(text: str) -> bool:
    """True iff some ``|`` has a ``-`` diagonally next to it."""
    lines = text.replace("\r\n", "\n").split("\n")
    for i, line in enumerate(lines):
        j = line.find("|")
        while j != -1:
            for ii in (i - 1, i + 1):
                if 0 <= ii < len(lines):
                    other = lines[ii]
                    for jj in (j - 1, j + 1):
                        if 0 <= jj < len(other) and other[jj] == "-":
                            return True
            j = line.find("|", j + 1)
    return False


def extract_art(response: str) -> Optional[str]:
    """Pull the ASCII-art out of a free-form response, or None if there is none."""
    text = response.replace("\r\n", "\n")
    parts = text.split(_FENCE)
    if len(parts) >= 3:
        body = parts[-2]
        if "\n" in body:
            body = body.split("\n", 1)[1]  # drop the rest of the opening fence line
            if body.endswith("\n"):
                body = body[:-1]
        if has_vertex_signature(body):
            return body
    lines = text.split("\n")
    last = -1
    for i, line in enumerate(lines):
        if _ALNUM_PAIR.search(line):
            last = i
    tail = "\n".join(lines[last + 1:])
    if has_vertex_signature(tail):
        return tail
    return None


@dataclass
class GenerationMetrics:
    exact_match: bool
    boxes_matched: int
    boxes_missing: int
    boxes_fabricated: int
    names_missing: list[str]
    names_fabricated: list[str]
    noise_remaining: int
    noise_added: int
    top_margin_rows: int
    left_margin_cols: int
    runaway_repetition: bool

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "GenerationMetrics":
        return cls(**d)


def _normalize(grid: CharGrid) -> tuple[str, ...]:
    rows = list(trim_ragged(grid).rows)
    while rows and not rows[-1]:
        rows.pop()
    return tuple(rows)


def _rowcol(box: Box, side: int) -> tuple[int, int, int, int]:
    return (side - 1 - box.y2, box.x1, side - 1 - box.y1, box.x2)


def _max_block_repeat(lines: list[str]) -> int:
    """Largest k such that some block of >= 1 lines, not all blank, repeats k times in a row."""
    best = 1
    n = len(lines)
    for b in range(1, n // 2 + 1):
        run = 0
        inked = []  # blank flags of the positions in the current run
        for p in range(n - b):
            if lines[p] == lines[p + b]:
                run += 1
                inked.append(bool(lines[p].strip()))
                if run >= b and any(inked[-b:]):
                    best = max(best, run // b + 1)
            else:
                run = 0
                inked = []
    return best


def _expected(kind: TaskKind, reference: Diagram) -> tuple[CharGrid, list[tuple], bool]:
    """Target grid, expected (rect, name) pairs in storage coordinates, and whether any uniform offset is allowed."""
    s = reference.side
    if kind == TaskKind.GEN_ROTATION:
        d = rotate_cw(reference)
        return render(d), [(_rowcol(b, s), b.name) for b in d.boxes], False
    if kind == TaskKind.GEN_SCALE:
        exp = []
        for b in reference.boxes:
            t, l, bo, r = _rowcol(b, s)
            exp.append(((2 * t, 2 * l, 2 * bo + 1, 2 * r + 1), b.name))
        return upscale2(render(reference)), exp, False
    exp = [(_rowcol(b, s), b.name) for b in reference.boxes]
    if kind == TaskKind.GEN_TRANSLATION:
        return strip_margins(render(reference)), exp, True
    return render(reference), exp, False


def _match_boxes(expected: list[tuple], found: list[ParsedBox], any_offset: bool) -> int:
    def shape(rect):
        return (rect[2] - rect[0], rect[3] - rect[1])

    offsets = [(0, 0)]
    if any_offset:
        votes = Counter()
        for rect, _ in expected:
            for b in found:
                if shape(rect) == shape(b.rect):
                    votes[(b.top - rect[0], b.left - rect[1])] += 1
        if votes:
            top = max(votes.values())
            offsets = [min((o for o, v in votes.items() if v == top), key=lambda o: (abs(o[0]) + abs(o[1]), o))]
    dr, dc = offsets[0]
    available = Counter(b.rect for b in found)
    matched = 0
    for rect, _ in expected:
        want = (rect[0] + dr, rect[1] + dc, rect[2] + dr, rect[3] + dc)
        if available[want] > 0:
            available[want] -= 1
            matched += 1
    return matched


def _alnums(text: str) -> set[str]:
    return {ch for ch in text if ch.isascii() and ch.isalnum()}


def grade_generation(kind: TaskKind, reference: Diagram, input_text: str, output: str,
                     noise_charset=DEFAULT_NOISE_CHARSET) -> GenerationMetrics:
    """Structural comparison of a model's art against what the task asked for.

    ``reference`` is the clean diagram behind the prompt and ``input_text`` the art
    actually shown to the model. Box matching needs equal shape; position must be
    exact, except that translation accepts one offset shared by all boxes.
    """
    kind = TaskKind(kind)
    target, expected, any_offset = _expected(kind, reference)
    out = CharGrid.from_text(output)
    exact = _normalize(out) == _normalize(target)

    found = parse_boxes(out).boxes
    if exact:
        matched = len(expected)
        fabricated = 0
    else:
        matched = _match_boxes(expected, found, any_offset)
        fabricated = len(found) - matched

    ref_names = {name for _, name in expected if name}
    out_alnum = _alnums(output)
    noise = set(noise_charset)
    noise_in = sum(ch in noise for ch in input_text)
    noise_out = sum(ch in noise for ch in output)

    lines = list(trim_ragged(out).rows)
    top_margin = 0
    while top_margin < len(lines) and not lines[top_margin]:
        top_margin += 1
    inked = [ln for ln in lines if ln]
    left_margin = min((len(ln) - len(ln.lstrip(" ")) for ln in inked), default=0)

    limit = RUNAWAY_HEIGHT_FACTOR * max(1, target.height, CharGrid.from_text(input_text).height)
    runaway = len(lines) > limit
    if not runaway:
        repeats = _max_block_repeat(lines)
        runaway = repeats >= RUNAWAY_REPEATS and repeats > _max_block_repeat(list(trim_ragged(target).rows))

    return GenerationMetrics(
        exact_match=exact,
        boxes_matched=matched,
        boxes_missing=len(expected) - matched,
        boxes_fabricated=fabricated,
        names_missing=sorted(ref_names - out_alnum),
        names_fabricated=sorted(out_alnum - _alnums(input_text)),
        noise_remaining=min(noise_out, noise_in),
        noise_added=max(0, noise_out - noise_in),
        top_margin_rows=top_margin,
        left_margin_cols=left_margin,
        runaway_repetition=runaway,
    )
