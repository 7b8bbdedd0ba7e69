"""Random box diagrams: placement by rejection, rendering, naming and rotation.

A box spans the inclusive cell range (x1, y1)..(x2, y2) in y-up coordinates.
Its top and bottom rows carry ``-`` between the corners, its left and right
columns carry ``|`` between the corners, and the four corner cells stay blank.
A name sits in the interior cell diagonally next to one of the corners.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from .errors import BudgetUnsatisfiable, NoFreeCorner
from .grid import CharGrid
from ._kernel import generate_boxes
from .rng import RandomStream, _poisson_cdf_array, truncated_poisson_inv

NAME_ALPHABET = string.ascii_lowercase + string.ascii_uppercase + string.digits
MIN_SIDE = 3


class Corner(str, Enum):
    LL = "LL"
    LR = "LR"
    UL = "UL"
    UR = "UR"


CORNERS = (Corner.LL, Corner.LR, Corner.UL, Corner.UR)
_ROTATED_CORNER = {Corner.LL: Corner.UL, Corner.UL: Corner.UR, Corner.UR: Corner.LR, Corner.LR: Corner.LL}


@dataclass(frozen=True)
class Box:
    x1: int
    y1: int
    x2: int
    y2: int
    name: Optional[str] = None
    corner: Corner = Corner.LL

    def __post_init__(self):
        if self.x2 - self.x1 < MIN_SIDE - 1 or self.y2 - self.y1 < MIN_SIDE - 1:
            raise ValueError(f"box sides must be at least {MIN_SIDE} cells: {self}")
        if self.name is not None and (len(self.name) != 1 or not self.name.isalnum()):
            raise ValueError(f"box name must be one alphanumeric character, got {self.name!r}")
        object.__setattr__(self, "corner", Corner(self.corner))

    @property
    def width(self) -> int:
        return self.x2 - self.x1 + 1

    @property
    def height(self) -> int:
        return self.y2 - self.y1 + 1

    @property
    def rect(self) -> tuple[int, int, int, int]:
        return (self.x1, self.y1, self.x2, self.y2)

    def interior_corner(self, corner: Corner) -> tuple[int, int]:
        x = self.x1 + 1 if corner in (Corner.LL, Corner.UL) else self.x2 - 1
        y = self.y1 + 1 if corner in (Corner.LL, Corner.LR) else self.y2 - 1
        return x, y

    def name_cell(self) -> tuple[int, int]:
        return self.interior_corner(self.corner)

    def cells(self) -> Iterable[tuple[int, int, str]]:
        for x in range(self.x1 + 1, self.x2):
            yield x, self.y1, "-"
            yield x, self.y2, "-"
        for y in range(self.y1 + 1, self.y2):
            yield self.x1, y, "|"
            yield self.x2, y, "|"

    def key(self) -> tuple:
        """Identity for comparisons: the rectangle, the name and where the name is drawn."""
        return (self.rect, self.name, self.name_cell() if self.name else None)

    def to_json(self) -> dict:
        return {"x1": self.x1, "y1": self.y1, "x2": self.x2, "y2": self.y2,
                "name": self.name, "corner": self.corner.value}

    @classmethod
    def from_json(cls, d: dict) -> "Box":
        return cls(d["x1"], d["y1"], d["x2"], d["y2"], d.get("name"), Corner(d.get("corner", "LL")))


@dataclass(frozen=True)
class Diagram:
    side: int
    boxes: tuple[Box, ...] = ()

    def to_json(self) -> dict:
        return {"side": self.side, "boxes": [b.to_json() for b in self.boxes]}

    @classmethod
    def from_json(cls, d: dict) -> "Diagram":
        return cls(d["side"], tuple(Box.from_json(b) for b in d["boxes"]))

    @property
    def names(self) -> frozenset[str]:
        return frozenset(b.name for b in self.boxes if b.name)

    def box_keys(self) -> set:
        return {b.key() for b in self.boxes}


def diagram_violations(diagram: Diagram) -> list[str]:
    """Every broken structural rule, as readable strings; empty when the diagram is sound.

    Rules: boxes lie on the canvas, rendered cells of different boxes never
    coincide, no rendered cell covers another box's interior corner, and
    names are unique.
    """
    s = diagram.side
    out = []
    owner: dict[tuple[int, int], int] = {}
    for i, b in enumerate(diagram.boxes):
        if min(b.x1, b.y1) < 0 or max(b.x2, b.y2) > s - 1:
            out.append(f"box {i} {b.rect} leaves the {s}x{s} canvas")
        for x, y, _ in b.cells():
            j = owner.setdefault((x, y), i)
            if j != i:
                out.append(f"boxes {j} and {i} both draw cell ({x}, {y})")
    for i, b in enumerate(diagram.boxes):
        for c in CORNERS:
            j = owner.get(b.interior_corner(c))
            if j is not None and j != i:
                out.append(f"box {j} draws over interior corner {c.value} of box {i}")
    names = [b.name for b in diagram.boxes if b.name]
    if len(names) != len(set(names)):
        out.append("box names repeat")
    return out


@dataclass(frozen=True)
class GenParams:
    side: int = 24
    max_boxes: int = 14
    lam: float = 8.0
    names_shown: bool = False
    proposal_cap: int = 1000
    canvas_retry_cap: int = 10_000

    def __post_init__(self):
        if self.side < MIN_SIDE or self.max_boxes < 1 or self.lam <= 0:
            raise ValueError(f"invalid generation parameters: {self}")


# (side, max boxes, lambda) presets used by the trials
SIZE_PRESETS = {1.0: (24, 14, 8.0), 0.6: (15, 9, 5.0), 0.3: (8, 5, 3.0)}
SCALE_BASE = (12, 7, 4.0)


@dataclass(frozen=True)
class CharBudget:
    """Exact character totals a matched diagram must reproduce."""
    dashes: int
    pipes: int
    names: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, diagram: Diagram) -> "CharBudget":
        dashes = sum(2 * (b.width - 2) for b in diagram.boxes)
        pipes = sum(2 * (b.height - 2) for b in diagram.boxes)
        return cls(dashes, pipes, diagram.names)


def render(diagram: Diagram, names_shown: bool = True) -> CharGrid:
    s = diagram.side
    cells = [[" "] * s for _ in range(s)]
    for b in diagram.boxes:
        for x, y, ch in b.cells():
            cells[s - 1 - y][x] = ch
        if names_shown and b.name:
            x, y = b.name_cell()
            cells[s - 1 - y][x] = b.name
    return CharGrid(tuple("".join(r) for r in cells))


def _ones(n: int) -> int:
    return (1 << n) - 1


class Canvas:
    """Placement state for one diagram.

    Occupancy is kept as per-row and per-column bitmasks so a candidate box is
    checked with a few integer operations:

    * ``ink``: cells holding ``-`` or ``|``
    * ``block``: cells a new box may not draw on, i.e. ink, every placed box's
      four interior-corner cells and every placed box's outer corner cells.
    """

    def __init__(self, side: int):
        self.side = side
        self.boxes: list[Box] = []
        self.ink_rows = [0] * side
        self.ink_cols = [0] * side
        self.block_rows = [0] * side
        self.block_cols = [0] * side

    @classmethod
    def from_diagram(cls, diagram: Diagram) -> "Canvas":
        c = cls(diagram.side)
        for b in diagram.boxes:
            c.add(b)
        return c

    def to_diagram(self) -> Diagram:
        return Diagram(self.side, tuple(self.boxes))

    def fits(self, x1: int, y1: int, x2: int, y2: int) -> bool:
        if x1 < 0 or y1 < 0 or x2 >= self.side or y2 >= self.side:
            return False
        dmask = _ones(x2 - x1 - 1) << (x1 + 1)
        br, bc, ir = self.block_rows, self.block_cols, self.ink_rows
        if br[y1] & dmask or br[y2] & dmask:
            return False
        vmask = _ones(y2 - y1 - 1) << (y1 + 1)
        if bc[x1] & vmask or bc[x2] & vmask:
            return False
        # outer corners of the candidate must not sit on existing ink
        cmask = (1 << x1) | (1 << x2)
        if ir[y1] & cmask or ir[y2] & cmask:
            return False
        # nor may existing ink cover its interior corners
        imask = (1 << (x1 + 1)) | (1 << (x2 - 1))
        if ir[y1 + 1] & imask or ir[y2 - 1] & imask:
            return False
        return True

    def add(self, box: Box) -> None:
        x1, y1, x2, y2 = box.rect
        dmask = _ones(x2 - x1 - 1) << (x1 + 1)
        vmask = _ones(y2 - y1 - 1) << (y1 + 1)
        cmask = (1 << x1) | (1 << x2)
        imask = (1 << (x1 + 1)) | (1 << (x2 - 1))
        rows_bits = (1 << y1) | (1 << y2)
        icol_bits = (1 << (y1 + 1)) | (1 << (y2 - 1))
        for rows in (self.ink_rows, self.block_rows):
            rows[y1] |= dmask
            rows[y2] |= dmask
            for y in range(y1 + 1, y2):
                rows[y] |= cmask
        for cols in (self.ink_cols, self.block_cols):
            cols[x1] |= vmask
            cols[x2] |= vmask
            for x in range(x1 + 1, x2):
                cols[x] |= rows_bits
        self.block_rows[y1] |= cmask
        self.block_rows[y2] |= cmask
        self.block_rows[y1 + 1] |= imask
        self.block_rows[y2 - 1] |= imask
        self.block_cols[x1] |= rows_bits
        self.block_cols[x2] |= rows_bits
        self.block_cols[x1 + 1] |= icol_bits
        self.block_cols[x2 - 1] |= icol_bits
        self.boxes.append(box)

    def propose_and_place(self, params: GenParams, rng: RandomStream,
                          remaining: Optional[list[int]] = None) -> bool:
        """Try up to ``proposal_cap`` random boxes; keep the first that fits.

        ``remaining`` is the unspent [dashes, pipes] budget, updated in place.
        Lengths are clipped so the box never overspends it.

        Proposals are drawn in growing numpy batches (4 uniforms each: x start,
        width, y start, height); draws after the accepted proposal in a batch
        are discarded.
        """
        side = self.side
        used, batch = 0, 8
        while used < params.proposal_cap:
            n = min(batch, params.proposal_cap - used)
            used += n
            batch = min(batch * 4, 512)
            u = rng.uniforms(4 * n).reshape(n, 4)
            x1 = (u[:, 0] * side).astype(np.int64)
            w = truncated_poisson_inv(params.lam, MIN_SIDE, u[:, 1])
            y1 = (u[:, 2] * side).astype(np.int64)
            h = truncated_poisson_inv(params.lam, MIN_SIDE, u[:, 3])
            if remaining is not None:
                w = np.minimum(w, remaining[0] // 2 + 2)
                h = np.minimum(h, remaining[1] // 2 + 2)
            ok = (w >= MIN_SIDE) & (h >= MIN_SIDE) & (x1 + w <= side) & (y1 + h <= side)
            for i in np.flatnonzero(ok).tolist():
                bx, by, bw, bh = int(x1[i]), int(y1[i]), int(w[i]), int(h[i])
                if self.fits(bx, by, bx + bw - 1, by + bh - 1):
                    self.add(Box(bx, by, bx + bw - 1, by + bh - 1))
                    if remaining is not None:
                        remaining[0] -= 2 * (bw - 2)
                        remaining[1] -= 2 * (bh - 2)
                    return True
        return False


def propose_and_place(diagram: Diagram, params: GenParams, rng: RandomStream) -> tuple[bool, Diagram]:
    canvas = Canvas.from_diagram(diagram)
    ok = canvas.propose_and_place(params, rng)
    return ok, canvas.to_diagram()


def assign_names(diagram: Diagram, pool: Iterable[str], rng: RandomStream) -> Diagram:
    """Give each box a distinct name from ``pool`` and a uniformly chosen free corner."""
    names = sorted(pool)
    if len(names) != len(diagram.boxes):
        raise ValueError(f"name pool has {len(names)} names for {len(diagram.boxes)} boxes")
    rng.shuffle(names)
    s = diagram.side
    grid = [list(r) for r in render(diagram, names_shown=False).rows]
    named = []
    for box, name in zip(diagram.boxes, names):
        free = []
        for c in CORNERS:
            x, y = box.interior_corner(c)
            if grid[s - 1 - y][x] == " ":
                free.append(c)
        if not free:
            raise NoFreeCorner(f"box {box.rect} has no free interior corner")
        corner = free[rng.uniform_int(0, len(free) - 1)]
        b = replace(box, name=name, corner=corner)
        x, y = b.name_cell()
        grid[s - 1 - y][x] = name
        named.append(b)
    return Diagram(s, tuple(named))


def _fill(params: GenParams, rng: RandomStream, cap: int, remaining: Optional[list[int]],
          exact_count: bool = False) -> Canvas:
    canvas = Canvas(params.side)
    while len(canvas.boxes) < cap:
        if remaining is not None:
            # Every further box costs at least 2 of each character. Stop as soon
            # as the budget cannot carry the boxes still required; such canvases
            # would be discarded anyway.
            need = 2 * (cap - len(canvas.boxes)) if exact_count else 2
            if remaining[0] < need or remaining[1] < need:
                break
        if not canvas.propose_and_place(params, rng, remaining):
            break
    return canvas


def _budget_target(params: GenParams, budget: CharBudget) -> tuple[int, Optional[int]]:
    # With names shown the box count is pinned by the name set.
    want = len(budget.names) if budget.names else None
    return (want if want is not None else params.max_boxes), want


def _finish(params: GenParams, rng: RandomStream, d: Diagram, budget: Optional[CharBudget]) -> Diagram:
    if not params.names_shown:
        return d
    pool = budget.names if budget is not None else rng.sample(NAME_ALPHABET, len(d.boxes))
    return assign_names(d, pool, rng)


def _unsatisfiable(params: GenParams, budget: CharBudget) -> BudgetUnsatisfiable:
    return BudgetUnsatisfiable(
        f"no canvas matched {budget.dashes} dashes / {budget.pipes} pipes / "
        f"{len(budget.names)} names in {params.canvas_retry_cap} attempts")


def generate(params: GenParams, rng: RandomStream, budget: Optional[CharBudget] = None) -> Diagram:
    """Draw a diagram; with a budget, redraw whole canvases until its totals match exactly."""
    cdf = _poisson_cdf_array(params.lam)
    if budget is None:
        cap, want = params.max_boxes, None
    else:
        cap, want = _budget_target(params, budget)
    ok, boxes, counter = generate_boxes(
        np.uint64(rng.seed), rng.counter, params.side, cdf, float(cdf[MIN_SIDE - 1]), MIN_SIDE,
        cap, budget is not None, budget.dashes if budget else 0, budget.pipes if budget else 0,
        -1 if want is None else want, params.proposal_cap, params.canvas_retry_cap)
    rng.jump(counter)
    if not ok:
        raise _unsatisfiable(params, budget)
    d = Diagram(params.side, tuple(Box(*map(int, row)) for row in boxes))
    return _finish(params, rng, d, budget)


def generate_reference(params: GenParams, rng: RandomStream, budget: Optional[CharBudget] = None) -> Diagram:
    """Pure-Python twin of ``generate`` built on ``Canvas``; same stream, same result, much slower."""
    if budget is None:
        d = _fill(params, rng, params.max_boxes, None).to_diagram()
        return _finish(params, rng, d, budget)
    cap, want = _budget_target(params, budget)
    for _ in range(params.canvas_retry_cap):
        remaining = [budget.dashes, budget.pipes]
        canvas = _fill(params, rng, cap, remaining, exact_count=want is not None)
        if remaining != [0, 0]:
            continue
        if want is not None and len(canvas.boxes) != want:
            continue
        return _finish(params, rng, canvas.to_diagram(), budget)
    raise _unsatisfiable(params, budget)


def rotate_cw(diagram: Diagram) -> Diagram:
    """Quarter turn clockwise: cell (x, y) moves to (y, side - 1 - x)."""
    s = diagram.side
    out = []
    for b in diagram.boxes:
        out.append(Box(b.y1, s - 1 - b.x2, b.y2, s - 1 - b.x1, b.name, _ROTATED_CORNER[b.corner]))
    return Diagram(s, tuple(out))
