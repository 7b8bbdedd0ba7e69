"""Character grids and the transforms applied to them.

Rows are stored top row first. Geometry elsewhere in the package uses
x-right / y-up coordinates, so ``storage_row = height - 1 - y``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import DoesNotFit, NoSpacesAvailable, OddDimensions, WidthTooSmall
from .rng import RandomStream

DEFAULT_NOISE_CHARSET = ('"', "@", "*", ".", ",")


@dataclass(frozen=True)
class CharGrid:
    rows: tuple[str, ...]

    def __post_init__(self):
        for row in self.rows:
            if "\n" in row:
                raise ValueError("grid rows may not contain newlines")

    @classmethod
    def from_rows(cls, rows) -> "CharGrid":
        return cls(tuple(rows))

    @classmethod
    def from_text(cls, text: str) -> "CharGrid":
        if text == "":
            return cls(())
        return cls(tuple(text.replace("\r\n", "\n").split("\n")))

    @property
    def text(self) -> str:
        return "\n".join(self.rows)

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return max((len(r) for r in self.rows), default=0)

    @property
    def is_padded(self) -> bool:
        w = self.width
        return all(len(r) == w for r in self.rows)

    def cell(self, row: int, col: int) -> str:
        """Character at (row, col); cells past a ragged row end read as spaces."""
        if 0 <= row < len(self.rows):
            r = self.rows[row]
            if 0 <= col < len(r):
                return r[col]
        return " "

    def __str__(self) -> str:
        return self.text


def pad_to_width(grid: CharGrid, width: int) -> CharGrid:
    if grid.width > width:
        raise WidthTooSmall(f"grid is {grid.width} wide, cannot pad to {width}")
    return CharGrid(tuple(r.ljust(width) for r in grid.rows))


def trim_ragged(grid: CharGrid) -> CharGrid:
    return CharGrid(tuple(r.rstrip(" ") for r in grid.rows))


def embed(grid: CharGrid, outer_w: int, outer_h: int, dx: int, dy: int) -> CharGrid:
    """Place ``grid`` on a blank outer canvas, offset (dx, dy) from its bottom-left."""
    w, h = grid.width, grid.height
    if dx < 0 or dy < 0 or w + dx > outer_w or h + dy > outer_h:
        raise DoesNotFit(f"{w}x{h} at ({dx}, {dy}) does not fit in {outer_w}x{outer_h}")
    top = outer_h - dy - h
    blank = " " * outer_w
    rows = [blank] * outer_h
    for i, r in enumerate(grid.rows):
        rows[top + i] = (" " * dx + r.ljust(w)).ljust(outer_w)
    return CharGrid(tuple(rows))


def crop(grid: CharGrid, dx: int, dy: int, w: int, h: int) -> CharGrid:
    """Inverse of ``embed``: the w x h window whose bottom-left sits at (dx, dy)."""
    top = grid.height - dy - h
    if dx < 0 or dy < 0 or top < 0 or dx + w > grid.width:
        raise DoesNotFit(f"{w}x{h} window at ({dx}, {dy}) lies outside the grid")
    return CharGrid(tuple(grid.rows[top + i].ljust(dx + w)[dx:dx + w] for i in range(h)))


def strip_margins(grid: CharGrid) -> CharGrid:
    """Drop blank rows above and below the content, the shared left margin and trailing spaces."""
    rows = [r.rstrip(" ") for r in grid.rows]
    while rows and not rows[0]:
        rows.pop(0)
    while rows and not rows[-1]:
        rows.pop()
    if not rows:
        return CharGrid(())
    left = min(len(r) - len(r.lstrip(" ")) for r in rows if r)
    return CharGrid(tuple(r[left:] for r in rows))


def upscale2(grid: CharGrid) -> CharGrid:
    """Double both axes by replicating every cell into a 2x2 block."""
    out = []
    for r in grid.rows:
        wide = "".join(ch * 2 for ch in r)
        out.extend((wide, wide))
    return CharGrid(tuple(out))


def downscale2(grid: CharGrid) -> CharGrid:
    """Keep the cells at even row and column indices. Inverse of ``upscale2``."""
    if not grid.is_padded or grid.width % 2 or grid.height % 2:
        raise OddDimensions(f"need a padded grid with even sides, got {grid.width}x{grid.height}")
    return CharGrid(tuple(r[::2] for r in grid.rows[::2]))


@dataclass(frozen=True)
class NoiseSpec:
    level: float
    charset: tuple[str, ...] = field(default=DEFAULT_NOISE_CHARSET)

    def __post_init__(self):
        if not 0.0 <= self.level <= 1.0:
            raise ValueError(f"noise level must lie in [0, 1], got {self.level}")
        if not self.charset or any(len(c) != 1 or c == " " for c in self.charset):
            raise ValueError("noise charset must be non-empty single non-space characters")


def inject_noise(grid: CharGrid, spec: NoiseSpec, rng: RandomStream) -> CharGrid:
    """Replace each space with probability ``level`` by a random charset character.

    The draw is repeated until at least one space was replaced. Level 0 is the identity.
    """
    if spec.level == 0:
        return grid
    spaces = [(i, j) for i, r in enumerate(grid.rows) for j, ch in enumerate(r) if ch == " "]
    if not spaces:
        raise NoSpacesAvailable("grid has no space cells to receive noise")
    charset = spec.charset
    top = len(charset) - 1
    while True:
        hits = {}
        for pos in spaces:
            if rng.random() < spec.level:
                hits[pos] = charset[rng.uniform_int(0, top)]
        if hits:
            break
    rows = [list(r) for r in grid.rows]
    for (i, j), ch in hits.items():
        rows[i][j] = ch
    return CharGrid(tuple("".join(r) for r in rows))


def char_histogram(grid: CharGrid) -> Counter:
    """Counts of every non-space character."""
    c = Counter()
    for r in grid.rows:
        c.update(r)
    c.pop(" ", None)
    return c
