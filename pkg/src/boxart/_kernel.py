"""Compiled canvas filler used by ``diagram.generate``.

Mirrors ``diagram.Canvas.propose_and_place`` step for step (same draw
indices, same batch schedule, same rejection rules) so that both produce
identical diagrams from identical streams. The Python version is the
readable reference; this one exists because budget-matched generation may
redraw a canvas hundreds of times.
"""

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True)
def _u(seed, i):
    z = seed + np.uint64(i) * _GOLDEN
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    z = z ^ (z >> _S31)
    return float(z >> _S11) * _INV53


@njit(cache=True)
def _tpois(cdf, base, u, lo):
    k = np.searchsorted(cdf, base + u * (1.0 - base))
    if k < lo:
        k = lo
    if k > cdf.shape[0] - 1:
        k = cdf.shape[0] - 1
    return k


@njit(cache=True)
def _fits(ink, block, x1, y1, x2, y2):
    for x in range(x1 + 1, x2):
        if block[y1, x] or block[y2, x]:
            return False
    for y in range(y1 + 1, y2):
        if block[y, x1] or block[y, x2]:
            return False
    if ink[y1, x1] or ink[y1, x2] or ink[y2, x1] or ink[y2, x2]:
        return False
    if ink[y1 + 1, x1 + 1] or ink[y1 + 1, x2 - 1] or ink[y2 - 1, x1 + 1] or ink[y2 - 1, x2 - 1]:
        return False
    return True


@njit(cache=True)
def _add(ink, block, x1, y1, x2, y2):
    for x in range(x1 + 1, x2):
        ink[y1, x] = 1
        ink[y2, x] = 1
        block[y1, x] = 1
        block[y2, x] = 1
    for y in range(y1 + 1, y2):
        ink[y, x1] = 1
        ink[y, x2] = 1
        block[y, x1] = 1
        block[y, x2] = 1
    block[y1, x1] = 1
    block[y1, x2] = 1
    block[y2, x1] = 1
    block[y2, x2] = 1
    block[y1 + 1, x1 + 1] = 1
    block[y1 + 1, x2 - 1] = 1
    block[y2 - 1, x1 + 1] = 1
    block[y2 - 1, x2 - 1] = 1


@njit(cache=True)
def _fill(seed, counter, side, cdf, base, lo, cap, budget, rem, exact, proposal_cap, ink, block, boxes):
    n = 0
    while n < cap:
        if budget:
            need = 2 * (cap - n) if exact else 2
            if rem[0] < need or rem[1] < need:
                break
        used = 0
        batch = 8
        placed = False
        while used < proposal_cap and not placed:
            m = min(batch, proposal_cap - used)
            used += m
            batch = min(batch * 4, 512)
            for i in range(m):
                c = counter + 4 * i
                x1 = int(_u(seed, c + 1) * side)
                w = _tpois(cdf, base, _u(seed, c + 2), lo)
                y1 = int(_u(seed, c + 3) * side)
                h = _tpois(cdf, base, _u(seed, c + 4), lo)
                if budget:
                    w = min(w, rem[0] // 2 + 2)
                    h = min(h, rem[1] // 2 + 2)
                if w < lo or h < lo or x1 + w > side or y1 + h > side:
                    continue
                x2 = x1 + w - 1
                y2 = y1 + h - 1
                if _fits(ink, block, x1, y1, x2, y2):
                    _add(ink, block, x1, y1, x2, y2)
                    boxes[n, 0] = x1
                    boxes[n, 1] = y1
                    boxes[n, 2] = x2
                    boxes[n, 3] = y2
                    n += 1
                    if budget:
                        rem[0] -= 2 * (w - 2)
                        rem[1] -= 2 * (h - 2)
                    placed = True
                    break
            counter += 4 * m
        if not placed:
            break
    return n, counter


@njit(cache=True)
def generate_boxes(seed, counter, side, cdf, base, lo, cap, budget, dashes, pipes, want,
                   proposal_cap, retry_cap):
    """Returns (ok, boxes[n, 4], counter). ``want`` < 0 leaves the box count free."""
    boxes = np.zeros((cap, 4), dtype=np.int64)
    ink = np.zeros((side, side), dtype=np.uint8)
    block = np.zeros((side, side), dtype=np.uint8)
    rem = np.zeros(2, dtype=np.int64)
    attempts = retry_cap if budget else 1
    for _ in range(attempts):
        ink[:, :] = 0
        block[:, :] = 0
        rem[0] = dashes
        rem[1] = pipes
        n, counter = _fill(seed, counter, side, cdf, base, lo, cap, budget, rem, want >= 0,
                           proposal_cap, ink, block, boxes)
        if not budget:
            return True, boxes[:n].copy(), counter
        if rem[0] == 0 and rem[1] == 0 and (want < 0 or n == want):
            return True, boxes[:n].copy(), counter
    return False, boxes[:0].copy(), counter
