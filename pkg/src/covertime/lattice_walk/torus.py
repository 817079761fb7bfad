"""Simple random walk on the discrete torus Z_n^2: cover time and the uncovered set."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from ..rng import make_rng
from .mask import VisitMask, largest_empty_disk

_RAW_MAX = 9223372036854775807  # integers(0, 2**63 - 1): 62 usable low bits


@dataclass(frozen=True)
class CoverResult:
    cover_steps: int
    last_site: tuple[int, int]
    seed: int


@numba.njit(cache=True)
def _torus_walk(n, r, c, rng, words, remaining, first_visit, record, max_steps):
    """Walk from (r, c) until every site is marked or ``max_steps`` is reached.

    Directions are taken two bits at a time from 62-bit raw draws:
    0 = +row, 1 = -row, 2 = +col, 3 = -col.
    """
    t = 0
    bits = np.uint64(0)
    left = 0
    while remaining > 0 and t < max_steps:
        if left == 0:
            bits = np.uint64(rng.integers(0, _RAW_MAX))
            left = 31
        d = bits & np.uint64(3)
        bits >>= np.uint64(2)
        left -= 1
        if d == 0:
            r += 1
            if r == n:
                r = 0
        elif d == 1:
            r -= 1
            if r < 0:
                r = n - 1
        elif d == 2:
            c += 1
            if c == n:
                c = 0
        else:
            c -= 1
            if c < 0:
                c = n - 1
        t += 1
        site = r * n + c
        w = site >> 6
        bit = np.uint64(1) << np.uint64(site & 63)
        if not (words[w] & bit):
            words[w] |= bit
            remaining -= 1
            if record:
                first_visit[site] = t
    return t, r, c, remaining


def _run_torus(n: int, seed, record: bool, start=(0, 0)):
    rng = make_rng(seed)
    mask = VisitMask(n)
    mask.mark(start)
    first_visit = np.full(n * n if record else 1, -1, dtype=np.int64)
    if record:
        first_visit[start[0] * n + start[1]] = 0
    steps, r, c, remaining = _torus_walk(
        n, start[0], start[1], rng, mask.words, mask.unvisited_count,
        first_visit, record, np.iinfo(np.int64).max,
    )
    mask.unvisited_count = int(remaining)
    return int(steps), (int(r), int(c)), mask, first_visit


def cover_time_torus(n: int, seed: int) -> CoverResult:
    """Steps until the walk from (0, 0) has visited every site of Z_n^2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    steps, last, _, _ = _run_torus(int(n), seed, record=False)
    return CoverResult(steps, last, int(seed))


def first_visit_times(n: int, seed: int) -> np.ndarray:
    """Step of first visit for every site (shape ``(n, n)``), walk run to full cover.

    Thresholding this table at step ``t`` reproduces the visited set at ``t``
    exactly, which is how the uncovered-set queries replay a path.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _, _, _, fv = _run_torus(int(n), seed, record=True)
    return fv.reshape(n, n)


def _radius_at(first_visit: np.ndarray, step: int) -> float:
    return largest_empty_disk(first_visit <= step)[1]


def uncovered_radius_hitting_step(first_visit: np.ndarray, threshold: float) -> int:
    """First step at which the largest unvisited disk has radius <= ``threshold``.

    The radius only changes at first-visit times and is non-increasing in the
    step, so a bisection over the sorted first-visit times is exact.
    """
    times = np.unique(first_visit)
    lo, hi = 0, times.size - 1  # radius at times[-1] (full cover) is 0
    if _radius_at(first_visit, int(times[0])) <= threshold:
        return int(times[0])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _radius_at(first_visit, int(times[mid])) <= threshold:
            hi = mid
        else:
            lo = mid
    return int(times[hi])


def time_to_uncovered_radius(n: int, gamma: float, seed: int) -> int:
    """Steps until the largest unvisited disk has radius at most ``n**gamma``."""
    if n < 4:
        raise ValueError("n must be >= 4")
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    fv = first_visit_times(n, seed)
    return uncovered_radius_hitting_step(fv, float(n) ** gamma)


def radius_at_fraction(n: int, alpha: float, seed: int) -> float:
    """Largest unvisited-disk radius at step ``ceil(alpha * T_n)`` of the same path."""
    if n < 4:
        raise ValueError("n must be >= 4")
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    fv = first_visit_times(n, seed)
    cover = int(fv.max())
    return _radius_at(fv, math.ceil(alpha * cover))
