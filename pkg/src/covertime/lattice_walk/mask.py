"""Bit-packed occupancy of the discrete torus and largest-empty-disk queries."""

from __future__ import annotations

import math

import numba
import numpy as np
from scipy import ndimage


@numba.njit(cache=True)
def _mark(words, site):
    w = site >> 6
    bit = np.uint64(1) << np.uint64(site & 63)
    if words[w] & bit:
        return False
    words[w] |= bit
    return True


class VisitMask:
    """Visited/unvisited state of the ``side x side`` torus, one bit per site.

    Site ``(row, col)`` is bit ``row * side + col``. ``unvisited_count`` is kept
    in step with the bits by every mutating method.
    """

    def __init__(self, side: int):
        if side < 1:
            raise ValueError("side must be >= 1")
        self.side = int(side)
        self.words = np.zeros((self.side * self.side + 63) // 64, dtype=np.uint64)
        self.unvisited_count = self.side * self.side

    @classmethod
    def from_bool(cls, visited) -> "VisitMask":
        visited = np.asarray(visited, dtype=bool)
        if visited.ndim != 2 or visited.shape[0] != visited.shape[1]:
            raise ValueError("expected a square boolean array")
        mask = cls(visited.shape[0])
        flat = np.zeros(mask.words.size * 64, dtype=bool)
        flat[: visited.size] = visited.ravel()
        mask.words = np.packbits(flat, bitorder="little").view(np.uint64).copy()
        mask.unvisited_count = int(visited.size - np.count_nonzero(visited))
        return mask

    @classmethod
    def from_first_visit(cls, first_visit, step: int) -> "VisitMask":
        """Mask of sites first visited at or before ``step``."""
        fv = np.asarray(first_visit)
        return cls.from_bool((fv >= 0) & (fv <= step))

    def _index(self, site) -> int:
        r, c = site
        return (int(r) % self.side) * self.side + int(c) % self.side

    def mark(self, site) -> bool:
        """Mark ``site`` visited; True when it was previously unvisited."""
        fresh = _mark(self.words, self._index(site))
        if fresh:
            self.unvisited_count -= 1
        return fresh

    def is_visited(self, site) -> bool:
        i = self._index(site)
        return bool((int(self.words[i >> 6]) >> (i & 63)) & 1)

    def to_bool(self) -> np.ndarray:
        bits = np.unpackbits(self.words.view(np.uint8), bitorder="little")
        return bits[: self.side * self.side].astype(bool).reshape(self.side, self.side)

    def __len__(self):
        return self.side * self.side


def torus_distance_field(visited: np.ndarray) -> np.ndarray:
    """Wrap-aware Euclidean distance from every site to the nearest visited site.

    Exact: the 3x3 periodic tiling contains every wrap-around image within
    torus distance ``side / sqrt(2)`` of the central block.
    """
    n = visited.shape[0]
    tiled = np.tile(~visited, (3, 3))
    dist = ndimage.distance_transform_edt(tiled)
    return dist[n : 2 * n, n : 2 * n]


def largest_empty_disk(mask) -> tuple[tuple[int, int], float]:
    """Site farthest from every visited site, and that distance.

    Ties go to the lexicographically smallest ``(row, col)``. With nothing
    visited the radius is the torus half-diameter ``side / sqrt(2)`` at (0, 0).
    """
    visited = mask.to_bool() if isinstance(mask, VisitMask) else np.asarray(mask, dtype=bool)
    n = visited.shape[0]
    if not visited.any():
        return (0, 0), n / math.sqrt(2.0)
    if visited.all():
        return (0, 0), 0.0
    dist = torus_distance_field(visited)
    flat = int(np.argmax(dist))
    return (flat // n, flat % n), float(dist.flat[flat])
