"""Walks on finite pieces of planar lattices: square, triangular and honeycomb.

All lattices have unit edge length. Coordinates:

* square: ``(x, y)`` integer points.
* triangular: axial ``(q, r)`` with embedding ``(q + r/2, r * sqrt(3)/2)``.
* honeycomb: brick-wall ``(i, j)``; every site joins ``(i +- 1, j)``, and a site
  with ``i + j`` even also joins ``(i, j + 1)`` while an odd one joins ``(i, j - 1)``.
  The embedding puts ``(0, 0)`` at the origin.

The degree of each kind is read off its neighbour table, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..rng import make_rng
from .torus import cover_time_torus

KINDS = ("square-torus", "square-plane", "triangular", "honeycomb")

_SQUARE = ((1, 0), (-1, 0), (0, 1), (0, -1))
_TRIANGULAR = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))
_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class LatticeSpec:
    kind: str
    size: int = 1  # torus side, or disk radius for the planar kinds

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        if self.size < 1:
            raise ValueError("size must be >= 1")


def neighbour_offsets(kind: str, site=(0, 0)) -> tuple[tuple[int, int], ...]:
    if kind in ("square-torus", "square-plane"):
        return _SQUARE
    if kind == "triangular":
        return _TRIANGULAR
    if kind == "honeycomb":
        vertical = (0, 1) if (site[0] + site[1]) % 2 == 0 else (0, -1)
        return ((1, 0), (-1, 0), vertical)
    raise ValueError(f"unknown lattice kind {kind!r}")


def degree(kind: str) -> int:
    return len(neighbour_offsets(kind))


def embed(kind: str, a, b):
    """Planar position of lattice coordinates (works on scalars and arrays)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if kind in ("square-torus", "square-plane"):
        return a, b
    if kind == "triangular":
        return a + 0.5 * b, b * (_SQRT3 / 2.0)
    if kind == "honeycomb":
        even = (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % 2 == 0
        return a * (_SQRT3 / 2.0), 1.5 * b + np.where(even, 0.0, -0.5)
    raise ValueError(f"unknown lattice kind {kind!r}")


def cell_area(kind: str) -> float:
    """Area per site at unit edge length, equal to ``(d/4) tan(pi/d)`` for degree d."""
    d = degree(kind)
    return d / 4.0 * math.tan(math.pi / d)


def srw_step(position, lattice: LatticeSpec, rng):
    """One uniform nearest-neighbour step; ``rng.integers(0, degree)`` picks the move.

    Move 0 is always ``+x`` (first coordinate). On the torus both coordinates
    wrap modulo ``lattice.size``.
    """
    offsets = neighbour_offsets(lattice.kind, position)
    dx, dy = offsets[int(rng.integers(0, len(offsets)))]
    x, y = position[0] + dx, position[1] + dy
    if lattice.kind == "square-torus":
        n = lattice.size
        return (x % n, y % n)
    return (x, y)


def disk_graph(kind: str, rho: float):
    """Sites of the lattice in the open disc ``|z| < rho`` and their CSR adjacency.

    Returns ``(coords, indptr, indices)``; ``coords`` is an ``(N, 2)`` integer array.
    """
    if kind not in ("square-plane", "triangular", "honeycomb"):
        raise ValueError(f"{kind!r} has no disk graph")
    m = int(math.ceil(2.0 * rho)) + 2
    a, b = np.meshgrid(np.arange(-m, m + 1), np.arange(-m, m + 1), indexing="ij")
    a, b = a.ravel(), b.ravel()
    x, y = embed(kind, a, b)
    keep = x * x + y * y < rho * rho
    coords = np.stack([a[keep], b[keep]], axis=1)
    if coords.shape[0] == 0:
        return coords, np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64)

    side = 2 * m + 1
    lookup = np.full(side * side, -1, dtype=np.int64)
    lookup[(coords[:, 0] + m) * side + coords[:, 1] + m] = np.arange(coords.shape[0])
    rows, cols = [], []
    for i, (p, q) in enumerate(coords.tolist()):
        for dp, dq in neighbour_offsets(kind, (p, q)):
            u, v = p + dp, q + dq
            if -m <= u <= m and -m <= v <= m:
                j = lookup[(u + m) * side + v + m]
                if j >= 0:
                    rows.append(i)
                    cols.append(j)
    adj = csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(coords.shape[0],) * 2
    )
    return coords, adj.indptr.astype(np.int64), adj.indices.astype(np.int64)


def lattice_site_count(kind: str, rho: float) -> int:
    return int(disk_graph(kind, rho)[0].shape[0])


@numba.njit(cache=True)
def _graph_cover(indptr, indices, start, rng):
    n_sites = indptr.size - 1
    visited = np.zeros(n_sites, dtype=np.bool_)
    visited[start] = True
    remaining = n_sites - 1
    v = start
    t = 0
    while remaining > 0:
        lo = indptr[v]
        deg = indptr[v + 1] - lo
        v = indices[lo + int(rng.random() * deg)]
        t += 1
        if not visited[v]:
            visited[v] = True
            remaining -= 1
    return t


def cover_time_lattice(lattice: LatticeSpec, rho: float, seed: int) -> int:
    """Cover time of the lattice restricted to the open disc of radius ``rho``.

    The walk starts at the site nearest the origin. For ``square-torus`` the
    graph is the torus of side ``lattice.size`` and ``rho`` is ignored.
    """
    if lattice.kind == "square-torus":
        return cover_time_torus(lattice.size, seed).cover_steps
    if rho <= 0:
        raise ValueError("rho must be positive")
    coords, indptr, indices = disk_graph(lattice.kind, rho)
    n_sites = coords.shape[0]
    if n_sites == 0:
        raise ValueError(f"lattice piece of radius {rho} is empty")
    if n_sites == 1:
        return 0
    adj = csr_matrix((np.ones(indices.size), indices, indptr), shape=(n_sites, n_sites))
    if connected_components(adj, directed=False)[0] != 1:
        raise ValueError(f"lattice piece of radius {rho} is disconnected")
    x, y = embed(lattice.kind, coords[:, 0], coords[:, 1])
    start = int(np.argmin(x * x + y * y))
    return int(_graph_cover(indptr, indices, start, make_rng(seed)))
