"""Exact small-case oracles for the walk simulations."""

from __future__ import annotations

from collections import deque
from fractions import Fraction

import sympy

_MOVES = ((1, 0), (-1, 0), (0, 1), (0, -1))


def exact_small_cover(n: int) -> Fraction:
    """Expected cover time of Z_n^2 from (0, 0), by an absorbing-chain solve.

    States are (position, visited set); only n <= 2 is accepted.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > 2:
        raise ValueError("oracle limited to n <= 2")
    sites = [(r, c) for r in range(n) for c in range(n)]
    index = {s: i for i, s in enumerate(sites)}
    full = (1 << len(sites)) - 1
    start = (index[(0, 0)], 1 << index[(0, 0)])
    if start[1] == full:
        return Fraction(0)

    # enumerate transient states reachable from the start
    order, seen, queue = [], {start}, deque([start])
    while queue:
        state = queue.popleft()
        order.append(state)
        pos, vis = state
        r, c = sites[pos]
        for dr, dc in _MOVES:
            nxt = index[((r + dr) % n, (c + dc) % n)]
            nv = vis | (1 << nxt)
            if nv != full and (nxt, nv) not in seen:
                seen.add((nxt, nv))
                queue.append((nxt, nv))

    k = len(order)
    pos_of = {s: i for i, s in enumerate(order)}
    a = sympy.zeros(k, k)
    b = sympy.ones(k, 1)
    quarter = sympy.Rational(1, 4)
    for i, (pos, vis) in enumerate(order):
        a[i, i] += 1
        r, c = sites[pos]
        for dr, dc in _MOVES:
            nxt = index[((r + dr) % n, (c + dc) % n)]
            nv = vis | (1 << nxt)
            if nv != full:
                a[i, pos_of[(nxt, nv)]] -= quarter
    x = a.LUsolve(b)
    value = sympy.Rational(x[pos_of[start], 0])
    return Fraction(int(value.p), int(value.q))


def minimal_cover_walk_length(sites, start=(0, 0)) -> int:
    """Fewest nearest-neighbour steps in Z^2 that visit every site of ``sites``.

    Breadth-first search over (position, visited subset); the walk may leave the
    set, but is confined to the bounding box grown by one site.
    """
    targets = sorted(set(map(tuple, sites)))
    if tuple(start) not in targets:
        raise ValueError("start must belong to the site set")
    bit = {s: 1 << i for i, s in enumerate(targets)}
    full = (1 << len(targets)) - 1
    rows = [s[0] for s in targets]
    cols = [s[1] for s in targets]
    lo_r, hi_r = min(rows) - 1, max(rows) + 1
    lo_c, hi_c = min(cols) - 1, max(cols) + 1

    first = (tuple(start), bit[tuple(start)])
    if first[1] == full:
        return 0
    dist = {first: 0}
    queue = deque([first])
    while queue:
        (p, vis) = state = queue.popleft()
        for dr, dc in _MOVES:
            q = (p[0] + dr, p[1] + dc)
            if not (lo_r <= q[0] <= hi_r and lo_c <= q[1] <= hi_c):
                continue
            nv = vis | bit.get(q, 0)
            if nv == full:
                return dist[state] + 1
            if (q, nv) not in dist:
                dist[(q, nv)] = dist[state] + 1
                queue.append((q, nv))
    raise RuntimeError("site set is not coverable")  # pragma: no cover
