"""Covering the lattice disc D_n = D(0, n) ∩ Z^2 by a walk in the whole plane.

Discs are open, ``D_r = {z : |z| < r}``, and the boundary ``∂D_r`` is the set of
sites outside ``D_r`` with a neighbour inside it. Excursions are counted from
``∂D_{2n}`` to ``∂D_{n (ln n)^3}`` once the walk has first reached the outer
boundary.

While the walk waits outside to re-enter ``∂D_{2n}``, runs of ``k`` steps that
cannot reach it are sampled in one draw: in the rotated coordinates
``u = x + y``, ``v = x - y`` each step moves ``u`` and ``v`` by independent
fair ``±1``, so a ``k``-step displacement is two independent centred binomials.
A block of ``k`` steps is taken only when it cannot reach ``∂D_{2n}``
except with negligible probability, which keeps the heavy-tailed far
wanderings cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal

import numba
import numpy as np

from ..rng import make_rng

_JUMP_MIN = 48
_TAIL_EXP = 45.0  # jump length D^2 / (2 * 45): chance of reaching distance D is < 8 e^-45
_FAR = float(2**31)  # beyond this radius the walk is tracked by log-radius only
_FOLD = 2**60  # integer step counts are folded into a log accumulator past this
_RAW_MAX = 9223372036854775807


@dataclass(frozen=True)
class DiskCoverResult:
    t_n: int
    n_excursions: int
    log_t_n: float = 0.0
    far_field: bool = False  # True when some excursion left radius 2**31; t_n is then approximate


def disk_sites(r: float) -> list[tuple[int, int]]:
    """Lattice points of the open disc of radius ``r`` about the origin."""
    m = int(math.ceil(r))
    return [(x, y) for x in range(-m, m + 1) for y in range(-m, m + 1) if x * x + y * y < r * r]


def outer_radius(n: int) -> float:
    return n * math.log(n) ** 3


@numba.njit(cache=True)
def _on_boundary(x, y, r2):
    fx = float(x)
    fy = float(y)
    if fx * fx + fy * fy < r2:
        return False
    return (
        (fx + 1) * (fx + 1) + fy * fy < r2
        or (fx - 1) * (fx - 1) + fy * fy < r2
        or fx * fx + (fy + 1) * (fy + 1) < r2
        or fx * fx + (fy - 1) * (fy - 1) < r2
    )


@numba.njit(cache=True)
def _logaddexp(a, b):
    if a == -np.inf:
        return b
    if b == -np.inf:
        return a
    m = max(a, b)
    return m + math.log(math.exp(a - m) + math.exp(b - m))


@numba.njit(cache=True)
def _disk_walk(n, r_out, rng, jump_min):
    side = 2 * n + 1
    n2 = float(n * n)
    covered = np.zeros((side, side), dtype=np.uint8)
    remaining = 0
    for i in range(side):
        for j in range(side):
            if float((i - n) * (i - n) + (j - n) * (j - n)) < n2:
                remaining += 1
    covered[n, n] = 1
    remaining -= 1

    r2_in = 4.0 * n2
    r2_out = r_out * r_out
    clear = 2.0 * n + 1.0  # every site of the boundary of D_2n has |z| < 2n + 1
    log_far = math.log(_FAR)
    ln2 = math.log(2.0)
    x = 0
    y = 0
    t = 0
    log_extra = -np.inf
    far = False
    phase = 0  # 0: before first hit of the outer boundary, 1: outside, 2: inside an excursion
    count = 0
    bits = np.uint64(0)
    left = 0
    while remaining > 0:
        if phase == 1:
            rho = math.sqrt(float(x) * float(x) + float(y) * float(y))
            if rho >= _FAR:
                # log-radius walk of planar Brownian motion: from radius s the
                # circles s/2 and 2s are hit first with probability 1/2 each, after
                # an expected 1.125 s^2 steps (generator Laplacian / 4)
                far = True
                s = math.log(rho)
                while s >= log_far:
                    log_extra = _logaddexp(log_extra, math.log(1.125) + 2.0 * s)
                    s += ln2 if rng.random() < 0.5 else -ln2
                theta = 2.0 * math.pi * rng.random()
                rho = math.exp(s)
                x = int(round(rho * math.cos(theta)))
                y = int(round(rho * math.sin(theta)))
                continue
            gap = rho - clear
            k = max(int(gap) - 1, int(gap * gap / (2.0 * _TAIL_EXP)))
            if k >= jump_min:
                # u = x + y and v = x - y move by independent fair +-1 per step
                du = 2 * rng.binomial(k, 0.5) - k
                dv = 2 * rng.binomial(k, 0.5) - k
                u = x + y + du
                v = x - y + dv
                x = (u + v) // 2
                y = (u - v) // 2
                t += k
                if t > _FOLD:
                    log_extra = _logaddexp(log_extra, math.log(float(t)))
                    t = 0
                continue
        if left == 0:
            bits = np.uint64(rng.integers(0, _RAW_MAX))
            left = 31
        d = bits & np.uint64(3)
        bits >>= np.uint64(2)
        left -= 1
        if d == 0:
            x += 1
        elif d == 1:
            x -= 1
        elif d == 2:
            y += 1
        else:
            y -= 1
        t += 1
        if -n <= x <= n and -n <= y <= n:
            if float(x * x + y * y) < n2 and covered[x + n, y + n] == 0:
                covered[x + n, y + n] = 1
                remaining -= 1
        if phase == 0:
            if _on_boundary(x, y, r2_out):
                phase = 1
        elif phase == 1:
            if _on_boundary(x, y, r2_in):
                phase = 2
        elif _on_boundary(x, y, r2_out):
            count += 1
            phase = 1
    return t, log_extra, count, far


def disk_cover_z2(n: int, seed: int) -> DiskCoverResult:
    """Cover time of ``D_n`` from the origin and the completed excursion count.

    Outside ``D_2n`` the walk is advanced in blocks of ``k`` steps that stay
    clear of ``∂D_2n`` except on an event of probability below ``1e-18``.
    Past radius ``2**31`` only the log-radius is followed and time is charged
    at its conditional mean, so ``t_n`` is exact unless ``far_field`` is set;
    any such replicate has ``t_n > 2**31``.
    """
    if n <= 3:
        raise ValueError(
            f"n={n}: annulus degenerates, need n >= 4 so that n (ln n)^3 exceeds 2n"
        )
    t, log_extra, count, far = _disk_walk(int(n), outer_radius(n), make_rng(seed), _JUMP_MIN)
    if log_extra == -math.inf:
        t_n = int(t)
        log_t = math.log(t_n)
    else:
        log_t = log_extra if t == 0 else float(np.logaddexp(log_extra, math.log(t)))
        t_n = int(Decimal(log_t).exp().to_integral_value())
    return DiskCoverResult(t_n, int(count), log_t, bool(far))
