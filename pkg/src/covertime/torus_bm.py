"""Euler-discretised Brownian motion on the flat torus (-1/2, 1/2]^2.

Each step adds independent N(0, dt) increments to both coordinates and wraps.
Hits are read off step endpoints only, so every detected hitting time is
biased upward by the unseen intra-step wiggles; ``hitting_time_pair`` measures
that bias directly. The planar annulus simulator is the one exception: it
adds a Brownian-bridge crossing test between endpoints (see
``simulate_annulus_hit``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .rng import make_rng

_HALF_DIAMETER = 1.0 / math.sqrt(2.0)


@numba.njit(cache=True)
def _wrap(v):
    return v - math.ceil(v - 0.5)


def wrap(v: float) -> float:
    """Representative of ``v`` modulo 1 in (-1/2, 1/2]."""
    return float(v - math.ceil(v - 0.5))


@dataclass(frozen=True)
class TorusPoint:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", wrap(self.x))
        object.__setattr__(self, "y", wrap(self.y))


def torus_distance(p: TorusPoint, q: TorusPoint) -> float:
    return math.hypot(wrap(p.x - q.x), wrap(p.y - q.y))


@dataclass(frozen=True)
class BmConfig:
    dt: float
    seed: int = 0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")


@dataclass
class ExcursionRecord:
    tau: np.ndarray  # durations of excursions 1..count
    sigma: np.ndarray  # time into each excursion until the inner circle is hit
    center: TorusPoint
    r: float
    R: float
    tau0: float = 0.0  # time to first reach the outer circle
    elapsed: float = 0.0  # total simulated time
    extra: dict = field(default_factory=dict)


def _check_step(dt: float, eps: float):
    if dt > (eps / 8.0) ** 2 * (1 + 1e-12):
        raise ValueError(f"dt={dt} exceeds (eps/8)^2 = {(eps / 8.0) ** 2}")


@numba.njit(cache=True)
def _hit_steps(tx, ty, eps, x, y, sd, rng):
    e2 = eps * eps
    t = 0
    while True:
        dx = _wrap(x - tx)
        dy = _wrap(y - ty)
        if dx * dx + dy * dy <= e2:
            return t
        x = _wrap(x + sd * rng.standard_normal())
        y = _wrap(y + sd * rng.standard_normal())
        t += 1


def hitting_time(x: TorusPoint, epsilon: float, cfg: BmConfig, start: TorusPoint) -> float:
    """First step time at which the walk is within ``epsilon`` of ``x``."""
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    _check_step(cfg.dt, epsilon)
    steps = _hit_steps(x.x, x.y, epsilon, start.x, start.y, math.sqrt(cfg.dt), make_rng(cfg.seed))
    return steps * cfg.dt


@numba.njit(cache=True)
def _hit_pair(tx, ty, eps, x0, y0, dt, refine, rng):
    e2 = eps * eps
    sdf = math.sqrt(dt / refine)
    dx = _wrap(x0 - tx)
    dy = _wrap(y0 - ty)
    if dx * dx + dy * dy <= e2:
        return 0, 0
    xc, yc, xf, yf = x0, y0, x0, y0
    coarse = -1
    fine = -1
    kc = 0
    kf = 0
    while coarse < 0 or fine < 0:
        sx = 0.0
        sy = 0.0
        for _ in range(refine):
            gx = sdf * rng.standard_normal()
            gy = sdf * rng.standard_normal()
            sx += gx
            sy += gy
            if fine < 0:
                xf = _wrap(xf + gx)
                yf = _wrap(yf + gy)
                kf += 1
                dx = _wrap(xf - tx)
                dy = _wrap(yf - ty)
                if dx * dx + dy * dy <= e2:
                    fine = kf
        if coarse < 0:
            xc = _wrap(xc + sx)
            yc = _wrap(yc + sy)
            kc += 1
            dx = _wrap(xc - tx)
            dy = _wrap(yc - ty)
            if dx * dx + dy * dy <= e2:
                coarse = kc
    return coarse, fine


def hitting_time_pair(
    x: TorusPoint, epsilon: float, cfg: BmConfig, start: TorusPoint, refine: int = 4
) -> tuple[float, float]:
    """Hitting times of one path observed at step ``dt`` and at ``dt / refine``.

    The coarse increments are sums of ``refine`` fine ones, so the difference
    isolates the discretisation bias of endpoint detection.
    """
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    if refine < 1:
        raise ValueError("refine must be >= 1")
    _check_step(cfg.dt, epsilon)
    c, f = _hit_pair(x.x, x.y, epsilon, start.x, start.y, cfg.dt, int(refine), make_rng(cfg.seed))
    return c * cfg.dt, f * cfg.dt / refine


@numba.njit(cache=True)
def _cover_steps(x, y, mark_r, sd, res, rng):
    h = 1.0 / res
    covered = np.zeros((res, res), dtype=np.bool_)
    remaining = res * res
    r2 = mark_r * mark_r
    w = int(mark_r / h) + 1
    t = 0
    while True:
        i0 = int(math.floor((x + 0.5) / h - 0.5))
        j0 = int(math.floor((y + 0.5) / h - 0.5))
        for di in range(-w, w + 2):
            i = (i0 + di) % res
            dx = _wrap((i + 0.5) * h - 0.5 - x)
            rest = r2 - dx * dx
            if rest < 0:
                continue
            for dj in range(-w, w + 2):
                j = (j0 + dj) % res
                if covered[i, j]:
                    continue
                dy = _wrap((j + 0.5) * h - 0.5 - y)
                if dy * dy <= rest:
                    covered[i, j] = True
                    remaining -= 1
        if remaining == 0:
            return t
        x = _wrap(x + sd * rng.standard_normal())
        y = _wrap(y + sd * rng.standard_normal())
        t += 1


def cover_time_bm(
    epsilon: float,
    cfg: BmConfig,
    resolution: int,
    margin: float | None = None,
    start: TorusPoint = TorusPoint(0.0, 0.0),
) -> float:
    """First time every centre of a ``resolution``-square mesh has been near the path.

    A centre counts once some step endpoint lies within ``epsilon - margin`` of
    it. The default margin ``3 sqrt(dt)`` under-marks on purpose, so the result
    errs late rather than early.
    """
    if not 0 < epsilon:
        raise ValueError("epsilon must be positive")
    if epsilon >= _HALF_DIAMETER:
        return 0.0
    if epsilon >= 0.5:
        raise ValueError("epsilon must lie in (0, 1/2) or be >= 1/sqrt(2)")
    if resolution < math.ceil(4.0 / epsilon):
        raise ValueError(f"resolution must be >= ceil(4/eps) = {math.ceil(4.0 / epsilon)}")
    _check_step(cfg.dt, epsilon)
    m = 3.0 * math.sqrt(cfg.dt) if margin is None else float(margin)
    if not 0 <= m < epsilon:
        raise ValueError("margin must lie in [0, epsilon)")
    steps = _cover_steps(
        start.x, start.y, epsilon - m, math.sqrt(cfg.dt), int(resolution), make_rng(cfg.seed)
    )
    return steps * cfg.dt


@numba.njit(cache=True)
def _excursions(cx, cy, r, R, count, x, y, sd, rng):
    tau = np.empty(count)
    sigma = np.empty(count)
    r2 = r * r
    R2 = R * R
    t = 0
    dx = _wrap(x - cx)
    dy = _wrap(y - cy)
    d2 = dx * dx + dy * dy
    outside = d2 > R2
    # first arrival at the outer circle: sign change of (distance - R)
    while d2 != R2 and (d2 > R2) == outside:
        x = _wrap(x + sd * rng.standard_normal())
        y = _wrap(y + sd * rng.standard_normal())
        t += 1
        dx = _wrap(x - cx)
        dy = _wrap(y - cy)
        d2 = dx * dx + dy * dy
    t0 = t
    mark = t
    for j in range(count):
        while d2 > r2:
            x = _wrap(x + sd * rng.standard_normal())
            y = _wrap(y + sd * rng.standard_normal())
            t += 1
            dx = _wrap(x - cx)
            dy = _wrap(y - cy)
            d2 = dx * dx + dy * dy
        sigma[j] = t - mark
        while d2 < R2:
            x = _wrap(x + sd * rng.standard_normal())
            y = _wrap(y + sd * rng.standard_normal())
            t += 1
            dx = _wrap(x - cx)
            dy = _wrap(y - cy)
            d2 = dx * dx + dy * dy
        tau[j] = t - mark
        mark = t
    return t0, tau, sigma, t


def excursion_decompose(
    center: TorusPoint,
    r: float,
    R: float,
    count: int,
    cfg: BmConfig,
    start: TorusPoint = TorusPoint(0.0, 0.0),
) -> ExcursionRecord:
    """Run until ``count`` excursions from the R-circle to itself via the r-circle end."""
    if not 0 < 2 * r <= R < 0.5:
        raise ValueError("need 0 < 2r <= R < 1/2")
    if count < 1:
        raise ValueError("count must be >= 1")
    _check_step(cfg.dt, r)
    t0, tau, sigma, total = _excursions(
        center.x, center.y, r, R, int(count), start.x, start.y, math.sqrt(cfg.dt), make_rng(cfg.seed)
    )
    return ExcursionRecord(
        tau=tau * cfg.dt, sigma=sigma * cfg.dt, center=center, r=r, R=R,
        tau0=t0 * cfg.dt, elapsed=total * cfg.dt,
    )


def annulus_hit_prob(rho: float, r: float, R: float) -> float:
    """Chance that planar Brownian motion from radius ``rho`` meets radius ``r`` before ``R``."""
    if r == R:
        raise ValueError("degenerate annulus r == R")
    if not 0 < r <= rho <= R:
        raise ValueError("need 0 < r <= rho <= R")
    return math.log(R / rho) / math.log(R / r)


@numba.njit(cache=True)
def _annulus_hits(rho, r, R, sd, reps, bridge, rng):
    two_over_var = 2.0 / (sd * sd)
    hits = 0
    for _ in range(reps):
        x = rho
        y = 0.0
        d = rho
        while True:
            x += sd * rng.standard_normal()
            y += sd * rng.standard_normal()
            nd = math.sqrt(x * x + y * y)
            if nd <= r:
                hits += 1
                break
            if nd >= R:
                break
            if bridge:
                # tangent-line bridge: chance the path dipped across between endpoints
                if rng.random() < math.exp(-two_over_var * (d - r) * (nd - r)):
                    hits += 1
                    break
                if rng.random() < math.exp(-two_over_var * (R - d) * (R - nd)):
                    break
            d = nd
    return hits


def simulate_annulus_hit(
    rho: float, r: float, R: float, dt: float, replicates: int, seed: int, bridge: bool = True
) -> float:
    """Monte Carlo frequency of reaching radius ``r`` before ``R`` from radius ``rho``.

    With ``bridge`` on, each step also tests whether the Brownian bridge
    between its endpoints crossed either circle, treating the circle as its
    tangent line (crossing chance ``exp(-2 a b / dt)`` for endpoint gaps a, b).
    This removes most of the endpoint-only bias toward the outer circle.
    """
    annulus_hit_prob(rho, r, R)
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    if dt <= 0:
        raise ValueError("dt must be positive")
    if rho <= r:
        return 1.0
    if rho >= R:
        return 0.0
    hits = _annulus_hits(rho, r, R, math.sqrt(dt), int(replicates), bool(bridge), make_rng(seed))
    return hits / replicates
