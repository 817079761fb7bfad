"""Multi-scale excursion counts as a birth-death chain, and the windowed DP over them.

Levels are labelled ``k = 2..n`` (the chain state ``-k``). The count at level
``k`` given the count ``m`` one level up is a sum of ``m`` geometric variables
with ``P(Z = j) = (1 - p_k) p_k^j``, where ``p_k = ln(k+1) / (ln k + ln(k+1))``.

A point is *n-successful* when the bottom count is zero and every count at
levels ``3..n-1`` lies in the window ``|l_k - n_k| <= k`` around
``n_k = round(zeta k^2 ln k)``; the top count is fixed at
``l_n = round(zeta n^2 ln n)``. All roundings are half-up, all logs natural,
and every probability is kept as a log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.special import gammaln, logsumexp

from .rng import make_rng

Y_CHAIN = "Y-chain"
NB_CHAIN = "NB-chain"


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class ChainParams:
    n: int
    a: float
    zeta: float | None = None  # defaults to 3a; any other value is rejected
    eps1: float = 0.25
    rho_n: float | None = None  # defaults to n**-25

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be >= 3")
        if not self.a > 0:
            raise ValueError("a must be positive")
        if self.zeta is None:
            object.__setattr__(self, "zeta", 3.0 * self.a)
        elif self.zeta != 3.0 * self.a:
            raise ValueError("zeta must equal 3a")
        if not 0 < self.eps1 < 0.5:
            raise ValueError("eps1 must lie in (0, 1/2)")
        if self.rho_n is None:
            object.__setattr__(self, "rho_n", float(self.n) ** -25)
        elif not self.rho_n > 0:
            raise ValueError("rho_n must be positive")

    @property
    def top(self) -> int:
        """Fixed top count ``l_n``."""
        return round_half_up(self.zeta * self.n**2 * math.log(self.n))

    def center(self, k: int) -> int:
        return round_half_up(self.zeta * k * k * math.log(k))

    def window(self, k: int) -> tuple[int, int]:
        """Inclusive range of admissible counts at level ``k``."""
        if k == 2:
            return 0, 0
        if k == self.n:
            return self.top, self.top
        if not 3 <= k < self.n:
            raise ValueError(f"level {k} outside 2..{self.n}")
        c = self.center(k)
        return max(c - k, 0), c + k


def p_bar(k: int) -> float:
    if k < 2:
        raise ValueError("k must be >= 2")
    a, b = math.log(k), math.log(k + 1)
    return b / (a + b)


@dataclass(frozen=True)
class ScaleTable:
    log_eps: np.ndarray  # log eps_{n,k} for k = 1..n at index k - 1
    n_k: np.ndarray  # window centres for k = 3..n at index k - 3

    def log_radius(self, k: int) -> float:
        return float(self.log_eps[k - 1])


def build_scales(params: ChainParams) -> ScaleTable:
    n = params.n
    log_fact = np.array([math.lgamma(k + 1) for k in range(1, n + 1)])
    log_eps_n = math.log(params.eps1) - 3.0 * log_fact[-1]
    log_eps = math.log(params.rho_n) + log_eps_n + 3.0 * log_fact
    centres = np.array([params.center(k) for k in range(3, n + 1)], dtype=np.int64)
    return ScaleTable(log_eps=log_eps, n_k=centres)


def _nb_logpmf(k: int, m, ell):
    """Vectorised log P(count = ell | count above = m) at level ``k``."""
    p = p_bar(k)
    m = np.asarray(m, dtype=float)
    ell = np.asarray(ell, dtype=float)
    m, ell = np.broadcast_arrays(m, ell)
    safe = np.where(m > 0, m, 1.0)
    out = gammaln(safe + ell) - gammaln(safe) - gammaln(ell + 1.0) + ell * math.log(p) + safe * math.log1p(-p)
    return np.where(m > 0, out, np.where(ell == 0, 0.0, -np.inf))


def nb_transition_logpmf(k: int, m_tilde: int, ell: int) -> float:
    if k < 2:
        raise ValueError("k must be >= 2")
    if m_tilde < 0 or ell < 0:
        return -math.inf
    return float(_nb_logpmf(k, m_tilde, ell))


@dataclass(frozen=True)
class CountVector:
    counts: np.ndarray  # counts at levels 2..n, index k - 2

    def level(self, k: int) -> int:
        return int(self.counts[k - 2])

    @property
    def n(self) -> int:
        return self.counts.size + 1


@numba.njit(cache=True)
def _y_chain_batch(n, top, pbar, reps, rng):
    out = np.zeros((reps, n - 1), dtype=np.int64)
    for rep in range(reps):
        if top == 0:
            continue
        y = n
        visits = 0
        while True:
            if y == n:
                out[rep, n - 2] += 1
                y = n - 1
            elif y == 1:
                y = 2
            elif rng.random() < pbar[y]:
                out[rep, y - 2] += 1
                y -= 1
            else:
                y += 1
                if y == n:
                    visits += 1
                    if visits == top:
                        break
    return out


def simulate_counts_batch(params: ChainParams, method: str, seed, size: int) -> np.ndarray:
    """``size`` independent count vectors as rows (columns: levels 2..n)."""
    rng = make_rng(seed)
    n = params.n
    if method == Y_CHAIN:
        pbar = np.zeros(n + 1)
        for k in range(2, n):
            pbar[k] = p_bar(k)
        return _y_chain_batch(n, params.top, pbar, int(size), rng)
    if method != NB_CHAIN:
        raise ValueError(f"unknown method {method!r}")
    out = np.zeros((size, n - 1), dtype=np.int64)
    out[:, n - 2] = params.top
    for k in range(n - 1, 1, -1):
        above = out[:, k - 1]
        # numpy counts failures before `above` successes of probability 1 - p_k
        draws = rng.negative_binomial(np.maximum(above, 1), 1.0 - p_bar(k))
        out[:, k - 2] = np.where(above > 0, draws, 0)
    return out


def simulate_counts(params: ChainParams, method: str, seed) -> CountVector:
    return CountVector(simulate_counts_batch(params, method, seed, 1)[0])


def is_n_successful(counts: CountVector, params: ChainParams) -> bool:
    if counts.counts.size != params.n - 1:
        raise ValueError("counts must cover levels 2..n")
    if counts.level(2) != 0:
        return False
    for k in range(3, params.n):
        c = params.center(k)
        if not c - k <= counts.level(k) <= c + k:
            return False
    return True


def success_mask(batch: np.ndarray, params: ChainParams) -> np.ndarray:
    """Row-wise ``is_n_successful`` for a batch from ``simulate_counts_batch``."""
    ok = batch[:, 0] == 0
    for k in range(3, params.n):
        c = params.center(k)
        ok &= np.abs(batch[:, k - 2] - c) <= k
    return ok


@dataclass
class DpTable:
    i: int
    j: int
    windows: dict = field(default_factory=dict)  # level -> (lo, hi)
    log_h: dict = field(default_factory=dict)  # level k -> log h_{i,k}(.) over its window

    def value(self, ell: int | None = None) -> float:
        """``log h_{i,j}(ell)``; ``ell`` defaults to the single top state."""
        lo, hi = self.windows[self.j]
        vals = self.log_h[self.j]
        if ell is None:
            if lo != hi:
                raise ValueError("level j has a window; pass ell")
            return float(vals[0])
        if not lo <= ell <= hi:
            raise ValueError("ell outside the level-j window")
        return float(vals[ell - lo])


def _states(params: ChainParams, k: int) -> np.ndarray:
    lo, hi = params.window(k)
    return np.arange(lo, hi + 1)


def _transition(params: ChainParams, k: int) -> np.ndarray:
    """log P(level k = col state | level k+1 = row state) over the two windows."""
    above = _states(params, k + 1)[:, None]
    below = _states(params, k)[None, :]
    return _nb_logpmf(k, above, below)


def h_dp(i: int, j: int, params: ChainParams) -> DpTable:
    """Windowed path sums ``h_{i,k}`` for every ``k`` in ``i..j``, bottom-up."""
    if not 2 <= i < j <= params.n:
        raise ValueError("need 2 <= i < j <= n")
    table = DpTable(i, j)
    cur = np.zeros(_states(params, i).size)
    table.windows[i] = params.window(i)
    table.log_h[i] = cur
    for k in range(i, j):
        cur = logsumexp(_transition(params, k) + cur[None, :], axis=1)
        table.windows[k + 1] = params.window(k + 1)
        table.log_h[k + 1] = cur
    return table


def log_h_to_top(params: ChainParams) -> np.ndarray:
    """``log h_{k,n}(l_n)`` for ``k = 2..n`` (index ``k - 2``), top-down in one pass."""
    n = params.n
    out = np.zeros(n - 1)
    down = np.zeros(1)  # log mass on the level-(k+1) window reaching it from the top
    for k in range(n - 1, 1, -1):
        down = logsumexp(_transition(params, k) + down[:, None], axis=0)
        out[k - 2] = logsumexp(down)
    return out


def q_bar_exact(params: ChainParams) -> float:
    """``log q_n``: the log-probability that a point is n-successful."""
    return h_dp(2, params.n, params).value()


def first_moment_gap(params: ChainParams) -> float:
    """``|log q_n / log n! + zeta|``."""
    return abs(q_bar_exact(params) / math.lgamma(params.n + 1) + params.zeta)


def transition_band(params: ChainParams, k_max: int) -> tuple[float, float]:
    """Range of ``P(l | m) k^(zeta+1) sqrt(ln k)`` over windowed states, ``3 <= k <= k_max``.

    Windows are the centred ones ``|l - n_k| <= k``, ``|m - n_{k+1}| <= k + 1``,
    independent of ``params.n``.
    """
    lo, hi = math.inf, -math.inf
    for k in range(3, k_max + 1):
        ck, ck1 = params.center(k), params.center(k + 1)
        below = np.arange(max(ck - k, 0), ck + k + 1)[None, :]
        above = np.arange(max(ck1 - k - 1, 1), ck1 + k + 2)[:, None]
        scaled = _nb_logpmf(k, above, below) + (params.zeta + 1) * math.log(k) + 0.5 * math.log(math.log(k))
        lo, hi = min(lo, float(scaled.min())), max(hi, float(scaled.max()))
    return math.exp(lo), math.exp(hi)


def ratio_profile(params: ChainParams, k_min: int = 10) -> np.ndarray:
    """``h_{k,n} / h_{k+1,n} * k^zeta * sqrt(ln k)`` for ``k = k_min..n-1``."""
    top = log_h_to_top(params)
    ks = np.arange(k_min, params.n)
    logs = top[ks - 2] - top[ks - 1] + params.zeta * np.log(ks) + 0.5 * np.log(np.log(ks))
    return np.exp(logs)


def second_moment_ratio(l: int, params: ChainParams) -> float:
    """Log pair-correlation core with all constants set to 1.

    ``log[h_{l+3,n}(l_n) (sum over the level-l window of h_{2,l})^2] - 2 log q_n``.
    """
    n = params.n
    if not 3 <= l <= n - 3:
        raise ValueError(f"l must lie in 3..{n - 3}")
    top = log_h_to_top(params)
    bottom = h_dp(2, l, params).log_h[l]
    return float(top[l + 1] + 2.0 * logsumexp(bottom) - 2.0 * top[0])


def union_term_logs(params: ChainParams, gamma: float) -> np.ndarray:
    """``log V_l`` for ``l = 1..n-1`` (index ``l - 1``), constants set to 1.

    ``V_l = M_n^-1 (eps_{n,l+1} / eps_n)^2 n^39 (eps_{n,l+1} / eps_{n,n})^-(a+gamma)``
    with ``M_n = (1/4) prod_{l<=n} l^6``.
    """
    if not 2.0 - params.a - gamma > 0:
        raise ValueError("need 2 - a - gamma > 0")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    n = params.n
    scales = build_scales(params)
    log_eps_n = math.log(params.eps1) - 3.0 * math.lgamma(n + 1)
    log_m = -math.log(4.0) + 6.0 * math.lgamma(n + 1)
    ls = np.arange(1, n)
    log_r = scales.log_eps[ls]  # eps_{n,l+1}
    return (
        -log_m
        + 2.0 * (log_r - log_eps_n)
        + 39.0 * math.log(n)
        - (params.a + gamma) * (log_r - scales.log_eps[n - 1])
    )


def union_second_moment_sum(params: ChainParams, gamma: float) -> float:
    return float(logsumexp(union_term_logs(params, gamma)))
