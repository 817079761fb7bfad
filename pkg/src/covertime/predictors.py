"""Closed-form asymptotic predictions the simulations are compared against."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

KINDS = ("torus-cover", "bm-cover", "kr-cdf", "gamma-cover", "alpha-exponent", "phi-lower")


@dataclass(frozen=True)
class PredictionKind:
    kind: str
    params: dict = field(default_factory=dict)


def _need(params, name):
    if name not in params:
        raise ValueError(f"missing parameter {name!r}")
    return params[name]


def torus_cover(n: float) -> float:
    """``(4/π) n^2 (ln n)^2``."""
    if n < 2:
        raise ValueError("torus-cover needs n >= 2")
    return 4.0 / math.pi * n * n * math.log(n) ** 2


def bm_cover(eps: float) -> float:
    """``(2/π) (ln eps)^2``."""
    if not 0 < eps < 1:
        raise ValueError("bm-cover needs 0 < eps < 1")
    return 2.0 / math.pi * math.log(eps) ** 2


def kr_cdf(t: float) -> float:
    """Limit law ``P(log T_n <= t (ln n)^2) -> exp(-4/t)``."""
    if not t > 0:
        raise ValueError("kr-cdf needs t > 0")
    return math.exp(-4.0 / t)


def gamma_cover(n: float, gamma: float) -> float:
    """``(4 (1 - γ)^2 / π) n^2 (ln n)^2``."""
    if n < 2:
        raise ValueError("gamma-cover needs n >= 2")
    if not 0 < gamma < 1:
        raise ValueError("gamma-cover needs 0 < gamma < 1")
    return (1.0 - gamma) ** 2 * torus_cover(n)


def alpha_exponent(alpha: float) -> float:
    """``1 - sqrt(α)``, the limit of log_n of the largest empty radius."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha-exponent needs 0 < alpha <= 1")
    return 1.0 - math.sqrt(alpha)


def phi_lower(n: float) -> float:
    """``(2/3) (ln n)^2 / ln ln n``, the excursion-count scale for covering D_n.

    Defined for n >= 3 so that ln ln n > 0.
    """
    if n < 3:
        raise ValueError("phi-lower needs n >= 3")
    return 2.0 / 3.0 * math.log(n) ** 2 / math.log(math.log(n))


def predict(kind: PredictionKind) -> float:
    p = kind.params
    if kind.kind == "torus-cover":
        return torus_cover(_need(p, "n"))
    if kind.kind == "bm-cover":
        return bm_cover(_need(p, "eps"))
    if kind.kind == "kr-cdf":
        return kr_cdf(_need(p, "t"))
    if kind.kind == "gamma-cover":
        return gamma_cover(_need(p, "n"), _need(p, "gamma"))
    if kind.kind == "alpha-exponent":
        return alpha_exponent(_need(p, "alpha"))
    if kind.kind == "phi-lower":
        return phi_lower(_need(p, "n"))
    raise ValueError(f"unknown prediction kind {kind.kind!r}")


def lattice_constant(area_cell: float, cov) -> float:
    """``A / (2π sqrt(det Γ))`` for cell area ``A`` and step covariance ``Γ``."""
    if not area_cell > 0:
        raise ValueError("area_cell must be positive")
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (2, 2) or not np.allclose(cov, cov.T):
        raise ValueError("cov must be a symmetric 2x2 matrix")
    if np.linalg.eigvalsh(cov).min() <= 0:
        raise ValueError("cov must be positive definite")
    return area_cell / (2.0 * math.pi * math.sqrt(float(np.linalg.det(cov))))


def regular_cell_area(d: int) -> float:
    """``(d/4) tan(π/d)``: area per site of the unit-edge lattice of coordination ``d``."""
    if d < 3:
        raise ValueError("d must be >= 3")
    return d / 4.0 * math.tan(math.pi / d)


@dataclass(frozen=True)
class ConjecturedConstant:
    degree: int
    value: float
    conjecture: bool = True  # proposed lower-bound constant; never used as a pass/fail gate


def planar_degree_constant(d: int) -> ConjecturedConstant:
    """Proposed universal constant ``(d / 4π) tan(π/d)`` for degree 3, 4 or 6."""
    if d not in (3, 4, 6):
        raise ValueError("only degrees 3, 4 and 6 are proposed")
    return ConjecturedConstant(d, regular_cell_area(d) / math.pi)
