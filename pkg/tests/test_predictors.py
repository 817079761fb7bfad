import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covertime.predictors import (
    PredictionKind,
    alpha_exponent,
    gamma_cover,
    kr_cdf,
    lattice_constant,
    phi_lower,
    planar_degree_constant,
    predict,
    regular_cell_area,
    torus_cover,
)


def test_examples():
    assert predict(PredictionKind("torus-cover", {"n": 100})) == pytest.approx(2.7002e5, rel=1e-4)
    assert predict(PredictionKind("kr-cdf", {"t": 4})) == pytest.approx(0.367879, abs=1e-6)
    assert predict(PredictionKind("alpha-exponent", {"alpha": 1})) == 0.0
    assert predict(PredictionKind("alpha-exponent", {"alpha": 0.25})) == 0.5
    assert predict(PredictionKind("phi-lower", {"n": 5})) == pytest.approx(3.6287, abs=1e-4)
    assert predict(PredictionKind("bm-cover", {"eps": math.exp(-1)})) == pytest.approx(2 / math.pi)
    assert predict(PredictionKind("gamma-cover", {"n": 64, "gamma": 0.5})) == pytest.approx(torus_cover(64) / 4)


@pytest.mark.parametrize("kind, params", [
    ("torus-cover", {"n": 1}),
    ("bm-cover", {"eps": 1.0}),
    ("bm-cover", {"eps": 0.0}),
    ("kr-cdf", {"t": 0}),
    ("gamma-cover", {"n": 10, "gamma": 1.0}),
    ("alpha-exponent", {"alpha": 0}),
    ("alpha-exponent", {"alpha": 1.5}),
    ("phi-lower", {"n": 2}),
    ("torus-cover", {}),
    ("no-such-kind", {"n": 3}),
])
def test_domain_errors(kind, params):
    with pytest.raises(ValueError):
        predict(PredictionKind(kind, params))


@given(st.floats(0.01, 1e4), st.floats(0.01, 1e4))
def test_kr_cdf_is_a_cdf(t1, t2):
    lo, hi = sorted((t1, t2))
    assert 0 < kr_cdf(lo) < 1 or kr_cdf(lo) == 0.0
    if hi > lo * (1 + 1e-9):
        assert kr_cdf(hi) > kr_cdf(lo) or kr_cdf(lo) == 0.0


def test_kr_cdf_limits():
    assert kr_cdf(1e-3) < 1e-100
    assert kr_cdf(1e9) > 1 - 1e-8


def test_gamma_cover_tends_to_torus_cover():
    assert gamma_cover(50, 1e-9) == pytest.approx(torus_cover(50), rel=1e-8)


@given(st.floats(1e-6, 1.0), st.floats(1e-6, 1.0))
def test_alpha_exponent_decreasing(a, b):
    lo, hi = sorted((a, b))
    if hi > lo:
        assert alpha_exponent(hi) < alpha_exponent(lo)
    assert 0 <= alpha_exponent(a) < 1


def test_phi_lower_grows():
    vals = [phi_lower(n) for n in (16, 100, 1000, 10**6)]
    assert vals == sorted(vals)


def test_square_lattice_constant():
    assert lattice_constant(1.0, np.eye(2) / 2) == pytest.approx(1 / math.pi)
    assert lattice_constant(regular_cell_area(4), np.eye(2) / 2) == pytest.approx(1 / math.pi)
    assert regular_cell_area(4) == pytest.approx(1.0)


@given(st.floats(0.01, 100))
def test_affine_invariance(s):
    cov = np.array([[0.7, 0.1], [0.1, 0.4]])
    assert lattice_constant(2.0 * s * s, cov * s * s) == pytest.approx(lattice_constant(2.0, cov), rel=1e-12)


@pytest.mark.parametrize("cov", [np.zeros((2, 2)), [[1, 0.5], [0, 1]], [[1, 2], [2, 1]], np.eye(3)])
def test_bad_covariance_rejected(cov):
    with pytest.raises(ValueError):
        lattice_constant(1.0, cov)


def test_degree_constants_flagged_as_conjecture():
    for d in (3, 4, 6):
        c = planar_degree_constant(d)
        assert c.conjecture
        assert c.value == pytest.approx(d / (4 * math.pi) * math.tan(math.pi / d))
    with pytest.raises(ValueError):
        planar_degree_constant(5)
