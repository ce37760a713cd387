import numpy as np
import pytest
from conftest import random_disc
from hypothesis import given, settings
from hypothesis import strategies as st

from h1pick import (
    Found,
    NotFoundUpTo,
    PickProblem,
    boundary_supnorm,
    poly_oracle,
    random_ball_function,
)

NODES = np.array([0.3 + 0.1j, -0.25 + 0.35j, -0.1 - 0.45j])


def _dense_supnorm(coeffs, samples=2**16):
    t = 2 * np.pi * np.arange(samples) / samples
    return float(np.max(np.abs(np.polyval(np.asarray(coeffs)[::-1], np.exp(1j * t)))))


def _check_witness(result, p):
    assert isinstance(result, Found)
    c = result.coefficients.coefficients
    assert abs(c[1]) == 0.0
    assert np.max(np.abs(result.coefficients(p.nodes) - p.targets)) <= 1e-8
    assert _dense_supnorm(c) <= 1 + 1e-6
    assert result.boundary_supnorm == pytest.approx(_dense_supnorm(c), abs=1e-8)


class TestBoundarySupnorm:
    @pytest.mark.parametrize("k", [0, 2, 5])
    def test_monomial(self, k):
        c = np.zeros(k + 1)
        c[k] = 1
        assert boundary_supnorm(c, 64) == pytest.approx(1.0, abs=1e-14)

    def test_peak_between_samples(self):
        # |1 + 0.5 e^{i(t - 0.01)}| peaks off the sampling grid
        c = np.array([1.0, 0.5 * np.exp(-0.01j)])
        assert boundary_supnorm(c, 16) == pytest.approx(1.5, abs=1e-12)

    @given(st.integers(0, 2**31))
    def test_never_exceeds_dense(self, seed):
        rng = np.random.default_rng(seed)
        c = rng.normal(size=8) + 1j * rng.normal(size=8)
        sup = boundary_supnorm(c, 64)
        dense = _dense_supnorm(c)
        assert sup <= dense * (1 + 1e-8)  # the dense grid misses the peak by O(h²)
        assert sup >= dense * (1 - 1e-6)


class TestPolyOracle:
    def test_square(self):
        p = PickProblem(NODES, NODES**2)
        _check_witness(poly_oracle(p, 16), p)

    def test_negative_cube(self):
        p = PickProblem(NODES, -(NODES**3))
        _check_witness(poly_oracle(p, 16), p)

    def test_shrunk_ball_function(self):
        f = random_ball_function(1, 6)
        z = np.array([0.2, -0.3j, 0.4 + 0.1j, -0.3 - 0.3j])
        p = PickProblem(z, 0.9 * f(z))
        _check_witness(poly_oracle(p, 32), p)

    def test_no_nodes(self):
        assert isinstance(poly_oracle(PickProblem([], []), 4), Found)

    def test_target_outside_disc(self):
        r = poly_oracle(PickProblem([0.1, 0.2], [0.0, 1.2]), 8)
        assert isinstance(r, NotFoundUpTo)
        assert r.gap == pytest.approx(0.2)

    def test_schwarz_violation(self):
        # |f(z)| ≤ |z|² for ball functions vanishing to second order at 0
        r = poly_oracle(PickProblem([0.0, 0.3], [0.0, 0.2]), 12, iterations=2000)
        assert isinstance(r, NotFoundUpTo)
        assert r.gap > 1e-3

    def test_degree_too_small(self):
        with pytest.raises(ValueError):
            poly_oracle(PickProblem(NODES, NODES**2), 4)

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            poly_oracle(PickProblem(NODES, NODES**2), 8, boundary_samples=32)

    def test_to_dict(self):
        r = poly_oracle(PickProblem([0.5], [0.25]), 4)
        d = r.to_dict()
        assert set(d) == {"coefficients", "supnorm"}

    @settings(max_examples=10)
    @given(st.integers(0, 10_000))
    def test_shrunk_random_targets_found(self, seed):
        # shrunk slightly so a polynomial of modest degree suffices
        rng = np.random.default_rng(seed)
        f = random_ball_function(rng, 3)
        z = random_disc(rng, 3, 0.6)
        p = PickProblem(z, 0.95 * f(z))
        _check_witness(poly_oracle(p, 32), p)
