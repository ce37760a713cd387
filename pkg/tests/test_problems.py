import numpy as np
import pytest
from conftest import disc_points
from hypothesis import given
from hypothesis import strategies as st

from h1pick import (
    PickProblem,
    ProblemConfig,
    TargetOnBoundaryOfMap,
    feasible_problem,
    infeasible_problem,
    min_eigenvalue,
    mobius_identity_sides,
    mobius_normalize,
    mobius_restore,
    oracle_scale_bracket,
    pick_matrix,
    random_ball_function,
    random_nodes,
    szego_matrix,
)

SMALL = ProblemConfig(nodes=2, atoms=6, oracle_degree=16, bisection_steps=6, oracle_iterations=3000)


class TestMobius:
    def test_zero_is_identity(self):
        p = feasible_problem(1)
        assert mobius_normalize(p, 0.0) == p

    def test_first_target_sent_to_zero(self):
        p = feasible_problem(2)
        q = mobius_normalize(p, p.targets[0])
        assert abs(q.targets[0]) <= 1e-15
        assert np.array_equal(q.nodes, p.nodes)

    def test_restore_inverts(self):
        p = feasible_problem(3)
        a = 0.3 - 0.4j
        assert np.allclose(mobius_restore(mobius_normalize(p, a), a).targets, p.targets, atol=1e-14)

    def test_rejects_outside_disc(self):
        with pytest.raises(ValueError):
            mobius_normalize(feasible_problem(0), 1.0)

    def test_pole_target(self):
        a = 0.5
        with pytest.raises(TargetOnBoundaryOfMap):
            mobius_normalize(PickProblem([0.1], [1 / a]), a)

    @given(disc_points(0.99), disc_points(0.99), disc_points(0.9))
    def test_identity_sides(self, x, y, a):
        lhs, rhs = mobius_identity_sides(x, y, a)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    @given(st.integers(0, 10_000), disc_points(0.9))
    def test_pick_matrix_congruence(self, seed, a):
        # the map acts on M ∘ K by a positive diagonal congruence
        p = feasible_problem(seed, ProblemConfig(nodes=4))
        q = mobius_normalize(p, a)
        k = szego_matrix(p.nodes)
        d = np.sqrt(1 - abs(a) ** 2) / (1 - np.conj(a) * p.targets)
        expected = d[:, None] * pick_matrix(p, k) * np.conj(d)[None, :]
        assert np.allclose(pick_matrix(q, k), expected, atol=1e-10)


class TestRandomBallFunction:
    def test_deterministic(self):
        z = np.array([0.1, 0.2j])
        assert np.array_equal(random_ball_function(7, 5)(z), random_ball_function(7, 5)(z))

    @given(st.integers(0, 10_000), st.integers(2, 12))
    def test_inner_with_double_zero(self, seed, atoms):
        f = random_ball_function(seed, atoms)
        t = np.exp(2j * np.pi * np.arange(128) / 128 + 0.01j)
        assert np.max(np.abs(np.abs(f(t)) - 1)) <= 1e-9
        assert abs(f(0.0)) <= 1e-12
        eps = 1e-5
        assert abs(f(eps) - f(-eps)) / (2 * eps) <= 1e-8

    def test_two_atoms_antipodal(self):
        f = random_ball_function(0, 2)
        assert np.allclose(np.diff(f.measure.angles), np.pi)

    def test_needs_two_atoms(self):
        with pytest.raises(ValueError):
            random_ball_function(0, 1)


class TestGenerators:
    def test_random_nodes_radius(self, rng):
        z = random_nodes(rng, 500, 0.75)
        assert np.all(np.abs(z) <= 0.75)

    def test_feasible_problem_shape(self):
        p = feasible_problem(4, ProblemConfig(nodes=5))
        assert p.n == 5
        assert np.all(np.abs(p.targets) < 1)
        assert p.diagnostics["seed"] == 4

    def test_feasible_problem_passes_classical_pick(self):
        p = feasible_problem(5)
        assert min_eigenvalue(pick_matrix(p, szego_matrix(p.nodes))) > -1e-12

    def test_bracket_single_node(self):
        # constants are admissible, so one target is reachable exactly when |t w| ≤ 1
        lo, hi = oracle_scale_bracket(PickProblem([0.5], [0.1]), SMALL)
        assert lo <= 10 <= hi
        assert hi - lo <= 8 / 2**SMALL.bisection_steps

    def test_bracket_with_origin(self):
        # f(0) = 0 forces f = z² g with |g| ≤ 1, so the threshold is |z|²/|w|
        lo, hi = oracle_scale_bracket(PickProblem([0.0, 0.5], [0.0, 0.1]), SMALL)
        assert lo <= 2.5 <= hi
        assert hi - lo <= 2 / 2**SMALL.bisection_steps

    def test_infeasible_problem(self):
        q = infeasible_problem(0, SMALL)
        lo, hi = q.diagnostics["bracket"]
        assert 0 < lo < hi
        assert q.diagnostics["scale"] == pytest.approx(hi * (1 + SMALL.margin))
        p = feasible_problem(0, SMALL)
        assert np.allclose(q.targets, q.diagnostics["scale"] * p.targets)
