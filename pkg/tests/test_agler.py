import json
import warnings

import numpy as np
import pytest
from conftest import random_disc
from hypothesis import given, settings
from hypothesis import strategies as st

from h1pick import (
    AglerCertificate,
    DualCertificate,
    Feasible,
    GridEmpty,
    Indeterminate,
    Infeasible,
    IterationCapExceeded,
    NotFound,
    PickProblem,
    SolverOptions,
    agler_decompose,
    atom_matrices,
    dual_search,
    feasibility,
    hmat,
    hvec,
    make_diameter,
    make_triangle,
    min_eigenvalue,
    random_ball_function,
    test_function as psi_of,
    theta_grid,
)

GRID = theta_grid(128)
THETA0 = make_triangle(0.4, 2.3, 4.2)
NODES = np.array([0.3 + 0.1j, -0.25 + 0.35j, -0.1 - 0.45j, 0.5 - 0.3j])


def _admissible(kernel, grid, nodes, rtol=1e-9):
    mats = atom_matrices(grid, nodes) * kernel[None]
    lam = np.linalg.eigvalsh(0.5 * (mats + np.conj(np.swapaxes(mats, 1, 2))))
    return np.all(lam[:, 0] >= -rtol * np.abs(lam).max())


class TestHermitianVectorization:
    @given(st.integers(0, 2**31), st.integers(1, 6))
    def test_round_trip_and_isometry(self, seed, n):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = a + a.conj().T
        assert np.allclose(hmat(hvec(h), n), h, atol=1e-13)
        assert np.dot(hvec(h), hvec(h)) == pytest.approx(np.linalg.norm(h) ** 2)


class TestAglerDecompose:
    def test_test_function_targets_exact(self):
        p = PickProblem(NODES, psi_of(THETA0)(NODES))
        cert = agler_decompose(p, GRID + [THETA0])
        assert cert.residual <= 1e-8

    def test_zero_targets(self):
        cert = agler_decompose(PickProblem(NODES, np.zeros(4)), GRID)
        assert cert.residual <= 1e-8

    def test_ball_function_targets(self):
        f = random_ball_function(3, 10)
        p = PickProblem(NODES, f(NODES))
        cert = agler_decompose(p, GRID)
        assert cert.residual <= 1e-6 * np.linalg.norm(p.target_matrix())

    def test_certificate_is_consistent(self):
        p = PickProblem(NODES, random_ball_function(5, 8)(NODES))
        cert = agler_decompose(p, GRID)
        gap = np.linalg.norm(cert.reconstruct(NODES) - p.target_matrix())
        assert gap == pytest.approx(cert.residual, abs=1e-12)
        for g in cert.gammas:
            assert np.allclose(g, g.conj().T)
            assert min_eigenvalue(g) >= -1e-9 * max(1.0, np.linalg.norm(g, 2))
            assert np.any(g != 0)

    def test_history_is_monotone(self):
        p = PickProblem(NODES, 1.3 * psi_of(THETA0)(NODES))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IterationCapExceeded)
            cert = agler_decompose(p, GRID)
        h = np.array(cert.history)
        assert np.all(np.diff(h) <= 0)
        assert h[-1] == pytest.approx(cert.residual)

    def test_empty_grid(self):
        with pytest.raises(GridEmpty):
            agler_decompose(PickProblem([0.1], [0.0]), [])

    def test_no_nodes(self):
        assert agler_decompose(PickProblem([], []), GRID).residual == 0.0

    def test_json_round_trip(self):
        p = PickProblem(NODES[:3], psi_of(make_diameter(0.0))(NODES[:3]))
        cert = agler_decompose(p, GRID)
        again = AglerCertificate.from_dict(json.loads(json.dumps(cert.to_dict())))
        assert again.residual == cert.residual
        assert np.allclose(again.reconstruct(p.nodes), cert.reconstruct(p.nodes), atol=1e-15)


class TestDualSearch:
    def test_single_large_target(self):
        p = PickProblem([0.2], [1.2])
        cert = dual_search(p, GRID)
        assert isinstance(cert, DualCertificate)
        assert cert.eigenvalue < 0

    def test_feasible_has_no_certificate(self):
        p = PickProblem(NODES[:3], NODES[:3] ** 2)
        assert isinstance(dual_search(p, GRID), NotFound)

    def test_scaled_test_function(self):
        p = PickProblem(NODES, 1.05 * psi_of(THETA0)(NODES))
        cert = dual_search(p, GRID)
        assert isinstance(cert, DualCertificate)
        assert cert.eigenvalue <= -1e-6 * np.linalg.norm(cert.kernel, 2)

    def test_certificate_checks_out(self):
        p = PickProblem(NODES, 1.2 * psi_of(THETA0)(NODES))
        cert = dual_search(p, GRID)
        assert isinstance(cert, DualCertificate)
        k = cert.kernel
        assert _admissible(k, GRID, NODES)
        # independent spectrum of M ∘ K and the stored witness
        mk = p.target_matrix() * k
        assert min_eigenvalue(mk) == pytest.approx(cert.eigenvalue, rel=1e-8, abs=1e-14)
        v = cert.witness
        assert np.real(np.vdot(v, mk @ v)) / np.vdot(v, v).real == pytest.approx(cert.eigenvalue, rel=1e-8)

    def test_json_round_trip(self):
        cert = dual_search(PickProblem([0.2, -0.3], [1.2, 0.1]), GRID)
        again = DualCertificate.from_dict(json.loads(json.dumps(cert.to_dict())))
        assert np.array_equal(again.kernel, cert.kernel)
        assert again.eigenvalue == cert.eigenvalue

    def test_empty_grid(self):
        with pytest.raises(GridEmpty):
            dual_search(PickProblem([0.1], [0.0]), [])


class TestFeasibility:
    def test_no_nodes(self):
        assert isinstance(feasibility(PickProblem([], [])), Feasible)

    def test_single_node_inside(self):
        assert isinstance(feasibility(PickProblem([0.4], [0.5])), Feasible)

    def test_single_node_outside(self):
        assert isinstance(feasibility(PickProblem([0.4], [1.01])), Infeasible)

    def test_nonzero_derivative_impossible(self):
        # f(0) = 0, f(0.1) = 0.09 needs a slope no ball function with f'(0) = 0 can reach
        r = feasibility(PickProblem([0.0, 0.1], [0.0, 0.09]))
        assert isinstance(r, Infeasible)

    def test_verdict_fields(self):
        r = feasibility(PickProblem(NODES[:3], NODES[:3] ** 2))
        assert isinstance(r, Feasible)
        assert r.diagnostics["primal_residual"] <= r.diagnostics["primal_tolerance"]

    @pytest.mark.parametrize("scale,kind", [(0.8, Feasible), (1.3, Infeasible)])
    def test_permutation_and_rotation_invariant(self, scale, kind):
        w = scale * psi_of(THETA0)(NODES)
        perm = np.array([2, 0, 3, 1])
        variants = [
            PickProblem(NODES, w),
            PickProblem(NODES[perm], w[perm]),
            PickProblem(np.exp(0.7j) * NODES, w),  # f(e^{-iφ} z) stays in the ball
            PickProblem(NODES, np.exp(-1.1j) * w),
        ]
        assert all(isinstance(feasibility(p), kind) for p in variants)

    @settings(max_examples=8)
    @given(st.integers(0, 10_000), st.integers(1, 4))
    def test_ball_function_is_never_infeasible(self, seed, n):
        rng = np.random.default_rng(seed)
        z = random_disc(rng, n, 0.8)
        f = random_ball_function(rng, 6)
        r = feasibility(PickProblem(z, f(z)), SolverOptions(grid_size=64))
        assert not isinstance(r, Infeasible)
        assert not r.diagnostics.get("contradiction", False)

    def test_contradiction_is_indeterminate(self):
        assert Indeterminate({"contradiction": True}).diagnostics["contradiction"]
