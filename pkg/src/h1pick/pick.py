"""Pick matrices, Δ-kernels of test functions and kernel-cone membership.

Matrix convention: for nodes ``z_1..z_n`` a kernel matrix has entries
``K[i, j] = k(z_j, z_i)``, so the Szegő matrix is ``1/(1 - conj(z_j) z_i)``
and every Pick-type matrix is an entrywise (Schur) product with it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._tol import PSD_RTOL, RANK_RTOL
from .errors import DimensionMismatch, IllConditionedGram
from .kernels import DifferentiatingKernel, DiscPoint, diff_kernel_eval, kernel_inner
from .measures import ExtremeMeasure
from .testfn import test_function, third_zero

__all__ = [
    "PickProblem",
    "hermitian",
    "szego_matrix",
    "pick_matrix",
    "deficiency_matrix",
    "delta_matrix",
    "min_eigenvalue",
    "psd_check",
    "numerical_rank",
    "gram_basis_check",
    "four_point_singularity",
    "kernel_cone_membership",
    "psi_values",
]


def _nodes(points) -> np.ndarray:
    return np.array([p.value if isinstance(p, DiscPoint) else complex(p) for p in points],
                    dtype=complex)


@dataclass(eq=False)
class PickProblem:
    """Interpolation data: nodes in the open disc and target values."""

    nodes: np.ndarray
    targets: np.ndarray
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        self.nodes = _nodes(np.atleast_1d(self.nodes))
        self.targets = np.atleast_1d(np.asarray(self.targets, dtype=complex))
        if self.nodes.shape != self.targets.shape:
            raise DimensionMismatch("nodes and targets differ in length")
        if np.any(np.abs(self.nodes) >= 1):
            raise ValueError("nodes must lie in the open disc")
        if self.n > 1:
            d = np.abs(self.nodes[:, None] - self.nodes[None, :])
            d[np.diag_indices(self.n)] = np.inf
            if d.min() <= 1e-12:
                raise ValueError("nodes must be pairwise distinct")

    def __eq__(self, other):
        if not isinstance(other, PickProblem):
            return NotImplemented
        return np.array_equal(self.nodes, other.nodes) and np.array_equal(self.targets, other.targets)

    @property
    def n(self) -> int:
        return self.nodes.size

    def target_matrix(self) -> np.ndarray:
        """``[1 - w_i conj(w_j)]``."""
        w = self.targets
        return 1.0 - np.outer(w, np.conj(w))

    def to_dict(self) -> dict:
        pairs = lambda a: [[float(c.real), float(c.imag)] for c in a]  # noqa: E731
        return {"nodes": pairs(self.nodes), "targets": pairs(self.targets)}

    @classmethod
    def from_dict(cls, data: dict) -> "PickProblem":
        to_c = lambda rows: np.array([complex(r[0], r[1]) for r in rows], dtype=complex)  # noqa: E731
        return cls(to_c(data["nodes"]), to_c(data["targets"]))


def hermitian(a) -> np.ndarray:
    """Symmetrized copy ``(A + A*)/2``."""
    a = np.asarray(a, dtype=complex)
    return 0.5 * (a + a.conj().T)


def szego_matrix(nodes) -> np.ndarray:
    z = _nodes(nodes)
    return 1.0 / (1.0 - np.outer(z, np.conj(z)))


def pick_matrix(p: PickProblem, kernel) -> np.ndarray:
    kernel = np.asarray(kernel, dtype=complex)
    if kernel.shape != (p.n, p.n):
        raise DimensionMismatch(f"kernel is {kernel.shape}, problem has {p.n} nodes")
    return hermitian(p.target_matrix() * kernel)


def psi_values(grid, nodes) -> np.ndarray:
    """``ψ_θ(z_i)`` for every grid member, shape ``(len(grid), n)``."""
    z = _nodes(nodes)
    return np.array([test_function(t)(z) for t in grid]).reshape(len(grid), z.size)


def deficiency_matrix(theta: ExtremeMeasure, points) -> np.ndarray:
    """``[1 - ψ_θ(z_i) conj(ψ_θ(z_j))]``."""
    v = test_function(theta)(_nodes(points))
    return 1.0 - np.outer(v, np.conj(v))


def delta_matrix(theta: ExtremeMeasure, points) -> np.ndarray:
    """``Δ_θ[i, j] = (1 - ψ_θ(z_i) conj(ψ_θ(z_j))) k(z_j, z_i)``."""
    return hermitian(deficiency_matrix(theta, points) * szego_matrix(points))


def min_eigenvalue(h) -> float:
    return float(np.linalg.eigvalsh(hermitian(h))[0])


def psd_check(h, rtol: float = PSD_RTOL) -> bool:
    h = hermitian(h)
    scale = np.linalg.norm(h, 2) if h.size else 0.0
    return min_eigenvalue(h) >= -rtol * scale if h.size else True


def numerical_rank(a, rtol: float = RANK_RTOL) -> int:
    s = np.linalg.svd(np.asarray(a), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def _gram_factor(theta: ExtremeMeasure, z: np.ndarray, max_condition: float):
    """Values ``E[i, k] = e_k(z_i)`` of a basis of ker M*_θ and its Gram matrix."""
    if theta.is_diameter:
        basis = [DifferentiatingKernel(0, 0), DifferentiatingKernel(0, 1)]
    else:
        a = third_zero(theta)
        basis = [DifferentiatingKernel(0, 0), DifferentiatingKernel(0, 1),
                 DifferentiatingKernel(a, 0)]
    gram = np.array([[kernel_inner(bj, bi) for bj in basis] for bi in basis])
    if np.linalg.cond(gram) <= max_condition:
        values = np.stack([diff_kernel_eval(b, z) for b in basis], axis=1)
        return values, gram
    # a ≈ 0: swap k_a for y²/(1 - āy) = (k_a - k_0 - ā k_{0'})/ā², which spans
    # the same space and equals k_{0''}/2 when a = 0
    ab = np.conj(a)
    values = np.stack([np.ones_like(z), z, z * z / (1 - ab * z)], axis=1)
    gram = np.diag([1.0, 1.0, 1.0 / (1.0 - abs(a) ** 2)]).astype(complex)
    if np.linalg.cond(gram) > max_condition:
        raise IllConditionedGram("Gram matrix of ker M*_θ is ill-conditioned")
    return values, gram


def gram_factor_matrix(theta: ExtremeMeasure, points, max_condition: float = 1e8) -> np.ndarray:
    """Δ_θ rebuilt as ``E G⁻¹ E*`` from the projection onto ``ker M*_θ``."""
    z = _nodes(points)
    values, gram = _gram_factor(theta, z, max_condition)
    # ⟨P k_w, k_z⟩ = E(z)ᵀ G⁻¹ conj(E(w)) with G[i, k] = ⟨e_k, e_i⟩
    return values @ np.linalg.solve(gram, values.conj().T)


def gram_basis_check(theta: ExtremeMeasure, points, max_condition: float = 1e8) -> float:
    """Max entrywise gap between Δ_θ and its Gram factorization through ker M*_θ."""
    return float(np.max(np.abs(gram_factor_matrix(theta, points, max_condition)
                               - delta_matrix(theta, points))))


def four_point_singularity(theta: ExtremeMeasure, nodes) -> tuple[float, float]:
    """``(|det|/‖M‖⁴, λ_min/‖M‖)`` of the classical Pick matrix of ``ψ_θ``.

    Both vanish when the nodes number more than the rank of Δ_θ.
    """
    m = delta_matrix(theta, nodes)
    norm = np.linalg.norm(m, 2)
    n = m.shape[0]
    return float(abs(np.linalg.det(m)) / norm**n), float(min_eigenvalue(m) / norm)


def kernel_cone_membership(kernel, grid, points, rtol: float = PSD_RTOL) -> bool:
    """Grid test of ``(1 - ψ_θ ψ_θ*) ∘ K ⪰ 0`` for every θ in ``grid``."""
    kernel = np.asarray(kernel, dtype=complex)
    if not grid:
        raise ValueError("grid must be nonempty")
    if not np.any(kernel):
        return True
    vals = psi_values(grid, points)
    d = 1.0 - vals[:, :, None] * np.conj(vals[:, None, :])
    mats = d * kernel[None]
    mats = 0.5 * (mats + np.conj(np.swapaxes(mats, 1, 2)))
    lam = np.linalg.eigvalsh(mats)
    scale = np.abs(lam).max(axis=1)
    return bool(np.all(lam[:, 0] >= -rtol * scale))
