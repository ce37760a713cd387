"""Feasibility of H∞₁ interpolation over a finite grid of test functions.

The primal side writes ``M = [1 - w_i conj(w_j)]`` as a cone combination
``Σ_θ D_θ ∘ Γ_θ`` with ``D_θ = [1 - ψ_θ(z_i) conj(ψ_θ(z_j))]`` and PSD
``Γ_θ``.  The dual side looks for a kernel ``K`` with every ``D_θ ∘ K ⪰ 0``
and ``(M ∘ K)`` indefinite, which rules out any such combination.

Hermitian ``n×n`` matrices are handled as real vectors of length ``n²``
through the isometry :func:`hvec` (diagonal, then √2 times the real and
imaginary parts of the strict upper triangle).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import highspy
import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.optimize import nnls

from .errors import GridEmpty, IterationCapExceeded
from .measures import ExtremeMeasure
from .pick import PickProblem, hermitian, psi_values

__all__ = [
    "SolverOptions",
    "AglerCertificate",
    "DualCertificate",
    "NotFound",
    "Feasible",
    "Infeasible",
    "Indeterminate",
    "hvec",
    "hmat",
    "atom_matrices",
    "agler_decompose",
    "dual_search",
    "feasibility",
]


@dataclass
class SolverOptions:
    """Caps and tolerances shared by the primal and dual searches.

    ``tol_primal`` is relative to ``‖M‖_F`` and ``tol_dual`` to ``‖K‖₂``.
    Both searches are deterministic; ``seed`` is carried only so that it can
    be echoed with results.
    """

    seed: int = 0
    grid_size: int = 128
    tol_primal: float = 1e-6
    tol_dual: float = 1e-6
    ipm_iterations: int = 80
    polish_iterations: int = 40
    cg_iterations: int = 60
    dual_rounds: int = 200
    cuts_per_round: int = 32
    max_cuts: int = 1500


# --- Hermitian vectorization -------------------------------------------------

def _upper(n: int):
    return np.triu_indices(n, 1)


def hvec(h: np.ndarray) -> np.ndarray:
    """Real coordinates of Hermitian matrices (batched over leading axes)."""
    h = np.asarray(h)
    n = h.shape[-1]
    iu = _upper(n)
    off = h[..., iu[0], iu[1]]
    diag = np.real(np.diagonal(h, axis1=-2, axis2=-1))
    return np.concatenate([diag, np.sqrt(2) * off.real, np.sqrt(2) * off.imag], axis=-1)


def hmat(v: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`hvec`."""
    v = np.asarray(v, dtype=float)
    iu = _upper(n)
    k = len(iu[0])
    h = np.zeros(v.shape[:-1] + (n, n), dtype=complex)
    idx = np.arange(n)
    h[..., idx, idx] = v[..., :n]
    off = (v[..., n:n + k] + 1j * v[..., n + k:]) / np.sqrt(2)
    h[..., iu[0], iu[1]] = off
    h[..., iu[1], iu[0]] = np.conj(off)
    return h


def _basis(n: int) -> np.ndarray:
    return hmat(np.eye(n * n), n)


def _inner(a, b):
    """Batched real inner product ``Re tr(A B*)``."""
    return np.real(np.sum(a * np.conj(b), axis=(-2, -1)))


def _sym(a):
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


def atom_matrices(grid, nodes) -> np.ndarray:
    """``D_θ = [1 - ψ_θ(z_i) conj(ψ_θ(z_j))]`` stacked over the grid, shape ``(G, n, n)``."""
    vals = psi_values(grid, nodes)
    return 1.0 - vals[:, :, None] * np.conj(vals[:, None, :])


# --- certificates ------------------------------------------------------------

def _matrix_json(a) -> list:
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(a, dtype=complex)]


def _matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(x[0], x[1]) for x in row] for row in rows], dtype=complex)


@dataclass
class AglerCertificate:
    """PSD blocks ``Γ_θ`` on the grid members they use, with the Frobenius residual.

    Only members with a nonzero block are stored; ``history`` holds the best
    residual after every solver step and never increases.
    """

    grid: list
    gammas: list
    residual: float
    history: list = field(default_factory=list)
    converged: bool = True

    def reconstruct(self, nodes) -> np.ndarray:
        """``Σ_θ D_θ ∘ Γ_θ`` at the given nodes."""
        z = np.asarray(nodes, dtype=complex)
        if not self.grid:
            return np.zeros((z.size, z.size), dtype=complex)
        return np.sum(atom_matrices(self.grid, z) * np.array(self.gammas), axis=0)

    def to_dict(self) -> dict:
        return {"grid": [g.to_dict() for g in self.grid],
                "gammas": [_matrix_json(g) for g in self.gammas],
                "residual": float(self.residual)}

    @classmethod
    def from_dict(cls, data: dict) -> "AglerCertificate":
        grid = [ExtremeMeasure.from_dict(g) for g in data["grid"]]
        gammas = [_matrix_from_json(g) for g in data["gammas"]]
        return cls(grid, gammas, float(data["residual"]))


@dataclass
class DualCertificate:
    """Grid-validated kernel ``K`` and a negative direction of ``M ∘ K``."""

    kernel: np.ndarray
    eigenvalue: float
    witness: np.ndarray
    lower_bound: float = float("nan")

    def to_dict(self) -> dict:
        w = np.asarray(self.witness, dtype=complex)
        return {"kernel": _matrix_json(self.kernel), "eigenvalue": float(self.eigenvalue),
                "witness": [[float(x.real), float(x.imag)] for x in w]}

    @classmethod
    def from_dict(cls, data: dict) -> "DualCertificate":
        w = np.array([complex(x[0], x[1]) for x in data["witness"]], dtype=complex)
        return cls(_matrix_from_json(data["kernel"]), float(data["eigenvalue"]), w)


@dataclass
class NotFound:
    """No dual certificate; ``lower_bound`` is the last cutting-plane value of ``min Σ M_ij K_ij``."""

    lower_bound: float
    best_eigenvalue: float
    rounds: int


@dataclass
class Feasible:
    certificate: AglerCertificate
    diagnostics: dict = field(default_factory=dict)


@dataclass
class Infeasible:
    certificate: DualCertificate
    diagnostics: dict = field(default_factory=dict)


@dataclass
class Indeterminate:
    diagnostics: dict = field(default_factory=dict)


# --- primal: interior point on the target-scaling homotopy --------------------

def _max_step(x: np.ndarray, dx: np.ndarray) -> float:
    """Largest ``α`` keeping every block of ``x + α dx`` positive semidefinite."""
    chol = np.linalg.cholesky(x)
    inv = np.linalg.inv(chol)
    w = _sym(inv @ dx @ np.conj(np.swapaxes(inv, -1, -2)))
    lam = float(np.linalg.eigvalsh(w)[:, 0].min())
    return np.inf if lam >= 0 else -1.0 / lam


class _Candidates:
    """Best-so-far primal iterate, so the reported residual never goes up."""

    def __init__(self, m, d):
        self.m, self.d = m, d
        self.best_gammas = None
        self.best = np.inf
        self.history: list[float] = []

    def residual(self, gammas) -> float:
        return float(np.linalg.norm(self.m - np.sum(self.d * gammas, axis=0)))

    def offer(self, gammas, residual=None) -> None:
        r = self.residual(gammas) if residual is None else residual
        if r < self.best:
            self.best, self.best_gammas = r, gammas
        self.history.append(self.best)


def _homotopy_candidate(x, tau, m, d, ones_block):
    """Cone combination for ``M`` built from an iterate of the scaled problem.

    The scaled problem reads ``Σ D∘X = 1 1* - τ w w*``.  For ``τ ≥ 1``
    mixing in ``1 1* = D_0 ∘ ones_block`` recovers ``M`` exactly; otherwise
    the best nonnegative multiple of ``X`` is used.
    """
    if tau >= 1:
        gammas = x / tau
        gammas[0] = gammas[0] + (1 - 1 / tau) * ones_block
        return gammas
    ax = np.sum(d * x, axis=0)
    scale = max(0.0, _inner(ax, m) / max(_inner(ax, ax), 1e-300))
    return scale * x


def _interior_point(m, w, d, options: SolverOptions, pool: _Candidates, ones_block):
    """Primal-dual path following for ``min s`` s.t. ``Σ D_θ∘X_θ - s ŵŵ* = M``, ``X_θ ⪰ 0``.

    Here ``ŵ = w/‖w‖``.  The optimal ``s`` is ``‖w‖²(1 - ρ²)`` where ``ρ`` is
    the largest factor for which ``ρ w`` is grid-feasible, so ``s ≤ 0`` means
    the targets are.  Uses
    the HKM direction with Mehrotra's predictor-corrector; every iterate
    is offered to ``pool`` as a primal candidate.
    """
    g, n, _ = d.shape
    basis = _basis(n)
    dconj = np.conj(d)
    lifted = dconj[:, None] * basis[None]  # adjoint of D_θ∘· applied to basis elements
    wnorm2 = float(np.vdot(w, w).real)
    b = -np.outer(w, np.conj(w)) / wnorm2
    bvec = hvec(b)
    apply_a = lambda xs: np.sum(d * xs, axis=0)  # noqa: E731
    apply_at = lambda yv: dconj * hmat(yv, n)[None]  # noqa: E731

    eye = np.broadcast_to(np.eye(n, dtype=complex), (g, n, n))
    x = eye / g
    z = eye.copy()
    y = np.zeros(n * n)
    s = 0.0
    norm_m = np.linalg.norm(m)
    best_pinf = np.inf
    for _ in range(options.ipm_iterations):
        rp = m - apply_a(x) - s * b
        rd = -apply_at(y) - z
        rs = 1.0 - bvec @ y
        mu = float(np.sum(_inner(x, z))) / (g * n)
        pinf = float(np.linalg.norm(rp))
        candidate = _homotopy_candidate(x, 1 - s / wnorm2, m, d, ones_block)
        pool.offer(candidate)
        if pool.best <= 1e-13 * norm_m or mu < 1e-14:
            break
        best_pinf = min(best_pinf, pinf)
        if pinf > 1e3 * max(best_pinf, 1e-12 * norm_m):
            break  # Schur system too ill-conditioned to keep primal feasibility
        zinv = np.linalg.inv(z)
        u = x[:, None] @ lifted @ zinv[:, None]
        schur = np.einsum("tpij,tqji->pq", lifted, u).real
        try:
            factor = cho_factor(0.5 * (schur + schur.T))
        except np.linalg.LinAlgError:
            break
        t2 = cho_solve(factor, bvec)

        def direction(target):
            r1 = hvec(rp - apply_a(target - _sym(x @ rd @ zinv)))
            t1 = cho_solve(factor, r1)
            ds = (bvec @ t1 - rs) / (bvec @ t2)
            dy = t1 - ds * t2
            dz = rd - apply_at(dy)
            dx = _sym(target - _sym(x @ dz @ zinv))
            return dx, ds, dy, dz

        try:
            dx, ds, dy, dz = direction(-x)
            ap, ad = min(1.0, _max_step(x, dx)), min(1.0, _max_step(z, dz))
            mu_aff = float(np.sum(_inner(x + ap * dx, z + ad * dz))) / (g * n)
            sigma = min(1.0, (mu_aff / mu) ** 3)
            dx, ds, dy, dz = direction(sigma * mu * zinv - x - _sym(dx @ dz @ zinv))
            ap = min(1.0, 0.95 * _max_step(x, dx))
            ad = min(1.0, 0.95 * _max_step(z, dz))
        except np.linalg.LinAlgError:
            break
        x, s = x + ap * dx, s + ap * ds
        y, z = y + ad * dy, z + ad * dz


# --- primal: Gauss-Newton on factors of the active blocks -----------------------

def _factors(gammas, active, rank=None):
    lam, vec = np.linalg.eigh(gammas[active])
    f = vec * np.sqrt(np.clip(lam, 0.0, None))[:, None, :]
    return f if rank is None else f[:, :, -rank:]


def _gauss_newton(m, d, factors, iterations, pool_target):
    """Levenberg-Marquardt on ``‖M - Σ D_θ ∘ F_θ F_θ*‖`` over the factors ``F_θ``.

    Only residual-decreasing steps are accepted.  Returns the final factors
    and the residual after each accepted step.
    """
    k, n, r = factors.shape
    eye = np.eye(n)

    def resid(f):
        return m - np.sum(d * np.einsum("sir,sjr->sij", f, f.conj()), axis=0)

    res = resid(factors)
    fval = float(np.linalg.norm(res))
    hist = []
    damping = 1e-8
    for _ in range(iterations):
        if fval <= pool_target:
            break
        # derivative of D∘(F F*) along real and imaginary unit moves of F[s, a, r]
        t1 = np.einsum("ia,sjr->sarij", eye, factors.conj())
        t2 = np.einsum("sir,ja->sarij", factors, eye)
        jre = d[:, None, None] * (t1 + t2)
        jim = d[:, None, None] * (1j * t1 - 1j * t2)
        jac = np.concatenate([hvec(jre).reshape(-1, n * n), hvec(jim).reshape(-1, n * n)]).T
        rv = hvec(res)
        jj = jac @ jac.T
        while True:
            step = jac.T @ np.linalg.solve(jj + damping * np.eye(n * n), rv)
            size = k * n * r
            trial = factors + step[:size].reshape(k, n, r) + 1j * step[size:].reshape(k, n, r)
            tres = resid(trial)
            tval = float(np.linalg.norm(tres))
            if tval < fval:
                factors, res, fval = trial, tres, tval
                damping = max(damping / 10, 1e-16)
                break
            damping *= 10
            if damping > 1e8:
                return factors, hist
        hist.append(fval)
    return factors, hist


def _polish(m, d, pool: _Candidates, options: SolverOptions, target: float) -> None:
    """Refine the best candidate on its support, pruned at a few trace thresholds."""
    gammas = pool.best_gammas
    tr = np.real(np.trace(gammas, axis1=1, axis2=2))
    if tr.max() <= 0:
        return
    trials = [(1e-7, None), (1e-3, "auto"), (1e-1, "auto")]
    start = pool.best
    outcomes = []
    for threshold, rank in trials:
        active = np.flatnonzero(tr >= threshold * tr.max())
        if rank == "auto":
            lam = np.linalg.eigvalsh(gammas[active])
            rank = max(1, int(np.max(np.sum(lam > 1e-6 * lam.max(), axis=1))))
        f, hist = _gauss_newton(m, d[active], _factors(gammas, active, rank),
                                options.polish_iterations, target)
        outcomes.append((hist[-1] if hist else start, active, f, hist))
        if hist and hist[-1] <= target:
            break
    value, active, f, hist = min(outcomes, key=lambda o: o[0])
    if value < start:
        new = np.zeros_like(gammas)
        new[active] = np.einsum("sir,sjr->sij", f, f.conj())
        for h in hist:
            pool.history.append(min(pool.best, h))
        pool.offer(new)


def _conditional_gradient(m, d, pool: _Candidates, options: SolverOptions, target: float) -> bool:
    """Rank-one atom pursuit with nonnegative least-squares re-fits.

    Starts from the eigen-atoms of the best candidate.  Each round adds the
    atom ``(θ, v)`` maximizing ``⟨R, D_θ ∘ v v*⟩`` and re-fits all weights.
    Returns True when it stopped on the iteration cap.
    """
    n = m.shape[0]
    lam, vec = np.linalg.eigh(pool.best_gammas)
    keep = lam > 1e-14 * max(lam.max(), 1e-300)
    idx_theta, idx_eig = np.nonzero(keep)
    thetas = list(idx_theta)
    vectors = [vec[t, :, e] for t, e in zip(idx_theta, idx_eig)]
    mvec = hvec(m)

    def assemble(weights):
        gam = np.zeros_like(pool.best_gammas)
        for wt, t, v in zip(weights, thetas, vectors):
            if wt > 0:
                gam[t] += wt * np.outer(v, v.conj())
        return gam

    for _ in range(options.cg_iterations):
        if pool.best <= target:
            return False
        resid = m - np.sum(d * pool.best_gammas, axis=0)
        # ⟨R, D∘vv*⟩ = v* (R ∘ conj D) v
        lam_all, vec_all = np.linalg.eigh(hermitian_batch(resid[None] * np.conj(d)))
        t = int(np.argmax(lam_all[:, -1]))
        if lam_all[t, -1] <= 1e-15 * np.linalg.norm(m):
            return False  # stationary: no atom improves the fit
        thetas.append(t)
        vectors.append(vec_all[t, :, -1])
        cols = np.stack([hvec(d[ti] * np.outer(v, v.conj())) for ti, v in zip(thetas, vectors)],
                        axis=1)
        weights, _ = nnls(cols, mvec, maxiter=50 * cols.shape[1])
        live = weights > 0
        thetas = [ti for ti, keep_it in zip(thetas, live) if keep_it]
        vectors = [v for v, keep_it in zip(vectors, live) if keep_it]
        pool.offer(assemble(weights[live]))
    return pool.best > target


def hermitian_batch(a):
    return _sym(a)


def agler_decompose(p: PickProblem, grid, options: SolverOptions | None = None) -> AglerCertificate:
    """Cone decomposition of ``M = [1 - w_i conj(w_j)]`` over the grid atoms.

    Stages: an interior-point solve of the target-scaling problem (exact
    whenever the targets are strictly grid-feasible), Gauss-Newton polishing
    of the blocks it leaves active, and conditional-gradient atom pursuit
    while the residual is still above ``tol_primal``.  Emits
    :class:`IterationCapExceeded` when the last stage runs out of iterations.
    """
    options = options or SolverOptions()
    grid = list(grid)
    if not grid:
        raise GridEmpty("grid must contain at least one extreme measure")
    if p.n == 0:
        return AglerCertificate([], [], 0.0, [0.0])
    m = p.target_matrix()
    d = atom_matrices(grid, p.nodes)
    pool = _Candidates(m, d)
    # 1 1* = D_0 ∘ [1/(1 - ψ_0(z_i) conj ψ_0(z_j))], a positive Szegő-type matrix
    ones_block = hermitian(1.0 / d[0])
    zero = np.zeros_like(d)
    pool.offer(zero)
    w = p.targets
    if np.linalg.norm(w) <= 1e-15:
        exact = zero.copy()
        exact[0] = ones_block
        pool.offer(exact)
    else:
        _interior_point(m, w, d, options, pool, ones_block)
    norm_m = float(np.linalg.norm(m))
    polish_target = 1e-14 * norm_m
    target = options.tol_primal * norm_m
    if pool.best > polish_target:
        _polish(m, d, pool, options, polish_target)
    capped = False
    if pool.best > target:
        capped = _conditional_gradient(m, d, pool, options, target)
        if capped:
            warnings.warn(f"primal stopped on its iteration cap at residual {pool.best:.3e}",
                          IterationCapExceeded, stacklevel=2)
    gammas = pool.best_gammas
    used = [i for i in range(len(grid)) if np.any(gammas[i] != 0)]
    return AglerCertificate([grid[i] for i in used], [hermitian(gammas[i]) for i in used],
                            pool.residual(gammas), pool.history, not capped)


# --- dual: cutting planes on the kernel cone -----------------------------------

class _CutLP:
    """``min c·k`` over unit-trace Hermitian ``k`` in a box, subject to cuts ``g·k ≥ 0``.

    Solved through its LP dual, where each cut is a new nonnegative column
    and the ``n²`` equality rows carry ``k`` as their multipliers.  The basis
    then stays ``n² × n²`` however many cuts accumulate, and each re-solve
    warm-starts from the previous one.
    """

    def __init__(self, cost: np.ndarray, n: int, max_cuts: int = 1500):
        nv = n * n
        inf = highspy.kHighsInf
        self._n = nv
        self._max_cuts = max_cuts
        self._fixed = 1 + 2 * nv  # trace and box multipliers precede the cuts
        self._idx = np.arange(nv, dtype=np.int32)
        h = self._h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.changeObjectiveSense(highspy.ObjSense.kMaximize)
        cost = np.asarray(cost, dtype=float)
        h.addRows(nv, cost.copy(), cost.copy(), 0, np.zeros(nv, dtype=np.int32),
                  np.array([], dtype=np.int32), np.array([]))
        trace = np.zeros(nv)
        trace[:n] = 1.0
        h.addCol(1.0, -inf, inf, nv, self._idx, trace)
        lower = np.concatenate([np.zeros(n), np.full(nv - n, -np.sqrt(2))])
        upper = np.concatenate([np.ones(n), np.full(nv - n, np.sqrt(2))])
        for j in range(nv):  # multipliers of the box constraints
            h.addCol(lower[j], 0.0, inf, 1, self._idx[j:j + 1], np.ones(1))
            h.addCol(-upper[j], 0.0, inf, 1, self._idx[j:j + 1], -np.ones(1))

    def add(self, g: np.ndarray) -> None:
        self._h.addCol(0.0, 0.0, highspy.kHighsInf, self._n, self._idx, np.asarray(g, dtype=float))

    def solve(self):
        self._h.run()
        if self._h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
            self._h.clearSolver()  # cold restart after a numerically unlucky warm start
            self._h.run()
        if self._h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
            return None
        sol = self._h.getSolution()
        x = np.array(sol.row_dual)
        value = float(self._h.getInfo().objective_function_value)
        cuts = self._h.getNumCol() - self._fixed
        if cuts > self._max_cuts:
            # drop idle cuts whose reduced cost keeps them furthest from entering
            weight = np.array(sol.col_value)[self._fixed:]
            reduced = np.array(sol.col_dual)[self._fixed:]
            idle = np.flatnonzero(weight <= 0)
            drop = idle[np.argsort(reduced[idle])][: cuts - self._max_cuts // 2]
            if drop.size:
                self._h.deleteCols(drop.size, np.sort(drop + self._fixed).astype(np.int32))
        return x, value


def _certify(kernel, m, d, floor):
    """Shift ``K`` by ``εI`` until every ``D_θ ∘ K`` is PSD and test ``M ∘ K``.

    ``D_θ ∘ I`` is diagonal with entries ``1 - |ψ_θ(z_i)|² ≥ floor``, so the
    shift restores grid membership exactly.
    """
    lam = np.linalg.eigvalsh(_sym(d * kernel[None]))[:, 0]
    eps = max(0.0, -float(lam.min())) / floor
    if eps > 0:
        eps *= 1 + 1e-9
    k = kernel + eps * np.eye(kernel.shape[0])
    val, vec = np.linalg.eigh(hermitian(m * k))
    return k, float(val[0]), vec[:, 0]


def dual_search(p: PickProblem, grid, options: SolverOptions | None = None):
    """Look for a kernel ``K`` with all ``D_θ ∘ K ⪰ 0`` and ``M ∘ K`` indefinite.

    A negative eigendirection ``v`` of ``M ∘ K`` can be absorbed into ``K``
    (``K ↦ diag(v̄) K diag(v)`` stays admissible), so it suffices to minimize
    the linear form ``Σ M_ij K_ij`` over admissible ``K`` with unit trace.
    This runs Kelley's cutting-plane method: each LP solution is tested on
    the grid and every violated block contributes its negative eigenvectors
    as cuts ``v*(D_θ ∘ K)v ≥ 0``.  The LP value is a lower bound, so a
    nonnegative value ends the search with :class:`NotFound`.
    """
    options = options or SolverOptions()
    grid = list(grid)
    if not grid:
        raise GridEmpty("grid must contain at least one extreme measure")
    n = p.n
    if n == 0:
        return NotFound(0.0, 0.0, 0)
    m = p.target_matrix()
    d = atom_matrices(grid, p.nodes)
    dconj = np.conj(d)
    floor = float(np.min(np.real(np.diagonal(d, axis1=1, axis2=2))))
    lp = _CutLP(hvec(np.conj(m)), n, options.max_cuts)
    # admissible kernels are PSD, since every PSD matrix lies in the primal cone
    for i in range(n):
        for j in range(i + 1, n):
            for phase in (1, -1, 1j, -1j):
                v = np.zeros(n, dtype=complex)
                v[i], v[j] = 1.0, phase
                lp.add(hvec(np.outer(v, v.conj())))
    # in-out stabilization: probe between a grid-feasible center and the LP point
    center = hvec(np.eye(n) / n)
    alpha = 0.5
    best_val, lower = np.inf, -np.inf
    rounds = 0

    def add_cuts(kernel):
        lam, vecs = np.linalg.eigh(_sym(d * kernel[None]))
        scale = max(float(np.abs(lam).max()), 1e-300)
        worst = np.argsort(lam[:, 0])[: options.cuts_per_round]
        added = 0
        for t in worst:
            if lam[t, 0] >= -1e-13 * scale:
                break
            v = vecs[t, :, 0]
            lp.add(hvec(dconj[t] * np.outer(v, v.conj())))
            added += 1
        return added

    for rounds in range(1, options.dual_rounds + 1):
        solved = lp.solve()
        if solved is None:
            break
        x, lower = solved
        if lower >= -options.tol_dual:
            break
        query = center + alpha * (x - center)
        added = add_cuts(hmat(query, n))
        if added == 0:
            center = query
            alpha = min(1.0, alpha * 1.5)
        else:
            alpha = max(0.1, alpha / 1.5)
        added += add_cuts(hmat(x, n))
        for candidate in (center, x):
            k_fixed, val, vec = _certify(hmat(candidate, n), m, d, floor)
            norm_k = float(np.linalg.norm(k_fixed, 2))
            best_val = min(best_val, val / norm_k)
            if val <= -options.tol_dual * norm_k:
                return DualCertificate(k_fixed, val, vec, lower)
        if added == 0:
            break
    return NotFound(lower, best_val, rounds)


# --- verdict ---------------------------------------------------------------------

def feasibility(p: PickProblem, options: SolverOptions | None = None, grid=None):
    """Feasible / Infeasible / Indeterminate from the primal and dual searches.

    The grid defaults to ``theta_grid(options.grid_size)``.  If both searches
    succeed the result is Indeterminate with ``contradiction`` set.
    """
    from .testfn import theta_grid

    options = options or SolverOptions()
    if p.n == 0:
        return Feasible(AglerCertificate([], [], 0.0, [0.0]), {"primal_residual": 0.0})
    grid = theta_grid(options.grid_size) if grid is None else list(grid)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IterationCapExceeded)
        cert = agler_decompose(p, grid, options)
    dual = dual_search(p, grid, options)
    norm_m = float(np.linalg.norm(p.target_matrix()))
    primal_ok = cert.residual <= options.tol_primal * norm_m
    dual_ok = isinstance(dual, DualCertificate)
    diag = {"primal_residual": cert.residual, "primal_tolerance": options.tol_primal * norm_m}
    if dual_ok:
        diag["dual_eigenvalue"] = dual.eigenvalue
        diag["dual_relative"] = dual.eigenvalue / float(np.linalg.norm(dual.kernel, 2))
    else:
        diag["dual_lower_bound"] = dual.lower_bound
        diag["dual_best_relative"] = dual.best_eigenvalue
    if primal_ok and dual_ok:
        diag["contradiction"] = True
        return Indeterminate(diag)
    if primal_ok:
        return Feasible(cert, diag)
    if dual_ok:
        return Infeasible(dual, diag)
    return Indeterminate(diag)
