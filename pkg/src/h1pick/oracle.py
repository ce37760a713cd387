"""Polynomial interpolants in the H∞₁ unit ball, found by convex feasibility.

Independent of the test-function machinery: it searches directly for a
polynomial ``p(z) = Σ_{k≤N} c_k z^k`` with ``c_1 = 0``, ``p(z_i) = w_i`` and
``|p| ≤ 1`` on the circle.  A hit is a constructive feasibility witness.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .kernels import ComplexPolynomial
from .pick import PickProblem

__all__ = ["Found", "NotFoundUpTo", "OracleResult", "poly_oracle", "boundary_supnorm"]


@dataclass
class Found:
    coefficients: ComplexPolynomial
    boundary_supnorm: float

    def to_dict(self) -> dict:
        return {"coefficients": self.coefficients.to_list(), "supnorm": float(self.boundary_supnorm)}


@dataclass
class NotFoundUpTo:
    degree: int
    gap: float

    def to_dict(self) -> dict:
        return {"degree": self.degree, "gap": float(self.gap)}


OracleResult = Found | NotFoundUpTo


def _values(coeffs: np.ndarray, samples: int) -> np.ndarray:
    full = np.zeros(samples, dtype=complex)
    full[: coeffs.size] = coeffs
    return np.fft.ifft(full) * samples


def boundary_supnorm(coeffs, samples: int, refine: int = 4) -> float:
    """``max |p(e^{it})|`` from equispaced samples, refined near the top few peaks."""
    coeffs = np.asarray(coeffs, dtype=complex)
    vals = np.abs(_values(coeffs, samples))
    best = float(vals.max())
    step = 2 * np.pi / samples
    for k in np.argsort(vals)[-refine:]:
        t0 = k * step
        res = minimize_scalar(lambda t: -abs(np.polyval(coeffs[::-1], np.exp(1j * t))),
                              bounds=(t0 - step, t0 + step), method="bounded",
                              options={"xatol": 1e-12})
        best = max(best, float(-res.fun))
    return best


def poly_oracle(p: PickProblem, degree: int, boundary_samples: int | None = None,
                tol: float = 1e-6, iterations: int = 20000, check_every: int = 25) -> OracleResult:
    """Douglas-Rachford search over boundary values of degree-``N`` polynomials.

    The two sets are the (affine) values of polynomials with ``c_1 = 0``
    interpolating the data, and values of modulus at most one.  Because the
    sample map ``c ↦ p(e^{2πik/M})`` is ``√M`` times an isometry, projecting
    onto the affine set is a least-norm coefficient correction.  Every
    ``check_every`` iterations the interpolating iterate is checked on a 4×
    denser circle grid with refinement near its maxima.
    """
    n = p.n
    if degree < n + 2:
        raise ValueError("degree must be at least n + 2")
    samples = boundary_samples or 8 * degree
    if samples < 8 * degree:
        raise ValueError("need at least 8 boundary samples per degree")
    if n and np.max(np.abs(p.targets)) > 1 + tol:
        return NotFoundUpTo(degree, float(np.max(np.abs(p.targets)) - 1))

    powers = np.arange(degree + 1)
    rows = np.zeros((n + 1, degree + 1), dtype=complex)
    rows[:n] = p.nodes[:, None] ** powers[None, :]
    rows[:n, 1] = 0.0
    rows[n, 1] = 1.0
    rhs = np.concatenate([p.targets, [0.0]])
    solve = np.linalg.pinv(rows)
    project = np.eye(degree + 1) - solve @ rows
    offset = solve @ rhs

    def affine(c):
        return project @ c + offset

    def to_coeffs(u):
        return np.fft.fft(u)[: degree + 1] / samples

    def onto_affine(u):
        return _values(affine(to_coeffs(u)), samples)

    def onto_disc(u):
        mod = np.abs(u)
        return np.where(mod > 1, u / np.maximum(mod, 1e-300), u)

    x = onto_affine(np.zeros(samples, dtype=complex))
    gap = np.inf
    for k in range(iterations):
        pb = onto_disc(x)
        pa = onto_affine(2 * pb - x)
        x = x + pa - pb
        if k % check_every == 0 or k == iterations - 1:
            gap = float(np.linalg.norm(pa - pb) / np.sqrt(samples))
            c = affine(to_coeffs(pb))
            c[1] = 0.0
            if np.max(np.abs(_values(c, samples))) <= 1 + tol:
                sup = boundary_supnorm(c, 4 * samples)
                if sup <= 1 + tol:
                    return Found(ComplexPolynomial(c), sup)
    return NotFoundUpTo(degree, gap)
