"""Szegő and differentiating kernels on the disc, paired with polynomials in H².

Everything here works through Taylor coefficients: a polynomial stands in for
an element of H², and the H² inner product of two power series is
``Σ a_m conj(b_m)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from ._tol import POLE_TOL
from .errors import PoleOnBoundary

__all__ = [
    "DiscPoint",
    "DifferentiatingKernel",
    "ComplexPolynomial",
    "szego",
    "diff_kernel_eval",
    "pair",
    "kernel_inner",
    "adjoint_leibniz_residual",
]


@dataclass(frozen=True)
class DiscPoint:
    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not abs(v) < 1:
            raise ValueError(f"|{v}| >= 1: not in the open disc")
        object.__setattr__(self, "value", v)

    def __complex__(self):
        return self.value


@dataclass(frozen=True)
class DifferentiatingKernel:
    """``k_{x^(n)}(y) = n! yⁿ / (1 - x̄ y)^{n+1}``; order 0 is the Szegő kernel."""

    base: DiscPoint
    order: int = 0

    def __post_init__(self):
        if not isinstance(self.base, DiscPoint):
            object.__setattr__(self, "base", DiscPoint(self.base))
        if self.order < 0:
            raise ValueError("order must be nonnegative")

    def __call__(self, y):
        return diff_kernel_eval(self, y)

    def coefficients(self, degree: int) -> np.ndarray:
        """Taylor coefficients up to ``degree``: ``m!/(m-n)! x̄^{m-n}`` for ``m ≥ n``."""
        n, xb = self.order, np.conj(self.base.value)
        c = np.zeros(degree + 1, dtype=complex)
        for m in range(n, degree + 1):
            c[m] = factorial(m) // factorial(m - n) * xb ** (m - n)
        return c


class ComplexPolynomial:
    """Polynomial ``Σ c_m z^m`` with coefficients in increasing power order."""

    def __init__(self, coefficients):
        c = np.atleast_1d(np.asarray(coefficients, dtype=complex))
        nz = np.flatnonzero(c)
        self.coefficients = c[: nz[-1] + 1].copy() if nz.size else np.zeros(0, dtype=complex)

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        return self.coefficients.size - 1

    def __call__(self, z):
        if self.coefficients.size == 0:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return np.polynomial.polynomial.polyval(z, self.coefficients)

    def __mul__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        if self.coefficients.size == 0 or other.coefficients.size == 0:
            return ComplexPolynomial([])
        return ComplexPolynomial(np.convolve(self.coefficients, other.coefficients))

    def derivative(self, n: int = 1) -> "ComplexPolynomial":
        if self.coefficients.size <= n:
            return ComplexPolynomial([])
        return ComplexPolynomial(np.polynomial.polynomial.polyder(self.coefficients, n))

    def to_list(self) -> list[list[float]]:
        return [[float(c.real), float(c.imag)] for c in self.coefficients]

    def __repr__(self):
        return f"ComplexPolynomial({self.coefficients.tolist()})"


def _check_pole(xbar_y) -> None:
    if np.any(np.abs(1 - np.asarray(xbar_y)) < POLE_TOL):
        raise PoleOnBoundary("1 - x̄y vanishes (kernel pole on the boundary)")


def szego(x, y):
    """Szegő kernel ``1 / (1 - x̄ y)``; broadcasts over arrays."""
    x = x.value if isinstance(x, DiscPoint) else x
    xy = np.conj(np.asarray(x, dtype=complex)) * np.asarray(y, dtype=complex)
    _check_pole(xy)
    return 1.0 / (1.0 - xy)


def diff_kernel_eval(k: DifferentiatingKernel, y):
    n, x = k.order, k.base.value
    y = np.asarray(y, dtype=complex)
    d = 1.0 - np.conj(x) * y
    _check_pole(1.0 - d)
    return factorial(n) * y**n / d ** (n + 1)


def pair(f: ComplexPolynomial, k: DifferentiatingKernel) -> complex:
    """H² inner product ``⟨f, k_{x^(n)}⟩``, which equals ``f^(n)(x)``."""
    n, x = k.order, k.base.value
    total = 0j
    for m in range(n, f.coefficients.size):
        total += f.coefficients[m] * (factorial(m) // factorial(m - n)) * x ** (m - n)
    return complex(total)


def kernel_inner(k1: DifferentiatingKernel, k2: DifferentiatingKernel) -> complex:
    """``⟨k_{x^(m)}, k_{y^(n)}⟩ = ∂^m_{x̄} ∂^n_y (1 - x̄y)^{-1}`` in closed form."""
    m, n = k1.order, k2.order
    u, v = np.conj(k1.base.value), k2.base.value
    d = 1.0 - u * v
    total = 0j
    for i in range(min(m, n) + 1):
        # Leibniz on u^n (1 - uv)^{-(n+1)}, differentiated m times in u
        coef = comb(m, i) * (factorial(n) // factorial(n - i)) * (factorial(n + m - i) // factorial(n))
        total += coef * u ** (n - i) * v ** (m - i) / d ** (n + 1 + m - i)
    return complex(factorial(n) * total)


def adjoint_leibniz_residual(f: ComplexPolynomial, g: ComplexPolynomial, x, n: int) -> float:
    """``|⟨g, M_f* k_{x^(n)}⟩/n! - Σ_{i=0}^n f^(i)(x)/i! · g^(n-i)(x)/(n-i)!|``.

    The left side pairs the product polynomial against ``k_{x^(n)}``; the right
    side pairs ``f`` and ``g`` separately.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = x if isinstance(x, DiscPoint) else DiscPoint(x)
    lhs = pair(f * g, DifferentiatingKernel(x, n)) / factorial(n)
    rhs = sum(pair(f, DifferentiatingKernel(x, i)) / factorial(i)
              * pair(g, DifferentiatingKernel(x, n - i)) / factorial(n - i)
              for i in range(n + 1))
    return float(abs(lhs - rhs))
