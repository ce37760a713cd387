"""Herglotz functions, test functions and the parameter sphere of extreme measures.

An extreme measure ``θ`` yields the Herglotz function
``h_θ(z) = Σ w_j (p_j + z)/(p_j - z)`` and the test function
``ψ_θ = (h_θ - 1)/(h_θ + 1)``, a Blaschke product of degree 2 (diameters) or
3 (triangles) with a double zero at the origin.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._tol import ANGLE_TOL, TWO_PI
from .errors import DegenerateTriangle, PoleAtOne, RootOnBoundary
from .kernels import DiscPoint
from .measures import (
    DiscreteCircleMeasure,
    ExtremeMeasure,
    angle_distance,
    make_diameter,
    make_triangle,
)

__all__ = [
    "HerglotzFunction",
    "BlaschkeForm",
    "TestFunction",
    "MeasureFunction",
    "herglotz_eval",
    "test_function",
    "third_zero",
    "cayley",
    "canonicalize",
    "equivalent",
    "theta_to_sphere",
    "sphere_to_theta",
    "fibonacci_sphere",
    "theta_grid",
    "CANONICAL_DIAMETER",
]

ROOT_TOL = 1e-9


class HerglotzFunction:
    """``h(z) = Σ_j m_j (p_j + z)/(p_j - z)`` for a discrete measure."""

    def __init__(self, measure: DiscreteCircleMeasure):
        self.measure = measure
        self._p = measure.points
        self._w = measure.masses

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        p = self._p.reshape((-1,) + (1,) * z.ndim)
        w = self._w.reshape(p.shape)
        return np.sum(w * (p + z) / (p - z), axis=0)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        p = self._p.reshape((-1,) + (1,) * z.ndim)
        w = self._w.reshape(p.shape)
        return np.sum(w * 2 * p / (p - z) ** 2, axis=0)


def herglotz_eval(h: HerglotzFunction, z):
    z = z.value if isinstance(z, DiscPoint) else z
    return h(z)


def cayley(z):
    """``(1 + z)/(1 - z)``: disc to right half-plane."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(1 - z) < 1e-15):
        raise PoleAtOne("cayley transform has a pole at z = 1")
    out = (1 + z) / (1 - z)
    return out[()] if out.ndim == 0 else out


class MeasureFunction:
    """``ψ = (h - 1)/(h + 1)`` for an arbitrary zero-mean probability measure.

    Written as ``ψ = z S / (1 + z S)`` with ``S(z) = Σ m_j/(p_j - z)`` so that
    ``ψ(0) = 0`` holds exactly.
    """

    def __init__(self, measure: DiscreteCircleMeasure):
        self.measure = measure
        self.herglotz = HerglotzFunction(measure)
        self._p = measure.points
        self._w = measure.masses

    def _s(self, z):
        p = self._p.reshape((-1,) + (1,) * z.ndim)
        w = self._w.reshape(p.shape)
        return np.sum(w / (p - z), axis=0)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        zs = z * self._s(z)
        return zs / (1 + zs)


@dataclass(frozen=True)
class BlaschkeForm:
    """``λ z² (z - a)/(1 - ā z)`` (with third zero ``a``) or ``λ z²``."""

    unimodular: complex
    third_zero: complex | None = None

    @property
    def degree(self) -> int:
        return 2 if self.third_zero is None else 3

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.unimodular * z * z
        if self.third_zero is not None:
            a = self.third_zero
            out = out * (z - a) / (1 - np.conj(a) * z)
        return out

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        lam = self.unimodular
        if self.third_zero is None:
            return 2 * lam * z
        a = self.third_zero
        d = 1 - np.conj(a) * z
        g = (z - a) / d
        dg = (1 - abs(a) ** 2) / d**2
        return lam * (2 * z * g + z * z * dg)


@dataclass(frozen=True, eq=False)
class TestFunction:
    """Rational inner test function of an extreme measure.

    Calling it evaluates the Blaschke form (valid on the closed disc);
    :meth:`rational` evaluates ``(h - 1)/(h + 1)`` directly.
    """

    __test__ = False  # not a pytest class

    source: ExtremeMeasure
    blaschke: BlaschkeForm

    def __call__(self, z):
        return self.blaschke(z)

    def rational(self, z):
        h = HerglotzFunction(self.source)(z)
        return (h - 1) / (h + 1)

    def derivative(self, z):
        return self.blaschke.derivative(z)

    @property
    def degree(self) -> int:
        return self.blaschke.degree


def _numerator_coeffs(m: DiscreteCircleMeasure) -> np.ndarray:
    """Coefficients (increasing powers) of ``Σ_j w_j Π_{k≠j} (p_k - z)``.

    ``h(z) - 1 = 2z Σ w_j/(p_j - z)``, so the nonzero roots of ``h - 1`` are
    the roots of this polynomial; its constant term vanishes for zero mean.
    """
    p, w = m.points, m.masses
    total = np.zeros(len(p), dtype=complex)
    for j in range(len(p)):
        prod = np.ones(1, dtype=complex)
        for k in range(len(p)):
            if k != j:
                prod = np.convolve(prod, [p[k], -1.0])
        total += w[j] * prod
    return total


def third_zero(m: ExtremeMeasure) -> complex:
    """Zero of ``ψ_θ`` other than the double zero at the origin (triangles only)."""
    if m.is_diameter:
        raise ValueError("diameters have no third zero")
    c0, c1, c2 = _numerator_coeffs(m)
    # c0 = conj(mean)·p1p2p3 = 0, so the quadratic factors as z (c2 z + c1)
    a = complex(-c1 / c2)
    if abs(a) >= 1 - ROOT_TOL:
        raise RootOnBoundary(f"third zero {a} is not inside the disc")
    return a


def _blaschke_for(m: ExtremeMeasure) -> BlaschkeForm:
    p1 = m.points[0]  # smallest angle
    if m.is_diameter:
        return BlaschkeForm(complex(np.conj(p1) ** 2), None)
    a = third_zero(m)
    raw = p1 * p1 * (p1 - a) / (1 - np.conj(a) * p1)
    lam = 1.0 / raw
    return BlaschkeForm(complex(lam / abs(lam)), a)


def test_function(m: ExtremeMeasure) -> TestFunction:
    return TestFunction(m, _blaschke_for(m))


test_function.__test__ = False


def _unimodular_solutions(psi: TestFunction, c: complex) -> np.ndarray:
    """Angles of the boundary points where ``ψ(w) = c`` (|c| = 1)."""
    b = psi.blaschke
    lam = b.unimodular
    if b.third_zero is None:
        coeffs = [lam, 0.0, -c]  # λ w² - c
    else:
        a = b.third_zero
        coeffs = [lam, -lam * a, c * np.conj(a), -c]  # λ w²(w - a) - c (1 - ā w)
    roots = np.roots(coeffs)
    return np.mod(np.angle(roots), TWO_PI)


def canonicalize(m: ExtremeMeasure) -> ExtremeMeasure:
    """The ∼-equivalent extreme measure whose support contains −1."""
    if np.any(angle_distance(m.angles, np.pi) <= ANGLE_TOL):
        return m
    psi = test_function(m)
    c = complex(psi(-1.0))
    c /= abs(c)
    angles = _unimodular_solutions(psi, c)
    k = int(np.argmin(angle_distance(angles, np.pi)))
    angles[k] = np.pi
    if m.is_diameter:
        return make_diameter(np.pi)
    return make_triangle(*angles)


CANONICAL_DIAMETER = make_diameter(0.0)


def _grid16() -> np.ndarray:
    return 0.7 * np.exp(1j * (TWO_PI * np.arange(16) / 16 + 0.1))


def equivalent(m1: ExtremeMeasure, m2: ExtremeMeasure, tol: float = 1e-9) -> bool:
    """Whether ``ψ_{m1} = λ ψ_{m2}`` for some unimodular ``λ``."""
    if len(m1) != len(m2):
        return False
    z = _grid16()
    f1, f2 = test_function(m1)(z), test_function(m2)(z)
    ok = (np.abs(f1) > 1e-6) & (np.abs(f2) > 1e-6)
    r = f1[ok] / f2[ok]
    if r.size == 0:
        return False
    return bool(abs(abs(r[0]) - 1) <= tol and np.all(np.abs(r - r[0]) <= tol))


def _stereo(zeta: complex) -> np.ndarray:
    r2 = abs(zeta) ** 2
    return np.array([2 * zeta.real, 2 * zeta.imag, r2 - 1.0]) / (r2 + 1.0)


def theta_to_sphere(m: ExtremeMeasure) -> np.ndarray:
    """Chart of Θ onto the unit sphere; the diameter class goes to the north pole.

    A canonical triangle has vertices ``-1``, ``e^{iθ₂}`` with ``θ₂ ∈ (0, π)``
    and ``e^{iθ₃}`` with ``θ₃ ∈ (θ₂ - π, 0)``.  Each coordinate is rescaled to
    ``(0, 1)``, sent to the real line by ``tan(π(u - ½))`` and the resulting
    complex number is projected stereographically.
    """
    if m.is_diameter:
        return np.array([0.0, 0.0, 1.0])
    m = canonicalize(m)
    others = m.angles[angle_distance(m.angles, np.pi) > ANGLE_TOL]
    signed = np.where(others > np.pi, others - TWO_PI, others)
    t2, t3 = float(np.max(signed)), float(np.min(signed))
    u = t2 / np.pi
    v = (t3 - (t2 - np.pi)) / (np.pi - t2)
    zeta = complex(np.tan(np.pi * (u - 0.5)), np.tan(np.pi * (v - 0.5)))
    return _stereo(zeta)


def sphere_to_theta(s) -> ExtremeMeasure:
    """Inverse of :func:`theta_to_sphere`; returns the canonical representative."""
    s = np.asarray(s, dtype=float)
    s = s / np.linalg.norm(s)
    x, y, zc = s
    if 1.0 - zc <= 1e-15:
        return CANONICAL_DIAMETER
    # ζ = (x + iy)/(1 - z), computed via (1 + z)/(x - iy) near the pole
    zeta = complex(x, y) / (1.0 - zc) if zc < 0 else (1.0 + zc) / complex(x, -y)
    u = 0.5 + np.arctan(zeta.real) / np.pi
    v = 0.5 + np.arctan(zeta.imag) / np.pi
    t2 = np.pi * u
    t3 = t2 - np.pi + v * (np.pi - t2)
    try:
        return make_triangle(np.pi, t2, t3)
    except DegenerateTriangle:
        return CANONICAL_DIAMETER


def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` near-uniform points on S² (Fibonacci lattice), shape ``(n, 3)``."""
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    r = np.sqrt(1.0 - z * z)
    phi = np.pi * (3.0 - np.sqrt(5.0)) * k
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def theta_grid(n: int, include_diameter: bool = True) -> list[ExtremeMeasure]:
    """Extreme measures from a Fibonacci sampling of the parameter sphere."""
    grid = [sphere_to_theta(s) for s in fibonacci_sphere(n)]
    grid = [g for g in grid if not g.is_diameter]
    if include_diameter:
        grid.append(CANONICAL_DIAMETER)
    return grid
