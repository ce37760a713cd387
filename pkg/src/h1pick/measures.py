"""Discrete measures on the unit circle and their extreme zero-mean components.

A zero-mean probability measure on the circle is extreme (in the cone of
positive zero-mean measures) exactly when it sits on an antipodal pair with
equal weights, or on three points whose triangle strictly contains the origin
with the barycentric coordinates of the origin as weights.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._tol import ANGLE_TOL, BARY_TOL, MEAN_TOL, TWO_PI
from .errors import DegenerateTriangle, NotZeroMeanProbability, NumericalStall

__all__ = [
    "UnitCirclePoint",
    "DiscreteCircleMeasure",
    "ExtremeMeasure",
    "make_diameter",
    "make_triangle",
    "mean",
    "is_extreme",
    "caratheodory_decompose",
    "barycentric_origin",
    "reconstruct",
    "random_zero_mean_measure",
    "angle_distance",
    "as_extreme",
]


def _wrap(angle):
    a = np.mod(np.asarray(angle, dtype=float), TWO_PI)
    # mod can return exactly 2π for tiny negative inputs
    return np.where(a >= TWO_PI, 0.0, a)


def angle_distance(a, b):
    """Distance between angles on the circle, in [0, π]."""
    d = np.abs(_wrap(np.asarray(a) - np.asarray(b)))
    return np.minimum(d, TWO_PI - d)


@dataclass(frozen=True)
class UnitCirclePoint:
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", float(_wrap(self.angle)))

    @property
    def value(self) -> complex:
        return complex(np.exp(1j * self.angle))

    def __eq__(self, other):
        if not isinstance(other, UnitCirclePoint):
            return NotImplemented
        return bool(angle_distance(self.angle, other.angle) <= ANGLE_TOL)

    def __hash__(self):
        return hash(round(self.angle, 6))


def _as_angle(p) -> float:
    if isinstance(p, UnitCirclePoint):
        return p.angle
    return float(_wrap(p))


class DiscreteCircleMeasure:
    """Finitely supported positive measure on the unit circle.

    Atoms are stored sorted by angle in ``[0, 2π)``; atoms closer than
    ``angle_tol`` are merged with their masses added.
    """

    def __init__(self, angles, masses, *, angle_tol: float = ANGLE_TOL):
        angles = _wrap(np.atleast_1d(np.asarray(angles, dtype=float)))
        masses = np.atleast_1d(np.asarray(masses, dtype=float))
        if angles.shape != masses.shape or angles.ndim != 1:
            raise ValueError("angles and masses must be 1-d arrays of equal length")
        if np.any(masses < 0) or not np.all(np.isfinite(masses)):
            raise ValueError("masses must be finite and nonnegative")
        order = np.argsort(angles, kind="stable")
        angles, masses = angles[order], masses[order]
        merged_a: list[float] = []
        merged_m: list[float] = []
        for a, m in zip(angles, masses):
            if merged_a and a - merged_a[-1] < angle_tol:
                merged_m[-1] += m
            else:
                merged_a.append(float(a))
                merged_m.append(float(m))
        # wrap-around: last atom close to 2π merges into the atom at ~0
        if len(merged_a) > 1 and TWO_PI - merged_a[-1] + merged_a[0] < angle_tol:
            merged_m[0] += merged_m.pop()
            merged_a.pop()
        self._angles = np.array(merged_a)
        self._masses = np.array(merged_m)
        self._angles.setflags(write=False)
        self._masses.setflags(write=False)

    @classmethod
    def from_atoms(cls, atoms) -> "DiscreteCircleMeasure":
        """Build from an iterable of ``(point, mass)`` pairs."""
        atoms = list(atoms)
        return cls([_as_angle(p) for p, _ in atoms], [m for _, m in atoms])

    @property
    def angles(self) -> np.ndarray:
        return self._angles

    @property
    def masses(self) -> np.ndarray:
        return self._masses

    @property
    def points(self) -> np.ndarray:
        return np.exp(1j * self._angles)

    @property
    def atoms(self) -> list[tuple[UnitCirclePoint, float]]:
        return [(UnitCirclePoint(a), float(m)) for a, m in zip(self._angles, self._masses)]

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self._masses > 0))

    @property
    def total_mass(self) -> float:
        return float(self._masses.sum())

    def mean(self) -> complex:
        return complex(np.sum(self._masses * self.points))

    def is_zero_mean_probability(self, tol: float = MEAN_TOL) -> bool:
        return abs(self.total_mass - 1.0) <= tol and abs(self.mean()) <= tol

    def mass_at(self, angles) -> np.ndarray:
        """Mass of the atom at each requested angle (0 where there is none)."""
        angles = np.atleast_1d(_wrap(angles))
        out = np.zeros(angles.shape)
        for i, a in enumerate(angles):
            hit = angle_distance(self._angles, a) <= ANGLE_TOL
            out[i] = self._masses[hit].sum()
        return out

    def total_variation(self, other: "DiscreteCircleMeasure") -> float:
        """Total-variation distance ``Σ |m_self - m_other|`` over the joint support."""
        joint = np.concatenate([self._angles, other._angles])
        joint = DiscreteCircleMeasure(joint, np.zeros_like(joint)).angles
        return float(np.abs(self.mass_at(joint) - other.mass_at(joint)).sum())

    def same_support(self, other: "DiscreteCircleMeasure", tol: float = ANGLE_TOL) -> bool:
        a = self._angles[self._masses > 0]
        b = other._angles[other._masses > 0]
        if a.size != b.size:
            return False
        return all(np.min(angle_distance(b, x)) <= tol for x in a)

    def to_dict(self) -> dict:
        return {"atoms": [{"angle": float(a), "mass": float(m)}
                          for a, m in zip(self._angles, self._masses)]}

    @classmethod
    def from_dict(cls, data: dict) -> "DiscreteCircleMeasure":
        atoms = data["atoms"]
        return cls([float(a["angle"]) for a in atoms], [float(a["mass"]) for a in atoms])

    def __len__(self):
        return self._angles.size

    def __eq__(self, other):
        if not isinstance(other, DiscreteCircleMeasure):
            return NotImplemented
        return (len(self) == len(other)
                and bool(np.all(self._angles == other._angles))
                and bool(np.all(self._masses == other._masses)))

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"({a:.6g}, {m:.6g})" for a, m in zip(self._angles, self._masses))
        return f"{type(self).__name__}([{body}])"


class ExtremeMeasure(DiscreteCircleMeasure):
    """Extreme zero-mean probability measure: a diameter or a 0-interior triangle.

    Use :func:`make_diameter` / :func:`make_triangle` rather than the
    constructor.
    """

    def __init__(self, kind: str, angles, weights):
        if kind not in ("diameter", "triangle"):
            raise ValueError(f"unknown extreme-measure kind {kind!r}")
        super().__init__(angles, weights)
        expected = 2 if kind == "diameter" else 3
        if len(self) != expected:
            raise ValueError(f"{kind} needs {expected} distinct points, got {len(self)}")
        self.kind = kind

    @property
    def is_diameter(self) -> bool:
        return self.kind == "diameter"

    @property
    def axis_angle(self) -> float:
        if not self.is_diameter:
            raise AttributeError("only diameters have an axis angle")
        return float(self.angles[0])

    @property
    def vertices(self) -> list[UnitCirclePoint]:
        return [UnitCirclePoint(a) for a in self.angles]

    @property
    def weights(self) -> np.ndarray:
        return self.masses

    @property
    def points(self) -> np.ndarray:
        if self.is_diameter:
            # exact antipodes, so the mean vanishes exactly
            p = np.exp(1j * self.angles[0])
            return np.array([p, -p])
        return super().points

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["kind"] = self.kind
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ExtremeMeasure":
        return as_extreme(DiscreteCircleMeasure.from_dict(data))

    def __repr__(self):
        return f"ExtremeMeasure({self.kind}, angles={np.round(self.angles, 6).tolist()})"


def make_diameter(axis_angle: float) -> ExtremeMeasure:
    """Equal-weight measure on the antipodal pair ``{e^{iα}, -e^{iα}}``."""
    a = float(_wrap(axis_angle))
    return ExtremeMeasure("diameter", [a, a + np.pi], [0.5, 0.5])


def barycentric_origin(p1: complex, p2: complex, p3: complex) -> np.ndarray:
    """Barycentric coordinates of 0 in the triangle ``p1 p2 p3``.

    Solves ``Σ w_j p_j = 0, Σ w_j = 1`` as a 2×2 real system after
    eliminating ``w3``.
    """
    a = np.array([[p1.real - p3.real, p2.real - p3.real],
                  [p1.imag - p3.imag, p2.imag - p3.imag]])
    b = -np.array([p3.real, p3.imag])
    w12 = np.linalg.solve(a, b)
    return np.array([w12[0], w12[1], 1.0 - w12[0] - w12[1]])


def make_triangle(p1, p2, p3, *, interior_tol: float = BARY_TOL) -> ExtremeMeasure:
    """Extreme measure on three circle points with the origin strictly inside.

    Points may be :class:`UnitCirclePoint` instances or angles in radians.
    Raises :class:`DegenerateTriangle` when any barycentric weight is at most
    ``interior_tol``.
    """
    angles = [_as_angle(p) for p in (p1, p2, p3)]
    if min(angle_distance(a, b) for a, b in itertools.combinations(angles, 2)) <= ANGLE_TOL:
        raise DegenerateTriangle("triangle vertices must be distinct")
    pts = [complex(np.exp(1j * a)) for a in angles]
    try:
        w = barycentric_origin(*pts)
    except np.linalg.LinAlgError as exc:
        raise DegenerateTriangle("collinear vertices") from exc
    if np.min(w) <= interior_tol:
        raise DegenerateTriangle(f"origin not strictly interior (weights {w})")
    return ExtremeMeasure("triangle", angles, w)


def mean(m: DiscreteCircleMeasure) -> complex:
    return m.mean()


def _check_zero_mean_probability(m: DiscreteCircleMeasure, tol: float) -> None:
    if not m.is_zero_mean_probability(tol):
        raise NotZeroMeanProbability(
            f"total mass {m.total_mass!r}, mean {m.mean()!r} (tolerance {tol})")


def is_extreme(m: DiscreteCircleMeasure, tol: float = MEAN_TOL) -> bool:
    """Whether ``m`` is an extreme zero-mean probability measure."""
    _check_zero_mean_probability(m, tol)
    keep = m.masses > 0
    angles, masses = m.angles[keep], m.masses[keep]
    if angles.size == 2:
        antipodal = abs(angle_distance(angles[0], angles[1]) - np.pi) <= ANGLE_TOL
        return bool(antipodal and np.all(np.abs(masses - 0.5) <= tol))
    if angles.size == 3:
        pts = np.exp(1j * angles)
        try:
            w = barycentric_origin(*pts)
        except np.linalg.LinAlgError:
            return False
        return bool(np.min(w) > BARY_TOL and np.all(np.abs(w - masses) <= tol))
    return False


def as_extreme(m: DiscreteCircleMeasure) -> ExtremeMeasure:
    """Re-type a measure that passes :func:`is_extreme` as an ExtremeMeasure."""
    if isinstance(m, ExtremeMeasure):
        return m
    if not is_extreme(m):
        raise ValueError("measure is not an extreme zero-mean probability measure")
    keep = m.masses > 0
    angles = m.angles[keep]
    if angles.size == 2:
        return make_diameter(angles[0])
    return make_triangle(*angles)


def _triple_candidates(pts: np.ndarray):
    """All index triples whose triangle strictly contains 0, with barycentric weights."""
    n = pts.size
    if n < 3:
        return np.empty((0, 3), dtype=int), np.empty((0, 3))
    idx = np.array(list(itertools.combinations(range(n), 3)))
    p = pts[idx]
    # signed double-areas of the sub-triangles (0, p_j, p_k)
    cross = lambda u, v: (np.conj(u) * v).imag  # noqa: E731
    s = np.stack([cross(p[:, 1], p[:, 2]), cross(p[:, 2], p[:, 0]), cross(p[:, 0], p[:, 1])], axis=1)
    total = s.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = s / total
    ok = np.all(w > BARY_TOL, axis=1) & (np.abs(total[:, 0]) > 0)
    return idx[ok], w[ok]


def caratheodory_decompose(m: DiscreteCircleMeasure, tol: float = MEAN_TOL,
                           drop_tol: float = 1e-14):
    """Greedy decomposition of a zero-mean probability measure into extreme parts.

    Each step enumerates every antipodal pair and every 0-interior triangle in
    the residual support and extracts the candidate admitting the largest
    coefficient ``t = min_j residual_j / weight_j``; that zeroes at least one
    atom, so the loop ends after at most ``n - 1`` steps.

    Returns
    -------
    list of (float, ExtremeMeasure)
        Positive coefficients and extreme components; the coefficients sum to
        the total mass and ``Σ t_k μ_k`` reproduces ``m``.
    """
    _check_zero_mean_probability(m, tol)
    angles = m.angles.copy()
    residual = m.masses.copy()
    pts = np.exp(1j * angles)
    out: list[tuple[float, ExtremeMeasure]] = []
    residual[residual <= drop_tol] = 0.0
    support = int(np.count_nonzero(residual))
    while support > 0:
        live = np.flatnonzero(residual > 0)
        best_t, best = -1.0, None
        # antipodal pairs
        ia, ib = np.triu_indices(live.size, 1)
        a, b = live[ia], live[ib]
        pairs = np.abs(angle_distance(angles[a], angles[b]) - np.pi) <= ANGLE_TOL
        if np.any(pairs):
            t_pair = 2.0 * np.minimum(residual[a], residual[b])
            t_pair[~pairs] = -1.0
            k = int(np.argmax(t_pair))
            best_t, best = float(t_pair[k]), ("diameter", np.array([a[k], b[k]]), np.array([0.5, 0.5]))
        tri_idx, tri_w = _triple_candidates(pts[live])
        if tri_idx.size:
            tri_idx = live[tri_idx]
            t_all = np.min(residual[tri_idx] / tri_w, axis=1)
            k = int(np.argmax(t_all))
            if t_all[k] > best_t:
                best_t, best = float(t_all[k]), ("triangle", tri_idx[k], tri_w[k])
        if best is None:
            if residual.sum() <= 10 * drop_tol * max(1, support):
                break
            raise NumericalStall(
                f"no extreme component fits the residual on {support} atoms "
                f"(residual mass {residual.sum():.3e})")
        kind, idx, w = best
        if kind == "diameter":
            comp = make_diameter(angles[idx[0]])
        else:
            comp = ExtremeMeasure("triangle", angles[idx], w)
        residual[idx] -= best_t * w
        # the limiting atom is zero by construction; remove rounding debris
        residual[idx[np.argmin(residual[idx])]] = 0.0
        residual[residual <= drop_tol] = 0.0
        out.append((best_t, comp))
        new_support = int(np.count_nonzero(residual))
        assert new_support < support, "greedy extraction failed to shrink the support"
        support = new_support
    return out


def reconstruct(components) -> DiscreteCircleMeasure:
    """Sum ``Σ t_k μ_k`` of a component list back into a single measure."""
    angles = np.concatenate([c.angles for _, c in components])
    masses = np.concatenate([t * c.masses for t, c in components])
    return DiscreteCircleMeasure(angles, masses)


def random_zero_mean_measure(rng: np.random.Generator, n: int) -> DiscreteCircleMeasure:
    """Random zero-mean probability measure on ``n`` random circle points.

    Draws positive masses, then recenters with a nonnegative correction on
    the same support (found by NNLS), so every atom keeps positive mass.
    """
    from scipy.optimize import nnls

    if n < 2:
        raise ValueError("need at least two atoms")
    while True:
        angles = rng.uniform(0.0, TWO_PI, n)
        if n == 2:
            angles[1] = angles[0] + np.pi
        pts = np.exp(1j * angles)
        masses = rng.uniform(0.2, 1.0, n)
        c = np.sum(masses * pts)
        a = np.vstack([pts.real, pts.imag])
        q, res = nnls(a, -np.array([c.real, c.imag]))
        if res > 1e-12:
            continue  # origin outside the hull of the sampled points
        masses = masses + q
        masses /= masses.sum()
        # polish the mean with the same nonnegative correction
        c = np.sum(masses * pts)
        q, _ = nnls(a, -np.array([c.real, c.imag]))
        masses = (masses + q) / (masses + q).sum()
        mu = DiscreteCircleMeasure(angles, masses)
        if len(mu) == n and abs(mu.mean()) <= 1e-13:
            return mu
