"""Exclusion experiment: remove a chart-ball around one test function and re-solve.

The targets are ``ψ_θ₀(z_i)`` at fixed nodes.  With ``θ₀`` on the grid the
single atom ``Γ_θ₀ = 1 1*`` solves the problem exactly; with a neighbourhood
of ``θ₀`` removed the best grid residual should stay bounded away from zero
however fine the remaining grid is.
"""
from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field

import numpy as np

from .agler import DualCertificate, SolverOptions, agler_decompose, dual_search
from .errors import IterationCapExceeded
from .measures import ExtremeMeasure, make_triangle
from .pick import PickProblem
from .testfn import equivalent, test_function, theta_grid, theta_to_sphere

__all__ = [
    "DEFAULT_NODES",
    "MinimalityRow",
    "MinimalityResult",
    "excluded_grid",
    "minimality_experiment",
]

DEFAULT_NODES = np.array([0.3 + 0.1j, -0.25 + 0.35j, -0.1 - 0.45j, 0.5 - 0.3j])

_EQUILATERAL = make_triangle(np.pi, np.pi / 3, -np.pi / 3)


def excluded_grid(resolution: int, theta0: ExtremeMeasure, radius: float) -> tuple[list, int]:
    """Grid members at chart distance at least ``radius`` from ``θ₀``, and how many were dropped."""
    centre = theta_to_sphere(theta0)
    grid = theta_grid(resolution)
    keep = [m for m in grid if np.linalg.norm(theta_to_sphere(m) - centre) >= radius]
    return keep, len(grid) - len(keep)


@dataclass
class MinimalityRow:
    resolution: int
    grid_points: int
    excluded: int
    residual: float
    relative_residual: float
    dual_eigenvalue: float | None = None


@dataclass
class MinimalityResult:
    theta0: ExtremeMeasure
    exclusion_radius: float
    nodes: np.ndarray
    rows: list[MinimalityRow] = field(default_factory=list)
    control_residual: float = float("nan")

    @property
    def floor(self) -> float:
        """Smallest excluded-grid residual over the resolutions."""
        return min(r.residual for r in self.rows)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["resolution", "grid_points", "excluded", "residual",
                         "relative_residual", "dual_eigenvalue", "control_residual"])
        for r in self.rows:
            dual = "" if r.dual_eigenvalue is None else repr(float(r.dual_eigenvalue))
            writer.writerow([r.resolution, r.grid_points, r.excluded, repr(float(r.residual)),
                             repr(float(r.relative_residual)), dual,
                             repr(float(self.control_residual))])
        return out.getvalue()


def minimality_experiment(theta0: ExtremeMeasure, exclusion_radius: float = 0.1,
                          grid_resolutions=(128, 512, 2048), nodes=None,
                          options: SolverOptions | None = None,
                          with_dual: bool = False) -> MinimalityResult:
    """Residual of the ``ψ_θ₀`` problem on grids with a chart-ball around ``θ₀`` removed.

    Parameters
    ----------
    theta0
        A generic triangle (not the diameter, not the equilateral one).
    exclusion_radius
        Euclidean radius of the removed ball on the parameter sphere.
    grid_resolutions
        Fibonacci grid sizes before exclusion.
    nodes
        Interpolation nodes; four fixed generic points by default.
    with_dual
        Also run the cutting-plane dual and record its best eigenvalue.

    The control run uses the finest excluded grid with ``θ₀`` appended.
    """
    if theta0.is_diameter or equivalent(theta0, _EQUILATERAL):
        raise ValueError("theta0 must be a generic triangle")
    options = options or SolverOptions()
    z = DEFAULT_NODES if nodes is None else np.asarray(nodes, dtype=complex)
    p = PickProblem(z, test_function(theta0)(z))
    norm = float(np.linalg.norm(p.target_matrix()))
    result = MinimalityResult(theta0, exclusion_radius, z)
    keep: list = []
    for resolution in grid_resolutions:
        keep, dropped = excluded_grid(resolution, theta0, exclusion_radius)
        with warnings.catch_warnings():
            # an excluded grid is expected to leave a residual above tolerance
            warnings.simplefilter("ignore", IterationCapExceeded)
            cert = agler_decompose(p, keep, options)
        dual = None
        if with_dual:
            found = dual_search(p, keep, options)
            dual = found.eigenvalue if isinstance(found, DualCertificate) else found.best_eigenvalue
        result.rows.append(MinimalityRow(resolution, len(keep), dropped, cert.residual,
                                         cert.residual / norm, dual))
    result.control_residual = agler_decompose(p, keep + [theta0], options).residual
    return result
