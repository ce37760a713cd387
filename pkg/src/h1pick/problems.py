"""Test-problem generators and the Möbius normalization of targets."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TargetOnBoundaryOfMap
from .measures import random_zero_mean_measure
from .oracle import Found, poly_oracle
from .pick import PickProblem
from .testfn import MeasureFunction

__all__ = [
    "mobius_normalize",
    "mobius_restore",
    "mobius_identity_sides",
    "random_ball_function",
    "random_nodes",
    "ProblemConfig",
    "feasible_problem",
    "oracle_scale_bracket",
    "infeasible_problem",
]


def _mobius(w: np.ndarray, a: complex) -> np.ndarray:
    den = 1 - np.conj(a) * w
    if np.any(np.abs(den) < 1e-13):
        raise TargetOnBoundaryOfMap("1 - conj(a) w vanishes for some target")
    return (w - a) / den


def mobius_normalize(p: PickProblem, a: complex) -> PickProblem:
    """Targets mapped through ``w ↦ (w - a)/(1 - ā w)``; nodes unchanged."""
    if not abs(a) < 1:
        raise ValueError("need |a| < 1")
    return PickProblem(p.nodes.copy(), _mobius(p.targets, a))


def mobius_restore(p: PickProblem, a: complex) -> PickProblem:
    """Inverse of :func:`mobius_normalize`: ``w ↦ (w + a)/(1 + ā w)``."""
    if not abs(a) < 1:
        raise ValueError("need |a| < 1")
    return PickProblem(p.nodes.copy(), _mobius(p.targets, -a))


def mobius_identity_sides(x, y, a) -> tuple[complex, complex]:
    """Both sides of ``1 - φ(x) conj φ(y) = (1 - |a|²)(1 - x ȳ)/((1 - ā x)(1 - a ȳ))``.

    Here ``φ(t) = (t - a)/(1 - ā t)``; ``x``, ``y`` play the role of the
    target values.  This is why the map acts on Pick matrices by a diagonal
    congruence.
    """
    phi = lambda t: (t - a) / (1 - np.conj(a) * t)  # noqa: E731
    lhs = 1 - phi(x) * np.conj(phi(y))
    rhs = (1 - abs(a) ** 2) * (1 - x * np.conj(y)) / ((1 - np.conj(a) * x) * (1 - a * np.conj(y)))
    return complex(lhs), complex(rhs)


def random_ball_function(seed, atoms: int) -> MeasureFunction:
    """``ψ = (h - 1)/(h + 1)`` for a random zero-mean probability measure on ``atoms`` points.

    ``ψ`` is inner with ``ψ(0) = ψ'(0) = 0``; two atoms give an antipodal pair.
    """
    if atoms < 2:
        raise ValueError("need at least two atoms")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return MeasureFunction(random_zero_mean_measure(rng, atoms))


def random_nodes(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    """``n`` points uniform (by area) in the disc of the given radius."""
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))


@dataclass
class ProblemConfig:
    """Shape of the randomized feasibility suite."""

    nodes: int = 4
    atoms: int = 10
    radius: float = 0.75
    margin: float = 0.25
    oracle_degree: int = 64
    bisection_steps: int = 8
    oracle_iterations: int = 10000


def feasible_problem(seed: int, config: ProblemConfig = ProblemConfig()) -> PickProblem:
    """Targets ``f(z_i)`` of a random inner ``f`` in the H∞₁ ball."""
    rng = np.random.default_rng(seed)
    f = random_ball_function(rng, config.atoms)
    z = random_nodes(rng, config.nodes, config.radius)
    return PickProblem(z, f(z), {"seed": seed})


def oracle_scale_bracket(p: PickProblem, config: ProblemConfig = ProblemConfig()) -> tuple[float, float]:
    """Bisection on ``t`` for oracle-feasibility of the targets ``t w``.

    Returns ``(lo, hi)`` with an oracle witness at ``lo`` and none at ``hi``.
    ``lo`` is only a lower estimate of the true threshold: failing to find a
    polynomial does not prove infeasibility.
    """
    degree = config.oracle_degree
    found = lambda t: isinstance(  # noqa: E731
        poly_oracle(PickProblem(p.nodes, t * p.targets), degree,
                    iterations=config.oracle_iterations), Found)
    lo, hi = 0.0, 1.0
    while found(hi):
        lo, hi = hi, 2 * hi
    for _ in range(config.bisection_steps):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if found(mid) else (lo, mid)
    return lo, hi


def infeasible_problem(seed: int, config: ProblemConfig = ProblemConfig()) -> PickProblem:
    """A feasible problem pushed past the oracle threshold by ``1 + margin``."""
    p = feasible_problem(seed, config)
    lo, hi = oracle_scale_bracket(p, config)
    scale = hi * (1 + config.margin)
    return PickProblem(p.nodes, scale * p.targets,
                       {"seed": seed, "bracket": (lo, hi), "scale": scale})
