"""Constrained Nevanlinna-Pick interpolation for bounded analytic functions with f'(0) = 0.

Extreme zero-mean circle measures give a family of rational inner test
functions; interpolation data is feasible exactly when its target kernel is
a sum of test-function deficiency kernels.  The package builds the measures
and test functions, solves the grid-restricted decomposition and its dual,
and cross-checks verdicts against a polynomial interpolation oracle.
"""
from . import agler, errors, experiments, kernels, measures, oracle, pick, problems, testfn
from .agler import *  # noqa: F401,F403
from .errors import *  # noqa: F401,F403
from .experiments import *  # noqa: F401,F403
from .kernels import *  # noqa: F401,F403
from .measures import *  # noqa: F401,F403
from .oracle import *  # noqa: F401,F403
from .pick import *  # noqa: F401,F403
from .problems import *  # noqa: F401,F403
from .testfn import *  # noqa: F401,F403

__version__ = "0.1.0"
