"""Randomized primal/dual/oracle cross-check, one CSV row per problem.

Example::

    python scripts/feasibility_suite.py --seeds 0:30 --grid 512 --out suite.csv
"""
import argparse
import csv
import sys
import time

from h1pick import (
    Found,
    ProblemConfig,
    SolverOptions,
    feasibility,
    feasible_problem,
    infeasible_problem,
    poly_oracle,
    theta_grid,
)


def _seed_range(text):
    lo, hi = (int(t) for t in text.split(":"))
    return range(lo, hi)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=_seed_range, default=range(0, 30), help="half-open LO:HI")
    parser.add_argument("--grid", type=int, default=512)
    parser.add_argument("--margin", type=float, default=ProblemConfig.margin)
    parser.add_argument("--out", default=None)
    args = parser.parse_args(argv)

    options = SolverOptions(grid_size=args.grid)
    grid = theta_grid(args.grid)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(out)
    writer.writerow(["seed", "nodes", "kind", "verdict", "primal_residual", "dual_relative",
                     "oracle", "scale", "seconds"])
    for seed in args.seeds:
        config = ProblemConfig(nodes=3 + seed % 3, margin=args.margin)
        for kind in ("feasible", "infeasible"):
            start = time.perf_counter()
            p = feasible_problem(seed, config) if kind == "feasible" else infeasible_problem(seed, config)
            r = feasibility(p, options, grid)
            oracle = ""
            if kind == "feasible":
                found = poly_oracle(p, config.oracle_degree, iterations=config.oracle_iterations)
                oracle = "Found" if isinstance(found, Found) else "NotFoundUpTo"
            writer.writerow([seed, p.n, kind, type(r).__name__,
                             repr(r.diagnostics["primal_residual"]),
                             repr(r.diagnostics.get("dual_relative", float("nan"))),
                             oracle, repr(p.diagnostics.get("scale", 1.0)),
                             f"{time.perf_counter() - start:.2f}"])
            out.flush()
    if args.out:
        out.close()


if __name__ == "__main__":
    main()
