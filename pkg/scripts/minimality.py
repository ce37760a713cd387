"""Residual table for the ψ_θ₀ problem with a chart-ball around θ₀ removed.

Example::

    python scripts/minimality.py --theta0 0.4 2.3 4.2 --grids 128 512 2048 4096
"""
import argparse
import warnings

from h1pick import IterationCapExceeded, make_triangle, minimality_experiment


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--theta0", type=float, nargs=3, default=[0.4, 2.3, 4.2],
                        metavar=("A1", "A2", "A3"), help="vertex angles of θ₀")
    parser.add_argument("--radius", type=float, default=0.1)
    parser.add_argument("--grids", type=int, nargs="+", default=[128, 512, 2048])
    parser.add_argument("--with-dual", action="store_true")
    args = parser.parse_args(argv)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IterationCapExceeded)
        res = minimality_experiment(make_triangle(*args.theta0), args.radius, args.grids,
                                    with_dual=args.with_dual)
    print(res.to_csv(), end="")
    print(f"# floor={res.floor!r} control={res.control_residual!r}")


if __name__ == "__main__":
    main()
