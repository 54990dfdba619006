"""Geometric-orbit relation on the Perron vector of the root matrix."""

import argparse

from l1roots.experiments import SweepConfig, geometric_orbit_check


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m-max", type=int, default=10)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--without-chi", action="store_true",
                        help="drop the chi factor to see the relation break")
    args = parser.parse_args()
    cfg = SweepConfig(n=args.n, m_max=args.m_max)
    for res in geometric_orbit_check(cfg, with_chi=not args.without_chi):
        print(f"m={res.m:2d} xi={res.xi:.12f} max rel error {res.max_rel_error:.2e} "
              f"{'ok' if res.holds else 'FAILS'}")


if __name__ == "__main__":
    main()
