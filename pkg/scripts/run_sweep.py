"""Run the convergence sweep and print a compact table.

    python scripts/run_sweep.py --m-max 12 --side stable --out results/stable.json
"""

import argparse

from l1roots.experiments import SweepConfig, derived_epsilon, reference_epsilon, run_sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--r", type=int, default=1)
    parser.add_argument("--N", type=int, default=1)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--m-min", type=int, default=2)
    parser.add_argument("--m-max", type=int, default=10)
    parser.add_argument("--side", choices=["unstable", "stable"], default="unstable")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", help="optional JSON report path")
    args = parser.parse_args()

    cfg = SweepConfig(r=args.r, N=args.N, n=args.n, m_min=args.m_min, m_max=args.m_max,
                      side=args.side, workers=args.workers)
    report = run_sweep(cfg)
    q = cfg.r * cfg.N
    print(f"base lambda {report.base_lambda:.12f}  vector {report.base_vector}")
    print(f"{'m':>3} {'lambda_m^n':>16} {'avg_gap':>10} {'max bdry':>10} "
          f"{'|eps|_1':>10} {'closed':>9} {'derived':>9}")
    for rec in report.records:
        eps = rec.epsilon_residual
        closed = max(abs(x - y) for x, y in zip(eps, reference_epsilon(rec.boundary_entries, q)))
        derived = max(abs(x - y) for x, y in zip(eps, derived_epsilon(rec.boundary_entries, q)))
        print(f"{rec.m:3d} {rec.lambda_m_pow_n:16.12f} {rec.avg_gap:10.3e} "
              f"{max(rec.boundary_entries):10.3e} {abs(eps[0]) + abs(eps[1]):10.3e} "
              f"{closed:9.1e} {derived:9.1e}")
    for key, value in report.observations.items():
        print(f"{key}: {value}")
    if args.out:
        report.write_json(args.out)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
