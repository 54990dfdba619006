"""Column-sum bounds of (root)^(mn) as m grows.

The bounds bracket lambda_m^n; they settle on a fixed interval once the
necklace is long enough that every column sees the same local pattern.
"""

import argparse

from l1roots.curve_model import NecklaceConfig
from l1roots.twist_algebra import necklace_root_matrix


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--r", type=int, default=1)
    parser.add_argument("--N", type=int, default=1)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--m-max", type=int, default=8)
    args = parser.parse_args()

    for m in range(2, args.m_max + 1):
        cfg = NecklaceConfig(m, args.n)
        # carrying orientation, as in the sweep
        power = (necklace_root_matrix(cfg, args.r, args.N) ** (m * args.n)).T
        sums = power.column_sums()
        print(f"m={m:2d} dim={power.dim:4d} column sums in [{min(sums)}, {max(sums)}]")


if __name__ == "__main__":
    main()
