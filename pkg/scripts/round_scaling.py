"""Total rounds of the randomized spanner against ceil(log2 k), with the Baswana-Sen baseline.

    python3 scripts/round_scaling.py --n 512 --p 0.05 --k 6,8,16,32,64
"""

import argparse
import math

import numpy as np

from cliquespan.graph import generate
from cliquespan.spanners import baswana_sen, deterministic_spanner, randomized_spanner


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=512)
    ap.add_argument("--p", type=float, default=0.05)
    ap.add_argument("--k", default="6,8,16,32")
    ap.add_argument("--seed", type=int, default=4)
    args = ap.parse_args(argv)
    ks = [int(k) for k in args.k.split(",")]
    g = generate("gnp", {"n": args.n, "p": args.p}, rng_seed=args.seed)
    print(f"gnp n={g.n} m={g.m}")
    print(f"{'k':>4} {'log2k':>5} {'randomized':>10} {'deterministic':>13} {'baswana-sen':>11}")
    xs, ys = [], []
    for k in ks:
        r = randomized_spanner(g, k, rng_seed=args.seed, verify=False)[1].total_rounds
        d = deterministic_spanner(g, k, verify=False)[1].total_rounds
        b = baswana_sen(g, k, rng_seed=args.seed, verify=False)[1].total_rounds
        xs.append(math.ceil(math.log2(k)))
        ys.append(r)
        print(f"{k:>4} {xs[-1]:>5} {r:>10} {d:>13} {b:>11}")
    if len(set(xs)) > 1:
        b, a = np.polyfit(xs, ys, 1)
        resid = np.max(np.abs(np.array(ys) - (a + b * np.array(xs))))
        print(f"randomized rounds ~ {a:.3g} + {b:.3g} * ceil(log2 k), max residual {resid:.3g}")


if __name__ == "__main__":
    main()
