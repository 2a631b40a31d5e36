"""How often the pessimistic estimator starts below 1, by seed source and instance shape.

    python3 scripts/hitting_estimator.py --instances 200
"""

import argparse

import numpy as np

from cliquespan.hitting import HittingSetInstance, derandomized_hitting_set


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'sets':>5} {'source':>12} {'psi<1':>6} {'hit':>5} {'mean|Z|/U':>10}")
    for n_sets in (1, 4, 16, 64):
        for source in ("dwise", "independent"):
            below = hits = 0
            frac = []
            for _ in range(args.instances):
                U = int(rng.integers(32, 257))
                delta = int(rng.integers(8, U + 1))
                sets = {j: rng.choice(U, delta, replace=False).tolist() for j in range(n_sets)}
                inst = HittingSetInstance.build(range(U), sets, delta)
                res = derandomized_hitting_set(inst, d=8, source=source, strict=False)
                below += res.initial_psi < 1
                hits += not inst.missed_by(res.z)
                frac.append(len(res.z) / U)
            print(f"{n_sets:>5} {source:>12} {below:>6} {hits:>5} {np.mean(frac):>10.3f}")


if __name__ == "__main__":
    main()
