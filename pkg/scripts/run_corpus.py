"""Run one or more algorithms over the standard corpus and write a CSV of reports.

    python3 scripts/run_corpus.py --algo deterministic,ok --k 6,8,10 --out corpus.csv
"""

import argparse
import csv
import sys
import time

from cliquespan.corpus import standard_corpus
from cliquespan.spanners import CSV_COLUMNS, run_algorithm
from cliquespan.verify import linear_envelope, polylog_envelope


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algo", default="randomized,deterministic,ok")
    ap.add_argument("--k", default="6,8,10")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--limit", type=int, default=None, help="only the first N corpus graphs")
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)
    algos = args.algo.split(",")
    ks = [int(k) for k in args.k.split(",")]
    entries = standard_corpus()[: args.limit]
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh)
    w.writerow(("graph",) + CSV_COLUMNS + ("size_constant", "seconds"))
    failures = 0
    for e in entries:
        g = e.build()
        for algo in algos:
            for k in ks:
                t0 = time.perf_counter()
                _, rep = run_algorithm(g, algo, k, rng_seed=args.seed)
                env = linear_envelope(g.n, k) if algo == "ok" else polylog_envelope(g.n, k)
                failures += not rep.success
                w.writerow([e.name] + rep.csv_row().split(",") + [f"{rep.edges / env:.6g}", f"{time.perf_counter() - t0:.3g}"])
                fh.flush()
    if fh is not sys.stdout:
        fh.close()
    print(f"{failures} failed run(s)", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
