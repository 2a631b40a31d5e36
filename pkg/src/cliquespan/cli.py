"""Command-line experiment runner.

Exit codes: 0 success, 1 audit failure or failed run, 2 configuration error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import HittingSetFailure, InputError, ParameterError, ResourceError, RoutingAdmissibilityError, SpannerError
from .graph import Graph, generate, oracle_limit, parse_generator, read_edge_list
from .hitting import BACKENDS, HittingSetInstance, audit_hitting, randomized_hitting_set, solve_hitting
from .spanners import ALGORITHMS, CSV_COLUMNS, SpannerReport, run_algorithm

EXIT_OK, EXIT_AUDIT, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3

_K_DOMAIN = {
    "randomized": lambda k: k >= 6,
    "deterministic": lambda k: k >= 6,
    "ok": lambda k: k >= 6,
    "baswana-sen": lambda k: k >= 1,
    "small-k": lambda k: 2 <= k <= 5,
}
_K_HINT = {
    "randomized": "k >= 6 (use small-k below 6)",
    "deterministic": "k >= 6 (use small-k below 6)",
    "ok": "k >= 6",
    "baswana-sen": "k >= 1",
    "small-k": "2 <= k <= 5",
}


@dataclass
class ExperimentConfig:
    algorithm: str
    k: int
    generator: str | None = None
    input_path: str | None = None
    backend: str | None = None
    rng_seed: int = 0
    output: str | None = None
    fmt: str = "csv"
    verify: bool = False
    routing_cost: int = 1
    oracle_limit: int = 5000

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InputError(f"unknown algorithm {self.algorithm!r}")
        if not _K_DOMAIN[self.algorithm](self.k):
            raise InputError(f"{self.algorithm} needs {_K_HINT[self.algorithm]}, got k={self.k}")
        if (self.generator is None) == (self.input_path is None):
            raise InputError("give exactly one of --gen or --input")
        if self.backend is not None and self.backend not in BACKENDS:
            raise InputError(f"unknown backend {self.backend!r}")
        if self.fmt not in ("csv", "json"):
            raise InputError(f"unknown format {self.fmt!r}")
        if self.routing_cost < 1:
            raise InputError("routing cost must be >= 1")

    def load_graph(self) -> Graph:
        if self.generator is not None:
            model, params = parse_generator(self.generator)
            return generate(model, params, rng_seed=self.rng_seed)
        return read_edge_list(Path(self.input_path).read_text())


def _emit(reports: list[SpannerReport], fmt: str, out: str | None) -> None:
    if fmt == "csv":
        text = ",".join(CSV_COLUMNS) + "\n" + "".join(r.csv_row() + "\n" for r in reports)
    else:
        text = "".join(r.to_json() + "\n" for r in reports)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _summary(r: SpannerReport) -> str:
    stretch = "-" if r.max_stretch is None else f"{r.max_stretch:g}"
    status = "ok" if r.success else f"FAILED {r.error}".rstrip()
    return (
        f"{r.algorithm} n={r.n} m={r.m} k={r.k}: |H|={r.edges} stretch={stretch} "
        f"rounds={r.rounds}+{r.routing_rounds} violations={r.violations} {status}"
    )


def execute(cfg: ExperimentConfig) -> SpannerReport:
    graph = cfg.load_graph()
    if cfg.verify and graph.n > cfg.oracle_limit:
        raise ResourceError(f"n={graph.n} exceeds the audit limit {cfg.oracle_limit}")
    _, report = run_algorithm(
        graph, cfg.algorithm, cfg.k, cfg.backend, cfg.rng_seed, cfg.routing_cost, cfg.verify
    )
    return report


def _cmd_run(args) -> int:
    cfg = ExperimentConfig(
        algorithm=args.algo,
        k=args.k,
        generator=args.gen,
        input_path=args.input,
        backend=args.backend,
        rng_seed=args.seed,
        output=args.out,
        fmt=args.format,
        verify=args.verify,
        routing_cost=args.routing_cost,
        oracle_limit=oracle_limit(),
    )
    report = execute(cfg)
    _emit([report], cfg.fmt, cfg.output)
    print(_summary(report), file=sys.stderr)
    return EXIT_OK if report.success else EXIT_AUDIT


def _parse_ks(text: str) -> list[int]:
    try:
        ks = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad k list {text!r}") from None
    if not ks:
        raise InputError("empty k list")
    return ks


def _cmd_sweep(args) -> int:
    ks = _parse_ks(args.k)
    gen = args.gen or f"gnp:{args.n}:{args.p}"
    reports = []
    for k in ks:
        cfg = ExperimentConfig(
            algorithm=args.algo,
            k=k,
            generator=gen,
            backend=args.backend,
            rng_seed=args.seed,
            fmt=args.format,
            verify=args.verify,
            routing_cost=args.routing_cost,
            oracle_limit=oracle_limit(),
        )
        r = execute(cfg)
        reports.append(r)
        print(_summary(r), file=sys.stderr)
    _emit(reports, args.format, args.out)
    if len(ks) >= 2:
        xs = [math.ceil(math.log2(k)) for k in ks]
        ys = [r.total_rounds for r in reports]
        a, b, resid = fit_log_rounds(xs, ys)
        print(f"rounds ~ {a:.3g} + {b:.3g} * ceil(log2 k); max residual {resid:.3g}", file=sys.stderr)
    return EXIT_OK if all(r.success for r in reports) else EXIT_AUDIT


def fit_log_rounds(xs: list[int], ys: list[int]) -> tuple[float, float, float]:
    """Least-squares line through (xs, ys); returns intercept, slope, max |residual|."""
    import numpy as np

    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if np.ptp(x) == 0:
        a, b = float(y.mean()), 0.0
    else:
        b, a = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(y - (a + b * x))))
    return float(a), float(b), resid


def _cmd_hitset(args) -> int:
    try:
        raw = json.loads(Path(args.instance).read_text())
        sets = {int(u): list(s) for u, s in raw["sets"].items()}
        inst = HittingSetInstance.build(raw["universe"], sets, raw.get("delta"))
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed hitting-set instance: {exc}") from None
    n = args.n or max(len(inst.universe), 2)
    if args.trials:
        if args.backend != "random":
            raise InputError("--trials applies to the random backend only")
        misses = sum(bool(inst.missed_by(randomized_hitting_set(inst, rng_seed=args.seed + t, n=n))) for t in range(args.trials))
        print(json.dumps({"trials": args.trials, "failures": misses, "failure_rate": misses / args.trials}))
        return EXIT_OK
    try:
        out = solve_hitting(inst, args.backend, n, rng_seed=args.seed, d=args.d)
    except HittingSetFailure as exc:
        print(json.dumps({"pass": False, "missed": exc.missed}, sort_keys=True))
        return EXIT_AUDIT
    passed, size = audit_hitting(inst, out.z)
    result = {
        "size": size,
        "pass": passed,
        "seed_bits": out.seed_bits,
        "beta": out.beta,
        "fell_back_to_universe": out.fell_back_to_universe,
        "z": sorted(out.z),
    }
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK if passed else EXIT_AUDIT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spanner", description="Congested-clique spanner experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, k_type):
        sp.add_argument("--algo", choices=ALGORITHMS, default="randomized")
        sp.add_argument("--k", type=k_type, required=True)
        sp.add_argument("--backend", choices=BACKENDS, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--verify", action="store_true")
        sp.add_argument("--routing-cost", type=int, default=1)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    run = sub.add_parser("run", help="run one algorithm on one graph")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--gen", help="generator such as gnp:200:0.1 or grid:10:12")
    src.add_argument("--input", help="edge-list file: header 'n m' then one 'u v' per line")
    common(run, int)
    run.set_defaults(func=_cmd_run)

    sweep = sub.add_parser("sweep", help="run one algorithm over several k on one graph")
    sweep.add_argument("--n", type=int, default=512)
    sweep.add_argument("--p", type=float, default=0.05)
    sweep.add_argument("--gen", default=None)
    common(sweep, str)
    sweep.set_defaults(func=_cmd_sweep)

    hit = sub.add_parser("hitset", help="solve a hitting-set instance from JSON")
    hit.add_argument("instance")
    hit.add_argument("--backend", choices=BACKENDS, default="derand")
    hit.add_argument("--seed", type=int, default=0)
    hit.add_argument("--d", type=int, default=8)
    hit.add_argument("--trials", type=int, default=0, help="random backend: report the failure rate over this many seeds")
    hit.add_argument("--n", type=int, default=None, help="ambient n for thresholds (default: universe size)")
    hit.set_defaults(func=_cmd_hitset)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ResourceError, RoutingAdmissibilityError) as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SpannerError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return EXIT_AUDIT


if __name__ == "__main__":
    sys.exit(main())
