"""``sslab`` command line: gen, solve, bench, verify-params, simulate-am."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
import warnings
from pathlib import Path
from typing import Callable

import numpy as np

from . import kernels
from .am import DEFAULT_CUTOFF_C, generate_4sum, simulate_protocol, solve_by_proof_enumeration
from .core import (
    OracleRefused,
    SolutionCertificate,
    dp_oracle,
    dumps_instance,
    generate_instance,
    read_instance,
    verify_certificate,
)
from .lowspace import Config, solve_lowspace
from .params import verify_exponent_bounds, verify_wov_inequality
from .streams import (
    Counters,
    certificate_from_4sum,
    horowitz_sahni,
    reduce_subsetsum_to_4sum,
    schroeppel_shamir,
)

ALGOS = ("dp", "hs", "ss", "am-enum", "lowspace")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("SSLAB_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"SSLAB_SEED must be an integer, got {env!r}") from None


def dump_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# solving
# ---------------------------------------------------------------------------


def run_solver(algo: str, inst, seed: int, lowspace_cfg: Config | None = None,
               retries: int = 3, cutoff_c: float = DEFAULT_CUTOFF_C) -> dict:
    """Run one algorithm and return the report dict (without ``wall_time``)."""
    counters = Counters()
    config: dict = {}
    answer_if_none = "no"
    cert: SolutionCertificate | None = None
    if algo == "dp":
        try:
            cert = dp_oracle(inst)
        except OracleRefused as exc:
            return {"algorithm": algo, "answer": "refused", "certificate": None, "peak_entries": 0,
                    "counters": {"reason": str(exc)}, "seed": seed, "config": config}
    elif algo == "hs":
        cert = horowitz_sahni(inst, counters)
    elif algo == "ss":
        cert = schroeppel_shamir(inst, counters)
    elif algo == "am-enum":
        ks = reduce_subsetsum_to_4sum(inst)
        stats: dict = {}
        quad = solve_by_proof_enumeration(ks, np.random.default_rng(seed), retries=retries,
                                          cutoff_c=cutoff_c, stats=stats)
        cert = None if quad is None else certificate_from_4sum(inst, quad)
        counters.extra.update(stats)
        counters.peak(sum(len(a) for a in ks.arrays))
        config = {"retries": retries, "cutoff_c": cutoff_c}
    elif algo == "lowspace":
        cfg = lowspace_cfg or Config(seed=seed)
        rep = solve_lowspace(inst, cfg, report=True)
        cert = rep.certificate
        counters.extra.update(rep.counters)
        counters.peak(rep.counters.get("peak_live_entries", 0))
        config = rep.config
        answer_if_none = "exhausted"
    else:
        raise UsageError(f"unknown algorithm {algo!r}")
    if cert is not None and not verify_certificate(inst, cert):
        raise AssertionError(f"{algo} returned an invalid certificate")
    cdict = counters.to_dict()
    return {
        "algorithm": algo,
        "answer": "yes" if cert is not None else answer_if_none,
        "certificate": None if cert is None else list(cert.indices),
        "peak_entries": cdict.pop("peak_entries"),
        "counters": cdict,
        "seed": seed,
        "config": config,
    }


def _sizes(text: str | None):
    if text in (None, "", "all"):
        return None
    out = []
    for tok in text.split(","):
        if "-" in tok:
            lo, hi = tok.split("-")
            out += range(int(lo), int(hi) + 1)
        else:
            out.append(int(tok))
    return out


def cmd_gen(args) -> int:
    seed = resolve_seed(args.seed)
    inst = generate_instance(args.n, args.weight_bits, planted=not args.unplanted,
                             solution_size=args.solution_size, seed=seed, signed=args.signed)
    fmt = args.format or ("json" if args.out and args.out.endswith(".json") else "txt")
    emit(dumps_instance(inst, fmt), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    seed = resolve_seed(args.seed)
    try:
        inst = read_instance(args.inp)
    except FileNotFoundError:
        print(f"sslab: no such file: {args.inp}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"sslab: bad instance file {args.inp}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cfg = Config(alpha_sweep=_sizes(args.alpha_sweep), max_reps=args.max_reps,
                 poly_factor=args.poly_factor, slack_window=args.slack_window,
                 q_poly=args.q_poly, seed=seed)
    start = time.perf_counter()
    report = run_solver(args.algo, inst, seed, cfg, retries=args.retries, cutoff_c=args.cutoff_c)
    report["wall_time"] = time.perf_counter() - start
    report["backend"] = kernels.BACKEND
    emit(dump_json(report), args.out)
    if args.expect_yes and report["answer"] != "yes":
        return EXIT_FAIL
    return EXIT_OK


BENCH_FIELDS = ["algorithm", "n", "repeat", "time_mean", "time_max", "peak_mean", "peak_max",
                "pops_mean", "found", "backend"]


def bench_rows(algos, ns, repeat: int, seed: int, weight_bits: int = 32):
    for n in ns:
        for algo in algos:
            times, peaks, pops, found = [], [], [], 0
            for k in range(repeat):
                inst = generate_instance(n, weight_bits, planted=True, seed=seed + 1000 * n + k)
                start = time.perf_counter()
                rep = run_solver(algo, inst, seed + k)
                times.append(time.perf_counter() - start)
                peaks.append(rep["peak_entries"])
                pops.append(rep["counters"].get("pops", 0))
                found += rep["answer"] == "yes"
            yield {
                "algorithm": algo, "n": n, "repeat": repeat,
                "time_mean": f"{np.mean(times):.6f}", "time_max": f"{max(times):.6f}",
                "peak_mean": f"{np.mean(peaks):.1f}", "peak_max": max(peaks),
                "pops_mean": f"{np.mean(pops):.1f}", "found": found, "backend": kernels.BACKEND,
            }


def cmd_bench(args) -> int:
    seed = resolve_seed(args.seed)
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGOS]
    if bad:
        raise UsageError(f"unknown algorithm(s): {', '.join(bad)}")
    ns = _sizes(args.n) or []
    if not ns:
        raise UsageError("--n needs at least one size")
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS)
        writer.writeheader()
        for row in bench_rows(algos, ns, args.repeat, seed, args.weight_bits):
            writer.writerow(row)
            out.flush()
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _corrupt_schedule(alpha: float) -> float:
    # sabotage hook for the CLI test: mixers switched off everywhere
    return 0.0


def cmd_verify_params(args) -> int:
    schedule: Callable[[float], float] | None = _corrupt_schedule if args.corrupt_schedule else None
    kw = {"schedule": schedule} if schedule else {}
    er = verify_exponent_bounds(args.grid_step, **kw)
    wr = verify_wov_inequality(args.mu_step)
    doc = {
        "max_T": er.max_T, "argmax_T": er.argmax_T,
        "max_S": er.max_S, "argmax_S": er.argmax_S,
        "min_lambda": er.min_lambda,
        "wov_max": wr.wov_max, "wov_argmax_mu": wr.argmax_mu, "wov_bound": wr.bound,
        "grid_step": args.grid_step, "mu_step": args.mu_step,
        "violations": er.violations + wr.violations,
    }
    emit(dump_json(doc), args.out)
    return EXIT_FAIL if doc["violations"] else EXIT_OK


def cmd_simulate_am(args) -> int:
    seed = resolve_seed(args.seed)
    inst, planted = generate_4sum(args.n, bits=args.bits, planted=not args.no_instance, seed=seed)
    start = time.perf_counter()
    stats = simulate_protocol(inst, args.trials, args.cutoff_c, np.random.default_rng(seed + 1), planted)
    doc = stats.to_dict()
    doc.update({"N": args.n, "seed": seed, "planted": planted is not None,
                "cutoff_c": args.cutoff_c, "wall_time": time.perf_counter() - start})
    emit(dump_json(doc), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sslab", description="Subset Sum / k-SUM solver laboratory")
    ap.add_argument("--threads", type=int, default=None, help="cap on worker threads")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--weight-bits", type=int, default=32)
    g.add_argument("--unplanted", action="store_true", help="uniform target instead of a planted subset")
    g.add_argument("--solution-size", type=int, default=None)
    g.add_argument("--signed", action="store_true")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--format", choices=("txt", "json"), default=None)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("--algo", choices=ALGOS, required=True)
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--expect-yes", action="store_true", help="exit 1 unless a certificate is found")
    s.add_argument("--alpha-sweep", default=None, help="solution sizes, e.g. '8-12' or '5,10'; default all")
    s.add_argument("--max-reps", type=int, default=Config.max_reps)
    s.add_argument("--poly-factor", type=int, default=None)
    s.add_argument("--slack-window", type=int, default=Config.slack_window)
    s.add_argument("--q-poly", type=float, default=Config.q_poly)
    s.add_argument("--retries", type=int, default=3, help="fresh primes for am-enum")
    s.add_argument("--cutoff-c", type=float, default=DEFAULT_CUTOFF_C)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="time and memory sweep, CSV output")
    b.add_argument("--algos", default="hs,ss")
    b.add_argument("--n", default="16,20,24,28", help="sizes, e.g. '16-28' or '16,20'")
    b.add_argument("--repeat", type=int, default=1)
    b.add_argument("--weight-bits", type=int, default=32)
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify-params", help="certify the exponent maxima on a grid")
    v.add_argument("--grid-step", type=float, default=0.001)
    v.add_argument("--mu-step", type=float, default=0.005)
    v.add_argument("--out", default=None)
    v.add_argument("--corrupt-schedule", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify_params)

    a = sub.add_parser("simulate-am", help="Monte Carlo run of the 4-SUM protocol")
    a.add_argument("--n", type=int, default=512, help="array length N")
    a.add_argument("--trials", type=int, default=500)
    a.add_argument("--cutoff-c", type=float, default=DEFAULT_CUTOFF_C)
    a.add_argument("--bits", type=int, default=None)
    a.add_argument("--no-instance", action="store_true")
    a.add_argument("--seed", type=int, default=None)
    a.add_argument("--out", default=None)
    a.set_defaults(func=cmd_simulate_am)
    return ap


def _apply_threads(n: int | None) -> None:
    if n is None:
        return
    if n < 1:
        raise UsageError("--threads must be >= 1")
    if kernels.JIT_ENABLED:
        import numba

        # first use loads a threading layer; an outdated system TBB only warns
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", numba.NumbaWarning)
            numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        _apply_threads(args.threads)
        return args.func(args)
    except UsageError as exc:
        print(f"sslab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"sslab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # downstream closed early (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
