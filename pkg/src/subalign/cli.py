"""Command-line entry point.

Every subcommand is a thin adapter over the library: parse flags, call one
library function, format the result. Exit codes: 0 success, 1 domain error,
2 I/O error, 3 resource cap exceeded. Errors are single lines on stderr,
prefixed ``error:``.

Randomized subcommands (gen, sweep, validate) take ``--seed``; without it a
seed is drawn from the OS and echoed as the first output line, ``seed <v>``,
so every run is reproducible after the fact.
"""

from __future__ import annotations

import argparse
import os
import re
import secrets
import sys
from itertools import product

from . import experiments
from ._version import __version__
from .analysis import (
    classify_region,
    default_typicality_eps,
    exact_structural_entropy,
    margins,
    structural_entropy_bounds,
)
from .errors import CapExceeded
from .graphs import Graph, aut_count, named_graph, parse_edge_list
from .model import ModelParams, load_pair, sample_pair, save_pair, format_pair, verify_pair
from .solver import count_induced_copies, enumerate_alignments

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as domain errors (exit 1)."""

    def error(self, message):
        raise ValueError(message)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _read_text(path) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


_GRAPH_NAME = re.compile(r"^[kpce]\d+$", re.IGNORECASE)


def _graph_arg(spec: str) -> Graph:
    """A graph flag value: an edge-list file path, or a short name like k3,
    p4, c5, e2 (a file of that exact name wins the tie)."""
    if _GRAPH_NAME.match(spec.strip()) and not os.path.exists(spec):
        return named_graph(spec)
    return parse_edge_list(_read_text(spec))


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _resolve_seed(args) -> int:
    """Explicit seed, or a fresh OS-drawn one echoed as the first line."""
    if args.seed is not None:
        return args.seed
    seed = secrets.randbits(63)
    print(f"seed {seed}")
    return seed


def _flag(b: bool) -> str:
    return "true" if b else "false"


def _num(x: float) -> str:
    return repr(float(x))


# -- subcommand bodies -------------------------------------------------------


def _cmd_gen(args) -> int:
    params = ModelParams(args.n, args.m, args.p)
    seed = _resolve_seed(args)
    pair = sample_pair(params, seed)
    if args.out is None:
        sys.stdout.write(format_pair(pair))
    else:
        save_pair(pair, args.out)
    return 0


def _fmt_ids(values) -> str:
    return "[" + ",".join(str(v + 1) for v in values) + "]"


def _cmd_solve(args) -> int:
    base = _graph_arg(args.base)
    pattern = _graph_arg(args.pattern)
    result = enumerate_alignments(base, pattern, limit=args.limit)
    summary = experiments.solve_summary_csv(result)
    if args.format == "csv":
        _emit(summary, args.out)
        return 0
    lines = [
        f"S={_fmt_ids(c.subset)} sigma={_fmt_ids(c.image)}" for c in result.candidates
    ]
    _emit("\n".join(lines) + ("\n" if lines else "") + summary, args.out)
    return 0


def _cmd_count(args) -> int:
    base = _graph_arg(args.base)
    pattern = _graph_arg(args.pattern)
    cc = count_induced_copies(base, pattern, collect_witnesses=args.witnesses)
    if args.format == "csv":
        _emit(f"count\n{cc.value}\n", args.out)
        return 0
    lines = [str(cc.value)]
    if args.witnesses:
        lines.extend(f"S={_fmt_ids(s)}" for s in cc.witnesses)
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_aut(args) -> int:
    g = _graph_arg(args.graph)
    value = aut_count(g, method=args.method, cap=args.cap)
    if args.format == "csv":
        _emit(f"aut_count\n{value}\n", args.out)
    else:
        _emit(f"{value}\n", args.out)
    return 0


def _cmd_verify(args) -> int:
    pair = load_pair(args.pair, check=False)
    if verify_pair(pair):
        print("ok")
        return 0
    print("mismatch: pattern does not re-derive from base, S and pi")
    return 1


def _cmd_margins(args) -> int:
    params = ModelParams(args.n, args.m, args.p)
    mg = margins(params, normalize=args.normalize)
    if args.format == "csv":
        _emit(
            "n,m,p,ach_margin,conv_margin,perm_margin\n"
            f"{args.n},{args.m},{_num(args.p)},{_num(mg.ach)},{_num(mg.conv)},{_num(mg.perm)}\n",
            args.out,
        )
        return 0
    _emit(f"ach {mg.ach}\nconv {mg.conv}\nperm {mg.perm}\n", args.out)
    return 0


REGION_CSV_HEADER = "n,m,p,ach_margin,conv_margin,perm_margin,region_set,region_perm"


def _grid(args) -> list[ModelParams]:
    return [
        ModelParams(n, m, p)
        for n, m, p in product(args.n, args.m, args.p)
    ]


def _cmd_region(args) -> int:
    rows = []
    for params in _grid(args):
        mg = margins(params, normalize=args.normalize)
        rs = classify_region(params, "set", normalize=args.normalize)
        rp = classify_region(params, "perm", normalize=args.normalize)
        rows.append((params, mg, rs, rp))
    if args.format == "csv":
        lines = [REGION_CSV_HEADER]
        lines.extend(
            f"{pr.n},{pr.m},{_num(pr.p)},{_num(mg.ach)},{_num(mg.conv)},"
            f"{_num(mg.perm)},{rs.value},{rp.value}"
            for pr, mg, rs, rp in rows
        )
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    lines = []
    for pr, mg, rs, rp in rows:
        lines.append(
            f"n={pr.n} m={pr.m} p={pr.p:g} ach={mg.ach:.4f} conv={mg.conv:.4f} "
            f"perm={mg.perm:.4f} set={rs.value} perm_region={rp.value}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_bounds(args) -> int:
    b = structural_entropy_bounds(args.n, args.p)
    exact = exact_structural_entropy(args.n, args.p, cap=args.exact_cap) if args.exact else None
    if args.format == "csv":
        header = "n,p,upper,asymptotic,asymptotic_valid"
        row = f"{args.n},{_num(args.p)},{_num(b.upper)},{_num(b.asymptotic)},{_flag(b.asymptotic_valid)}"
        if exact is not None:
            header += ",exact"
            row += f",{_num(exact)}"
        _emit(header + "\n" + row + "\n", args.out)
        return 0
    lines = [
        f"upper {b.upper}",
        f"asymptotic {b.asymptotic}",
        f"asymptotic_valid {_flag(b.asymptotic_valid)}",
    ]
    if exact is not None:
        lines.append(f"exact {exact}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


_SWEEP_CONFIG_KEYS = {"n", "m", "p", "trials", "seed", "count_cap", "timing", "workers"}


def _read_sweep_config(path) -> dict[str, str]:
    values: dict[str, str] = {}
    for raw in _read_text(path).splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line {line!r} (want key=value)")
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in _SWEEP_CONFIG_KEYS:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = val
    return values


def _cmd_sweep(args) -> int:
    if args.config is not None:
        cfg = _read_sweep_config(args.config)
        if args.n is None and "n" in cfg:
            args.n = _int_list(cfg["n"])
        if args.m is None and "m" in cfg:
            args.m = _int_list(cfg["m"])
        if args.p is None and "p" in cfg:
            args.p = _float_list(cfg["p"])
        if args.trials is None and "trials" in cfg:
            args.trials = int(cfg["trials"])
        if args.seed is None and "seed" in cfg:
            args.seed = int(cfg["seed"])
        if args.count_cap is None and "count_cap" in cfg:
            args.count_cap = int(cfg["count_cap"])
        if not args.timing and cfg.get("timing", "").lower() in ("1", "true", "yes"):
            args.timing = True
        if args.workers == 1 and "workers" in cfg:
            args.workers = int(cfg["workers"])
    if args.n is None or args.m is None or args.p is None:
        raise ValueError("sweep needs --n, --m and --p (flags or config file)")
    if args.trials is None:
        raise ValueError("sweep needs --trials")
    grid = _grid(args)
    seed = _resolve_seed(args)
    spec = experiments.SweepSpec(
        grid=tuple(grid),
        trials_per_point=args.trials,
        master_seed=seed,
        caps=experiments.SolverCaps(count_cap=args.count_cap),
        timing_in_csv=args.timing,
    )
    results = experiments.run_sweep(spec, out_path=args.out, workers=args.workers)
    if args.out is None:
        sys.stdout.write(
            experiments.render_sweep_csv(results, seed, timing=args.timing)
        )
    return 0


def _cmd_validate(args) -> int:
    seed = _resolve_seed(args)
    if args.kind == "expectation":
        if args.n is None or args.pattern is None or args.p is None:
            raise ValueError("validate expectation needs --n, --pattern and --p")
        pattern = _graph_arg(args.pattern)
        report = experiments.validate_expectation(
            args.n, pattern, args.p, args.trials, seed, label=args.pattern
        )
        if args.format == "csv":
            _emit(experiments.expectation_csv([report]), args.out)
        else:
            _emit(
                f"empirical_mean {report.empirical_mean}\n"
                f"expected_mean {report.expected_mean}\n"
                f"std_error {report.std_error}\n"
                f"abs_diff {report.abs_diff}\n"
                f"passed {_flag(report.passed)}\n",
                args.out,
            )
        return 0
    if args.kind == "chernoff":
        if args.m is None or args.p is None:
            raise ValueError("validate chernoff needs --m and --p")
        eps = args.eps if args.eps is not None else default_typicality_eps(args.m, args.p)
        report = experiments.validate_chernoff(args.m, args.p, eps, args.trials, seed)
        if args.format == "csv":
            _emit(experiments.chernoff_csv([report]), args.out)
        else:
            _emit(
                f"eps {report.eps}\n"
                f"atypical_rate {report.atypical_rate}\n"
                f"bound {report.bound}\n"
                f"passed {_flag(report.passed)}\n",
                args.out,
            )
        return 0
    if args.kind == "rigidity":
        if args.m is None or args.p is None:
            raise ValueError("validate rigidity needs --m and --p")
        report = experiments.validate_rigidity(args.m, args.p, args.trials, seed)
        if args.format == "csv":
            _emit(experiments.rigidity_csv([report]), args.out)
        else:
            _emit(
                f"trivial_aut_rate {report.trivial_aut_rate}\n"
                f"perm_margin {report.perm_margin}\n"
                f"std_error {report.std_error}\n",
                args.out,
            )
        return 0
    raise ValueError(f"unknown validation kind {args.kind!r}")


# -- parser wiring -----------------------------------------------------------


def _add_format(sp, out_help="write output to this file instead of stdout"):
    sp.add_argument("--format", choices=("human", "csv"), default="human")
    sp.add_argument("--out", default=None, help=out_help)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subalign", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("gen", help="sample a (base graph, hidden pattern) pair bundle")
    sp.add_argument("--n", type=int, required=True, help="base graph order")
    sp.add_argument("--m", type=int, required=True, help="hidden subset size")
    sp.add_argument("--p", type=float, required=True, help="edge probability")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", default=None, help="bundle file (default stdout)")
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("solve", help="enumerate all alignments of a pattern in a base graph")
    sp.add_argument("--base", required=True, help="edge-list file")
    sp.add_argument("--pattern", required=True, help="edge-list file or name like k3/p4/c5/e2")
    sp.add_argument("--limit", type=int, default=None, help="stop after this many distinct subsets")
    _add_format(sp)
    sp.set_defaults(func=_cmd_solve)

    sp = sub.add_parser("count", help="count induced copies of a pattern")
    sp.add_argument("--base", required=True, help="edge-list file")
    sp.add_argument("--pattern", required=True, help="edge-list file or name like k3/p4/c5/e2")
    sp.add_argument("--witnesses", action="store_true", help="also list the witness subsets")
    _add_format(sp)
    sp.set_defaults(func=_cmd_count)

    sp = sub.add_parser("aut", help="automorphism group size of a graph")
    sp.add_argument("--graph", required=True, help="edge-list file or name like k3/p4/c5/e2")
    sp.add_argument("--method", choices=("auto", "brute", "refined"), default="auto")
    sp.add_argument("--cap", type=int, default=20, help="largest accepted order")
    _add_format(sp)
    sp.set_defaults(func=_cmd_aut)

    sp = sub.add_parser("verify", help="check a pair bundle for internal consistency")
    sp.add_argument("--pair", required=True, help="bundle file from gen")
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("margins", help="achievability/converse/rigidity margins at one point")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--normalize", action="store_true", help="apply the complement reduction when p > 1/2")
    _add_format(sp)
    sp.set_defaults(func=_cmd_margins)

    sp = sub.add_parser("region", help="margins and region labels over a parameter grid")
    sp.add_argument("--n", type=_int_list, required=True, help="comma-separated list")
    sp.add_argument("--m", type=_int_list, required=True, help="comma-separated list")
    sp.add_argument("--p", type=_float_list, required=True, help="comma-separated list")
    sp.add_argument("--normalize", action="store_true")
    _add_format(sp)
    sp.set_defaults(func=_cmd_region)

    sp = sub.add_parser("bounds", help="structural entropy bounds at (n, p)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--exact", action="store_true", help="also compute the exact value (small n)")
    sp.add_argument("--exact-cap", type=int, default=7, help="largest order for --exact")
    _add_format(sp)
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("sweep", help="Monte Carlo recovery sweep over a parameter grid")
    sp.add_argument("--n", type=_int_list, default=None, help="comma-separated list")
    sp.add_argument("--m", type=_int_list, default=None, help="comma-separated list")
    sp.add_argument("--p", type=_float_list, default=None, help="comma-separated list")
    sp.add_argument("--trials", type=int, default=None, help="trials per grid point")
    sp.add_argument("--seed", type=int, default=None, help="master seed")
    sp.add_argument("--count-cap", type=int, default=None, dest="count_cap",
                    help="stop counting matching sets at this many (>= 2)")
    sp.add_argument("--workers", type=int, default=1, help="parallel processes for grid points")
    sp.add_argument("--timing", action="store_true",
                    help="write real elapsed_ms to the CSV (breaks byte-reproducibility)")
    sp.add_argument("--config", default=None, help="key=value file; flags override it")
    sp.add_argument("--out", default=None, help="CSV path (manifest written alongside); default stdout")
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("validate", help="statistical validation experiments")
    sp.add_argument("kind", choices=("expectation", "chernoff", "rigidity"))
    sp.add_argument("--n", type=int, default=None, help="base order (expectation)")
    sp.add_argument("--pattern", default=None, help="pattern file or name (expectation)")
    sp.add_argument("--m", type=int, default=None, help="pattern order (chernoff, rigidity)")
    sp.add_argument("--p", type=float, default=None, help="edge probability")
    sp.add_argument("--eps", type=float, default=None,
                    help="typicality tolerance (chernoff; default 1/sqrt(m sqrt(p)))")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=None)
    _add_format(sp)
    sp.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
