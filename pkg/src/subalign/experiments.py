"""Monte Carlo campaigns: recovery-rate sweeps and validation experiments.

The sweep CSV schema is a fixed external interface:

    n,m,p,trials,master_seed,set_recovery_rate,perm_recovery_rate,
    multi_copy_rate,trivial_aut_rate,mean_candidate_sets,ach_margin,
    conv_margin,perm_margin,region_set,region_perm,errors,elapsed_ms

Identical sweep specs produce byte-identical CSVs regardless of worker
count: every grid point derives its own seed from the master seed and the
point index, trials derive theirs from the point seed and trial index, and
aggregation is per point. The elapsed_ms column is therefore written as 0
unless wall-clock timing is explicitly requested; real timings live in the
run manifest and the returned records.

Per trial the engine scans candidate subsets in lexicographic order (the
subset loop of the exhaustive estimator), testing induced-subgraph
isomorphism with memoization, and reconstructs the tie-broken estimate
exactly: the first matching subset is the lexicographically smallest, and
the lexicographically smallest isomorphism onto the pattern is the
tie-broken bijection. This sidesteps the bijection-level blowup of symmetric
patterns while returning the same verdicts as full enumeration.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from . import rng
from ._version import __version__
from .analysis import (
    Margins,
    RegionLabel,
    atypicality_bound,
    classify_region,
    expected_copy_count,
    margins,
    rigidity_margin,
)
from .graphs import (
    Graph,
    VertexBijection,
    find_isomorphism,
    is_isomorphic,
    is_rigid,
    pair_index,
)
from .model import ModelParams, SubgraphPair, sample_er, sample_pair

__all__ = [
    "SolverCaps",
    "SweepSpec",
    "TrialStats",
    "PointFailure",
    "TrialOutcome",
    "recovery_trial",
    "run_point",
    "run_sweep",
    "SWEEP_CSV_HEADER",
    "render_sweep_csv",
    "write_sweep_csv",
    "write_manifest",
    "SOLVE_SUMMARY_HEADER",
    "solve_summary_csv",
    "ExpectationReport",
    "validate_expectation",
    "batch_copy_counts",
    "pattern_relabel_codes",
    "ChernoffReport",
    "validate_chernoff",
    "RigidityReport",
    "validate_rigidity",
    "EXPECTATION_CSV_HEADER",
    "CHERNOFF_CSV_HEADER",
    "RIGIDITY_CSV_HEADER",
    "expectation_csv",
    "chernoff_csv",
    "rigidity_csv",
]


@dataclass(frozen=True)
class SolverCaps:
    """Resource knobs for the trial engine.

    ``count_cap`` caps the per-trial distinct-matching-set count (None keeps
    exact counts; 2 is enough for every rate the sweep reports, since the
    first match already settles recovery and the second settles multiplicity).
    ``vector_limit`` is the largest subset count handled by the vectorized
    scanner; beyond it the engine falls back to a lazy scan that honors
    ``count_cap``.
    """

    count_cap: int | None = None
    vector_limit: int = 200_000

    def __post_init__(self):
        if self.count_cap is not None and self.count_cap < 2:
            raise ValueError("count_cap must be at least 2 (or None)")
        if self.vector_limit < 1:
            raise ValueError("vector_limit must be positive")


@dataclass(frozen=True)
class SweepSpec:
    """A sweep: a grid of parameter points, trials per point, master seed."""

    grid: tuple[ModelParams, ...]
    trials_per_point: int
    master_seed: int
    caps: SolverCaps = SolverCaps()
    timing_in_csv: bool = False

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(self.grid))
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be positive")


class _SubsetScanner:
    """Induced-adjacency codes for every m-subset of an n-vertex graph.

    The vector path precomputes, for each subset, which base-edge slots feed
    which pattern-edge bit, then evaluates all subsets of a trial in one
    numpy pass. The lazy path iterates subsets and supports early stop.
    """

    def __init__(self, n: int, m: int, vector_limit: int = 200_000):
        self.n, self.m = n, m
        self.sub_pairs = m * (m - 1) // 2
        n_subsets = math.comb(n, m)
        self.vector = 0 < self.sub_pairs <= 62 and n_subsets <= vector_limit
        if self.vector:
            self.subsets = list(combinations(range(n), m))
            cols = np.empty((n_subsets, self.sub_pairs), dtype=np.int64)
            for si, s in enumerate(self.subsets):
                k = 0
                for i in range(m):
                    for j in range(i + 1, m):
                        cols[si, k] = pair_index(s[i], s[j], n)
                        k += 1
            self.cols = cols
            self.shifts = np.arange(self.sub_pairs, dtype=np.uint64)

    @staticmethod
    def edge_vector(g: Graph) -> np.ndarray:
        out = np.zeros(g.order * (g.order - 1) // 2, dtype=np.uint64)
        k = 0
        for u in range(g.order):
            row = g.rows[u] >> (u + 1)
            while row:
                low = row & -row
                out[k + low.bit_length() - 1] = 1
                row ^= low
            k += g.order - u - 1
        return out

    def _iso(self, code: int, pattern: Graph, h_code: int, memo: dict) -> bool:
        key = (h_code, code)
        hit = memo.get(key)
        if hit is None:
            hit = is_isomorphic(Graph.from_code(self.m, code), pattern)
            memo[key] = hit
        return hit

    def scan(self, base: Graph, pattern: Graph, memo: dict, count_cap: int | None):
        """Returns (first matching subset or None, matching-set count, capped).

        Subsets are visited in lexicographic order, so the first match is the
        tie-break winner. With ``count_cap`` the count saturates at the cap
        and ``capped`` reports whether matches beyond the cap exist; both
        paths agree on all three outputs.
        """
        h_code = pattern.adjacency_code()
        if self.vector:
            evec = self.edge_vector(base)
            codes = (evec[self.cols] << self.shifts).sum(axis=1)
            uniq, inverse = np.unique(codes, return_inverse=True)
            flags = np.fromiter(
                (self._iso(int(c), pattern, h_code, memo) for c in uniq),
                dtype=bool,
                count=len(uniq),
            )
            mask = flags[inverse]
            count = int(mask.sum())
            first = self.subsets[int(np.argmax(mask))] if count else None
            capped = count_cap is not None and count > count_cap
            if capped:
                count = count_cap
            return first, count, capped
        first = None
        count = 0
        rows = base.rows
        for s in combinations(range(self.n), self.m):
            code = 0
            k = 0
            for i in range(self.m):
                ri = rows[s[i]]
                for j in range(i + 1, self.m):
                    code |= (ri >> s[j] & 1) << k
                    k += 1
            if self._iso(code, pattern, h_code, memo):
                count += 1
                if first is None:
                    first = s
                if count_cap is not None and count > count_cap:
                    return first, count_cap, True
        return first, count, False


@dataclass(frozen=True)
class TrialOutcome:
    selected_set: tuple[int, ...] | None
    set_correct: bool
    perm_correct: bool
    multi_copy: bool
    matching_sets: int
    capped: bool


def _trial(pair: SubgraphPair, scanner: _SubsetScanner, memo: dict, count_cap) -> TrialOutcome:
    first, count, capped = scanner.scan(pair.base, pair.anonymized, memo, count_cap)
    if first is None:
        return TrialOutcome(None, False, False, False, 0, capped)
    set_correct = first == pair.chosen_set
    perm_correct = False
    if set_correct:
        witness = find_isomorphism(pair.base.induced(first), pair.anonymized)
        perm_correct = witness is not None and witness.image == pair.bijection.image
    return TrialOutcome(first, set_correct, perm_correct, count >= 2, count, capped)


def recovery_trial(pair: SubgraphPair, *, caps: SolverCaps = SolverCaps()) -> TrialOutcome:
    """Judge one pair exactly as the sweep engine does. The verdicts agree
    with full enumeration plus tie-break (see the module docstring)."""
    m = len(pair.chosen_set)
    scanner = _SubsetScanner(pair.base.order, m, caps.vector_limit)
    return _trial(pair, scanner, {}, caps.count_cap)


@dataclass(frozen=True)
class TrialStats:
    """Aggregated Monte Carlo statistics at one parameter point."""

    params: ModelParams
    trials: int
    seed: int
    set_recovery_rate: float
    perm_recovery_rate: float
    multi_copy_rate: float
    trivial_aut_rate: float
    mean_candidate_sets: float
    tie_break_loss_rate: float
    margins: Margins
    region_set: RegionLabel
    region_perm: RegionLabel
    errors: int
    elapsed_ms: float
    count_capped: bool


@dataclass(frozen=True)
class PointFailure:
    params: ModelParams
    trials: int
    error: str


def run_point(
    params: ModelParams,
    trials: int,
    seed: int,
    caps: SolverCaps = SolverCaps(),
) -> TrialStats:
    """Monte Carlo at one grid point: sample a pair per trial, solve it, and
    aggregate recovery verdicts. Trial t uses the derived seed (seed, t)."""
    if trials < 1:
        raise ValueError("trials must be positive")
    t0 = time.perf_counter()
    scanner = _SubsetScanner(params.n, params.m, caps.vector_limit)
    iso_memo: dict = {}
    rigid_memo: dict[int, bool] = {}
    recovered = perm_ok = multi = rigid = tie_losses = errors = 0
    sum_sets = 0
    any_capped = False
    for t in range(trials):
        pair = sample_pair(params, rng.derive(seed, t))
        outcome = _trial(pair, scanner, iso_memo, caps.count_cap)
        if outcome.selected_set is None:
            errors += 1  # impossible for model-generated pairs
            continue
        sum_sets += outcome.matching_sets
        any_capped = any_capped or outcome.capped
        multi += outcome.multi_copy
        if outcome.set_correct:
            recovered += 1
            perm_ok += outcome.perm_correct
        else:
            tie_losses += 1
        h_code = pair.anonymized.adjacency_code()
        flag = rigid_memo.get(h_code)
        if flag is None:
            flag = is_rigid(pair.anonymized)
            rigid_memo[h_code] = flag
        rigid += flag
    mg = margins(params)
    return TrialStats(
        params=params,
        trials=trials,
        seed=seed,
        set_recovery_rate=recovered / trials,
        perm_recovery_rate=perm_ok / trials,
        multi_copy_rate=multi / trials,
        trivial_aut_rate=rigid / trials,
        mean_candidate_sets=sum_sets / max(1, trials - errors),
        tie_break_loss_rate=tie_losses / trials,
        margins=mg,
        region_set=classify_region(params, "set"),
        region_perm=classify_region(params, "perm"),
        errors=errors,
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
        count_capped=any_capped,
    )


def _point_task(args) -> TrialStats:
    params, trials, seed, caps = args
    return run_point(params, trials, seed, caps)


def run_sweep(
    spec: SweepSpec,
    out_path=None,
    workers: int = 1,
) -> list[TrialStats | PointFailure]:
    """Run every grid point; point i uses seed derive(master_seed, i).

    Points are independent, so worker count changes scheduling only, never
    results. A failing point is isolated into a PointFailure row. When
    ``out_path`` is given, the CSV and a JSON manifest are written.
    """
    t0 = time.perf_counter()
    tasks = [
        (params, spec.trials_per_point, rng.derive(spec.master_seed, i), spec.caps)
        for i, params in enumerate(spec.grid)
    ]
    results: list[TrialStats | PointFailure] = []
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            try:
                results.append(_point_task(task))
            except Exception as exc:  # noqa: BLE001 - isolate the failing point
                results.append(PointFailure(task[0], task[1], type(exc).__name__))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_point_task, task) for task in tasks]
            for task, fut in zip(tasks, futures):
                exc = fut.exception()
                if exc is None:
                    results.append(fut.result())
                else:
                    results.append(PointFailure(task[0], task[1], type(exc).__name__))
    if out_path is not None:
        write_sweep_csv(results, spec, out_path)
        write_manifest(spec, out_path, wall_time_s=time.perf_counter() - t0)
    return results


# -- CSV emission -----------------------------------------------------------

SWEEP_CSV_HEADER = (
    "n,m,p,trials,master_seed,set_recovery_rate,perm_recovery_rate,"
    "multi_copy_rate,trivial_aut_rate,mean_candidate_sets,ach_margin,"
    "conv_margin,perm_margin,region_set,region_perm,errors,elapsed_ms"
)


def _num(x: float) -> str:
    """Shortest round-trip decimal form; deterministic for a given value."""
    return repr(float(x))


def render_sweep_csv(
    results, master_seed: int, *, timing: bool = False
) -> str:
    lines = [SWEEP_CSV_HEADER]
    for row in results:
        pr = row.params
        if isinstance(row, PointFailure):
            lines.append(
                f"{pr.n},{pr.m},{_num(pr.p)},{row.trials},{master_seed},"
                ",,,,,,,,,,"
                f"point_failed:{row.error},0"
            )
            continue
        elapsed = _num(row.elapsed_ms) if timing else "0"
        lines.append(
            ",".join(
                [
                    str(pr.n),
                    str(pr.m),
                    _num(pr.p),
                    str(row.trials),
                    str(master_seed),
                    _num(row.set_recovery_rate),
                    _num(row.perm_recovery_rate),
                    _num(row.multi_copy_rate),
                    _num(row.trivial_aut_rate),
                    _num(row.mean_candidate_sets),
                    _num(row.margins.ach),
                    _num(row.margins.conv),
                    _num(row.margins.perm),
                    row.region_set.value,
                    row.region_perm.value,
                    str(row.errors),
                    elapsed,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_sweep_csv(results, spec: SweepSpec, path) -> None:
    text = render_sweep_csv(results, spec.master_seed, timing=spec.timing_in_csv)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def write_manifest(spec: SweepSpec, csv_path, wall_time_s: float | None = None) -> str:
    """JSON manifest alongside the CSV: tool version, spec, wall time."""
    manifest = {
        "tool": "subalign",
        "version": __version__,
        "master_seed": spec.master_seed,
        "trials_per_point": spec.trials_per_point,
        "caps": {
            "count_cap": spec.caps.count_cap,
            "vector_limit": spec.caps.vector_limit,
        },
        "timing_in_csv": spec.timing_in_csv,
        "grid": [{"n": pr.n, "m": pr.m, "p": pr.p} for pr in spec.grid],
        "csv": str(csv_path),
    }
    if wall_time_s is not None:
        manifest["wall_time_s"] = wall_time_s
    out = str(csv_path) + ".manifest.json"
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return out


# -- validation experiments ---------------------------------------------------


def pattern_relabel_codes(pattern: Graph) -> np.ndarray:
    """Sorted adjacency codes of all distinct relabelings of ``pattern``."""
    m = pattern.order
    codes = set()
    for image in permutations(range(m)):
        codes.add(pattern.relabel(VertexBijection(tuple(range(m)), image)).adjacency_code())
    return np.array(sorted(codes), dtype=np.uint64)


def batch_copy_counts(n: int, pattern: Graph, p: float, trials: int, seed: int) -> np.ndarray:
    """Induced-copy counts of ``pattern`` in ``trials`` fresh Bernoulli(p)
    graphs on n vertices, one numpy pass per subset. Equals running
    count_induced_copies on each sampled graph (cross-checked in tests)."""
    m = pattern.order
    if not 1 <= m <= n:
        raise ValueError("pattern order must lie in 1..n")
    if math.comb(n, m) > 200_000:
        raise ValueError("subset count too large for the batch counter")
    sub_pairs = m * (m - 1) // 2
    if sub_pairs > 62:
        raise ValueError("pattern too large for packed codes")
    npairs = n * (n - 1) // 2
    valid = pattern_relabel_codes(pattern)
    subsets = list(combinations(range(n), m))
    cols = np.empty((len(subsets), sub_pairs), dtype=np.int64)
    for si, s in enumerate(subsets):
        k = 0
        for i in range(m):
            for j in range(i + 1, m):
                cols[si, k] = pair_index(s[i], s[j], n)
                k += 1
    shifts = np.arange(sub_pairs, dtype=np.uint64)
    gen = rng.generator(seed)
    counts = np.zeros(trials, dtype=np.int64)
    chunk = max(1, min(trials, 4_000_000 // max(1, npairs)))
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        edges = (gen.random((size, npairs)) < p).astype(np.uint64)
        acc = np.zeros(size, dtype=np.int64)
        for si in range(len(subsets)):
            codes = (edges[:, cols[si]] << shifts).sum(axis=1)
            acc += np.isin(codes, valid)
        counts[done : done + size] = acc
        done += size
    return counts


@dataclass(frozen=True)
class ExpectationReport:
    pattern: str
    n: int
    p: float
    trials: int
    seed: int
    empirical_mean: float
    expected_mean: float
    std_error: float
    abs_diff: float
    passed: bool


def validate_expectation(
    n: int, pattern: Graph, p: float, trials: int, seed: int, *, label: str | None = None
) -> ExpectationReport:
    """Monte Carlo check of the closed-form expected induced-copy count:
    pass iff the empirical mean over fresh base graphs sits within three
    standard errors (agreement to floating-point accuracy when the sample
    variance is zero, as at p = 0 or 1)."""
    counts = batch_copy_counts(n, pattern, p, trials, seed)
    empirical = float(counts.mean())
    sd = float(counts.std(ddof=1)) if trials > 1 else 0.0
    se = sd / math.sqrt(trials)
    expected = expected_copy_count(n, pattern, p).value
    if expected is None:
        raise ValueError("expected count overflows; pick a smaller instance")
    diff = abs(empirical - expected)
    if se > 0.0:
        passed = diff <= 3.0 * se
    else:
        passed = diff <= 1e-9 * max(1.0, abs(expected))
    return ExpectationReport(
        pattern=label or f"v{pattern.order}e{pattern.edge_count}",
        n=n,
        p=p,
        trials=trials,
        seed=seed,
        empirical_mean=empirical,
        expected_mean=expected,
        std_error=se,
        abs_diff=diff,
        passed=passed,
    )


@dataclass(frozen=True)
class ChernoffReport:
    m: int
    p: float
    eps: float
    trials: int
    seed: int
    atypical_rate: float
    bound: float
    passed: bool


def validate_chernoff(m: int, p: float, eps: float, trials: int, seed: int) -> ChernoffReport:
    """Empirical atypicality rate of Bernoulli(p) patterns versus the
    Chernoff bound; pass iff rate <= bound + 5 binomial standard errors."""
    npairs = m * (m - 1) // 2
    if npairs < 1:
        raise ValueError("need m >= 2")
    mean = npairs * p
    tol = eps * mean
    gen = rng.generator(seed)
    atypical = 0
    chunk = max(1, min(trials, 4_000_000 // npairs))
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        counts = (gen.random((size, npairs)) < p).sum(axis=1)
        atypical += int((np.abs(counts - mean) > tol).sum())
        done += size
    rate = atypical / trials
    bound = atypicality_bound(m, p, eps)
    se = math.sqrt(rate * (1.0 - rate) / trials)
    return ChernoffReport(
        m=m,
        p=p,
        eps=eps,
        trials=trials,
        seed=seed,
        atypical_rate=rate,
        bound=bound,
        passed=rate <= bound + 5.0 * se,
    )


@dataclass(frozen=True)
class RigidityReport:
    m: int
    p: float
    trials: int
    seed: int
    trivial_aut_rate: float
    perm_margin: float
    std_error: float


def validate_rigidity(m: int, p: float, trials: int, seed: int) -> RigidityReport:
    """Fraction of sampled Bernoulli(p) patterns with trivial automorphism
    group, next to the rigidity margin m p - log m."""
    if m < 2:
        raise ValueError("need m >= 2")
    memo: dict[int, bool] = {}
    rigid = 0
    for t in range(trials):
        g = sample_er(m, p, rng.derive(seed, t))
        code = g.adjacency_code()
        flag = memo.get(code)
        if flag is None:
            flag = is_rigid(g)
            memo[code] = flag
        rigid += flag
    rate = rigid / trials
    return RigidityReport(
        m=m,
        p=p,
        trials=trials,
        seed=seed,
        trivial_aut_rate=rate,
        perm_margin=rigidity_margin(m, p),
        std_error=math.sqrt(rate * (1.0 - rate) / trials),
    )


SOLVE_SUMMARY_HEADER = "candidates,distinct_sets,truncated,selected_set,selected_sigma"


def solve_summary_csv(result) -> str:
    """One-record CSV for a solve outcome (the machine-readable tail of the
    CLI solve output). Vertex ids and labels are 1-based, '-'-joined."""
    sel = result.selected
    sset = "-".join(str(v + 1) for v in sel.subset) if sel else ""
    ssig = "-".join(str(t + 1) for t in sel.image) if sel else ""
    return (
        SOLVE_SUMMARY_HEADER
        + "\n"
        + f"{len(result.candidates)},{result.distinct_set_count},"
        + f"{_flag(result.truncated)},{sset},{ssig}\n"
    )


EXPECTATION_CSV_HEADER = (
    "pattern,n,p,trials,seed,empirical_mean,expected_mean,std_error,abs_diff,passed"
)
CHERNOFF_CSV_HEADER = "m,p,eps,trials,seed,atypical_rate,bound,passed"
RIGIDITY_CSV_HEADER = "m,p,trials,seed,trivial_aut_rate,perm_margin,std_error"


def _flag(b: bool) -> str:
    return "true" if b else "false"


def expectation_csv(reports) -> str:
    lines = [EXPECTATION_CSV_HEADER]
    for r in reports:
        lines.append(
            f"{r.pattern},{r.n},{_num(r.p)},{r.trials},{r.seed},"
            f"{_num(r.empirical_mean)},{_num(r.expected_mean)},{_num(r.std_error)},"
            f"{_num(r.abs_diff)},{_flag(r.passed)}"
        )
    return "\n".join(lines) + "\n"


def chernoff_csv(reports) -> str:
    lines = [CHERNOFF_CSV_HEADER]
    for r in reports:
        lines.append(
            f"{r.m},{_num(r.p)},{_num(r.eps)},{r.trials},{r.seed},"
            f"{_num(r.atypical_rate)},{_num(r.bound)},{_flag(r.passed)}"
        )
    return "\n".join(lines) + "\n"


def rigidity_csv(reports) -> str:
    lines = [RIGIDITY_CSV_HEADER]
    for r in reports:
        lines.append(
            f"{r.m},{_num(r.p)},{r.trials},{r.seed},"
            f"{_num(r.trivial_aut_rate)},{_num(r.perm_margin)},{_num(r.std_error)}"
        )
    return "\n".join(lines) + "\n"
