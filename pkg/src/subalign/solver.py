"""Exhaustive alignment search and the exact posterior reference.

The estimator enumerates every (subset, bijection) configuration whose
relabeled induced subgraph reproduces the observed pattern, then breaks ties
deterministically: lexicographically smallest sorted subset first, then
smallest bijection image sequence. ``map_posterior_oracle`` recomputes the
same answer from the generative law by brute force and exists purely as an
independent cross-check.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations, permutations

from .errors import CapExceeded
from .graphs import Graph, VertexBijection, is_isomorphic
from .model import ModelParams, SubgraphPair, anonymize

__all__ = [
    "AlignmentCandidate",
    "SearchStats",
    "SolveResult",
    "enumerate_alignments",
    "CopyCount",
    "count_induced_copies",
    "PosteriorOracle",
    "map_posterior_oracle",
    "RecoveryVerdict",
    "judge_recovery",
]


@dataclass(frozen=True)
class AlignmentCandidate:
    """One configuration: ``subset`` sorted ascending, ``image[i]`` the label
    assigned to ``subset[i]``."""

    subset: tuple[int, ...]
    image: tuple[int, ...]

    def bijection(self) -> VertexBijection:
        return VertexBijection(self.subset, self.image)

    def sort_key(self):
        return (self.subset, self.image)


@dataclass
class SearchStats:
    nodes: int = 0
    degree_prunes: int = 0
    adjacency_prunes: int = 0
    elapsed_ms: float = 0.0


@dataclass
class SolveResult:
    """Outcome of :func:`enumerate_alignments`.

    ``candidates`` is sorted by (subset, image); ``selected`` is its head,
    which is exactly the deterministic tie-break. ``truncated`` is set when
    the search halted at ``limit`` distinct subsets, in which case
    ``candidates`` is a prefix of the full configuration set and only the
    "at least ``limit`` distinct subsets" fact is reliable.
    """

    base: Graph
    pattern: Graph
    candidates: list[AlignmentCandidate]
    selected: AlignmentCandidate | None
    distinct_set_count: int
    truncated: bool
    stats: SearchStats = field(default_factory=SearchStats)


def enumerate_alignments(g: Graph, h_pi: Graph, limit: int | None = None) -> SolveResult:
    """Enumerate every alignment of ``h_pi`` inside ``g``.

    Backtracking assigns pattern labels (densest first) to base vertices in
    ascending id order, pruning on the degree lower bound
    ``deg_g(v) >= deg_h(label)`` and on partial induced consistency: an
    assigned pair must agree on edges *and* non-edges. ``limit`` bounds the
    number of distinct candidate subsets; the search halts as soon as the
    ``limit``-th distinct subset appears, enough to decide whether more than
    one subset matches without paying for symmetric patterns' full bijection
    lists.
    """
    if h_pi.order > g.order:
        raise ValueError("pattern order exceeds base order")
    if h_pi.order < 1:
        raise ValueError("pattern must have at least one vertex")
    if limit is not None and limit < 1:
        raise ValueError("limit must be positive")
    t0 = time.perf_counter()
    n, m = g.order, h_pi.order
    labels = sorted(range(m), key=lambda l: (-h_pi.degree(l), l))
    g_rows, h_rows = g.rows, h_pi.rows
    g_deg = g.degrees()
    h_deg = h_pi.degrees()
    stats = SearchStats()
    candidates: list[AlignmentCandidate] = []
    seen_sets: set[tuple[int, ...]] = set()
    vert_of: list[int] = []  # aligned to labels[:depth]
    used = 0

    def extend(depth: int) -> bool:
        """Returns True when the search should halt."""
        nonlocal used
        if depth == m:
            pairs = sorted(zip(vert_of, labels))
            subset = tuple(v for v, _ in pairs)
            image = tuple(l for _, l in pairs)
            candidates.append(AlignmentCandidate(subset, image))
            if subset not in seen_sets:
                seen_sets.add(subset)
                if limit is not None and len(seen_sets) >= limit:
                    return True
            return False
        label = labels[depth]
        want_deg = h_deg[label]
        h_row = h_rows[label]
        for v in range(n):
            if used >> v & 1:
                continue
            if g_deg[v] < want_deg:
                stats.degree_prunes += 1
                continue
            row_v = g_rows[v]
            ok = True
            for i in range(depth):
                if (h_row >> labels[i] & 1) != (row_v >> vert_of[i] & 1):
                    ok = False
                    break
            if not ok:
                stats.adjacency_prunes += 1
                continue
            stats.nodes += 1
            vert_of.append(v)
            used |= 1 << v
            halted = extend(depth + 1)
            vert_of.pop()
            used &= ~(1 << v)
            if halted:
                return True
        return False

    truncated = extend(0)
    candidates.sort(key=AlignmentCandidate.sort_key)
    stats.elapsed_ms = (time.perf_counter() - t0) * 1e3
    return SolveResult(
        base=g,
        pattern=h_pi,
        candidates=candidates,
        selected=candidates[0] if candidates else None,
        distinct_set_count=len(seen_sets),
        truncated=truncated,
        stats=stats,
    )


@dataclass(frozen=True)
class CopyCount:
    value: int
    witnesses: tuple[tuple[int, ...], ...] | None = None


def count_induced_copies(g: Graph, h: Graph, *, collect_witnesses: bool = False) -> CopyCount:
    """Number of vertex subsets of ``g`` inducing a subgraph isomorphic to
    ``h`` (induced copies up to isomorphism of the subset, not bijections)."""
    if h.order > g.order:
        return CopyCount(0, () if collect_witnesses else None)
    memo: dict[int, bool] = {}
    count = 0
    witnesses: list[tuple[int, ...]] = []
    for subset in combinations(range(g.order), h.order):
        sub = g.induced(subset)
        code = sub.adjacency_code()
        hit = memo.get(code)
        if hit is None:
            hit = is_isomorphic(sub, h)
            memo[code] = hit
        if hit:
            count += 1
            if collect_witnesses:
                witnesses.append(subset)
    return CopyCount(count, tuple(witnesses) if collect_witnesses else None)


@dataclass
class PosteriorOracle:
    """Exact posterior over all (subset, bijection) configurations.

    ``ranked`` holds the positive-weight entries sorted by weight then
    (subset, image); every configuration not listed has posterior zero.
    """

    ranked: list[tuple[AlignmentCandidate, float]]
    config_count: int
    match_count: int

    def argmax_set(self) -> set[AlignmentCandidate]:
        if not self.ranked:
            return set()
        top = self.ranked[0][1]
        return {c for c, w in self.ranked if math.isclose(w, top, rel_tol=1e-12)}


def map_posterior_oracle(
    g: Graph, h_pi: Graph, params: ModelParams, cap: int = 10**6
) -> PosteriorOracle:
    """Posterior weights by direct application of Bayes' rule.

    Walks every configuration, scores the full generative chain (uniform
    subset, uniform bijection, Bernoulli edges, deterministic anonymization)
    and normalizes. Deliberately shares no code with the backtracking search;
    ``cap`` bounds the configuration count.
    """
    n, m = params.n, params.m
    if g.order != n or h_pi.order != m:
        raise ValueError("graph orders do not match params")
    config_count = math.comb(n, m) * math.factorial(m)
    if config_count > cap:
        raise CapExceeded(f"{config_count} configurations exceed oracle cap {cap}")
    p = params.p
    npairs = n * (n - 1) // 2
    if (p == 0.0 and g.edge_count > 0) or (p == 1.0 and g.edge_count < npairs):
        raise ValueError("base graph has probability zero under params")
    # log Pr(G = g); constant in the configuration but kept in the chain
    log_pg = 0.0
    if g.edge_count:
        log_pg += g.edge_count * math.log(p)
    if npairs - g.edge_count:
        log_pg += (npairs - g.edge_count) * math.log1p(-p)
    log_prior = -math.log(math.comb(n, m)) - math.lgamma(m + 1)

    matches: list[AlignmentCandidate] = []
    log_weights: list[float] = []
    for subset in combinations(range(n), m):
        induced = g.induced(subset)
        for image in permutations(range(m)):
            relabeled = induced.relabel(VertexBijection(tuple(range(m)), image))
            if relabeled == h_pi:
                matches.append(AlignmentCandidate(subset, image))
                log_weights.append(log_prior + log_pg)
    if not matches:
        return PosteriorOracle([], config_count, 0)
    peak = max(log_weights)
    shifted = [math.exp(lw - peak) for lw in log_weights]
    total = sum(shifted)
    ranked = [(c, s / total) for c, s in zip(matches, shifted)]
    ranked.sort(key=lambda cw: (-cw[1], cw[0].sort_key()))
    return PosteriorOracle(ranked, config_count, len(matches))


@dataclass(frozen=True)
class RecoveryVerdict:
    set_unique: bool
    set_correct: bool
    perm_correct: bool
    multi_copy: bool
    candidate_count: int
    distinct_set_count: int
    truncated: bool


def judge_recovery(pair: SubgraphPair, result: SolveResult) -> RecoveryVerdict:
    """Score a solve result against the hidden truth of ``pair``.

    Raises ValueError when the result was produced from different graphs.
    With a truncated result only ``multi_copy`` (and the derived
    ``set_unique=False``) is reliable; full enumeration settles the rest.
    """
    if result.base != pair.base or result.pattern != pair.anonymized:
        raise ValueError("result does not belong to this pair")
    selected = result.selected
    if selected is not None:
        reproduced = anonymize(pair.base, selected.subset, selected.bijection())
        if reproduced != pair.anonymized:
            raise ValueError("selected candidate fails adjacency recheck")
    set_correct = selected is not None and selected.subset == pair.chosen_set
    perm_correct = set_correct and selected.image == pair.bijection.image
    return RecoveryVerdict(
        set_unique=result.distinct_set_count == 1 and not result.truncated,
        set_correct=set_correct,
        perm_correct=perm_correct,
        multi_copy=result.distinct_set_count >= 2,
        candidate_count=len(result.candidates),
        distinct_set_count=result.distinct_set_count,
        truncated=result.truncated,
    )
