"""Closed-form recovery thresholds, expected copy counts and entropy bounds.

Everything here is in nats. The three margins for a parameter point (n, m, p)
are:

    ach  = (m/2) h(p) - log n          exact recovery of the hidden set is
                                       guaranteed asymptotically when this
                                       stays positive
    conv = (m/2) h(p) - log(n/m)       recovery is impossible asymptotically
                                       when this goes negative; always equals
                                       ach + log m
    perm = m p - log m                 positive when a Bernoulli pattern is
                                       asymptotically rigid, which is what
                                       upgrading set recovery to full
                                       bijection recovery needs

with h the binary entropy in nats. Between the two thresholds nothing is
promised; classification reports Unknown there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import permutations

from .errors import CapExceeded
from .graphs import Graph, aut_count, pair_count, pair_index
from .model import ModelParams

__all__ = [
    "binary_entropy",
    "Margins",
    "margins",
    "RegionLabel",
    "classify_region",
    "TightnessAdvisory",
    "tightness_advisory",
    "ExpectedCopies",
    "expected_copy_count",
    "typicality_check",
    "default_typicality_eps",
    "atypicality_bound",
    "StructuralEntropyBounds",
    "structural_entropy_bounds",
    "EntropyGap",
    "converse_entropy_gap",
    "MarginGap",
    "margin_gap",
    "rigidity_margin",
    "exact_structural_entropy",
    "log_binomial",
]

_EXP_OVERFLOW = 709.0  # exp() overflows float64 just above this


def binary_entropy(p: float) -> float:
    """Binary entropy in nats; 0 at both endpoints."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log1p(-p)


def log_binomial(n: int, k: int) -> float:
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if min(k, n - k) <= 200:
        # exact big-int path; the lgamma difference below loses absolute
        # precision once n is astronomically large
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


@dataclass(frozen=True)
class Margins:
    ach: float
    conv: float
    perm: float


def _effective(params: ModelParams, normalize: bool) -> ModelParams:
    if normalize and params.p > 0.5:
        return params.complemented()
    return params


def margins(params: ModelParams, *, normalize: bool = False) -> Margins:
    """The three finite-size margins at ``params``.

    ``normalize`` applies the complement reduction first (p -> 1-p when
    p > 1/2), which preserves the alignment problem exactly; the entropy
    margins are already symmetric in p, the rigidity margin is not.
    """
    pr = _effective(params, normalize)
    n, m, p = pr.n, pr.m, pr.p
    half_info = 0.5 * m * binary_entropy(p)
    return Margins(
        ach=half_info - math.log(n),
        conv=half_info - math.log(n / m),
        perm=m * p - math.log(m),
    )


class RegionLabel(str, Enum):
    ACHIEVABLE = "achievable"
    CONVERSE_SET = "converse_set"
    CONVERSE_PERM = "converse_perm"
    UNKNOWN = "unknown"


def classify_region(params: ModelParams, criterion: str, *, normalize: bool = False) -> RegionLabel:
    """Classify a parameter point for the given recovery criterion.

    ``criterion`` is ``"set"`` (recover the hidden subset) or ``"perm"``
    (recover subset and bijection). The labels are mutually exclusive:
    conv > ach always, so a point cannot be achievable and converse at once.
    """
    mg = margins(params, normalize=normalize)
    if criterion == "set":
        if mg.ach > 0.0:
            return RegionLabel.ACHIEVABLE
        if mg.conv < 0.0:
            return RegionLabel.CONVERSE_SET
        return RegionLabel.UNKNOWN
    if criterion == "perm":
        if mg.ach > 0.0 and mg.perm > 0.0:
            return RegionLabel.ACHIEVABLE
        if mg.conv < 0.0 or mg.perm < 0.0:
            return RegionLabel.CONVERSE_PERM
        return RegionLabel.UNKNOWN
    raise ValueError(f"criterion must be 'set' or 'perm', got {criterion!r}")


@dataclass(frozen=True)
class TightnessAdvisory:
    """How close the impossibility threshold sits to the guarantee.

    The gap between the two set thresholds is exactly log m, negligible
    relative to log n when ``log_m_over_log_n`` is small; a positive
    rigidity margin is the extra condition under which the impossibility
    threshold extends to bijection recovery at the same location.
    """

    log_m_over_log_n: float
    perm_margin: float
    perm_margin_positive: bool


def tightness_advisory(params: ModelParams, *, normalize: bool = False) -> TightnessAdvisory:
    pr = _effective(params, normalize)
    pm = margins(pr).perm
    return TightnessAdvisory(
        log_m_over_log_n=math.log(pr.m) / math.log(pr.n),
        perm_margin=pm,
        perm_margin_positive=pm > 0.0,
    )


@dataclass(frozen=True)
class ExpectedCopies:
    """Expected number of induced copies, kept in log space.

    ``value`` is None when the count overflows float64 (use ``log_value``);
    a zero expectation reports ``value = 0.0`` and ``log_value = -inf``.
    """

    log_value: float
    value: float | None


def expected_copy_count(n: int, h: Graph, p: float) -> ExpectedCopies:
    """Expected number of subsets of a fresh n-vertex Bernoulli(p) graph that
    induce a copy of ``h``:  C(n, v) * v!/|Aut(h)| * p^e * (1-p)^(C(v,2)-e).
    """
    v = h.order
    if v < 1 or v > n:
        raise ValueError("pattern order must lie in 1..n")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    e = h.edge_count
    blanks = pair_count(v) - e
    log_value = (
        log_binomial(n, v)
        + math.lgamma(v + 1)
        - math.log(aut_count(h, cap=max(20, v)))
    )
    if e:
        if p == 0.0:
            return ExpectedCopies(-math.inf, 0.0)
        log_value += e * math.log(p)
    if blanks:
        if p == 1.0:
            return ExpectedCopies(-math.inf, 0.0)
        log_value += blanks * math.log1p(-p)
    value = math.exp(log_value) if log_value <= _EXP_OVERFLOW else None
    return ExpectedCopies(log_value, value)


def default_typicality_eps(m: int, p: float) -> float:
    """The tolerance 1/sqrt(m sqrt(p)) used for edge-count typicality."""
    if m < 2:
        raise ValueError("need m >= 2")
    if not 0.0 < p <= 1.0:
        raise ValueError("need p in (0, 1]")
    return (m * math.sqrt(p)) ** -0.5


def typicality_check(h: Graph, p: float, eps: float) -> bool:
    """Does the edge count of ``h`` sit within eps relative deviation of its
    mean C(m,2) p?"""
    if eps < 0.0:
        raise ValueError("eps must be non-negative")
    mean = pair_count(h.order) * p
    return abs(h.edge_count - mean) <= eps * mean


def atypicality_bound(m: int, p: float, eps: float) -> float:
    """Chernoff tail bound on the probability that a Bernoulli(p) pattern on
    m vertices has an atypical edge count: min(1, 2 exp(-eps^2 C(m,2) p / 3)).
    """
    if m < 1:
        raise ValueError("need m >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if eps < 0.0:
        raise ValueError("eps must be non-negative")
    return min(1.0, 2.0 * math.exp(-(eps**2) * pair_count(m) * p / 3.0))


@dataclass(frozen=True)
class StructuralEntropyBounds:
    """Bounds on the entropy of the isomorphism class of a Bernoulli graph.

    ``upper`` = C(n,2) h(p) always holds; ``asymptotic`` subtracts log n! and
    is the right first-order answer only when n p - log n -> infinity, which
    ``asymptotic_valid`` checks at the given point.
    """

    upper: float
    asymptotic: float
    asymptotic_valid: bool


def structural_entropy_bounds(n: int, p: float) -> StructuralEntropyBounds:
    if n < 1:
        raise ValueError("need n >= 1")
    upper = pair_count(n) * binary_entropy(p)
    return StructuralEntropyBounds(
        upper=upper,
        asymptotic=upper - math.lgamma(n + 1),
        asymptotic_valid=n * p - math.log(n) > 0.0,
    )


@dataclass(frozen=True)
class EntropyGap:
    """Counting argument behind the impossibility threshold: a pattern
    carrying fewer nats than the subset choice cannot identify it."""

    subgraph_info: float
    source_entropy_lb: float
    source_entropy_exact: float
    infeasible: bool


def converse_entropy_gap(params: ModelParams) -> EntropyGap:
    n, m, p = params.n, params.m, params.p
    info = pair_count(m) * binary_entropy(p)
    lb = m * math.log(n / m)
    return EntropyGap(
        subgraph_info=info,
        source_entropy_lb=lb,
        source_entropy_exact=log_binomial(n, m),
        infeasible=info < lb,
    )


@dataclass(frozen=True)
class MarginGap:
    """``ach_gap`` is how much the entropy-based guarantee beats the cruder
    one that charges every pattern its worst-case probability; ``coarse_ach``
    is that cruder margin, (m/2) log(1/(1-p)) - log n."""

    ach_gap: float
    coarse_ach: float


def margin_gap(params: ModelParams) -> MarginGap:
    """Requires p <= 1/2 (normalize via the complement first). The gap
    (m/2) p log((1-p)/p) is non-negative on that whole range."""
    m, p = params.m, params.p
    if p > 0.5:
        raise ValueError("margin_gap needs p <= 1/2; normalize via complement")
    if p == 0.0:
        gap = 0.0
    else:
        # log1p/log separately: (1-p)/p overflows for subnormal p
        gap = 0.5 * m * p * (math.log1p(-p) - math.log(p))
    coarse = -0.5 * m * math.log1p(-p) - math.log(params.n)
    return MarginGap(ach_gap=gap, coarse_ach=coarse)


def rigidity_margin(m: int, p: float) -> float:
    """m p - log m: positive when Bernoulli(p) patterns on m vertices are
    asymptotically rigid (trivial automorphism group)."""
    if m < 1:
        raise ValueError("need m >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return m * p - math.log(m)


def exact_structural_entropy(n: int, p: float, *, cap: int = 7) -> float:
    """Exact entropy of the isomorphism class of a Bernoulli(p) graph on n
    vertices, by enumerating all labeled graphs grouped into isomorphism
    orbits. Exponential in C(n,2); a test oracle for small n only."""
    if n > cap:
        raise CapExceeded(f"n={n} exceeds exact enumeration cap {cap}")
    if n < 1:
        raise ValueError("need n >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    npairs = pair_count(n)
    if p == 0.0 or p == 1.0:
        return 0.0
    log_p, log_q = math.log(p), math.log1p(-p)

    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    pairmaps = []
    for perm in permutations(range(n)):
        pairmaps.append(tuple(pair_index(perm[u], perm[v], n) for u, v in pairs))

    seen = bytearray(1 << npairs)
    entropy = 0.0
    for code in range(1 << npairs):
        if seen[code]:
            continue
        bits = [k for k in range(npairs) if code >> k & 1]
        orbit = set()
        for pm in pairmaps:
            mapped = 0
            for k in bits:
                mapped |= 1 << pm[k]
            orbit.add(mapped)
        for c in orbit:
            seen[c] = 1
        e = len(bits)
        log_graph = e * log_p + (npairs - e) * log_q
        p_class = len(orbit) * math.exp(log_graph)
        entropy -= p_class * (math.log(len(orbit)) + log_graph)
    return entropy
