"""Planted subgraph-pair model.

A pair is drawn in three steps: a base graph with every unordered pair of
``n`` vertices independently adjacent with probability ``p``; a uniform
``m``-subset of its vertices; and a uniform bijection from that subset onto
labels ``1..m`` that anonymizes the induced subgraph. The observer sees the
base graph and the anonymized pattern and must undo the last two steps.

All sampling is driven by a single PCG64 stream per call, consumed in a
fixed order (edge draws in lexicographic pair order, then the subset via a
partial Fisher-Yates over ``0..n-1`` keeping the first ``m`` entries, then
the label permutation via a full Fisher-Yates over ``0..m-1``), so identical
``(params, seed)`` reproduce pairs bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import rng
from .graphs import Graph, VertexBijection, format_edge_list, parse_edge_list

__all__ = [
    "ModelParams",
    "SubgraphPair",
    "sample_er",
    "sample_pair",
    "anonymize",
    "verify_pair",
    "complement_pair",
    "format_pair",
    "parse_pair",
    "save_pair",
    "load_pair",
]


@dataclass(frozen=True)
class ModelParams:
    """Pair-model parameters. Requires ``1 <= m < n`` and ``0 <= p <= 1``."""

    n: int
    m: int
    p: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 1 <= self.m < self.n:
            raise ValueError("m must satisfy 1 <= m < n")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    def complemented(self) -> "ModelParams":
        return ModelParams(self.n, self.m, 1.0 - self.p)


@dataclass(frozen=True)
class SubgraphPair:
    """A sampled (base graph, hidden subset, hidden bijection, pattern) tuple.

    ``chosen_set`` is sorted ascending and equals ``bijection.domain``;
    ``anonymized`` is the induced subgraph relabeled through the bijection.
    """

    base: Graph
    chosen_set: tuple[int, ...]
    bijection: VertexBijection
    anonymized: Graph


def _er_from(gen, n: int, p: float) -> Graph:
    rows = [0] * n
    draws = gen.random(n * (n - 1) // 2)
    count = 0
    k = 0
    for u in range(n):
        row = rows[u]
        for v in range(u + 1, n):
            if draws[k] < p:
                row |= 1 << v
                rows[v] |= 1 << u
                count += 1
            k += 1
        rows[u] = row
    return Graph(n, tuple(rows), count)


def sample_er(n: int, p: float, seed: int) -> Graph:
    """One Bernoulli-edge graph on ``n`` vertices with edge probability ``p``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return _er_from(rng.generator(seed), n, p)


def _sample_subset(gen, n: int, m: int) -> tuple[int, ...]:
    pool = list(range(n))
    for i in range(m):
        j = int(gen.integers(i, n))
        pool[i], pool[j] = pool[j], pool[i]
    return tuple(sorted(pool[:m]))


def _sample_label_perm(gen, m: int) -> tuple[int, ...]:
    labels = list(range(m))
    for i in range(m - 1, 0, -1):
        j = int(gen.integers(0, i + 1))
        labels[i], labels[j] = labels[j], labels[i]
    return tuple(labels)


def anonymize(base: Graph, chosen_set, bijection: VertexBijection) -> Graph:
    """Induced subgraph on the chosen set, relabeled through the bijection."""
    chosen = tuple(sorted(chosen_set))
    if bijection.domain != chosen:
        raise ValueError("bijection domain must equal the chosen set")
    induced = base.induced(chosen)
    onto_labels = VertexBijection(tuple(range(len(chosen))), bijection.image)
    return induced.relabel(onto_labels)


def sample_pair(params: ModelParams, seed: int) -> SubgraphPair:
    """Draw one pair; deterministic in ``(params, seed)``."""
    gen = rng.generator(seed)
    base = _er_from(gen, params.n, params.p)
    chosen = _sample_subset(gen, params.n, params.m)
    image = _sample_label_perm(gen, params.m)
    bijection = VertexBijection(chosen, image)
    return SubgraphPair(base, chosen, bijection, anonymize(base, chosen, bijection))


def verify_pair(pair: SubgraphPair) -> bool:
    """Recompute the anonymized pattern from scratch and compare bit-exact."""
    m = len(pair.chosen_set)
    if pair.bijection.domain != tuple(sorted(pair.chosen_set)):
        return False
    if pair.anonymized.order != m or not m or pair.base.order <= max(pair.chosen_set):
        return False
    try:
        return anonymize(pair.base, pair.chosen_set, pair.bijection) == pair.anonymized
    except ValueError:
        return False


def complement_pair(pair: SubgraphPair) -> SubgraphPair:
    """Complement both graphs, keeping the subset and bijection. A valid pair
    stays valid: complementing commutes with inducing and relabeling."""
    return SubgraphPair(
        pair.base.complement(),
        pair.chosen_set,
        pair.bijection,
        pair.anonymized.complement(),
    )


# -- serialization ----------------------------------------------------------
#
# Single text bundle, 1-based ids:
#
#   [base]        edge-list text of the base graph
#   [S]           the chosen set, sorted, one line
#   [pi]          labels assigned to S in S-sorted order, one line
#   [anonymized]  edge-list text of the pattern
#
# The writer is canonical (sorted edges, one trailing newline), so bundles
# round-trip bit for bit.

_SECTIONS = ("[base]", "[S]", "[pi]", "[anonymized]")


def format_pair(pair: SubgraphPair) -> str:
    parts = ["[base]\n", format_edge_list(pair.base)]
    parts.append("[S]\n")
    parts.append(" ".join(str(v + 1) for v in pair.chosen_set) + "\n")
    parts.append("[pi]\n")
    parts.append(" ".join(str(t + 1) for t in pair.bijection.image) + "\n")
    parts.append("[anonymized]\n")
    parts.append(format_edge_list(pair.anonymized))
    return "".join(parts)


def parse_pair(text: str, *, check: bool = True) -> SubgraphPair:
    """Parse a bundle produced by :func:`format_pair`. Rejects malformed
    bundles; with ``check`` (the default) also rejects inconsistent ones
    (the pattern must re-derive from base, S and pi)."""
    sections: dict[str, list[str]] = {}
    current: str | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if line not in _SECTIONS:
                raise ValueError(f"unknown section {line!r}")
            if line in sections:
                raise ValueError(f"repeated section {line!r}")
            current = line
            sections[line] = []
            continue
        if current is None:
            raise ValueError("content before first section header")
        sections[current].append(line)
    missing = [s for s in _SECTIONS if s not in sections]
    if missing:
        raise ValueError(f"missing sections: {', '.join(missing)}")

    base = parse_edge_list("\n".join(sections["[base]"]))
    if len(sections["[S]"]) != 1:
        raise ValueError("[S] must be a single line")
    chosen = tuple(int(tok) - 1 for tok in sections["[S]"][0].split())
    if list(chosen) != sorted(set(chosen)):
        raise ValueError("[S] must be strictly increasing")
    if not chosen or chosen[0] < 0 or chosen[-1] >= base.order:
        raise ValueError("[S] out of range")
    if len(sections["[pi]"]) != 1:
        raise ValueError("[pi] must be a single line")
    image = tuple(int(tok) - 1 for tok in sections["[pi]"][0].split())
    bijection = VertexBijection(chosen, image)
    anonymized = parse_edge_list("\n".join(sections["[anonymized]"]))
    pair = SubgraphPair(base, chosen, bijection, anonymized)
    if check and not verify_pair(pair):
        raise ValueError("bundle is inconsistent: pattern does not match base, S and pi")
    return pair


def save_pair(pair: SubgraphPair, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_pair(pair))


def load_pair(path, *, check: bool = True) -> SubgraphPair:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pair(fh.read(), check=check)
