"""CSV contracts: the column layouts this renderer accepts, and their loaders.

The figures are drawn from files produced by the ``subalign`` command-line
tool. This package never imports that tool; the header strings below *are*
the interface, duplicated here verbatim so that any drift between producer
and consumer is caught as a schema error rather than a silent misread.

Every loader enforces three things: the header line must match the
expected layout exactly (extra, missing, or reordered columns are all
rejected), at least one data row must be present, and every value this
package draws must parse. No statistics are computed here or anywhere
else in the package — all numbers originate upstream; we only arrange
them on axes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

SWEEP_HEADER = (
    "n,m,p,trials,master_seed,set_recovery_rate,perm_recovery_rate,"
    "multi_copy_rate,trivial_aut_rate,mean_candidate_sets,ach_margin,"
    "conv_margin,perm_margin,region_set,region_perm,errors,elapsed_ms"
)
EXPECTATION_HEADER = (
    "pattern,n,p,trials,seed,empirical_mean,expected_mean,std_error,abs_diff,passed"
)
CHERNOFF_HEADER = "m,p,eps,trials,seed,atypical_rate,bound,passed"

KINDS = ("region-heatmap", "rate-vs-p", "expectation-check", "chernoff-check")

HEADER_BY_KIND = {
    "region-heatmap": SWEEP_HEADER,
    "rate-vs-p": SWEEP_HEADER,
    "expectation-check": EXPECTATION_HEADER,
    "chernoff-check": CHERNOFF_HEADER,
}

REGION_LABELS = ("achievable", "converse_set", "converse_perm", "unknown")


class SchemaError(ValueError):
    """The CSV header does not match the expected layout for the plot kind."""


class EmptyDataError(ValueError):
    """The CSV has a valid header but no data rows."""


@dataclass(frozen=True)
class PlotJob:
    """One rendering request: input table, figure kind, output image.

    ``x_axis`` selects the horizontal variable for the two sweep-backed
    kinds (``"p"`` puts edge probability on x and pattern order on the
    other axis; ``"m"`` swaps them). ``overlay`` toggles the theoretical
    boundary drawn from the achievability-margin zero crossings.
    """

    csv_path: str
    kind: str
    out_path: str
    x_axis: str = "p"
    overlay: bool = False

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.x_axis not in ("p", "m"):
            raise ValueError(f"x_axis must be 'p' or 'm', got {self.x_axis!r}")
        if self.x_axis != "p" and self.kind not in ("region-heatmap", "rate-vs-p"):
            raise ValueError("x_axis selection only applies to region-heatmap and rate-vs-p")


@dataclass(frozen=True)
class SweepRow:
    n: int
    m: int
    p: float
    trials: int
    set_rate: float
    perm_rate: float
    ach: float
    conv: float
    perm_margin: float
    region_set: str
    region_perm: str


@dataclass(frozen=True)
class ExpectationRow:
    pattern: str
    n: int
    p: float
    trials: int
    empirical: float
    expected: float
    std_error: float
    passed: bool


@dataclass(frozen=True)
class ChernoffRow:
    m: int
    p: float
    eps: float
    trials: int
    rate: float
    bound: float
    passed: bool


def check_header(actual: str, kind: str) -> None:
    """Reject any header that is not byte-for-byte the contract for ``kind``."""
    expected = HEADER_BY_KIND[kind]
    if actual == expected:
        return
    got = actual.split(",")
    want = expected.split(",")
    unknown = [c for c in got if c not in want]
    missing = [c for c in want if c not in got]
    parts = [f"CSV header does not match the {kind} schema"]
    if unknown:
        parts.append(f"unknown columns: {', '.join(unknown)}")
    if missing:
        parts.append(f"missing columns: {', '.join(missing)}")
    if not unknown and not missing:
        parts.append("columns are reordered")
    raise SchemaError("; ".join(parts))


def _read_table(path: str | Path, kind: str) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header_cells = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty, expected a {kind} CSV") from None
        check_header(",".join(header_cells), kind)
        names = header_cells
        rows = []
        for lineno, cells in enumerate(reader, start=2):
            if not cells:
                continue
            if len(cells) != len(names):
                raise ValueError(f"{path}:{lineno}: expected {len(names)} fields, got {len(cells)}")
            rows.append(dict(zip(names, cells)))
    if not rows:
        raise EmptyDataError("empty data")
    return rows


def _flag(raw: str, where: str) -> bool:
    if raw == "true":
        return True
    if raw == "false":
        return False
    raise ValueError(f"{where}: expected true/false, got {raw!r}")


def load_sweep(path: str | Path) -> list[SweepRow]:
    """Load a sweep CSV, rejecting rows that carry no measurements.

    A failed grid point leaves its rate columns empty and records the
    reason in ``errors``; such a row cannot be drawn, so it is reported
    as an error naming the row rather than silently dropped.
    """
    out = []
    for i, r in enumerate(_read_table(path, "region-heatmap"), start=2):
        where = f"{path}:{i}"
        if r["errors"].startswith("point_failed") or r["set_recovery_rate"] == "":
            raise ValueError(f"{where}: row carries no data ({r['errors'] or 'empty rates'})")
        if r["region_set"] not in REGION_LABELS or r["region_perm"] not in REGION_LABELS:
            raise ValueError(f"{where}: unknown region label {r['region_set']!r}/{r['region_perm']!r}")
        out.append(
            SweepRow(
                n=int(r["n"]),
                m=int(r["m"]),
                p=float(r["p"]),
                trials=int(r["trials"]),
                set_rate=float(r["set_recovery_rate"]),
                perm_rate=float(r["perm_recovery_rate"]),
                ach=float(r["ach_margin"]),
                conv=float(r["conv_margin"]),
                perm_margin=float(r["perm_margin"]),
                region_set=r["region_set"],
                region_perm=r["region_perm"],
            )
        )
    return out


def load_expectation(path: str | Path) -> list[ExpectationRow]:
    return [
        ExpectationRow(
            pattern=r["pattern"],
            n=int(r["n"]),
            p=float(r["p"]),
            trials=int(r["trials"]),
            empirical=float(r["empirical_mean"]),
            expected=float(r["expected_mean"]),
            std_error=float(r["std_error"]),
            passed=_flag(r["passed"], f"{path}:{i}"),
        )
        for i, r in enumerate(_read_table(path, "expectation-check"), start=2)
    ]


def load_chernoff(path: str | Path) -> list[ChernoffRow]:
    return [
        ChernoffRow(
            m=int(r["m"]),
            p=float(r["p"]),
            eps=float(r["eps"]),
            trials=int(r["trials"]),
            rate=float(r["atypical_rate"]),
            bound=float(r["bound"]),
            passed=_flag(r["passed"], f"{path}:{i}"),
        )
        for i, r in enumerate(_read_table(path, "chernoff-check"), start=2)
    ]


@dataclass(frozen=True)
class SweepGrid:
    """A complete (m, p) grid of sweep rows at a single n.

    The heatmap needs every combination exactly once; holes or duplicates
    mean the CSV was not one full sweep and are rejected at load time.
    """

    n: int
    m_values: tuple[int, ...]
    p_values: tuple[float, ...]
    cells: dict[tuple[int, float], SweepRow] = field(repr=False)

    def cell(self, m: int, p: float) -> SweepRow:
        return self.cells[(m, p)]


def make_grid(rows: list[SweepRow]) -> SweepGrid:
    ns = sorted({r.n for r in rows})
    if len(ns) != 1:
        raise ValueError(f"expected a single n, found n={ns}; filter the CSV to one base order")
    m_values = tuple(sorted({r.m for r in rows}))
    p_values = tuple(sorted({r.p for r in rows}))
    cells: dict[tuple[int, float], SweepRow] = {}
    for r in rows:
        key = (r.m, r.p)
        if key in cells:
            raise ValueError(f"duplicate grid point m={r.m} p={r.p}")
        cells[key] = r
    expected = len(m_values) * len(p_values)
    if len(cells) != expected:
        missing = [
            f"(m={m}, p={p:g})" for m in m_values for p in p_values if (m, p) not in cells
        ]
        raise ValueError(f"grid is incomplete: missing {', '.join(missing[:6])}")
    return SweepGrid(n=ns[0], m_values=m_values, p_values=p_values, cells=cells)
