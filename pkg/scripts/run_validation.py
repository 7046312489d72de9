#!/usr/bin/env python3
"""Statistical validation battery: copy-count expectations, the edge-count
tail bound, and pattern rigidity, each printed as one line per case.

Exits nonzero if any closed-form check fails its pinned tolerance, so the
script doubles as a quick self-test of the numerics on a new machine.

Usage:
    python3 scripts/run_validation.py
    python3 scripts/run_validation.py --trials 200000 --seed 11
"""

import argparse
import sys

from subalign.experiments import validate_chernoff, validate_expectation, validate_rigidity
from subalign.graphs import named_graph


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=50_000)
    ap.add_argument("--seed", type=int, default=20260815)
    args = ap.parse_args(argv)

    failures = 0

    print("expected copy counts (n=8, 3 SE tolerance)")
    for name in ("k2", "p3", "k3", "p4", "c4"):
        for p in (0.2, 0.5):
            r = validate_expectation(8, named_graph(name), p, args.trials, args.seed)
            failures += not r.passed
            print(
                f"  {name} p={p}: empirical {r.empirical_mean:.4f} "
                f"vs {r.expected_mean:.4f} (se {r.std_error:.4f}) "
                f"{'ok' if r.passed else 'FAIL'}"
            )

    print("edge-count tail bound (5 SE slack)")
    for m, p, eps in ((20, 0.5, 0.2), (30, 0.3, 0.15)):
        r = validate_chernoff(m, p, eps, args.trials, args.seed)
        failures += not r.passed
        print(
            f"  m={m} p={p} eps={eps}: rate {r.atypical_rate:.4f} "
            f"<= bound {r.bound:.4f} {'ok' if r.passed else 'FAIL'}"
        )

    print("pattern rigidity")
    for m, p in ((15, 0.5), (10, 0.3), (6, 0.0)):
        r = validate_rigidity(m, p, min(args.trials, 2000), args.seed)
        print(
            f"  m={m} p={p}: trivial-aut rate {r.trivial_aut_rate:.4f} "
            f"(margin {r.perm_margin:+.2f})"
        )

    if failures:
        print(f"{failures} validation check(s) failed")
        return 1
    print("all validation checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
