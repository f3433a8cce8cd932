"""Table of T(r1, -r2) verdicts for odd denominators, with the enumerated
genuine-extension flag next to the closed-form rule.

    python3 scripts/tangle_table.py --max-q 11
"""

import argparse
from dataclasses import dataclass
from math import gcd

from laminar.classify import classify_tangle
from laminar.rational import make_slope


@dataclass
class Config:
    max_q: int = 9
    odd_only: bool = True


def run(cfg: Config):
    qs = range(3, cfg.max_q + 1, 2) if cfg.odd_only else range(2, cfg.max_q + 1)
    sl = [make_slope(p, q) for q in qs for p in range(1, q) if gcd(p, q) == 1]
    rows, unknown, mismatch = 0, 0, []
    for r1 in sl:
        for r2 in sl:
            v = classify_tangle(r1, r2)
            rows += 1
            if v.persistent is None:
                unknown += 1
                continue
            if v.genuine_extension != v.genuine_rule:
                mismatch.append((str(r1), str(r2)))
            a, b = v.representative
            print(f"T({r1}, -{r2})  via T({a}, -{b})  genuine {v.genuine_extension}")
    print(f"{rows} tangles, {unknown} unknown, rule mismatches {mismatch}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-q", type=int, default=Config.max_q)
    ap.add_argument("--all-q", action="store_true")
    args = ap.parse_args()
    run(Config(max_q=args.max_q, odd_only=not args.all_q))
