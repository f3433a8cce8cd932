"""Census of length-3 Montesinos knots: how many are persistently laminar,
how many get a genuine surface, and which construction certified them.

    python3 scripts/knot_census.py --max-q 9
"""

import argparse
import itertools
import time
from collections import Counter
from dataclasses import dataclass
from math import gcd

from laminar.classify import Status, classify_genuine, classify_persistent, component_count, sfs_surgery_filter
from laminar.rational import make_slope, normalize_montesinos


@dataclass
class Config:
    max_q: int = 7
    ns: tuple[int, ...] = (-1, 0, 1, 2)
    surgery: bool = True


def slopes(max_q):
    return [make_slope(p, q) for q in range(2, max_q + 1) for p in range(1, q) if gcd(p, q) == 1]


def run(cfg: Config):
    t = time.perf_counter()
    seen = set()
    persistent, genuine, patterns, surgery = Counter(), Counter(), Counter(), Counter()
    links = 0
    for rs in itertools.combinations_with_replacement(slopes(cfg.max_q), 3):
        for n in cfg.ns:
            k = normalize_montesinos(rs, n)
            key = (tuple(sorted(k.tangles)), k.n)
            if key in seen:
                continue
            seen.add(key)
            if component_count(k) != 1:
                links += 1
                continue
            p = classify_persistent(k)
            g = classify_genuine(k)
            persistent[p.status.value] += 1
            genuine["genuine" if g.genuine else g.form["form"] if g.form else "other"] += 1
            if p.status is Status.PERSISTENTLY_LAMINAR:
                patterns[p.certificate.pattern] += 1
            if cfg.surgery:
                surgery[sfs_surgery_filter(k).status] += 1
    print(f"knots {sum(persistent.values())}, links skipped {links}, {time.perf_counter() - t:.1f}s")
    for name, c in (("persistent", persistent), ("genuine", genuine), ("pattern", patterns), ("surgery", surgery)):
        print(f"  {name:10s} " + ", ".join(f"{k}: {v}" for k, v in sorted(c.items())))


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-q", type=int, default=Config.max_q)
    ap.add_argument("--no-surgery", action="store_true")
    args = ap.parse_args()
    run(Config(max_q=args.max_q, surgery=not args.no_surgery))
