"""Level statistics of the move order: how far each graph sits below the open cell.

    python3 scripts/level_profile.py --n 1 --d 3 --r 2 [--mode shortest]

Prints, per level, the number of graphs and the range of their codimensions, and
the moves that leave the length unchanged.
"""

import argparse
from collections import defaultdict

from bbatlas.enumeration import enumerate_graphs
from bbatlas.graph import canonical_key, codimension
from bbatlas.poset import length, level_function, successors


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--mode", choices=["longest", "shortest"], default="longest")
    args = ap.parse_args()

    graphs = enumerate_graphs(args.n, args.r, args.d)
    levels = level_function(graphs, args.r, args.mode)
    by_level = defaultdict(list)
    for g in graphs:
        by_level[levels[canonical_key(g)]].append(codimension(g))
    print(f"{len(graphs)} graphs, {args.mode} levels")
    for lv in sorted(by_level):
        cs = by_level[lv]
        print(f"  L={lv:>2}: {len(cs):>3} graphs, codim {min(cs)}..{max(cs)}")
    flat = [(g, step) for g in graphs for step, s in successors(g, args.r) if length(s) == length(g)]
    print(f"{len(flat)} moves keep the length:")
    for g, step in flat[:10]:
        print(f"  {step.kind} {step.edge} d0={step.d0} on {g!r}")


if __name__ == "__main__":
    main()
