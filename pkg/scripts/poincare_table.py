"""Betti numbers of Mbar_{0,n}(P^r, d) over a parameter box, with graph counts and timings.

    python3 scripts/poincare_table.py --max-r 4 --max-d 3 --max-n 2 [--out table.json]

Instances that need equivariant trace data we cannot compute are listed as unsupported.
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from bbatlas.cohomology import EquivariantDataRequired, moduli_dimension, poincare_moduli
from bbatlas.enumeration import enumerate_graphs


@dataclass
class Row:
    r: int
    d: int
    n: int
    graphs: int
    dim: int
    poly: list | None
    euler: int | None
    palindromic: bool | None
    unsupported_graphs: int
    seconds: float


def compute(r, d, n):
    start = time.perf_counter()
    graphs = enumerate_graphs(n, r, d)
    try:
        p = poincare_moduli(r, d, n)
        poly, euler, pal, bad = p.to_list(), p.at_one(), p.is_palindromic(2 * moduli_dimension(r, d, n)), 0
    except EquivariantDataRequired as exc:
        poly, euler, pal, bad = None, None, None, len(exc.graphs)
    return Row(r, d, n, len(graphs), moduli_dimension(r, d, n), poly, euler, pal, bad,
               round(time.perf_counter() - start, 3))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--max-r", type=int, default=3)
    ap.add_argument("--max-d", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=2)
    ap.add_argument("--out")
    args = ap.parse_args()
    rows = []
    print(f"{'r':>2} {'d':>2} {'n':>2} {'graphs':>6} {'dim':>4}  betti (even degrees)")
    for r in range(1, args.max_r + 1):
        for d in range(1, args.max_d + 1):
            for n in range(0, args.max_n + 1):
                row = compute(r, d, n)
                rows.append(row)
                shown = " ".join(map(str, row.poly)) if row.poly else f"unsupported ({row.unsupported_graphs} graphs)"
                print(f"{r:>2} {d:>2} {n:>2} {row.graphs:>6} {row.dim:>4}  {shown}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump([asdict(x) for x in rows], fh, indent=1)


if __name__ == "__main__":
    main()
