"""Regenerate src/bbatlas/data/mbar_table.json from finite-field point counts.

    python3 scripts/make_mbar_table.py [--max-m 8]
"""

import argparse
import json
from pathlib import Path

from bbatlas.oracles import betti_from_counts, per_prime_counts

OUT = Path(__file__).resolve().parent.parent / "src" / "bbatlas" / "data" / "mbar_table.json"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-m", type=int, default=8)
    args = parser.parse_args()
    table = {}
    for m in range(3, args.max_m + 1):
        poly = betti_from_counts(m, extra=2)
        table[str(m)] = {"poly": poly.to_list(),
                         "counts": {str(p): c for p, c in per_prime_counts(m, extra=2).items()}}
        print(f"m={m}: {poly}")
    OUT.write_text(json.dumps({"source": "finite-field point counts", "table": table}, indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
