"""Exact norms of the typewriter sequence, one CSV row per n."""
import argparse
import csv
import sys
from fractions import Fraction

from hkconv.functions import alexiewicz_norm
from hkconv.gallery import typewriter, typewriter_indices
from hkconv.step import l1_norm, measure_exceedance, sup_norm, total_variation


def rows(N):
    for n in range(1, N + 1):
        g = typewriter(n)
        k, j = typewriter_indices(n)
        yield {
            "n": n, "k": k, "j": j,
            "alexiewicz": alexiewicz_norm(g),
            "l1": l1_norm(g),
            "exceedance_1_2": measure_exceedance(g, Fraction(1, 2)),
            "bound_2_over_n": Fraction(2, n),
            "sup": sup_norm(g),
            "variation": total_variation(g),
        }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=64)
    args = ap.parse_args()
    out = csv.DictWriter(sys.stdout, fieldnames=list(next(rows(1))), lineterminator="\n")
    out.writeheader()
    for row in rows(args.N):
        out.writerow({k: str(v) for k, v in row.items()})


if __name__ == "__main__":
    main()
