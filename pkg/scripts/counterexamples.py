"""Print the alternating and Heaviside counterexample trends side by side."""
import argparse
import math

from hkconv.convergence import alexiewicz_product_trend, pairing_trend, product_norm_trend
from hkconv.functions import alexiewicz_norm, compactify
from hkconv.gallery import (
    alternating_sequence,
    cos_over_x,
    default_family,
    heaviside_image,
    heaviside_sequence,
)
from hkconv.step import total_variation


def alternating(N):
    seq = alternating_sequence()
    print(f"alternating g_n = (-1)^n against g = g_1, N = {N}")
    for name, f in default_family().items():
        alex = alexiewicz_product_trend(f, seq, N=N)
        pnorm = product_norm_trend(f, seq, N=N)
        print(f"  {name:12s} ||f|| = {alexiewicz_norm(f)}")
        print(f"    ||f (g_n - g)||       : {[str(v) for v in alex.values[:6]]} ... {alex.verdict.kind}")
        print(f"    | ||f g_n|| - ||f g|| | : {[str(v) for v in pnorm.values[:6]]} ... {pnorm.verdict.kind}")


def heaviside(N):
    seq = heaviside_sequence("float")
    f = compactify(cos_over_x())
    t = pairing_trend(f, seq, N=N)
    print(f"\nheaviside chi_(n, inf) on (0, 1] after x -> 1/x, f = (cos x / x)', N = {N}")
    print("   n   V g_n   |int f g_n|        |cos n| / n")
    for n, v in t.points:
        print(f"  {n:2d}   {total_variation(heaviside_image(n))}     {v:.12f}   {abs(math.cos(n)) / n:.12f}")
    print(f"  verdict: {t.verdict.kind}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=20)
    args = ap.parse_args()
    alternating(args.N)
    heaviside(max(args.N, 30))


if __name__ == "__main__":
    main()
