"""Run every theorem check on every gallery sequence and tabulate the verdicts."""
import argparse
import time

from hkconv.convergence import THEOREMS, verify_theorem
from hkconv.errors import MissingCertificate
from hkconv.functions import compactify
from hkconv.gallery import (
    alternating_sequence,
    cos_over_x,
    default_family,
    heaviside_sequence,
    random_sequence,
    typewriter_sequence,
)


def families(seq):
    fam = default_family(seq.base)
    if seq.name == "heaviside":
        fam["cos_over_x"] = compactify(cos_over_x())
    return fam


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=64)
    ap.add_argument("--theorems", default=",".join(THEOREMS))
    args = ap.parse_args()
    seqs = [typewriter_sequence(), alternating_sequence(), heaviside_sequence(), random_sequence(0)]
    print(f"{'sequence':16s} {'thm':4s} {'conditions':12s} {'conclusions':12s} anomalies  seconds")
    for seq in seqs:
        for tid in args.theorems.split(","):
            start = time.perf_counter()
            try:
                v = verify_theorem(tid, seq, family=families(seq), N=args.N)
            except MissingCertificate:
                print(f"{seq.name:16s} {tid:4s} {'no cert':12s}")
                continue
            cond = "hold" if all(v.conditions_hold.values()) else "fail"
            concl = "converge" if all(all(d.values()) for d in v.conclusion_holds.values()) else "no"
            print(f"{seq.name:16s} {tid:4s} {cond:12s} {concl:12s} {len(v.anomalies):9d}  "
                  f"{time.perf_counter() - start:7.2f}")
            for a in v.anomalies:
                print(f"    n={a.n} f={a.f}: {a.detail}")


if __name__ == "__main__":
    main()
