"""Exchange closure of star seeds: charts, residues and boundary before and after.

    python scripts/closure_demo.py [--branches 3 4 5]
"""
import argparse

from buildings.at_infinity import boundary_complex
from buildings.atlas import BPoint, ec_closure, star_seed
from buildings.local_structure import residue
from buildings.model_space import Point


def describe(B):
    origin = BPoint(0, Point.origin(B.spec, B.rank))
    res = residue(B, origin)
    bc = boundary_complex(B)
    return (f"{B.n:3d} charts | residue at origin: {len(res.chambers)} chambers, {len(res.apartments)} apartments, "
            f"{res.check().verdict} | infinity: {len(bc.chambers)} chambers, {len(bc.apartments)} apartments, "
            f"{bc.check().verdict}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--branches", type=int, nargs="+", default=[3, 4, 5])
    args = ap.parse_args()
    for t, lam in (("A1", "Z"), ("A1", "QxQ_lex"), ("A2", "Q"), ("B2", "Q")):
        for k in args.branches:
            seed = star_seed(t, lam, k)
            print(f"{t} {lam:8s} k={k}")
            print("  seed   ", describe(seed))
            print("  closed ", describe(ec_closure(seed)))


if __name__ == "__main__":
    main()
