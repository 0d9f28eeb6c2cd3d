"""Which axioms fail when one chart is removed or one transition map is broken.

For every star instance this drops each chart in turn and, separately,
replaces each transition map by the identity, then reports the failing
axioms and whether each witness replays.

    python scripts/mutation_sweep.py [--samples N]
"""
import argparse

from buildings.atlas import star, validate_atlas
from buildings.axiom_suite import AXIOMS, SampleWindow, Suite, replay
from buildings.model_space import AffineMap


def summarise(B, window):
    rep = validate_atlas(B)
    if not rep.passed:
        return f"atlas invalid ({rep.witness['kind']}, replay {replay(B, rep.witness, window)})"
    s = Suite(B, window)
    failed = []
    for name in AXIOMS:
        r = s.check(name)
        if r.verdict == "fail":
            failed.append(name + ("" if replay(B, r.witness, window) else "(no replay)"))
    return "fails " + (" ".join(failed) if failed else "nothing")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--fc-configs", type=int, default=40)
    args = ap.parse_args()
    window = SampleWindow(N=args.samples, fc_configs=args.fc_configs)
    for B in (star("A1", "Z", 3), star("A1", "Z", 4), star("A2", "Q", 3)):
        labels = B.labels()
        print(B.name)
        for c in range(B.n):
            print(f"  without {labels[c]:4s}: {summarise(B.without_charts([c]), window)}")
        for i, j in B.pairs():
            if i < j and not B.map(i, j).is_identity():
                bad = B.with_map(i, j, AffineMap.identity(B.phi, B.spec))
                print(f"  map {labels[i]}->{labels[j]} := id: {summarise(bad, window)}")


if __name__ == "__main__":
    main()
