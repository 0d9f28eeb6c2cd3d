"""Bundle verdicts for the standard instance set under both metrics.

    python scripts/run_matrix.py [--samples N] [--json out.json]
"""
import argparse
import time

from buildings.atlas import star, thin
from buildings.axiom_suite import SampleWindow, Suite, check_metric_independence, mainthm_matrix
from buildings.reports import dumps


def instances():
    for t in ("A1", "A2", "B2"):
        for lam in ("Z", "Q"):
            yield thin(t, lam)
    yield star("A1", "Z", 3)
    yield star("A1", "Z", 4)
    yield star("A1", "QxQ_lex", 3)
    yield star("A2", "Q", 3)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--window", type=int, default=8)
    ap.add_argument("--den", type=int, default=4)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--fc-configs", type=int, default=200)
    ap.add_argument("--json", help="write the full reports here")
    args = ap.parse_args()
    window = SampleWindow(args.window, args.den, args.samples, args.seed, args.fc_configs)
    out = {"window": window.describe(), "instances": {}}
    for B in instances():
        t0 = time.perf_counter()
        s = Suite(B, window)
        row = {m: {k: v.to_dict() for k, v in mainthm_matrix(B, window, m, s).items()} for m in ("d1", "dinf")}
        row["metric_independence"] = check_metric_independence(B, window, s).to_dict()
        out["instances"][B.name] = row
        verdicts = " ".join(f"{m}:" + ",".join(v["verdict"][0].upper() for v in row[m].values())
                            for m in ("d1", "dinf"))
        print(f"{B.name:22s} {verdicts}  metric:{row['metric_independence']['verdict']}  "
              f"{time.perf_counter() - t0:.1f}s")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(dumps(out))


if __name__ == "__main__":
    main()
