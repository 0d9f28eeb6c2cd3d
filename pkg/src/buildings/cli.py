"""``buildings`` command line: generate instances and run the checkers.

Exit status: 0 when every requested check passes, 1 when a check fails,
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from . import __version__
from .atlas import BPoint, LoadError, ec_closure, dumps_instance, generate, load, validate_atlas
from .at_infinity import ParallelClass, SundialError, boundary_complex, sundial
from .axiom_suite import AXIOMS, SampleWindow, Suite, check_metric_independence, mainthm_matrix
from .coxeter import parse_word
from .local_structure import canonical_germ, residue
from .model_space import METRICS, Point
from .reports import FAIL, CheckReport, dumps
from .retraction import NoChartError, Retraction

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    """Everything that determines a run's output."""

    command: str
    instance: str | None = None
    metric: str = "d1"
    window: SampleWindow = field(default_factory=SampleWindow)
    fmt: str = "text"
    axioms: tuple = AXIOMS

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        window = SampleWindow(R=getattr(args, "window", 8), q=getattr(args, "den", 4),
                              N=getattr(args, "samples", 1000), seed=getattr(args, "seed", 0),
                              fc_configs=getattr(args, "fc_configs", 200))
        axioms = AXIOMS
        if getattr(args, "axioms", "all") != "all":
            axioms = tuple(a.strip() for a in args.axioms.split(",") if a.strip())
            bad = [a for a in axioms if a not in AXIOMS]
            if bad:
                raise UsageError(f"unknown axioms {bad}; choose from {', '.join(AXIOMS)}")
        return cls(args.command, getattr(args, "instance", None), getattr(args, "metric", "d1"),
                   window, getattr(args, "format", "text"), axioms)

    def describe(self) -> dict:
        return {"command": self.command, "instance": self.instance, "metric": self.metric,
                "window": self.window.describe(), "axioms": list(self.axioms)}


class UsageError(Exception):
    pass


def _window_flags(p):
    p.add_argument("--window", type=int, default=8, metavar="R", help="grid coordinate bound")
    p.add_argument("--den", type=int, default=4, metavar="q", help="grid denominator bound")
    p.add_argument("--samples", type=int, default=1000, metavar="N", help="random samples per check")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--fc-configs", type=int, default=200, help="segment configurations for FC''")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="buildings", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated instance")
    g.add_argument("kind", choices=["thin", "star", "star-seed"])
    g.add_argument("--type", default="A1", choices=["A1", "A2", "B2"])
    g.add_argument("--lambda", dest="lam", default="Z", choices=["Z", "Q", "QxQ_lex"])
    g.add_argument("--branches", type=int, default=3)
    g.add_argument("--root", type=int, default=1, help="1-based positive root index of the wall")
    g.add_argument("--t-mode", default="full", choices=["full", "lattice"])
    g.add_argument("--close", action="store_true", help="apply the exchange closure")
    g.add_argument("-o", "--output", help="file to write (default stdout)")

    def with_instance(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--instance", required=True, metavar="FILE")
        p.add_argument("--format", default="text", choices=["text", "json"])
        return p

    with_instance("validate", "structural atlas checks")
    c = with_instance("close", "write the exchange closure of an instance")
    c.add_argument("-o", "--output")
    ch = with_instance("check", "run axiom checks")
    ch.add_argument("--axioms", default="all", help="comma separated list or 'all'")
    ch.add_argument("--metric", default="d1", choices=list(METRICS))
    _window_flags(ch)
    m = with_instance("matrix", "verdicts of the six equivalent axiom bundles")
    m.add_argument("--metric", default="both", choices=list(METRICS) + ["both"])
    _window_flags(m)
    r = with_instance("residue", "residue building at a point")
    r.add_argument("--at", required=True, help='point "i:(c1,...)"')
    with_instance("infinity", "building at infinity")
    s = with_instance("sundial", "sundial apartments around an apartment and a chamber")
    s.add_argument("--apartment", type=int, required=True)
    s.add_argument("--chamber", required=True, help='chamber class "chart:word"')
    rt = with_instance("retract", "evaluate a germ-centred retraction")
    rt.add_argument("--apartment", type=int, required=True)
    rt.add_argument("--germ", required=True, help='"i:(c1,...):word"')
    rt.add_argument("--point", required=True, help='"i:(c1,...)"')
    return ap


def _emit(obj, text: str, fmt: str, out):
    out.write(dumps(obj) if fmt == "json" else text.rstrip("\n") + "\n")


def _parse_germ(text, B):
    chart, rest = text.split(":", 1)
    pt, _, word = rest.rpartition(":")
    p = BPoint(int(chart), Point.parse(pt, B.spec))
    return p, B.phi.element_from_word(parse_word(word))


def _cmd_generate(args, out):
    params = {"type_name": args.type, "lam": args.lam, "t_mode": args.t_mode}
    if args.kind != "thin":
        params.update(branches=args.branches, root=args.root)
    B = generate(args.kind, **params)
    if args.close:
        B = ec_closure(B)
    text = dumps_instance(B)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _report_exit(reports):
    return EXIT_FAIL if any(r.verdict == FAIL for r in reports) else EXIT_OK


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        if args.command == "generate":
            return _cmd_generate(args, out)
        B = load(args.instance)
    except (UsageError, LoadError, OSError, ValueError) as exc:
        print(f"buildings: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _dispatch(args, cfg, B, out)
    except (UsageError, SundialError, ValueError, KeyError, IndexError) as exc:
        print(f"buildings: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args, cfg: RunConfig, B, out) -> int:
    fmt = cfg.fmt
    cmd = args.command
    head = f"instance {B.name}: {B.phi.type_name} over {B.spec.tag}, {B.n} apartments, T {B.t_mode}"
    if cmd == "validate":
        rep = validate_atlas(B)
        _emit({"config": cfg.describe(), "report": rep.to_dict()}, head + "\n" + rep.line(), fmt, out)
        return _report_exit([rep])
    if cmd == "close":
        C = ec_closure(B)
        text = dumps_instance(C)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            out.write(text)
        return EXIT_OK
    if cmd == "check":
        suite = Suite(B, cfg.window)
        reps = [suite.check(a, cfg.metric) for a in cfg.axioms]
        lines = [head, f"window {cfg.window.describe()} metric {cfg.metric}"] + [r.line() for r in reps]
        _emit({"config": cfg.describe(), "reports": [r.to_dict() for r in reps]}, "\n".join(lines), fmt, out)
        return _report_exit(reps)
    if cmd == "matrix":
        suite = Suite(B, cfg.window)
        metrics = METRICS if cfg.metric == "both" else (cfg.metric,)
        obj = {"config": cfg.describe(), "matrix": {}}
        lines = [head]
        reps = []
        for m in metrics:
            mat = mainthm_matrix(B, cfg.window, m, suite)
            obj["matrix"][m] = {k: v.to_dict() for k, v in mat.items()}
            lines.append(f"metric {m}: " + "  ".join(f"{k}:{v.verdict.upper()}" for k, v in mat.items()))
            lines += ["  " + v.line().replace("\n", "\n  ") for v in mat.values() if v.verdict == FAIL]
            reps += list(mat.values())
        if len(metrics) == 2:
            mi = check_metric_independence(B, cfg.window, suite)
            obj["metric_independence"] = mi.to_dict()
            lines.append(mi.line())
            reps.append(mi)
        _emit(obj, "\n".join(lines), fmt, out)
        return _report_exit(reps)
    if cmd == "residue":
        x = BPoint.parse(args.at, B.spec)
        if not B.charts_containing(x) or not 0 <= x.chart < B.n:
            raise UsageError("point chart out of range")
        res = residue(B, x)
        rep = res.check()
        summ = res.summary()
        lines = [head, f"residue at {summ['at']}: {len(summ['chambers'])} chamber germs, "
                       f"{len(summ['apartments'])} apartments"]
        lines += [f"  apartment {k}: {', '.join(v)}" for k, v in summ["apartments"].items()]
        lines += [f"  {k} ~ {', '.join(v)}" for k, v in summ["adjacency"].items()]
        lines.append(rep.line())
        _emit({"residue": summ, "report": rep.to_dict()}, "\n".join(lines), fmt, out)
        return _report_exit([rep])
    if cmd == "infinity":
        bc = boundary_complex(B)
        reps = [bc.check(), bc.check_equivalence()]
        summ = bc.summary()
        lines = [head, f"building at infinity: {len(summ['chambers'])} chambers, "
                       f"{len(summ['apartments'])} apartments"]
        lines += [f"  apartment {k}: {', '.join(v)}" for k, v in summ["apartments"].items()]
        lines += [r.line() for r in reps]
        _emit({"infinity": summ, "reports": [r.to_dict() for r in reps]}, "\n".join(lines), fmt, out)
        return _report_exit(reps)
    if cmd == "sundial":
        bc = boundary_complex(B)
        c = ParallelClass.parse(args.chamber, B.phi)
        c = bc.chamber_of(c.chart, c.w)
        a1, a2, info = sundial(B, args.apartment, c, bc)
        rep = CheckReport("sundial")
        if any(v != "half-apartment" for v in info["pairwise"].values()) or info["triple"] != "hyperplane":
            rep.fail(dict(info, kind="sundial"), "sundial intersections have the wrong shape")
        obj = {"apartments": [a1, a2], "info": info, "report": rep.to_dict()}
        text = (f"{head}\nsundial around apartment {args.apartment} and {c.ident(B.phi)}: "
                f"apartments {a1}, {a2}\n  opposite chambers {', '.join(info['opposite'])}\n"
                f"  pairwise {info['pairwise']}\n  triple intersection {info['triple']} {info['triple_region']}\n"
                + rep.line())
        _emit(obj, text, fmt, out)
        return _report_exit([rep])
    if cmd == "retract":
        p, w = _parse_germ(args.germ, B)
        g = canonical_germ(B, p, w)
        r = Retraction(B, args.apartment, g)
        y = BPoint.parse(args.point, B.spec)
        try:
            img = r(y)
        except NoChartError as exc:
            rep = CheckReport("retract").fail({"kind": "retraction_no_chart", "y": str(y)}, str(exc))
            _emit({"report": rep.to_dict()}, rep.line(), fmt, out)
            return EXIT_FAIL
        _emit({"image": str(img), "admissible_charts": r.admissible},
              f"{head}\nr({y}) = {img}   (charts through the centre: {r.admissible})", fmt, out)
        return EXIT_OK
    raise UsageError(f"unknown command {cmd}")


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
