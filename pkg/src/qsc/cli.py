"""Command line driver.

    qsc <command> <action> [options]

Every action prints a report {inputs_echo, results, std_errors, verdicts,
runtime_ms, timestamp}.  Exit codes: 0 success, 2 when a checked
inequality fails, 1 on usage errors.
"""
import argparse
import csv
import io
import json
import sys
import time
from datetime import datetime, timezone

import numpy as np

from . import aggregation as ag
from . import boolean_core as bc
from . import condorcet as cd
from . import dynamics as dy
from . import gaussian as gs
from . import manipulation as mp
from .formats import load_function, to_jsonable
from .kernels import default_threads

EXIT_OK, EXIT_USAGE, EXIT_GATE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _function(spec, n=None):
    """A spec string, a short name plus --n, or a path to a BFN1/JSON table."""
    if spec.endswith((".json", ".bfn")):
        return load_function(spec)
    if ":" not in spec and n is not None:
        key = {"maj": "n", "majority": "n", "parity": "n", "and": "n", "or": "n",
               "dictator": "n", "dict": "n", "const": "n", "ec": "n"}.get(spec)
        if key is None:
            raise UsageError(f"function {spec!r} needs explicit parameters")
        spec = f"{spec}:n={n}"
    return bc.from_spec(spec)


# ---------------------------------------------------------------- handlers

def cmd_analyze(a):
    f = _function(a.f, a.n)
    fe = bc.wht(f)
    res = {"n": f.n, "codomain": f.codomain, "mean": f.mean(), "variance": f.variance(),
           "influences": bc.influences(f), "total_influence": bc.total_influence(f),
           "level_weights": fe.level_weights(), "stability": bc.stability(f, a.rho),
           "monotone": bc.is_monotone(f)}
    verdicts = {}
    if f.codomain == bc.PM1:
        fk = bc.fkn_analysis(f)
        res["fkn"] = fk
        verdicts["fkn_bound"] = fk.ok
    rows = [{"i": i + 1, "influence": v} for i, v in enumerate(res["influences"])]
    return {"results": res, "verdicts": verdicts, "rows": rows}


def cmd_stability(a):
    curve = bc.stability_curve(a.family, a.rho, _ints(a.sizes))
    rows = [{"size": s, "stability": v} for s, v in zip(_ints(a.sizes), curve.values)]
    return {"results": curve, "verdicts": {"approaching_limit": curve.approaching}, "rows": rows}


def _rowwise(name, n):
    if name in ("maj", "majority"):
        return cd.majority_rowwise
    return _function(name, n)


def cmd_condorcet(a):
    if a.action == "paradox":
        if a.mode == "mc" and a.n > bc.MAX_DENSE_N:
            fs = [_rowwise(s, a.n) for s in (a.f, a.g or a.f, a.h or a.f)]
            est = cd.paradox_mc(*fs, a.n, a.samples, a.seed, a.threads)
            return {"results": {"p_paradox": est.mean, "limit": cd.GUILBAUD},
                    "std_errors": {"p_paradox": est.std_error}, "verdicts": {}}
        f, g, h = (_function(s, a.n) for s in (a.f, a.g or a.f, a.h or a.f))
        r = cd.paradox_probability(f, g, h, a.mode, a.samples, a.seed, a.threads)
        return {"results": {"p_paradox": r.probability, "mode": r.mode},
                "std_errors": {"p_paradox": r.std_error}, "verdicts": {}}
    if a.action == "classify":
        f, g, h = (_function(s, a.n) for s in (a.f, a.g or a.f, a.h or a.f))
        c = cd.classify_arrow(f, g, h)
        return {"results": {"p_paradox": c.paradox_probability, "verdict": c.verdict,
                            "certificate": c.certificate, "distances": c.distances},
                "verdicts": {}}
    if a.action == "gaussian-arrow":
        r = cd.gaussian_arrow_bound_check(_floats(a.thresholds), a.eps, a.samples, a.seed,
                                          a.threads)
        return {"results": r, "std_errors": {"p_agree": r.std_error},
                "verdicts": {"bound": r.ok}}
    if a.action == "constitution":
        con = cd.uniform_constitution(a.k, _function(a.f, a.n))
        r = cd.constitution_check(con, samples=a.samples, seed=a.seed, threads=a.threads)
        return {"results": r, "std_errors": {"p_nontransitive": r.std_error}, "verdicts": {}}
    raise UsageError(f"unknown condorcet action {a.action!r}")


def cmd_gaussian(a):
    if a.action == "guilbaud":
        return {"results": {"guilbaud": gs.guilbaud_constant()}, "verdicts": {}}
    if a.action == "jrho":
        return {"results": {"j_rho": gs.j_rho(a.x, a.y, a.rho)}, "verdicts": {}}
    if a.action == "derivatives":
        grid = np.arange(1, a.grid + 1) / (a.grid + 1)
        rows, ok = [], True
        for rho in _floats(a.rhos):
            rep = gs.j_rho_derivative_checks(grid, rho)
            ok &= rep.ok
            rows.extend({"rho": rho, "x": x, "y": y, "sigma": sg, "max_eigenvalue": e,
                         "dJ_drho": d} for x, y, sg, e, d in rep.rows)
        return {"results": {"rows": len(rows)}, "verdicts": {"derivative_bounds": ok},
                "rows": rows}
    if a.action == "borell":
        r = gs.borell_mc_check(a.f, a.g, a.rho, a.dim, a.samples, a.seed, a.threads)
        return {"results": r, "std_errors": {"inner": r.inner_se}, "verdicts": {"borell": r.ok}}
    if a.action == "tournament":
        r = gs.tournament_mc(a.k, a.samples, a.seed, a.threads)
        return {"results": r, "std_errors": {"p_unique_max": r.se_unique_max,
                                             "p_acyclic": r.se_acyclic}, "verdicts": {}}
    raise UsageError(f"unknown gaussian action {a.action!r}")


def _rule(a):
    return mp.named_rule(a.rule, a.k, a.n)


def cmd_manip(a):
    if a.action == "census":
        f = _rule(a)
        c = mp.census(f, a.rmax, a.threads)
        rows = [{"r": r, "fraction": p} for r, p in c.p_r.items()]
        nested = all(x <= y + 1e-15 for x, y in zip(list(c.p_r.values()), list(c.p_r.values())[1:]))
        return {"results": {"M": c.p_manipulable, "M_r": c.p_r, "profiles": c.total},
                "verdicts": {"nested": nested}, "rows": rows}
    if a.action == "witness":
        rec = mp.gs_witness(_rule(a), a.threads)
        return {"results": rec.as_dict(), "verdicts": {"witness_found": True}}
    if a.action == "example":
        f = mp.borda(4, 2)
        prof = (mp.parse_ranking("abcd"), mp.parse_ranking("cadb"))
        lie = (prof[0], mp.parse_ranking("cdba"))
        rec = mp.is_manipulable_at(f, prof)
        return {"results": {"winner": mp.LETTERS[f(prof)], "winner_after_lie": mp.LETTERS[f(lie)],
                            "record": rec.as_dict() if rec else None},
                "verdicts": {"manipulable": rec is not None}}
    if a.action == "distance":
        d = mp.dist_to_nonmanip(_rule(a))
        return {"results": d, "verdicts": {"violation_bound": d.violation_bound_ok}}
    if a.action == "congestion":
        r = mp.congestion_census(a.k, a.variant)
        return {"results": r, "verdicts": {"congestion_bound": r.ok}}
    raise UsageError(f"unknown manip action {a.action!r}")


def cmd_dynamics(a):
    g = dy.read_edge_list(a.graph) if not ":" in a.graph else dy.from_spec(a.graph)
    if a.action == "run":
        rng = np.random.default_rng(a.seed)
        x0 = np.where(rng.random(g.num_vertices) < a.p, 1, -1)
        tr = dy.run_to_period(g, x0, a.tmax)
        return {"results": {"period": tr.period, "entry": tr.entry, "energies": tr.energies},
                "verdicts": {"period_at_most_2": tr.period <= 2,
                             "energy_identity": tr.identity_ok,
                             "energy_nonincreasing": tr.nonincreasing},
                "rows": tr.rows()}
    if a.action == "retention":
        pts, mono = dy.retention_experiment(g, _floats(a.ps), a.samples, a.seed)
        rows = [{"p": q.p, "estimate": q.estimate, "std_error": q.std_error} for q in pts]
        return {"results": {"points": pts}, "std_errors": {str(q.p): q.std_error for q in pts},
                "verdicts": {"monotone_in_p": mono}, "rows": rows}
    raise UsageError(f"unknown dynamics action {a.action!r}")


def cmd_aggregate(a):
    if a.action == "jury":
        ns = list(range(1, a.nmax + 1, 2))
        vals, inc = ag.jury_curve(a.p, ns)
        rows = [{"n": n, "probability": float(v)} for n, v in zip(ns, vals)]
        return {"results": {"values": [float(v) for v in vals]},
                "verdicts": {"strictly_increasing": inc or a.p in (0.5, 1.0)}, "rows": rows}
    if a.action == "neyman-pearson":
        r = ag.neyman_pearson_exhaustive(a.n, a.p)
        return {"results": r, "verdicts": {"majority_unique_optimum": r.majority_is_unique_max}}
    if a.action == "tree":
        spec = ag.TreeIsingSpec(a.r, a.eps, a.delta)
        r = ag.tree_ising_experiment(spec, a.samples, a.seed, a.threads)
        return {"results": r, "std_errors": {"mu_m": r.mu_m_se, "effect": r.effect_se},
                "verdicts": {"mu_bound": r.mu_ok, "effect_bound": r.effect_ok}}
    if a.action == "effects":
        f = _function(a.f, a.n)
        if a.measure:
            with open(a.measure) as fh:
                mu = ag.FiniteDistribution.from_json(fh.read())
        else:
            mu = ag.identical_voters_measure(f.n)
        r = ag.effects(f, mu)
        return {"results": r, "verdicts": {"covariance_identity": r.covariance_gap <= 1e-12}}
    if a.action == "kkl":
        r = ag.tribes_kkl(a.r) if a.f is None else ag.kkl_diagnostic(_function(a.f, a.n))
        return {"results": r, "verdicts": {}}
    raise UsageError(f"unknown aggregate action {a.action!r}")


# ---------------------------------------------------------------- parser

def _common():
    p = _Parser(add_help=False)
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--csv", action="store_true", help="print table rows as CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default from QSC_THREADS, else 1)")
    p.add_argument("--out", help="also write the JSON report to this path")
    p.add_argument("--no-timing", action="store_true",
                   help="omit timestamp and runtime for byte-stable reports")
    return p


def build_parser():
    common = _common()
    top = _Parser(prog="qsc", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="Fourier summary of one function")
    p.add_argument("--f", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--rho", type=float, default=0.5)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("stability", parents=[common], help="noise stability along a family")
    p.add_argument("--family", required=True, choices=sorted(bc.FAMILY_LIMITS))
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--sizes", required=True, help="comma separated sizes")
    p.set_defaults(handler=cmd_stability)

    p = sub.add_parser("condorcet", parents=[common], help="paradox probabilities and Arrow")
    p.add_argument("action", choices=["paradox", "classify", "gaussian-arrow", "constitution"])
    p.add_argument("--f", default="maj")
    p.add_argument("--g")
    p.add_argument("--h")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--mode", choices=["fourier", "exhaustive", "mc"], default="fourier")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--thresholds", default="0,0,0")
    p.add_argument("--eps", type=float, default=0.5)
    p.set_defaults(handler=cmd_condorcet)

    p = sub.add_parser("gaussian", parents=[common], help="Gaussian quadrant numerics")
    p.add_argument("action", choices=["guilbaud", "jrho", "derivatives", "borell", "tournament"])
    p.add_argument("--x", type=float, default=0.5)
    p.add_argument("--y", type=float, default=0.5)
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--rhos", default="0.2,0.5,0.8")
    p.add_argument("--grid", type=int, default=19)
    p.add_argument("--f", default="halfspace:t=0")
    p.add_argument("--g", default="halfspace:t=0")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--samples", type=int, default=100_000)
    p.set_defaults(handler=cmd_gaussian)

    p = sub.add_parser("manip", parents=[common], help="manipulation analysis of voting rules")
    p.add_argument("action", choices=["census", "witness", "example", "distance", "congestion"])
    p.add_argument("--rule", default="borda")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--rmax", type=int)
    p.add_argument("--variant", type=int, default=1, choices=[1, 2])
    p.set_defaults(handler=cmd_manip)

    p = sub.add_parser("dynamics", parents=[common], help="majority dynamics on graphs")
    p.add_argument("action", choices=["run", "retention"])
    p.add_argument("--graph", default="random_regular:d=3,n=100,seed=0")
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--ps", default="0.5,0.6,0.7")
    p.add_argument("--tmax", type=int, default=10_000)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(handler=cmd_dynamics)

    p = sub.add_parser("aggregate", parents=[common], help="jury, effects and tree measures")
    p.add_argument("action", choices=["jury", "neyman-pearson", "tree", "effects", "kkl"])
    p.add_argument("--p", type=float, default=0.6)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--nmax", type=int, default=101)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--f")
    p.add_argument("--measure", help="JSON file {support, weights}")
    p.set_defaults(handler=cmd_aggregate)

    p = sub.add_parser("run", parents=[common], help="execute a TOML or JSON manifest")
    p.add_argument("manifest")
    p.set_defaults(handler=None)
    return top


# ---------------------------------------------------------------- manifests

def _load_manifest(path):
    if str(path).endswith(".json"):
        with open(path) as fh:
            return json.load(fh)
    try:
        import tomllib
    except ImportError:  # Python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def manifest_argv(manifest):
    """{command = ["condorcet", "paradox"], args = {...}} -> argv list."""
    cmd = manifest.get("command")
    if isinstance(cmd, str):
        cmd = cmd.split()
    if not cmd:
        raise UsageError("manifest needs a 'command' entry")
    argv = list(cmd)
    for key, val in manifest.get("args", {}).items():
        flag = "--" + key.replace("_", "-")
        if isinstance(val, bool):
            if val:
                argv.append(flag)
        elif isinstance(val, list):
            argv += [flag, ",".join(str(v) for v in val)]
        else:
            argv += [flag, str(val)]
    if "output" in manifest:
        argv += ["--out", str(manifest["output"])]
    return argv


# ---------------------------------------------------------------- output

def _csv_text(rows):
    if not rows:
        return ""
    buf = io.StringIO()
    fields = list(rows[0].keys())
    w = csv.DictWriter(buf, fieldnames=fields)
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in fields})
    return buf.getvalue()


def _flatten(prefix, obj, out):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    else:
        out.append((prefix, obj))


def _inputs(args):
    skip = {"handler", "json", "csv", "out", "no_timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        if args.command == "run":
            extra = [f"--{k}" for k in ("json", "csv") if getattr(args, k)]
            if args.no_timing:
                extra.append("--no-timing")
            if args.out:
                extra += ["--out", args.out]
            return main(manifest_argv(_load_manifest(args.manifest)) + extra)
        if args.threads is None:
            args.threads = default_threads()
        t0 = time.perf_counter()
        out = args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyError as exc:
        print(f"usage error: missing parameter {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"gate failure: {exc}", file=sys.stderr)
        return EXIT_GATE
    report = {"inputs_echo": _inputs(args), "results": out.get("results", {}),
              "std_errors": out.get("std_errors", {}), "verdicts": out.get("verdicts", {})}
    if not args.no_timing:
        report["runtime_ms"] = (time.perf_counter() - t0) * 1000.0
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    report = to_jsonable(report)
    text = json.dumps(report, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.csv:
        rows = out.get("rows")
        if not rows:
            flat = []
            _flatten("", report["results"], flat)
            rows = [{"key": k, "value": v} for k, v in flat]
        sys.stdout.write(_csv_text(to_jsonable(rows)))
    elif args.json:
        print(text)
    else:
        flat = []
        _flatten("", {"results": report["results"], "verdicts": report["verdicts"]}, flat)
        for k, v in flat:
            print(f"{k}: {v}")
    gate_ok = all(bool(v) for v in report["verdicts"].values())
    return EXIT_OK if gate_ok else EXIT_GATE


if __name__ == "__main__":
    sys.exit(main())
