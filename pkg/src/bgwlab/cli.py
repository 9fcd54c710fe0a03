"""Command line front end.

Subcommands
  enumerate  CSV with columns index,steps,size,leaves,internal (one tree per row)
  exact      JSON list of {atom, prob, float}; for --law total a JSON object
  sample     text dump: '# key=value' header lines then one tree per line (step text)
  sweep      CSV with columns n,value,exact after '# key=value' header lines
  verify     one PASS/FAIL line per suite plus detail lines

Exit status: 0 success, 1 failed check or empty conditioning, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction

from .errors import BGWError, EmptyConditioning, SpecParseError
from .exact import (LeavesMax, PoissonType, Star, Transfer, limit_reduced, outdegree_sorted_dist,
                    prob_total_leaves, reduced_dist_internal, reduced_dist_leaves, uniform_on)
from .offspring import parse_family
from .sampling import (RngStream, sample_bgw, sample_Dnk, sample_internal_decomps,
                       sample_leaves_cycle, sample_leaves_exact, sample_rejection_batch,
                       write_samples, Overflow)
from .trees import enumerate_trees, no_unary_trees, recompose_leaves, star
from .verify import (EmpiricalBatch, coarse_nonroot_profile, condensation_stats, sweep,
                     tv_empirical, tv_exact)


class UsageError(Exception):
    pass


@dataclass
class JobConfig:
    subcommand: str = "sweep"
    dist: str = ""
    n: int | None = None
    n_grid: list = field(default_factory=list)
    k: int = 1
    mode: str = "internal"
    sampler: str = "exact"
    N: int = 1000
    seed: int | None = None
    output: str | None = None
    thresholds: dict = field(default_factory=dict)
    metric: str = ""
    limit: str = ""

    @classmethod
    def from_dict(cls, raw: dict):
        known = {f.name for f in fields(cls)}
        extra = set(raw) - known
        if extra:
            raise UsageError(f"unknown config keys: {sorted(extra)}; allowed: {sorted(known)}")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    def validate(self):
        if self.mode not in ("leaves", "internal"):
            raise UsageError("mode must be 'leaves' or 'internal'")
        if self.subcommand == "sweep":
            if not self.metric:
                raise UsageError(f"sweep needs a metric, one of {sorted(METRICS)}")
            if self.metric not in METRICS:
                raise UsageError(f"unknown metric {self.metric!r}; choose from {sorted(METRICS)}")
            if not self.n_grid or any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
                raise UsageError("n_grid must be a nonempty strictly increasing list")
            if METRICS[self.metric][1] and self.seed is None:
                raise UsageError(f"metric {self.metric!r} is random and needs a seed")
        if self.dist:
            parse_family(self.dist)
        bad = set(self.thresholds) - {"final_lt", "final_gt", "final_lt_initial", "final_gt_initial"}
        if bad:
            raise UsageError(f"unknown thresholds {sorted(bad)}")


# -- sweep metrics -----------------------------------------------------------------

def _limit_law(cfg, d):
    name = cfg.limit or "uniform"
    if name == "uniform":
        return uniform_on(enumerate_trees(cfg.k, bound=None))
    if name == "binary":
        return uniform_on(t for t in no_unary_trees(cfg.k) if max(t.degrees) <= 2)
    if name == "leaves-max":
        return limit_reduced(LeavesMax(d, cfg.k))
    if name == "star":
        return limit_reduced(Star(cfg.k))
    if name == "poisson":
        return limit_reduced(PoissonType(cfg.k))
    if name.startswith("transfer:"):
        return limit_reduced(Transfer(Fraction(name.split(":", 1)[1]), cfg.k))
    raise UsageError(f"unknown limit {name!r}")


def _m_tv_reduced(cfg, d, n):
    law = (reduced_dist_leaves if cfg.mode == "leaves" else reduced_dist_internal)(d, n, cfg.k)
    return tv_exact(law, _limit_law(cfg, d))


def _m_star_mass(cfg, d, n):
    return reduced_dist_internal(d, n, cfg.k)[star(cfg.k)]


def _m_root_fraction(cfg, d, n):
    rng = RngStream(cfg.seed, n)
    decs = sample_internal_decomps(d, n, cfg.k, rng, cfg.N)
    return sum(condensation_stats(x).root_out for x in decs) / (n * cfg.N)


def _m_tv_dnk(cfg, d, n):
    from .sampling import sample_Dnk_decomps
    rng = RngStream(cfg.seed, n)
    T = [coarse_nonroot_profile(x) for x in sample_internal_decomps(d, n, cfg.k, rng.substream(0), cfg.N)]
    D = [coarse_nonroot_profile(x) for x in sample_Dnk_decomps(d, n, cfg.k, rng.substream(1), cfg.N)]
    return tv_empirical(EmpiricalBatch(T), EmpiricalBatch(D))


# name -> (function, needs seed)
METRICS = {
    "tv_reduced": (_m_tv_reduced, False),
    "star_mass": (_m_star_mass, False),
    "root_fraction": (_m_root_fraction, True),
    "tv_dnk_coarse": (_m_tv_dnk, True),
}


def run_sweep(cfg: JobConfig, out):
    d = parse_family(cfg.dist)
    fn = METRICS[cfg.metric][0]
    conf = {k: v for k, v in cfg.__dict__.items() if k != "output"}
    table = sweep(lambda n: fn(cfg, d, n), cfg.n_grid, conf, name=cfg.metric)
    table.write_csv(out, cfg.thresholds)
    th = cfg.thresholds
    checks = []
    if "final_lt" in th:
        checks.append(table.values[-1] < float(th["final_lt"]))
    if "final_gt" in th:
        checks.append(table.values[-1] > float(th["final_gt"]))
    if th.get("final_lt_initial"):
        checks.append(table.final_lt_initial())
    if th.get("final_gt_initial"):
        checks.append(table.final_gt_initial())
    return all(checks)


# -- subcommands ----------------------------------------------------------------------

def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def cmd_enumerate(args):
    kw = {}
    f = args.filter
    if f in (None, "none"):
        pass
    elif f == "no_unary":
        kw["no_unary"] = True
    elif f.startswith("leaves="):
        kw["leaves"] = int(f.split("=", 1)[1])
    elif f.startswith("internal="):
        kw["internal"] = int(f.split("=", 1)[1])
    else:
        raise UsageError("filter must be none, no_unary, leaves=K or internal=K")
    out = _open_out(args.out)
    w = csv.writer(out)
    w.writerow(["index", "steps", "size", "leaves", "internal"])
    for i, t in enumerate(enumerate_trees(args.n, **kw)):
        w.writerow([i, t.key(), t.size, t.n_leaves, t.n_internal])
    return 0


def cmd_exact(args):
    d = parse_family(args.dist)
    if args.law == "total":
        if args.mode != "leaves":
            raise UsageError("--law total is available for --mode leaves")
        val, sp = prob_total_leaves(d, args.n, args.k)
        text = json.dumps({"prob": str(val), "scale_power": sp, "float": float(val) * d.scale ** sp})
    elif args.law == "outdeg":
        text = outdegree_sorted_dist(d, args.n, args.k).to_json()
    else:
        fn = reduced_dist_leaves if args.mode == "leaves" else reduced_dist_internal
        text = fn(d, args.n, args.k).to_json()
    out = _open_out(args.out)
    out.write(text + "\n")
    return 0


def cmd_sample(args):
    d = parse_family(args.dist)
    rng = RngStream(args.seed)
    s, n, k = args.sampler, args.n, args.k
    if s == "exact" and args.mode == "leaves":
        trees = [sample_leaves_exact(d, n, k, rng) for _ in range(args.N)]
    elif s == "exact":
        trees = [recompose_leaves(x) for x in sample_internal_decomps(d, n, k, rng, args.N)]
    elif s == "cycle":
        if args.mode != "leaves":
            raise UsageError("the cycle-lemma sampler is available for --mode leaves")
        trees = [sample_leaves_cycle(d, n, k, rng) for _ in range(args.N)]
    elif s == "rejection":
        trees, _ = sample_rejection_batch(d, n, k, args.mode, rng, args.N)
    elif s == "dnk":
        trees = [sample_Dnk(d, n, k, rng) for _ in range(args.N)]
    else:
        raise UsageError(f"unknown sampler {s!r}")
    header = {"family": d.spec(), "n": n, "k": k, "mode": args.mode, "sampler": s,
              "N": args.N, "seed": args.seed, "rng": RngStream.algorithm}
    if args.out:
        write_samples(args.out, trees, header)
    else:
        for key, val in header.items():
            print(f"# {key}={val}")
        for t in trees:
            print(t.key())
    return 0


def cmd_sweep(args):
    with open(args.config) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}") from None
    raw.setdefault("subcommand", "sweep")
    cfg = JobConfig.from_dict(raw)
    out = _open_out(args.out or cfg.output)
    ok = run_sweep(cfg, out)
    if out is not sys.stdout:
        out.close()
    return 0 if ok else 1


def cmd_verify(args):
    from .suites import SUITES, run_suite
    names = list(SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    ok = True
    for name in names:
        res = run_suite(name, args.seed)
        print(res.summary())
        for line in res.lines:
            print("    " + line)
        ok &= res.passed
    return 0 if ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="bgwlab", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="cmd", required=True)

    e = sub.add_parser("enumerate", help="list all plane trees with n vertices (CSV)")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--filter", default="none", help="none | no_unary | leaves=K | internal=K")
    e.add_argument("--out")
    e.set_defaults(func=cmd_enumerate)

    x = sub.add_parser("exact", help="exact conditional laws (JSON)")
    x.add_argument("--dist", required=True, help="e.g. geometric:p=1/2")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--k", type=int, required=True)
    x.add_argument("--mode", choices=["leaves", "internal"], required=True)
    x.add_argument("--law", choices=["reduced", "total", "outdeg"], default="reduced")
    x.add_argument("--out")
    x.set_defaults(func=cmd_exact)

    s = sub.add_parser("sample", help="draw conditioned trees (text dump)")
    s.add_argument("--dist", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--mode", choices=["leaves", "internal"], required=True)
    s.add_argument("--sampler", choices=["exact", "cycle", "rejection", "dnk"], default="exact")
    s.add_argument("--N", type=int, default=1)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    w = sub.add_parser("sweep", help="evaluate a metric over an n grid from a JSON config (CSV)")
    w.add_argument("--config", required=True)
    w.add_argument("--out")
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run a named acceptance suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--seed", type=int)
    v.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except EmptyConditioning as exc:
        print(f"empty conditioning: {exc}", file=sys.stderr)
        return 1
    except (UsageError, SpecParseError, BGWError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
