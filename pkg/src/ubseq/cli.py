"""Command-line front end.

Every command parses and validates all of its inputs before computing
anything, then writes a CSV whose first line is a '#' header holding the
resolved configuration.  Exit codes: 0 success, 2 invalid input, 3 when
``--assert`` is given and the headline value misses ``--target`` by more
than ``--tol``.
"""

import argparse
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .arithseq import (
    INDICATOR_NAMES,
    LISTING_DENSITY,
    automatic_bits,
    indicator_for,
    parse_sequence_spec,
    sequence_values,
    table_size_for,
)
from .cache import load_or_build, write_cache
from .dynsys import (
    check_compatible,
    meq_probe,
    mls_probe,
    parse_flow,
    parse_observable,
    parse_point,
)
from .errors import CapacityError, ChecksumError, UbseqError
from .ergodic import (
    linear_disjointness_series,
    masked_time_average_series,
    time_average_series,
)
from .expsum import (
    a_density,
    default_grid,
    densities,
    number_theory_panel,
    rate_fit,
    residue_densities,
    restricted_weyl_series,
    sup_profile_series,
    theta_parse,
    weyl_series,
)
from .reduce import default_threads, parse_checkpoints, parse_count

log = logging.getLogger("ubseq")

COMMANDS = ("sieve", "seq", "weyl", "density", "dynsys-probe", "converge", "disjoint", "panel", "report")
WEIGHTS = ("tm", "rs", "liouville", "mobius")

EXIT_OK, EXIT_INVALID, EXIT_ASSERT = 0, 2, 3


class ValidationError(UbseqError, ValueError):
    pass


def fmt(x):
    return format(float(x), ".17g")


@dataclass
class ExperimentConfig:
    command: str
    max_n: int
    checkpoints: list = field(default_factory=list)
    thetas: list = field(default_factory=list)
    flow: object = None
    observable: object = None
    sequence: object = None
    mask: Optional[str] = None
    start: object = None
    start_text: str = ""
    weights: Optional[str] = None
    modulus: Optional[int] = None
    residue: Optional[int] = None
    in_set: Optional[str] = None
    delta: float = 1e-4
    epsilon: Optional[float] = None
    pairs: int = 32
    seed: int = 0
    out: Optional[str] = None
    cache: Optional[str] = None
    threads: int = 1
    target: Optional[float] = None
    tol: float = 1e-3
    check: bool = False

    def header(self):
        """'#' header line; output paths and thread count are left out because
        they do not affect the numbers."""
        items = [("command", self.command), ("max", self.max_n)]
        if self.checkpoints:
            items.append(("checkpoints", ",".join(str(c) for c in self.checkpoints)))
        if self.thetas:
            items.append(("theta", ",".join(str(t) for t in self.thetas)))
        if self.sequence is not None:
            items.append(("seq", self.sequence.label))
        for key in ("mask", "weights", "modulus", "residue", "in_set"):
            v = getattr(self, key)
            if v is not None:
                items.append((key.replace("_", "-"), v))
        if self.flow is not None:
            items.append(("flow", self.flow.label))
            items.append(("start", self.start_text or "default"))
        if self.observable is not None:
            items.append(("obs", self.observable.label))
        if self.command == "dynsys-probe":
            items += [("delta", fmt(self.delta)), ("pairs", self.pairs)]
            items.append(("epsilon", "none" if self.epsilon is None else fmt(self.epsilon)))
        items.append(("seed", self.seed))
        if self.check and self.command != "report":
            items += [("target", "auto" if self.target is None else fmt(self.target)), ("tol", fmt(self.tol))]
        return "# ubseq " + __version__ + " " + " ".join(f"{k}={v}" for k, v in items)


# --- argument parsing --------------------------------------------------------------

def _count(text):
    try:
        v = parse_count(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _seed(text):
    try:
        v = parse_count(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max", type=_count, help="number of terms N (accepts 1e7)")
    common.add_argument("--checkpoints", help="geo:start:ratio:count or a comma list")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--out", help="output file (stdout when omitted)")
    common.add_argument("--cache", help="sieve cache file, reused and refreshed")
    common.add_argument("--threads", type=int, default=default_threads())
    common.add_argument("--assert", dest="check", action="store_true",
                        help="exit 3 unless |value - target| <= tol")
    common.add_argument("--target", type=float)
    common.add_argument("--tol", type=float, default=1e-3)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="ubseq", description="Averages along uniformly behaved sequences.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", parents=[common], help="sieve Omega, omega, mu, squarefree")
    s.add_argument("--verify", action="store_true", help="reload the written cache and compare")

    s = sub.add_parser("seq", parents=[common], help="list a_1..a_N")
    s.add_argument("--seq", required=True)

    s = sub.add_parser("weyl", parents=[common], help="(1/N) sum e(a_n theta)")
    s.add_argument("--seq", default="omega")
    s.add_argument("--theta", default="golden", help="angle, comma list, or 'grid' for a sup profile")
    s.add_argument("--mask", choices=INDICATOR_NAMES)
    s.add_argument("--weights", choices=("tm", "rs"), help="weights for --theta grid")

    s = sub.add_parser("density", parents=[common], help="residue or set densities")
    s.add_argument("--seq", default="sf")
    s.add_argument("--modulus", type=int)
    s.add_argument("--residue", type=int)
    s.add_argument("--in-set", dest="in_set", choices=INDICATOR_NAMES,
                   help="a-density of this set along --seq")

    s = sub.add_parser("dynsys-probe", parents=[common], help="a-MLS / a-MEQ probe")
    s.add_argument("--flow", default="denjoy:golden:0.5:64")
    s.add_argument("--seq", default="tm")
    s.add_argument("--delta", type=float, default=1e-4)
    s.add_argument("--epsilon", type=float, help="omit for the mean-distance probe")
    s.add_argument("--pairs", type=int, default=32)

    s = sub.add_parser("converge", parents=[common], help="time averages along a_n")
    s.add_argument("--flow", default="cyclic:2")
    s.add_argument("--obs", default="state:0")
    s.add_argument("--seq", default="omega")
    s.add_argument("--mask", choices=INDICATOR_NAMES)
    s.add_argument("--start")

    s = sub.add_parser("disjoint", parents=[common], help="(1/N) sum c_n phi(f^n x)")
    s.add_argument("--weights", choices=WEIGHTS, default="liouville")
    s.add_argument("--flow", default="rotation:golden")
    s.add_argument("--obs", default="harm:1:re")
    s.add_argument("--start")

    sub.add_parser("panel", parents=[common], help="Liouville, Mertens and prime counting means")

    sub.add_parser("report", parents=[common], help="CSV bundle and summary in --out DIR")
    return p


def _fail(msg):
    raise ValidationError(msg)


def resolve(args):
    """Turn parsed arguments into an ExperimentConfig; raises ValidationError."""
    cmd = args.command
    default_max = {"report": 10**6, "panel": 10**6, "dynsys-probe": 10**5}.get(cmd, 10**6)
    cps = None
    if args.checkpoints and cmd not in ("sieve", "seq", "dynsys-probe", "report"):
        try:
            cps = parse_checkpoints(args.checkpoints, args.max or 1)
        except ValueError as exc:
            _fail(str(exc))
    max_n = args.max or (cps[-1] if cps else default_max)
    if cps is None and cmd not in ("sieve", "seq", "dynsys-probe", "report"):
        cps = parse_checkpoints(None, max_n)
    if cps and cps[-1] > max_n:
        _fail(f"checkpoint {cps[-1]} beyond --max {max_n}")
    if args.threads < 1:
        _fail("--threads must be positive")
    if not math.isfinite(args.tol) or args.tol < 0:
        _fail("--tol must be a non-negative number")
    cfg = ExperimentConfig(cmd, max_n, cps or [], seed=args.seed, out=args.out, cache=args.cache,
                           threads=args.threads, target=args.target, tol=args.tol, check=args.check)
    if cfg.check and cmd in ("sieve", "seq"):
        _fail(f"--assert has nothing to check for {cmd}")

    try:
        if hasattr(args, "seq"):
            cfg.sequence = parse_sequence_spec(args.seq)
            if cfg.sequence.kind == "file" and not Path(cfg.sequence.path).is_file():
                _fail(f"sequence file not found: {cfg.sequence.path}")
        if hasattr(args, "theta"):
            if args.theta == "grid":
                cfg.thetas = ["grid"]
                cfg.weights = args.weights or "tm"
                cfg.sequence = None
            else:
                cfg.thetas = [theta_parse(t) for t in args.theta.split(",") if t.strip()]
                if not cfg.thetas:
                    _fail("--theta is empty")
                if args.weights:
                    _fail("--weights only applies to --theta grid")
        if getattr(args, "mask", None):
            cfg.mask = args.mask
        if cmd == "disjoint":
            cfg.weights = args.weights
        if hasattr(args, "flow"):
            cfg.flow = parse_flow(args.flow)
        if hasattr(args, "obs"):
            cfg.observable = parse_observable(args.obs)
            check_compatible(cfg.flow, cfg.observable)
        if cfg.flow is not None:
            cfg.start_text = getattr(args, "start", None) or ""
            cfg.start = parse_point(cfg.flow, cfg.start_text)
    except ValidationError:
        raise
    except (UbseqError, ValueError, TypeError, OverflowError) as exc:
        _fail(str(exc))

    if cmd == "density":
        cfg.modulus, cfg.residue, cfg.in_set = args.modulus, args.residue, args.in_set
        if cfg.modulus is not None and cfg.modulus < 2:
            _fail("--modulus must be at least 2")
        if cfg.residue is not None and (cfg.modulus is None or not 0 <= cfg.residue < cfg.modulus):
            _fail("--residue needs --modulus and must lie in [0, modulus)")
        if cfg.modulus is not None and cfg.in_set:
            _fail("--modulus and --in-set are exclusive")
        if cfg.modulus is None and not cfg.in_set and cfg.sequence.kind != "subseq":
            _fail("density of a non-set sequence needs --modulus or --in-set")
    if cmd == "dynsys-probe":
        cfg.delta, cfg.epsilon, cfg.pairs = args.delta, args.epsilon, args.pairs
        if not 0 < cfg.delta <= 1 or (cfg.epsilon is not None and cfg.epsilon <= 0) or cfg.pairs < 1:
            _fail("need 0 < delta <= 1, epsilon > 0 and pairs >= 1")
    if cmd == "sieve" and not (args.out or args.cache):
        _fail("sieve needs --out (or --cache)")
    if cmd == "report" and not args.out:
        _fail("report needs --out DIR")
    _check_writable(cfg)
    return cfg


def _check_writable(cfg):
    paths = [p for p in (cfg.out, cfg.cache) if p]
    for p in paths:
        path = Path(p)
        if cfg.command == "report" and p == cfg.out:
            parent = path if path.exists() else path.parent
        else:
            if path.is_dir():
                _fail(f"{p} is a directory")
            parent = path.parent
        parent = parent if str(parent) else Path(".")
        if not parent.exists():
            if cfg.command == "report" and p == cfg.out and parent.parent.exists():
                continue
            _fail(f"output directory does not exist: {parent}")
        if not os.access(parent, os.W_OK):
            _fail(f"cannot write to {parent}")


# --- computation helpers -----------------------------------------------------------

class Tables:
    """Lazily built sieve tables, grown on demand and backed by --cache."""

    def __init__(self, cache=None):
        self.cache = cache
        self.table = None

    def get(self, n):
        n = max(int(n), 2)
        if self.table is None or self.table.max_n < n:
            self.table = load_or_build(self.cache, n)
        return self.table if self.table.max_n == n else self.table.prefix(n)


def values_for(spec, n, tables):
    """a_1..a_n, growing the sieve for listings when the density guess is short."""
    if not spec.needs_table:
        return sequence_values(spec, n)
    size = table_size_for(spec, n)
    while True:
        table = tables.get(size)
        try:
            return sequence_values(spec, n, table)
        except UbseqError:
            if spec.kind != "subseq":
                raise
            size = int(size * 1.25) + 1024


def indicator(name, n, tables):
    if name in ("tm", "rs"):
        from .arithseq import automatic_indicator

        return automatic_indicator(name, n)
    return indicator_for(name, tables.get(n))


def weights_for(name, n, tables):
    """c_1..c_n as float64."""
    if name in ("tm", "rs"):
        return 2.0 * automatic_bits(name, n + 1)[1:].astype(np.float64) - 1.0
    t = tables.get(n)
    arr = t.liouville if name == "liouville" else t.mobius
    return arr[1 : n + 1].astype(np.float64)


def _cell(c):
    if isinstance(c, str):
        return c
    if isinstance(c, (int, np.integer)):
        return str(int(c))
    return fmt(c)


class Csv:
    def __init__(self, header, columns):
        self.lines = [header, ",".join(columns)]

    def row(self, *cells):
        self.lines.append(",".join(_cell(c) for c in cells))

    def text(self):
        return "\n".join(self.lines) + "\n"


def emit(cfg, text, path=None):
    path = path or cfg.out
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# --- commands ----------------------------------------------------------------------

def cmd_sieve(cfg, tables):
    from .cache import read_cache

    table = tables.get(cfg.max_n) if cfg.cache and not cfg.out else None
    if table is None:
        from .arithseq import build_sieve_tables

        table = build_sieve_tables(cfg.max_n)
        write_cache(cfg.out, table)
    path = cfg.out or cfg.cache
    ok = read_cache(path).equals(table)
    sys.stdout.write(f"{cfg.header()}\nmax_n,squarefree,primes,verified\n"
                     f"{table.max_n},{int(table.squarefree.sum())},{int((table.big_omega == 1).sum())},{int(ok)}\n")
    return None if ok else "reloaded cache differs"


def cmd_seq(cfg, tables):
    vals = values_for(cfg.sequence, cfg.max_n, tables)
    body = "\n".join(f"{k},{int(v)}" for k, v in enumerate(vals, 1))
    emit(cfg, f"{cfg.header()}\nn,value\n{body}\n")
    return None


def cmd_weyl(cfg, tables):
    if cfg.thetas == ["grid"]:
        c = weights_for(cfg.weights, cfg.max_n, tables)
        prof = sup_profile_series(c, default_grid(), cfg.checkpoints)
        out = Csv(cfg.header(), ["N", "sup", "sup_over_sqrtN", "argmax"])
        for n, v, th in prof:
            out.row(n, v, v / math.sqrt(n), str(th))
        emit(cfg, out.text())
        if len(prof) >= 2:
            fit = rate_fit([(n, v) for n, v, _ in prof])
            log.info("slope %.4f r2 %.4f", fit.slope, fit.r_squared)
        return prof[-1][1]
    vals = values_for(cfg.sequence, cfg.max_n, tables)
    mask = indicator(cfg.mask, cfg.max_n, tables) if cfg.mask else None
    multi = len(cfg.thetas) > 1
    out = Csv(cfg.header(), (["theta"] if multi else []) + ["N", "re", "im", "abs"])
    headline = 0.0
    for th in cfg.thetas:
        if mask is None:
            s = weyl_series(vals, th, cfg.checkpoints, cfg.sequence.label, cfg.threads)
        else:
            s = restricted_weyl_series(vals, mask, th, cfg.checkpoints, cfg.sequence.label, cfg.threads)
        for n, v in zip(s.checkpoints, s.values):
            out.row(*([str(th)] if multi else []), n, v.real, v.imag, abs(v))
        headline = max(headline, abs(s.values[-1]))
    emit(cfg, out.text())
    return headline


def cmd_density(cfg, tables):
    spec = cfg.sequence
    if cfg.modulus is not None:
        vals = values_for(spec, cfg.max_n, tables)
        m = cfg.modulus
        reps = residue_densities(vals, m, cfg.checkpoints)
        out = Csv(cfg.header(), ["N"] + [f"r{r}" for r in range(m)])
        for rep in reps:
            out.row(rep.n, *rep.densities)
        emit(cfg, out.text())
        last = reps[-1].densities
        if cfg.residue is not None:
            return float(last[cfg.residue])
        target = 1.0 / m if cfg.target is None else cfg.target
        return target + float(np.max(np.abs(last - target)))
    if cfg.in_set:
        vals = values_for(spec, cfg.max_n, tables)
        ind = indicator(cfg.in_set, int(vals.max()), tables)
        series = a_density(vals, ind, cfg.checkpoints)
    else:
        series = densities(indicator(spec.indicator, cfg.max_n, tables), cfg.checkpoints).series
    out = Csv(cfg.header(), ["N", "value"])
    for n, v in series:
        out.row(n, v)
    emit(cfg, out.text())
    return series[-1][1]


def _auto_target(cfg):
    if cfg.target is not None:
        return cfg.target
    if cfg.command == "density":
        if cfg.modulus is not None:
            return 1.0 / cfg.modulus
        if cfg.in_set is None:
            return LISTING_DENSITY[cfg.sequence.indicator]
        return None
    if cfg.command == "converge":
        avg = cfg.observable.space_average(cfg.flow)
        return avg * LISTING_DENSITY[cfg.mask] if cfg.mask else avg
    return 0.0


def cmd_probe(cfg, tables):
    vals = values_for(cfg.sequence, cfg.max_n, tables)
    if cfg.epsilon is None:
        rep = meq_probe(cfg.flow, vals, cfg.delta, cfg.pairs, cfg.max_n, cfg.seed, cfg.threads)
    else:
        rep = mls_probe(cfg.flow, vals, cfg.delta, cfg.epsilon, cfg.pairs, cfg.max_n, cfg.seed, cfg.threads)
    out = Csv(cfg.header(), ["N", "delta", "epsilon", "pairs", "worst_exceptional_density", "worst_mean_distance"])
    out.row(cfg.max_n, rep.delta, rep.epsilon, rep.pairs_tested,
            rep.worst_exceptional_density, rep.worst_mean_distance)
    emit(cfg, out.text())
    return rep.worst_mean_distance if cfg.epsilon is None else rep.worst_exceptional_density


def cmd_converge(cfg, tables):
    vals = values_for(cfg.sequence, cfg.max_n, tables)
    label = cfg.sequence.label
    if cfg.mask:
        mask = indicator(cfg.mask, cfg.max_n, tables)
        s = masked_time_average_series(cfg.flow, cfg.observable, cfg.start, vals, mask,
                                       cfg.checkpoints, label, cfg.threads)
        out = Csv(cfg.header(), ["N", "value", "conditional_value"])
        for n, v, c in zip(s.checkpoints, s.values, s.conditional):
            out.row(n, v, c)
    else:
        s = time_average_series(cfg.flow, cfg.observable, cfg.start, vals, cfg.checkpoints, label, cfg.threads)
        out = Csv(cfg.header(), ["N", "value"])
        for n, v in zip(s.checkpoints, s.values):
            out.row(n, v)
    emit(cfg, out.text())
    return s.final


def cmd_disjoint(cfg, tables):
    c = weights_for(cfg.weights, cfg.max_n, tables)
    s = linear_disjointness_series(c, cfg.flow, cfg.observable, cfg.start, cfg.checkpoints,
                                   cfg.weights, cfg.threads)
    out = Csv(cfg.header(), ["N", "value"])
    for n, v in zip(s.checkpoints, s.values):
        out.row(n, v)
    emit(cfg, out.text())
    return abs(s.final)


def cmd_panel(cfg, tables):
    p = number_theory_panel(tables.get(cfg.max_n), cfg.checkpoints)
    out = Csv(cfg.header(), ["N", "liouville_mean", "mertens_mean", "pnt_ratio"])
    for row in zip(p.checkpoints, p.liouville_mean, p.mertens_mean, p.pnt_ratio):
        out.row(*row)
    emit(cfg, out.text())
    return max(abs(p.liouville_mean[-1]), abs(p.mertens_mean[-1]))


def cmd_report(cfg, tables):
    """Fixed bundle of experiments at --max; summary.csv holds one line per check."""
    from .reduce import geometric_checkpoints

    root = Path(cfg.out)
    root.mkdir(parents=True, exist_ok=True)
    n = cfg.max_n
    cps = geometric_checkpoints(n)
    checks = []

    def run(name, argv, target, tol, headline=None):
        args = build_parser().parse_args(argv + ["--max", str(n), "--seed", str(cfg.seed),
                                                 "--threads", str(cfg.threads)])
        sub = resolve(args)
        sub.out = str(root / f"{name}.csv")
        value = COMMANDS_RUN[sub.command](sub, tables)
        if headline is not None:
            value = headline(sub)
        checks.append((name, value, target, tol))

    run("sf_density", ["density", "--seq", "sf"], 6 / math.pi**2, 2e-3)
    run("omega_mod2", ["density", "--seq", "omega", "--modulus", "2", "--residue", "0"], 0.5, 0.01)
    run("weyl_omega_golden", ["weyl", "--seq", "omega", "--theta", "golden"], 0.0, 0.05)
    run("weyl_omega_half", ["weyl", "--seq", "omega", "--theta", "rat:1/2"], 0.0, 0.01)
    run("panel", ["panel"], 0.0, 0.01)
    run("converge_cyclic_omega", ["converge", "--flow", "cyclic:2", "--obs", "state:0", "--seq", "omega"], 0.5, 0.01)
    run("converge_masked_smallomega",
        ["converge", "--flow", "cyclic:2", "--obs", "state:0", "--seq", "smallomega", "--mask", "sf"],
        3 / math.pi**2, 0.01)
    run("disjoint_tm_golden", ["disjoint", "--weights", "tm"], 0.0, 0.05)
    run("disjoint_liouville_golden", ["disjoint", "--weights", "liouville"], 0.0, 0.05)
    top = 1 << int(math.log2(n))
    sup_cps = ",".join(str(1 << k) for k in range(10, int(math.log2(top)) + 1))
    if top >= 1 << 11:
        for w in ("tm", "rs"):
            run(f"sup_{w}", ["weyl", "--theta", "grid", "--weights", w, "--checkpoints", sup_cps], None, None)
        tm = np.genfromtxt(root / "sup_tm.csv", delimiter=",", skip_header=2)
        fit = rate_fit([(a, b) for a, b in tm[:, :2]])
        checks[-2] = ("sup_tm_slope", fit.slope, math.log(3) / math.log(4), 0.075)
        rs = np.genfromtxt(root / "sup_rs.csv", delimiter=",", skip_header=2)
        checks[-1] = ("sup_rs_over_sqrtN", float(np.max(rs[:, 2])), 0.0, 2 + math.sqrt(2))

    out = Csv(cfg.header(), ["check", "value", "target", "tolerance", "pass"])
    failed = 0
    for name, value, target, tol in checks:
        ok = abs(value - target) <= tol
        failed += not ok
        out.row(name, value, target, tol, "1" if ok else "0")
    emit(cfg, out.text(), root / "summary.csv")
    return failed


COMMANDS_RUN = {
    "sieve": cmd_sieve,
    "seq": cmd_seq,
    "weyl": cmd_weyl,
    "density": cmd_density,
    "dynsys-probe": cmd_probe,
    "converge": cmd_converge,
    "disjoint": cmd_disjoint,
    "panel": cmd_panel,
    "report": cmd_report,
}


def run(cfg):
    """Execute a resolved config; returns the process exit code."""
    tables = Tables(cfg.cache)
    try:
        headline = COMMANDS_RUN[cfg.command](cfg, tables)
    except (CapacityError, ChecksumError, UbseqError, OverflowError, ValueError) as exc:
        print(f"ubseq: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"ubseq: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if cfg.command == "sieve":
        return EXIT_OK if headline is None else EXIT_INVALID
    if not cfg.check:
        return EXIT_OK
    if cfg.command == "report":
        ok = headline == 0
        print(f"report: {headline} failed check(s)", file=sys.stderr)
    else:
        target = _auto_target(cfg)
        if target is None:
            print("ubseq: error: no default target, pass --target", file=sys.stderr)
            return EXIT_INVALID
        ok = abs(headline - target) <= cfg.tol
        print(f"{cfg.command}: value {fmt(headline)} target {fmt(target)} tol {fmt(cfg.tol)} "
              f"{'ok' if ok else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_ASSERT


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        cfg = resolve(args)
    except ValidationError as exc:
        print(f"ubseq: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
