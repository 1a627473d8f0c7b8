"""Command-line interface: root enumeration, statistics, densities, figures.

Subcommands
-----------
roots       sieve the root sequence, one row per root
paircorr    empirical pair-correlation histogram of the first N roots
density     theoretical pair-correlation density on a v grid
figure      paired empirical + theoretical data files (figures 1, 2, 3)
verify      correspondence test battery with a JSON report
units       totally positive fundamental units of the two orders
classgroup  narrow class representatives (definite classes for D < 0)

Exit codes: 0 success, 1 runtime failure, 2 invalid configuration.
--threads (or the GEOROOTS_THREADS variable) caps worker threads where a
command supports them; output bytes never depend on the thread count.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .csvio import fmt_float, write_table
from .density import default_grid, omega
from .geodesics import base_geodesic_set, enumerate_tops
from .negdisc import (
    class_forms,
    enumerate_orbit_points,
    sieve_roots_neg,
    take_n_neg,
    validate_negative_discriminant,
)
from .orders import (
    OrderTag,
    ideal_conjugate,
    ideal_from_root,
    ideal_mul,
    is_invertible,
    narrow_class_group,
    unit_relation,
    validate_discriminant,
)
from .roots import RootFilter, SequenceExhausted, sieve_roots, take_n
from .statistics import pair_correlation


class ConfigError(ValueError):
    """Invalid run configuration; reported with exit code 2."""


@dataclass
class RunConfig:
    """One command's validated knobs (not every field matters to all)."""

    D: int = None
    n: int = 1
    nu: int = 0
    N: int = None
    M: int = None
    bins: int = 100
    range: float = 5.0
    q_max: float = 50.0
    step: float = 0.01
    class_filter: str = "total"    # total | O1 | O2
    out: str = None
    outdir: str = "."
    format: str = "csv"
    seed: int = 0
    threads: int = None
    figure: int = None

    def root_filter(self) -> RootFilter:
        try:
            filt = RootFilter(self.n, self.nu)
            if self.D is not None:
                filt.validate_for(self.D)
        except ValueError as e:
            raise ConfigError(str(e))
        return filt


def _check_discriminant(D: int):
    try:
        if D < 0:
            validate_negative_discriminant(D)
        else:
            validate_discriminant(D)
    except ValueError as e:
        raise ConfigError(str(e))


def _resolve_threads(threads):
    if threads is None:
        env = os.environ.get("GEOROOTS_THREADS")
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise ConfigError(f"GEOROOTS_THREADS={env!r} is not a number")
    if threads is not None and threads < 1:
        raise ConfigError("threads must be >= 1")
    return threads


def config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    for name in vars(cfg):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if cfg.D is not None:
        _check_discriminant(cfg.D)
    cfg.root_filter()
    cfg.threads = _resolve_threads(cfg.threads)
    for name, low in (("bins", 1), ("M", 1), ("N", 1)):
        v = getattr(cfg, name)
        if v is not None and v < low:
            raise ConfigError(f"{name} must be >= {low}")
    if cfg.range <= 0 or cfg.step <= 0:
        raise ConfigError("range and step must be positive")
    if cfg.q_max <= 1:
        raise ConfigError("qmax must exceed 1")
    return cfg


# ----------------------------------------------------------------------
# shared helpers

def _sieve_fn(D):
    return sieve_roots_neg if D < 0 else sieve_roots


def _first_n_points(cfg: RunConfig):
    """First N roots, restricted to one order's subsequence if asked."""
    filt = cfg.root_filter()
    if cfg.class_filter == "total":
        take = take_n_neg if cfg.D < 0 else take_n
        return take(cfg.D, cfg.N, filt)
    want_o1 = cfg.class_filter == "O1"
    sieve = _sieve_fn(cfg.D)
    M = max(32, 4 * cfg.N * filt.n)
    for _ in range(24):
        seq = sieve(cfg.D, M, filt)
        tags = seq.class_tags()
        sub = seq.subset(tags if want_o1 else ~tags)
        if len(sub) >= cfg.N:
            return sub.head(cfg.N)
        M *= 2
    raise SequenceExhausted(
        f"fewer than {cfg.N} {cfg.class_filter} roots below m = {M}")


def _class_mask(base, class_filter):
    """Base-geodesic indices carrying one order's roots (None = all)."""
    if class_filter == "total":
        return None
    side = "I" if class_filter == "O1" else "J"
    mask = [i for i, g in enumerate(base.geodesics) if g.source[0] == side]
    if not mask:
        raise ConfigError(f"no {class_filter} geodesics for this base set")
    return mask


def _paircorr_rows(result):
    centers = result.histogram.centers()
    counts = result.histogram.counts
    dens = result.values()
    n = result.n_points
    return [(float(c), int(k), k / n, float(d))
            for c, k, d in zip(centers, counts, dens)]


# ----------------------------------------------------------------------
# commands

def cmd_roots(cfg: RunConfig) -> int:
    seq = _sieve_fn(cfg.D)(cfg.D, cfg.M, cfg.root_filter())
    meta = {"command": "roots", "D": cfg.D, "n": cfg.n, "nu": cfg.nu,
            "M": cfg.M, "count": len(seq)}
    write_table(cfg.out, cfg.format, meta, ("m", "mu", "class"),
                seq.iter_rows())
    return 0


def cmd_paircorr(cfg: RunConfig) -> int:
    if cfg.N < 2:
        raise ConfigError("need N >= 2 for pair statistics")
    points = _first_n_points(cfg)
    result = pair_correlation(points, lo=-cfg.range, hi=cfg.range,
                              bins=cfg.bins, threads=cfg.threads)
    meta = {"command": "paircorr", "D": cfg.D, "n": cfg.n, "nu": cfg.nu,
            "N": cfg.N, "class": cfg.class_filter,
            "lo": -cfg.range, "hi": cfg.range, "bins": cfg.bins}
    write_table(cfg.out, cfg.format, meta,
                ("center", "count", "r2", "density"), _paircorr_rows(result))
    return 0


def cmd_density(cfg: RunConfig) -> int:
    if cfg.D < 0:
        raise ConfigError("the theoretical density needs D > 0")
    if cfg.n != 1:
        raise ConfigError("the theoretical density is available for n = 1")
    base = base_geodesic_set(cfg.D)
    mask = _class_mask(base, cfg.class_filter)
    grid = default_grid(-cfg.range, cfg.range, cfg.step, v_min=cfg.step)
    tab = omega(base, grid, q_max=cfg.q_max, mask=mask)
    meta = {"command": "density", "D": cfg.D, "n": 1,
            "class": cfg.class_filter, "kappa": tab.kappa, "vol": tab.vol,
            "q_max": tab.q_max, "terms": tab.terms_used,
            "tail_estimate": tab.tail_estimate, "skipped": tab.skipped}
    rows = [(float(v), float(w)) for v, w in zip(tab.grid, tab.omega)]
    write_table(cfg.out, cfg.format, meta, ("v", "omega"), rows)
    return 0


# per-figure layout: discriminant, panel classes, q_max per panel
_FIGURES = {
    1: (5, ("total",), (60.0,)),
    2: (5, ("O1", "O2"), (60.0, 180.0)),
    3: (17, ("O1", "O2"), (60.0, 60.0)),
}

_FIG_BINS = 100
_FIG_HI = 5.0


def cmd_figure(cfg: RunConfig) -> int:
    D, classes, qmaxes = _FIGURES[cfg.figure]
    cfg.D = D
    emp_cols = ["center"]
    emp_data = []
    for cls in classes:
        sub = RunConfig(D=D, N=cfg.N, class_filter=cls, threads=cfg.threads)
        points = _first_n_points(sub)
        res = pair_correlation(points, lo=0.0, hi=_FIG_HI, bins=_FIG_BINS,
                               threads=cfg.threads)
        emp_cols.append(f"density_{cls}")
        emp_data.append(res.values())
    centers = res.histogram.centers()

    base = base_geodesic_set(D)
    th_cols = ["v"]
    th_data = []
    kappas = []
    for cls, qm in zip(classes, qmaxes):
        tab = omega(base, centers, q_max=qm, mask=_class_mask(base, cls))
        th_cols.append(f"omega_{cls}")
        th_data.append(tab.omega)
        kappas.append(tab.kappa)

    meta = {"command": "figure", "figure": cfg.figure, "D": D, "N": cfg.N,
            "bins": _FIG_BINS, "lo": 0.0, "hi": _FIG_HI,
            "classes": " ".join(classes)}
    emp_path = os.path.join(cfg.outdir, f"georoots_fig{cfg.figure}_empirical.csv")
    th_path = os.path.join(cfg.outdir, f"georoots_fig{cfg.figure}_theory.csv")
    emp_rows = [tuple(map(float, row))
                for row in zip(centers, *emp_data)]
    write_table(emp_path, "csv", meta, emp_cols, emp_rows)
    th_meta = dict(meta)
    th_meta["q_max"] = " ".join(fmt_float(q) for q in qmaxes)
    th_meta["kappa"] = " ".join(fmt_float(k) for k in kappas)
    th_rows = [tuple(map(float, row)) for row in zip(centers, *th_data)]
    write_table(th_path, "csv", th_meta, th_cols, th_rows)
    print(emp_path)
    print(th_path)
    return 0


def _check(checks, name, ok, detail):
    checks.append({"name": name, "pass": bool(ok), "detail": detail})


def _verify_positive(cfg: RunConfig, checks):
    D, M = cfg.D, cfg.M
    filt = cfg.root_filter()
    base = base_geodesic_set(D, cfg.n, cfg.nu)
    got = enumerate_tops(base, M)
    seq = sieve_roots(D, M, filt)
    sieve_set = {(int(m), int(mu)) for m, mu in zip(seq.ms, seq.mus)}
    _check(checks, "orbit_equals_sieve",
           got.roots == sieve_set and got.duplicates == 0,
           {"orbit": len(got.roots), "sieve": len(sieve_set),
            "duplicates": got.duplicates})

    bound = min(M, 500)
    bad = 0
    total = 0
    for m, mu in sieve_set:
        if m > bound:
            continue
        total += 1
        ideal = ideal_from_root(D, m, mu, OrderTag.O1)
        prod = ideal_mul(ideal, ideal_conjugate(ideal))
        inv = is_invertible(D, m, mu)
        if (prod == ideal_from_root(D, 1, 0, OrderTag.O1, m)) != inv:
            bad += 1
        if D % 8 == 5 and inv != (m % 4 != 2):
            bad += 1
    _check(checks, "ideal_norm_parity", bad == 0,
           {"roots_checked": total, "exceptions": bad})

    u = unit_relation(D)
    ok = u.relation in ("Equal", "Cube") and \
        (u.relation == "Equal" or D % 8 == 5)
    _check(checks, "unit_relation", ok,
           {"eps1": str(u.eps1), "eps2": str(u.eps2), "relation": u.relation})

    if cfg.n == 1:
        h1 = narrow_class_group(D, OrderTag.O1).h_plus
        h2 = narrow_class_group(D, OrderTag.O2).h_plus
        _check(checks, "base_count_is_class_number",
               len(base.geodesics) == h1 + h2,
               {"geodesics": len(base.geodesics), "h1_plus": h1,
                "h2_plus": h2})


def _verify_negative(cfg: RunConfig, checks):
    D, M = cfg.D, cfg.M
    got = enumerate_orbit_points(D, M, cfg.root_filter())
    seq = sieve_roots_neg(D, M, cfg.root_filter())
    sieve_set = {(int(m), int(mu)) for m, mu in zip(seq.ms, seq.mus)}
    _check(checks, "orbit_equals_sieve",
           got.roots == sieve_set and got.duplicates == 0,
           {"orbit": len(got.roots), "sieve": len(sieve_set),
            "duplicates": got.duplicates})
    tags = seq.class_tags()
    qs = (D - seq.mus * seq.mus) // seq.ms
    o2 = (seq.ms % 2 == 0) & (qs % 2 == 0)
    _check(checks, "parity_partition", bool(np.all(tags == ~o2)),
           {"roots": len(seq), "o1": int(tags.sum())})


def cmd_verify(cfg: RunConfig) -> int:
    checks = []
    if cfg.D < 0:
        _verify_negative(cfg, checks)
    else:
        _verify_positive(cfg, checks)
    report = {"command": "verify", "D": cfg.D, "n": cfg.n, "nu": cfg.nu,
              "M": cfg.M, "checks": checks,
              "all_pass": all(c["pass"] for c in checks)}
    text = json.dumps(report, indent=2) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["all_pass"] else 1


def cmd_units(cfg: RunConfig) -> int:
    if cfg.D < 0:
        raise ConfigError("unit relation diagnostics need D > 0")
    u = unit_relation(cfg.D)
    meta = {"command": "units", "D": cfg.D}
    rows = [(str(u.eps1), str(u.eps2), u.relation)]
    write_table(cfg.out, cfg.format, meta, ("eps1", "eps2", "relation"), rows)
    return 0


def cmd_classgroup(cfg: RunConfig) -> int:
    meta = {"command": "classgroup", "D": cfg.D}
    rows = []
    if cfg.D > 0:
        g1 = narrow_class_group(cfg.D, OrderTag.O1)
        g2 = narrow_class_group(cfg.D, OrderTag.O2)
        meta["h1_plus"] = g1.h_plus
        meta["h2_plus"] = g2.h_plus
        for side, grp in (("O1", g1), ("O2", g2)):
            for i, rep in enumerate(grp.reps):
                rows.append((side, i, rep.m, rep.mu))
        write_table(cfg.out, cfg.format, meta,
                    ("side", "index", "m", "mu"), rows)
    else:
        f1 = class_forms(cfg.D, OrderTag.O1)
        f2 = class_forms(cfg.D, OrderTag.O2)
        meta["h1"] = len(f1)
        meta["h2"] = len(f2)
        for side, forms in (("O1", f1), ("O2", f2)):
            for i, (a, b, c) in enumerate(forms):
                rows.append((side, i, a, b, c))
        write_table(cfg.out, cfg.format, meta,
                    ("side", "index", "a", "b", "c"), rows)
    return 0


# ----------------------------------------------------------------------
# parser

def _add_common(sp, *, disc=True, filt=True, table_out=True):
    if disc:
        sp.add_argument("--D", type=int, required=True,
                        help="discriminant: squarefree, = 1 (mod 4), "
                             "either sign")
    if filt:
        sp.add_argument("--n", type=int, default=1,
                        help="congruence level (m = 0 mod n)")
        sp.add_argument("--nu", type=int, default=0,
                        help="root residue (mu = nu mod n)")
    if table_out:
        sp.add_argument("--out", default=None, help="output path (stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="georoots",
        description="Roots of mu^2 = D (mod m): enumeration, geodesic "
                    "orbits, and pair-correlation statistics.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("roots", help="sieve the root sequence")
    _add_common(sp)
    sp.add_argument("--M", type=int, required=True, help="modulus bound")
    sp.set_defaults(func=cmd_roots)

    sp = sub.add_parser("paircorr", help="empirical pair correlation")
    _add_common(sp)
    sp.add_argument("--N", type=int, required=True, help="number of points")
    sp.add_argument("--bins", type=int, default=100)
    sp.add_argument("--range", type=float, default=5.0,
                    help="histogram covers [-range, range]")
    sp.add_argument("--class", dest="class_filter", default="total",
                    choices=("total", "O1", "O2"))
    sp.set_defaults(func=cmd_paircorr)

    sp = sub.add_parser("density", help="theoretical density on a v grid")
    _add_common(sp, filt=False)
    sp.add_argument("--qmax", dest="q_max", type=float, default=50.0,
                    help="double-coset truncation")
    sp.add_argument("--range", type=float, default=5.0)
    sp.add_argument("--step", type=float, default=0.01)
    sp.add_argument("--class", dest="class_filter", default="total",
                    choices=("total", "O1", "O2"))
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("figure",
                        help="write paired empirical+theory files")
    sp.add_argument("figure", type=int, choices=(1, 2, 3))
    sp.add_argument("--N", type=int, default=1_000_000)
    sp.add_argument("--outdir", default=".")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("verify", help="correspondence test battery")
    _add_common(sp, table_out=False)
    sp.add_argument("--M", type=int, default=2000, help="modulus bound")
    sp.add_argument("--out", default=None, help="report path (stdout)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("units", help="fundamental unit relation")
    _add_common(sp, filt=False)
    sp.set_defaults(func=cmd_units)

    sp = sub.add_parser("classgroup", help="class representatives")
    _add_common(sp, filt=False)
    sp.set_defaults(func=cmd_classgroup)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return args.func(cfg)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"failure: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
