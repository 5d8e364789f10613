"""Command-line front end: resolve, query, chart and verify.

Resolutions live in a checkpoint directory as ``<algebra>.ckpt``; the
directory comes from ``--checkpoint``, else the ``STEENEXT_CHECKPOINT_DIR``
environment variable, else ``./checkpoints``.  A JSON config file given with
``--config`` supplies defaults for any flag; flags given on the command line
win.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .chart import to_svg, to_text, to_tsv
from .hopf import PRESET_NAMES, MotivicProfile, preset
from .naming import CHECKPOINT_ENV, NamingError, Workspace
from .resolution import CheckpointError, RegionError, Resolution, write_checkpoint
from .yoneda import MasseyUndefined

log = logging.getLogger("steenext")

CLI_ALGEBRAS = ("A", "A2", "B", "E-tau3", "B-classical", "A-classical")


@dataclass
class JobConfig:
    algebra: str = "A"
    profile: dict | None = None     # raw heights instead of a preset
    max_stem: int = 20
    max_f: int = 8
    checkpoint: str | None = None
    threads: int = 1
    format: str = "text"
    output: str | None = None
    resolve_missing: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.profile is None and self.algebra not in CLI_ALGEBRAS:
            raise ValueError(f"unknown algebra {self.algebra!r}; choose from {', '.join(CLI_ALGEBRAS)}")
        if self.max_stem < 0 or self.max_f < 0:
            raise ValueError("bounds must be non-negative")
        if self.threads < 1:
            raise ValueError("--threads must be positive")
        if self.format not in ("text", "tsv", "svg"):
            raise ValueError("--format must be text, tsv or svg")

    def checkpoint_dir(self) -> Path:
        return Path(self.checkpoint or os.environ.get(CHECKPOINT_ENV) or "checkpoints")

    def make_profile(self) -> MotivicProfile:
        if self.profile is not None:
            return MotivicProfile.from_description({**_PROFILE_DEFAULTS, **self.profile})
        return preset(self.algebra, degree_cap=max(96, self.max_stem + self.max_f + 2))


_PROFILE_DEFAULTS = dict(mode="motivic", tau_heights=[], xi_heights=[], degree_cap=96, default_tau=0,
                         default_xi=1, zeta_heights=[], default_zeta=1, name="custom")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file of default settings (flags override it)")
    p.add_argument("--algebra", choices=CLI_ALGEBRAS, help="profile preset (default A)")
    p.add_argument("--max-stem", type=int, dest="max_stem")
    p.add_argument("--max-f", type=int, dest="max_f")
    p.add_argument("--checkpoint", help=f"checkpoint directory (default ${CHECKPOINT_ENV} or ./checkpoints)")
    p.add_argument("--threads", type=int, help="accepted for compatibility; work is sequential")
    p.add_argument("--format", choices=("text", "tsv", "svg"))
    p.add_argument("--output", "-o", help="write output here instead of stdout")
    p.add_argument("--resolve-missing", action="store_true", default=None, dest="resolve_missing",
                   help="extend stored resolutions when a query needs more (and save them)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="steenext", description="Motivic Ext computations over Steenrod subalgebras")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolve", help="extend (or resume) a resolution and save the checkpoint")
    _add_common(p)
    p.add_argument("--save-every", type=float, default=60.0, help="seconds between checkpoint writes")

    p = sub.add_parser("ext", help="Ext dimensions by tridegree")
    _add_common(p)
    p.add_argument("--s", type=int)
    p.add_argument("--f", type=int)
    p.add_argument("--w", type=int)

    p = sub.add_parser("product", help="product of named classes or expressions")
    _add_common(p)
    p.add_argument("factors", nargs="+")

    p = sub.add_parser("massey", help="Massey product <a, b, c>")
    _add_common(p)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")

    p = sub.add_parser("restrict", help="restriction p* of a class over A to a subalgebra")
    _add_common(p)
    p.add_argument("expression")
    p.add_argument("--to", default="B", choices=("B", "A2"))

    p = sub.add_parser("mahowald", help="the Mahowald operator M x = <g2, h0^3, x> over A")
    _add_common(p)
    p.add_argument("x")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--check-restriction", action="store_true",
                   help="check p*(M^k x) = (e0 v3^2 + h1^3 v3^3)^k p*(x)")

    p = sub.add_parser("chart", help="Adams chart as SVG, TSV or text")
    _add_common(p)

    p = sub.add_parser("verify", help="run the verification checks")
    _add_common(p)
    p.add_argument("--suite", choices=("quick", "paper", "extended"), default="quick")
    p.add_argument("--only", nargs="*", help="run only these check ids")
    p.add_argument("--cobar-cells", type=int, default=None)
    return ap


def load_config(args: argparse.Namespace) -> JobConfig:
    data: dict = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            data = json.load(fh)
        unknown = set(data) - set(JobConfig.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = JobConfig(**data)
    for key in ("algebra", "max_stem", "max_f", "checkpoint", "threads", "format", "output", "resolve_missing"):
        v = getattr(args, key, None)
        if v is not None:
            setattr(cfg, key, v)
    cfg.validate()
    return cfg


def _emit(cfg: JobConfig, text: str):
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _workspace(cfg: JobConfig) -> Workspace:
    return Workspace(cfg.checkpoint_dir(), resolve_missing=cfg.resolve_missing, degree_cap=128)


# -- commands ------------------------------------------------------------------

def cmd_resolve(cfg: JobConfig, save_every: float = 60.0) -> int:
    d = cfg.checkpoint_dir()
    d.mkdir(parents=True, exist_ok=True)
    name = cfg.algebra if cfg.profile is None else cfg.profile.get("name", "custom")
    path = d / f"{name}.ckpt"
    ws = Workspace(d, degree_cap=128)
    if path.exists():
        r = ws.resolution(name)
        log.info("resuming %s from t=%d, f=%d", path, r.t_done, r.f_done)
    else:
        r = Resolution(cfg.make_profile())
    last = [time.time()]

    def progress(t, f):
        log.debug("t = %d done", t)
        if time.time() - last[0] > save_every and r.t_done == t:
            write_checkpoint(r, path)
            log.info("checkpoint at t = %d", t)
            last[0] = time.time()

    t0 = time.time()
    r.extend(cfg.max_stem, cfg.max_f, progress=progress)
    write_checkpoint(r, path)
    counts = r.generator_counts()
    tab = r.ext_table()
    if cfg.format == "tsv":
        lines = ["s\tf\tgenerators"]
        lines += [f"{s}\t{f}\t{n}" for (s, f), n in sorted(counts.items()) if s <= cfg.max_stem]
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        lines = [f"resolution of {name}: t <= {r.t_done}, f <= {r.f_done}, "
                 f"{r.num_generators()} generators, {time.time() - t0:.1f}s; checkpoint {path}"]
        lines.append("generators per (s, f):")
        for f in range(cfg.max_f, -1, -1):
            row = [counts.get((s, f), 0) for s in range(cfg.max_stem + 1)]
            lines.append(f"f={f:>2} " + " ".join(f"{n:>2}" if n else " ." for n in row))
        lines.append("Ext groups: " + str(len(tab.rows())) + " nonzero tridegrees (weights down to the tau-periodic floor)")
        _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_ext(cfg: JobConfig, s=None, f=None, w=None) -> int:
    ws = _workspace(cfg)
    r = ws.resolution(cfg.algebra)
    if s is not None and f is not None:
        ws.ensure(cfg.algebra, f, s + f)
    tab = r.ext_table()
    rows = [row for row in tab.rows()
            if (s is None or row[0] == s) and (f is None or row[1] == f) and (w is None or row[2] == w)]
    if s is not None and f is not None and w is not None and not rows:
        rows = [(s, f, w, tab.dim(s, f, w), tab.tau_rank(s, f, w))]
    if cfg.format == "svg":
        raise ValueError("use the chart command for SVG output")
    if cfg.format == "tsv":
        out = "s\tf\tw\tdim\ttau_rank\n" + "".join(f"{a}\t{b}\t{c}\t{d}\t{e}\n" for a, b, c, d, e in rows)
    else:
        out = "".join(f"Ext_{cfg.algebra}({a},{b},{c}) = {d}" + (f"  ({d - e} tau-torsion)" if e < d else "") + "\n"
                      for a, b, c, d, e in rows)
    _emit(cfg, out)
    return 0


def _result(cfg: JobConfig, label: str, x, text: str, extra: dict | None = None):
    if cfg.format == "tsv":
        cols = ["query", "s", "f", "w", "value"] + list((extra or {}).keys())
        vals = [label, *map(str, x.tridegree), text] + [str(v) for v in (extra or {}).values()]
        _emit(cfg, "\t".join(cols) + "\n" + "\t".join(vals) + "\n")
    else:
        more = "".join(f"\n{k}: {v}" for k, v in (extra or {}).items())
        _emit(cfg, f"{text}{more}\n")


def cmd_product(cfg: JobConfig, factors) -> int:
    ws = _workspace(cfg)
    x = None
    for fac in factors:
        y = ws.evaluate(cfg.algebra, fac)
        x = y if x is None else ws.product(cfg.algebra, x, y)
    _result(cfg, " * ".join(factors), x, ws.describe(x, cfg.algebra))
    return 0


def cmd_massey(cfg: JobConfig, a, b, c) -> int:
    ws = _workspace(cfg)
    xs = [ws.evaluate(cfg.algebra, e) for e in (a, b, c)]
    co = ws.massey(cfg.algebra, *xs)
    ind = [ws.describe(z, cfg.algebra) for z in co.indeterminacy if not z.is_zero()]
    _result(cfg, f"<{a}, {b}, {c}>", co.representative, ws.describe(co.representative, cfg.algebra),
            {"indeterminacy": " , ".join(ind) if ind else "0"})
    return 0


def cmd_restrict(cfg: JobConfig, expression: str, to: str) -> int:
    ws = _workspace(cfg)
    x = ws.evaluate("A", expression)
    y = ws.restrict(x, to)
    _result(cfg, f"p*({expression})", y, ws.describe(y, to))
    return 0


def cmd_mahowald(cfg: JobConfig, x_text: str, k: int, check: bool) -> int:
    ws = _workspace(cfg)
    x = ws.evaluate("A", x_text)
    co = ws.mahowald(x, k)
    px = ws.restrict(co.representative, "B")
    ind = [ws.restrict(z, "B") for z in co.indeterminacy]
    extra = {"nonzero": not co.is_zero(),
             "indeterminacy_dim": co.indeterminacy_dim(),
             "restricted_indeterminacy_zero": all(z.is_zero() for z in ind)}
    status = 0
    if check:
        factor = ws.evaluate("B", "e0 v3^2 + h1^3 v3^3")
        rhs = ws.restrict(x, "B")
        for _ in range(k):
            rhs = ws.product("B", factor, rhs)
        ok = rhs == px and extra["restricted_indeterminacy_zero"]
        extra["restriction_formula"] = "pass" if ok else "FAIL"
        status = 0 if ok else 1
    _result(cfg, f"M^{k}({x_text})", co.representative, f"p*(M^{k} {x_text}) = {ws.describe(px, 'B')}", extra)
    return status


def cmd_chart(cfg: JobConfig) -> int:
    ws = _workspace(cfg)
    path = ws.checkpoint_path(cfg.algebra)
    if path is None or not path.exists():
        raise FileNotFoundError(f"no checkpoint for {cfg.algebra} in {cfg.checkpoint_dir()}; run resolve first")
    r = ws.resolution(cfg.algebra)
    tab = r.ext_table()
    ms = min(cfg.max_stem, r.max_stem) if cfg.max_stem is not None else r.max_stem
    mf = min(cfg.max_f, tab.max_f)
    if cfg.format == "svg":
        _emit(cfg, to_svg(tab, cfg.algebra, ms, mf))
    elif cfg.format == "tsv":
        _emit(cfg, to_tsv(tab, cfg.algebra, ms, mf))
    else:
        _emit(cfg, to_text(tab, ms, mf))
    return 0


def cmd_verify(cfg: JobConfig, suite: str, only=None, cobar_cells=None) -> int:
    from . import verify
    ws = Workspace(cfg.checkpoint_dir() if cfg.checkpoint or os.environ.get(CHECKPOINT_ENV) else None,
                   resolve_missing=True, degree_cap=128, save=bool(cfg.checkpoint or os.environ.get(CHECKPOINT_ENV)))
    kw = {} if cobar_cells is None else {"cobar_cells": cobar_cells}
    ctx = verify.Context(suite, ws, **kw)
    lines = []

    def out(line):
        lines.append(line)
        print(line, flush=True)

    results = verify.run(suite, ids=set(only) if only else None, ctx=ctx, out=out)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if cfg.output:
        Path(cfg.output).write_text("\n".join(lines) + "\n")
    return 1 if failed else 0


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args)
        if cfg.threads > 1:
            log.info("--threads %d accepted; the computation runs sequentially", cfg.threads)
        if args.command == "resolve":
            return cmd_resolve(cfg, args.save_every)
        if args.command == "ext":
            return cmd_ext(cfg, args.s, args.f, args.w)
        if args.command == "product":
            return cmd_product(cfg, args.factors)
        if args.command == "massey":
            return cmd_massey(cfg, args.a, args.b, args.c)
        if args.command == "restrict":
            return cmd_restrict(cfg, args.expression, args.to)
        if args.command == "mahowald":
            return cmd_mahowald(cfg, args.x, args.k, args.check_restriction)
        if args.command == "chart":
            return cmd_chart(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite, args.only, args.cobar_cells)
    except (RegionError, NamingError, MasseyUndefined, CheckpointError, ValueError, OSError) as exc:
        print(f"steenext: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
