"""Verification harness: runs the checks listed in the provenance manifest.

Each manifest entry names a check, the suites it belongs to, a provenance
tag (PAPER: a published statement; DERIVED: computed two independent ways;
TRIVIAL: follows from definitions) and the expected value.  The functions
here compute the value and decide pass or fail.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from importlib import resources

from .cobar import DEFAULT_MAX_CELLS, CobarBlowup, cobar_ext_dims
from .hopf import (Monomial, basis_in_degree, check_hopf_axioms, exps_weight, generator,
                   is_primitive, preset)
from .naming import Workspace, parse_expression
from .resolution import Resolution, checkpoint_load, checkpoint_save
from .yoneda import Coset, ExtClass, basis_classes, mahowald, massey

# Regions of the two suites: (max_stem, max_f) per algebra.
PAPER_REGIONS = {"A": (54, 13), "A2": (65, 17), "B": (90, 14), "E-tau3": (90, 14)}
QUICK_REGIONS = {"A": (24, 8), "A2": (40, 10), "B": (40, 10), "E-tau3": (40, 10)}
EXTENDED_REGIONS = {"A": (66, 10)}


def load_manifest() -> dict:
    return json.loads(resources.files("steenext").joinpath("data/manifest.json").read_text())


@dataclass
class Outcome:
    id: str
    criterion: int
    passed: bool
    expected: str
    computed: str
    provenance: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.id} ({self.provenance}) expected: {self.expected} | "
                f"computed: {self.computed} ({self.seconds:.1f}s)")


class Context:
    """Shared state for one verification run: a workspace and memoized results."""

    def __init__(self, suite: str = "paper", workspace: Workspace | None = None,
                 cobar_cells: int = DEFAULT_MAX_CELLS):
        self.suite = suite
        self.ws = workspace or Workspace.in_memory(degree_cap=128)
        self.ws.resolve_missing = True
        self.cobar_cells = cobar_cells
        self.memo: dict = {}
        regions = dict(PAPER_REGIONS if suite != "quick" else QUICK_REGIONS)
        if suite == "extended":
            regions.update(EXTENDED_REGIONS)
        self.regions = regions

    def res(self, algebra: str, max_stem: int | None = None, max_f: int | None = None) -> Resolution:
        r = self.ws.resolution(algebra)
        if max_stem is None:
            max_stem, max_f = self.regions[algebra]
        if r.t_done < max_stem + max_f or r.f_done < max_f + 1:
            r.extend(max(max_stem, r.t_done - max_f), max(max_f, r.f_done - 1))
        return r

    def cached(self, key, fn):
        if key not in self.memo:
            self.memo[key] = fn()
        return self.memo[key]

    def named(self, algebra, name):
        return self.ws.named(algebra, name)

    def ev(self, algebra, text, tridegree=None):
        return self.ws.evaluate(algebra, text, tridegree)

    def describe(self, x, algebra):
        return self.ws.describe(x, algebra)

    def mahowald(self, x_name: str) -> Coset:
        def run():
            return mahowald(self.named("A", x_name), g2=self.named("A", "g2"), h0=self.named("A", "h0"))
        return self.cached(("M", x_name), run)


CHECKS: dict = {}


def check(id_):
    def deco(fn):
        CHECKS[id_] = fn
        return fn
    return deco


# -- criterion 1 -------------------------------------------------------------

def _hopf(name, t_max):
    p = preset(name, max(t_max, 64))
    rep = check_hopf_axioms(p, t_max)
    return rep.ok, str(rep)


@check("c1.hopf.B")
def _c1b(ctx):
    return _hopf("B", 64)


@check("c1.hopf.A2")
def _c1a2(ctx):
    return _hopf("A2", 64)


@check("c1.hopf.A40")
def _c1a(ctx):
    return _hopf("A", 40)


@check("c1.tau3_primitive")
def _c1t(ctx):
    p = preset("B")
    ok = is_primitive(p, generator(p, "tau", 3))
    return ok, "primitive" if ok else "not primitive"


@check("c1.splits")
def _c1s(ctx):
    pb, pa = preset("B"), preset("A2")
    bad = []
    for t in range(0, 64):
        for w in range(0, 40):
            nb = sum(1 for e in basis_in_degree(pb, t) if exps_weight(e) == w)
            na = sum(1 for e in basis_in_degree(pa, t) if exps_weight(e) == w)
            na += sum(1 for e in basis_in_degree(pa, t - 15) if exps_weight(e) == w - 7) if t >= 15 else 0
            if nb != na:
                bad.append((t, w, nb, na))
    return not bad, "all bidegrees equal" if not bad else f"mismatch at {bad[:3]}"


# -- criterion 2 -------------------------------------------------------------

@check("c2.splitting")
def _c2(ctx):
    max_stem, max_f = (45, 14) if ctx.suite != "quick" else (24, 8)
    B = ctx.res("B", max_stem, max_f).ext_table()
    A2 = ctx.res("A2", max_stem, max_f).ext_table()
    bad = []
    n = 0
    for f in range(0, max_f + 1):
        for s in range(0, max_stem + 1):
            ws = set()
            for k in range(0, f + 1):
                if s - 14 * k < 0:
                    break
                ws.update(w + 7 * k for w in A2.weights(s - 14 * k, f - k))
                fl = A2.floor(s - 14 * k, f - k)
                if fl is not None:
                    ws.add(fl + 7 * k - 1)
            ws.update(B.weights(s, f))
            fl = B.floor(s, f)
            if fl is not None:
                ws.add(fl - 1)
            for w in sorted(ws):
                terms = [(s - 14 * k, f - k, w - 7 * k) for k in range(0, f + 1) if s - 14 * k >= 0]
                d = sum(A2.dim(*x) for x in terms)
                r = sum(A2.tau_rank(*x) for x in terms)
                n += 1
                if (B.dim(s, f, w), B.tau_rank(s, f, w)) != (d, r):
                    bad.append((s, f, w))
    return not bad, f"{n} tridegrees compared, {len(bad)} mismatches" + (f" e.g. {bad[:3]}" if bad else "")


# -- criterion 3 -------------------------------------------------------------

def _oracle(ctx, name):
    t_max, f_max = 24, 8
    if ctx.suite == "quick" and name != "E-tau3":
        f_max = 4
    p = preset(name, 128)
    cob = cobar_ext_dims(p, t_max, f_max, max_cells=ctx.cobar_cells, skip_blowup=True)
    r = ctx.res(name)
    if not r.covers(f_max, t_max):
        r.extend(t_max, f_max)
    tab = r.ext_table()
    bad = []
    n = 0
    for (s, f), fl in cob.floors.items():
        rng = r.weight_range(f, s + f)
        ws = set(range(fl - 1, fl + 1)) | {w for (ss, ff, w) in cob.dims if (ss, ff) == (s, f)}
        if rng:
            ws |= set(range(rng[0] - 1, rng[1] + 2))
        for w in ws:
            n += 1
            if cob.dim(s, f, w) != tab.dim(s, f, w):
                bad.append((s, f, w))
    blown = sorted((s, f) for s, f, _ in cob.blowup)
    ok = not bad and not blown
    msg = f"{len(cob.floors)} bidegrees compared ({n} tridegrees), {len(bad)} mismatches"
    if blown:
        msg += (f"; {len(blown)} bidegrees not computable within {ctx.cobar_cells} cobar cells "
                f"(largest needed {max(c for *_, c in cob.blowup)}), e.g. {blown[:4]}")
    return ok, msg


@check("c3.oracle.E-tau3")
def _c3e(ctx):
    return _oracle(ctx, "E-tau3")


@check("c3.oracle.B")
def _c3b(ctx):
    return _oracle(ctx, "B")


@check("c3.oracle.A2")
def _c3a(ctx):
    return _oracle(ctx, "A2")


# -- criterion 4 -------------------------------------------------------------

@check("c4.e0_squared")
def _c4a(ctx):
    ctx.res("A2")
    lhs, rhs = ctx.ev("A2", "e0^2"), ctx.ev("A2", "d0 g")
    return lhs == rhs and not lhs.is_zero(), f"e0^2 = {ctx.describe(lhs, 'A2')}, equal: {lhs == rhs}"


@check("c4.h1sq_e0")
def _c4b(ctx):
    ctx.res("A2")
    lhs, rhs = ctx.ev("A2", "h1^2 e0"), ctx.ev("A2", "c0 u")
    return lhs == rhs and not lhs.is_zero(), f"equal: {lhs == rhs}, nonzero: {not lhs.is_zero()}"


@check("c4.h0d0e0k")
def _c4c(ctx):
    ctx.res("A2")
    res = []
    for k in range(4):
        x = ctx.ev("A2", "h0 d0" + (f" e0^{k}" if k else ""))
        res.append(not x.is_zero())
    return all(res), ", ".join(f"k={k}: {'nonzero' if v else 'zero'}" for k, v in enumerate(res))


@check("c4.tau2_h0d0e0k")
def _c4d(ctx):
    ctx.res("A2")
    res = []
    for k in (2, 3):
        x = ctx.ev("A2", f"tau^2 h0 d0 e0^{k}")
        res.append(x.is_zero())
    return all(res), ", ".join(f"k={k}: {'zero' if v else 'nonzero'}" for k, v in zip((2, 3), res))


# -- criteria 5 and 6 ---------------------------------------------------------

def _prep_A(ctx):
    ctx.res("A")
    ctx.res("B")
    ctx.res("A2")
    ctx.res("E-tau3")


@check("c5.h0cubed_g2")
def _c5a(ctx):
    _prep_A(ctx)
    x = ctx.ev("A", "h0^3 g2")
    return x.is_zero(), "0" if x.is_zero() else "nonzero"


@check("c5.Mh1_nonzero")
def _c5b(ctx):
    _prep_A(ctx)
    m = ctx.mahowald("h1")
    ok = not m.is_zero() and m.tridegree == (46, 7, 25)
    return ok, f"{m.tridegree}, {'nonzero' if not m.is_zero() else 'zero'}, indeterminacy dim {m.indeterminacy_dim()}"


@check("c5.restriction_Mh1")
def _c5c(ctx):
    _prep_A(ctx)
    m = ctx.mahowald("h1")
    pm = ctx.ws.restrict(m.representative, "B")
    rhs = ctx.ev("B", "e0 v3^2 + h1^3 v3^3") * ctx.ws.restrict(ctx.named("A", "h1"), "B")
    return pm == rhs and not pm.is_zero(), ctx.describe(pm, "B")


@check("c5.indeterminacy")
def _c5d(ctx):
    _prep_A(ctx)
    m = ctx.mahowald("h1")
    images = [ctx.ws.restrict(z, "B") for z in m.indeterminacy]
    ok = all(z.is_zero() for z in images)
    return ok, f"{len(images)} generators, images all zero: {ok}"


@check("c5.printed_form")
def _c5e(ctx):
    t1 = ctx.ws.tridegree_of("B", parse_expression("h1 e0 v3^3")[0])
    t2 = ctx.ws.tridegree_of("B", parse_expression("h1^4 v3^3")[0])
    t3 = ctx.ws.tridegree_of("B", parse_expression("h1 e0 v3^2")[0])
    ok = t1 != t2 and t3 == t2 == (46, 7, 25)
    return ok, f"h1 e0 v3^3 in {t1}, h1^4 v3^3 in {t2}, h1 e0 v3^2 in {t3}"


@check("c5.bracket_45")
def _c5f(ctx):
    _prep_A(ctx)
    m = ctx.mahowald("h1")
    pm = ctx.ws.restrict(m.representative, "B")
    rB = ctx.res("B")
    h1 = ctx.named("B", "h1")
    basis = basis_classes(rB, 45, 6, 24)
    sols = []
    for bits in range(0, 1 << len(basis)):
        y = ExtClass.zero(rB, 45, 6, 24)
        for k, b in enumerate(basis):
            if (bits >> k) & 1:
                y = y + b
        if h1 * y == pm:
            sols.append(y)
    expected = ctx.ev("B", "e0 v3^2 + h1^3 v3^3")
    rA = ctx.res("A")
    indet = [ctx.ws.restrict(z, "B") for z in basis_classes(rA, 45, 6, 24)]
    indet_zero = all(z.is_zero() for z in indet)
    ok = len(sols) == 1 and sols[0] == expected and indet_zero
    desc = ", ".join(ctx.describe(y, "B") for y in sols) or "none"
    return ok, f"quotients: {desc}; p*(Ext_A(45,6,24)) zero: {indet_zero} ({len(indet)} classes)"


@check("c6.Mh1_6")
def _c6(ctx):
    _prep_A(ctx)
    m = ctx.mahowald("h1")
    h1 = ctx.named("A", "h1")
    lhs = m.representative * (h1 ** 5)
    rhs = ctx.ev("A", "e0^3 + d0 e0g")
    big = massey(ctx.named("A", "g2"), ctx.ev("A", "h0^3"), h1 ** 6)
    ok = lhs == rhs and big.contains(lhs) and not lhs.is_zero()
    return ok, (f"<g2,h0^3,h1> h1^5 == e0^3 + d0 e0g: {lhs == rhs}; "
                f"in <g2,h0^3,h1^6>: {big.contains(lhs)} (indeterminacy dim {big.indeterminacy_dim()})")


# -- criterion 7 --------------------------------------------------------------

def _table_row(ctx, name, expected):
    _prep_A(ctx)
    x = ctx.named("A", name)
    px = ctx.ws.restrict(x, "B")
    e = ctx.ev("B", expected)
    return px == e and not px.is_zero(), ctx.describe(px, "B")


@check("c7.MP")
def _c7(ctx):
    return _table_row(ctx, "MP", "P e0 v3^2 + P h1^3 v3^3")


@check("c7.M_squared")
def _c7m(ctx):
    ctx.res("B", 90, 12)
    ctx.res("A2")
    ctx.res("E-tau3")
    x = ctx.ev("B", "e0 v3^2 + h1^3 v3^3")
    sq = x * x
    rhs = ctx.ev("B", "d0 g v3^4 + h1^6 v3^6")
    return sq == rhs and not sq.is_zero(), f"{sq.tridegree}: equal {sq == rhs}"


@check("c7x.D2h1h3")
def _c7x1(ctx):
    return _table_row(ctx, "D2h1h3", "tau P g v3^2")


@check("c7x.B4")
def _c7x2(ctx):
    return _table_row(ctx, "B4", "a g v3^2")


@check("c7x.tauB5")
def _c7x3(ctx):
    return _table_row(ctx, "tauB5", "tau h2 n g v3^2")


# -- criterion 8 --------------------------------------------------------------

@check("c8.Mh2_nonzero")
def _c8a(ctx):
    _prep_A(ctx)
    m = ctx.mahowald("h2")
    pm = ctx.ws.restrict(m.representative, "B")
    ok = not m.is_zero() and m.tridegree == (48, 7, 26)
    return ok, f"{m.tridegree}, nonzero: {not m.is_zero()}, p*(M h2) = {ctx.describe(pm, 'B')}"


@check("c8.e0_images")
def _c8b(ctx):
    ctx.res("A", 24, 4)
    ctx.res("A2")
    out = []
    for name in ("h1", "h2"):
        img = ctx.ws.restrict(ctx.named("A", name), "A2")
        out.append(not (ctx.named("A2", "e0") * img).is_zero())
    return all(out), ", ".join(f"e0 p*({n}) {'nonzero' if v else 'zero'}" for n, v in zip(("h1", "h2"), out))


# -- criterion 9 --------------------------------------------------------------

@check("c9.d_squared")
def _c9a(ctx):
    n = 0
    for name in ("A", "A2", "B", "E-tau3"):
        r = ctx.ws.resolution(name)
        n += r.check_d_squared()
    return True, f"{n} generators checked"


@check("c9.resume")
def _c9b(ctx):
    p = preset("B", 128)
    a = Resolution(p).extend(20, 6)
    b = checkpoint_load(checkpoint_save(a))
    same_load = a == b
    b.extend(30, 9)
    c = Resolution(p).extend(30, 9)
    ok = same_load and b == c
    return ok, f"load equal: {same_load}, resumed equals uninterrupted: {b == c}"


@check("c9.massey_choices")
def _c9c(ctx):
    ctx.res("A2", 30, 8)
    cases = [("h1", "h0", "h1"), ("h0", "h1", "h0"), ("h2", "h1", "h2"), ("h1", "h2", "h1")]
    res = []
    for a, b, c in cases:
        xa, xb, xc = (ctx.named("A2", n) for n in (a, b, c))
        base = massey(xa, xb, xc)
        for seed in (1, 2, 5):
            other = massey(xa, xb, xc, perturb=seed)
            res.append(base.contains(other.representative))
    return all(res), f"{sum(res)}/{len(res)} perturbed representatives in the base coset"


@check("c9.bracket_shuffles")
def _c9d(ctx):
    _prep_A(ctx)
    h0, h1, g2 = ctx.named("A", "h0"), ctx.named("A", "h1"), ctx.named("A", "g2")
    small = massey(h0 * h0 * g2, h0, h1)
    mid = massey(h0 * g2, h0 * h0, h1)
    big = massey(g2, h0 * h0 * h0, h1)
    ok1, ok2 = small.subset_of(mid), mid.subset_of(big)
    return ok1 and ok2, f"first containment {ok1}, second {ok2}"


# -- running ------------------------------------------------------------------

def run(suite: str = "paper", ids=None, ctx: Context | None = None, out=print) -> list[Outcome]:
    manifest = load_manifest()
    ctx = ctx or Context(suite)
    results = []
    for entry in manifest["checks"]:
        if ids is not None and entry["id"] not in ids:
            continue
        if ids is None and suite not in entry["suites"]:
            continue
        fn = CHECKS[entry["id"]]
        t0 = time.time()
        try:
            ok, computed = fn(ctx)
        except Exception as exc:  # report, do not abort the run
            ok, computed = False, f"error: {type(exc).__name__}: {exc}"
        o = Outcome(entry["id"], entry["criterion"], bool(ok), entry["expected"], computed,
                    entry["provenance"], time.time() - t0)
        results.append(o)
        if out is not None:
            out(o.line())
    return results
