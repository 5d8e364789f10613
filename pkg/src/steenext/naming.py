"""Conventional names for Ext classes, polynomial expressions in them, and a workspace.

Names follow the usual chart conventions (h0, c0, e0, g2, v3, ...).  An
engine cannot infer those conventions, so each name is pinned down by a
tridegree and, when that group has dimension above one, a fingerprint: a
list of products with other named classes that must vanish or not, which
must single out exactly one nonzero class.  A few names are only defined
modulo a subgroup (tau multiples, or multiples of h0, h2, ...); those carry a
``modulo`` list and resolve to the class in normal form against it.

Ext over B is not resolved by name directly: its classes come from
Ext_{A(2)} and Ext_{E(tau3)} along the quotient maps B -> A(2) and
B -> E(tau3), which is how the splitting identifies them.
"""

from __future__ import annotations

import os
import re
import threading
from dataclasses import dataclass, field
from itertools import product as iproduct
from pathlib import Path

from .f2 import BitMatrix, Eliminator, row_reduce
from .hopf import preset
from .resolution import RegionError, Resolution, read_checkpoint, write_checkpoint
from .yoneda import (ExtClass, basis_classes, change_of_rings, drop_tau_index, mahowald, massey,
                     only_tau_index)

CHECKPOINT_ENV = "STEENEXT_CHECKPOINT_DIR"


@dataclass(frozen=True)
class NameEntry:
    name: str
    algebra: str
    tridegree: tuple
    # (other name, True if the product must be nonzero) constraints
    fingerprint: tuple = ()
    source: str = ""         # "" for classes resolved in place, else the algebra they are inflated from
    heuristic: bool = False  # identification not fixed by degree alone
    # "tau" or names of lower classes; the name is defined modulo their multiples
    modulo: tuple = ()


def _e(alg, name, tri, fingerprint=(), source="", heuristic=False, modulo=()):
    return NameEntry(name, alg, tri, tuple(fingerprint), source, heuristic, tuple(modulo))


_ENTRIES = [
    # Ext over the full motivic Steenrod algebra
    _e("A", "h0", (0, 1, 0)), _e("A", "h1", (1, 1, 1)), _e("A", "h2", (3, 1, 2)),
    _e("A", "h3", (7, 1, 4)), _e("A", "h4", (15, 1, 8)), _e("A", "h5", (31, 1, 16)),
    _e("A", "c0", (8, 3, 5)), _e("A", "Ph1", (9, 5, 5)), _e("A", "Ph2", (11, 5, 6)),
    _e("A", "d0", (14, 4, 8)), _e("A", "e0", (17, 4, 10)), _e("A", "e0g", (37, 8, 22)),
    _e("A", "g2", (44, 4, 24)), _e("A", "MP", (53, 10, 28)),
    _e("A", "D2h1h3", (56, 10, 29), modulo=("tau",)),
    _e("A", "B4", (60, 9, 32), modulo=("h0", "h2")),
    _e("A", "tauB5", (66, 10, 35)),
    # Ext over A(2)
    _e("A2", "h0", (0, 1, 0)), _e("A2", "h1", (1, 1, 1)), _e("A2", "h2", (3, 1, 2)),
    _e("A2", "c0", (8, 3, 5)), _e("A2", "P", (8, 4, 4)), _e("A2", "u", (11, 3, 7)),
    _e("A2", "a", (12, 3, 6), heuristic=True), _e("A2", "d0", (14, 4, 8)),
    _e("A2", "n", (15, 3, 8), heuristic=True), _e("A2", "e0", (17, 4, 10)),
    _e("A2", "g", (20, 4, 12)),
    # Ext over the exterior algebra on tau_3
    _e("E-tau3", "v3", (14, 1, 7)),
]
_ENTRIES += [_e("B", e.name, e.tridegree, source="A2", heuristic=e.heuristic)
             for e in _ENTRIES if e.algebra == "A2"]
_ENTRIES += [_e("B", "v3", (14, 1, 7), source="E-tau3")]


class NamingError(KeyError):
    pass


class NamingTable:
    def __init__(self, entries=None):
        self.entries: dict[tuple[str, str], NameEntry] = {}
        for e in entries if entries is not None else _ENTRIES:
            key = (e.algebra, e.name)
            if key in self.entries:
                raise ValueError(f"duplicate name {e.name} for {e.algebra}")
            self.entries[key] = e

    def get(self, algebra: str, name: str) -> NameEntry:
        try:
            return self.entries[(algebra, name)]
        except KeyError:
            raise NamingError(f"no class named {name!r} over {algebra}") from None

    def names(self, algebra: str) -> list[str]:
        return [n for (a, n) in self.entries if a == algebra]

    def generators(self, algebra: str) -> list[NameEntry]:
        return [e for (a, _), e in self.entries.items() if a == algebra]


DEFAULT_TABLE = NamingTable()


# -- expressions ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_]*)(?:\^(\d+))?|(\+)|([*·])|(\d+))")


def parse_expression(text: str) -> list[list[tuple[str, int]]]:
    """'e0 v3^2 + h1^3 v3^3' -> [[('e0',1),('v3',2)], [('h1',3),('v3',3)]].

    ``0`` gives an empty sum, ``1`` an empty product.
    """
    terms: list[list[tuple[str, int]]] = [[]]
    pos = 0
    text = text.strip()
    saw_factor = False
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text[pos:]!r}")
        pos = m.end()
        name, power, plus, _times, number = m.groups()
        if plus:
            terms.append([])
            saw_factor = False
        elif name:
            terms[-1].append((name, int(power or 1)))
            saw_factor = True
        elif number:
            if number == "0" and not terms[-1] and not saw_factor:
                terms[-1] = None
            elif number != "1":
                raise ValueError("only the integer literals 0 and 1 are allowed")
            saw_factor = True
    return [t for t in terms if t is not None]


def format_monomial(factors) -> str:
    if not factors:
        return "1"
    return " ".join(n if k == 1 else f"{n}^{k}" for n, k in factors)


# -- workspace ----------------------------------------------------------------

ALGEBRAS = ("A", "A2", "B", "E-tau3", "A-classical", "A2-classical", "B-classical")


class Workspace:
    """Resolutions for several algebras, loaded from and saved to a checkpoint directory.

    Queries that need more of a resolution than is stored raise
    :class:`RegionError` naming the bounds to resolve, unless the workspace
    was opened with ``resolve_missing=True``.
    """

    def __init__(self, checkpoint_dir=None, *, resolve_missing: bool = False, degree_cap: int = 96,
                 table: NamingTable = DEFAULT_TABLE, save: bool = True):
        if checkpoint_dir is None:
            checkpoint_dir = os.environ.get(CHECKPOINT_ENV)
        self.dir = Path(checkpoint_dir) if checkpoint_dir else None
        self.resolve_missing = resolve_missing
        self.degree_cap = degree_cap
        self.table = table
        self.save = save
        self._res: dict[str, Resolution] = {}
        self._lock = threading.RLock()

    @classmethod
    def in_memory(cls, **kw) -> "Workspace":
        return cls(None, resolve_missing=True, save=False, **kw)

    def checkpoint_path(self, algebra: str) -> Path | None:
        return None if self.dir is None else self.dir / f"{algebra}.ckpt"

    def resolution(self, algebra: str) -> Resolution:
        with self._lock:
            r = self._res.get(algebra)
            if r is None:
                path = self.checkpoint_path(algebra)
                if path is not None and path.exists():
                    r = read_checkpoint(path)
                else:
                    r = Resolution(preset(algebra, self.degree_cap))
                self._res[algebra] = r
            return r

    def attach(self, algebra: str, r: Resolution) -> None:
        self._res[algebra] = r

    def ensure(self, algebra: str, f: int, t: int) -> Resolution:
        """Make Ext^{f}(t) available, extending (if allowed) to stem t - f + 1, filtration f."""
        r = self.resolution(algebra)
        if r.covers(f, t):
            return r
        if not self.resolve_missing:
            raise RegionError(
                f"{algebra}: Ext at (s, f) = ({t - f}, {f}) is not in the stored resolution; run "
                f"`steenext resolve --algebra {algebra} --max-stem {max(t - f, r.max_stem, 0)} "
                f"--max-f {max(f, r.f_done - 1)}`")
        with self._lock:
            max_f = max(f, r.f_done - 1, 0)
            max_stem = max(t - max_f, r.t_done - max_f, 0)
            r.extend(max_stem, max_f)
            path = self.checkpoint_path(algebra)
            if self.save and path is not None:
                path.parent.mkdir(parents=True, exist_ok=True)
                write_checkpoint(r, path)
        return r

    # -- named classes ------------------------------------------------------

    def named(self, algebra: str, name: str) -> ExtClass:
        entry = self.table.get(algebra, name)
        s, f, w = entry.tridegree
        if entry.source:
            x = self.named(entry.source, name)
            return self.inflate(algebra, entry.source, x)
        r = self.ensure(algebra, f, s + f)
        cands = basis_classes(r, s, f, w)
        if not cands:
            raise NamingError(f"{name} over {algebra}: Ext{entry.tridegree} is zero")
        if entry.modulo:
            return self._by_normal_form(algebra, entry, r, cands)
        if len(cands) == 1 and not entry.fingerprint:
            return cands[0]
        return self._by_fingerprint(algebra, entry, cands)

    def _by_normal_form(self, algebra, entry, r, basis):
        s, f, w = entry.tridegree
        sub = []
        for m in entry.modulo:
            if m == "tau":
                sub += [y.tau(1) for y in basis_classes(r, s, f, w + 1)]
                continue
            ms, mf, mw = self.table.get(algebra, m).tridegree
            if s - ms < 0 or f - mf < 0:
                continue
            h = self.named(algebra, m)
            sub += [h * y for y in basis_classes(r, s - ms, f - mf, w - mw)]
        span = row_reduce(BitMatrix.from_ints([y.coordinates() for y in sub], len(basis)))
        forms = {span.reduce(1 << k) for k in range(len(basis))} - {0}
        quotient = Eliminator()
        qdim = sum(quotient.add(v, 0) is None for v in forms)
        if qdim != 1:
            raise NamingError(f"{entry.name} over {algebra}: quotient by {entry.modulo} "
                              f"has dimension {qdim}, not one")
        v = forms.pop()
        x = None
        for k, b in enumerate(basis):
            if (v >> k) & 1:
                x = b if x is None else x + b
        return x

    def _by_fingerprint(self, algebra, entry, basis):
        matches = []
        for bits in range(1, 1 << len(basis)):
            x = None
            for k, b in enumerate(basis):
                if (bits >> k) & 1:
                    x = b if x is None else x + b
            ok = all((not (self.named(algebra, other) * x).is_zero()) == nonzero
                     for other, nonzero in entry.fingerprint)
            if ok:
                matches.append(x)
        if len(matches) != 1:
            raise NamingError(f"fingerprint of {entry.name} over {algebra} selects "
                              f"{len(matches)} classes instead of one")
        return matches[0]

    def inflate(self, algebra: str, source: str, x: ExtClass) -> ExtClass:
        """Map a class along the quotient algebra -> source (only B -> A2, B -> E-tau3)."""
        keep = {("B", "A2"): drop_tau_index(3), ("B", "E-tau3"): only_tau_index(3)}.get((algebra, source))
        if keep is None:
            raise ValueError(f"no quotient map {algebra} -> {source}")
        sub = self.ensure(algebra, x.f, x.t)
        return change_of_rings(sub, x.resolution, keep)(x)

    def restrict(self, x: ExtClass, to: str, source: str = "A") -> ExtClass:
        """p*: Ext over ``source`` -> Ext over the sub-Hopf algebra ``to``."""
        sub = self.ensure(to, x.f, x.t)
        amb = self.ensure(source, x.f, x.t)
        if x.resolution is not amb:
            raise ValueError("class is not over the source resolution")
        return change_of_rings(sub, amb)(x)

    def product(self, algebra: str, x: ExtClass, y: ExtClass) -> ExtClass:
        """``x * y`` after making sure the target degree is resolved."""
        self.ensure(algebra, x.f + y.f, x.t + y.t)
        return x * y

    def massey(self, algebra: str, a: ExtClass, b: ExtClass, c: ExtClass, **kw):
        self.ensure(algebra, a.f + b.f + c.f - 1, a.t + b.t + c.t)
        return massey(a, b, c, **kw)

    def mahowald(self, x: ExtClass, k: int = 1):
        """M^k x over A, resolving first when the workspace allows it."""
        self.ensure("A", x.f + 6 * k, x.t + 51 * k)
        return mahowald(x, k, g2=self.named("A", "g2"), h0=self.named("A", "h0"))

    # -- expressions ----------------------------------------------------------

    def tridegree_of(self, algebra: str, factors) -> tuple[int, int, int]:
        s = f = w = 0
        for name, k in factors:
            if name == "tau":
                w -= k
                continue
            ds, df, dw = self.table.get(algebra, name).tridegree
            s, f, w = s + k * ds, f + k * df, w + k * dw
        return (s, f, w)

    def monomial(self, algebra: str, factors) -> ExtClass:
        s, f, w = self.tridegree_of(algebra, factors)
        r = self.ensure(algebra, f, s + f)
        x = ExtClass.unit(r)
        taus = 0
        # multiply low-filtration factors first: cheaper chain-map lifts
        ordered = sorted((fac for fac in factors if fac[0] != "tau"),
                         key=lambda fk: self.table.get(algebra, fk[0]).tridegree[1])
        for name, k in factors:
            if name == "tau":
                taus += k
        for name, k in ordered:
            y = self.named(algebra, name)
            if y.resolution is not r:
                raise AssertionError("named class over a different resolution")
            for _ in range(k):
                x = x * y
        return x.tau(taus) if taus else x

    def evaluate(self, algebra: str, text: str, tridegree=None) -> ExtClass:
        """Value of a polynomial expression in named classes."""
        terms = parse_expression(text)
        if not terms:
            if tridegree is None:
                raise ValueError("the expression 0 needs an explicit tridegree")
            s, f, w = tridegree
            return ExtClass.zero(self.ensure(algebra, f, s + f), s, f, w)
        values = [self.monomial(algebra, t) for t in terms]
        tri = {v.tridegree for v in values}
        if tridegree is not None:
            tri.add(tuple(tridegree))
        if len(tri) != 1:
            raise ValueError(f"expression {text!r} mixes tridegrees {sorted(tri)}")
        out = values[0]
        for v in values[1:]:
            out = out + v
        return out

    def monomials_in(self, algebra: str, tridegree, max_factors: int = 12) -> list[list[tuple[str, int]]]:
        """Monomials in the named classes (times tau powers) of the given tridegree."""
        s0, f0, w0 = tridegree
        gens = sorted(self.table.generators(algebra), key=lambda e: (e.tridegree[1], e.tridegree[0], e.name))
        out = []

        def rec(i, s, f, acc, nf):
            if s == 0 and f == 0:
                out.append(acc)
                return
            if i == len(gens) or nf >= max_factors or f <= 0:
                return
            ds, df, _ = gens[i].tridegree
            rec(i + 1, s, f, acc, nf)
            k = 1
            while k * ds <= s and k * df <= f and nf + k <= max_factors:
                rec(i + 1, s - k * ds, f - k * df, acc + [(gens[i].name, k)], nf + k)
                k += 1

        rec(0, s0, f0, [], 0)
        fixed = []
        for core in out:
            mw = self.tridegree_of(algebra, core)[2]
            if mw >= w0:
                fixed.append(core + ([("tau", mw - w0)] if mw > w0 else []))
        fixed.sort(key=lambda m: (sum(k for n, k in m if n != "tau"), [n for n, _ in m], m))
        return fixed

    def describe(self, x: ExtClass, algebra: str) -> str:
        """Write a class as a sum of monomials in named classes, or fall back to coordinates."""
        if x.is_zero():
            return "0"
        elim = Eliminator()
        monos = []
        for m in self.monomials_in(algebra, x.tridegree):
            try:
                v = self.monomial(algebra, m)
            except (RegionError, NamingError):
                continue
            c = v.coordinates()
            if c and elim.add(c, 1 << len(monos)) is None:
                monos.append(m)
        combo = elim.express(x.coordinates())
        if combo is None:
            return f"<class {x.tridegree} coords {x.coordinates():b}>"
        parts = [format_monomial(_tau_first(monos[k])) for k in range(len(monos)) if (combo >> k) & 1]
        return " + ".join(parts)


def _tau_first(m):
    taus = [fk for fk in m if fk[0] == "tau"]
    return taus + [fk for fk in m if fk[0] != "tau"]
