"""Free resolutions of the ground ring over a profile algebra, and Ext.

Free module elements in internal degree ``t`` are bitmasks over *pairs*
``(generator, Milnor basis element)`` laid out in canonical order: blocks by
generator id, inside a block the canonical monomial order.  A pair
``(g, theta)`` has *base weight* ``w_g + w(theta)``.  An element of weight
``w`` is a bitmask whose pairs all have base weight ``<= w``; pair ``p``
then stands for ``tau^(w - base(p)) p``.  Multiplying by ``tau`` does not
change the bitmask, so one F2 matrix per ``(f, t)`` describes the
differential in every weight at once, and the weight-``w`` slice is spanned
by the rows of base weight ``<= w``.

Ext is the homology of ``Hom_A(F, M2)``.  The cochain ``tau^k g*`` (for a
generator ``g`` of weight ``w_g``) sits in weight ``w_g - k``; a cochain of
weight ``w`` is a bitmask over the generators in its degree, and only
generators with ``w_g >= w`` may occur.
"""

from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass, field
from typing import Iterable

from .f2 import BitMatrix, BitVector, Eliminator, bits_of, complement_basis, row_reduce, EchelonSpace
from .hopf import AlgebraTables, MotivicProfile, tables_for


class RegionError(ValueError):
    """A query needs a part of the resolution that has not been computed."""


@dataclass(frozen=True)
class Generator:
    id: int
    f: int
    t: int
    w: int

    @property
    def s(self) -> int:
        return self.t - self.f

    @property
    def tridegree(self) -> tuple[int, int, int]:
        return (self.t - self.f, self.f, self.w)


@dataclass(frozen=True)
class ModuleElement:
    """Explicit term list of a free-module element: (basis exps, tau power, generator id)."""

    f: int
    t: int
    w: int
    terms: tuple = ()

    def __str__(self):
        from .hopf import Monomial
        parts = []
        for exps, j, g in self.terms:
            m = Monomial(exps).name()
            coeff = (f"tau^{j} " if j else "") + (f"Sq[{m}] " if exps else "")
            parts.append(f"{coeff}g{self.f - 1 if False else ''}{g}")
        return " + ".join(parts) or "0"


class FreeModule:
    """One term ``F_f`` of a resolution: generators and their differentials."""

    def __init__(self, tables: AlgebraTables, f: int):
        self.tables = tables
        self.f = f
        self.gens: list[Generator] = []
        self.diffs: list[int] = []        # d(g) as a bitmask over F_{f-1}(t_g)
        self._gen_ts: list[int] = []
        self._layouts: dict = {}
        self._terms: dict[int, list] = {}

    def add(self, t: int, w: int, diff: int) -> Generator:
        g = Generator(len(self.gens), self.f, t, w)
        if self._gen_ts and t < self._gen_ts[-1]:
            raise AssertionError("generators must be added in increasing degree")
        self.gens.append(g)
        self.diffs.append(diff)
        self._gen_ts.append(t)
        return g

    def count_through(self, t: int) -> int:
        return bisect.bisect_right(self._gen_ts, t)

    def gens_in_degree(self, t: int) -> list[Generator]:
        lo = bisect.bisect_left(self._gen_ts, t)
        hi = bisect.bisect_right(self._gen_ts, t)
        return self.gens[lo:hi]

    def layout(self, t: int) -> tuple[list[int], int]:
        """Block offsets of the generators of degree <= t, and the total dimension."""
        n = self.count_through(t)
        key = (t, n)
        lay = self._layouts.get(key)
        if lay is None:
            offsets = []
            total = 0
            dim = self.tables.dim
            for g in self.gens[:n]:
                offsets.append(total)
                total += dim(t - g.t)
            lay = (offsets, total)
            self._layouts[key] = lay
        return lay

    def dim(self, t: int) -> int:
        return self.layout(t)[1]

    def pair_weights(self, t: int) -> list[int]:
        key = ("w", t, self.count_through(t))
        ws = self._layouts.get(key)
        if ws is None:
            ws = []
            for g in self.gens[: self.count_through(t)]:
                ws.extend(g.w + x for x in self.tables.weights(t - g.t))
            self._layouts[key] = ws
        return ws

    def decode(self, t: int, x: int) -> list[tuple[int, int, int]]:
        """Bitmask -> list of (generator id, basis degree, basis index)."""
        offsets, _ = self.layout(t)
        out = []
        for b in bits_of(x):
            gi = bisect.bisect_right(offsets, b) - 1
            g = self.gens[gi]
            out.append((gi, t - g.t, b - offsets[gi]))
        return out

    def encode(self, t: int, terms: Iterable[tuple[int, int]]) -> int:
        """(generator id, basis index) pairs -> bitmask in degree t."""
        offsets, _ = self.layout(t)
        x = 0
        for gi, i in terms:
            x ^= 1 << (offsets[gi] + i)
        return x

    def unit_bit(self, gi: int) -> int:
        g = self.gens[gi]
        return self.layout(g.t)[0][gi]

    def diff_terms(self, gi: int, lower: "FreeModule") -> list[tuple[int, int, int]]:
        terms = self._terms.get(gi)
        if terms is None:
            terms = lower.decode(self.gens[gi].t, self.diffs[gi])
            self._terms[gi] = terms
        return terms

    def act(self, ta: int, ia: int, t: int, terms: list[tuple[int, int, int]]) -> int:
        """``theta * x`` for ``theta = basis(ta)[ia]`` and ``x`` given by decoded terms in degree t."""
        tt = t + ta
        offsets, _ = self.layout(tt)
        prod = self.tables.product
        out = 0
        for gi, tp, ip in terms:
            v = prod(ta, ia, tp, ip)
            if v:
                out ^= v << offsets[gi]
        return out

    def multiply(self, ta: int, ia: int, t: int, x: int) -> int:
        return self.act(ta, ia, t, self.decode(t, x))

    def element_weight_ok(self, t: int, w: int, x: int) -> bool:
        ws = self.pair_weights(t)
        return all(ws[b] <= w for b in bits_of(x))

    def to_element(self, t: int, w: int, x: int) -> ModuleElement:
        ws = self.pair_weights(t)
        terms = []
        for (gi, tb, ib), b in zip(self.decode(t, x), bits_of(x)):
            terms.append((self.tables.basis(tb)[ib], w - ws[b], gi))
        return ModuleElement(self.f, t, w, tuple(terms))

    def from_element(self, el: ModuleElement) -> int:
        pairs = []
        for exps, j, gi in el.terms:
            pos = self.tables.index(exps)
            if pos is None:
                raise ValueError(f"{exps} is not a basis index")
            pairs.append((gi, pos[1]))
        x = self.encode(el.t, pairs)
        if not self.element_weight_ok(el.t, el.w, x):
            raise ValueError("tau powers inconsistent with weights")
        return x


class Resolution:
    """A free resolution of ``M2`` (or ``F2``) computed on a rectangle of (f, t).

    The computed region is ``f <= f_done`` and ``t <= t_done``.  Ext is valid
    in internal degree ``t <= t_done`` and filtration ``f < f_done``.
    """

    def __init__(self, profile: MotivicProfile):
        self.profile = profile
        self.tables = tables_for(profile)
        self.modules: list[FreeModule] = [FreeModule(self.tables, 0)]
        self.modules[0].add(0, 0, 0)
        self.t_done = -1
        self.f_done = 0
        self._ext_cache: dict = {}
        self._echelons: dict = {}
        self._lock = threading.Lock()

    # -- structure --------------------------------------------------------

    def module(self, f: int) -> FreeModule:
        while len(self.modules) <= f:
            self.modules.append(FreeModule(self.tables, len(self.modules)))
        return self.modules[f]

    def generators(self, f: int) -> list[Generator]:
        return list(self.module(f).gens) if f < len(self.modules) else []

    def num_generators(self) -> int:
        return sum(len(m.gens) for m in self.modules)

    @property
    def max_stem(self) -> int:
        """Largest stem with Ext valid in every filtration below ``f_done``."""
        return self.t_done - (self.f_done - 1)

    def covers(self, f: int, t: int) -> bool:
        return f < self.f_done and t <= self.t_done

    def require(self, f: int, t: int, what: str = "Ext") -> None:
        if not self.covers(f, t):
            raise RegionError(
                f"{what} at (s, f) = ({t - f}, {f}) needs the resolution through t = {t}, "
                f"f = {f + 1}; computed through t = {self.t_done}, f = {self.f_done}")

    # -- construction -----------------------------------------------------

    def extend(self, max_stem: int, max_f: int, progress=None) -> "Resolution":
        """Resolve far enough for Ext at stems <= max_stem and filtrations <= max_f."""
        t_target = max_stem + max_f
        f_target = max_f + 1
        if t_target > self.profile.degree_cap:
            raise ValueError(f"extension to t = {t_target} exceeds the degree cap "
                             f"{self.profile.degree_cap} of the profile")
        t_target = max(t_target, self.t_done)
        f_target = max(f_target, self.f_done)
        old_t, old_f = self.t_done, self.f_done
        for t in range(0, t_target + 1):
            if t <= old_t:
                if f_target <= old_f:
                    continue
                f_lo = old_f + 1
            else:
                f_lo = 1
            self._step_degree(t, f_lo, f_target)
            if t > old_t:
                # past the old frontier the finished part is again a rectangle
                self.t_done, self.f_done = t, f_target
            if progress is not None:
                progress(t, f_target)
        self.t_done, self.f_done = t_target, f_target
        self._ext_cache.clear()
        return self

    def _kernel_of(self, f: int, t: int) -> list[tuple[int, int]]:
        """(weight, vector) kernel basis of d_f on F_f(t), adapted to the weight filtration."""
        if f == 0:
            if t == 0:
                return []
            ws = self.tables.weights(t)
            order = sorted(range(len(ws)), key=lambda i: (ws[i], i))
            return [(ws[i], 1 << i) for i in order]
        _, kernel = self._reduce(f, t, None)
        return kernel

    def _rows(self, f: int, t: int, max_gen: int | None = None) -> list[tuple[int, int, int]]:
        """Rows of d_f in degree t: (base weight, pair index, image bitmask), sorted."""
        mod = self.module(f)
        lower = self.module(f - 1)
        n = mod.count_through(t) if max_gen is None else max_gen
        offsets, _ = mod.layout(t)
        rows = []
        for gi in range(n):
            g = mod.gens[gi]
            ta = t - g.t
            ws = self.tables.weights(ta)
            if ta == 0:
                rows.append((g.w, offsets[gi], mod.diffs[gi]))
                continue
            terms = mod.diff_terms(gi, lower)
            for ia in range(len(ws)):
                rows.append((g.w + ws[ia], offsets[gi] + ia, lower.act(ta, ia, g.t, terms)))
        rows.sort(key=lambda r: (r[0], r[1]))
        return rows

    def _reduce(self, f: int, t: int, add_from: list | None):
        """Eliminate the rows of d_f in degree t, optionally adding generators.

        ``add_from`` is the weight-sorted kernel of d_{f-1} to be covered; new
        generators are created when it is not covered.  Returns the
        eliminator and the weight-sorted kernel of d_f.
        """
        mod = self.module(f)
        n_old = mod.count_through(t - 1) if add_from is not None else mod.count_through(t)
        rows = self._rows(f, t, n_old)
        elim = Eliminator()
        kernel: list[tuple[int, int]] = []
        pending = add_from or []
        ki = 0
        ri = 0
        while ri < len(rows) or ki < len(pending):
            w_row = rows[ri][0] if ri < len(rows) else None
            w_ker = pending[ki][0] if ki < len(pending) else None
            if w_ker is None or (w_row is not None and w_row <= w_ker):
                w, idx, row = rows[ri]
                ri += 1
                combo = elim.add(row, 1 << idx, w)
                if combo is not None:
                    kernel.append((w, combo))
                continue
            w, v = pending[ki]
            ki += 1
            if elim.reduce(v) == 0:
                continue
            g = mod.add(t, w, v)
            _, total = mod.layout(t)
            idx = total - 1
            assert mod.layout(t)[0][g.id] == idx
            if elim.add(v, 1 << idx, w) is not None:
                raise AssertionError("new generator row is dependent")
        return elim, kernel

    def _step_degree(self, t: int, f_lo: int, f_hi: int) -> None:
        kernel = self._kernel_of(f_lo - 1, t)
        for f in range(f_lo, f_hi + 1):
            self.module(f)
            _, kernel = self._reduce(f, t, kernel)

    # -- solving ----------------------------------------------------------

    def echelon(self, f: int, t: int) -> Eliminator:
        """Weight-filtered elimination of d_f: F_f(t) -> F_{f-1}(t) (memoized, bounded)."""
        if f > self.f_done or t > self.t_done:
            raise RegionError(f"d_{f} in degree {t} is outside the computed region")
        key = (f, t)
        with self._lock:
            e = self._echelons.get(key)
            if e is not None:
                self._echelons[key] = self._echelons.pop(key)
                return e
        rows = self._rows(f, t)
        e = Eliminator()
        for w, idx, row in rows:
            e.add(row, 1 << idx, w)
        with self._lock:
            self._echelons[key] = e
            while len(self._echelons) > 48:
                self._echelons.pop(next(iter(self._echelons)))
        return e

    def lift(self, f: int, t: int, w: int, target: int) -> int:
        """Some ``y`` in F_f(t) of weight w with ``d y = target``; raises if impossible."""
        if f == 0:
            raise ValueError("use the augmentation for f = 0")
        if target == 0:
            return 0
        y = self.echelon(f, t).express(target, max_level=w)
        if y is None:
            raise ArithmeticError(f"no preimage under d_{f} in degree ({t}, {w})")
        return y

    # -- Ext --------------------------------------------------------------

    def coboundary_matrix(self, f: int, t: int) -> list[int]:
        """Row per generator of F_f in degree t: bitmask over generators of F_{f+1} in degree t."""
        src = self.module(f).gens_in_degree(t)
        upper = self.module(f + 1)
        tgt = upper.gens_in_degree(t)
        if not src:
            return []
        mod = self.module(f)
        unit_bits = {mod.unit_bit(g.id): k for k, g in enumerate(src)}
        rows = [0] * len(src)
        for j, h in enumerate(tgt):
            d = upper.diffs[h.id]
            for b, k in unit_bits.items():
                if (d >> b) & 1:
                    rows[k] |= 1 << j
        return rows

    def ext_group(self, s: int, f: int, w: int) -> "ExtGroup":
        t = s + f
        self.require(f, t)
        key = (f, t, w)
        grp = self._ext_cache.get(key)
        if grp is None:
            grp = ExtGroup.compute(self, f, t, w)
            self._ext_cache[key] = grp
        return grp

    def weight_range(self, f: int, t: int) -> tuple[int, int] | None:
        """Weights where Ext^{f}(t) can change; below the minimum it is tau-periodic."""
        ws = []
        for ff in (f - 1, f, f + 1):
            if 0 <= ff < len(self.modules):
                ws.extend(g.w for g in self.modules[ff].gens_in_degree(t))
        ours = [g.w for g in self.module(f).gens_in_degree(t)] if f < len(self.modules) else []
        if not ours:
            return None
        return min(ws), max(ours)

    def ext_dim(self, s: int, f: int, w: int) -> int:
        t = s + f
        self.require(f, t)
        rng = self.weight_range(f, t)
        if rng is None or w > rng[1]:
            return 0
        return self.ext_group(s, f, max(w, rng[0])).dim

    def ext_weights(self, s: int, f: int) -> list[int]:
        """Weights, highest first, at which Ext^{s,f} is nonzero down to its tau-stable weight."""
        t = s + f
        self.require(f, t)
        rng = self.weight_range(f, t)
        if rng is None:
            return []
        return [w for w in range(rng[1], rng[0] - 1, -1) if self.ext_group(s, f, w).dim]

    def coboundary_solve(self, f: int, t: int, w: int, z: int) -> int | None:
        """A cochain ``e`` on F_{f-1}(t) of weight w with ``delta e = z``, or None."""
        if z == 0:
            return 0
        if f == 0:
            return None
        self.require(f - 1, t, "cochains")
        below = self.module(f - 1).gens_in_degree(t)
        rows = self.coboundary_matrix(f - 1, t)
        e = Eliminator()
        for k, g in enumerate(below):
            if g.w >= w:
                e.add(rows[k], 1 << k)
        return e.express(z)

    def ext_table(self) -> "ExtTable":
        return ExtTable(self)

    def cocycle(self, g: Generator) -> "ExtClass":
        """The dual functional of a generator, as a class at its own weight."""
        from .yoneda import ExtClass
        self.require(g.f, g.t)
        mod = self.module(g.f)
        k = [x.id for x in mod.gens_in_degree(g.t)].index(g.id)
        return ExtClass(self, g.f, g.t, g.w, 1 << k)

    def check_d_squared(self) -> int:
        """Verify d(d(g)) = 0 for every generator; returns the number checked."""
        n = 0
        for f in range(1, len(self.modules)):
            mod = self.modules[f]
            lower = self.modules[f - 1]
            for g in mod.gens:
                if f == 1:
                    # the augmentation kills everything of positive degree
                    if g.t == 0:
                        raise AssertionError("degree 0 generator in F_1")
                else:
                    lower2 = self.modules[f - 2]
                    acc = 0
                    for gi, ta, ia in mod.diff_terms(g.id, lower):
                        terms = lower.diff_terms(gi, lower2)
                        acc ^= lower2.act(ta, ia, lower.gens[gi].t, terms)
                    if acc:
                        raise AssertionError(f"d o d != 0 on generator {g}")
                if not lower.element_weight_ok(g.t, g.w, mod.diffs[g.id]):
                    raise AssertionError(f"differential of {g} has negative tau powers")
                n += 1
        return n

    def generator_counts(self) -> dict:
        out: dict = {}
        for mod in self.modules:
            for g in mod.gens:
                key = (g.s, g.f)
                out[key] = out.get(key, 0) + 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Resolution):
            return NotImplemented
        return (self.profile == other.profile and self.t_done == other.t_done
                and self.f_done == other.f_done and self.snapshot() == other.snapshot())

    def snapshot(self) -> list:
        return [[(g.t, g.w, d) for g, d in zip(m.gens, m.diffs)] for m in self.modules
                if m.gens or m.f <= self.f_done]


@dataclass
class ExtGroup:
    """Ext in one tridegree: basis cocycles and the boundary space."""

    f: int
    t: int
    w: int
    gens: list
    basis: list[int]
    boundaries: list[int]
    _elim: Eliminator = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def s(self) -> int:
        return self.t - self.f

    @classmethod
    def compute(cls, r: Resolution, f: int, t: int, w: int) -> "ExtGroup":
        gens = r.module(f).gens_in_degree(t)
        allowed = 0
        for k, g in enumerate(gens):
            if g.w >= w:
                allowed |= 1 << k
        delta = r.coboundary_matrix(f, t)
        # cocycles: kernel of delta restricted to allowed generators
        e = Eliminator()
        cocycles = []
        for k in bits_of(allowed):
            c = e.add(delta[k], 1 << k)
            if c is not None:
                cocycles.append(c)
        boundaries = []
        if f > 0:
            below = r.module(f - 1).gens_in_degree(t)
            delta_below = r.coboundary_matrix(f - 1, t)
            for k, g in enumerate(below):
                if g.w >= w and delta_below[k]:
                    boundaries.append(delta_below[k])
        n = len(gens)
        bech = row_reduce(BitMatrix.from_ints(boundaries, n))
        zech = row_reduce(BitMatrix.from_ints(cocycles, n))
        basis = [v.bits for v in complement_basis(bech, zech)]
        elim = Eliminator()
        for b in bech.basis.rows:
            elim.add(b.bits, 0)
        for i, b in enumerate(basis):
            elim.add(b, 1 << i)
        return cls(f, t, w, gens, basis, [b.bits for b in bech.basis.rows], elim)

    def coordinates(self, cocycle: int) -> int:
        """Coordinates (bitmask over ``basis``) of the class of a cocycle."""
        c = self._elim.express(cocycle)
        if c is None:
            raise ValueError("not a cocycle of this tridegree")
        return c

    def is_coboundary(self, cocycle: int) -> bool:
        return self.coordinates(cocycle) == 0


class ExtTable:
    """Trigraded Ext of a resolution over its completed region, with the tau action.

    Below the lowest weight of the generators involved in a bidegree the
    groups are tau-periodic, so each (s, f) is described by finitely many
    weights plus its *floor* weight.
    """

    def __init__(self, r: Resolution):
        self.resolution = r
        self.max_f = r.f_done - 1
        self.max_t = r.t_done

    def region(self):
        """All (s, f) pairs inside the completed region."""
        for f in range(0, self.max_f + 1):
            for t in range(f, self.max_t + 1):
                yield (t - f, f)

    def in_region(self, s: int, f: int) -> bool:
        return 0 <= f <= self.max_f and s >= 0 and s + f <= self.max_t

    def dim(self, s: int, f: int, w: int) -> int:
        if s < 0 or f < 0:
            return 0
        return self.resolution.ext_dim(s, f, w)

    def floor(self, s: int, f: int) -> int | None:
        rng = self.resolution.weight_range(f, s + f)
        return None if rng is None else rng[0]

    def weights(self, s: int, f: int) -> list[int]:
        return self.resolution.ext_weights(s, f)

    def group(self, s: int, f: int, w: int) -> ExtGroup:
        rng = self.resolution.weight_range(f, s + f)
        if rng is not None:
            w = max(w, rng[0])
        return self.resolution.ext_group(s, f, w)

    def tau_matrix(self, s: int, f: int, w: int) -> BitMatrix:
        """Matrix (row convention) of tau: Ext(s, f, w) -> Ext(s, f, w - 1) in the chosen bases."""
        src = self.resolution.ext_group(s, f, w) if self.dim(s, f, w) else None
        if src is None:
            return BitMatrix.zero(0, self.dim(s, f, w - 1))
        tgt = self.group(s, f, w - 1)
        n = tgt.dim
        # the cocycle of a class at weight w is also a cocycle at weight w - 1
        rows = [tgt.coordinates(b) for b in src.basis]
        return BitMatrix.from_ints(rows, n)

    def tau_power_matrix(self, s: int, f: int, w: int, k: int) -> BitMatrix:
        """tau^k computed directly by reinterpreting cocycles k weights lower."""
        if not self.dim(s, f, w):
            return BitMatrix.zero(0, self.dim(s, f, w - k))
        src = self.resolution.ext_group(s, f, w)
        tgt = self.group(s, f, w - k)
        return BitMatrix.from_ints([tgt.coordinates(b) for b in src.basis], tgt.dim)

    def tau_rank(self, s: int, f: int, w: int) -> int:
        """Rank of Ext(s, f, w) modulo tau-torsion (its image under high tau powers)."""
        d = self.dim(s, f, w)
        if not d:
            return 0
        lo = self.floor(s, f)
        if w <= lo:
            return d
        from .f2 import rank
        return rank(self.tau_power_matrix(s, f, w, w - lo))

    def stable_rank(self, s: int, f: int) -> int:
        """Rank of the tau-localized group (free rank over F2[tau])."""
        lo = self.floor(s, f)
        return 0 if lo is None else self.dim(s, f, lo)

    def rows(self):
        """(s, f, w, dim, tau_rank) for every nonzero group of the region, weights down to the floor."""
        out = []
        for f in range(0, self.max_f + 1):
            for t in range(f, self.max_t + 1):
                s = t - f
                for w in self.weights(s, f):
                    out.append((s, f, w, self.dim(s, f, w), self.tau_rank(s, f, w)))
        out.sort()
        return out


# -- checkpoints ------------------------------------------------------------
#
# Layout (all integers little-endian):
#   8 bytes   magic b"STEENRES"
#   u16, u16  major, minor version
#   u32 + n   profile description, UTF-8 JSON
#   i32, i32  t_done, f_done
#   u32       number of filtrations stored
#   per filtration: u32 generator count, then per generator
#             i32 t, i32 w, u32 term count, then terms as u32 triples
#             (lower generator id, basis index in its degree, tau power)
#   u32       CRC-32 of everything before it

import json
import os
import struct
import zlib

CHECKPOINT_MAGIC = b"STEENRES"
CHECKPOINT_VERSION = (1, 0)


class CheckpointError(ValueError):
    """A checkpoint blob is corrupt, truncated, or from an incompatible version."""


def checkpoint_save(r: Resolution) -> bytes:
    parts = [CHECKPOINT_MAGIC, struct.pack("<HH", *CHECKPOINT_VERSION)]
    prof = json.dumps(r.profile.describe(), sort_keys=True).encode()
    parts.append(struct.pack("<I", len(prof)) + prof)
    parts.append(struct.pack("<iiI", r.t_done, r.f_done, len(r.modules)))
    for f, mod in enumerate(r.modules):
        parts.append(struct.pack("<I", len(mod.gens)))
        lower = r.modules[f - 1] if f else None
        for g in mod.gens:
            if f == 0:
                terms = []
            else:
                ws = lower.pair_weights(g.t)
                terms = [(gi, ia, g.w - ws[b])
                         for (gi, _, ia), b in zip(lower.decode(g.t, mod.diffs[g.id]), bits_of(mod.diffs[g.id]))]
            parts.append(struct.pack("<iiI", g.t, g.w, len(terms)))
            if terms:
                parts.append(struct.pack(f"<{3 * len(terms)}I", *(x for tr in terms for x in tr)))
    body = b"".join(parts)
    return body + struct.pack("<I", zlib.crc32(body))


def checkpoint_load(blob: bytes) -> Resolution:
    if len(blob) < 16 or blob[:8] != CHECKPOINT_MAGIC:
        raise CheckpointError("not a resolution checkpoint (bad magic)")
    major, minor = struct.unpack_from("<HH", blob, 8)
    if major != CHECKPOINT_VERSION[0]:
        raise CheckpointError(f"checkpoint version {major}.{minor} is not readable by "
                              f"version {CHECKPOINT_VERSION[0]}.x")
    body, (crc,) = blob[:-4], struct.unpack("<I", blob[-4:])
    if zlib.crc32(body) != crc:
        raise CheckpointError("checkpoint is truncated or corrupt (checksum mismatch)")
    try:
        return _parse_checkpoint(body)
    except (struct.error, KeyError, ValueError, IndexError) as exc:
        raise CheckpointError(f"malformed checkpoint: {exc}") from None


def _parse_checkpoint(body: bytes) -> Resolution:
    off = 12
    (n,) = struct.unpack_from("<I", body, off)
    off += 4
    prof = MotivicProfile.from_description(json.loads(body[off:off + n].decode()))
    off += n
    t_done, f_done, nf = struct.unpack_from("<iiI", body, off)
    off += 12
    r = Resolution(prof)
    r.modules = []
    for f in range(nf):
        mod = r.module(f)
        (ng,) = struct.unpack_from("<I", body, off)
        off += 4
        for _ in range(ng):
            t, w, nt = struct.unpack_from("<iiI", body, off)
            off += 12
            flat = struct.unpack_from(f"<{3 * nt}I", body, off)
            off += 12 * nt
            diff = 0
            if f:
                lower = r.modules[f - 1]
                ws = lower.pair_weights(t)
                offsets, _ = lower.layout(t)
                for k in range(nt):
                    gi, ia, j = flat[3 * k:3 * k + 3]
                    b = offsets[gi] + ia
                    if ws[b] + j != w:
                        raise ValueError("tau power inconsistent with weights")
                    diff ^= 1 << b
            mod.add(t, w, diff)
    if off != len(body):
        raise ValueError("trailing bytes")
    r.t_done, r.f_done = t_done, f_done
    return r


def write_checkpoint(r: Resolution, path) -> None:
    """Write atomically: a crash mid-write leaves the previous checkpoint intact."""
    path = os.fspath(path)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(checkpoint_save(r))
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def read_checkpoint(path) -> Resolution:
    with open(path, "rb") as fh:
        return checkpoint_load(fh.read())
