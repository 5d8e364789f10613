"""Products, Massey products and change-of-rings maps on Ext, at chain level.

Everything is computed by lifting cocycles to maps of resolutions.  Maps
are lazy: the image of a generator is computed (and memoized) the first
time something needs it, so a product only touches the generators in the
degrees it actually reads.

Convention: for classes ``x`` (filtration ``f_x``) and ``y``, the product
is ``y o C^x_{f_y}`` where ``C^x`` lifts ``x``.  Ext over these algebras is
commutative, so the order only matters for bookkeeping.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable

from .f2 import Eliminator, bits_of
from .resolution import Resolution, RegionError


class MasseyUndefined(ValueError):
    """A bracket was requested whose defining products do not vanish."""


@dataclass(frozen=True, eq=False)
class ExtClass:
    """A class in Ext^{f}(t, w), given by a cocycle on the generators of F_f in degree t.

    Bit ``k`` of ``cocycle`` is the coefficient of the ``k``-th generator of
    that degree; the cochain sends it to ``tau^(w_g - w)``.
    """

    resolution: Resolution
    f: int
    t: int
    w: int
    cocycle: int

    @property
    def s(self) -> int:
        return self.t - self.f

    @property
    def tridegree(self) -> tuple[int, int, int]:
        return (self.t - self.f, self.f, self.w)

    @classmethod
    def zero(cls, r: Resolution, s: int, f: int, w: int) -> "ExtClass":
        return cls(r, f, s + f, w, 0)

    @classmethod
    def unit(cls, r: Resolution) -> "ExtClass":
        return cls(r, 0, 0, 0, 1)

    def group(self):
        r = self.resolution
        rng = r.weight_range(self.f, self.t)
        w = self.w if rng is None else max(self.w, rng[0])
        return r.ext_group(self.s, self.f, w)

    def coordinates(self) -> int:
        if self.cocycle == 0:
            return 0
        return self.group().coordinates(self.cocycle)

    def is_zero(self) -> bool:
        return self.coordinates() == 0

    def __bool__(self):
        return not self.is_zero()

    def _check(self, other: "ExtClass"):
        if other.resolution is not self.resolution or other.tridegree != self.tridegree:
            raise ValueError(f"classes in different groups: {self.tridegree} vs {other.tridegree}")

    def __add__(self, other: "ExtClass") -> "ExtClass":
        self._check(other)
        return ExtClass(self.resolution, self.f, self.t, self.w, self.cocycle ^ other.cocycle)

    __sub__ = __add__

    def __eq__(self, other):
        if not isinstance(other, ExtClass):
            return NotImplemented
        if other.resolution is not self.resolution or other.tridegree != self.tridegree:
            return False
        return (self + other).is_zero()

    def __hash__(self):
        return hash((id(self.resolution), self.tridegree))

    def tau(self, k: int = 1) -> "ExtClass":
        """Multiplication by tau^k (the same cocycle read k weights lower)."""
        return ExtClass(self.resolution, self.f, self.t, self.w - k, self.cocycle)

    def __mul__(self, other: "ExtClass") -> "ExtClass":
        return product(self, other)

    def __pow__(self, k: int) -> "ExtClass":
        out = ExtClass.unit(self.resolution)
        for _ in range(k):
            out = product(out, self)
        return out

    def evaluate(self, f: int, t: int, x: int) -> int:
        """The cochain applied to an element ``x`` of F_f(t); returns 0 or 1."""
        if f != self.f or t != self.t or not self.cocycle:
            return 0
        return _evaluate(self.resolution, self.f, self.t, self.cocycle, x)

    def __repr__(self):
        return f"ExtClass{self.tridegree}[{self.cocycle:b}]"


def _unit_bits(r: Resolution, f: int, t: int) -> list[int]:
    mod = r.module(f)
    return [mod.unit_bit(g.id) for g in mod.gens_in_degree(t)]


def _evaluate(r: Resolution, f: int, t: int, cochain: int, x: int) -> int:
    """Apply a cochain (bitmask over degree-t generators of F_f) to x in F_f(t)."""
    acc = 0
    for k, b in enumerate(_unit_bits(r, f, t)):
        if (cochain >> k) & 1:
            acc ^= (x >> b) & 1
    return acc


class LazyMap:
    """A module map F^src_{shift_f + i} -> F^tgt_i, defined generator by generator.

    ``src_tgt_index`` maps (degree, source basis index) to a target basis index
    (or None when the algebra map kills it); it is the identity when source
    and target live over the same algebra.
    """

    def __init__(self, src: Resolution, tgt: Resolution, shift_f: int, shift_t: int, shift_w: int,
                 basis_map: Callable[[int, int], int | None] | None = None):
        self.src = src
        self.tgt = tgt
        self.shift_f = shift_f
        self.shift_t = shift_t
        self.shift_w = shift_w
        self.basis_map = basis_map
        self._values: dict[tuple[int, int], int] = {}
        self._lock = threading.RLock()

    def _compute(self, i: int, gid: int) -> int:
        raise NotImplementedError

    def value(self, i: int, gid: int) -> int:
        """Image of generator ``gid`` of F^src_{shift_f + i}, as a bitmask in F^tgt_i."""
        key = (i, gid)
        v = self._values.get(key)
        if v is None:
            with self._lock:
                v = self._values.get(key)
                if v is None:
                    v = self._compute(i, gid)
                    self._values[key] = v
        return v

    def apply(self, i: int, t: int, x: int) -> int:
        """Image of ``x`` in F^src_{shift_f + i}(t); lands in F^tgt_i(t - shift_t)."""
        if x == 0:
            return 0
        smod = self.src.module(self.shift_f + i)
        tmod = self.tgt.module(i)
        out = 0
        for gi, ta, ia in smod.decode(t, x):
            v = self.value(i, gi)
            if not v:
                continue
            tg = smod.gens[gi].t - self.shift_t
            if self.basis_map is not None:
                ia = self.basis_map(ta, ia)
                if ia is None:
                    continue
            if ta == 0:
                out ^= v
            else:
                out ^= tmod.act(ta, ia, tg, tmod.decode(tg, v))
        return out

    def _lift(self, i: int, h, target: int) -> int:
        if target == 0:
            return 0
        t = h.t - self.shift_t
        w = h.w - self.shift_w
        try:
            return self.tgt.lift(i, t, w, target)
        except RegionError as exc:
            raise RegionError(f"lifting needs d_{i} in degree {t}: {exc}") from None

    def pullback(self, cochain: int, f: int, t: int) -> int:
        """Compose a cochain on F^tgt_f (degree t) with this map at level f.

        Result: bitmask over the generators of F^src_{shift_f + f} in degree
        ``t + shift_t``.
        """
        fs = self.shift_f + f
        ts = t + self.shift_t
        self.src.require(fs, ts, "pullback")
        out = 0
        if cochain == 0:
            return 0
        for k, h in enumerate(self.src.module(fs).gens_in_degree(ts)):
            if _evaluate(self.tgt, f, t, cochain, self.value(f, h.id)):
                out |= 1 << k
        return out


class ChainMap(LazyMap):
    """Lift of an Ext class (or of the identity, across a change of rings) to a chain map."""

    def __init__(self, src, tgt, shift_f, shift_t, shift_w, level0: Callable, basis_map=None):
        super().__init__(src, tgt, shift_f, shift_t, shift_w, basis_map)
        self._level0 = level0

    def _compute(self, i, gid):
        h = self.src.module(self.shift_f + i).gens[gid]
        if i == 0:
            return self._level0(h)
        lower = self.src.module(self.shift_f + i).diffs[gid]
        target = self.apply(i - 1, h.t, lower)
        return self._lift(i, h, target)


class ComposedMap(LazyMap):
    """``outer o inner`` where inner: F_{a + b + i} -> F_{b + i} and outer: F_{b + i} -> F_i."""

    def __init__(self, outer: LazyMap, inner: LazyMap):
        if inner.tgt is not outer.src:
            raise ValueError("maps do not compose")
        super().__init__(inner.src, outer.tgt, inner.shift_f + outer.shift_f,
                         inner.shift_t + outer.shift_t, inner.shift_w + outer.shift_w)
        self.outer = outer
        self.inner = inner

    def _compute(self, i, gid):
        h = self.src.module(self.shift_f + i).gens[gid]
        mid = self.inner.value(self.outer.shift_f + i, gid)
        return self.outer.apply(i, h.t - self.inner.shift_t, mid)


class Homotopy(LazyMap):
    """H_i: F_{shift_f + i} -> F_i with dH_{i+1} + H_i d = K_i, K of filtration shift ``shift_f + 1``.

    ``level0`` is the cochain ``e`` with ``delta e`` = the class of K.
    """

    def __init__(self, cm: LazyMap, e: int):
        super().__init__(cm.src, cm.tgt, cm.shift_f - 1, cm.shift_t, cm.shift_w)
        self.cm = cm
        self.e = e
        self._e_gens = {g.id: k for k, g in enumerate(cm.src.module(cm.shift_f - 1).gens_in_degree(cm.shift_t))}

    def _compute(self, i, gid):
        h = self.src.module(self.shift_f + i).gens[gid]
        if i == 0:
            k = self._e_gens.get(gid)
            return 1 if k is not None and (self.e >> k) & 1 else 0
        # solve d H_i(h) = K_{i-1}(h) + H_{i-1}(d h)
        target = self.cm.value(i - 1, gid) ^ self.apply(i - 1, h.t, self.src.module(self.shift_f + i).diffs[gid])
        return self._lift(i, h, target)

    def check(self, i: int, gid: int) -> bool:
        """dH_{i+1}(h) + H_i(dh) == K_i(h) for a generator h of F_{shift_f + 1 + i}."""
        h = self.src.module(self.shift_f + 1 + i).gens[gid]
        lhs = self.apply(i, h.t, self.src.module(self.shift_f + 1 + i).diffs[gid])
        y = self.value(i + 1, gid)
        if i + 1 >= 1 and y:
            dy = 0
            tmod = self.tgt.module(i + 1)
            low = self.tgt.module(i)
            tt = h.t - self.shift_t
            for gi, ta, ia in tmod.decode(tt, y):
                terms = tmod.diff_terms(gi, low)
                dy ^= low.act(ta, ia, tmod.gens[gi].t, terms) if ta else tmod.diffs[gi]
            lhs ^= dy
        return lhs == self.cm.value(i, gid)


# -- lifting Ext classes --------------------------------------------------

_LIFTS_LOCK = threading.Lock()


def lift_chain_map(x: ExtClass) -> ChainMap:
    """The chain map F_{f_x + i} -> F_i lifting x (memoized per class cocycle)."""
    r = x.resolution
    cache = r.__dict__.setdefault("_lift_cache", {})
    key = (x.f, x.t, x.w, x.cocycle)
    with _LIFTS_LOCK:
        cm = cache.get(key)
        if cm is None:
            gens = {g.id: k for k, g in enumerate(r.module(x.f).gens_in_degree(x.t))}

            def level0(h, gens=gens, c=x.cocycle):
                k = gens.get(h.id)
                return 1 if k is not None and (c >> k) & 1 else 0

            cm = ChainMap(r, r, x.f, x.t, x.w, level0)
            cache[key] = cm
            if len(cache) > 256:
                cache.pop(next(iter(cache)))
    return cm


def product(x: ExtClass, y: ExtClass) -> ExtClass:
    """Yoneda product; bilinear, tau-linear, lands in the sum of tridegrees."""
    if x.resolution is not y.resolution:
        raise ValueError("product of classes over different resolutions")
    r = x.resolution
    f, t, w = x.f + y.f, x.t + y.t, x.w + y.w
    r.require(f, t, "product")
    if x.cocycle == 0 or y.cocycle == 0:
        return ExtClass(r, f, t, w, 0)
    if x.f == 0:
        return ExtClass(r, f, t, w, y.cocycle) if x.t == 0 and x.cocycle else ExtClass(r, f, t, w, 0)
    if y.f == 0:
        return ExtClass(r, f, t, w, x.cocycle) if y.t == 0 and y.cocycle else ExtClass(r, f, t, w, 0)
    cm = lift_chain_map(x)
    return ExtClass(r, f, t, w, cm.pullback(y.cocycle, y.f, y.t))


def null_homotopy(cm: LazyMap) -> Homotopy:
    """A homotopy contracting ``cm`` (a chain map that is zero on Ext)."""
    r = cm.src
    z = cm.pullback(1, 0, 0) if cm.tgt.module(0).gens else 0
    e = r.coboundary_solve(cm.shift_f, cm.shift_t, cm.shift_w, z)
    if e is None:
        raise MasseyUndefined(
            f"chain map is not null on Ext: nonzero class at (s, f, w) = "
            f"({cm.shift_t - cm.shift_f}, {cm.shift_f}, {cm.shift_w})")
    return Homotopy(cm, e)


@dataclass
class Coset:
    """A representative plus a spanning list of the indeterminacy subgroup."""

    representative: ExtClass
    indeterminacy: list = field(default_factory=list)

    @property
    def tridegree(self):
        return self.representative.tridegree

    def _span(self) -> Eliminator:
        e = Eliminator()
        for z in self.indeterminacy:
            e.add(z.coordinates(), 0)
        return e

    def contains(self, x: ExtClass) -> bool:
        return self._span().reduce((x + self.representative).coordinates()) == 0

    def has_zero_indeterminacy(self) -> bool:
        return all(z.is_zero() for z in self.indeterminacy)

    def indeterminacy_dim(self) -> int:
        e = self._span()
        return len(e.rows)

    def is_zero(self) -> bool:
        return self.contains(ExtClass(self.representative.resolution, self.representative.f,
                                      self.representative.t, self.representative.w, 0))

    def map(self, fn) -> "Coset":
        return Coset(fn(self.representative), [fn(z) for z in self.indeterminacy])

    def subset_of(self, other: "Coset") -> bool:
        return other.contains(self.representative) and all(
            other._span().reduce(z.coordinates()) == 0 for z in self.indeterminacy)


def basis_classes(r: Resolution, s: int, f: int, w: int) -> list[ExtClass]:
    """The chosen basis of Ext(s, f, w) as classes."""
    t = s + f
    if s < 0 or f < 0:
        return []
    if not r.covers(f, t):
        raise RegionError(f"Ext at ({s}, {f}) is outside the computed region")
    grp = r.ext_table().group(s, f, w)
    return [ExtClass(r, f, t, w, b) for b in grp.basis]


def massey(a: ExtClass, b: ExtClass, c: ExtClass, *, perturb: int = 0) -> Coset:
    """The triple bracket <a, b, c> as a coset of a Ext + Ext c.

    ``perturb`` changes the homotopy choices (adds a cocycle to each null
    homotopy's first stage); the returned coset must not depend on it.
    """
    r = a.resolution
    if not (r is b.resolution is c.resolution):
        raise ValueError("bracket of classes over different resolutions")
    if not (a * b).is_zero():
        raise MasseyUndefined(f"a*b != 0 for {a.tridegree}, {b.tridegree}")
    if not (b * c).is_zero():
        raise MasseyUndefined(f"b*c != 0 for {b.tridegree}, {c.tridegree}")
    f = a.f + b.f + c.f - 1
    t = a.t + b.t + c.t
    w = a.w + b.w + c.w
    r.require(f, t, "Massey product")
    C = lift_chain_map(c)
    B = lift_chain_map(b)
    K = ComposedMap(B, C)
    H = null_homotopy(K)
    if perturb:
        H = Homotopy(K, H.e ^ _perturbation(r, b.f + c.f - 1, b.t + c.t, b.w + c.w, perturb))
    # e' with delta e' = a o B_{f_a}
    ab = B.pullback(a.cocycle, a.f, a.t)
    e2 = r.coboundary_solve(a.f + b.f, a.t + b.t, a.w + b.w, ab)
    if e2 is None:
        raise MasseyUndefined("a*b is not a coboundary at cochain level")
    if perturb:
        e2 ^= _perturbation(r, a.f + b.f - 1, a.t + b.t, a.w + b.w, perturb + 1)
    rep = H.pullback(a.cocycle, a.f, a.t) ^ C.pullback(e2, a.f + b.f - 1, a.t + b.t)
    representative = ExtClass(r, f, t, w, rep)
    indet = []
    for z in basis_classes(r, b.s + c.s + 1, b.f + c.f - 1, b.w + c.w):
        indet.append(product(a, z))
    for z in basis_classes(r, a.s + b.s + 1, a.f + b.f - 1, a.w + b.w):
        indet.append(product(z, c))
    return Coset(representative, indet)


def _perturbation(r: Resolution, f: int, t: int, w: int, seed: int) -> int:
    """A deterministic nonzero-if-possible cocycle in the given degree, chosen by ``seed``."""
    basis = r.ext_table().group(t - f, f, w).basis if r.covers(f, t) and f >= 0 else []
    out = 0
    for k, z in enumerate(basis):
        if (seed >> (k % 8)) & 1:
            out ^= z
    return out


# -- change of rings ------------------------------------------------------

class ChangeOfRings:
    """Chain map F^sub -> F^amb over a Hopf algebra map sub -> amb, lifting the identity.

    ``basis_map(t, i)`` sends the i-th Milnor basis element of degree t in
    the source algebra to its image's index in the target algebra (None when
    it maps to zero).  Pulling back cocycles gives the induced map on Ext.
    """

    def __init__(self, sub: Resolution, amb: Resolution, basis_map):
        self.sub = sub
        self.amb = amb
        self.map = ChainMap(sub, amb, 0, 0, 0, lambda h: 1 if h.t == 0 else 0, basis_map)

    def __call__(self, x: ExtClass) -> ExtClass:
        if x.resolution is not self.amb:
            raise ValueError("class is not over the source of this map")
        self.sub.require(x.f, x.t, "change of rings")
        return ExtClass(self.sub, x.f, x.t, x.w, self.map.pullback(x.cocycle, x.f, x.t))


def _index_map(sub_tables, amb_tables, keep=None):
    cache: dict = {}

    def basis_map(t, i):
        key = (t, i)
        if key not in cache:
            exps = sub_tables.basis(t)[i]
            if keep is not None and not keep(exps):
                cache[key] = None
            else:
                pos = amb_tables.index(exps)
                cache[key] = None if pos is None else pos[1]
        return cache[key]

    return basis_map


_CHANGES: dict = {}
_CHANGES_LOCK = threading.Lock()


def change_of_rings(sub: Resolution, amb: Resolution, keep=None) -> ChangeOfRings:
    """Memoized change-of-rings map (built once per resolution pair)."""
    key = (id(sub), id(amb), keep)
    with _CHANGES_LOCK:
        c = _CHANGES.get(key)
        if c is None or c.sub is not sub or c.amb is not amb:
            c = ChangeOfRings(sub, amb, _index_map(sub.tables, amb.tables, keep))
            _CHANGES[key] = c
    return c


def restriction(amb: Resolution, sub: Resolution, x: ExtClass) -> ExtClass:
    """p*: Ext over a larger algebra -> Ext over a sub-Hopf algebra, induced by inclusion."""
    for exps in _sample_exps(sub):
        if amb.tables.index(exps) is None:
            raise ValueError("the small algebra is not contained in the large one")
    return change_of_rings(sub, amb)(x)


def _sample_exps(r: Resolution):
    for t in range(0, min(r.t_done, 16) + 1):
        yield from r.tables.basis(t)


def drop_tau_index(i: int):
    """Filter for a quotient map killing every Milnor element involving Q_i (tau_i)."""
    def keep(exps):
        return len(exps) <= i or exps[i] % 2 == 0
    keep.__qualname__ = f"drop_tau_index({i})"
    return _memo_keep(("drop", i), keep)


def only_tau_index(i: int):
    """Filter for the quotient map onto the exterior algebra on Q_i."""
    def keep(exps):
        return all(e == 0 for k, e in enumerate(exps) if k != i)
    return _memo_keep(("only", i), keep)


_KEEPS: dict = {}


def _memo_keep(key, fn):
    return _KEEPS.setdefault(key, fn)


def inflation(sub: Resolution, quotient: Resolution, keep) -> Callable[[ExtClass], ExtClass]:
    """Ext over a quotient Hopf algebra -> Ext over ``sub`` along ``sub -> quotient``."""
    return change_of_rings(sub, quotient, keep)


# -- the Mahowald operator ------------------------------------------------

def mahowald(x: ExtClass, k: int = 1, *, g2: ExtClass, h0: ExtClass) -> Coset:
    """M^k x = <g2, h0^3, M^{k-1} x>, iterating on representatives.

    The indeterminacy is a union bound: the bracket's own indeterminacy at
    each stage plus the images of the previous stage's indeterminacy.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    h0_3 = h0 * h0 * h0
    if not (h0_3 * x).is_zero():
        raise MasseyUndefined(f"h0^3 x != 0 for x at {x.tridegree}")
    coset = massey(g2, h0_3, x)
    for _ in range(k - 1):
        prev = coset
        coset = massey(g2, h0_3, prev.representative)
        for z in prev.indeterminacy:
            if z.is_zero():
                continue
            if (h0_3 * z).is_zero():
                coset.indeterminacy.append(massey(g2, h0_3, z).representative)
    return coset
