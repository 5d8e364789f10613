"""Quotients of the mod 2 dual Steenrod algebra and their dual algebras.

Monomials are stored in *classical exponent form*: ``exps[n-1]`` is the
exponent ``r_n`` of the classical generator ``zeta_n`` of degree ``2^n - 1``.
In motivic mode ``r_n = e + 2k`` encodes ``tau_{n-1}^e xi_n^k``; after
adjoining a square root of ``tau`` the substitution
``zeta_n = tau^{-1/2} tau_{n-1}`` identifies the motivic Hopf algebra with the
classical one, so every motivic structure constant is a classical one times
the power of ``tau`` forced by weights.  This is how both the coproduct and
the Milnor product are evaluated; the direct generator formulas and the
pairing construction are kept as independent cross-checks.

Grading conventions.  In the dual algebra ``tau`` has bidegree ``(0, -1)``,
``tau_i`` has ``(2^{i+1}-1, 2^i-1)`` and ``xi_i`` has ``(2^{i+1}-2, 2^i-1)``.
In the algebra itself the dual basis element of a monomial carries the same
bidegree as the monomial and ``tau`` has weight ``+1`` (cohomological grading,
e.g. ``Sq^2 Sq^2 = tau Sq^3 Sq^1``).
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

MOTIVIC = "motivic"
CLASSICAL = "classical"

Exps = tuple  # classical exponent tuple, trailing zeros stripped


def _strip(exps: Iterable[int]) -> tuple[int, ...]:
    e = list(exps)
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


def exps_degree(exps: tuple[int, ...]) -> int:
    return sum(r * ((2 << n) - 1) for n, r in enumerate(exps))


def exps_weight(exps: tuple[int, ...]) -> int:
    # tau_{n-1} has weight 2^{n-1}-1 and xi_n has weight 2^n-1
    return sum((r & 1) * ((1 << n) - 1) + (r >> 1) * ((2 << n) - 1) for n, r in enumerate(exps))


def exps_taus(exps: tuple[int, ...]) -> int:
    return sum(r & 1 for r in exps)


@dataclass(frozen=True)
class MotivicProfile:
    """Presentation data for a quotient of the dual Steenrod algebra.

    ``tau_heights[i]`` is 2 when ``tau_i`` survives and 0 when it is killed;
    ``xi_heights[i-1]`` bounds the exponent of ``xi_i`` (1 means absent).
    Indices beyond the tuples take ``default_tau`` / ``default_xi``; a height
    of ``None`` is unbounded.  Classical profiles use ``zeta_heights``.
    """

    mode: str
    tau_heights: tuple = ()
    xi_heights: tuple = ()
    degree_cap: int = 64
    default_tau: int = 0
    default_xi: int | None = 1
    zeta_heights: tuple = ()
    default_zeta: int | None = 1
    name: str = ""

    def __post_init__(self):
        if self.mode not in (MOTIVIC, CLASSICAL):
            raise ValueError(f"unknown mode {self.mode!r}")
        for h in self.tau_heights + (self.default_tau,):
            if h not in (0, 2):
                raise ValueError("tau heights must be 0 or 2")
        for h in self.xi_heights + (self.default_xi,) + self.zeta_heights + (self.default_zeta,):
            if h is not None and (h < 1 or h & (h - 1)):
                raise ValueError("heights must be powers of two")

    @property
    def motivic(self) -> bool:
        return self.mode == MOTIVIC

    @property
    def nvars(self) -> int:
        """Number of classical generator indices with degree within the cap."""
        n = 0
        while (2 << n) - 1 <= self.degree_cap:
            n += 1
        return n

    def tau_height(self, i: int) -> int:
        return self.tau_heights[i] if i < len(self.tau_heights) else self.default_tau

    def xi_height(self, i: int) -> int | None:
        return self.xi_heights[i - 1] if i - 1 < len(self.xi_heights) else self.default_xi

    def zeta_height(self, n: int) -> int | None:
        return self.zeta_heights[n - 1] if n - 1 < len(self.zeta_heights) else self.default_zeta

    def exponent_allowed(self, n: int, r: int) -> bool:
        """Is ``r`` an allowed exponent for classical index ``n`` (1-based)?"""
        if self.mode == CLASSICAL:
            h = self.zeta_height(n)
            return h is None or r < h
        e, k = r & 1, r >> 1
        if e and self.tau_height(n - 1) == 0:
            return False
        h = self.xi_height(n)
        return h is None or k < h

    def contains(self, exps: tuple[int, ...]) -> bool:
        return _contains(self, exps)

    def is_finite(self) -> bool:
        if self.mode == CLASSICAL:
            return self.default_zeta == 1 and None not in self.zeta_heights
        return self.default_tau == 0 and self.default_xi == 1 and None not in self.xi_heights

    def max_exponent(self, n: int) -> int:
        """Largest allowed exponent of index ``n`` within the degree cap."""
        cap = self.degree_cap // ((1 << n) - 1)
        best = 0
        for r in range(cap + 1):
            if self.exponent_allowed(n, r):
                best = r
        return best

    def bidegree(self, exps: tuple[int, ...]) -> tuple[int, int]:
        t = exps_degree(exps)
        return (t, exps_weight(exps)) if self.motivic else (t, 0)

    def weight(self, exps: tuple[int, ...]) -> int:
        return exps_weight(exps) if self.motivic else 0

    def with_cap(self, cap: int) -> "MotivicProfile":
        return MotivicProfile(self.mode, self.tau_heights, self.xi_heights, cap, self.default_tau,
                              self.default_xi, self.zeta_heights, self.default_zeta, self.name)

    def describe(self) -> dict:
        return {
            "mode": self.mode, "tau_heights": list(self.tau_heights),
            "xi_heights": list(self.xi_heights), "degree_cap": self.degree_cap,
            "default_tau": self.default_tau, "default_xi": self.default_xi,
            "zeta_heights": list(self.zeta_heights), "default_zeta": self.default_zeta,
            "name": self.name,
        }

    @classmethod
    def from_description(cls, d: dict) -> "MotivicProfile":
        return cls(d["mode"], tuple(d["tau_heights"]), tuple(d["xi_heights"]), d["degree_cap"],
                   d["default_tau"], d["default_xi"], tuple(d["zeta_heights"]),
                   d["default_zeta"], d.get("name", ""))


@lru_cache(maxsize=None)
def _contains(p: MotivicProfile, exps: tuple) -> bool:
    return all(p.exponent_allowed(n + 1, r) for n, r in enumerate(exps) if r)


PRESET_NAMES = ("A", "A2", "B", "E-tau3", "B-classical", "A-classical", "A2-classical")


def preset(name: str, degree_cap: int = 64) -> MotivicProfile:
    """Named profiles: full A, A(2), B, the exterior algebra on tau_3, classical analogues."""
    if name == "A":
        return MotivicProfile(MOTIVIC, (), (), degree_cap, default_tau=2, default_xi=None, name=name)
    if name == "A2":
        return MotivicProfile(MOTIVIC, (2, 2, 2), (4, 2), degree_cap, name=name)
    if name == "B":
        return MotivicProfile(MOTIVIC, (2, 2, 2, 2), (4, 2), degree_cap, name=name)
    if name == "E-tau3":
        return MotivicProfile(MOTIVIC, (0, 0, 0, 2), (), degree_cap, name=name)
    if name == "B-classical":
        return MotivicProfile(CLASSICAL, zeta_heights=(8, 4, 2, 2), degree_cap=degree_cap, name=name)
    if name == "A2-classical":
        return MotivicProfile(CLASSICAL, zeta_heights=(8, 4, 2), degree_cap=degree_cap, name=name)
    if name == "A-classical":
        return MotivicProfile(CLASSICAL, degree_cap=degree_cap, default_zeta=None, name=name)
    raise ValueError(f"unknown profile preset {name!r}; expected one of {PRESET_NAMES}")


# ---------------------------------------------------------------------------
# monomials and the dual Hopf algebra


@dataclass(frozen=True, order=True)
class Monomial:
    """``tau^tau_power`` times a basis monomial given in classical exponent form."""

    exps: tuple = ()
    tau_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "exps", _strip(self.exps))

    @classmethod
    def motivic(cls, taus: Iterable[int] = (), xis: Iterable[int] = (), tau_power: int = 0) -> "Monomial":
        """Build from ``tau_0, tau_1, ...`` exponents (0/1) and ``xi_1, xi_2, ...`` exponents."""
        taus, xis = list(taus), list(xis)
        n = max(len(taus), len(xis))
        taus += [0] * (n - len(taus))
        xis += [0] * (n - len(xis))
        return cls(tuple(e + 2 * k for e, k in zip(taus, xis)), tau_power)

    @property
    def tau_exponents(self) -> tuple[int, ...]:
        return tuple(r & 1 for r in self.exps)

    @property
    def xi_exponents(self) -> tuple[int, ...]:
        return tuple(r >> 1 for r in self.exps)

    @property
    def degree(self) -> int:
        return exps_degree(self.exps)

    def bidegree(self, p: MotivicProfile) -> tuple[int, int]:
        t, w = p.bidegree(self.exps)
        return t, w - self.tau_power

    def name(self, p: MotivicProfile | None = None) -> str:
        classical = p is not None and not p.motivic
        parts = [f"tau^{self.tau_power}"] if self.tau_power else []
        for n, r in enumerate(self.exps, start=1):
            if not r:
                continue
            if classical:
                parts.append(f"zeta{n}" + (f"^{r}" if r > 1 else ""))
                continue
            if r & 1:
                parts.append(f"tau{n - 1}")
            k = r >> 1
            if k:
                parts.append(f"xi{n}" + (f"^{k}" if k > 1 else ""))
        return " ".join(parts) or "1"

    __str__ = name


ONE = Monomial()


def _canon_key(exps: tuple[int, ...]) -> tuple:
    return exps


@lru_cache(maxsize=None)
def _basis_cached(p: MotivicProfile, t: int) -> tuple[tuple[int, ...], ...]:
    out = []
    n_max = p.nvars

    def rec(n: int, remaining: int, acc: list[int]):
        if n == 0:
            if remaining == 0:
                out.append(_strip(acc))
            return
        d = (1 << n) - 1
        for r in range(remaining // d + 1):
            if r and not p.exponent_allowed(n, r):
                continue
            acc[n - 1] = r
            rec(n - 1, remaining - r * d, acc)
        acc[n - 1] = 0

    if t <= p.degree_cap:
        rec(n_max, t, [0] * n_max)
    padded = sorted(out, key=lambda e: tuple(e) + (0,) * (n_max - len(e)))
    return tuple(padded)


def basis_in_degree(p: MotivicProfile, t: int) -> tuple[tuple[int, ...], ...]:
    """All basis exponent tuples of internal degree ``t`` in canonical order."""
    if t < 0:
        return ()
    if t > p.degree_cap:
        raise ValueError(f"degree {t} exceeds the profile degree cap {p.degree_cap}")
    return _basis_cached(p, t)


def basis_in_bidegree(p: MotivicProfile, t: int, w: int) -> list[Monomial]:
    return [Monomial(e) for e in basis_in_degree(p, t) if p.weight(e) == w]


def total_rank(p: MotivicProfile) -> int:
    if not p.is_finite():
        raise ValueError("profile is not finite")
    return sum(len(basis_in_degree(p, t)) for t in range(p.degree_cap + 1))


@dataclass(frozen=True)
class DualElement:
    """Homogeneous F2-combination of monomials (with tau powers)."""

    terms: frozenset = frozenset()

    @classmethod
    def of(cls, *monos: Monomial) -> "DualElement":
        acc: set = set()
        for m in monos:
            acc ^= {m}
        return cls(frozenset(acc))

    def __add__(self, other: "DualElement") -> "DualElement":
        return DualElement(self.terms ^ other.terms)

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self) -> list[Monomial]:
        return sorted(self.terms, key=lambda m: (m.exps, m.tau_power))

    def __str__(self):
        return " + ".join(str(m) for m in self.sorted_terms()) or "0"


@lru_cache(maxsize=1 << 20)
def _product_exps(p: MotivicProfile, a: tuple, b: tuple) -> tuple[tuple, int] | None:
    """Monomial product ``a b = tau^j c`` in the quotient, or None when it vanishes."""
    n = max(len(a), len(b))
    c = tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))
    c = _strip(c)
    if not p.contains(c):
        return None
    if not p.motivic:
        return c, 0
    j2 = exps_taus(a) + exps_taus(b) - exps_taus(c)
    return c, j2 // 2


def multiply_monomials(p: MotivicProfile, a: Monomial, b: Monomial) -> Monomial | None:
    r = _product_exps(p, a.exps, b.exps)
    if r is None:
        return None
    c, j = r
    return Monomial(c, a.tau_power + b.tau_power + j)


def multiply_dual(p: MotivicProfile, a: DualElement, b: DualElement) -> DualElement:
    acc: set = set()
    for x in a.terms:
        for y in b.terms:
            m = multiply_monomials(p, x, y)
            if m is not None:
                acc ^= {m}
    return DualElement(frozenset(acc))


def generator(p: MotivicProfile, kind: str, i: int) -> Monomial:
    """The generator ``tau_i``, ``xi_i`` (motivic) or ``zeta_i`` (classical) as a monomial."""
    e = [0] * (i + 1)
    if kind == "tau":
        e[i] = 1
    elif kind == "xi":
        e[i - 1] = 2
    elif kind == "zeta":
        e[i - 1] = 1
    else:
        raise ValueError(kind)
    return Monomial(tuple(e))


# --- coproduct -------------------------------------------------------------


@lru_cache(maxsize=None)
def _zeta_power_coproduct(n: int, r: int) -> dict:
    """Classical ``psi(zeta_n^r)`` as {(left exps, right exps): 1} (no quotient)."""
    # psi(zeta_n) = sum_j zeta_{n-j}^{2^j} (x) zeta_j; raise to the r-th power mod 2:
    # choose c_0..c_n with sum r and disjoint binary digits (odd multinomial).
    out: dict = {}

    def rec(j: int, remaining: int, left: list[int], right: list[int]):
        if j > n:
            if remaining == 0:
                key = (_strip(left), _strip(right))
                if key in out:
                    del out[key]
                else:
                    out[key] = 1
            return
        if j == n:
            choices = [remaining]
        else:
            choices = [c for c in range(remaining + 1) if (c & (remaining - c)) == 0]
        for c in choices:
            if c:
                if n - j >= 1:
                    left[n - j - 1] += c << j
                if j >= 1:
                    right[j - 1] += c
            rec(j + 1, remaining - c, left, right)
            if c:
                if n - j >= 1:
                    left[n - j - 1] -= c << j
                if j >= 1:
                    right[j - 1] -= c

    rec(0, r, [0] * n, [0] * n)
    return out


def _add_exps(a: tuple, b: tuple) -> tuple:
    n = max(len(a), len(b))
    return tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


@lru_cache(maxsize=200000)
def classical_coproduct(exps: tuple) -> dict:
    """Classical ``psi(zeta^R)`` in the full algebra, {(R', R''): 1}."""
    acc: dict = {((), ()): 1}
    for n, r in enumerate(exps, start=1):
        if not r:
            continue
        factor = _zeta_power_coproduct(n, r)
        new: dict = {}
        for (l1, r1) in acc:
            for (l2, r2) in factor:
                key = (_strip(_add_exps(l1, l2)), _strip(_add_exps(r1, r2)))
                if key in new:
                    del new[key]
                else:
                    new[key] = 1
        acc = new
    return acc


@lru_cache(maxsize=1 << 16)
def _coproduct_raw(p: MotivicProfile, exps: tuple) -> frozenset:
    """Reduced ``psi(exps)`` as a set of (left exps, tau power, right exps)."""
    out = set()
    taus_m = exps_taus(exps)
    for (a, b) in classical_coproduct(exps):
        if not (_contains(p, a) and _contains(p, b)):
            continue
        j = 0
        if p.motivic:
            j2 = taus_m - exps_taus(a) - exps_taus(b)
            if j2 < 0 or j2 & 1:
                raise AssertionError("non-integral tau power in coproduct")
            j = j2 // 2
        out ^= {(a, j, b)}
    return frozenset(out)


def coproduct(p: MotivicProfile, m: Monomial) -> frozenset:
    """``psi(m)`` as a set of (left Monomial, right Monomial) pairs, reduced into ``p``.

    The tau power of a term is carried on the left factor.
    """
    return frozenset((Monomial(a, m.tau_power + j), Monomial(b))
                     for (a, j, b) in _coproduct_raw(p, m.exps))


def _normalize_pair(a: Monomial, b: Monomial) -> tuple:
    return (Monomial(a.exps, a.tau_power + b.tau_power), Monomial(b.exps))


def coproduct_from_generators(p: MotivicProfile, m: Monomial) -> frozenset:
    """``psi(m)`` computed multiplicatively from the generator formulas.

    ``tau_i -> tau_i (x) 1 + sum_k xi_{i-k}^{2^k} (x) tau_k`` and
    ``xi_i -> sum_k xi_{i-k}^{2^k} (x) xi_k``, with products in the quotient.
    Slow; used as an independent check of :func:`coproduct`.
    """
    acc = {(Monomial((), m.tau_power), ONE)}
    factors: list[frozenset] = []
    for n, r in enumerate(m.exps, start=1):
        if p.motivic:
            e, k = r & 1, r >> 1
            if e:
                factors.append(_generator_coproduct(p, "tau", n - 1))
            factors.extend([_generator_coproduct(p, "xi", n)] * k)
        else:
            factors.extend([_generator_coproduct(p, "zeta", n)] * r)
    for fac in factors:
        new: set = set()
        for (a1, b1) in acc:
            for (a2, b2) in fac:
                x = multiply_monomials(p, a1, a2)
                y = multiply_monomials(p, b1, b2)
                if x is None or y is None:
                    continue
                new ^= {_normalize_pair(x, y)}
        acc = new
    return frozenset(acc)


def _xi_power(k: int, e: int) -> Monomial:
    # xi_k^{2^e}; xi_0 = 1
    if k == 0:
        return ONE
    ex = [0] * k
    ex[k - 1] = 2 << e
    return Monomial(tuple(ex))


def _generator_coproduct(p: MotivicProfile, kind: str, i: int) -> frozenset:
    """Unreduced generator coproduct, written in the ambient monomials."""
    terms = []
    if kind == "tau":
        terms.append((generator(p, "tau", i), ONE))
        for k in range(i + 1):
            left = _xi_power(i - k, k)
            terms.append((left, generator(p, "tau", k)))
    elif kind == "xi":
        for k in range(i + 1):
            right = generator(p, "xi", k) if k else ONE
            terms.append((_xi_power(i - k, k), right))
    else:
        for k in range(i + 1):
            left = ONE if i - k == 0 else Monomial(tuple([0] * (i - k - 1) + [1 << k]))
            right = generator(p, "zeta", k) if k else ONE
            terms.append((left, right))
    # monomials like xi_k^{2^e} are written in exponent form r = 2^{e+1}; powers of tau_i
    # never occur on the left, so no rewriting is needed here.
    return frozenset(terms)


def counit(m: Monomial) -> int:
    return 1 if not m.exps and m.tau_power == 0 else 0


# ---------------------------------------------------------------------------
# the algebra dual to the monomial basis


@dataclass(frozen=True)
class MilnorElement:
    """F2-combination of ``tau^j dual(m)`` terms, stored as (exps, j) pairs."""

    terms: frozenset = frozenset()

    @classmethod
    def dual(cls, m: Monomial | tuple, tau_power: int = 0) -> "MilnorElement":
        exps = m.exps if isinstance(m, Monomial) else _strip(m)
        return cls(frozenset({(exps, tau_power)}))

    @classmethod
    def unit(cls) -> "MilnorElement":
        return cls(frozenset({((), 0)}))

    def __add__(self, other: "MilnorElement") -> "MilnorElement":
        return MilnorElement(self.terms ^ other.terms)

    def __bool__(self):
        return bool(self.terms)

    def bidegree(self, p: MotivicProfile) -> set:
        return {(exps_degree(e), p.weight(e) + j) for e, j in self.terms}

    def __str__(self):
        parts = []
        for e, j in sorted(self.terms):
            s = f"dual({Monomial(e)})"
            parts.append(f"tau^{j} {s}" if j else s)
        return " + ".join(parts) or "0"


def milnor_product_classical(r: tuple, s: tuple) -> dict:
    """Classical Milnor product ``Sq(r) Sq(s)`` as {T: 1} via Milnor matrices."""
    result: dict = {}
    rows, cols = len(r) + 1, len(s) + 1
    diags = len(r) + len(s)
    M = [[0] * cols for _ in range(rows)]
    for j in range(1, cols):
        M[0][j] = s[j - 1]
    for i in range(1, rows):
        M[i][0] = r[i - 1]
    found = True
    while found:
        n = 1
        ok = True
        diagonal = [0] * diags
        while n <= diags and ok:
            i = min(len(r), n)
            j = max(0, n - len(r))
            acc = M[i][j]
            while i >= 1 and j < len(s):
                i -= 1
                j += 1
                if acc & M[i][j]:
                    ok = False
                    break
                acc |= M[i][j]
            diagonal[n - 1] = acc
            n += 1
        if ok:
            t = _strip(diagonal)
            if t in result:
                del result[t]
            else:
                result[t] = 1
        found = False
        i = 1
        while not found and i < rows:
            total = M[i][0]
            j = 1
            while not found and j < cols:
                if total >= (1 << j):
                    above = 0
                    for k in range(i):
                        above += M[k][j]
                    if above:
                        found = True
                        for row in range(1, i):
                            M[row][0] = r[row - 1]
                            for col in range(1, cols):
                                M[0][col] += M[row][col]
                                M[row][col] = 0
                        for col in range(1, j):
                            M[0][col] += M[i][col]
                            M[i][col] = 0
                        M[0][j] -= 1
                        M[i][j] += 1
                        M[i][0] = total - (1 << j)
                    else:
                        total += M[i][j] << j
                else:
                    total += M[i][j] << j
                j += 1
            i += 1
    return result


def _milnor_terms(p: MotivicProfile, a: tuple, b: tuple) -> list[tuple[tuple, int]]:
    """``dual(a) dual(b) = sum tau^j dual(c)`` as a list of (c, j)."""
    out = []
    for c in milnor_product_classical(a, b):
        if not p.contains(c):
            raise ValueError(f"product leaves the profile: {a} * {b} -> {c}")
        j = p.weight(a) + p.weight(b) - p.weight(c)
        if j < 0:
            raise AssertionError("negative tau power in Milnor product")
        out.append((c, j))
    return out


def milnor_multiply(p: MotivicProfile, x: MilnorElement, y: MilnorElement) -> MilnorElement:
    acc: set = set()
    for (a, i) in x.terms:
        for (b, j) in y.terms:
            for (c, k) in _milnor_terms(p, a, b):
                acc ^= {(c, i + j + k)}
    return MilnorElement(frozenset(acc))


def milnor_multiply_by_pairing(p: MotivicProfile, x: MilnorElement, y: MilnorElement) -> MilnorElement:
    """Milnor product from the definition: pair against coproducts of every monomial.

    The coefficient of ``dual(m)`` in ``dual(a) dual(b)`` is the coefficient
    of ``a (x) b`` in ``psi(m)``.  Uses :func:`coproduct_from_generators`.
    """
    acc: set = set()
    for (a, i) in x.terms:
        for (b, j) in y.terms:
            t = exps_degree(a) + exps_degree(b)
            for m in basis_in_degree(p, t):
                for (l, r) in coproduct_from_generators(p, Monomial(m)):
                    if l.exps == a and r.exps == b:
                        acc ^= {(m, i + j + l.tau_power)}
    return MilnorElement(frozenset(acc))


def inclusion_image(sub: MotivicProfile, ambient: MotivicProfile, x: MilnorElement) -> MilnorElement:
    """Image under the subalgebra inclusion dual to the projection of dual algebras."""
    if sub.mode != ambient.mode:
        raise ValueError("mode mismatch")
    for (e, _) in x.terms:
        if not sub.contains(e):
            raise ValueError(f"{Monomial(e)} is not a basis index of the subalgebra")
        if not ambient.contains(e):
            raise ValueError(f"{Monomial(e)} is not a basis index of the ambient algebra")
    return MilnorElement(x.terms)


def projection_image(src: MotivicProfile, target: MotivicProfile, x: MilnorElement) -> MilnorElement:
    """Image under the algebra map dual to a sub-Hopf-algebra ``target_* in src_*``."""
    return MilnorElement(frozenset(t for t in x.terms if target.contains(t[0])))


# ---------------------------------------------------------------------------
# indexed tables used by resolutions


class AlgebraTables:
    """Integer-indexed Milnor basis with a memoized product table.

    ``product(ta, ia, tb, ib)`` returns the product as a bitmask over
    ``basis(ta + tb)``; the tau power of every term is forced by weights.
    Lookups are lock-free; a lock serializes inserts (first writer wins).
    """

    def __init__(self, p: MotivicProfile):
        self.profile = p
        self._basis: dict[int, tuple] = {}
        self._weights: dict[int, list[int]] = {}
        self._index: dict[tuple, tuple[int, int]] = {}
        self._prod: dict = {}
        self._lock = threading.Lock()

    def basis(self, t: int) -> tuple:
        b = self._basis.get(t)
        if b is None:
            b = basis_in_degree(self.profile, t)
            self._weights[t] = [self.profile.weight(e) for e in b]
            for i, e in enumerate(b):
                self._index[e] = (t, i)
            self._basis[t] = b
        return b

    def dim(self, t: int) -> int:
        return len(self.basis(t)) if 0 <= t <= self.profile.degree_cap else 0

    def weights(self, t: int) -> list[int]:
        self.basis(t)
        return self._weights[t]

    def index(self, exps: tuple) -> tuple[int, int] | None:
        exps = _strip(exps)
        t = exps_degree(exps)
        self.basis(t)
        return self._index.get(exps)

    def product(self, ta: int, ia: int, tb: int, ib: int) -> int:
        key = (ta, ia, tb, ib)
        v = self._prod.get(key)
        if v is not None:
            return v
        a = self.basis(ta)[ia]
        b = self.basis(tb)[ib]
        tc = ta + tb
        self.basis(tc)
        idx = self._index
        v = 0
        for c in milnor_product_classical(a, b):
            pos = idx.get(c)
            if pos is None:
                if self.profile.contains(c):
                    raise AssertionError("basis index missing")
                raise ValueError(f"product leaves the profile: {a} * {b} -> {c}")
            v ^= 1 << pos[1]
        with self._lock:
            self._prod.setdefault(key, v)
        return v


_TABLES: dict = {}
_TABLES_LOCK = threading.Lock()


def tables_for(p: MotivicProfile) -> AlgebraTables:
    with _TABLES_LOCK:
        t = _TABLES.get(p)
        if t is None:
            t = _TABLES[p] = AlgebraTables(p)
        return t


# ---------------------------------------------------------------------------
# Hopf axiom checks


@dataclass
class HopfReport:
    ok: bool
    counts: dict = field(default_factory=dict)
    witness: str | None = None

    def __str__(self):
        status = "pass" if self.ok else f"FAIL ({self.witness})"
        detail = ", ".join(f"{k}={v}" for k, v in self.counts.items())
        return f"{status} [{detail}]"


def _coassoc_sides(p: MotivicProfile, exps: tuple) -> tuple[frozenset, frozenset]:
    left: set = set()
    right: set = set()
    for (a, j, b) in _coproduct_raw(p, exps):
        for (x, k, y) in _coproduct_raw(p, a):
            left ^= {(x, j + k, y, b)}
        for (x, k, y) in _coproduct_raw(p, b):
            right ^= {(a, j + k, x, y)}
    return frozenset(left), frozenset(right)


def _raw_pair_product(p: MotivicProfile, s1: frozenset, s2: frozenset) -> frozenset:
    out: set = set()
    for (a1, j1, b1) in s1:
        for (a2, j2, b2) in s2:
            x = _product_exps(p, a1, a2)
            if x is None:
                continue
            y = _product_exps(p, b1, b2)
            if y is None:
                continue
            out ^= {(x[0], j1 + j2 + x[1] + y[1], y[0])}
    return frozenset(out)


def ideal_generators(p: MotivicProfile, t_max: int) -> list[tuple[str, Monomial]]:
    """Monomials of the ambient algebra generating the kernel of the projection onto ``p``."""
    gens = []
    for n in range(1, p.nvars + 1):
        d = (1 << n) - 1
        if p.motivic:
            if p.tau_height(n - 1) == 0 and d <= t_max:
                gens.append((f"tau{n - 1}", generator(p, "tau", n - 1)))
            h = p.xi_height(n)
            if h is not None and h * 2 * d <= t_max:
                e = [0] * n
                e[n - 1] = 2 * h
                gens.append((f"xi{n}^{h}", Monomial(tuple(e))))
        else:
            h = p.zeta_height(n)
            if h is not None and h * d <= t_max:
                e = [0] * n
                e[n - 1] = h
                gens.append((f"zeta{n}^{h}", Monomial(tuple(e))))
    return gens


def check_hopf_axioms(p: MotivicProfile, t_max: int) -> HopfReport:
    """Exhaustive Hopf algebra checks on all basis monomials of degree <= t_max.

    Coassociativity, both counit laws, ``psi(g m) = psi(g) psi(m)`` for every
    algebra generator ``g`` (which gives multiplicativity on all pairs by
    induction), agreement with the generator formulas, and that every
    generator of the defining ideal has coproduct in the ideal.
    """
    if t_max > p.degree_cap:
        raise ValueError("t_max exceeds degree cap")
    counts = dict(coassociativity=0, counit=0, multiplicativity=0, generator_formula=0, relations=0)
    gens = []
    for n in range(1, p.nvars + 1):
        if p.motivic:
            if p.exponent_allowed(n, 1):
                gens.append(generator(p, "tau", n - 1))
            if p.exponent_allowed(n, 2):
                gens.append(generator(p, "xi", n))
        elif p.exponent_allowed(n, 1):
            gens.append(generator(p, "zeta", n))

    # the ideal must be a coideal
    full = MotivicProfile(p.mode, (), (), p.degree_cap, default_tau=2, default_xi=None,
                          default_zeta=None)
    for label, g in ideal_generators(p, t_max):
        for (a, b) in coproduct(full, g):
            if p.contains(a.exps) and p.contains(b.exps):
                return HopfReport(False, counts, f"coproduct of relation {label} has surviving term {a} (x) {b}")
        counts["relations"] += 1

    for t in range(t_max + 1):
        for e in basis_in_degree(p, t):
            m = Monomial(e)
            psi = coproduct(p, m)
            if psi != coproduct_from_generators(p, m):
                return HopfReport(False, counts, f"generator formula disagrees on {m}")
            counts["generator_formula"] += 1
            lhs3, rhs3 = _coassoc_sides(p, e)
            if lhs3 != rhs3:
                return HopfReport(False, counts, f"coassociativity fails on {m}")
            counts["coassociativity"] += 1
            left = frozenset(Monomial(b.exps, a.tau_power + b.tau_power) for a, b in psi if not a.exps)
            right = frozenset(a for a, b in psi if not b.exps)
            if left != frozenset({m}) or right != frozenset({m}):
                return HopfReport(False, counts, f"counit law fails on {m}")
            counts["counit"] += 1
            raw = _coproduct_raw(p, e)
            for g in gens:
                if g.degree + t > t_max:
                    continue
                gm = _product_exps(p, g.exps, e)
                if gm is None:
                    lhs = frozenset()
                else:
                    lhs = frozenset((a, j + gm[1], b) for (a, j, b) in _coproduct_raw(p, gm[0]))
                rhs = _raw_pair_product(p, _coproduct_raw(p, g.exps), raw)
                if lhs != rhs:
                    return HopfReport(False, counts, f"psi({g} * {m}) != psi({g}) psi({m})")
                counts["multiplicativity"] += 1
    return HopfReport(True, counts)


def is_primitive(p: MotivicProfile, m: Monomial) -> bool:
    return coproduct(p, m) == frozenset({(m, ONE), (ONE, m)})


def iter_basis(p: MotivicProfile, t_max: int) -> Iterator[Monomial]:
    for t in range(t_max + 1):
        for e in basis_in_degree(p, t):
            yield Monomial(e)
