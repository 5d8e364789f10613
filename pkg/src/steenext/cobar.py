"""Ext by brute force: homology of the reduced cobar complex of a dual profile algebra.

This shares nothing with the resolution code except the coproduct tables,
so it serves as an independent check.  ``C^f`` is spanned by bars
``[m_1 | ... | m_f]`` of positive-degree monomials; its weight-``w`` slice
in internal degree ``t`` consists of ``tau^k [..]`` with
``k = sum w(m_i) - w >= 0``.  The coboundary never lowers ``sum w(m_i)``,
so one elimination with rows fed in decreasing bar weight yields the rank
of every weight slice at once.

The complex grows exponentially with ``f``; a cell budget guards against
running out of memory, and exceeding it raises :class:`CobarBlowup`.
"""

from __future__ import annotations

from itertools import product as iproduct

from .f2 import Eliminator
from .hopf import MotivicProfile, _coproduct_raw, basis_in_degree, exps_weight

DEFAULT_MAX_CELLS = 500_000


class CobarBlowup(MemoryError):
    """The cobar complex in some bidegree exceeds the configured cell budget."""

    def __init__(self, f: int, t: int, cells: int, budget: int):
        super().__init__(f"cobar complex C^{f} in degree t = {t} has {cells} cells "
                         f"(budget {budget})")
        self.f, self.t, self.cells, self.budget = f, t, cells, budget


class _Bars:
    def __init__(self, p: MotivicProfile, t_max: int):
        self.p = p
        self.t_max = t_max
        self.ideal = {t: basis_in_degree(p, t) for t in range(1, t_max + 1)}
        self.weight = {m: (exps_weight(m) if p.motivic else 0)
                       for ms in self.ideal.values() for m in ms}
        self._counts: dict = {}
        self._bars: dict = {}

    def count(self, f: int, t: int) -> int:
        key = (f, t)
        if key not in self._counts:
            if f == 0:
                c = 1 if t == 0 else 0
            else:
                c = sum(len(self.ideal[t1]) * self.count(f - 1, t - t1) for t1 in range(1, t + 1))
            self._counts[key] = c
        return self._counts[key]

    def bars(self, f: int, t: int) -> list:
        key = (f, t)
        if key not in self._bars:
            if f == 0:
                out = [()] if t == 0 else []
            else:
                out = [(m,) + rest for t1 in range(1, t + 1) for m in self.ideal[t1]
                       for rest in self.bars(f - 1, t - t1)]
            self._bars[key] = out
        return self._bars[key]

    def bar_weight(self, bar) -> int:
        return sum(self.weight[m] for m in bar)

    def coboundary(self, bar) -> list:
        """Bars (with multiplicity mod 2 resolved by the caller) in the coboundary of ``bar``."""
        out = []
        for i, m in enumerate(bar):
            for a, _, b in _coproduct_raw(self.p, m):
                if a and b:
                    out.append(bar[:i] + (a, b) + bar[i + 1:])
        return out


def _ranks_by_weight(bars: _Bars, f: int, t: int) -> tuple[list[int], list[int]]:
    """Ranks of d: C^f(t) -> C^{f+1}(t) on each weight slice.

    Returns (thresholds, ranks): the slice at weight w has rank ranks[i]
    where thresholds[i] is the smallest threshold >= w.
    """
    src = bars.bars(f, t)
    if not src:
        return [], []
    tgt_index = {b: i for i, b in enumerate(bars.bars(f + 1, t))}
    order = sorted(range(len(src)), key=lambda i: -bars.bar_weight(src[i]))
    elim = Eliminator()
    rank = 0
    thresholds: list[int] = []
    ranks: list[int] = []
    last = None
    for i in order:
        bw = bars.bar_weight(src[i])
        if last is not None and bw != last:
            thresholds.append(last)
            ranks.append(rank)
        last = bw
        row = 0
        for b in bars.coboundary(src[i]):
            row ^= 1 << tgt_index[b]
        if row and elim.add(row, 0) is None:
            rank += 1
    thresholds.append(last)
    ranks.append(rank)
    return thresholds, ranks


def _slice_value(thresholds, values, w) -> int:
    """Value for weight w: cumulative over bars with weight >= w (thresholds decreasing)."""
    out = 0
    for th, v in zip(thresholds, values):
        if th >= w:
            out = v
    return out


class CobarTable:
    """Ext dimensions from the cobar complex.

    ``floors[(s, f)]`` is the weight at and below which the group is
    tau-periodic; ``dims`` holds the nonzero groups at weights >= floor.
    ``blowup`` lists the (s, f, cells) bidegrees skipped for exceeding the budget.
    """

    def __init__(self):
        self.dims: dict = {}
        self.floors: dict = {}
        self.blowup: list = []

    def computed(self, s: int, f: int) -> bool:
        return (s, f) in self.floors

    def dim(self, s: int, f: int, w: int) -> int:
        if (s, f) not in self.floors:
            if any(b[0] == s and b[1] == f for b in self.blowup):
                raise CobarBlowup(f, s + f, -1, -1)
            return 0
        return self.dims.get((s, f, max(w, self.floors[(s, f)])), 0)


def cobar_ext_dims(p: MotivicProfile, t_max: int, f_max: int, *, max_cells: int = DEFAULT_MAX_CELLS,
                   skip_blowup: bool = False) -> CobarTable:
    """Ext dimensions from the reduced cobar complex, for t <= t_max and f <= f_max.

    With ``skip_blowup``, bidegrees over the cell budget are recorded in
    ``blowup`` instead of raising :class:`CobarBlowup`.
    """
    if t_max > p.degree_cap:
        raise ValueError("t_max exceeds the degree cap of the profile")
    bars = _Bars(p, t_max)
    out = CobarTable()
    for t in range(0, t_max + 1):
        rank_cache: dict = {}

        def ranks(f):
            if f not in rank_cache:
                cells = bars.count(f, t) + bars.count(f + 1, t)
                if cells > max_cells:
                    raise CobarBlowup(f, t, cells, max_cells)
                rank_cache[f] = _ranks_by_weight(bars, f, t)
            return rank_cache[f]

        for f in range(0, f_max + 1):
            s = t - f
            if s < 0:
                continue
            if t == 0:
                if f == 0:
                    # M2 itself: one class in each weight 0, -1, -2, ...
                    out.dims[(0, 0, 0)] = 1
                    out.floors[(0, 0)] = 0
                continue
            if f == 0 or bars.count(f, t) == 0:
                out.floors[(s, f)] = 0
                continue
            try:
                th_out, rk_out = ranks(f)
                th_in, rk_in = ranks(f - 1)
            except CobarBlowup as exc:
                if not skip_blowup:
                    raise
                out.blowup.append((s, f, exc.cells))
                continue
            wts = [bars.bar_weight(b) for b in bars.bars(f, t)]
            top, bottom = max(wts), min(wts + th_in)
            for w in range(top, bottom - 1, -1):
                n = sum(1 for x in wts if x >= w)
                d = n - _slice_value(th_out, rk_out, w) - _slice_value(th_in, rk_in, w)
                if d:
                    out.dims[(s, f, w)] = d
            out.floors[(s, f)] = bottom
    return out
