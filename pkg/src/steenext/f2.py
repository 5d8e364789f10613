"""Dense linear algebra over the field with two elements.

Vectors are packed into Python integers: coordinate ``i`` is bit ``i``.
Integers are arbitrary precision and XOR runs word-at-a-time in C, which
makes them a compact packed-row representation without any native code.

Orientation is fixed throughout the package: matrices act on row vectors,
so ``solve(m, y)`` looks for ``x`` with ``x . m = y``.  The one exception is
:func:`kernel_basis`, which returns the right kernel ``{v : m . v = 0}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


def bits_of(x: int) -> Iterator[int]:
    """Indices of set bits of ``x``, ascending."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits set beyond vector length")

    @classmethod
    def from_list(cls, coords: Sequence[int]) -> "BitVector":
        bits = 0
        for i, c in enumerate(coords):
            if c & 1:
                bits |= 1 << i
        return cls(len(coords), bits)

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        return cls.from_list([int(c) for c in s])

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def __str__(self):
        return "".join(str(c) for c in self.to_list())

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self):
        return self.length

    def __add__(self, other: "BitVector") -> "BitVector":
        if other.length != self.length:
            raise ValueError("length mismatch")
        return BitVector(self.length, self.bits ^ other.bits)

    __xor__ = __add__

    def dot(self, other: "BitVector") -> int:
        return popcount(self.bits & other.bits) & 1

    def is_zero(self) -> bool:
        return self.bits == 0

    def support(self) -> list[int]:
        return list(bits_of(self.bits))


@dataclass(frozen=True)
class BitMatrix:
    rows: tuple[BitVector, ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if r.length != self.ncols:
                raise ValueError("row length differs from ncols")

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "BitMatrix":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(tuple(BitVector.from_list(r) for r in rows), ncols)

    @classmethod
    def from_ints(cls, rows: Iterable[int], ncols: int) -> "BitMatrix":
        return cls(tuple(BitVector(ncols, r) for r in rows), ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_ints((1 << i for i in range(n)), n)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls.from_ints((0 for _ in range(nrows)), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def row_ints(self) -> list[int]:
        return [r.bits for r in self.rows]

    def vecmul(self, x: BitVector) -> BitVector:
        """Row vector times matrix."""
        if x.length != self.nrows:
            raise ValueError("dimension mismatch")
        acc = 0
        for i in bits_of(x.bits):
            acc ^= self.rows[i].bits
        return BitVector(self.ncols, acc)

    def apply(self, v: BitVector) -> BitVector:
        """Matrix times column vector."""
        if v.length != self.ncols:
            raise ValueError("dimension mismatch")
        out = 0
        for i, r in enumerate(self.rows):
            if popcount(r.bits & v.bits) & 1:
                out |= 1 << i
        return BitVector(self.nrows, out)

    def transpose(self) -> "BitMatrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            for j in bits_of(r.bits):
                cols[j] |= 1 << i
        return BitMatrix.from_ints(cols, self.nrows)


@dataclass(frozen=True)
class EchelonSpace:
    """Fully reduced row echelon basis; pivot = lowest set column."""

    basis: BitMatrix
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def ncols(self) -> int:
        return self.basis.ncols

    def reduce(self, v: int) -> int:
        for p, row in zip(self.pivots, self.basis.rows):
            if (v >> p) & 1:
                v ^= row.bits
        return v

    def contains(self, v: BitVector) -> bool:
        return self.reduce(v.bits) == 0


def _rref(rows: Iterable[int]) -> tuple[list[int], list[int]]:
    piv_rows: dict[int, int] = {}
    for r in rows:
        for p, pr in piv_rows.items():
            if (r >> p) & 1:
                r ^= pr
        if not r:
            continue
        p = (r & -r).bit_length() - 1
        for q in piv_rows:
            if (piv_rows[q] >> p) & 1:
                piv_rows[q] ^= r
        piv_rows[p] = r
    pivots = sorted(piv_rows)
    return pivots, [piv_rows[p] for p in pivots]


def row_reduce(m: BitMatrix) -> EchelonSpace:
    pivots, rows = _rref(m.row_ints())
    return EchelonSpace(BitMatrix.from_ints(rows, m.ncols), tuple(pivots))


def rank(m: BitMatrix) -> int:
    return row_reduce(m).dim


def kernel_basis(m: BitMatrix) -> list[BitVector]:
    """Basis of ``{v : m . v = 0}``, one vector per free column."""
    ech = row_reduce(m)
    pivset = set(ech.pivots)
    out = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        v = 1 << free
        for p, row in zip(ech.pivots, ech.basis.rows):
            if (row.bits >> free) & 1:
                v |= 1 << p
        out.append(BitVector(m.ncols, v))
    return out


def solve(m: BitMatrix, target: BitVector) -> BitVector | None:
    """Some ``x`` with ``x . m = target``, or ``None``."""
    if target.length != m.ncols:
        raise ValueError("target length must equal the column count of m")
    elim = Eliminator()
    for i, r in enumerate(m.rows):
        elim.add(r.bits, 1 << i)
    found = elim.express(target.bits)
    if found is None:
        return None
    return BitVector(m.nrows, found)


def complement_basis(sub: EchelonSpace, ambient: EchelonSpace) -> list[BitVector]:
    """Vectors of ``ambient`` completing a basis of ``sub`` to one of ``ambient``."""
    if sub.ncols != ambient.ncols:
        raise ValueError("column count mismatch")
    for r in sub.basis.rows:
        if not ambient.contains(r):
            raise ValueError("sub is not contained in ambient")
    out = []
    cur = dict(zip(sub.pivots, (r.bits for r in sub.basis.rows)))
    for r in ambient.basis.rows:
        v = r.bits
        for p in sorted(cur):
            if (v >> p) & 1:
                v ^= cur[p]
        if v:
            p = (v & -v).bit_length() - 1
            for q in list(cur):
                if (cur[q] >> p) & 1:
                    cur[q] ^= v
            cur[p] = v
            out.append(BitVector(ambient.ncols, r.bits))
    return out


class Eliminator:
    """Incremental semi-echelon form with combination tracking.

    Rows are added one at a time.  Each stored pivot row has its highest set
    bit as pivot and carries ``combo``, the combination of added rows that
    produced it, and ``level``, a caller-supplied filtration value (weight).
    Rows must be added in non-decreasing level so that the pivots with level
    at most ``w`` span exactly the rows of level at most ``w``.
    """

    __slots__ = ("rows", "combos", "levels")

    def __init__(self):
        self.rows: dict[int, int] = {}
        self.combos: dict[int, int] = {}
        self.levels: dict[int, int] = {}

    def __len__(self):
        return len(self.rows)

    def add(self, row: int, combo: int, level: int = 0) -> int | None:
        """Insert a row; return ``None`` if independent, else the kernel combination."""
        rows, combos = self.rows, self.combos
        while row:
            p = row.bit_length() - 1
            pr = rows.get(p)
            if pr is None:
                rows[p] = row
                combos[p] = combo
                self.levels[p] = level
                return None
            row ^= pr
            combo ^= combos[p]
        return combo

    def reduce(self, v: int, max_level: int | None = None) -> int:
        rows, levels = self.rows, self.levels
        while v:
            p = v.bit_length() - 1
            pr = rows.get(p)
            if pr is None or (max_level is not None and levels[p] > max_level):
                return v
            v ^= pr
        return 0

    def express(self, v: int, max_level: int | None = None) -> int | None:
        """Combination of added rows equal to ``v`` (using levels <= max_level)."""
        rows, combos, levels = self.rows, self.combos, self.levels
        combo = 0
        while v:
            p = v.bit_length() - 1
            pr = rows.get(p)
            if pr is None or (max_level is not None and levels[p] > max_level):
                return None
            v ^= pr
            combo ^= combos[p]
        return combo
