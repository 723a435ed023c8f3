"""Exact scalars, partitions, multi-indices and lattice points."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]


class KptauError(Exception):
    """Base class for all library errors."""


class DegenerateEvaluation(KptauError, ZeroDivisionError):
    """A required divisor evaluated to exactly zero."""

    def __init__(self, message: str, site: object = None) -> None:
        super().__init__(message if site is None else f"{message} at {site}")
        self.site = site


class ParameterCollision(KptauError, ValueError):
    """Two evaluation parameters coincide where they must be distinct."""


class OutOfRange(KptauError, ValueError):
    """An index or partition does not fit the (k, n) window."""


def rational(value: RationalLike) -> Fraction:
    """Parse an int, Fraction or "p/q" string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    """Short form: "p/q", or "p" when q = 1."""
    return str(q)


def format_rational_full(q: Fraction) -> str:
    """Always "p/q", so that zero prints as "0/1"."""
    return f"{q.numerator}/{q.denominator}"


Matrix = Sequence[Sequence[Fraction]]


def _bareiss_int(rows: list[list[int]]) -> int:
    n = len(rows)
    sign = 1
    prev = 1
    for c in range(n - 1):
        if rows[c][c] == 0:
            for r in range(c + 1, n):
                if rows[r][c] != 0:
                    rows[c], rows[r] = rows[r], rows[c]
                    sign = -sign
                    break
            else:
                return 0
        piv = rows[c][c]
        for r in range(c + 1, n):
            row_r = rows[r]
            row_c = rows[c]
            lead = row_r[c]
            for j in range(c + 1, n):
                row_r[j] = (row_r[j] * piv - lead * row_c[j]) // prev
            row_r[c] = 0
        prev = piv
    return sign * rows[n - 1][n - 1]


def det(matrix: Matrix) -> Fraction:
    """Determinant by fraction-free Bareiss elimination.

    Each row is scaled to integers by the lcm of its denominators, the
    integer determinant is computed without any division remainder, and
    the scales are divided back out.
    """
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    rows: list[list[int]] = []
    scale = 1
    for row in matrix:
        if len(row) != n:
            raise ValueError("determinant of a non-square matrix")
        entries = [rational(v) for v in row]
        lcm = 1
        for v in entries:
            d = v.denominator
            if d != 1:
                lcm = lcm * d // _gcd(lcm, d)
        rows.append([v.numerator * (lcm // v.denominator) for v in entries])
        scale *= lcm
    if n == 1:
        return Fraction(rows[0][0], scale)
    return Fraction(_bareiss_int(rows), scale)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive parts."""

    parts: tuple[int, ...] = ()

    def __init__(self, parts: Iterable[int] = ()) -> None:
        cleaned = tuple(int(p) for p in parts if int(p) != 0)
        if any(p < 0 for p in cleaned):
            raise ValueError(f"negative part in {cleaned}")
        if any(cleaned[i] < cleaned[i + 1] for i in range(len(cleaned) - 1)):
            raise ValueError(f"parts not weakly decreasing: {cleaned}")
        object.__setattr__(self, "parts", cleaned)

    def __repr__(self) -> str:
        return f"Partition({self.parts})"

    def __str__(self) -> str:
        if not self.parts:
            return "()"
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def part(self, i: int) -> int:
        """1-based part lookup, zero beyond the length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def conjugate(self) -> Partition:
        if not self.parts:
            return self
        return Partition(
            sum(1 for p in self.parts if p > j) for j in range(self.parts[0])
        )

    @cached_property
    def frobenius(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Arm and leg lists (a | b)."""
        conj = self.conjugate()
        r = self.rank
        a = tuple(self.part(i) - i for i in range(1, r + 1))
        b = tuple(conj.part(i) - i for i in range(1, r + 1))
        return a, b

    @property
    def rank(self) -> int:
        r = 0
        while r < len(self.parts) and self.parts[r] >= r + 1:
            r += 1
        return r

    @classmethod
    def from_frobenius(cls, a: Sequence[int], b: Sequence[int]) -> Partition:
        a = tuple(a)
        b = tuple(b)
        if len(a) != len(b):
            raise ValueError("arm and leg lists differ in length")
        for seq in (a, b):
            if any(x < 0 for x in seq) or any(
                seq[i] <= seq[i + 1] for i in range(len(seq) - 1)
            ):
                raise ValueError(f"Frobenius data must be strictly decreasing: {seq}")
        r = len(a)
        if r == 0:
            return cls()
        # rows 1..r have a_i + i boxes; rows below the diagonal come from legs
        rows = [a[i] + i + 1 for i in range(r)]
        length = b[0] + 1
        for row in range(r + 1, length + 1):
            rows.append(sum(1 for j in range(r) if b[j] + j + 1 >= row))
        return cls(rows)

    @classmethod
    def hook(cls, a: int, b: int) -> Partition:
        return cls.from_frobenius((a,), (b,))

    def fits(self, rows: int, cols: int) -> bool:
        return len(self.parts) <= rows and (not self.parts or self.parts[0] <= cols)


EMPTY = Partition()


def partitions_in_box(rows: int, cols: int) -> list[Partition]:
    """All partitions with at most ``rows`` parts, each at most ``cols``."""
    out: list[Partition] = []

    def rec(prefix: list[int], bound: int) -> None:
        out.append(Partition(prefix))
        if len(prefix) == rows:
            return
        for p in range(1, bound + 1):
            prefix.append(p)
            rec(prefix, p)
            prefix.pop()

    rec([], cols)
    return sorted(out, key=lambda lam: (lam.weight, lam.parts))


MultiIndex = tuple[int, ...]


def sign_of_multiindex(L: Sequence[int]) -> int:
    """Sign of the sorting permutation; 0 on a repeated entry."""
    if len(set(L)) != len(L):
        return 0
    inversions = sum(
        1 for i in range(len(L)) for j in range(i + 1, len(L)) if L[i] > L[j]
    )
    return -1 if inversions % 2 else 1


def _check_range(L: Sequence[int], k: int, n: int) -> None:
    if len(L) != k:
        raise OutOfRange(f"multi-index {tuple(L)} must have {k} entries")
    for x in L:
        if not -k <= x <= n - k - 1:
            raise OutOfRange(f"entry {x} outside [{-k}, {n - k - 1}]")


def partition_from_multiindex(L: Sequence[int], k: int, n: int) -> Partition | None:
    """Partition with lambda_i = L_{k-i+1} + i; None marks a repeated entry."""
    _check_range(L, k, n)
    if len(set(L)) != len(L):
        return None
    s = sorted(L)
    return Partition(s[k - i] + i for i in range(1, k + 1))


def multiindex_from_partition(lam: Partition, k: int, n: int) -> MultiIndex:
    if not lam.fits(k, n - k):
        raise OutOfRange(f"{lam} does not fit in the {k}x{n - k} rectangle")
    return tuple(lam.part(k - j + 1) - (k - j + 1) for j in range(1, k + 1))


@dataclass(frozen=True)
class LatticePoint:
    """Finitely supported integer vector indexed by Z."""

    items: tuple[tuple[int, int], ...] = ()

    def __init__(self, entries: Mapping[int, int] | Iterable[tuple[int, int]] = ()) -> None:
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict[int, int] = {}
        for i, v in pairs:
            acc[int(i)] = acc.get(int(i), 0) + int(v)
        object.__setattr__(
            self, "items", tuple(sorted((i, v) for i, v in acc.items() if v != 0))
        )

    def __repr__(self) -> str:
        return f"LatticePoint({dict(self.items)})"

    @classmethod
    def alpha(cls, i: int) -> LatticePoint:
        return cls({i: 1})

    @classmethod
    def beta(cls, i: int) -> LatticePoint:
        """Generator alpha_{i-1} - alpha_{-i} of the sublattice B, i >= 1."""
        if i < 1:
            raise ValueError("beta generators start at 1")
        return cls({i - 1: 1, -i: -1})

    @classmethod
    def from_b3(cls, n1: int, n2: int, n3: int) -> LatticePoint:
        return n1 * cls.beta(1) + n2 * cls.beta(2) + n3 * cls.beta(3)

    def __getitem__(self, i: int) -> int:
        for j, v in self.items:
            if j == i:
                return v
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.items)

    def __add__(self, other: LatticePoint) -> LatticePoint:
        return LatticePoint(self.items + other.items)

    def __neg__(self) -> LatticePoint:
        return LatticePoint((i, -v) for i, v in self.items)

    def __sub__(self, other: LatticePoint) -> LatticePoint:
        return self + (-other)

    def __rmul__(self, c: int) -> LatticePoint:
        return LatticePoint((i, c * v) for i, v in self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    @property
    def height(self) -> int:
        return sum(v for _, v in self.items)

    def in_b(self) -> bool:
        d = self.as_dict()
        for i, v in d.items():
            partner = -i - 1
            if d.get(partner, 0) != -v:
                return False
        return True

    def b_coordinates(self) -> dict[int, int]:
        """Coefficients along beta_i for a point of B."""
        if not self.in_b():
            raise ValueError(f"{self} is not in the sublattice B")
        return {i + 1: v for i, v in self.items if i >= 0}


def lattice_add(m: LatticePoint, n: LatticePoint) -> LatticePoint:
    return m + n


def lattice_height(n: LatticePoint) -> int:
    return n.height


def in_sublattice_B(n: LatticePoint) -> bool:
    return n.in_b()


def frobenius_offset(lam: Partition) -> LatticePoint:
    """Sum of alpha_{a_i} minus sum of alpha_{-b_i-1}."""
    a, b = lam.frobenius
    return LatticePoint([(x, 1) for x in a] + [(-y - 1, -1) for y in b])
