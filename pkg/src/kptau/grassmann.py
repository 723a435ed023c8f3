"""Finite Grassmannian elements, Plücker coordinates and big-cell maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .core import (
    KptauError,
    MultiIndex,
    OutOfRange,
    Partition,
    RationalLike,
    det,
    multiindex_from_partition,
    partition_from_multiindex,
    partitions_in_box,
    rational,
    sign_of_multiindex,
)


class NotInBigCell(KptauError, ValueError):
    """The vacuum coordinate pi_empty vanishes."""


def _rank(rows: list[list[Fraction]]) -> int:
    m = [row[:] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class GrassmannianElement:
    """An n x k homogeneous coordinate matrix; row r <-> basis index r - k."""

    k: int
    n: int
    W: tuple[tuple[Fraction, ...], ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __init__(self, k: int, n: int, W: Sequence[Sequence[RationalLike]]) -> None:
        if k < 1 or n <= k:
            raise ValueError(f"need 0 < k < n, got k={k}, n={n}")
        rows = tuple(tuple(rational(x) for x in row) for row in W)
        if len(rows) != n or any(len(row) != k for row in rows):
            raise ValueError(f"W must be {n}x{k}")
        if _rank([list(r) for r in rows]) != k:
            raise ValueError("W does not have full column rank")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "W", rows)
        object.__setattr__(self, "_cache", {})

    def row(self, index: int) -> tuple[Fraction, ...]:
        """Row for basis index ``index`` in [-k, n-k-1]."""
        if not -self.k <= index <= self.n - self.k - 1:
            raise OutOfRange(f"row index {index} outside [{-self.k}, {self.n - self.k - 1}]")
        return self.W[index + self.k]

    def partitions(self) -> list[Partition]:
        return partitions_in_box(self.k, self.n - self.k)

    def plucker_table(self) -> dict[Partition, Fraction]:
        """All pi_lambda for lambda in the rectangle, computed once."""
        table = self._cache.get("plucker")
        if table is None:
            table = {lam: plucker_by_partition(self, lam) for lam in self.partitions()}
            self._cache["plucker"] = table
        return table


@dataclass(frozen=True)
class LagrangianElement:
    """Symmetric k x k affine coordinate matrix on the Lagrangian big cell."""

    k: int
    M: tuple[tuple[Fraction, ...], ...]

    def __init__(self, M: Sequence[Sequence[RationalLike]], check_symmetric: bool = True) -> None:
        rows = tuple(tuple(rational(x) for x in row) for row in M)
        k = len(rows)
        if k < 1 or any(len(r) != k for r in rows):
            raise ValueError("M must be a non-empty square matrix")
        if check_symmetric and any(rows[i][j] != rows[j][i] for i in range(k) for j in range(k)):
            raise ValueError("M is not symmetric")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "M", rows)

    @property
    def is_symmetric(self) -> bool:
        k = self.k
        return all(self.M[i][j] == self.M[j][i] for i in range(k) for j in range(k))


def from_affine(M: Sequence[Sequence[RationalLike]]) -> GrassmannianElement:
    """Big-cell element of Gr(k, n) whose hook coordinates are pi_(i-1|j-1) = M_ij.

    M is (n-k) x k. The top block is the identity; the row for basis index
    i-1 carries (-1)^(j-1) M_ij in column k-j (0-based), which makes the
    hook minors equal M without further signs.
    """
    rows = [[rational(x) for x in row] for row in M]
    if not rows:
        raise ValueError("affine matrix needs at least one row")
    k = len(rows[0])
    n = k + len(rows)
    W: list[list[Fraction]] = [
        [Fraction(int(c == r)) for c in range(k)] for r in range(k)
    ]
    for row in rows:
        if len(row) != k:
            raise ValueError("ragged affine matrix")
        lower = [Fraction(0)] * k
        for j in range(1, k + 1):
            lower[k - j] = row[j - 1] if j % 2 == 1 else -row[j - 1]
        W.append(lower)
    return GrassmannianElement(k, n, W)


def lagrangian_to_grassmannian(w0: LagrangianElement) -> GrassmannianElement:
    return from_affine(w0.M)


def plucker_by_multiindex(w: GrassmannianElement, L: Sequence[int]) -> Fraction:
    if len(L) != w.k:
        raise OutOfRange(f"multi-index {tuple(L)} must have {w.k} entries")
    rows = [w.row(i) for i in L]
    if len(set(L)) != len(L):
        return Fraction(0)
    return det(rows)


def plucker_by_partition(w: GrassmannianElement, lam: Partition) -> Fraction:
    table = w._cache.get("plucker")
    if table is not None and lam in table:
        return table[lam]
    return plucker_by_multiindex(w, multiindex_from_partition(lam, w.k, w.n))


Coords = Union[GrassmannianElement, Mapping[Partition, Fraction]]


def signed_coordinate(coords: Coords, L: Sequence[int], k: int, n: int) -> Fraction:
    """pi-tilde_L read from a partition-keyed coordinate map."""
    s = sign_of_multiindex(L)
    if s == 0:
        return Fraction(0)
    lam = partition_from_multiindex(L, k, n)
    assert lam is not None
    value = coords.plucker_table()[lam] if isinstance(coords, GrassmannianElement) else coords[lam]
    return s * value


def plucker_relation_residual(
    coords: Coords,
    I: Sequence[int],
    J: Sequence[int],
    k: int | None = None,
    n: int | None = None,
) -> Fraction:
    """Sum over j of (-1)^j pi~_{I, J_j} pi~_{J without J_j}, j 1-based."""
    if isinstance(coords, GrassmannianElement):
        k, n = coords.k, coords.n
    if k is None or n is None:
        raise ValueError("k and n are required for a raw coordinate map")
    if len(I) != k - 1 or len(J) != k + 1:
        raise ValueError(f"need |I| = {k - 1} and |J| = {k + 1}")
    total = Fraction(0)
    for j in range(len(J)):
        left = tuple(I) + (J[j],)
        right = tuple(J[:j]) + tuple(J[j + 1:])
        term = signed_coordinate(coords, left, k, n)
        if term:
            term *= signed_coordinate(coords, right, k, n)
        total += term if j % 2 == 1 else -term
    return total


def giambelli_xi(
    hooks: Mapping[Partition, Fraction], pi_empty: Fraction, lam: Partition
) -> Fraction:
    """pi_empty * det(pi_(a_i|b_j) / pi_empty)."""
    if pi_empty == 0:
        raise NotInBigCell("pi_empty = 0: the element is not in the big cell")
    a, b = lam.frobenius
    matrix = [[hooks[Partition.hook(ai, bj)] / pi_empty for bj in b] for ai in a]
    return pi_empty * det(matrix)


def hook_table(coords: Coords, k: int, n: int) -> dict[Partition, Fraction]:
    table = coords.plucker_table() if isinstance(coords, GrassmannianElement) else coords
    return {
        Partition.hook(a, b): table[Partition.hook(a, b)]
        for a in range(n - k)
        for b in range(k)
    }


def lagrangian_plucker(w0: LagrangianElement, lam: Partition) -> Fraction:
    """det(M_{min(a_i,b_j)+1, max(a_i,b_j)+1}) in 1-based matrix entries."""
    if not lam.fits(w0.k, w0.k):
        raise OutOfRange(f"{lam} does not fit in the {w0.k}x{w0.k} square")
    a, b = lam.frobenius
    M = w0.M
    return det([[M[min(x, y)][max(x, y)] for y in b] for x in a])


def short_relations(k: int, n: int) -> list[tuple[MultiIndex, MultiIndex]]:
    """Three-term relations: I and J share k-2 entries."""
    from itertools import combinations

    indices = range(-k, n - k)
    out = []
    for common in combinations(indices, k - 2):
        rest = [i for i in indices if i not in common]
        for extra in combinations(rest, 4):
            # I = common + one of the four; J = common + the other three
            for pick in extra:
                others = tuple(x for x in extra if x != pick)
                I = tuple(common) + (pick,)
                J = tuple(common) + others
                out.append((I, J))
                break
    return out
