"""Octahedron, hexahedron and hyperdeterminantal recurrences.

Octahedron grid dictionary
--------------------------
A grid value tau_{l,m,n} is tau(t0 + l[a] + m[b] + n[c]). It is read as an
H-evaluation at the base point with components n_{-2} = 1, n_{-1} = l+1,
n_0 = m, n_1 = n and parameters x_{-2} = 0, x_{-1} = a, x_0 = b, x_1 = c.
The six Frobenius offsets then land on

    ()    -> tau_{l+1,m,n}      (1,1) -> tau_{l+1,m+1,n}
    (1)   -> tau_{l,m+1,n}      (2,1) -> tau_{l+1,m,n+1}
    (2)   -> tau_{l,m,n+1}      (2,2) -> tau_{l,m+1,n+1}

and, after dividing out the common prefactor, the H-form relation becomes

    a(b-c) tau_{l+1,m,n} tau_{l,m+1,n+1}
  + b(c-a) tau_{l,m+1,n} tau_{l+1,m,n+1}
  + c(a-b) tau_{l,m,n+1} tau_{l+1,m+1,n} = 0.

Propagation solves for tau_{l+1,m+1,n}; the grid height is l + m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from .core import (
    EMPTY,
    DegenerateEvaluation,
    KptauError,
    LatticePoint,
    ParameterCollision,
    Partition,
    RationalLike,
    frobenius_offset,
    rational,
)
from .lattice import H_prefactor

OCTAHEDRON_PARTITIONS = (
    EMPTY,
    Partition([1]),
    Partition([2]),
    Partition([1, 1]),
    Partition([2, 1]),
    Partition([2, 2]),
)


class MissingValue(KptauError, KeyError):
    """A value needed by a residual or propagation step is absent."""


class NondegeneracyFailure(DegenerateEvaluation):
    """The factor pi_(i|j) pi_(j|k) pi_(k|i) - pi_(i|i) pi_(j|j) pi_(k|k) vanishes."""


def octahedron_residual_H(Hvals: Mapping[Partition, Fraction]) -> Fraction:
    """H^{()} H^{(2,2)} - H^{(1)} H^{(2,1)} + H^{(2)} H^{(1,1)}."""
    try:
        e, p1, p2, p11, p21, p22 = (Hvals[lam] for lam in OCTAHEDRON_PARTITIONS)
    except KeyError as exc:
        raise MissingValue(f"octahedron needs H at {exc.args[0]}") from None
    return e * p22 - p1 * p21 + p2 * p11


def octahedron_coefficients(a: Fraction, b: Fraction, c: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    """Coefficients a(b-c), b(c-a), c(a-b) of the three tau products."""
    return a * (b - c), b * (c - a), c * (a - b)


@dataclass
class OctahedronGrid:
    """tau_{l,m,n} values on Z^3 with Miwa parameters a, b, c."""

    a: Fraction
    b: Fraction
    c: Fraction
    values: dict[tuple[int, int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.a, self.b, self.c = rational(self.a), rational(self.b), rational(self.c)
        if len({Fraction(0), self.a, self.b, self.c}) != 4:
            raise ParameterCollision("a, b, c must be distinct and nonzero")

    @property
    def x(self) -> dict[int, Fraction]:
        return {-2: Fraction(0), -1: self.a, 0: self.b, 1: self.c}

    @staticmethod
    def base_point(l: int, m: int, n: int) -> LatticePoint:
        return LatticePoint({-2: 1, -1: l + 1, 0: m, 1: n})

    @staticmethod
    def grid_index(point: LatticePoint) -> tuple[int, int, int]:
        """Inverse dictionary: the tau_{l,m,n} an H-value is built on."""
        return point[-1], point[0], point[1]

    def H_values(self, l: int, m: int, n: int) -> dict[Partition, Fraction | None]:
        """The six H-values at base (l,m,n); None where the grid is empty."""
        base = self.base_point(l, m, n)
        out: dict[Partition, Fraction | None] = {}
        for lam in OCTAHEDRON_PARTITIONS:
            point = base + frobenius_offset(lam)
            value = self.values.get(self.grid_index(point))
            out[lam] = None if value is None else H_prefactor(point, self.x) * value
        return out

    def residual(self, l: int, m: int, n: int) -> Fraction:
        vals = self.H_values(l, m, n)
        missing = [lam for lam, v in vals.items() if v is None]
        if missing:
            raise MissingValue(f"grid values missing around base {(l, m, n)}")
        return octahedron_residual_H(vals)  # type: ignore[arg-type]


def octahedron_propagate(grid: OctahedronGrid, target: tuple[int, int, int]) -> Fraction:
    """Solve the H-form relation for tau at ``target`` and store it."""
    L, M, N = target
    l, m, n = L - 1, M - 1, N
    vals = grid.H_values(l, m, n)
    unknown = Partition([1, 1])
    for lam, v in vals.items():
        if lam != unknown and v is None:
            raise MissingValue(f"octahedron step at {target} lacks the value for {lam}")
    divisor = vals[Partition([2])]
    if divisor == 0:
        raise DegenerateEvaluation("zero octahedron divisor", (l, m, n + 1))
    solved = (vals[Partition([1])] * vals[Partition([2, 1])] - vals[EMPTY] * vals[Partition([2, 2])]) / divisor
    point = grid.base_point(l, m, n) + frobenius_offset(unknown)
    value = solved / H_prefactor(point, grid.x)
    grid.values[target] = value
    return value


def octahedron_level_targets(
    grid: OctahedronGrid, level: int
) -> list[tuple[int, int, int]]:
    """Sites of height l + m = level whose five companions are all present."""
    out = []
    candidates = set()
    for (l, m, n) in grid.values:
        if l + m == level - 1:
            candidates.add((l + 1, m, n))
            candidates.add((l, m + 1, n))
    for (L, M, N) in sorted(candidates):
        needed = [(L, M - 1, N), (L - 1, M, N), (L - 1, M - 1, N + 1), (L, M - 1, N + 1), (L - 1, M, N + 1)]
        if all(p in grid.values for p in needed) and (L, M, N) not in grid.values:
            out.append((L, M, N))
    return out


def _p(coords: Mapping[Partition, Fraction], a: Sequence[int], b: Sequence[int]) -> Fraction:
    lam = Partition.from_frobenius(a, b)
    try:
        return coords[lam]
    except KeyError:
        raise MissingValue(f"coordinate for {lam} = ({a}|{b}) is missing") from None


def kappa_residuals(
    coords: Mapping[Partition, Fraction], ijk: tuple[int, int, int]
) -> tuple[Fraction, ...]:
    """(kappa_1, kappa_2, kappa_3, kappa_1^T, kappa_2^T, kappa_3^T, kappa_0)."""
    i, j, k = ijk
    if not 0 <= i < j < k:
        raise ValueError(f"need 0 <= i < j < k, got {ijk}")

    def p(a: Sequence[int], b: Sequence[int]) -> Fraction:
        return _p(coords, a, b)

    e = coords.get(EMPTY)
    if e is None:
        raise MissingValue("coordinate for the empty partition is missing")
    ii, jj, kk = p([i], [i]), p([j], [j]), p([k], [k])
    ij, jk, ki = p([i], [j]), p([j], [k]), p([k], [i])
    ji, kj, ik = p([j], [i]), p([k], [j]), p([i], [k])
    diag = ii * jj * kk
    cyc = ij * jk * ki
    cyc_t = ji * kj * ik
    kj_kj, ki_ki, ji_ji = p([k, j], [k, j]), p([k, i], [k, i]), p([j, i], [j, i])

    kappa1 = e * (ii * kj_kj + jk * p([k, i], [j, i])) - diag + cyc
    kappa2 = e * (jj * ki_ki - ki * p([j, i], [k, j])) - diag + cyc
    kappa3 = e * (kk * ji_ji + ij * p([k, j], [k, i])) - diag + cyc
    kappa1t = e * (ii * kj_kj + kj * p([j, i], [k, i])) - diag + cyc_t
    kappa2t = e * (jj * ki_ki - ik * p([k, j], [j, i])) - diag + cyc_t
    kappa3t = e * (kk * ji_ji + ji * p([k, i], [k, j])) - diag + cyc_t
    kappa0 = (
        e * e * p([k, j, i], [k, j, i]) * cyc
        - cyc * cyc
        + cyc * (2 * diag - e * (ii * kj_kj + jj * ki_ki + kk * ji_ji))
        - (ii * jj - e * ji_ji) * (ii * kk - e * ki_ki) * (jj * kk - e * kj_kj)
    )
    return (kappa1, kappa2, kappa3, kappa1t, kappa2t, kappa3t, kappa0)


def kappa0_nondegeneracy(coords: Mapping[Partition, Fraction], ijk: tuple[int, int, int]) -> Fraction:
    """pi_(i|j) pi_(j|k) pi_(k|i) - pi_(i|i) pi_(j|j) pi_(k|k)."""
    i, j, k = ijk
    return _p(coords, [i], [j]) * _p(coords, [j], [k]) * _p(coords, [k], [i]) - _p(
        coords, [i], [i]
    ) * _p(coords, [j], [j]) * _p(coords, [k], [k])


def kappa0_from_cubics(coords: Mapping[Partition, Fraction], ijk: tuple[int, int, int]) -> Fraction:
    """kappa_0, guarded by its nondegeneracy factor.

    Raises NondegeneracyFailure when the factor vanishes, since then the
    cubics do not determine the mixed coordinates.
    """
    if kappa0_nondegeneracy(coords, ijk) == 0:
        raise NondegeneracyFailure("kappa_0 nondegeneracy factor vanishes", ijk)
    return kappa_residuals(coords, ijk)[6]


class HexahedronData(NamedTuple):
    """The fourteen values entering the hexahedron system at one base point."""

    h: Fraction
    h1: Fraction
    h2: Fraction
    h3: Fraction
    h12: Fraction
    h13: Fraction
    h23: Fraction
    h123: Fraction
    hx: Fraction
    hy: Fraction
    hz: Fraction
    hx1: Fraction
    hy2: Fraction
    hz3: Fraction


def _hexahedron_rhs(d: HexahedronData) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    common = d.h1 * d.h2 * d.h3 + d.hx * d.hy * d.hz
    r1 = d.h * d.h1 * d.h23 + common
    r2 = d.h * d.h2 * d.h13 + common
    r3 = d.h * d.h3 * d.h12 + common
    cube = d.hx * d.hy * d.hz
    r4 = (
        cube * cube
        + cube * (2 * d.h1 * d.h2 * d.h3 + d.h * (d.h1 * d.h23 + d.h2 * d.h13 + d.h3 * d.h12))
        + (d.h1 * d.h2 + d.h * d.h12) * (d.h1 * d.h3 + d.h * d.h13) * (d.h2 * d.h3 + d.h * d.h23)
    )
    return r1, r2, r3, r4


def hexahedron_residuals(d: HexahedronData) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Left minus right side of each of the four hexahedron equations."""
    r1, r2, r3, r4 = _hexahedron_rhs(d)
    return (
        d.h * d.hx * d.hx1 - r1,
        d.h * d.hy * d.hy2 - r2,
        d.h * d.hz * d.hz3 - r3,
        d.h * d.h * d.hx * d.hy * d.hz * d.h123 - r4,
    )


B3 = tuple[int, int, int]
_KINDS = ("plain", "x", "y", "z")


def _b3_add(p: B3, q: B3) -> B3:
    return (p[0] + q[0], p[1] + q[1], p[2] + q[2])


E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


@dataclass
class HexahedronState:
    """Values of the four signed families on B_3, keyed by beta-coordinates."""

    plain: dict[B3, Fraction] = field(default_factory=dict)
    x: dict[B3, Fraction] = field(default_factory=dict)
    y: dict[B3, Fraction] = field(default_factory=dict)
    z: dict[B3, Fraction] = field(default_factory=dict)

    def family(self, kind: str) -> dict[B3, Fraction]:
        if kind not in _KINDS:
            raise ValueError(f"unknown family {kind!r}")
        return getattr(self, kind)

    def data_at(self, base: B3, fill_outputs: bool = True) -> HexahedronData:
        """Gather the fourteen values around ``base``; outputs may be absent."""

        def get(kind: str, p: B3, optional: bool = False) -> Fraction:
            value = self.family(kind).get(p)
            if value is None:
                if optional:
                    return Fraction(0)
                raise MissingValue(f"hexahedron needs {kind} at {p}")
            return value

        o = not fill_outputs
        e12, e13, e23 = _b3_add(E1, E2), _b3_add(E1, E3), _b3_add(E2, E3)
        return HexahedronData(
            h=get("plain", base),
            h1=get("plain", _b3_add(base, E1)),
            h2=get("plain", _b3_add(base, E2)),
            h3=get("plain", _b3_add(base, E3)),
            h12=get("plain", _b3_add(base, e12)),
            h13=get("plain", _b3_add(base, e13)),
            h23=get("plain", _b3_add(base, e23)),
            h123=get("plain", _b3_add(base, (1, 1, 1)), o),
            hx=get("x", base),
            hy=get("y", base),
            hz=get("z", base),
            hx1=get("x", _b3_add(base, E1), o),
            hy2=get("y", _b3_add(base, E2), o),
            hz3=get("z", _b3_add(base, E3), o),
        )


def hexahedron_propagate(state: HexahedronState, base: B3) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Solve for hx at base+b1, hy at base+b2, hz at base+b3 and plain at base+b1+b2+b3."""
    d = state.data_at(base, fill_outputs=False)
    r1, r2, r3, r4 = _hexahedron_rhs(d)
    outputs = []
    for rhs, hook, kind in ((r1, d.hx, "x"), (r2, d.hy, "y"), (r3, d.hz, "z")):
        divisor = d.h * hook
        if divisor == 0:
            raise DegenerateEvaluation(f"zero hexahedron divisor for family {kind}", base)
        outputs.append(rhs / divisor)
    divisor = d.h * d.h * d.hx * d.hy * d.hz
    if divisor == 0:
        raise DegenerateEvaluation("zero hexahedron divisor for the top value", base)
    outputs.append(r4 / divisor)
    state.x[_b3_add(base, E1)] = outputs[0]
    state.y[_b3_add(base, E2)] = outputs[1]
    state.z[_b3_add(base, E3)] = outputs[2]
    state.plain[_b3_add(base, (1, 1, 1))] = outputs[3]
    return outputs[0], outputs[1], outputs[2], outputs[3]


def hexahedron_ready(state: HexahedronState, base: B3) -> bool:
    try:
        state.data_at(base, fill_outputs=False)
    except MissingValue:
        return False
    return True


def kashaev_residual(
    h: Fraction,
    hi: Fraction,
    hj: Fraction,
    hk: Fraction,
    hij: Fraction,
    hik: Fraction,
    hjk: Fraction,
    hijk: Fraction,
) -> Fraction:
    """The 2x2x2 hyperdeterminant quartic."""
    return (
        h * h * hijk * hijk
        + hi * hi * hjk * hjk
        + hj * hj * hik * hik
        + hk * hk * hij * hij
        - 2 * h * hijk * (hi * hjk + hj * hik + hk * hij)
        - 2 * (hi * hj * hik * hjk + hj * hk * hij * hik + hi * hk * hij * hjk)
        + 4 * h * hij * hik * hjk
        + 4 * hi * hj * hk * hijk
    )


@dataclass(frozen=True)
class KashaevRoots:
    """Roots of the quartic read as a quadratic in the top value."""

    coefficients: tuple[Fraction, Fraction, Fraction]
    discriminant: Fraction
    roots: tuple[Fraction, Fraction] | None

    @property
    def rational(self) -> bool:
        return self.roots is not None

    def describe(self) -> str:
        if self.roots is None:
            return f"irrational roots (discriminant {self.discriminant})"
        return f"roots {self.roots[0]}, {self.roots[1]}"


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def kashaev_solve(
    h: RationalLike,
    hi: RationalLike,
    hj: RationalLike,
    hk: RationalLike,
    hij: RationalLike,
    hik: RationalLike,
    hjk: RationalLike,
) -> KashaevRoots:
    """Both roots for the top value, or the irrational-roots report."""
    h, hi, hj, hk, hij, hik, hjk = (rational(v) for v in (h, hi, hj, hk, hij, hik, hjk))
    A = h * h
    if A == 0:
        raise DegenerateEvaluation("leading coefficient h^2 vanishes")
    B = -2 * h * (hi * hjk + hj * hik + hk * hij) + 4 * hi * hj * hk
    C = kashaev_residual(h, hi, hj, hk, hij, hik, hjk, Fraction(0))
    D = B * B - 4 * A * C
    root = _rational_sqrt(D)
    if root is None:
        return KashaevRoots((A, B, C), D, None)
    r1, r2 = (-B - root) / (2 * A), (-B + root) / (2 * A)
    return KashaevRoots((A, B, C), D, (r1, r2))


def varkappa_residual(coords: Mapping[Partition, Fraction], ijk: tuple[int, int, int]) -> Fraction:
    """The quartic in symmetric-partition coordinates."""
    i, j, k = ijk
    if not 0 <= i < j < k:
        raise ValueError(f"need 0 <= i < j < k, got {ijk}")
    e = coords.get(EMPTY)
    if e is None:
        raise MissingValue("coordinate for the empty partition is missing")
    return kashaev_residual(
        e,
        _p(coords, [i], [i]),
        _p(coords, [j], [j]),
        _p(coords, [k], [k]),
        _p(coords, [j, i], [j, i]),
        _p(coords, [k, i], [k, i]),
        _p(coords, [k, j], [k, j]),
        _p(coords, [k, j, i], [k, j, i]),
    )
