"""Normalized lattice evaluations of tau on A, B and B_3."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .core import (
    EMPTY,
    DegenerateEvaluation,
    LatticePoint,
    ParameterCollision,
    Partition,
    RationalLike,
    frobenius_offset,
    rational,
)
from .grassmann import GrassmannianElement, LagrangianElement, lagrangian_to_grassmannian
from .tau import miwa_shift, tau_eval

XParams = Mapping[int, Fraction]
YParams = Mapping[int, Fraction]


def x_params(values: Mapping[int, RationalLike]) -> dict[int, Fraction]:
    """Validated x_i assignment: pairwise distinct."""
    out = {int(i): rational(v) for i, v in values.items()}
    if len(set(out.values())) != len(out):
        raise ParameterCollision(f"x-parameters must be pairwise distinct: {out}")
    return out


def y_params(values: Mapping[int, RationalLike] | Sequence[RationalLike]) -> dict[int, Fraction]:
    """Validated y_i assignment (1-based): distinct and strictly positive."""
    if isinstance(values, Mapping):
        out = {int(i): rational(v) for i, v in values.items()}
    else:
        out = {i: rational(v) for i, v in enumerate(values, start=1)}
    if any(i < 1 for i in out):
        raise ValueError("y-parameters are indexed from 1")
    if any(v <= 0 for v in out.values()):
        raise ParameterCollision(f"y-parameters must be strictly positive: {out}")
    if len(set(out.values())) != len(out):
        raise ParameterCollision(f"y-parameters must be pairwise distinct: {out}")
    return out


def _lookup(params: Mapping[int, Fraction], i: int, what: str) -> Fraction:
    try:
        return params[i]
    except KeyError:
        raise ParameterCollision(f"no {what}-parameter for index {i}") from None


def _power(base: Fraction, e: int, site: object) -> Fraction:
    if e == 0:
        return Fraction(1)
    if base == 0:
        if e < 0:
            raise DegenerateEvaluation("zero prefactor base with negative exponent", site)
        return Fraction(0)
    return base**e


def H_prefactor(n: LatticePoint, x: XParams) -> Fraction:
    """prod over support pairs i < j of (x_i - x_j)^(n_i n_j)."""
    items = n.items
    out = Fraction(1)
    for a in range(len(items)):
        i, ni = items[a]
        xi = _lookup(x, i, "x")
        for b in range(a + 1, len(items)):
            j, nj = items[b]
            diff = xi - _lookup(x, j, "x")
            if diff == 0:
                raise ParameterCollision(f"x_{i} = x_{j}")
            out *= diff ** (ni * nj)
    return out


def shifted_times(t: Sequence[Fraction], n: LatticePoint, x: XParams) -> tuple[Fraction, ...]:
    out = tuple(t)
    for i, ni in n.items:
        out = miwa_shift(out, _lookup(x, i, "x"), ni)
    return out


def H_eval(w: GrassmannianElement, n: LatticePoint, t: Sequence[Fraction], x: XParams) -> Fraction:
    """prod_{i<j}(x_i - x_j)^(n_i n_j) tau(t + sum n_i [x_i])."""
    pre = H_prefactor(n, x)
    return pre * tau_eval(w, shifted_times(t, n, x))


def H_eval_partition(
    w: GrassmannianElement,
    n: LatticePoint,
    lam: Partition,
    t: Sequence[Fraction],
    x: XParams,
) -> Fraction:
    return H_eval(w, n + frobenius_offset(lam), t, x)


def shift_lemma_residual(
    w: GrassmannianElement, n: LatticePoint, i: int, t: Sequence[Fraction], x: XParams
) -> Fraction:
    """H^{n+alpha_i}(t) minus the shifted, rescaled H^n(t + [x_i])."""
    xi = _lookup(x, i, "x")
    factor = Fraction(-1 if sum(v for j, v in n.items if j < i) % 2 else 1)
    for j, nj in n.items:
        if j != i:
            diff = xi - _lookup(x, j, "x")
            if diff == 0:
                raise ParameterCollision(f"x_{i} = x_{j}")
            factor *= diff**nj
    lhs = H_eval(w, n + LatticePoint.alpha(i), t, x)
    rhs = factor * H_eval(w, n, miwa_shift(t, xi), x)
    return lhs - rhs


def specialize_x(y: YParams, indices: Sequence[int]) -> dict[int, Fraction]:
    """x_i -> y_{i+1} for i >= 0 and x_i -> -y_{-i} for i < 0."""
    return {
        i: (_lookup(y, i + 1, "y") if i >= 0 else -_lookup(y, -i, "y")) for i in indices
    }


def h_prefactor(m: LatticePoint, y: YParams) -> Fraction:
    """Lagrangian prefactor at any point m of A, read in y-variables."""
    pos = {i + 1: v for i, v in m.items if i >= 0}
    neg = {-i: v for i, v in m.items if i < 0}
    labels = sorted(set(pos) | set(neg))
    out = Fraction(1)
    for a in range(len(labels)):
        i = labels[a]
        yi = _lookup(y, i, "y")
        for b in range(a + 1, len(labels)):
            j = labels[b]
            e = pos.get(i, 0) * pos.get(j, 0) + neg.get(i, 0) * neg.get(j, 0)
            out *= _power(yi - _lookup(y, j, "y"), e, m)
    for i, ni in neg.items():
        yi = _lookup(y, i, "y")
        for j, pj in pos.items():
            e = ni * pj
            if e % 2:
                out = -out
            out *= _power(yi + _lookup(y, j, "y"), e, m)
    return out


def h_shifted_times(tprime: Sequence[Fraction], m: LatticePoint, y: YParams) -> tuple[Fraction, ...]:
    out = tuple(tprime)
    for i, v in m.items:
        if i >= 0:
            out = miwa_shift(out, _lookup(y, i + 1, "y"), v)
        else:
            out = miwa_shift(out, -_lookup(y, -i, "y"), v)
    return out


def h_at(w: GrassmannianElement, m: LatticePoint, tprime: Sequence[Fraction], y: YParams) -> Fraction:
    """Lagrangian-specialized evaluation at an arbitrary point m of A."""
    if any(tprime[j] for j in range(1, len(tprime), 2)):
        raise ValueError("CKP times must have vanishing even components")
    return h_prefactor(m, y) * tau_eval(w, h_shifted_times(tprime, m, y))


def h_eval(
    w0: LagrangianElement | GrassmannianElement,
    nprime: LatticePoint,
    tprime: Sequence[Fraction],
    y: YParams,
) -> Fraction:
    if not nprime.in_b():
        raise ValueError(f"{nprime} is not in the sublattice B")
    return h_at(_as_grassmannian(w0), nprime, tprime, y)


def h_eval_partition(
    w0: LagrangianElement | GrassmannianElement,
    nprime: LatticePoint,
    lam: Partition,
    tprime: Sequence[Fraction],
    y: YParams,
) -> Fraction:
    if not nprime.in_b():
        raise ValueError(f"{nprime} is not in the sublattice B")
    return h_at(_as_grassmannian(w0), nprime + frobenius_offset(lam), tprime, y)


def _as_grassmannian(w0: LagrangianElement | GrassmannianElement) -> GrassmannianElement:
    return lagrangian_to_grassmannian(w0) if isinstance(w0, LagrangianElement) else w0


HOOK_OF_KIND = {
    "plain": EMPTY,
    "x": Partition.hook(1, 2),
    "y": Partition.hook(0, 2),
    "z": Partition.hook(0, 1),
}


def checkerboard_sign(kind: str, n1: int, n2: int, n3: int) -> int:
    if kind == "plain":
        e = n1 + n2 + n3 + n1 * n2 + n1 * n3 + n2 * n3
    elif kind == "x":
        e = n1 * n1 + n2 * n3 + n3 * n3
    elif kind == "y":
        e = n1 * n3 + n3 * n3
    elif kind == "z":
        e = n1 * n2 + n2 * n2 + n3 * n3
    else:
        raise ValueError(f"unknown checkerboard kind {kind!r}")
    return -1 if e % 2 else 1


def b3_coordinates(nprime: LatticePoint) -> tuple[int, int, int]:
    coords = nprime.b_coordinates()
    if any(i > 3 for i in coords):
        raise ValueError(f"{nprime} is outside B_3")
    return coords.get(1, 0), coords.get(2, 0), coords.get(3, 0)


def checkerboard_h(
    w0: LagrangianElement | GrassmannianElement,
    nprime: LatticePoint | tuple[int, int, int],
    kind: str,
    tprime: Sequence[Fraction],
    y: YParams,
) -> Fraction:
    """Signed evaluations on B_3 for kinds plain, x, y, z."""
    if isinstance(nprime, LatticePoint):
        n1, n2, n3 = b3_coordinates(nprime)
    else:
        n1, n2, n3 = nprime
    point = LatticePoint.from_b3(n1, n2, n3)
    sign = checkerboard_sign(kind, n1, n2, n3)
    return sign * h_eval_partition(w0, point, HOOK_OF_KIND[kind], tprime, y)


@dataclass
class LatticeEvaluation:
    """Memoized H or h evaluations for one element, base time and parameter set."""

    element: GrassmannianElement
    t0: tuple[Fraction, ...]
    x: dict[int, Fraction] | None = None
    y: dict[int, Fraction] | None = None
    _values: dict = field(default_factory=dict, repr=False)

    def _memo(self, key: tuple, compute: Callable[[], Fraction]) -> Fraction:
        value = self._values.get(key)
        if value is None:
            value = compute()
            self._values[key] = value
        return value

    def H(self, n: LatticePoint, lam: Partition = EMPTY) -> Fraction:
        if self.x is None:
            raise ValueError("no x-parameters configured")
        m = n + frobenius_offset(lam)
        return self._memo(("H", m), lambda: H_eval(self.element, m, self.t0, self.x))

    def h(self, nprime: LatticePoint, lam: Partition = EMPTY) -> Fraction:
        if self.y is None:
            raise ValueError("no y-parameters configured")
        if not nprime.in_b():
            raise ValueError(f"{nprime} is not in the sublattice B")
        m = nprime + frobenius_offset(lam)
        return self._memo(("h", m), lambda: h_at(self.element, m, self.t0, self.y))

    def checkerboard(self, n1: int, n2: int, n3: int, kind: str) -> Fraction:
        point = LatticePoint.from_b3(n1, n2, n3)
        return checkerboard_sign(kind, n1, n2, n3) * self.h(point, HOOK_OF_KIND[kind])
