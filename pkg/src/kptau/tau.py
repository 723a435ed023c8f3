"""Polynomial KP tau-functions through the Schur expansion."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import KptauError, ParameterCollision, Partition, RationalLike, det, rational
from .grassmann import GrassmannianElement, LagrangianElement, lagrangian_to_grassmannian

TimeVector = tuple[Fraction, ...]


class TruncationError(KptauError, ValueError):
    """The time vector is too short for the requested evaluation."""


def times(values: Sequence[RationalLike], T: int | None = None) -> TimeVector:
    """Build (t_1, ..., t_T), zero-padding on the right."""
    t = [rational(v) for v in values]
    if T is not None:
        if len(t) > T:
            raise TruncationError(f"{len(t)} times given for truncation order {T}")
        t += [Fraction(0)] * (T - len(t))
    return tuple(t)


def ckp_times(odd_values: Sequence[RationalLike], T: int) -> TimeVector:
    """(t_1, 0, t_3, 0, ...) truncated at order T."""
    t = [Fraction(0)] * T
    for idx, v in enumerate(odd_values):
        j = 2 * idx + 1
        if j > T:
            raise TruncationError(f"odd time t_{j} beyond order {T}")
        t[j - 1] = rational(v)
    return tuple(t)


def tilde(t: Sequence[Fraction]) -> TimeVector:
    """Flip the sign of the even-indexed times."""
    return tuple(-v if j % 2 == 0 else v for j, v in enumerate(t, start=1))


def miwa_shift(t: Sequence[Fraction], x: RationalLike, m: int = 1) -> TimeVector:
    """t_j += m x^j / j for every j up to the truncation order."""
    if m == 0:
        return tuple(t)
    x = rational(x)
    out = list(t)
    power = Fraction(1)
    for j in range(1, len(out) + 1):
        power *= x
        out[j - 1] += m * power / j
    return tuple(out)


def homogeneous_from_times(t: Sequence[Fraction], maxdeg: int) -> list[Fraction]:
    """h_0..h_maxdeg from m h_m = sum_i i t_i h_{m-i}."""
    if maxdeg > len(t):
        raise TruncationError(f"h_{maxdeg} needs at least {maxdeg} times, have {len(t)}")
    h = [Fraction(1)]
    for m in range(1, maxdeg + 1):
        acc = Fraction(0)
        for i in range(1, m + 1):
            if t[i - 1]:
                acc += i * t[i - 1] * h[m - i]
        h.append(acc / m)
    return h


def _jacobi_trudi(lam: Partition, h: Sequence[Fraction]) -> Fraction:
    ell = lam.length
    if ell == 0:
        return Fraction(1)

    def hh(m: int) -> Fraction:
        return h[m] if m >= 0 else Fraction(0)

    return det([[hh(lam.part(i) - i + j) for j in range(1, ell + 1)] for i in range(1, ell + 1)])


def schur_at(lam: Partition, t: Sequence[Fraction]) -> Fraction:
    """Jacobi-Trudi determinant det(h_{lambda_i - i + j})."""
    need = (lam.part(1) + lam.length - 1) if lam.length else 0
    if need > len(t):
        raise TruncationError(f"s_{lam} needs t_1..t_{need}, have {len(t)}")
    return _jacobi_trudi(lam, homogeneous_from_times(t, need))


def tau_eval(w: GrassmannianElement, t: Sequence[Fraction]) -> Fraction:
    """Sum of pi_lambda s_lambda(t) over the k x (n-k) rectangle."""
    if len(t) < w.n - 1:
        raise TruncationError(f"tau on Gr({w.k},{w.n}) needs t_1..t_{w.n - 1}, have {len(t)}")
    h = homogeneous_from_times(t, w.n - 1)
    total = Fraction(0)
    for lam, pi in w.plucker_table().items():
        if pi:
            total += pi * _jacobi_trudi(lam, h)
    return total


def vandermonde(xs: Sequence[Fraction]) -> Fraction:
    out = Fraction(1)
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            out *= xs[i] - xs[j]
    return out


def zeta(w: GrassmannianElement, t: Sequence[Fraction], xs: Sequence[RationalLike]) -> Fraction:
    """prod_{i<j}(x_i - x_j) tau(t + sum [x_i])."""
    xs = [rational(x) for x in xs]
    if len(set(xs)) != len(xs):
        raise ParameterCollision(f"repeated parameter in {xs}")
    shifted = tuple(t)
    for x in xs:
        shifted = miwa_shift(shifted, x)
    return vandermonde(xs) * tau_eval(w, shifted)


def addition_formula_residual(
    w: GrassmannianElement,
    t: Sequence[Fraction],
    xs: Sequence[RationalLike],
    ys: Sequence[RationalLike],
) -> Fraction:
    """sum_j (-1)^j zeta(xs, y_j) zeta(ys without y_j), j 1-based."""
    xs = [rational(x) for x in xs]
    ys = [rational(y) for y in ys]
    if len(ys) != len(xs) + 2:
        raise ValueError("need |ys| = |xs| + 2")
    if len(set(xs + ys)) != len(xs) + len(ys):
        raise ParameterCollision("addition formula parameters must be pairwise distinct")
    total = Fraction(0)
    for j, y in enumerate(ys):
        term = zeta(w, t, xs + [y]) * zeta(w, t, ys[:j] + ys[j + 1:])
        total += term if j % 2 == 1 else -term
    return total


def ckp_symmetry_residual(w0: LagrangianElement, t: Sequence[Fraction]) -> Fraction:
    """tau(t) - tau(t~) for the element built from w0."""
    w = lagrangian_to_grassmannian(w0)
    return tau_eval(w, t) - tau_eval(w, tilde(t))
