from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given

from conftest import nonzero_rationals, symmetric_matrices
from kptau.core import EMPTY, DegenerateEvaluation, LatticePoint, ParameterCollision, Partition, partitions_in_box
from kptau.fixtures import distinct_rationals, random_element, random_lagrangian, random_symmetric, random_times
from kptau.grassmann import GrassmannianElement, LagrangianElement
from kptau.lattice import LatticeEvaluation, x_params
from kptau.propagation import (
    octahedron_tau,
    octahedron_window,
    propagate_hexahedron,
    propagate_octahedron,
    seed_hexahedron,
    seed_octahedron,
)
from kptau.recurrences import (
    OCTAHEDRON_PARTITIONS,
    HexahedronData,
    HexahedronState,
    MissingValue,
    NondegeneracyFailure,
    OctahedronGrid,
    hexahedron_propagate,
    hexahedron_residuals,
    kappa0_from_cubics,
    kappa0_nondegeneracy,
    kappa_residuals,
    kashaev_residual,
    kashaev_solve,
    octahedron_coefficients,
    octahedron_propagate,
    octahedron_residual_H,
    varkappa_residual,
)
from kptau.suites import (
    hexahedron_data,
    kashaev_lattice_residuals,
    lagrangian_coords,
    lagrangian_evaluation,
    principal_minor_data,
)
from kptau.tau import times
from oracles import all_ones_quadratic

F = Fraction
ABCD = [[1, 0], [0, 1], [1, 2], [3, 4]]


@given(nonzero_rationals, nonzero_rationals, nonzero_rationals)
def test_octahedron_coefficients_sum_to_zero(a, b, c):
    assert sum(octahedron_coefficients(a, b, c)) == 0


def test_octahedron_trivial_tau():
    # tau = 1 everywhere reduces the relation to the coefficient identity
    grid = OctahedronGrid(F(2), F(-1), F(1, 3))
    for l in range(-1, 3):
        for m in range(-1, 3):
            for n in range(-1, 3):
                grid.values[(l, m, n)] = F(1)
    assert grid.residual(0, 0, 0) == 0
    assert octahedron_propagate(grid, (2, 2, 0)) == 1


def test_octahedron_residual_on_fixture():
    w = GrassmannianElement(2, 4, ABCD)
    ev = LatticeEvaluation(w, times([0] * 4), x=x_params({-2: 0, -1: 2, 0: 3, 1: 5, 2: 7}))
    assert octahedron_residual_H({lam: ev.H(LatticePoint(), lam) for lam in OCTAHEDRON_PARTITIONS}) == 0


def test_octahedron_residual_requires_all_values():
    with pytest.raises(MissingValue):
        octahedron_residual_H({EMPTY: F(1)})
    with pytest.raises(ParameterCollision):
        OctahedronGrid(F(1), F(1), F(2))
    with pytest.raises(ParameterCollision):
        OctahedronGrid(F(0), F(1), F(2))


def _tau_grid(seed: int, k: int, n: int, radius: int = 2):
    rng = random.Random(seed)
    w = random_element(rng, k, n)
    t0 = random_times(rng, n)
    a, b, c = distinct_rationals(rng, 3)
    grid = OctahedronGrid(a, b, c)
    r = range(-radius, radius + 1)
    seed_octahedron(w, t0, grid, [(l, m, q) for l in r for m in r for q in r])
    return w, t0, grid


@pytest.mark.parametrize("k,n", [(2, 4), (3, 6)])
def test_octahedron_grid_relation(k, n):
    _, _, grid = _tau_grid(k * n, k, n)
    for base in ((0, 0, 0), (-1, 1, 0), (1, -2, 1)):
        assert grid.residual(*base) == 0


def test_octahedron_display_in_grid_variables():
    _, _, grid = _tau_grid(7, 2, 4)
    a, b, c = grid.a, grid.b, grid.c
    T = grid.values
    for l, m, n in ((0, 0, 0), (-1, 0, 1), (1, -1, -1)):
        display = (
            a * (b - c) * T[(l + 1, m, n)] * T[(l, m + 1, n + 1)]
            + b * (c - a) * T[(l, m + 1, n)] * T[(l + 1, m, n + 1)]
            + c * (a - b) * T[(l, m, n + 1)] * T[(l + 1, m + 1, n)]
        )
        assert display == 0


def test_octahedron_propagation_matches_direct():
    rng = random.Random(21)
    w = random_element(rng, 2, 4)
    t0 = random_times(rng, 4)
    grid = OctahedronGrid(*distinct_rationals(rng, 3))
    seed_octahedron(w, t0, grid, octahedron_window(3, 0, (0, 1), 3))
    result = propagate_octahedron(grid, 2, 3, w, t0)
    assert result.levels == 3
    assert result.produced
    assert all(p.matches for p in result.produced)
    assert all(octahedron_tau(w, t0, grid, p.site) == p.value for p in result.produced)


def test_octahedron_zero_divisor():
    grid = OctahedronGrid(F(2), F(3), F(5))
    for site in ((1, 0, 0), (0, 1, 0), (0, 1, 1), (1, 0, 1), (0, 0, 1)):
        grid.values[site] = F(1)
    grid.values[(0, 0, 1)] = F(0)
    with pytest.raises(DegenerateEvaluation):
        octahedron_propagate(grid, (1, 1, 0))
    del grid.values[(1, 0, 0)]
    with pytest.raises(MissingValue):
        octahedron_propagate(grid, (1, 1, 0))


def test_kappa_vanishes_on_plucker_coordinates():
    rng = random.Random(31)
    for _ in range(3):
        table = random_element(rng, 4, 8).plucker_table()
        for ijk in combinations(range(4), 3):
            assert kappa_residuals(table, ijk) == (0,) * 7


def test_kappa_detects_perturbation():
    rng = random.Random(32)
    table = dict(random_element(rng, 4, 8).plucker_table())
    table[Partition.from_frobenius([2, 1], [2, 1])] += 1
    assert any(kappa_residuals(table, (0, 1, 2)))
    with pytest.raises(ValueError):
        kappa_residuals(table, (1, 0, 2))


def test_kappa_on_H_values():
    rng = random.Random(33)
    w = random_element(rng, 4, 8)
    ev = LatticeEvaluation(w, random_times(rng, 8), x=x_params(dict(zip(range(-6, 6), distinct_rationals(rng, 12)))))
    n = LatticePoint({0: 1, -1: -1})
    coords = {lam: ev.H(n, lam) for lam in w.partitions()}
    for ijk in combinations(range(4), 3):
        assert kappa_residuals(coords, ijk) == (0,) * 7


def test_kappa0_nondegeneracy_guard():
    table = random_element(random.Random(34), 3, 6).plucker_table()
    assert kappa0_nondegeneracy(table, (0, 1, 2)) != 0
    assert kappa0_from_cubics(table, (0, 1, 2)) == 0
    degenerate = {lam: F(0) for lam in partitions_in_box(3, 3)}
    degenerate[EMPTY] = F(1)
    with pytest.raises(NondegeneracyFailure):
        kappa0_from_cubics(degenerate, (0, 1, 2))


def _hex_ev(seed: int, k: int):
    rng = random.Random(seed)
    return lagrangian_evaluation(rng, random_lagrangian(rng, k))


@pytest.mark.parametrize("k,base", [(3, (0, 0, 0)), (4, (1, 0, 0)), (4, (-1, 1, 0))])
def test_hexahedron_vanishes(k, base):
    ev = _hex_ev(40 + k, k)
    assert hexahedron_residuals(hexahedron_data(ev, base).data_at(base)) == (0, 0, 0, 0)


def test_hexahedron_negative_control():
    ev = _hex_ev(45, 3)
    d = hexahedron_data(ev, (0, 0, 0)).data_at((0, 0, 0))
    bumped = d._replace(h123=d.h123 + 1)
    res = hexahedron_residuals(bumped)
    assert res[:3] == (0, 0, 0) and res[3] != 0


def test_hexahedron_all_ones():
    state = HexahedronState()
    for kind in ("plain", "x", "y", "z"):
        for p in ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1)):
            state.family(kind)[p] = F(1)
    assert hexahedron_propagate(state, (0, 0, 0)) == (3, 3, 3, 14)
    assert hexahedron_residuals(HexahedronData(*(F(1),) * 14))[0] == 1 - 3


def test_hexahedron_one_step_matches_direct():
    ev = _hex_ev(46, 3)
    state = hexahedron_data(ev, (0, 0, 0))
    direct = (state.x[(1, 0, 0)], state.y[(0, 1, 0)], state.z[(0, 0, 1)], state.plain[(1, 1, 1)])
    for kind, site in (("x", (1, 0, 0)), ("y", (0, 1, 0)), ("z", (0, 0, 1)), ("plain", (1, 1, 1))):
        del state.family(kind)[site]
    assert hexahedron_propagate(state, (0, 0, 0)) == direct


def test_hexahedron_cone():
    ev = _hex_ev(47, 3)
    state = seed_hexahedron(ev, 2, 0)
    result = propagate_hexahedron(state, 0, 2, ev)
    assert result.levels == 2
    assert len(result.produced) > 4
    assert all(p.matches for p in result.produced)


def test_hexahedron_degenerate_divisor():
    state = HexahedronState()
    for kind in ("plain", "x", "y", "z"):
        for p in ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1)):
            state.family(kind)[p] = F(1)
    state.x[(0, 0, 0)] = F(0)
    with pytest.raises(DegenerateEvaluation):
        hexahedron_propagate(state, (0, 0, 0))


def test_kashaev_examples():
    one = F(1)
    assert kashaev_residual(*(one,) * 8) == 0
    assert kashaev_residual(one, *(F(0),) * 7) == 0
    assert kashaev_residual(F(2), *(F(0),) * 7) == 0
    assert kashaev_residual(one, one, F(0), F(0), F(0), F(0), one, F(0)) == 1


def test_kashaev_solve_double_root_matches_sympy():
    roots = kashaev_solve(*(1,) * 7)
    assert roots.coefficients == all_ones_quadratic() == (1, -2, 1)
    assert roots.discriminant == 0
    assert roots.roots == (1, 1)


def test_kashaev_solve_reports():
    r = kashaev_solve(1, 1, 1, 1, 0, 0, 0)
    assert r.roots == (-4, 0) and r.rational
    r = kashaev_solve(2, 1, 1, 1, 1, 1, 1)
    assert r.roots is None and r.discriminant == -16
    assert "irrational" in r.describe()
    with pytest.raises(DegenerateEvaluation):
        kashaev_solve(0, 1, 1, 1, 1, 1, 1)


@given(symmetric_matrices(3))
def test_kashaev_principal_minors(M):
    data = principal_minor_data(M)
    assert kashaev_residual(*data) == 0
    roots = kashaev_solve(*data[:7])
    assert roots.roots is not None and data[7] in roots.roots


def test_kashaev_quartic_matches_sympy_expansion():
    syms = sympy.symbols("h hi hj hk hij hik hjk hijk")
    rng = random.Random(50)
    values = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in syms]
    h, hi, hj, hk, hij, hik, hjk, hijk = syms
    # Cayley hyperdeterminant of the 2x2x2 array indexed by (i, j, k) bits
    a = {(0, 0, 0): h, (1, 0, 0): hi, (0, 1, 0): hj, (0, 0, 1): hk, (1, 1, 0): hij, (1, 0, 1): hik, (0, 1, 1): hjk, (1, 1, 1): hijk}
    cayley = (
        a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2 + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
        + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2 + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2
        - 2 * a[0, 0, 0] * a[0, 0, 1] * a[1, 1, 0] * a[1, 1, 1]
        - 2 * a[0, 0, 0] * a[0, 1, 0] * a[1, 0, 1] * a[1, 1, 1]
        - 2 * a[0, 0, 0] * a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 1]
        - 2 * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 1] * a[1, 1, 0]
        - 2 * a[0, 0, 1] * a[0, 1, 1] * a[1, 1, 0] * a[1, 0, 0]
        - 2 * a[0, 1, 0] * a[0, 1, 1] * a[1, 0, 1] * a[1, 0, 0]
        + 4 * a[0, 0, 0] * a[0, 1, 1] * a[1, 0, 1] * a[1, 1, 0]
        + 4 * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0] * a[1, 1, 1]
    )
    expected = cayley.subs({s: sympy.Rational(v.numerator, v.denominator) for s, v in zip(syms, values)})
    assert kashaev_residual(*values) == F(int(expected.p), int(expected.q))


def test_kashaev_on_lattice():
    ev = _hex_ev(51, 4)
    n = LatticePoint.from_b3(1, -1, 0)
    assert kashaev_lattice_residuals(ev, n, list(combinations(range(1, 5), 3))) == [0] * 4


def test_varkappa():
    rng = random.Random(52)
    for k in (3, 4):
        w0 = LagrangianElement(random_symmetric(rng, k))
        coords = lagrangian_coords(w0)
        for ijk in combinations(range(k), 3):
            assert varkappa_residual(coords, ijk) == 0
    coords[EMPTY] += 1
    assert varkappa_residual(coords, (0, 1, 2)) != 0
