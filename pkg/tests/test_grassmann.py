from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given

from conftest import matrices, symmetric_matrices
from kptau.core import EMPTY, Partition, det, partitions_in_box, sign_of_multiindex
from kptau.fixtures import random_element, random_matrix
from kptau.grassmann import (
    GrassmannianElement,
    LagrangianElement,
    NotInBigCell,
    from_affine,
    giambelli_xi,
    hook_table,
    lagrangian_plucker,
    lagrangian_to_grassmannian,
    plucker_by_multiindex,
    plucker_by_partition,
    plucker_relation_residual,
    short_relations,
)
from oracles import leibniz_det

ABCD = [[1, 0], [0, 1], [1, 2], [3, 4]]


@pytest.fixture
def w24():
    return GrassmannianElement(2, 4, ABCD)


def test_identity_block_minor():
    w = GrassmannianElement(2, 4, [[1, 0], [0, 1], [0, 0], [0, 0]])
    assert plucker_by_multiindex(w, (-2, -1)) == 1
    assert plucker_by_multiindex(w, (0, 0)) == 0
    for lam in w.partitions():
        assert plucker_by_partition(w, lam) == (1 if lam == EMPTY else 0)


def test_fixture_minors(w24):
    assert plucker_by_multiindex(w24, (0, 1)) == -2
    expected = {(): 1, (1,): 2, (2,): 4, (1, 1): -1, (2, 1): -3, (2, 2): -2}
    for parts, value in expected.items():
        assert plucker_by_partition(w24, Partition(parts)) == value


def test_construction_validation():
    with pytest.raises(ValueError):
        GrassmannianElement(2, 4, [[1, 0], [2, 0], [3, 0], [4, 0]])
    with pytest.raises(ValueError):
        GrassmannianElement(2, 2, [[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        LagrangianElement([[1, 2], [3, 4]])


@given(matrices(6, 3))
def test_skew_symmetry(rows):
    try:
        w = GrassmannianElement(3, 6, rows)
    except ValueError:
        return
    L = (-3, 0, 2)
    base = plucker_by_multiindex(w, L)
    for perm in permutations(L):
        assert plucker_by_multiindex(w, perm) == sign_of_multiindex(perm) * base


def test_short_relation_example(w24):
    assert plucker_relation_residual(w24, (-2,), (-1, 0, 1)) == 0
    table = w24.plucker_table()
    by_hand = table[EMPTY] * table[Partition([2, 2])] - table[Partition([1])] * table[Partition([2, 1])] + table[Partition([2])] * table[Partition([1, 1])]
    assert by_hand == 0
    assert plucker_relation_residual(w24, (0,), (-1, -1, 1)) == 0


def test_residual_accepts_coordinate_map(w24):
    coords = dict(w24.plucker_table())
    assert plucker_relation_residual(coords, (-2,), (-1, 0, 1), 2, 4) == 0
    coords[Partition([2, 2])] += 1
    assert plucker_relation_residual(coords, (-2,), (-1, 0, 1), 2, 4) != 0
    with pytest.raises(ValueError):
        plucker_relation_residual(coords, (-2,), (-1, 0, 1))


@pytest.mark.parametrize("k,n", [(2, 4), (2, 5), (3, 6)])
def test_relations_vanish_on_random_elements(k, n):
    rng = random.Random(k * 100 + n)
    indices = range(-k, n - k)
    for _ in range(3):
        w = random_element(rng, k, n)
        for I, J in short_relations(k, n):
            assert plucker_relation_residual(w, I, J) == 0
        for _ in range(20):
            I = rng.sample(list(indices), k - 1)
            J = rng.sample(list(indices), k + 1)
            assert plucker_relation_residual(w, I, J) == 0


def test_basis_change_covariance():
    rng = random.Random(5)
    w = random_element(rng, 3, 6)
    G = [[Fraction(2), Fraction(1), Fraction(0)], [Fraction(0), Fraction(1), Fraction(-1)], [Fraction(1, 2), Fraction(0), Fraction(3)]]
    WG = [[sum(row[a] * G[a][b] for a in range(3)) for b in range(3)] for row in w.W]
    v = GrassmannianElement(3, 6, WG)
    dG = leibniz_det(G)
    for lam in w.partitions():
        assert plucker_by_partition(v, lam) == dG * plucker_by_partition(w, lam)


def test_giambelli_examples(w24):
    hooks = hook_table(w24, 2, 4)
    assert giambelli_xi(hooks, Fraction(1), Partition([2])) == 4
    assert giambelli_xi(hooks, Fraction(1), Partition([2, 2])) == det([[-3, 4], [-1, 2]]) == -2
    assert giambelli_xi(hooks, Fraction(1), EMPTY) == 1
    with pytest.raises(NotInBigCell):
        giambelli_xi(hooks, Fraction(0), Partition([2, 2]))


@pytest.mark.parametrize("k,n", [(2, 4), (2, 5), (3, 6), (4, 8)])
def test_giambelli_reproduces_minors(k, n):
    rng = random.Random(n)
    M = random_matrix(rng, n - k, k)
    # a non-unit vacuum minor exercises the pi_empty normalization
    w0 = from_affine(M)
    W = [[3 * x for x in row] if i == 0 else list(row) for i, row in enumerate(w0.W)]
    w = GrassmannianElement(k, n, W)
    table = w.plucker_table()
    assert table[EMPTY] == 3
    hooks = hook_table(w, k, n)
    for lam in w.partitions():
        assert giambelli_xi(hooks, table[EMPTY], lam) == table[lam]


def test_from_affine_hooks_are_entries():
    M = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(4), Fraction(5), Fraction(6)]]
    w = from_affine(M)
    assert plucker_by_partition(w, EMPTY) == 1
    for i in range(2):
        for j in range(3):
            assert plucker_by_partition(w, Partition.hook(i, j)) == M[i][j]


def test_lagrangian_examples():
    w = lagrangian_to_grassmannian(LagrangianElement([[7]]))
    assert w.W == ((1,), (7,))
    assert plucker_by_partition(w, Partition([1])) == 7
    zero = lagrangian_to_grassmannian(LagrangianElement([[0, 0], [0, 0]]))
    for lam, value in zero.plucker_table().items():
        assert value == (1 if lam == EMPTY else 0)


@given(symmetric_matrices(3))
def test_lagrangian_hook_symmetry_and_minors(M):
    w0 = LagrangianElement(M)
    w = lagrangian_to_grassmannian(w0)
    table = w.plucker_table()
    for i in range(3):
        for j in range(3):
            assert table[Partition.hook(i, j)] == table[Partition.hook(j, i)] == M[i][j]
    for lam in partitions_in_box(3, 3):
        assert lagrangian_plucker(w0, lam) == table[lam]
        assert table[lam] == table[lam.conjugate()]


def test_lagrangian_plucker_examples():
    M = [[Fraction(2), Fraction(5)], [Fraction(5), Fraction(-1)]]
    w0 = LagrangianElement(M)
    assert lagrangian_plucker(w0, Partition.hook(0, 1)) == 5
    assert lagrangian_plucker(w0, Partition([2, 2])) == det(M)
    eye = LagrangianElement([[int(i == j) for j in range(3)] for i in range(3)])
    for lam in partitions_in_box(3, 3):
        a, b = lam.frobenius
        assert lagrangian_plucker(eye, lam) == (1 if a == b else 0)
