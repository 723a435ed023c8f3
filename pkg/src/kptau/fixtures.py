"""Named fixtures and seeded random generators."""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction
from itertools import combinations
from typing import Union

from .grassmann import GrassmannianElement, LagrangianElement, from_affine

Element = Union[GrassmannianElement, LagrangianElement]

GR24_ABCD = ((1, 0), (0, 1), (1, 2), (3, 4))
SYM3 = (("2/3", "-1", "5/2"), ("-1", "3", "1/4"), ("5/2", "1/4", "-7/5"))


def fixture(name: str) -> Element:
    if name == "gr24-abcd":
        return GrassmannianElement(2, 4, GR24_ABCD)
    if name == "sym3-random":
        return LagrangianElement(SYM3)
    if name == "trivial":
        return GrassmannianElement(1, 2, ((1,), (0,)))
    raise KeyError(f"unknown fixture {name!r}; known: gr24-abcd, sym3-random, trivial")


FIXTURES = ("gr24-abcd", "sym3-random", "trivial")


def sub_rng(seed: int, label: str) -> random.Random:
    """Independent stream per label, stable across runs and suite subsets."""
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def random_rational(rng: random.Random, size: int = 9, den: int = 6) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, den))


def random_nonzero_rational(rng: random.Random, size: int = 9, den: int = 6) -> Fraction:
    while True:
        q = random_rational(rng, size, den)
        if q:
            return q


def random_matrix(rng: random.Random, rows: int, cols: int) -> list[list[Fraction]]:
    return [[random_rational(rng) for _ in range(cols)] for _ in range(rows)]


def random_symmetric(rng: random.Random, k: int) -> list[list[Fraction]]:
    M = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            M[i][j] = M[j][i] = random_rational(rng)
    return M


def random_element(rng: random.Random, k: int, n: int, big_cell: bool = False) -> GrassmannianElement:
    """Random full-rank element; with ``big_cell`` the vacuum minor is nonzero."""
    while True:
        if big_cell or rng.random() < 0.5:
            w = from_affine(random_matrix(rng, n - k, k))
            if big_cell:
                return w
            # mix columns so the top block is not always the identity
            G = random_matrix(rng, k, k)
            rows = [[sum(r[a] * G[a][b] for a in range(k)) for b in range(k)] for r in w.W]
        else:
            rows = random_matrix(rng, n, k)
        try:
            return GrassmannianElement(k, n, rows)
        except ValueError:
            continue


def random_lagrangian(rng: random.Random, k: int) -> LagrangianElement:
    return LagrangianElement(random_symmetric(rng, k))


def distinct_rationals(rng: random.Random, count: int, positive: bool = False) -> list[Fraction]:
    out: list[Fraction] = []
    while len(out) < count:
        q = Fraction(rng.randint(1, 40), rng.randint(1, 7))
        if not positive and rng.random() < 0.5:
            q = -q
        if q not in out:
            out.append(q)
    return out


def random_times(rng: random.Random, T: int) -> tuple[Fraction, ...]:
    return tuple(random_rational(rng, 5, 4) for _ in range(T))


def random_relation(rng: random.Random, k: int, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """A random (I, J) with |I| = k-1 and |J| = k+1 from the index window."""
    indices = list(range(-k, n - k))
    I = tuple(rng.sample(indices, k - 1))
    J = tuple(rng.sample(indices, k + 1))
    return I, J


def all_triples(limit: int) -> list[tuple[int, int, int]]:
    return list(combinations(range(limit), 3))
