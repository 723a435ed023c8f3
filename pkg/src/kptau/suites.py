"""Verification suites run by the CLI and the acceptance tests."""

from __future__ import annotations

import hashlib
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .core import (
    EMPTY,
    DegenerateEvaluation,
    LatticePoint,
    Partition,
    det,
    format_rational_full,
    partitions_in_box,
)
from .fixtures import (
    Element,
    distinct_rationals,
    random_element,
    random_lagrangian,
    random_rational,
    random_relation,
    random_symmetric,
    random_times,
    sub_rng,
)
from .grassmann import (
    GrassmannianElement,
    LagrangianElement,
    giambelli_xi,
    hook_table,
    lagrangian_plucker,
    lagrangian_to_grassmannian,
    plucker_relation_residual,
    short_relations,
)
from .lattice import LatticeEvaluation, shift_lemma_residual, x_params, y_params
from .recurrences import (
    OCTAHEDRON_PARTITIONS,
    HexahedronState,
    kappa_residuals,
    kashaev_residual,
    kashaev_solve,
    octahedron_coefficients,
    octahedron_residual_H,
    varkappa_residual,
    hexahedron_residuals,
)
from .tau import addition_formula_residual, ckp_symmetry_residual, ckp_times, tilde

SUITES = (
    "plucker",
    "giambelli",
    "addition",
    "ckp-symmetry",
    "shift-lemma",
    "determinant-formula",
    "octahedron",
    "kappa",
    "hexahedron",
    "kashaev",
    "varkappa",
)

DEFAULT_COUNTS = {
    "plucker": 8,
    "giambelli": 8,
    "addition": 6,
    "ckp-symmetry": 6,
    "shift-lemma": 8,
    "determinant-formula": 4,
    "octahedron": 6,
    "kappa": 4,
    "hexahedron": 3,
    "kashaev": 6,
    "varkappa": 6,
}


@dataclass(frozen=True)
class Record:
    """One check outcome; the run is green iff every residual is "0/1"."""

    check: str
    digest: str
    residual: str | None
    passed: bool
    detail: str = ""
    seconds: float | None = field(default=None, compare=False)

    def to_json(self, timing: bool = False) -> dict:
        out: dict = {"check": self.check, "digest": self.digest, "residual": self.residual, "pass": self.passed}
        if self.detail:
            out["detail"] = self.detail
        if timing and self.seconds is not None:
            out["seconds"] = round(self.seconds, 6)
        return out


def digest(*parts: object) -> str:
    return hashlib.sha256(repr(parts).encode()).hexdigest()[:16]


def record(check: str, inputs: Sequence[object], compute: Callable[[], Iterable[Fraction] | Fraction], expect_zero: bool = True) -> Record:
    """Evaluate residual(s); the stored residual is the first nonzero one, else 0."""
    start = time.perf_counter()
    key = digest(check, *inputs)
    try:
        values = compute()
    except DegenerateEvaluation as exc:
        return Record(check, key, None, False, f"degenerate evaluation: {exc}", time.perf_counter() - start)
    if isinstance(values, Fraction):
        values = [values]
    values = list(values)
    worst = next((v for v in values if v != 0), Fraction(0))
    ok = (worst == 0) if expect_zero else (worst != 0)
    detail = f"{len(values)} identities" if len(values) > 1 else ""
    if not expect_zero:
        detail = "negative control: nonzero residual expected"
    return Record(check, key, format_rational_full(worst), ok, detail, time.perf_counter() - start)


@dataclass
class SuiteContext:
    seed: int = 0
    element: Element | None = None
    counts: dict[str, int] = field(default_factory=dict)
    base_time: tuple[Fraction, ...] | None = None

    def rng(self, suite: str) -> random.Random:
        return sub_rng(self.seed, suite)

    def count(self, suite: str) -> int:
        return self.counts.get(suite, DEFAULT_COUNTS[suite])

    def grassmannian(self) -> GrassmannianElement | None:
        if isinstance(self.element, LagrangianElement):
            return lagrangian_to_grassmannian(self.element)
        return self.element

    def times_for(self, rng: random.Random, T: int) -> tuple[Fraction, ...]:
        if self.base_time is not None:
            t = tuple(self.base_time) + (Fraction(0),) * max(0, T - len(self.base_time))
            return t
        return random_times(rng, T)


GRASSMANNIAN_SHAPES = ((2, 4), (2, 5), (3, 6), (4, 8))


def _elements(ctx: SuiteContext, suite: str, shapes: Sequence[tuple[int, int]] = GRASSMANNIAN_SHAPES) -> list[GrassmannianElement]:
    w = ctx.grassmannian()
    if w is not None:
        return [w]
    rng = ctx.rng(suite + ":elements")
    count = ctx.count(suite)
    return [random_element(rng, *shapes[i % len(shapes)]) for i in range(count)]


def _lagrangians(ctx: SuiteContext, suite: str, ks: Sequence[int]) -> list[LagrangianElement]:
    if isinstance(ctx.element, LagrangianElement):
        return [ctx.element]
    rng = ctx.rng(suite + ":elements")
    return [random_lagrangian(rng, ks[i % len(ks)]) for i in range(ctx.count(suite))]


def suite_plucker(ctx: SuiteContext, long_samples: int = 10) -> list[Record]:
    rng = ctx.rng("plucker")
    out = []
    for w in _elements(ctx, "plucker"):
        rels = short_relations(w.k, w.n)
        out.append(record("plucker.short", (w.k, w.n, w.W), lambda: [plucker_relation_residual(w, I, J) for I, J in rels]))
        sampled = [random_relation(rng, w.k, w.n) for _ in range(long_samples)]
        out.append(record("plucker.long", (w.k, w.n, w.W, sampled), lambda: [plucker_relation_residual(w, I, J) for I, J in sampled]))
    return out


def giambelli_residuals(w: GrassmannianElement) -> list[Fraction]:
    table = w.plucker_table()
    hooks = hook_table(w, w.k, w.n)
    return [giambelli_xi(hooks, table[EMPTY], lam) - table[lam] for lam in w.partitions()]


def suite_giambelli(ctx: SuiteContext) -> list[Record]:
    out = []
    rng = ctx.rng("giambelli:elements")
    elements = [ctx.grassmannian()] if ctx.element is not None else [
        random_element(rng, *GRASSMANNIAN_SHAPES[i % 4], big_cell=True) for i in range(ctx.count("giambelli"))
    ]
    for w in elements:
        out.append(record("giambelli", (w.k, w.n, w.W), lambda: giambelli_residuals(w)))
    return out


def suite_addition(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("addition")
    out = []
    given = ctx.grassmannian()
    for idx in range(ctx.count("addition")):
        if given is not None:
            w = given
        else:
            k = 2 + idx % 2
            w = random_element(rng, k, 2 * k)
        k = w.k
        params = distinct_rationals(rng, 2 * k)
        xs, ys = params[: k - 1], params[k - 1:]
        t = ctx.times_for(rng, w.n)
        out.append(record(f"addition.k{k}", (w.W, t, xs, ys), lambda: addition_formula_residual(w, t, xs, ys)))
    return out


def suite_ckp(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("ckp-symmetry")
    out = []
    if ctx.element is not None and not isinstance(ctx.element, LagrangianElement):
        # a big-cell element with a non-symmetric affine matrix is a planted control
        w = ctx.grassmannian()
        assert w is not None
        for _ in range(ctx.count("ckp-symmetry")):
            t = ctx.times_for(rng, w.n)
            out.append(record("ckp-symmetry", (w.W, t), lambda: _tau_diff(w, t)))
        return out
    for w0 in _lagrangians(ctx, "ckp-symmetry", (2, 3, 4)):
        t = ctx.times_for(rng, 2 * w0.k)
        out.append(record("ckp-symmetry", (w0.M, t), lambda: ckp_symmetry_residual(w0, t)))
    return out


def _tau_diff(w: GrassmannianElement, t: Sequence[Fraction]) -> Fraction:
    from .tau import tau_eval

    return tau_eval(w, t) - tau_eval(w, tilde(t))


def asymmetric_control(rng: random.Random, k: int = 2) -> Record:
    """CKP residual for a deliberately non-symmetric affine matrix."""
    M = random_symmetric(rng, k)
    M[0][1] += 1
    w0 = LagrangianElement(M, check_symmetric=False)
    t = tuple(Fraction(j) for j in range(1, 2 * k + 1))
    return record("ckp-symmetry.asymmetric-control", (w0.M, t), lambda: ckp_symmetry_residual(w0, t), expect_zero=False)


def random_point(rng: random.Random, indices: Sequence[int], size: int = 2, support: int = 3) -> LatticePoint:
    chosen = rng.sample(list(indices), support)
    return LatticePoint({i: rng.choice([v for v in range(-size, size + 1) if v]) for i in chosen})


def x_for(rng: random.Random, indices: Sequence[int]) -> dict[int, Fraction]:
    return x_params(dict(zip(indices, distinct_rationals(rng, len(indices)))))


def suite_shift(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("shift-lemma")
    out = []
    given = ctx.grassmannian()
    for _ in range(ctx.count("shift-lemma")):
        w = given if given is not None else random_element(rng, *rng.choice(((2, 4), (3, 6))))
        indices = list(range(-4, 4))
        x = x_for(rng, indices)
        n = random_point(rng, indices)
        i = rng.choice(indices)
        t = ctx.times_for(rng, w.n)
        out.append(record("shift-lemma", (w.W, n, i, t, x), lambda: shift_lemma_residual(w, n, i, t, x)))
    return out


def homomorphism_residuals(ev: LatticeEvaluation, n: LatticePoint) -> list[Fraction]:
    w = ev.element
    coords = {lam: ev.H(n, lam) for lam in w.partitions()}
    return [plucker_relation_residual(coords, I, J, w.k, w.n) for I, J in short_relations(w.k, w.n)]


def determinant_formula_residuals(ev: LatticeEvaluation, n: LatticePoint, lams: Sequence[Partition]) -> list[Fraction]:
    base = ev.H(n)
    if base == 0:
        raise DegenerateEvaluation("H^n vanishes", n)
    out = []
    for lam in lams:
        a, b = lam.frobenius
        matrix = [[ev.H(n, Partition.hook(ai, bj)) / base for bj in b] for ai in a]
        out.append(ev.H(n, lam) / base - det(matrix))
    return out


def suite_determinant(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("determinant-formula")
    out = []
    given = ctx.grassmannian()
    for _ in range(ctx.count("determinant-formula")):
        w = given if given is not None else random_element(rng, 3, 6)
        indices = list(range(-w.k - 2, w.n - w.k + 2))
        ev = LatticeEvaluation(w, ctx.times_for(rng, w.n), x=x_for(rng, indices))
        n = random_point(rng, range(-2, 2), 1, 2)
        lams = [lam for lam in w.partitions() if 1 <= lam.rank <= 3]
        out.append(record("determinant-formula", (w.W, ev.t0, ev.x, n), lambda: determinant_formula_residuals(ev, n, lams)))
    return out


def octahedron_H_residual(ev: LatticeEvaluation, n: LatticePoint) -> Fraction:
    return octahedron_residual_H({lam: ev.H(n, lam) for lam in OCTAHEDRON_PARTITIONS})


def suite_octahedron(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("octahedron")
    out = []
    a, b, c = distinct_rationals(rng, 3)
    out.append(record("octahedron.coefficients", (a, b, c), lambda: sum(octahedron_coefficients(a, b, c), Fraction(0))))
    given = ctx.grassmannian()
    for _ in range(ctx.count("octahedron")):
        w = given if given is not None else random_element(rng, *rng.choice(((2, 4), (3, 6))))
        indices = list(range(-4, 4))
        ev = LatticeEvaluation(w, ctx.times_for(rng, w.n), x=x_for(rng, indices))
        n = random_point(rng, range(-2, 2), 2, 2)
        out.append(record("octahedron.H-form", (w.W, ev.t0, ev.x, n), lambda: octahedron_H_residual(ev, n)))
    return out


def kappa_on_coords(coords: dict, limit: int) -> list[Fraction]:
    values: list[Fraction] = []
    for ijk in combinations(range(limit), 3):
        values.extend(kappa_residuals(coords, ijk))
    return values


def suite_kappa(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("kappa")
    out = []
    given = ctx.grassmannian()
    for _ in range(ctx.count("kappa")):
        w = given if given is not None else random_element(rng, 4, 8)
        limit = min(w.k, w.n - w.k)
        if limit < 3:
            continue
        out.append(record("kappa.plucker", (w.W,), lambda: kappa_on_coords(w.plucker_table(), limit)))
        ev = LatticeEvaluation(w, ctx.times_for(rng, w.n), x=x_for(rng, list(range(-w.k - 2, w.n - w.k + 2))))
        n = random_point(rng, range(-2, 2), 1, 2)
        out.append(record("kappa.H-values", (w.W, ev.t0, ev.x, n), lambda: kappa_on_coords({lam: ev.H(n, lam) for lam in w.partitions()}, limit)))
    return out


def lagrangian_evaluation(rng: random.Random, w0: LagrangianElement, base_time: Sequence[Fraction] | None = None) -> LatticeEvaluation:
    k = w0.k
    T = 2 * k
    if base_time is None:
        tp = ckp_times([random_rational(rng, 5, 4) for _ in range((T + 1) // 2)], T)
    else:
        tp = tuple(base_time) + (Fraction(0),) * max(0, T - len(base_time))
    y = y_params(distinct_rationals(rng, 8, positive=True))
    return LatticeEvaluation(lagrangian_to_grassmannian(w0), tp, y=y)


def hexahedron_data(ev: LatticeEvaluation, base: tuple[int, int, int]):
    state = HexahedronState()
    for kind in ("plain", "x", "y", "z"):
        for d in product((0, 1), repeat=3):
            p = (base[0] + d[0], base[1] + d[1], base[2] + d[2])
            state.family(kind)[p] = ev.checkerboard(*p, kind)
    return state


def suite_hexahedron(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("hexahedron")
    out = []
    for w0 in _lagrangians(ctx, "hexahedron", (3, 4)):
        ev = lagrangian_evaluation(rng, w0, ctx.base_time)
        base = tuple(rng.randint(-1, 1) for _ in range(3))
        out.append(record("hexahedron", (w0.M, ev.t0, ev.y, base), lambda: hexahedron_residuals(hexahedron_data(ev, base).data_at(base))))
    return out


def kashaev_lattice_residuals(ev: LatticeEvaluation, n: LatticePoint, triples: Sequence[tuple[int, int, int]]) -> list[Fraction]:
    out = []
    for i, j, k in triples:
        def hv(*bs: int) -> Fraction:
            p = n
            for b in bs:
                p = p + LatticePoint.beta(b)
            return ev.h(p)

        out.append(kashaev_residual(hv(), hv(i), hv(j), hv(k), hv(i, j), hv(i, k), hv(j, k), hv(i, j, k)))
    return out


def principal_minor_data(M: Sequence[Sequence[Fraction]]) -> tuple[Fraction, ...]:
    def minor(idx: Sequence[int]) -> Fraction:
        return det([[M[a][b] for b in idx] for a in idx])

    return (Fraction(1), minor([0]), minor([1]), minor([2]), minor([0, 1]), minor([0, 2]), minor([1, 2]), minor([0, 1, 2]))


def suite_kashaev(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("kashaev")
    one = Fraction(1)
    out = [
        record("kashaev.all-ones", (), lambda: kashaev_residual(*(one,) * 8)),
        record("kashaev.solve-all-ones", (), lambda: _solve_all_ones_residuals()),
    ]
    for _ in range(ctx.count("kashaev")):
        M = random_symmetric(rng, 3)
        out.append(record("kashaev.principal-minors", (M,), lambda: kashaev_residual(*principal_minor_data(M))))
    for w0 in _lagrangians(ctx, "kashaev", (3, 4)):
        ev = lagrangian_evaluation(rng, w0, ctx.base_time)
        n = LatticePoint.from_b3(*(rng.randint(-1, 1) for _ in range(3)))
        triples = list(combinations(range(1, 5), 3))
        out.append(record("kashaev.lattice", (w0.M, ev.t0, ev.y, n), lambda: kashaev_lattice_residuals(ev, n, triples)))
    return out


def _solve_all_ones_residuals() -> list[Fraction]:
    roots = kashaev_solve(*(1,) * 7)
    if roots.roots is None:
        return [Fraction(1)]
    return [r - 1 for r in roots.roots] + [c - e for c, e in zip(roots.coefficients, (1, -2, 1))]


def lagrangian_coords(w0: LagrangianElement) -> dict[Partition, Fraction]:
    return {lam: lagrangian_plucker(w0, lam) for lam in partitions_in_box(w0.k, w0.k)}


def suite_varkappa(ctx: SuiteContext) -> list[Record]:
    out = []
    for w0 in _lagrangians(ctx, "varkappa", (3, 4)):
        if w0.k < 3:
            continue
        coords = lagrangian_coords(w0)
        out.append(record("varkappa", (w0.M,), lambda: [varkappa_residual(coords, ijk) for ijk in combinations(range(w0.k), 3)]))
    return out


RUNNERS: dict[str, Callable[[SuiteContext], list[Record]]] = {
    "plucker": suite_plucker,
    "giambelli": suite_giambelli,
    "addition": suite_addition,
    "ckp-symmetry": suite_ckp,
    "shift-lemma": suite_shift,
    "determinant-formula": suite_determinant,
    "octahedron": suite_octahedron,
    "kappa": suite_kappa,
    "hexahedron": suite_hexahedron,
    "kashaev": suite_kashaev,
    "varkappa": suite_varkappa,
}


def run_suite(name: str, ctx: SuiteContext) -> list[Record]:
    if name not in RUNNERS:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    return RUNNERS[name](ctx)


__all__ = [
    "SUITES",
    "Record",
    "SuiteContext",
    "run_suite",
    "asymmetric_control",
]
