"""Shared construction helpers for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from jetcone.fields import Field
from jetcone.linalg import matrix_rank
from jetcone.poly import Polynomial, parse_polynomial
from jetcone.system import PolySystem


def frac_vec(*values) -> tuple:
    return tuple(Fraction(v) for v in values)


def rational_system(n: int, *texts: str) -> PolySystem:
    return PolySystem(
        n, Field.RATIONAL, tuple(parse_polynomial(t, n) for t in texts)
    )


def float_system(n: int, *texts: str) -> PolySystem:
    return PolySystem(
        n, Field.REAL, tuple(parse_polynomial(t, n, Field.REAL) for t in texts)
    )


def complex_system(n: int, *texts: str) -> PolySystem:
    return PolySystem(
        n, Field.COMPLEX, tuple(parse_polynomial(t, n, Field.COMPLEX) for t in texts)
    )


def rand_frac(rng: random.Random, lo=-10, hi=10, dmax=10) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, dmax))


def random_monomial(rng: random.Random, n: int, degree: int) -> tuple:
    exps = [0] * n
    for _ in range(degree):
        exps[rng.randrange(n)] += 1
    return tuple(exps)


def random_smooth_ci(rng: random.Random):
    """Graph-style smooth system x_c - g(x) with corrections of order >= 3.

    The order-3 cutoff keeps every next form zero, so the homogeneous
    jet-space description applies and admissible jets can be sampled from
    it directly.  Coefficient heights stay <= 10.
    """
    n = rng.randint(2, 5)
    p = rng.randint(1, min(3, n - 1))
    cols = sorted(rng.sample(range(n), p))
    gens = []
    for c in cols:
        exps = [0] * n
        exps[c] = 1
        terms = {tuple(exps): Fraction(1)}
        for _ in range(rng.randint(1, 3)):
            mono = random_monomial(rng, n, rng.randint(3, 4))
            coeff = rand_frac(rng, -5, 5, 5)
            if coeff:
                terms[mono] = terms.get(mono, Fraction(0)) + coeff
        gens.append(Polynomial(n, terms))
    system = PolySystem(n, Field.RATIONAL, tuple(gens))
    free = [i for i in range(n) if i not in cols]
    u = [Fraction(0)] * n
    u[free[0]] = Fraction(rng.choice([1, 2, -1]))
    for i in free[1:]:
        u[i] = rand_frac(rng, -3, 3, 3)
    return system, tuple(u)


def random_cone(rng: random.Random):
    """Homogeneous generators vanishing at a direction u along which the
    initial-gradient matrix keeps full rank (so every jet lifts)."""
    for _ in range(500):
        n = rng.randint(2, 5)
        p = rng.randint(1, min(3, n - 1))
        u = tuple(Fraction(rng.choice([-2, -1, 1, 2])) for _ in range(n))
        gens = []
        for _ in range(p):
            degree = rng.randint(2, 3)
            acc = Polynomial.zero(n)
            for _k in range(2):
                a, b = rng.sample(range(n), 2)
                ell = Polynomial(
                    n,
                    {
                        tuple(1 if j == a else 0 for j in range(n)): u[b],
                        tuple(1 if j == b else 0 for j in range(n)): -u[a],
                    },
                )
                mono = Polynomial(
                    n,
                    {random_monomial(rng, n, degree - 1): Fraction(rng.choice([1, -1]))},
                )
                acc = acc + mono * ell
            if not acc or not acc.is_homogeneous():
                break
            gens.append(acc)
        if len(gens) != p:
            continue
        rows = [tuple(g.evaluate(u) for g in gen.gradient()) for gen in gens]
        if matrix_rank(rows) != p:
            continue
        return PolySystem(n, Field.RATIONAL, tuple(gens)), u
    raise RuntimeError("cone sampling failed to find a nondegenerate instance")


def random_certified_population(seed: int, count: int):
    """Deterministic mix of smooth graph systems and nondegenerate cones."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        maker = random_smooth_ci if i % 2 == 0 else random_cone
        out.append(maker(rng))
    return out
