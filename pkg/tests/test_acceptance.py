"""Acceptance suite.

Each test mirrors one published criterion, prints a PASS line when it
holds, and pins the stated tolerance (exact arithmetic where exactness is
required, configured sampler thresholds otherwise).  Run with

    pytest tests/test_acceptance.py -v -s
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from helpers import (
    complex_system,
    float_system,
    frac_vec,
    rand_frac,
    random_certified_population,
    rational_system,
)
from jetcone.lifting import CertClass, classify, lift_second_jet, verify_arc
from jetcone.linalg import satisfies
from jetcone.optimality import (
    InfKind,
    OptVerdict,
    SetUsed,
    necessary_check,
    sufficient_check,
    witness_is_valid,
)
from jetcone.poly import parse_polynomial
from jetcone.sampler import Verdict, t2_membership
from jetcone.system import algebraic_t2, jet_space_t2, t2a_system


def report(criterion: int, text: str) -> None:
    print(f"ACCEPTANCE {criterion}: PASS - {text}")


def test_criterion_1_parabola_exactness():
    """t2a is exactly {w2 = 2}, the certificate is the nondegenerate
    hypersurface with witness (0, 1), and the lifted arc is (t, t^2) with
    all residual coefficients exactly zero.  Zero tolerance, < 1 s."""
    started = time.perf_counter()
    parabola = rational_system(2, "y - x^2")
    u = frac_vec(1, 0)

    subspace = algebraic_t2(parabola, u)
    assert subspace.point == frac_vec(0, 2)
    assert subspace.basis == (frac_vec(1, 0),)

    cert = classify(parabola, u)
    assert cert.kind is CertClass.HYPERSURFACE_NONDEG
    assert cert.initial_gradients[0] == frac_vec(0, 1)

    arc = lift_second_jet(parabola, cert, u, frac_vec(0, 2), order=8)
    expected = [frac_vec(0, 0), frac_vec(1, 0), frac_vec(0, 1)] + [frac_vec(0, 0)] * 6
    assert list(arc.series.coeffs) == expected
    (residual,) = verify_arc(parabola, arc.series)
    assert residual.first_nonzero is None  # every computable coefficient is 0

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    report(1, f"parabola t2a/classify/lift exact in {elapsed:.3f}s")


def test_criterion_2_algebraic_side_full_space():
    """The algebraic second-order set of z^2 - x^3*y^3 is all of K^3 for
    every published direction.  Exact, zero tolerance."""
    surface = rational_system(3, "z^2 - x^3*y^3")
    directions = [(1, 1, 0), (1, -1, 0), (0, 1, 0), (1, 0, 0)]
    for u in directions:
        subspace = algebraic_t2(surface, frac_vec(*u))
        assert subspace.is_full_space(), u
        assert subspace.point == frac_vec(0, 0, 0)
    report(2, f"t2a is the full ambient space for all {len(directions)} directions")


GRID3 = (-1.0, 0.0, 1.0)


def test_criterion_3_geometric_side_real_cases():
    """Sampler verdicts reproduce the four published real cases on
    3-point-per-axis grids (sign-law boundaries excluded in cases 3-4),
    with w3 != 0 always rejected.  Configured tolerances, < 30 s."""
    started = time.perf_counter()
    surface = float_system(3, "z^2 - x^3*y^3")
    checked = 0

    def expect(u, w, expected):
        nonlocal checked
        verdict = t2_membership(surface, u, w)
        assert verdict.verdict is expected, (u, w, verdict.verdict)
        checked += 1

    # case 1: u1*u2 > 0 -> members are exactly the w3 = 0 plane
    for w1 in GRID3:
        for w2 in GRID3:
            for w3 in GRID3:
                expected = Verdict.MEMBER if w3 == 0.0 else Verdict.NOT_MEMBER
                expect((1.0, 1.0, 0.0), (w1, w2, w3), expected)

    # case 2: u1*u2 < 0 -> empty
    for w1 in GRID3:
        for w2 in GRID3:
            for w3 in GRID3:
                expect((1.0, -1.0, 0.0), (w1, w2, w3), Verdict.NOT_MEMBER)

    # case 3: u = (0,1,0) -> sign law w1*u2 >= 0 (w1 = 0 boundary excluded)
    for w1 in (-1.0, 1.0):
        for w2 in GRID3:
            for w3 in GRID3:
                expected = (
                    Verdict.MEMBER if (w1 > 0 and w3 == 0.0) else Verdict.NOT_MEMBER
                )
                expect((0.0, 1.0, 0.0), (w1, w2, w3), expected)

    # case 4: u = (1,0,0) -> sign law w2*u1 >= 0 (w2 = 0 boundary excluded)
    for w2 in (-1.0, 1.0):
        for w1 in GRID3:
            for w3 in GRID3:
                expected = (
                    Verdict.MEMBER if (w2 > 0 and w3 == 0.0) else Verdict.NOT_MEMBER
                )
                expect((1.0, 0.0, 0.0), (w1, w2, w3), expected)

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    report(3, f"all four real cases, {checked} grid verdicts in {elapsed:.1f}s")


def test_criterion_4_geometric_side_complex_case():
    """Over C the geometric set along u = (1,-1,0) is C^2 x {0}: members on
    the w3 = 0 grid, rejection off it.  < 30 s."""
    started = time.perf_counter()
    surface = complex_system(3, "z^2 - x^3*y^3")
    u = (1 + 0j, -1 + 0j, 0j)
    checked = 0
    for w1 in GRID3:
        for w2 in GRID3:
            verdict = t2_membership(surface, u, (complex(w1), complex(w2), 0j))
            assert verdict.verdict is Verdict.MEMBER, (w1, w2)
            checked += 1
    for w3 in (-1.0, 1.0):
        for w1, w2 in [(0.0, 0.0), (1.0, -1.0), (-1.0, 1.0)]:
            verdict = t2_membership(
                surface, u, (complex(w1), complex(w2), complex(w3))
            )
            assert verdict.verdict is Verdict.NOT_MEMBER, (w1, w2, w3)
            checked += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    report(4, f"complex case, {checked} grid verdicts in {elapsed:.1f}s")


POPULATION = random_certified_population(seed=20250810, count=200)


def test_criterion_5_inclusion_property():
    """200 random certified systems (smooth graph intersections and
    nondegenerate cones, n <= 5, p <= 3, coefficient height <= 10): one
    random admissible jet each lifts and its (u, w) satisfies the affine
    system exactly.  200/200."""
    rng = random.Random(5)
    successes = 0
    for system, u in POPULATION:
        cert = classify(system, u)
        assert cert.kind is not CertClass.NONE
        subspace = algebraic_t2(system, u)
        weights = [rand_frac(rng, -5, 5, 5) for _ in subspace.basis]
        w = subspace.element(weights)
        arc = lift_second_jet(system, cert, u, w, order=8)
        reports = verify_arc(system, arc.series)
        assert all(r.clean for r in reports)
        extracted_u = arc.series.coeffs[1]
        extracted_w = tuple(2 * c for c in arc.series.coeffs[2])
        rows, rhs = t2a_system(system, u)
        assert extracted_u == tuple(u)
        assert satisfies(rows, rhs, extracted_w)
        successes += 1
    assert successes == 200
    report(5, "inclusion verified exactly on 200/200 certified systems")


def test_criterion_6_surjectivity_realization():
    """Same 200 systems: five random jets each drawn from the jet space all
    lift CLEAN through order 8.  1000/1000, exact."""
    rng = random.Random(6)
    lifts = 0
    for system, u in POPULATION:
        cert = classify(system, u)
        subspace = jet_space_t2(system, u)
        for _ in range(5):
            weights = [rand_frac(rng, -5, 5, 5) for _ in subspace.basis]
            w = subspace.element(weights)
            arc = lift_second_jet(system, cert, u, w, order=8)
            reports = verify_arc(system, arc.series)
            assert all(r.clean for r in reports), (system.generators, u, w)
            lifts += 1
    assert lifts == 1000
    report(6, "1000/1000 jet-space jets lifted clean through order 8")


def test_criterion_7_optimality_pipeline():
    """f = y on the parabola: SUFFICIENT_HOLDS with infimum exactly 2 at
    u = (1,0) and u = (-1,0); f = -y: NECESSARY_FAILS with an exact
    witness; f = z on the surface: -infinity over the algebraic set,
    flagged inconclusive, with sampler-corroborated geometric infimum 0."""
    parabola = rational_system(2, "y - x^2")
    objective = parse_polynomial("y", 2)
    for u in (frac_vec(1, 0), frac_vec(-1, 0)):
        result = sufficient_check(parabola, objective, u)
        assert result.verdict is OptVerdict.SUFFICIENT_HOLDS
        assert result.infimum.kind is InfKind.FINITE
        assert result.infimum.value == Fraction(2)
        assert result.margin == Fraction(2)

    negated = parse_polynomial("-y", 2)
    failing = necessary_check(parabola, negated, frac_vec(1, 0))
    assert failing.verdict is OptVerdict.NECESSARY_FAILS
    assert failing.infimum.value == Fraction(-2)
    assert failing.witness == frac_vec(0, 2)
    assert witness_is_valid(parabola, frac_vec(1, 0), failing, negated)

    surface = rational_system(3, "z^2 - x^3*y^3")
    height = parse_polynomial("z", 3)
    uncertified = necessary_check(surface, height, frac_vec(1, 1, 0), seed=0)
    assert uncertified.certificate.kind is CertClass.NONE
    assert uncertified.infimum.kind is InfKind.NEG_INF
    assert any("inconclusive" in note for note in uncertified.notes)
    assert uncertified.set_used is SetUsed.GEOMETRIC_SAMPLED
    assert uncertified.verdict is OptVerdict.NECESSARY_HOLDS
    assert uncertified.evidence == "numerical"
    assert uncertified.sampled_infimum == pytest.approx(0.0, abs=1e-9)
    report(7, "parabola sufficiency margin 2, exact witness, sampled infimum 0")


def test_criterion_8_quadratic_growth_spot_check():
    """For the sufficient case, 20 lifted arcs satisfy the quadratic growth
    bound f(gamma(t)) >= (margin/4) t^2 at t = 2^-4 .. 2^-12, exactly."""
    parabola = rational_system(2, "y - x^2")
    u = frac_vec(1, 0)
    cert = classify(parabola, u)
    margin = Fraction(2)
    growth = margin / 4
    ts = [Fraction(1, 2**j) for j in range(4, 13)]
    arcs = 0
    for k in range(20):
        w1 = Fraction(k - 10, 2)
        arc = lift_second_jet(parabola, cert, u, (w1, Fraction(2)), order=8)
        # the objective is y, so f(gamma(t)) is the second coordinate series
        y_coeffs = [vec[1] for vec in arc.series.coeffs]
        for t in ts:
            value = sum(c * t**k2 for k2, c in enumerate(y_coeffs))
            assert value >= growth * t * t, (w1, t, value)
        arcs += 1
    assert arcs == 20
    report(8, "quadratic growth holds on 20 arcs at 9 scales each, exactly")
