"""Randomised and corpus-wide checks of the structural facts the checkers rely on.

Random instances live in k[x, y, z] with generators of degree at most 3. Work
is metered; an instance whose computation runs out of budget is dropped
rather than counted as evidence either way.
"""
import json
import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from aluffi import (BudgetExceeded, DegreeCapExceeded, GeneratorCapExceeded, Ideal,
                    PreconditionError, Verdict, atf_exact, atf_truncated, budget, ideal_intersect,
                    ideal_power, ideal_product, ideal_subset, nested_sufficiency,
                    perturbation_check, polynomial_ring, residual_criterion, standard_base_test,
                    sum_criterion, transfer_criterion, verify_witness)
from aluffi.atf import quotient_pair, working_generators
from aluffi.cli import Job, shipped_corpus
from test_groebner import small_polys

R, x, y, z = polynomial_ring("x y z")
STEPS = 4000
OUT_OF_BUDGET = (BudgetExceeded, DegreeCapExceeded, GeneratorCapExceeded)
RANDOM = settings(max_examples=50, deadline=None, derandomize=True,
                  suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


def sub_ideal(draw, I_gens):
    """Multiples of some of ``I_gens``; a factor taken from I itself makes
    ``J ⊆ I^2`` locally, which is where the property tends to fail."""
    gens = []
    for g in I_gens:
        if draw(st.booleans()) or not gens:
            mult = draw(st.one_of(st.just(R.one()), small_polys(R, 1, 2),
                                  st.sampled_from(I_gens)))
            gens.append(mult * g)
    return Ideal(R, gens)


@st.composite
def pairs(draw, max_gens=3):
    """``J ⊆ I`` with J built from multiples of I's generators."""
    I_gens = draw(st.lists(small_polys(R, 2, 2), min_size=1, max_size=max_gens))
    return sub_ideal(draw, I_gens), Ideal(R, I_gens)


@st.composite
def triples(draw):
    """``J1, J2 ⊆ I`` drawn inside one I."""
    I_gens = draw(st.lists(small_polys(R, 2, 2), min_size=1, max_size=3))
    return sub_ideal(draw, I_gens), sub_ideal(draw, I_gens), Ideal(R, I_gens)


LINEAR_FORMS = [x, y, z, x + y, x - 2 * z, y + 3 * z]


@st.composite
def transfer_triples(draw):
    """``J1 = (l)`` for a linear form l, J2 from the other generators of I."""
    ell = draw(st.sampled_from(LINEAR_FORMS))
    others = draw(st.lists(small_polys(R, 2, 2), min_size=1, max_size=2))
    return Ideal(R, [ell]), sub_ideal(draw, others), Ideal(R, [ell] + others)


def metered(fn, *args, **kw):
    """``fn(*args)`` under a step budget; None when the budget runs out."""
    try:
        with budget(max_steps=STEPS):
            return fn(*args, **kw)
    except OUT_OF_BUDGET:
        return None


def decided(cert):
    return cert is not None and cert.verdict is not Verdict.UNDECIDED


def adjoin_variable(A: Ideal, name="w") -> Ideal:
    ring = A.ring.polynomial_ring(A.ring.vars + (name,), order=None)
    return Ideal(ring, [g.embed(ring) for g in A.gens])


# -- corpus pairs --------------------------------------------------------------------

def corpus_pairs():
    out = []
    for path in sorted(shipped_corpus().glob("*.json")):
        data = json.loads(path.read_text())
        if data.get("command") not in ("check", "strong", "colon"):
            continue
        job = Job(data)
        params = job.params
        J, I = job.param_ideal("J", "J"), job.param_ideal("I", "I")
        exact = data["expect"] if data["command"] == "check" else None
        if params.get("mode") == "truncated":
            exact = None
        out.append(pytest.param(J, I, exact, id=path.stem))
    return out


CORPUS = corpus_pairs()


# -- J I^(n-1) ⊆ J ∩ I^n -------------------------------------------------------------

def _product_inside_intersection(J, I, top=3):
    for n in range(2, top + 1):
        In = ideal_power(I, n)
        assert ideal_subset(ideal_product(J, ideal_power(I, n - 1)), ideal_intersect(J, In))


@RANDOM
@given(pairs())
def test_product_lies_in_intersection(pair):
    metered(_product_inside_intersection, *pair)


@pytest.mark.parametrize("J, I, expect", CORPUS)
def test_product_lies_in_intersection_on_corpus(J, I, expect):
    metered(_product_inside_intersection, J, I, 2)


# -- FALSE certificates carry real witnesses -------------------------------------------

def _witness_is_sound(cert, J, I):
    if cert.verdict is Verdict.FALSE:
        assert verify_witness(J, I, cert.failing_degree, cert.witness)


@RANDOM
@given(pairs())
def test_false_witnesses_verify(pair):
    J, I = pair
    for cert in (atf_truncated(J, I, 3, budget_steps=STEPS), atf_exact(J, I, budget_steps=STEPS)):
        _witness_is_sound(cert, J, I)


@pytest.mark.parametrize("J, I, expect", CORPUS)
def test_false_witnesses_verify_on_corpus(J, I, expect):
    _witness_is_sound(atf_truncated(J, I, 3, budget_steps=20 * STEPS), J, I)


# -- exact and truncated agree -----------------------------------------------------------

def _exact_and_truncated_agree(J, I, N=3, steps=STEPS):
    exact = atf_exact(J, I, budget_steps=steps)
    trunc = atf_truncated(J, I, N, budget_steps=steps)
    if decided(exact) and decided(trunc):
        if trunc.verdict is Verdict.FALSE:
            assert exact.verdict is Verdict.FALSE
            assert exact.failing_degree <= trunc.failing_degree
        if exact.verdict is Verdict.TRUE:
            assert trunc.verdict is Verdict.TRUE
    return exact


@RANDOM
@given(pairs())
def test_exact_and_truncated_agree(pair):
    _exact_and_truncated_agree(*pair)


@pytest.mark.parametrize("J, I, expect", CORPUS)
def test_exact_and_truncated_agree_on_corpus(J, I, expect):
    exact = _exact_and_truncated_agree(J, I, steps=50 * STEPS)
    if expect is not None and decided(exact):
        assert exact.verdict.value == expect


# -- standard bases with valuation one are sufficient -------------------------------------

def _standard_base_implies_atf(J, I):
    J = Ideal(J.ring, J.nonzero_gens())
    if not J.gens:
        return
    report = metered(standard_base_test, list(J.gens), working_generators(I))
    if report is None or report.verdict is not Verdict.TRUE:
        return
    if all(v == 1 for v in report.valuations):
        exact = atf_exact(J, I, budget_steps=50 * STEPS)
        assert exact.verdict is not Verdict.FALSE
        if decided(exact):
            assert exact.verdict is Verdict.TRUE


@RANDOM
@given(pairs())
def test_standard_base_sufficiency(pair):
    _standard_base_implies_atf(*pair)


@pytest.mark.parametrize("J, I, expect", CORPUS)
def test_standard_base_sufficiency_on_corpus(J, I, expect):
    _standard_base_implies_atf(J, I)


# -- quotient transfer ------------------------------------------------------------------

def _random_subideal(J: Ideal, rng: random.Random) -> Ideal:
    gens = J.nonzero_gens()
    picked = rng.sample(gens, rng.randint(1, len(gens)))
    mults = [R.one(), x, y - z, 2 * x + y]
    return Ideal(J.ring, [g * mults[rng.randrange(len(mults))].embed(J.ring)
                          if J.ring.vars == R.vars else g for g in picked])


def _quotient_keeps_atf(J, I, a):
    qJ, qI = quotient_pair(J, I, a)
    cert = atf_truncated(qJ, qI, 3, budget_steps=20 * STEPS)
    assert cert.verdict is not Verdict.FALSE, cert.evidence


@RANDOM
@given(pairs(), st.randoms(use_true_random=False))
def test_quotient_transfer(pair, rng):
    J, I = pair
    if not J.nonzero_gens() or atf_exact(J, I, budget_steps=STEPS).verdict is not Verdict.TRUE:
        return
    _quotient_keeps_atf(J, I, _random_subideal(J, rng))


@pytest.mark.parametrize("J, I, expect", [p for p in CORPUS if p.values[2] == "TRUE"])
def test_quotient_transfer_on_corpus(J, I, expect):
    _quotient_keeps_atf(J, I, _random_subideal(J, random.Random(7)))


# -- adjoining a variable ------------------------------------------------------------------

def _adjunction_keeps_verdict(J, I, steps=STEPS):
    before = atf_exact(J, I, budget_steps=steps)
    if not decided(before):
        return
    after = atf_exact(adjoin_variable(J), adjoin_variable(I), budget_steps=4 * steps)
    if decided(after):
        assert after.verdict is before.verdict


@RANDOM
@given(pairs())
def test_variable_adjunction(pair):
    _adjunction_keeps_verdict(*pair)


@pytest.mark.parametrize("J, I, expect", CORPUS)
def test_variable_adjunction_on_corpus(J, I, expect):
    _adjunction_keeps_verdict(J, I, 50 * STEPS)


# -- criteria agree with their statements ----------------------------------------------------

def _consistent(run, *args, **kw):
    try:
        cert = metered(run, *args, **kw)
    except PreconditionError:
        return None
    if cert is not None:
        assert cert.details.get("consistent") is not False, cert.details
    return cert


@RANDOM
@given(triples())
def test_sum_criterion(triple):
    _consistent(sum_criterion, *triple, budget_steps=STEPS)


@RANDOM
@given(st.lists(small_polys(R, 2, 2), min_size=1, max_size=2),
       st.lists(small_polys(R, 2, 2), min_size=1, max_size=2))
def test_residual_criterion(g1, g2):
    _consistent(residual_criterion, Ideal(R, g1), Ideal(R, g2), 3, budget_steps=STEPS)


@RANDOM
@given(pairs(), st.lists(small_polys(R, 1, 2), min_size=3, max_size=3))
def test_perturbation_criterion(pair, coeffs):
    J1, I = pair
    I2 = ideal_power(I, 2).nonzero_gens()
    shifted = [f + c * I2[i % len(I2)] for i, (f, c) in enumerate(zip(J1.gens, coeffs))]
    _consistent(perturbation_check, J1, Ideal(R, shifted), I, 2, budget_steps=STEPS)


@RANDOM
@given(pairs(), small_polys(R, 1, 2))
def test_nested_criterion(pair, mult):
    J2, I = pair
    J1 = Ideal(R, [mult * g for g in J2.gens[:1]])
    _consistent(nested_sufficiency, J1, J2, I, 3, budget_steps=STEPS)


@RANDOM
@given(transfer_triples())
def test_transfer_criterion(triple):
    _consistent(transfer_criterion, *triple, budget_steps=STEPS)


@pytest.mark.parametrize("name", ["sum", "residual", "perturbation", "nested", "transfer"])
def test_criteria_on_corpus(name):
    from aluffi.cli import execute
    data = json.loads((shipped_corpus() / f"criterion_{name}.json").read_text())
    cert = execute(Job(data))
    assert cert.details.get("consistent") is not False
