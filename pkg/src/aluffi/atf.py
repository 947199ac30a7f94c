"""Decision procedures and criteria for the equalities ``J ∩ I^n = J I^(n-1)``.

Every check returns a :class:`Certificate`.  Only :func:`atf_exact` (and the
checks that call it) decides the equalities for every ``n`` at once; the
truncated checks confirm them up to a bound or refute them with a witness.

For the criteria checkers (sum, residual, perturbation, nested, transfer)
the certificate verdict is always the exact verdict of the pair the
criterion is about, and ``details["consistent"]`` records whether the
criterion's statement held on this instance.
"""

from __future__ import annotations

import contextlib
import hashlib
import itertools
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .blowup import (Verdict, aluffi_presentation, form_ideal, associated_graded_presentation,
                     nu_valuation, power_tower, quotient_rees_presentation)
from .errors import BudgetExceeded, DegreeCapExceeded, PreconditionError
from .groebner import budget, current_budget
from .ideal import Ideal, ideal_equal, ideal_intersect, ideal_product, ideal_quotient, ideal_sum
from .modules import (inclusion_mod, power_scale_submodule, submodule_intersect, syzygy_module)
from .ring import Polynomial

DEFAULT_N = 5


# --------------------------------------------------------------------------
# certificates
# --------------------------------------------------------------------------

def ideal_fingerprint(A: Ideal) -> str:
    payload = json.dumps({"ring": A.ring.describe(), "gens": A.describe()}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def describe_pair(**ideals) -> dict:
    out = {}
    ring = None
    for name, A in ideals.items():
        if A is None:
            continue
        ring = A.ring
        out[name] = {"gens": A.describe(), "hash": ideal_fingerprint(A)}
    if ring is not None:
        out["ring"] = ring.describe()
    return out


@dataclass
class Certificate:
    check: str
    inputs: dict
    verdict: Verdict
    evidence: list = field(default_factory=list)
    criterion: str = ""
    stats: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict is Verdict.TRUE

    @property
    def witness(self):
        for rec in self.evidence:
            if rec.get("equal") is False and rec.get("witness"):
                return rec["witness"]
        return None

    @property
    def failing_degree(self):
        for rec in self.evidence:
            if rec.get("equal") is False:
                return rec["n"]
        return None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict.value
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        return cls(d["check"], d.get("inputs", {}), Verdict(d["verdict"]), list(d.get("evidence", [])),
                   d.get("criterion", ""), dict(d.get("stats", {})), dict(d.get("details", {})))


@contextlib.contextmanager
def _metered(budget_ms=None, budget_steps=None):
    """Reuse the caller's budget when no limits are given, so outer limits still apply."""
    outer = current_budget()
    if outer is not None and budget_ms is None and budget_steps is None:
        start_steps, start = outer.steps, time.perf_counter()
        stats = {}
        try:
            yield stats
        finally:
            stats["ms"] = round((time.perf_counter() - start) * 1000.0, 3)
            stats["gb_steps"] = outer.steps - start_steps
        return
    with budget(max_steps=budget_steps, max_ms=budget_ms) as b:
        stats = {}
        try:
            yield stats
        finally:
            stats["ms"] = round(b.elapsed_ms, 3)
            stats["gb_steps"] = b.steps


def _undecided(check, inputs, evidence, stats, reason, criterion=""):
    return Certificate(check, inputs, Verdict.UNDECIDED, evidence, criterion, stats,
                       {"reason": reason})


def require_subset(J: Ideal, I: Ideal, what="J") -> None:
    for g in J.nonzero_gens():
        if not I.contains(g):
            raise PreconditionError(f"{what} is not contained in I: {g} is not in I", witness=g)


def _pick_witness(candidates: Sequence[Polynomial], lower: Ideal):
    outside = [g for g in candidates if not lower.contains(g)]
    if not outside:
        return None
    best = min(outside, key=lambda g: (g.degree(), len(g), str(g)))
    return best.primitive() if best.ring.characteristic == 0 else best.monic()


# --------------------------------------------------------------------------
# truncated and exact checks
# --------------------------------------------------------------------------

def truncated_evidence(J: Ideal, I: Ideal, N: int) -> list:
    """Per-degree records up to ``N``, stopping at the first failure.

    ``J I^(n-1) ⊆ J ∩ I^n`` always holds, so equality is tested by putting
    each generator of the intersection into the product.
    """
    tower = power_tower(I)
    evidence = [{"n": 1, "equal": True}]
    for n in range(2, N + 1):
        inter = ideal_intersect(J, tower[n])
        lower = ideal_product(J, tower[n - 1])
        w = _pick_witness(inter.nonzero_gens(), lower)
        if w is None:
            evidence.append({"n": n, "equal": True})
        else:
            evidence.append({"n": n, "equal": False, "witness": str(w)})
            break
    return evidence[:N]


def atf_truncated(J: Ideal, I: Ideal, N: int = DEFAULT_N, *, budget_ms=None,
                  budget_steps=None) -> Certificate:
    """Check ``J ∩ I^n = J I^(n-1)`` for ``n = 1..N``; TRUE only means "up to N"."""
    if N < 1:
        raise ValueError("N must be at least 1")
    require_subset(J, I)
    inputs = describe_pair(J=J, I=I)
    inputs["N"] = N
    evidence: list = []
    with _metered(budget_ms, budget_steps) as stats:
        try:
            evidence = truncated_evidence(J, I, N)
        except (BudgetExceeded, DegreeCapExceeded) as exc:
            done = len(evidence)
            evidence.append({"n": done + 1, "equal": None})
            reason = str(exc)
        else:
            reason = None
    if reason is not None:
        return _undecided("truncated", inputs, evidence, stats, reason, "per-degree")
    failed = any(rec["equal"] is False for rec in evidence)
    return Certificate("truncated", inputs, Verdict.of(not failed), evidence,
                       f"per-degree up to {N}", stats)


def _presentation_verdict(J: Ideal, I: Ideal, method: str = "evaluation"):
    """Exact verdict plus evidence from the quotient Rees presentation.

    The Aluffi ideal ``A`` is always contained in the quotient Rees ideal
    ``Q``, and a T-homogeneous ``h`` of degree ``n`` in ``Q`` lies in ``A``
    exactly when ``h(f_1, ..., f_t)`` lies in ``J I^(n-1)``.  ``"evaluation"``
    tests that membership for the components of a basis of ``Q``;
    ``"presentations"`` builds ``A`` and tests ``Q ⊆ A`` directly.  Either
    way a failing ``h`` evaluates to a witness in ``J ∩ I^n`` outside
    ``J I^(n-1)``.
    """
    if method not in ("evaluation", "presentations"):
        raise ValueError(f"unknown method {method!r}")
    Q = quotient_rees_presentation(J, I)
    weights = Q.t_weights()
    if method == "presentations":
        A = aluffi_presentation(J, I)

        def inside(n, h):
            return A.defining.contains(h)
    else:
        tower = power_tower(I)
        lower: dict = {}

        def inside(n, h):
            if n == 1:
                return True
            if n not in lower:
                lower[n] = ideal_product(J, tower[n - 1])
            return lower[n].contains(evaluate_form(h, Q, I.ring))

    degrees = set()
    bad = []
    for g in Q.defining.groebner_basis():
        for n, h in sorted(g.homogeneous_components(weights).items()):
            if n < 1:
                continue
            degrees.add(n)
            if not inside(n, h):
                bad.append((n, h))
    details = {"method": method, "quotient_rees_gb_size": len(Q.defining.groebner_basis()),
               "generator_degrees": sorted(degrees)}
    if not bad:
        evidence = [{"n": n, "equal": True} for n in sorted(degrees)]
        return True, evidence, details
    n = min(d for d, _ in bad)
    values = [_normalize(evaluate_form(h, Q, I.ring)) for d, h in bad if d == n]
    witness = min(values, key=lambda f: (f.degree(), len(f), str(f)))
    evidence = [{"n": m, "equal": True} for m in sorted(degrees) if m < n]
    evidence.append({"n": n, "equal": False, "witness": str(witness)})
    return False, evidence, details


def working_generators(I: Ideal) -> Ideal:
    """``I`` with redundant generators dropped; the equalities only depend on the ideal."""
    slim = I.minimalized()
    return slim if len(slim.gens) < len(I.gens) else I


def _normalize(f: Polynomial) -> Polynomial:
    return f.primitive() if f.ring.characteristic == 0 else f.monic()


def evaluate_form(h: Polynomial, alg, ring) -> Polynomial:
    """``h(x, f_1, ..., f_t)``: substitute the generators for the T-variables."""
    images = [ring.gen(v).lift() for v in alg.base_vars] + [f.lift() for f in alg.generators]
    value = h.substitute(images, ring.cover)
    return value.embed(ring) if ring.quotient else value


def atf_exact(J: Ideal, I: Ideal, *, method: str = "evaluation", budget_ms=None,
              budget_steps=None) -> Certificate:
    """Decide ``J ∩ I^n = J I^(n-1)`` for all ``n`` at once.

    The Aluffi algebra and the quotient Rees algebra of the pair coincide
    exactly when all the equalities hold; see :func:`_presentation_verdict`.
    """
    require_subset(J, I)
    inputs = describe_pair(J=J, I=I)
    with _metered(budget_ms, budget_steps) as stats:
        try:
            ok, evidence, details = _presentation_verdict(J, working_generators(I), method)
        except (BudgetExceeded, DegreeCapExceeded) as exc:
            reason = str(exc)
        else:
            reason = None
    if reason is not None:
        return _undecided("exact", inputs, [], stats, reason, "presentation-equality")
    return Certificate("exact", inputs, Verdict.of(ok), evidence, "presentation-equality",
                       stats, details)


# --------------------------------------------------------------------------
# strongly ATF
# --------------------------------------------------------------------------

def prefixes(J: Ideal) -> list:
    gens = J.nonzero_gens()
    return [Ideal(J.ring, gens[:i]) for i in range(1, len(gens) + 1)]


def strongly_atf(J: Ideal, I: Ideal, *, permutations: bool = False, budget_ms=None,
                 budget_steps=None) -> Certificate:
    """Every prefix ``(f_1..f_i)`` of the generator list must pass :func:`atf_exact`.

    With ``permutations=True`` all orders of at most six generators are
    tried and the verdict is TRUE when some order works.
    """
    require_subset(J, I)
    inputs = describe_pair(J=J, I=I)
    gens = J.nonzero_gens()
    if permutations:
        if len(gens) > 6:
            raise PreconditionError("permutation mode supports at most six generators")
        orders = {}
        verdict = Verdict.FALSE
        with _metered(budget_ms, budget_steps) as stats:
            for perm in itertools.permutations(range(len(gens))):
                cert = strongly_atf(Ideal(J.ring, [gens[i] for i in perm]), I)
                orders[",".join(map(str, perm))] = cert.verdict.value
                if cert.verdict is Verdict.TRUE:
                    verdict = Verdict.TRUE
                elif cert.verdict is Verdict.UNDECIDED and verdict is Verdict.FALSE:
                    verdict = Verdict.UNDECIDED
        return Certificate("strong", inputs, verdict, [], "some generator order", stats,
                           {"orders": orders})
    evidence = []
    with _metered(budget_ms, budget_steps) as stats:
        for i, P in enumerate(prefixes(J), start=1):
            cert = atf_exact(P, I)
            rec = {"prefix": i, "verdict": cert.verdict.value}
            if cert.verdict is Verdict.FALSE:
                rec.update(n=cert.failing_degree, equal=False, witness=cert.witness)
                evidence.append(rec)
                return Certificate("strong", inputs, Verdict.FALSE, evidence, "prefix-exact",
                                   stats, {"failing_prefix": i})
            if cert.verdict is Verdict.UNDECIDED:
                evidence.append(rec)
                return Certificate("strong", inputs, Verdict.UNDECIDED, evidence, "prefix-exact",
                                   stats, {"undecided_prefix": i})
            evidence.append(rec)
    return Certificate("strong", inputs, Verdict.TRUE, evidence, "prefix-exact", stats)


def colon_criterion(J: Ideal, I: Ideal, *, budget_ms=None, budget_steps=None) -> Certificate:
    """Strong ATF from ATF plus ``(J_i : f_(i+1)) = J_i`` for every proper prefix."""
    require_subset(J, I)
    inputs = describe_pair(J=J, I=I)
    gens = J.nonzero_gens()
    with _metered(budget_ms, budget_steps) as stats:
        base = atf_exact(J, I)
        colons = []
        for i in range(1, len(gens)):
            Ji = Ideal(J.ring, gens[:i])
            colons.append({"prefix": i, "holds": ideal_equal(ideal_quotient(Ji, gens[i]), Ji)})
    details = {"atf": base.verdict.value, "colons": colons,
               "failing_colons": [c["prefix"] for c in colons if not c["holds"]]}
    if base.verdict is Verdict.FALSE:
        # the full generator list is itself a prefix
        return Certificate("colon", inputs, Verdict.FALSE, base.evidence, "full pair fails",
                           stats, details)
    if base.verdict is Verdict.TRUE and all(c["holds"] for c in colons):
        return Certificate("colon", inputs, Verdict.TRUE, [], "colon-equalities", stats, details)
    return Certificate("colon", inputs, Verdict.UNDECIDED, [], "inconclusive", stats, details)


# --------------------------------------------------------------------------
# criteria from the theory, checked instance by instance
# --------------------------------------------------------------------------

def _embed_in(A: Ideal, ring) -> Ideal:
    return Ideal(ring, [g.embed(ring) for g in A.gens])


def quotient_pair(J: Ideal, I: Ideal, modulus: Ideal):
    ring = J.ring.with_quotient(modulus.nonzero_gens())
    return _embed_in(J, ring), _embed_in(I, ring)


def _three_valued_and(*vs):
    if any(v is Verdict.FALSE for v in vs):
        return Verdict.FALSE
    if any(v is Verdict.UNDECIDED for v in vs):
        return Verdict.UNDECIDED
    return Verdict.TRUE


def sum_criterion(J1: Ideal, J2: Ideal, I: Ideal, *, budget_ms=None,
                  budget_steps=None) -> Certificate:
    """For ATF pairs ``J1, J2 ⊆ I``: ``J1+J2`` is ATF iff ``J1`` is ATF modulo ``J2``."""
    require_subset(J1, I, "J1")
    require_subset(J2, I, "J2")
    inputs = describe_pair(J1=J1, J2=J2, I=I)
    with _metered(budget_ms, budget_steps) as stats:
        c1, c2 = atf_exact(J1, I), atf_exact(J2, I)
        for name, c in (("J1", c1), ("J2", c2)):
            if c.verdict is not Verdict.TRUE:
                raise PreconditionError(f"{name} ⊆ I is not ATF ({c.verdict.value})",
                                        witness=c.witness)
        total = atf_exact(ideal_sum(J1, J2), I)
        qJ, qI = quotient_pair(J1, I, J2)
        modular = atf_exact(qJ, qI)
    decided = Verdict.UNDECIDED not in (total.verdict, modular.verdict)
    details = {"sum": total.verdict.value, "quotient": modular.verdict.value,
               "consistent": (total.verdict == modular.verdict) if decided else None}
    return Certificate("sum", inputs, total.verdict, total.evidence, "sum-equivalence", stats,
                       details)


def residual_criterion(J1: Ideal, J2: Ideal, N: int = DEFAULT_N, *, budget_ms=None,
                       budget_steps=None) -> Certificate:
    """With ``I = J1 + J2`` and ``J1`` generated outside ``I^2``, compare
    ``J1 ∩ I^n = J1 I^(n-1)`` with ``J1 ∩ J2^n ⊆ J1 I^(n-1)`` for ``n <= N``,
    and report whether ``gr_I(R)/J1*`` equals ``gr_(I/J1)(R/J1)``.
    """
    I = ideal_sum(J1, J2)
    for g in J1.nonzero_gens():
        nu = nu_valuation(g, I, cap=2)
        if nu != 1:
            raise PreconditionError(f"generator {g} of J1 lies in I^2", witness=g)
    inputs = describe_pair(J1=J1, J2=J2, I=I)
    inputs["N"] = N
    with _metered(budget_ms, budget_steps) as stats:
        track_a = atf_truncated(J1, I, N)
        tower_I, tower_2 = power_tower(I), power_tower(J2)
        track_b = []
        for n in range(1, N + 1):
            left = ideal_intersect(J1, tower_2[n])
            right = ideal_product(J1, tower_I[n - 1])
            track_b.append({"n": n, "equal": left.issubset(right)})
        gr_match = _residual_gr(J1, I)
    b_ok = all(r["equal"] for r in track_b)
    a_ok = track_a.verdict is Verdict.TRUE
    details = {"track_b": track_b, "graded_isomorphism": gr_match,
               "consistent": a_ok == b_ok}
    return Certificate("residual", inputs, track_a.verdict, track_a.evidence,
                       f"residual-equivalence up to {N}", stats, details)


def _residual_gr(J1: Ideal, I: Ideal) -> bool:
    """Whether ``J1*`` together with ``gr_I(R)`` presents ``gr_(I/J1)(R/J1)``."""
    star = form_ideal(J1, I).ideal
    _, qI = quotient_pair(J1, I, J1)
    gr_bar = associated_graded_presentation(qI)
    target = Ideal(star.ring, [g.embed(star.ring) for g in gr_bar.defining.gens])
    return ideal_equal(star, target)


def perturbation_check(J1: Ideal, J2: Ideal, I: Ideal, N: int = 2, *, budget_ms=None,
                       budget_steps=None) -> Certificate:
    """``J1 = (f_i)`` ATF and ``f_i - g_i ∈ I^2``: ``J2 = (g_i)`` is ATF iff
    ``Z1 ∩ I^n R^m ⊆ Z2 + I^(n+1) R^m`` for all ``n >= 0`` (tested for ``n <= N``).
    """
    fs, gs = list(J1.gens), list(J2.gens)
    if len(fs) != len(gs):
        raise PreconditionError("J1 and J2 need the same number of generators")
    require_subset(J1, I, "J1")
    require_subset(J2, I, "J2")
    tower = power_tower(I)
    for i, (f, g) in enumerate(zip(fs, gs)):
        if not tower[2].contains(f - g):
            raise PreconditionError(f"generator {i}: {f - g} is not in I^2", witness=i)
    inputs = describe_pair(J1=J1, J2=J2, I=I)
    inputs["N"] = N
    m = len(fs)
    with _metered(budget_ms, budget_steps) as stats:
        base = atf_exact(J1, I)
        target = atf_exact(J2, I)
        Z1, Z2 = syzygy_module(fs), syzygy_module(gs)
        inclusions = []
        for n in range(N + 1):
            part = Z1 if n == 0 else submodule_intersect(Z1, power_scale_submodule(I, n, m, tower))
            holds = inclusion_mod(part, Z2, power_scale_submodule(I, n + 1, m, tower))
            inclusions.append({"n": n, "holds": holds})
    all_hold = all(r["holds"] for r in inclusions)
    details = {"base": base.verdict.value, "inclusions": inclusions}
    if base.verdict is not Verdict.TRUE:
        details["consistent"] = None
        details["reason"] = "J1 ⊆ I is not certified ATF; the statement does not apply"
    elif target.verdict is Verdict.UNDECIDED:
        details["consistent"] = None
    else:
        # truncated inclusions are necessary for ATF; failures refute it
        details["consistent"] = all_hold if target.verdict is Verdict.TRUE else True
        details["refuted_by_inclusions"] = not all_hold
    return Certificate("perturbation", inputs, target.verdict, target.evidence,
                       "syzygy-perturbation", stats, details)


def nested_sufficiency(J1: Ideal, J2: Ideal, I: Ideal, N: int = DEFAULT_N, *, budget_ms=None,
                       budget_steps=None) -> Certificate:
    """For ``J1 ⊆ J2 ⊆ I``: ``J1 ∩ J2^n = J1 J2^(n-1)`` and
    ``I^n ⊆ J2^n + J1`` for all ``n`` imply that ``J1 ⊆ I`` is ATF.
    """
    require_subset(J1, J2, "J1")
    require_subset(J2, I, "J2")
    inputs = describe_pair(J1=J1, J2=J2, I=I)
    inputs["N"] = N
    with _metered(budget_ms, budget_steps) as stats:
        t1, t2 = power_tower(I), power_tower(J2)
        hyp_intersection, hyp_cover = [], []
        for n in range(1, N + 1):
            hyp_intersection.append({"n": n, "holds": ideal_equal(
                ideal_intersect(J1, t2[n]), ideal_product(J1, t2[n - 1]))})
            hyp_cover.append({"n": n, "holds": t1[n].issubset(ideal_sum(t2[n], J1))})
        target = atf_exact(J1, I)
    holds = all(r["holds"] for r in hyp_intersection + hyp_cover)
    details = {"intersection_hypothesis": hyp_intersection, "cover_hypothesis": hyp_cover,
               "hypotheses_hold": holds}
    if holds and target.verdict is not Verdict.UNDECIDED:
        details["consistent"] = target.verdict is Verdict.TRUE
    else:
        details["consistent"] = None
    criterion = "nested-sufficiency" if holds else "presentation-equality (hypotheses fail)"
    return Certificate("nested", inputs, target.verdict, target.evidence, criterion, stats, details)


def regular_sequence(gens: Sequence[Polynomial], modulus: Ideal) -> dict:
    """Colon chain ``((modulus, f_1..f_(i-1)) : f_i) = (modulus, f_1..f_(i-1))`` plus properness."""
    chain = []
    current = list(modulus.nonzero_gens())
    for i, f in enumerate(gens, start=1):
        P = Ideal(modulus.ring, current)
        chain.append({"index": i, "holds": ideal_equal(ideal_quotient(P, f), P)})
        current.append(f)
    proper = not Ideal(modulus.ring, current).is_unit()
    return {"chain": chain, "proper": proper,
            "holds": proper and all(c["holds"] for c in chain)}


def transfer_criterion(J1: Ideal, J2: Ideal, I: Ideal, *, budget_ms=None,
                       budget_steps=None) -> Certificate:
    """``J2`` is ATF in ``I`` when ``J2`` is ATF modulo ``J1``, ``J1`` is strongly
    ATF for an irredundant generator order, and that order is a regular
    sequence modulo ``J2``.
    """
    require_subset(J1, I, "J1")
    require_subset(J2, I, "J2")
    inputs = describe_pair(J1=J1, J2=J2, I=I)
    gens = J1.nonzero_gens()
    with _metered(budget_ms, budget_steps) as stats:
        qJ, qI = quotient_pair(J2, I, J1)
        hyp_quotient = atf_exact(qJ, qI).verdict
        hyp_strong = strongly_atf(J1, I).verdict if gens else Verdict.TRUE
        regular = regular_sequence(gens, J2)
        irredundant = all(not Ideal(J1.ring, gens[:i] + gens[i + 1:]).contains(g)
                          for i, g in enumerate(gens))
        target = atf_exact(J2, I)
    hyps = {"quotient_atf": hyp_quotient.value, "strongly_atf": hyp_strong.value,
            "regular_sequence": regular, "irredundant": irredundant}
    holds = (_three_valued_and(hyp_quotient, hyp_strong) is Verdict.TRUE
             and regular["holds"] and irredundant)
    failing = [k for k, v in (("quotient_atf", hyp_quotient is Verdict.TRUE),
                              ("strongly_atf", hyp_strong is Verdict.TRUE),
                              ("regular_sequence", regular["holds"]),
                              ("irredundant", irredundant)) if not v]
    details = {"hypotheses": hyps, "hypotheses_hold": holds,
               "first_failing_hypothesis": failing[0] if failing else None}
    if holds and target.verdict is not Verdict.UNDECIDED:
        details["consistent"] = target.verdict is Verdict.TRUE
    else:
        details["consistent"] = None
    criterion = "transfer" if holds else "presentation-equality (hypotheses fail)"
    return Certificate("transfer", inputs, target.verdict, target.evidence, criterion, stats,
                       details)


# --------------------------------------------------------------------------
# re-verification
# --------------------------------------------------------------------------

def verify_witness(J: Ideal, I: Ideal, n: int, witness) -> bool:
    """``witness ∈ J ∩ I^n`` and ``witness ∉ J I^(n-1)``, by membership tests only."""
    w = J._own(witness)
    if not w or n < 2:
        return False
    tower = power_tower(I)
    return (J.contains(w) and tower[n].contains(w)
            and not ideal_product(J, tower[n - 1]).contains(w))
