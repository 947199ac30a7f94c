"""Presentations of blowup algebras, I-adic orders, initial forms and form ideals.

Every algebra is presented as ``R[T_1..T_t] / defining`` (plus ``u`` for the
extended Rees algebra), where ``T_j`` stands for the j-th chosen generator of
``I`` placed in degree one.  Base variables have T-degree zero.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import PreconditionError
from .ideal import (Ideal, PowerTower, _fresh, ideal_equal, ideal_intersect, ideal_product,
                    ring_map_kernel, saturate)
from .modules import lift, syzygy_module
from .ring import MonomialOrder, Polynomial, RingSpec


class Verdict(str, enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNDECIDED = "UNDECIDED"

    @classmethod
    def of(cls, flag: bool) -> "Verdict":
        return cls.TRUE if flag else cls.FALSE


INFINITY = math.inf
UNDECIDED = Verdict.UNDECIDED
DEFAULT_NU_CAP = 32


@dataclass
class PresentedAlgebra:
    """``ring / defining`` with a T-grading (base variables in degree 0)."""

    kind: str
    ring: RingSpec
    defining: Ideal
    base_vars: tuple
    t_vars: tuple
    generators: tuple
    u_var: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def t_degrees(self) -> dict:
        deg = {v: 0 for v in self.base_vars}
        deg.update({v: 1 for v in self.t_vars})
        if self.u_var:
            deg[self.u_var] = -1
        return deg

    def t_weights(self) -> tuple:
        d = self.t_degrees
        return tuple(d[v] for v in self.ring.vars)

    def t_degree(self, f: Polynomial) -> set:
        return f.weighted_degrees(self.t_weights())

    def is_t_homogeneous(self) -> bool:
        w = self.t_weights()
        return all(len(g.weighted_degrees(w)) <= 1 for g in self.defining.groebner_basis())

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "ring": self.ring.describe(),
            "t_vars": list(self.t_vars),
            "generators": [str(g) for g in self.generators],
            "defining": [str(g) for g in self.defining.groebner_basis()],
        }


def t_names(base_vars, count, prefix="T") -> tuple:
    """``T1..Tcount``, renamed with extra underscores if they clash with base variables."""
    taken = set(base_vars)
    while any(f"{prefix}{j}" in taken for j in range(1, count + 1)):
        prefix += "_"
    return tuple(f"{prefix}{j}" for j in range(1, count + 1))


def _chosen(I: Ideal) -> tuple:
    gens = tuple(I.nonzero_gens())
    if not gens:
        raise PreconditionError("the ideal needs at least one nonzero generator")
    return gens


def _extended(R: RingSpec, names: Sequence[str]) -> RingSpec:
    return RingSpec(R.vars + tuple(names), R.characteristic, MonomialOrder(), (), R.degree_cap)


def _graph_target(R: RingSpec, extra_vars, quotient_polys=()) -> RingSpec:
    """Polynomial ring ``R.cover[extra_vars]`` modulo ``R``'s quotient and ``quotient_polys``."""
    cover = RingSpec(R.vars + tuple(extra_vars), R.characteristic, MonomialOrder(), (),
                     R.degree_cap)
    qs = [q.embed(cover) for q in R.quotient] + [q.embed(cover) if q.ring != cover else q
                                                 for q in quotient_polys]
    return RingSpec(cover.vars, cover.characteristic, cover.order, tuple(qs), cover.degree_cap)


# --------------------------------------------------------------------------
# Rees, symmetric, Aluffi and quotient Rees algebras
# --------------------------------------------------------------------------

_PRESENTATION_CACHE: dict = {}


def _cached(key, build):
    hit = _PRESENTATION_CACHE.get(key)
    if hit is None:
        if len(_PRESENTATION_CACHE) > 128:
            _PRESENTATION_CACHE.clear()
        hit = _PRESENTATION_CACHE.setdefault(key, build())
    return hit


def rees_presentation(I: Ideal) -> PresentedAlgebra:
    """Kernel of ``R[T] -> R[t]``, ``T_j -> f_j t``."""
    return _cached(("rees", I.ring, tuple(I.gens)), lambda: _rees(I))


def _rees(I: Ideal) -> PresentedAlgebra:
    R = I.ring
    gens = _chosen(I)
    T = t_names(R.vars, len(gens))
    t = _fresh(set(R.vars) | set(T), "t")
    source = _extended(R.cover, T)
    target = _graph_target(R, [t])
    tt = target.gen(t)
    images = [target.gen(v) for v in R.vars] + [g.lift().embed(target) * tt for g in gens]
    K = ring_map_kernel(source, target, images)
    return PresentedAlgebra("rees", source, K, R.vars, T, gens)


def sym_presentation(I: Ideal) -> PresentedAlgebra:
    """Linear forms ``sum s_i T_i`` over the syzygies ``s`` of the generators."""
    R = I.ring
    gens = _chosen(I)
    T = t_names(R.vars, len(gens))
    S = _extended(R.cover, T)
    Ts = [S.gen(v) for v in T]
    forms = []
    for s in syzygy_module(list(gens)).gens:
        form = S.zero()
        for a, Tj in zip(s, Ts):
            form = form + a.lift().embed(S) * Tj
        forms.append(form)
    forms += [q.embed(S) for q in R.quotient]
    return PresentedAlgebra("sym", S, Ideal(S, forms), R.vars, tuple(T), gens)


def express_in(f: Polynomial, gens: Sequence[Polynomial]):
    """Cofactors of ``f`` in terms of ``gens`` (modulo the ring's quotient), or None."""
    return lift(f, list(gens))


def j_tilde(J: Ideal, I: Ideal, alg: PresentedAlgebra) -> list:
    """Degree-one lifts ``sum a_j T_j`` of the generators ``g = sum a_j f_j`` of ``J``."""
    S = alg.ring
    Ts = [S.gen(v) for v in alg.t_vars]
    out = []
    for g in J.nonzero_gens():
        cof = express_in(g, alg.generators)
        if cof is None:
            raise PreconditionError(f"J is not contained in I: {g} is not in I", witness=g)
        form = S.zero()
        for a, Tj in zip(cof, Ts):
            if a:
                form = form + a.lift().embed(S) * Tj
        out.append(form)
    return out


def aluffi_presentation(J: Ideal, I: Ideal) -> PresentedAlgebra:
    """``Rees(I) / (J, J~)``: J in degree zero, its lift J~ in degree one."""
    if J.ring != I.ring:
        from .errors import RingMismatchError
        raise RingMismatchError("J and I live in different rings")
    rees = rees_presentation(I)
    S = rees.ring
    tilde = j_tilde(J, I, rees)
    gens = list(rees.defining.gens) + [g.lift().embed(S) for g in J.nonzero_gens()] + tilde
    return PresentedAlgebra("aluffi", S, Ideal(S, gens), rees.base_vars, rees.t_vars,
                            rees.generators, extra={"j_tilde": tilde, "rees": rees})


def quotient_rees_presentation(J: Ideal, I: Ideal) -> PresentedAlgebra:
    """Kernel of ``R[T] -> (R/J)[t]``, ``T_j -> f_j t``."""
    return _cached(("qrees", I.ring, tuple(J.gens), tuple(I.gens)), lambda: _qrees(J, I))


def _qrees(J: Ideal, I: Ideal) -> PresentedAlgebra:
    R = I.ring
    gens = _chosen(I)
    for g in J.nonzero_gens():
        if not I.contains(g):
            raise PreconditionError(f"J is not contained in I: {g} is not in I", witness=g)
    T = t_names(R.vars, len(gens))
    t = _fresh(set(R.vars) | set(T), "t")
    source = _extended(R.cover, T)
    target = _graph_target(R, [t], [g.lift() for g in J.nonzero_gens()])
    tt = target.gen(t)
    images = [target.gen(v) for v in R.vars] + [g.lift().embed(target) * tt for g in gens]
    Q = ring_map_kernel(source, target, images)
    return PresentedAlgebra("quotient_rees", source, Q, R.vars, T, gens)


def extended_rees_presentation(I: Ideal) -> PresentedAlgebra:
    """Kernel of ``R[T, u] -> R[t, 1/t]``, ``T_j -> f_j t``, ``u -> 1/t``."""
    return _cached(("erees", I.ring, tuple(I.gens)), lambda: _erees(I))


def _erees(I: Ideal) -> PresentedAlgebra:
    R = I.ring
    gens = _chosen(I)
    T = t_names(R.vars, len(gens))
    u = _fresh(set(R.vars) | set(T), "u")
    t = _fresh(set(R.vars) | set(T) | {u}, "t")
    s = _fresh(set(R.vars) | set(T) | {u, t}, "s")
    source = _extended(R.cover, list(T) + [u])
    pre = _graph_target(R, [t, s])
    target = _graph_target(R, [t, s], [pre.gen(t) * pre.gen(s) - pre.one()])
    tt, ss = target.gen(t), target.gen(s)
    images = ([target.gen(v) for v in R.vars] + [g.lift().embed(target) * tt for g in gens]
              + [ss])
    E = ring_map_kernel(source, target, images)
    return PresentedAlgebra("extended_rees", source, E, R.vars, T, gens, u_var=u)


def associated_graded_presentation(I: Ideal) -> PresentedAlgebra:
    """``gr_I(R)`` as ``R[T] / (E|_{u=0})`` from the extended Rees algebra."""
    return _cached(("gr", I.ring, tuple(I.gens)), lambda: _gr(I))


def _gr(I: Ideal) -> PresentedAlgebra:
    ext = extended_rees_presentation(I)
    R = I.ring
    S = _extended(R.cover, ext.t_vars)
    G = Ideal(S, _set_u_zero(ext.defining.gens, ext, S))
    return PresentedAlgebra("gr", S, G, R.vars, ext.t_vars, ext.generators)


def _set_u_zero(polys, ext: PresentedAlgebra, S: RingSpec) -> list:
    ui = ext.ring.index[ext.u_var]
    out = []
    for g in polys:
        terms = {e[:ui] + e[ui + 1:]: c for e, c in g.terms_dict.items() if not e[ui]}
        h = Polynomial(S, terms, _trusted=True)
        if h:
            out.append(h)
    return out


# --------------------------------------------------------------------------
# valuations, initial forms, form ideals
# --------------------------------------------------------------------------

_TOWERS: dict = {}


def power_tower(I: Ideal) -> PowerTower:
    key = (I.ring, tuple(I.gens))
    tower = _TOWERS.get(key)
    if tower is None:
        if len(_TOWERS) > 64:
            _TOWERS.clear()
        tower = _TOWERS.setdefault(key, PowerTower(I))
    return tower


def clear_caches() -> None:
    """Forget memoized presentations and power towers."""
    _PRESENTATION_CACHE.clear()
    _TOWERS.clear()


def nu_valuation(f: Polynomial, I: Ideal, cap: int = DEFAULT_NU_CAP):
    """I-adic order of ``f``: largest ``n <= cap`` with ``f`` in ``I^n``.

    Returns ``INFINITY`` for ``f = 0`` and ``UNDECIDED`` if ``f`` is still a
    member of ``I^cap``.
    """
    f = I._own(f)
    if f.is_zero() or Ideal(I.ring, []).contains(f):
        return INFINITY
    tower = power_tower(I)
    for n in range(1, cap + 1):
        if not tower[n].contains(f):
            return n - 1
    return UNDECIDED


def initial_form(f: Polynomial, I: Ideal, alg: PresentedAlgebra, nu=None):
    """A T-degree-``nu`` representative of ``f*`` in ``alg`` (a presentation of gr_I(R)).

    ``f = sum c_a f^a`` over products of ``nu`` generators gives ``sum c_a T^a``.
    Returns ``(nu, representative)``; the representative is ``0`` when
    ``nu`` is infinite and ``None`` when undecided.
    """
    if nu is None:
        nu = nu_valuation(f, I)
    S = alg.ring
    if nu is INFINITY:
        return nu, S.zero()
    if nu is UNDECIDED:
        return nu, None
    gens = list(alg.generators)
    combos = list(itertools.combinations_with_replacement(range(len(gens)), nu))
    prods = []
    for combo in combos:
        p = I.ring.one()
        for i in combo:
            p = p * gens[i]
        prods.append(p)
    cof = express_in(I._own(f), prods)
    if cof is None:
        raise PreconditionError(f"{f} is not in I^{nu}")
    Ts = [S.gen(v) for v in alg.t_vars]
    rep = S.zero()
    for c, combo in zip(cof, combos):
        if not c:
            continue
        mono = S.one()
        for i in combo:
            mono = mono * Ts[i]
        rep = rep + c.lift().embed(S) * mono
    return nu, rep


@dataclass
class FormIdeal:
    """``J*`` inside ``gr_I(R) = S / gr_ideal`` with ``S = R[T]``."""

    gr: PresentedAlgebra
    ideal: Ideal

    def contains(self, f: Polynomial) -> bool:
        return self.ideal.contains(f)

    def describe(self) -> dict:
        return {"gr": self.gr.describe(), "form_ideal": [str(g) for g in self.ideal.groebner_basis()]}


def form_ideal(J: Ideal, I: Ideal) -> FormIdeal:
    """``J*`` as ``((J S : u^inf) + (u)) |_{u=0}`` with ``S`` the extended Rees algebra."""
    key = ("form", I.ring, tuple(J.gens), tuple(I.gens))
    return _cached(key, lambda: _form_ideal(J, I))


def _form_ideal(J: Ideal, I: Ideal) -> FormIdeal:
    ext = extended_rees_presentation(I)
    gr = associated_graded_presentation(I)
    S = ext.ring
    JS = Ideal(S, [g.lift().embed(S) for g in J.nonzero_gens()] + list(ext.defining.gens))
    sat = saturate(JS, S.gen(ext.u_var), method="rabinowitsch")
    star = Ideal(gr.ring, _set_u_zero(sat.gens, ext, gr.ring) + list(gr.defining.gens))
    return FormIdeal(gr, star)


@dataclass
class StandardBaseReport:
    verdict: Verdict
    valuations: list
    initial_forms: list

    def __bool__(self):
        return self.verdict is Verdict.TRUE


def standard_base_test(gens: Sequence[Polynomial], I: Ideal) -> StandardBaseReport:
    """Whether the initial forms of ``gens`` generate the form ideal of ``(gens)``."""
    J = Ideal(I.ring, gens)
    gr = associated_graded_presentation(I)
    vals, forms = [], []
    for f in J.gens:
        nu, rep = initial_form(f, I, gr)
        vals.append(nu)
        forms.append(rep)
    if any(v is UNDECIDED for v in vals):
        return StandardBaseReport(Verdict.UNDECIDED, vals, forms)
    star = form_ideal(J, I)
    generated = Ideal(gr.ring, [r for r in forms if r] + list(gr.defining.gens))
    return StandardBaseReport(Verdict.of(ideal_equal(generated, star.ideal)), vals, forms)


# --------------------------------------------------------------------------
# Valabrega-Valla components
# --------------------------------------------------------------------------

@dataclass
class VVComponent:
    n: int
    residue_gens: list
    is_zero: bool


def vv_component(J: Ideal, I: Ideal, n: int) -> VVComponent:
    """``(J ∩ I^n) / (J I^(n-1))`` through the generators of the intersection."""
    if n < 1:
        raise ValueError("degree must be at least 1")
    tower = power_tower(I)
    inter = ideal_intersect(J, tower[n])
    lower = ideal_product(J, tower[n - 1]) if n > 1 else J
    residues = [r for r in (lower.normal_form(g) for g in inter.gens) if r]
    return VVComponent(n, residues, not residues)
