"""Ideals of polynomial rings (and of their quotients) with cached Groebner bases."""

from __future__ import annotations

import itertools
import math
from functools import reduce
from typing import Iterable, Sequence

from .cache import active_store, basis_key
from .errors import GeneratorCapExceeded, PreconditionError, RingError, RingMismatchError
from .groebner import Engine, current_budget
from .ring import MonomialOrder, Polynomial, RingSpec

DEFAULT_GENERATOR_CAP = 20000


def _raw(f: Polynomial, pos=0) -> dict:
    return {(pos,) + e: c for e, c in f.terms_dict.items()}


def _engine(ring: RingSpec, order: MonomialOrder) -> Engine:
    return Engine(ring.nvars, ring.characteristic, order.dkey(ring.nvars),
                  degree=order.degree_function(), module="pot", degree_cap=ring.degree_cap,
                  normal_selection=order.degree_compatible)


def _from_elem(ring, el, one) -> Polynomial:
    terms = {m[1:]: c for m, c in el.tail}
    terms[el.lm[1:]] = one
    return Polynomial(ring, terms, _trusted=True)


class Ideal:
    """An ideal given by generators, with reduced Groebner bases cached per order.

    In a quotient ring ``R/a`` every computation works with ``gens + a`` in
    the cover ring; the results are read back in ``R``.
    """

    def __init__(self, ring: RingSpec, gens: Iterable = ()):
        self.ring = ring
        out = []
        for g in gens:
            if isinstance(g, str):
                g = ring.parse(g)
            elif not isinstance(g, Polynomial):
                g = ring.constant(g)
            if g.ring != ring:
                if g.ring.vars == ring.vars and g.ring.characteristic == ring.characteristic:
                    g = g.embed(ring)
                else:
                    raise RingMismatchError(f"generator {g} is not in {ring!r}")
            out.append(g)
        self.gens = tuple(out)
        self._gb: dict = {}

    # -- construction helpers ------------------------------------------
    @classmethod
    def unit(cls, ring):
        return cls(ring, [ring.one()])

    @classmethod
    def zero(cls, ring):
        return cls(ring, [])

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.gens)) or '0'})"

    def nonzero_gens(self) -> list:
        return [g for g in self.gens if g]

    def all_gens(self) -> list:
        """Generators together with the quotient ideal of the ring."""
        extra = [q.embed(self.ring) for q in self.ring.quotient]
        return self.nonzero_gens() + extra

    # -- Groebner bases ---------------------------------------------------
    def groebner_basis(self, order=None) -> list:
        order = self.ring.order if order is None else MonomialOrder.coerce(order)
        gb = self._gb.get(order)
        if gb is None:
            store = active_store()
            key = basis_key(self.ring, self.gens, order) if store is not None else None
            basis = store.get(key, self.ring) if store is not None else None
            if basis is None:
                eng = _engine(self.ring, order)
                elems = eng.groebner([_raw(g) for g in self.all_gens()], current_budget())
                basis = [_from_elem(self.ring, e, eng.one) for e in elems]
                if store is not None:
                    store.put(key, basis)
            gb = self._gb.setdefault(order, basis)
        return gb

    def _seed_gb(self, order, basis):
        self._gb.setdefault(MonomialOrder.coerce(order), list(basis))

    def leading_monomials(self, order=None) -> list:
        order = self.ring.order if order is None else MonomialOrder.coerce(order)
        key = order.dkey(self.ring.nvars)
        return [min(g.terms_dict, key=key) for g in self.groebner_basis(order)]

    def normal_form(self, f: Polynomial, order=None) -> Polynomial:
        order = self.ring.order if order is None else MonomialOrder.coerce(order)
        f = self._own(f)
        gb = self.groebner_basis(order)
        eng = _engine(self.ring, order)
        basis = [eng.make_elem(_raw(g)) for g in gb]
        rem = eng.normal_form(_raw(f), basis)
        return Polynomial(self.ring, {m[1:]: c for m, c in rem.items()}, _trusted=True)

    def _own(self, f) -> Polynomial:
        if isinstance(f, str):
            return self.ring.parse(f)
        if not isinstance(f, Polynomial):
            return self.ring.constant(f)
        if f.ring != self.ring:
            if f.ring.vars == self.ring.vars and f.ring.characteristic == self.ring.characteristic:
                return f.embed(self.ring)
            raise RingMismatchError(f"{f} is not in {self.ring!r}")
        return f

    def contains(self, f) -> bool:
        return self.normal_form(f).is_zero()

    __contains__ = contains

    def is_unit(self) -> bool:
        gb = self.groebner_basis()
        return len(gb) == 1 and gb[0].is_constant() and bool(gb[0])

    def is_zero(self) -> bool:
        return not self.groebner_basis()

    def issubset(self, other: "Ideal") -> bool:
        _same_ring(self, other)
        return all(other.contains(g) for g in self.nonzero_gens())

    def __le__(self, other):
        return self.issubset(other)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    __hash__ = None

    def __add__(self, other):
        return ideal_sum(self, other)

    def __mul__(self, other):
        return ideal_product(self, other)

    def __pow__(self, n):
        return ideal_power(self, n)

    def reduced(self) -> "Ideal":
        """The ideal generated by its reduced Groebner basis (quotient part dropped)."""
        cover = Ideal(self.ring, self.ring.quotient and [q.embed(self.ring) for q in self.ring.quotient])
        gens = [g for g in self.groebner_basis()
                if not (self.ring.quotient and cover.contains(g))]
        out = Ideal(self.ring, gens)
        out._seed_gb(self.ring.order, self.groebner_basis())
        return out

    def minimalized(self) -> "Ideal":
        """Drop generators lying in the ideal of the remaining ones (greedy, in order)."""
        gens = []
        seen = set()
        for g in self.nonzero_gens():
            h = g.monic()
            if h not in seen:
                seen.add(h)
                gens.append(g)
        i = len(gens) - 1
        while i >= 0 and len(gens) > 1:
            rest = Ideal(self.ring, gens[:i] + gens[i + 1:])
            if rest.contains(gens[i]):
                gens.pop(i)
            i -= 1
        out = Ideal(self.ring, gens)
        for order, gb in self._gb.items():
            out._seed_gb(order, gb)
        return out

    def embed(self, ring: RingSpec) -> "Ideal":
        return Ideal(ring, [g.embed(ring) for g in self.gens])

    def lift(self) -> "Ideal":
        """The ideal ``gens + quotient`` in the cover ring."""
        cover = self.ring.cover
        return Ideal(cover, [g.embed(cover) for g in self.all_gens()])

    def describe(self):
        return [str(g) for g in self.gens]


def _same_ring(A: Ideal, B: Ideal):
    if A.ring != B.ring:
        raise RingMismatchError(f"{A.ring!r} vs {B.ring!r}")


# --------------------------------------------------------------------------
# membership and comparison
# --------------------------------------------------------------------------

def groebner_basis(A: Ideal, order=None) -> list:
    return A.groebner_basis(order)


def normal_form(f: Polynomial, A: Ideal, order=None) -> Polynomial:
    return A.normal_form(f, order)


def ideal_membership(f, A: Ideal) -> bool:
    return A.contains(f)


def ideal_subset(A: Ideal, B: Ideal) -> bool:
    return A.issubset(B)


def ideal_equal(A: Ideal, B: Ideal) -> bool:
    """Equality by comparing reduced Groebner bases structurally."""
    _same_ring(A, B)
    return A.groebner_basis() == B.groebner_basis()


# --------------------------------------------------------------------------
# sums, products, powers
# --------------------------------------------------------------------------

def ideal_sum(*ideals: Ideal) -> Ideal:
    A = ideals[0]
    for B in ideals[1:]:
        _same_ring(A, B)
    return Ideal(A.ring, [g for I in ideals for g in I.gens])


def _dedupe(polys) -> list:
    out, seen = [], set()
    for g in polys:
        if g and g not in seen:
            seen.add(g)
            out.append(g)
    return out


def ideal_product(A: Ideal, B: Ideal, cap=DEFAULT_GENERATOR_CAP) -> Ideal:
    _same_ring(A, B)
    a, b = A.nonzero_gens(), B.nonzero_gens()
    if len(a) * len(b) > cap:
        raise GeneratorCapExceeded(f"product would have {len(a) * len(b)} generators")
    return Ideal(A.ring, _dedupe(f * g for f in a for g in b))


def ideal_power(A: Ideal, n: int, cap=DEFAULT_GENERATOR_CAP) -> Ideal:
    """All n-fold products of generators, deduplicated; ``A^0`` is the unit ideal."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    if n == 0:
        return Ideal.unit(A.ring)
    gens = A.nonzero_gens()
    count = math.comb(len(gens) + n - 1, n) if gens else 0
    if count > cap:
        raise GeneratorCapExceeded(f"power would have {count} generators")
    powers = {}

    def pw(i, k):
        if (i, k) not in powers:
            powers[(i, k)] = gens[i] ** k
        return powers[(i, k)]

    prods = []
    for combo in itertools.combinations_with_replacement(range(len(gens)), n):
        term = A.ring.one()
        for i, k in _counts(combo):
            term = term * pw(i, k)
        prods.append(term)
    return Ideal(A.ring, _dedupe(prods))


def _counts(combo):
    out = []
    for i in combo:
        if out and out[-1][0] == i:
            out[-1][1] += 1
        else:
            out.append([i, 1])
    return out


class PowerTower:
    """Lazily computed powers ``I^n`` with generator sets kept small.

    ``I^n`` is generated by the products of a minimal basis of ``I^(n-1)``
    with the generators of ``I``; the resulting ideal equals ``ideal_power``.
    """

    def __init__(self, I: Ideal):
        self.base = I
        self._powers = {0: Ideal.unit(I.ring), 1: I}

    def __getitem__(self, n: int) -> Ideal:
        if n not in self._powers:
            prev = self[n - 1]
            gens = _slim(prev)
            self._powers[n] = Ideal(self.base.ring,
                                    _dedupe(g * f for g in gens for f in self.base.nonzero_gens()))
        return self._powers[n]


def _slim(A: Ideal) -> list:
    """A short generating list: the reduced basis when it is shorter than the generators."""
    gb = A.groebner_basis()
    if A.ring.quotient:
        return A.nonzero_gens()
    return gb if len(gb) <= len(A.nonzero_gens()) else A.nonzero_gens()


# --------------------------------------------------------------------------
# elimination and friends
# --------------------------------------------------------------------------

def _elim_ring(ring: RingSpec, elim_vars: Sequence[str], extra: Sequence[str] = ()) -> RingSpec:
    """Ring with ``extra + elim_vars`` forming the dominant block."""
    first = list(extra) + [v for v in ring.vars if v in set(elim_vars)]
    rest = [v for v in ring.vars if v not in set(elim_vars)]
    order = MonomialOrder("block", block=tuple(range(len(first))))
    return RingSpec(tuple(first + rest), ring.characteristic, order, (), ring.degree_cap)


def _eliminate_raw(polys: list, elim_ring: RingSpec, k: int, target: RingSpec) -> list:
    """Groebner-basis elements of ``polys`` free of the first ``k`` variables."""
    eng = _engine(elim_ring, elim_ring.order)
    elems = eng.groebner([_raw(p) for p in polys if p], current_budget())
    out = []
    for el in elems:
        if any(el.lm[1:k + 1]):
            continue
        terms = {m[k + 1:]: c for m, c in el.tail}
        terms[el.lm[k + 1:]] = eng.one
        out.append(Polynomial(target, terms, _trusted=True))
    return out


def eliminate(A: Ideal, drop_vars: Sequence[str]) -> Ideal:
    """``A ∩ k[remaining variables]`` as an ideal of the smaller polynomial ring."""
    drop = list(dict.fromkeys(drop_vars))
    for v in drop:
        if v not in A.ring.index:
            raise RingError(f"cannot eliminate unknown variable {v!r}")
    rest = [v for v in A.ring.vars if v not in set(drop)]
    target = RingSpec(tuple(rest), A.ring.characteristic, _restrict_order(A.ring, rest), (),
                      A.ring.degree_cap)
    if not drop:
        return Ideal(target, [g.lift().embed(target) for g in A.all_gens()])
    er = _elim_ring(A.ring, drop)
    polys = [g.lift().embed(er) for g in A.all_gens()]
    gens = _eliminate_raw(polys, er, len(drop), target)
    out = Ideal(target, gens)
    if target.order == MonomialOrder("degrevlex"):
        out._seed_gb(target.order, gens)
    return out


def _restrict_order(ring, rest):
    if ring.order.kind in ("lex", "deglex", "degrevlex"):
        return ring.order
    if ring.order.kind == "weighted":
        return MonomialOrder("weighted", weights=tuple(ring.order.weights[ring.index[v]] for v in rest))
    return MonomialOrder()


def _fresh(ring_vars, base="t") -> str:
    name = base
    k = 0
    while name in ring_vars:
        k += 1
        name = f"{base}{k}"
    return name


def ideal_intersect(A: Ideal, B: Ideal) -> Ideal:
    """``A ∩ B`` as ``elim_t(t*A + (1-t)*B)``."""
    _same_ring(A, B)
    ring = A.ring
    a, b = A.all_gens(), B.all_gens()
    if not a or not b:
        return Ideal.zero(ring)
    t = _fresh(ring.vars)
    er = _elim_ring(ring.cover, [], extra=[t])
    T = er.gen(t)
    one = er.one()
    polys = [T * g.lift().embed(er) for g in a] + [(one - T) * g.lift().embed(er) for g in b]
    gens = _eliminate_raw(polys, er, 1, ring.cover)
    out = Ideal(ring, [g.embed(ring) for g in gens])
    return out


def exact_quotient(g: Polynomial, f: Polynomial) -> Polynomial:
    """``g / f`` for ``f`` dividing ``g`` in the polynomial ring."""
    if not f:
        raise ZeroDivisionError("division by the zero polynomial")
    ring = g.ring
    eng = _engine(ring.cover, ring.order)
    el = eng.make_elem(_raw(f))
    lc_inv = ring.inverse(f.leading_coefficient())
    rest = _raw(g)
    quot = {}
    p = ring.characteristic
    while rest:
        m = eng.leading(rest)
        if not all(a >= b for a, b in zip(m[1:], el.lm[1:])):
            raise PreconditionError(f"{f} does not divide {g}")
        q = tuple(a - b for a, b in zip(m, el.lm))
        c = rest.pop(m)
        quot[q[1:]] = (c * lc_inv) % p if p else c * lc_inv
        for tm, tc in el.tail:
            nm = tuple(a + b for a, b in zip(tm, q))
            v = rest.get(nm, 0) - c * tc
            if p:
                v %= p
            if v:
                rest[nm] = v
            else:
                rest.pop(nm, None)
    return Polynomial(ring, quot, _trusted=True)


def ideal_quotient(A: Ideal, B) -> Ideal:
    """Colon ideal ``(A : B)``; ``B`` may be an ideal or a single polynomial."""
    if isinstance(B, Ideal):
        _same_ring(A, B)
        fs = B.nonzero_gens()
        if not fs:
            return Ideal.unit(A.ring)
        return reduce(ideal_intersect, [ideal_quotient(A, f) for f in fs])
    f = A._own(B)
    if not f:
        return Ideal.unit(A.ring)
    cover = A.ring.cover
    fl = f.lift()
    inter = ideal_intersect(A.lift(), Ideal(cover, [fl]))
    gens = [exact_quotient(g, fl) for g in inter.gens]
    return Ideal(A.ring, [g.embed(A.ring) for g in gens])


def saturate(A: Ideal, f, method="colon", max_rounds=64) -> Ideal:
    """``(A : f^∞)``.

    ``method="colon"`` iterates ``A_k = (A_(k-1) : f)`` until two successive
    terms are equal; ``method="rabinowitsch"`` eliminates ``y`` from
    ``A + (1 - y*f)``.
    """
    f = A._own(f)
    if not f:
        raise PreconditionError("cannot saturate with respect to zero")
    if method == "rabinowitsch":
        ring = A.ring
        y = _fresh(ring.vars, "y")
        er = _elim_ring(ring.cover, [], extra=[y])
        Y = er.gen(y)
        polys = [g.lift().embed(er) for g in A.all_gens()] + [er.one() - Y * f.lift().embed(er)]
        gens = _eliminate_raw(polys, er, 1, ring.cover)
        return Ideal(ring, [g.embed(ring) for g in gens])
    cur = A
    for _ in range(max_rounds):
        nxt = ideal_quotient(cur, f)
        if ideal_equal(nxt, cur):
            return cur
        cur = nxt
    raise PreconditionError("saturation did not stabilize within the round limit")


# --------------------------------------------------------------------------
# ring maps
# --------------------------------------------------------------------------

def ring_map_kernel(source: RingSpec, target: RingSpec, images: Sequence[Polynomial]) -> Ideal:
    """Kernel of ``source -> target`` sending variable ``i`` to ``images[i]``.

    Computed from the graph ideal ``(y_i - image_i) + target.quotient`` by
    eliminating the target variables.  A source variable that maps to the
    target variable of the same name is identified with it.
    """
    if len(images) != source.nvars:
        raise RingError("need one image per source variable")
    images = [target(im) if not isinstance(im, Polynomial) else im.embed(target) for im in images]
    shared = [v for i, v in enumerate(source.vars)
              if v in target.index and images[i] == target.gen(v)]
    shared_set = set(shared)
    rename = {}
    for v in source.vars:
        if v in shared_set:
            rename[v] = v
        elif v in target.index:
            rename[v] = _fresh(set(target.vars) | set(source.vars) | set(rename.values()), v + "_")
        else:
            rename[v] = v
    drop = [v for v in target.vars if v not in shared_set]
    src_names = [rename[v] for v in source.vars]
    tail = [v for v in src_names if v not in shared_set]
    graph_vars = tuple(drop + [v for v in source.vars if v in shared_set] + tail)
    order = MonomialOrder("block", block=tuple(range(len(drop))))
    graph = RingSpec(graph_vars, source.characteristic, order, (), source.degree_cap)
    polys = []
    for i, v in enumerate(source.vars):
        if v in shared_set:
            continue
        polys.append(graph.gen(rename[v]) - images[i].lift().embed(graph))
    polys += [q.embed(graph) for q in target.quotient]
    mid = RingSpec(graph_vars[len(drop):], source.characteristic, MonomialOrder(), (), source.degree_cap)
    gens = _eliminate_raw(polys, graph, len(drop), mid)
    back = {rename[v]: v for v in source.vars}
    src_cover = source.cover
    renamed = RingSpec(tuple(back[v] for v in mid.vars), source.characteristic, MonomialOrder(), (),
                       source.degree_cap)
    out = [Polynomial(renamed, g.terms_dict, _trusted=True).embed(src_cover.with_order(src_cover.order))
           for g in gens]
    return Ideal(source, [g.embed(source) for g in out])


# --------------------------------------------------------------------------
# dimension
# --------------------------------------------------------------------------

def dimension_height(A: Ideal) -> tuple:
    """(Krull dimension of R/A, height of A) from the leading-term ideal.

    The unit ideal gives dimension -1 and height equal to the number of
    variables.
    """
    n = A.ring.nvars
    if A.is_unit():
        return -1, n
    lms = A.leading_monomials(MonomialOrder("degrevlex")) if A.ring.order.kind != "degrevlex" \
        else A.leading_monomials()
    supports = [frozenset(i for i, x in enumerate(m) if x) for m in lms]
    supports = [s for s in supports if not any(o < s for o in supports)]
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size, n - size
    return 0, n
