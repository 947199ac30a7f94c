"""Submodules of free modules R^m: syzygies, lifts, membership, intersections.

Vectors are tuples of polynomials.  Module Groebner bases use the
position-over-term order (lower position index is larger) on top of the
ring's term order, with the same Buchberger kernel as ideals.
"""

from __future__ import annotations

from typing import Sequence

from .errors import PreconditionError, RingError, RingMismatchError
from .groebner import Engine, current_budget
from .ideal import Ideal, PowerTower, _fresh
from .ring import MonomialOrder, Polynomial, RingSpec


class ModuleVector(tuple):
    """A fixed-length tuple of polynomials over a common ring."""

    def __new__(cls, coords):
        coords = tuple(coords)
        if not coords:
            raise RingError("module vectors need at least one coordinate")
        ring = coords[0].ring
        if any(c.ring != ring for c in coords):
            raise RingMismatchError("vector coordinates live in different rings")
        return super().__new__(cls, coords)

    @property
    def ring(self) -> RingSpec:
        return self[0].ring

    def is_zero(self) -> bool:
        return all(not c for c in self)

    def __add__(self, other):
        return ModuleVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return ModuleVector(a - b for a, b in zip(self, other))

    def scale(self, f: Polynomial):
        return ModuleVector(f * a for a in self)

    def dot(self, fs: Sequence[Polynomial]) -> Polynomial:
        total = self.ring.zero()
        for a, f in zip(self, fs):
            total = total + a * f
        return total

    def __str__(self):
        return "(" + ", ".join(map(str, self)) + ")"


def _vec_raw(v, offset=0) -> dict:
    out = {}
    for pos, f in enumerate(v):
        for e, c in f.terms_dict.items():
            out[(pos + offset,) + e] = c
    return out


def _raw_vec(ring, d: dict, rank: int, offset=0) -> ModuleVector:
    coords = [{} for _ in range(rank)]
    for m, c in d.items():
        coords[m[0] - offset][m[1:]] = c
    return ModuleVector(Polynomial(ring, t, _trusted=True) for t in coords)


def _engine(ring: RingSpec, order=None) -> Engine:
    order = ring.order if order is None else order
    return Engine(ring.nvars, ring.characteristic, order.dkey(ring.nvars),
                  degree=order.degree_function(), module="pot", degree_cap=ring.degree_cap,
                  normal_selection=order.degree_compatible)


def _elem_dict(el, one) -> dict:
    d = dict(el.tail)
    d[el.lm] = one
    return d


class Submodule:
    """The submodule of R^rank generated by ``gens``."""

    def __init__(self, ring: RingSpec, rank: int, gens=()):
        self.ring = ring
        self.rank = rank
        vecs = []
        for g in gens:
            g = ModuleVector(g)
            if len(g) != rank:
                raise RingError(f"vector of length {len(g)} in a rank-{rank} module")
            if g.ring != ring:
                raise RingMismatchError("generator from another ring")
            vecs.append(g)
        self.gens = tuple(vecs)
        self._gb = None

    def __repr__(self):
        return f"Submodule(rank={self.rank}, gens=[{', '.join(map(str, self.gens))}])"

    @classmethod
    def free(cls, ring, rank):
        return cls(ring, rank, unit_vectors(ring, rank))

    def nonzero_gens(self):
        return [g for g in self.gens if not g.is_zero()]

    def _all_raw(self) -> list:
        raws = [_vec_raw(g) for g in self.nonzero_gens()]
        for q in self.ring.quotient:
            qq = q.embed(self.ring)
            for j in range(self.rank):
                raws.append({(j,) + e: c for e, c in qq.terms_dict.items()})
        return raws

    def groebner_basis(self) -> list:
        if self._gb is None:
            eng = _engine(self.ring)
            elems = eng.groebner(self._all_raw(), current_budget())
            self._gb = [_raw_vec(self.ring, _elem_dict(e, eng.one), self.rank) for e in elems]
        return self._gb

    def normal_form(self, v) -> ModuleVector:
        v = ModuleVector(v)
        if len(v) != self.rank:
            raise RingError(f"vector of length {len(v)} tested against a rank-{self.rank} module")
        eng = _engine(self.ring)
        basis = [eng.make_elem(_vec_raw(g)) for g in self.groebner_basis()]
        rem = eng.normal_form(_vec_raw(v), basis)
        return _raw_vec(self.ring, rem, self.rank)

    def contains(self, v) -> bool:
        return self.normal_form(v).is_zero()

    __contains__ = contains

    def is_zero(self) -> bool:
        return not self.groebner_basis()

    def __add__(self, other):
        if other.rank != self.rank or other.ring != self.ring:
            raise RingMismatchError("modules of different rank or ring")
        return Submodule(self.ring, self.rank, self.gens + other.gens)

    def issubset(self, other) -> bool:
        return all(other.contains(g) for g in self.nonzero_gens())

    def equals(self, other) -> bool:
        return self.issubset(other) and other.issubset(self)


def unit_vectors(ring, rank) -> list:
    z, o = ring.zero(), ring.one()
    return [ModuleVector(o if i == j else z for i in range(rank)) for j in range(rank)]


# --------------------------------------------------------------------------
# syzygies and lifting
# --------------------------------------------------------------------------

class _LiftData:
    """Module basis of ``{(f_i, e_i)}`` in R^(1+m) under position-over-term."""

    def __init__(self, fs: Sequence[Polynomial]):
        self.fs = list(fs)
        self.ring = fs[0].ring
        m = len(fs)
        raws = []
        for i, f in enumerate(fs):
            d = {(0,) + e: c for e, c in f.terms_dict.items()}
            d[(i + 1,) + (0,) * self.ring.nvars] = self.ring.coerce_coeff(1)
            raws.append(d)
        for q in self.ring.quotient:
            qq = q.embed(self.ring)
            for j in range(m + 1):
                raws.append({(j,) + e: c for e, c in qq.terms_dict.items()})
        self.engine = _engine(self.ring)
        self.basis = self.engine.groebner(raws, current_budget())

    def syzygies(self) -> list:
        m = len(self.fs)
        out = []
        for el in self.basis:
            if el.pos == 0:
                continue
            vec = _raw_vec(self.ring, _elem_dict(el, self.engine.one), m + 1)
            out.append(ModuleVector(vec[1:]))
        return out

    def lift(self, g: Polynomial):
        """Cofactors ``a`` with ``g = sum a_i f_i``, or ``None`` when ``g`` is not in the ideal."""
        d = {(0,) + e: c for e, c in g.terms_dict.items()}
        rem = self.engine.normal_form(d, self.basis)
        if any(m[0] == 0 for m in rem):
            return None
        vec = _raw_vec(self.ring, rem, len(self.fs) + 1)
        return [-c for c in vec[1:]]


_LIFT_CACHE: dict = {}


def lift_data(fs: Sequence[Polynomial]) -> _LiftData:
    key = tuple(fs)
    data = _LIFT_CACHE.get(key)
    if data is None:
        if len(_LIFT_CACHE) > 256:
            _LIFT_CACHE.clear()
        data = _LIFT_CACHE.setdefault(key, _LiftData(fs))
    return data


def syzygy_module(fs: Sequence[Polynomial]) -> Submodule:
    """First syzygy module of ``(f_1, ..., f_m)``."""
    fs = list(fs)
    if not fs:
        raise PreconditionError("syzygies of an empty list")
    ring = fs[0].ring
    if any(f.ring != ring for f in fs):
        raise RingMismatchError("polynomials from different rings")
    return Submodule(ring, len(fs), lift_data(fs).syzygies())


def lift(g: Polynomial, fs: Sequence[Polynomial]):
    """Express ``g`` in terms of ``fs``: returns cofactors or ``None``."""
    return lift_data(list(fs)).lift(g)


def module_membership(v, M: Submodule) -> bool:
    return M.contains(v)


def power_scale_submodule(I: Ideal, n: int, rank: int, tower: PowerTower | None = None) -> Submodule:
    """``I^n R^rank`` generated by ``g e_j`` for generators ``g`` of ``I^n``."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    P = tower[n] if tower is not None else (Ideal.unit(I.ring) if n == 0 else _power(I, n))
    gens = []
    z = I.ring.zero()
    for g in P.nonzero_gens():
        for j in range(rank):
            gens.append(ModuleVector(g if i == j else z for i in range(rank)))
    return Submodule(I.ring, rank, gens)


def _power(I, n):
    from .ideal import ideal_power
    return ideal_power(I, n)


def submodule_intersect(A: Submodule, B: Submodule) -> Submodule:
    """``A ∩ B`` by eliminating ``t`` from ``t*A + (1-t)*B``."""
    if A.rank != B.rank or A.ring != B.ring:
        raise RingMismatchError("modules of different rank or ring")
    ring = A.ring
    a, b = A.nonzero_gens(), B.nonzero_gens()
    extra = []
    for q in ring.quotient:
        qq = q.embed(ring)
        extra += [ModuleVector(qq if i == j else ring.zero() for i in range(A.rank))
                  for j in range(A.rank)]
    a, b = a + extra, b + extra
    if not a or not b:
        return Submodule(ring, A.rank, [])
    t = _fresh(ring.vars)
    big = RingSpec((t,) + ring.vars, ring.characteristic, MonomialOrder(), (), ring.degree_cap)
    tkey = ring.order.dkey(ring.nvars)

    def key(m):
        return (-m[1], m[0]) + tkey(m[2:])

    eng = Engine(big.nvars, big.characteristic, None, degree=sum, degree_cap=ring.degree_cap,
                 full_key=key)
    T = big.gen(t)
    one = big.one()
    raws = []
    for v in a:
        raws.append(_vec_raw([T * c.embed(big) for c in v]))
    for v in b:
        raws.append(_vec_raw([(one - T) * c.embed(big) for c in v]))
    basis = eng.groebner(raws, current_budget())
    out = []
    for el in basis:
        if el.lm[1]:
            continue
        d = {(m[0],) + m[2:]: c for m, c in _elem_dict(el, eng.one).items()}
        out.append(_raw_vec(ring, d, A.rank))
    return Submodule(ring, A.rank, out)


def inclusion_mod(A: Submodule, B: Submodule, C: Submodule) -> bool:
    """Whether ``A ⊆ B + C``."""
    return A.issubset(B + C)
