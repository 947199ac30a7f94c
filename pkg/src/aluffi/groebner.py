"""Buchberger kernel shared by ideals and free-module submodules.

Everything here works on *raw* elements: dicts mapping a module monomial
``(position, e_1, ..., e_n)`` to a coefficient.  Ideals are the rank-one case
(position always 0).  The algorithm is Buchberger's with the Gebauer-Moeller
pair criteria, sugar selection and deterministic tie-breaks, followed by a
full inter-reduction so the output is the unique reduced basis.
"""

from __future__ import annotations

import contextlib
import contextvars
import heapq
import time
from dataclasses import dataclass, field
from operator import add, le, neg, sub

from .errors import BudgetExceeded, DegreeCapExceeded


# --------------------------------------------------------------------------
# budgets and statistics
# --------------------------------------------------------------------------

@dataclass
class Budget:
    """Step and wall-time limits for all Groebner work in a ``with`` block."""

    max_steps: int | None = None
    max_ms: float | None = None
    steps: int = 0
    gb_calls: int = 0
    started: float = field(default_factory=time.perf_counter)

    @property
    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self.started) * 1000.0

    def charge(self, n: int = 1) -> None:
        self.steps += n
        if self.max_steps is not None and self.steps > self.max_steps:
            raise BudgetExceeded(f"step budget of {self.max_steps} exhausted")
        if self.max_ms is not None and self.elapsed_ms > self.max_ms:
            raise BudgetExceeded(f"time budget of {self.max_ms} ms exhausted")


_BUDGET: contextvars.ContextVar = contextvars.ContextVar("aluffi_budget", default=None)


@contextlib.contextmanager
def budget(max_steps=None, max_ms=None):
    """Install a fresh :class:`Budget`; nested budgets each count their own work."""
    b = Budget(max_steps=max_steps, max_ms=max_ms)
    token = _BUDGET.set(b)
    try:
        yield b
    finally:
        _BUDGET.reset(token)


def current_budget() -> Budget | None:
    return _BUDGET.get()


# --------------------------------------------------------------------------
# the engine
# --------------------------------------------------------------------------

class _Elem:
    __slots__ = ("lm", "mask", "pos", "tail", "sugar", "index")

    def __init__(self, lm, mask, tail, sugar, index):
        self.lm = lm
        self.mask = mask
        self.pos = lm[0]
        self.tail = tail
        self.sugar = sugar
        self.index = index

    def as_dict(self, one):
        d = dict(self.tail)
        d[self.lm] = one
        return d


def _mask(m):
    bits = 0
    for i, x in enumerate(m):
        if x and i:
            bits |= 1 << i
    return bits


class Engine:
    """Polynomial arithmetic in a fixed free module over k[x_1..x_n].

    ``term_key`` is the descending sort key of the ring order on exponent
    tuples; ``module`` chooses how positions combine with it: ``"pot"``
    (position first, lower index larger) or ``"top"``.
    """

    def __init__(self, nvars, characteristic, term_key, degree=sum, module="pot",
                 degree_cap=64, full_key=None, normal_selection=False):
        self.nvars = nvars
        self.normal_selection = normal_selection
        self.p = characteristic
        self.degree_cap = degree_cap
        self._deg = degree
        if full_key is not None:
            self.key = full_key
        elif module == "pot":
            self.key = lambda m: (m[0],) + term_key(m[1:])
        else:
            self.key = lambda m: term_key(m[1:]) + (m[0],)
        self._info = {}
        if characteristic:
            self.one = 1
        else:
            from gmpy2 import mpq
            self.one = mpq(1)

    # -- helpers --------------------------------------------------------
    def info(self, m):
        v = self._info.get(m)
        if v is None:
            v = (self.key(m), _mask(m))
            self._info[m] = v
        return v

    def degree(self, m) -> int:
        return self._deg(m[1:])

    def leading(self, f: dict):
        info = self.info
        return min(f, key=lambda m: info(m)[0])

    def sorted_terms(self, f: dict):
        info = self.info
        return sorted(f.items(), key=lambda t: info(t[0])[0])

    def make_elem(self, f: dict, index=-1, sugar=None) -> _Elem:
        lm = self.leading(f)
        lc = f[lm]
        p = self.p
        if lc != 1:
            inv = pow(int(lc), -1, p) if p else 1 / lc
            if p:
                tail = [(m, c * inv % p) for m, c in f.items() if m != lm]
            else:
                tail = [(m, c * inv) for m, c in f.items() if m != lm]
        else:
            tail = [(m, c) for m, c in f.items() if m != lm]
        if sugar is None:
            sugar = max(self.degree(m) for m in f)
        return _Elem(lm, self.info(lm)[1], tail, sugar, index)

    # -- reduction ------------------------------------------------------
    def reduce(self, f: dict, reducers, full=True, budget=None) -> dict:
        """Remainder of ``f`` (consumed) on division by ``reducers``.

        ``reducers`` maps a position to a list of monic :class:`_Elem`.  With
        ``full=False`` only the leading term is made irreducible and the rest
        of ``f`` is returned unreduced.
        """
        if not f:
            return f
        info = self._info
        key = self.key
        heap = []
        for m in f:
            v = info.get(m)
            if v is None:
                v = info[m] = (key(m), _mask(m))
            heap.append((v[0], m))
        heapq.heapify(heap)
        heappop, heappush = heapq.heappop, heapq.heappush
        rem = {}
        p = self.p
        steps = 0
        while heap:
            _, m = heappop(heap)
            c = f.get(m)
            if c is None:
                continue
            mask = info[m][1]
            r = None
            for el in reducers.get(m[0], ()):
                if not (el.mask & ~mask) and all(map(le, el.lm, m)):
                    r = el
                    break
            if r is None:
                if not full:
                    return f
                del f[m]
                rem[m] = c
                continue
            del f[m]
            # work is measured in terms touched, so large reducers cost more
            steps += 1 + len(r.tail)
            if budget is not None and steps >= 64:
                budget.charge(steps)
                steps = 0
            q = tuple(map(sub, m, r.lm))
            for tm, tc in r.tail:
                nm = tuple(map(add, tm, q))
                v = f.get(nm)
                if v is None:
                    v = -c * tc
                    if p:
                        v %= p
                    f[nm] = v
                    iv = info.get(nm)
                    if iv is None:
                        iv = info[nm] = (key(nm), _mask(nm))
                    heappush(heap, (iv[0], nm))
                else:
                    v -= c * tc
                    if p:
                        v %= p
                    if v:
                        f[nm] = v
                    else:
                        del f[nm]
        return rem

    # -- Buchberger ------------------------------------------------------
    def groebner(self, polys, budget=None) -> list:
        """Reduced Groebner basis (list of monic :class:`_Elem`, descending)."""
        if budget is None:
            budget = current_budget()
        if budget is not None:
            budget.gb_calls += 1
        info = self.info
        # the product criterion is only valid when every element lives in one position
        product_ok = all(m[0] == 0 for f in polys for m in f)
        elems: list[_Elem] = []
        G: set = set()
        B: set = set()
        heap: list = []
        # smallest lcm first keeps coefficients small for degree orders;
        # elimination orders do better with sugar
        normal = self.normal_selection

        def push_pair(i, j):
            a, b = elems[i], elems[j]
            L = tuple(map(max, a.lm, b.lm))
            dL = self.degree(L)
            s = max(a.sugar - self.degree(a.lm) + dL, b.sugar - self.degree(b.lm) + dL)
            pair = (i, j) if i < j else (j, i)
            B.add(pair)
            if normal:
                heapq.heappush(heap, (tuple(map(neg, info(L)[0])), s, pair))
            else:
                heapq.heappush(heap, (s, info(L)[0], pair))

        def lcm_divides(m, d):
            return all(map(le, d, m))

        def update(ih):
            nonlocal G
            h = elems[ih]
            mh = h.lm
            C = [ig for ig in sorted(G) if elems[ig].pos == h.pos]
            D = []
            lcms = {ig: tuple(map(max, mh, elems[ig].lm)) for ig in C}
            for idx, ig in enumerate(C):
                mg = elems[ig].lm
                L = lcms[ig]
                coprime = product_ok and all(not (a and b) for a, b in zip(mh[1:], mg[1:]))
                if coprime:
                    D.append(ig)
                    continue
                others = C[idx + 1:]
                if any(lcm_divides(L, lcms[ip]) for ip in others):
                    continue
                if any(lcm_divides(L, lcms[ip]) for ip in D):
                    continue
                D.append(ig)
            E = [ig for ig in D
                 if not (product_ok and all(not (a and b) for a, b in zip(mh[1:], elems[ig].lm[1:])))]
            dead = []
            for pair in B:
                g1, g2 = elems[pair[0]], elems[pair[1]]
                if g1.pos != h.pos:
                    continue
                L12 = tuple(map(max, g1.lm, g2.lm))
                if (lcm_divides(L12, mh)
                        and tuple(map(max, g1.lm, mh)) != L12
                        and tuple(map(max, g2.lm, mh)) != L12):
                    dead.append(pair)
            for pair in dead:
                B.discard(pair)
            for ig in E:
                push_pair(ih, ig)
            G = {ig for ig in G
                 if not (elems[ig].pos == h.pos and lcm_divides(elems[ig].lm, mh))}
            G.add(ih)

        def reducers():
            out: dict = {}
            for ig in sorted(G):
                el = elems[ig]
                out.setdefault(el.pos, []).append(el)
            return out

        inputs = [dict(f) for f in polys if f]
        inputs.sort(key=lambda f: info(self.leading(f))[0], reverse=True)
        for f in inputs:
            red = self.reduce(dict(f), reducers(), full=False, budget=budget)
            if not red:
                continue
            el = self.make_elem(red, len(elems), sugar=max(self.degree(m) for m in f))
            self._check_cap(el)
            elems.append(el)
            update(el.index)

        red_cache = reducers()
        dirty = False
        while heap:
            first, second, pair = heapq.heappop(heap)
            s = second if normal else first
            if pair not in B:
                continue
            B.discard(pair)
            if budget is not None:
                budget.charge()
            a, b = elems[pair[0]], elems[pair[1]]
            L = tuple(map(max, a.lm, b.lm))
            qa = tuple(map(sub, L, a.lm))
            qb = tuple(map(sub, L, b.lm))
            S: dict = {}
            p = self.p
            for m, c in a.tail:
                S[tuple(map(add, m, qa))] = c
            for m, c in b.tail:
                nm = tuple(map(add, m, qb))
                v = S.get(nm)
                if v is None:
                    S[nm] = (-c) % p if p else -c
                else:
                    v -= c
                    if p:
                        v %= p
                    if v:
                        S[nm] = v
                    else:
                        del S[nm]
            if not S:
                continue
            if dirty:
                red_cache = reducers()
                dirty = False
            h = self.reduce(S, red_cache, full=True, budget=budget)
            if not h:
                continue
            el = self.make_elem(h, len(elems), sugar=s)
            self._check_cap(el)
            elems.append(el)
            update(el.index)
            dirty = True

        basis = [elems[i] for i in sorted(G)]
        return self.interreduce(basis, budget)

    def _check_cap(self, el):
        if self.degree(el.lm) > self.degree_cap:
            raise DegreeCapExceeded(f"basis element of degree {self.degree(el.lm)} exceeds cap")

    def interreduce(self, basis, budget=None) -> list:
        """Fully reduce the tails of a minimal basis and sort it descending."""
        red: dict = {}
        for el in basis:
            red.setdefault(el.pos, []).append(el)
        out = []
        for el in basis:
            tail = self.reduce(dict(el.tail), red, full=True, budget=budget)
            out.append(_Elem(el.lm, el.mask, list(tail.items()), el.sugar, el.index))
        out.sort(key=lambda e: self.info(e.lm)[0])
        return out

    def normal_form(self, f: dict, basis, budget=None) -> dict:
        red: dict = {}
        for el in basis:
            red.setdefault(el.pos, []).append(el)
        return self.reduce(dict(f), red, full=True, budget=budget or current_budget())
