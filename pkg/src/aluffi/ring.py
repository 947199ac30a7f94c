"""Polynomial rings, monomial orders and exact sparse polynomials.

A ring is described by a frozen :class:`RingSpec`; polynomials are immutable
:class:`Polynomial` objects whose terms live in a dict keyed by exponent
tuples.  Coefficients are ``gmpy2.mpq`` over the rationals and plain ints
(least nonnegative residues) over a prime field.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import gmpy2
from gmpy2 import mpq

from .errors import DegreeCapExceeded, RingError, RingMismatchError

DEFAULT_DEGREE_CAP = 64

LT, EQ, GT = -1, 0, 1


# --------------------------------------------------------------------------
# monomial orders
# --------------------------------------------------------------------------

def _grevlex_dkey(e):
    return (-sum(e),) + e[::-1]


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order descriptor.

    ``kind`` is one of ``lex``, ``deglex``, ``degrevlex``, ``block`` or
    ``weighted``.  For ``block`` the variables listed in ``block`` (by index)
    form the first, dominant block; each block is ordered by degrevlex.  For
    ``weighted`` the weight vector is compared first with degrevlex breaking
    ties.
    """

    kind: str = "degrevlex"
    weights: tuple = ()
    block: tuple = ()

    def __post_init__(self):
        if self.kind not in ("lex", "deglex", "degrevlex", "block", "weighted"):
            raise RingError(f"unknown monomial order {self.kind!r}")
        if self.kind == "weighted" and (not self.weights or any(w <= 0 for w in self.weights)):
            raise RingError("weighted order needs strictly positive weights")
        if self.kind == "block" and len(set(self.block)) != len(self.block):
            raise RingError("block order lists a variable twice")

    @classmethod
    def coerce(cls, order) -> "MonomialOrder":
        if isinstance(order, MonomialOrder):
            return order
        if isinstance(order, str):
            return cls(order)
        if isinstance(order, dict) and "kind" in order:
            return cls(order["kind"], tuple(order.get("weights", ())), tuple(order.get("block", ())))
        raise RingError(f"cannot interpret {order!r} as a monomial order")

    def validate(self, nvars: int) -> None:
        if self.kind == "weighted" and len(self.weights) != nvars:
            raise RingError("weight vector length differs from the number of variables")
        if self.kind == "block":
            if any(not 0 <= i < nvars for i in self.block):
                raise RingError("block order refers to a missing variable")

    def dkey(self, nvars: int):
        """Return a key function on exponent tuples sorting *descending* in this order."""
        kind = self.kind
        if kind == "lex":
            return lambda e: tuple(map(operator.neg, e))
        if kind == "deglex":
            return lambda e: (-sum(e),) + tuple(map(operator.neg, e))
        if kind == "degrevlex":
            return _grevlex_dkey
        if kind == "weighted":
            w = self.weights

            def wkey(e):
                return (-sum(map(operator.mul, w, e)),) + _grevlex_dkey(e)
            return wkey
        first = tuple(self.block)
        rest = tuple(i for i in range(nvars) if i not in set(first))
        if first == tuple(range(len(first))):
            k = len(first)
            return lambda e: _grevlex_dkey(e[:k]) + _grevlex_dkey(e[k:])

        def bkey(e):
            return _grevlex_dkey(tuple(e[i] for i in first)) + _grevlex_dkey(tuple(e[i] for i in rest))
        return bkey

    @property
    def degree_compatible(self) -> bool:
        return self.kind in ("deglex", "degrevlex", "weighted")

    def degree_function(self):
        if self.kind == "weighted":
            w = self.weights
            return lambda e: sum(map(operator.mul, w, e))
        return sum

    def compare(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Three-way comparison: ``GT`` when ``a`` is the larger monomial."""
        if len(a) != len(b):
            raise RingError("monomials of different arity")
        key = self.dkey(len(a))
        ka, kb = key(tuple(a)), key(tuple(b))
        if ka == kb:
            return EQ
        return GT if ka < kb else LT

    def describe(self):
        if self.kind == "weighted":
            return {"kind": "weighted", "weights": list(self.weights)}
        if self.kind == "block":
            return {"kind": "block", "block": list(self.block)}
        return {"kind": self.kind}


def monomial_compare(order, a, b) -> int:
    return MonomialOrder.coerce(order).compare(a, b)


# --------------------------------------------------------------------------
# rings
# --------------------------------------------------------------------------

def _is_prime(p: int) -> bool:
    return p >= 2 and gmpy2.is_prime(p)


@dataclass(frozen=True)
class RingSpec:
    """k[vars] or k[vars]/quotient over Q (``characteristic=0``) or GF(p)."""

    vars: tuple
    characteristic: int = 0
    order: MonomialOrder = field(default_factory=MonomialOrder)
    quotient: tuple = ()
    degree_cap: int = DEFAULT_DEGREE_CAP

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "order", MonomialOrder.coerce(self.order))
        if len(set(self.vars)) != len(self.vars):
            raise RingError("variable names must be unique")
        if any(not isinstance(v, str) or not v for v in self.vars):
            raise RingError("variable names must be nonempty strings")
        if self.characteristic and not _is_prime(self.characteristic):
            raise RingError(f"characteristic {self.characteristic} is not prime")
        self.order.validate(len(self.vars))
        quotient = tuple(self.quotient)
        for q in quotient:
            if not isinstance(q, Polynomial) or q.ring != self.cover:
                raise RingError("quotient generators must be polynomials of the cover ring")
        object.__setattr__(self, "quotient", tuple(q for q in quotient if q))

    # -- derived rings --------------------------------------------------
    @cached_property
    def cover(self) -> "RingSpec":
        """The polynomial ring without the quotient ideal."""
        if not self.quotient:
            return self
        return RingSpec(self.vars, self.characteristic, self.order, (), self.degree_cap)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vars)}

    def with_order(self, order) -> "RingSpec":
        order = MonomialOrder.coerce(order)
        if order == self.order:
            return self
        cover = RingSpec(self.vars, self.characteristic, order, (), self.degree_cap)
        return RingSpec(self.vars, self.characteristic, order,
                        tuple(q.embed(cover) for q in self.quotient), self.degree_cap)

    def with_quotient(self, gens: Iterable["Polynomial"]) -> "RingSpec":
        """R/(existing quotient + gens)."""
        extra = tuple(g.lift() for g in gens)
        return RingSpec(self.vars, self.characteristic, self.order,
                        self.quotient + extra, self.degree_cap)

    def polynomial_ring(self, vars, order=None) -> "RingSpec":
        """A quotient-free ring over the same field with other variables."""
        return RingSpec(tuple(vars), self.characteristic,
                        order if order is not None else MonomialOrder(), (), self.degree_cap)

    # -- coefficients ---------------------------------------------------
    def coerce_coeff(self, c):
        p = self.characteristic
        if p:
            if isinstance(c, (Fraction,)) or type(c).__name__ == "mpq":
                num, den = int(c.numerator), int(c.denominator)
                if den % p == 0:
                    raise ZeroDivisionError(f"denominator divisible by {p}")
                return num * pow(den, -1, p) % p
            return int(c) % p
        if isinstance(c, Fraction):
            return mpq(c.numerator, c.denominator)
        return mpq(c)

    def inverse(self, c):
        if self.characteristic:
            return pow(int(c), -1, self.characteristic)
        return 1 / c

    # -- elements -------------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: self.coerce_coeff(c)})

    def gen(self, name) -> "Polynomial":
        if isinstance(name, int):
            i = name
        else:
            try:
                i = self.index[name]
            except KeyError:
                raise RingError(f"unknown variable {name!r}") from None
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.coerce_coeff(1)})

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): self.coerce_coeff(coeff)})

    def parse(self, text: str) -> "Polynomial":
        from .parsing import parse_polynomial
        return parse_polynomial(text, self)

    def __call__(self, obj) -> "Polynomial":
        if isinstance(obj, Polynomial):
            return obj.embed(self)
        if isinstance(obj, str):
            return self.parse(obj)
        return self.constant(obj)

    def describe(self) -> dict:
        d = {"vars": list(self.vars), "characteristic": self.characteristic,
             "order": self.order.describe()}
        if self.quotient:
            d["quotient"] = [str(q) for q in self.quotient]
        return d

    def __repr__(self):
        field_name = "QQ" if not self.characteristic else f"GF({self.characteristic})"
        q = f" / ({', '.join(map(str, self.quotient))})" if self.quotient else ""
        return f"{field_name}[{', '.join(self.vars)}; {self.order.kind}]{q}"


def polynomial_ring(vars, characteristic=0, order="degrevlex", degree_cap=DEFAULT_DEGREE_CAP):
    """Build a ring and return ``(ring, generators...)``, sympy-``ring()`` style."""
    if isinstance(vars, str):
        vars = [v.strip() for v in vars.replace(",", " ").split()]
    R = RingSpec(tuple(vars), characteristic, MonomialOrder.coerce(order), (), degree_cap)
    return (R, *R.gens())


# --------------------------------------------------------------------------
# polynomials
# --------------------------------------------------------------------------

def _fmt_coeff(c) -> str:
    return str(c)


class Polynomial:
    """An immutable sparse polynomial.

    ``terms`` maps exponent tuples to nonzero canonical coefficients.  Over a
    quotient ring the object is a representative; equality is equality of
    representatives, use ideal membership for equality modulo the quotient.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping, *, _trusted=False):
        self.ring = ring
        if _trusted:
            self._terms = terms
        else:
            n = ring.nvars
            clean = {}
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != n or any(x < 0 for x in e):
                    raise RingError(f"bad exponent vector {e} for {ring!r}")
                c = ring.coerce_coeff(c)
                if c:
                    clean[e] = c
            self._terms = clean
        self._hash = None

    # -- basic accessors ------------------------------------------------
    @property
    def terms_dict(self) -> dict:
        return self._terms

    def terms(self) -> list:
        """(exponents, coefficient) pairs, strictly descending in the ring order."""
        key = self.ring.order.dkey(self.ring.nvars)
        return sorted(self._terms.items(), key=lambda t: key(t[0]))

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def leading_term(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = self.ring.order.dkey(self.ring.nvars)
        e = min(self._terms, key=key)
        return e, self._terms[e]

    def leading_monomial(self):
        return self.leading_term()[0]

    def leading_coefficient(self):
        return self.leading_term()[1]

    def degree(self, var=None) -> int:
        """Total degree (or degree in one variable); -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e) for e in self._terms)
        i = self.ring.index[var] if isinstance(var, str) else var
        return max(e[i] for e in self._terms)

    def min_degree(self) -> int:
        return min(sum(e) for e in self._terms) if self._terms else -1

    def weighted_degrees(self, weights) -> set:
        return {sum(map(operator.mul, weights, e)) for e in self._terms}

    def is_homogeneous(self, weights=None) -> bool:
        if weights is None:
            weights = (1,) * self.ring.nvars
        return len(self.weighted_degrees(weights)) <= 1

    def homogeneous_components(self, weights) -> dict:
        out = {}
        for e, c in self._terms.items():
            d = sum(map(operator.mul, weights, e))
            out.setdefault(d, {})[e] = c
        return {d: Polynomial(self.ring, t, _trusted=True) for d, t in out.items()}

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self):
        return self._terms.get((0,) * self.ring.nvars, self.ring.coerce_coeff(0))

    def support(self) -> set:
        """Indices of variables that occur."""
        return {i for e in self._terms for i, x in enumerate(e) if x}

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # -- arithmetic -----------------------------------------------------
    def _check(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "mpq":
            return self.ring.constant(other)
        return NotImplemented

    def _reduce(self, c):
        p = self.ring.characteristic
        return c % p if p else c

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        p = self.ring.characteristic
        for e, c in other._terms.items():
            v = terms.get(e)
            if v is None:
                terms[e] = c
            else:
                v = v + c
                if p:
                    v %= p
                if v:
                    terms[e] = v
                else:
                    del terms[e]
        return Polynomial(self.ring, terms, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.characteristic
        if p:
            return Polynomial(self.ring, {e: (-c) % p for e, c in self._terms.items()}, _trusted=True)
        return Polynomial(self.ring, {e: -c for e, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return self.ring.zero()
        if self.degree() + other.degree() > self.ring.degree_cap:
            raise DegreeCapExceeded(f"product degree exceeds cap {self.ring.degree_cap}")
        p = self.ring.characteristic
        terms = {}
        add = operator.add
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(map(add, e1, e2))
                v = terms.get(e)
                terms[e] = c1 * c2 if v is None else v + c1 * c2
        if p:
            terms = {e: c % p for e, c in terms.items() if c % p}
        else:
            terms = {e: c for e, c in terms.items() if c}
        return Polynomial(self.ring, terms, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        if n and self._terms and self.degree() * n > self.ring.degree_cap:
            raise DegreeCapExceeded(f"power degree exceeds cap {self.ring.degree_cap}")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = self.ring.coerce_coeff(c)
        if not c:
            return self.ring.zero()
        p = self.ring.characteristic
        if p:
            return Polynomial(self.ring, {e: v * c % p for e, v in self._terms.items()}, _trusted=True)
        return Polynomial(self.ring, {e: v * c for e, v in self._terms.items()}, _trusted=True)

    def mul_monomial(self, exps, coeff=1) -> "Polynomial":
        add = operator.add
        exps = tuple(exps)
        out = Polynomial(self.ring, {tuple(map(add, e, exps)): c for e, c in self._terms.items()},
                         _trusted=True)
        return out if coeff == 1 else out.scale(coeff)

    def monic(self) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(self.ring.inverse(self.leading_coefficient()))

    def primitive(self) -> "Polynomial":
        """Scale to coprime integer coefficients with positive leading coefficient (over Q)."""
        if not self._terms or self.ring.characteristic:
            return self.monic()
        den = 1
        for c in self._terms.values():
            den = gmpy2.lcm(den, c.denominator)
        nums = [c * den for c in self._terms.values()]
        g = 0
        for v in nums:
            g = gmpy2.gcd(g, v.numerator)
        s = den / g
        if self.leading_coefficient() < 0:
            s = -s
        return self.scale(s)

    # -- calculus and substitution -------------------------------------
    def derivative(self, var) -> "Polynomial":
        i = self.ring.index[var] if isinstance(var, str) else var
        terms = {}
        for e, c in self._terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                terms[tuple(e2)] = c * e[i]
        return Polynomial(self.ring, terms)

    def substitute(self, images: Sequence["Polynomial"], target: RingSpec) -> "Polynomial":
        """Image under the ring map sending variable ``i`` to ``images[i]`` in ``target``."""
        if len(images) != self.ring.nvars:
            raise RingError("need one image per variable")
        images = [target(im) for im in images]
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        total = {}
        p = target.characteristic
        for e, c in self._terms.items():
            term = target.constant(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for e2, c2 in term._terms.items():
                total[e2] = total.get(e2, 0) + c2
        if p:
            total = {e: v % p for e, v in total.items() if v % p}
        else:
            total = {e: v for e, v in total.items() if v}
        return Polynomial(target, total, _trusted=True)

    def evaluate(self, point):
        """Evaluate at ``{var: value}`` (covering every variable that occurs) or a value sequence."""
        if isinstance(point, Mapping):
            vals = [point.get(v) for v in self.ring.vars]
        else:
            vals = list(point)
            if len(vals) != self.ring.nvars:
                raise RingError(f"expected {self.ring.nvars} values, got {len(vals)}")
        total = self.ring.coerce_coeff(0)
        for e, c in self._terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    if vals[i] is None:
                        raise RingError(f"no value for {self.ring.vars[i]}")
                    term = term * self.ring.coerce_coeff(vals[i]) ** k
            total = total + term
        return self.ring.coerce_coeff(total)

    def embed(self, ring: RingSpec) -> "Polynomial":
        """The same polynomial read in ``ring``, matching variables by name."""
        if ring == self.ring:
            return self
        if ring.characteristic != self.ring.characteristic:
            raise RingMismatchError("coefficient fields differ")
        if ring.vars == self.ring.vars:
            return Polynomial(ring, self._terms, _trusted=True)
        used = self.support()
        try:
            pos = [ring.index[self.ring.vars[i]] for i in range(self.ring.nvars)]
        except KeyError:
            missing = [self.ring.vars[i] for i in used if self.ring.vars[i] not in ring.index]
            if missing:
                raise RingMismatchError(f"variables {missing} absent from {ring!r}") from None
            pos = [ring.index.get(v, -1) for v in self.ring.vars]
        n = ring.nvars
        terms = {}
        for e, c in self._terms.items():
            e2 = [0] * n
            for i, k in enumerate(e):
                if k:
                    e2[pos[i]] = k
            terms[tuple(e2)] = c
        return Polynomial(ring, terms, _trusted=True)

    def lift(self) -> "Polynomial":
        """The representative in the quotient-free cover ring."""
        return self.embed(self.ring.cover)

    # -- comparison / printing -----------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "mpq":
            return self._terms == self.ring.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.vars, self.ring.characteristic, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        names = self.ring.vars
        for e, c in self.terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k)
            neg = (c < 0) if not self.ring.characteristic else False
            a = -c if neg else c
            if not mono:
                body = _fmt_coeff(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_coeff(a)}*{mono}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def poly_arith(op: str, a: Polynomial, b):
    """Functional form of the four ring operations (``add``/``sub``/``mul``/``pow``)."""
    if op == "pow":
        return a ** b
    if isinstance(b, Polynomial) and b.ring != a.ring:
        raise RingMismatchError(f"{a.ring!r} vs {b.ring!r}")
    return {"add": operator.add, "sub": operator.sub, "mul": operator.mul}[op](a, b)
