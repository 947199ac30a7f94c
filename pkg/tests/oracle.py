"""Independent reference computations backed by sympy, used to freeze expected values."""

import sympy

from aluffi import Polynomial, RingSpec

_ORDERS = {"lex": "lex", "deglex": "grlex", "degrevlex": "grevlex"}


def symbols(ring: RingSpec):
    return sympy.symbols(list(ring.vars))


def to_sympy(f: Polynomial):
    return sympy.sympify(str(f).replace("^", "**"), locals={v: sympy.Symbol(v) for v in f.ring.vars})


def from_sympy(expr, ring: RingSpec) -> Polynomial:
    return ring.parse(str(sympy.expand(expr)).replace("**", "^"))


def reference_basis(gens, ring: RingSpec, order="degrevlex"):
    """Reduced Groebner basis from sympy, as a set of printed polynomials."""
    exprs = [to_sympy(g) for g in gens if g]
    if not exprs:
        return set()
    gb = sympy.groebner(exprs, *symbols(ring), order=_ORDERS[order],
                        modulus=ring.characteristic or None)
    return {str(from_sympy(g.as_expr(), ring).monic()) for g in gb.exprs}


def reference_member(f, gens, ring: RingSpec) -> bool:
    exprs = [to_sympy(g) for g in gens if g]
    if not exprs:
        return not f
    gb = sympy.groebner(exprs, *symbols(ring), order="grevlex")
    return gb.contains(to_sympy(f))


def reference_intersection(A_gens, B_gens, ring: RingSpec):
    """``A ∩ B`` by eliminating ``t`` from ``tA + (1-t)B`` in sympy."""
    t = sympy.Symbol("t_oracle")
    exprs = [t * to_sympy(a) for a in A_gens] + [(1 - t) * to_sympy(b) for b in B_gens]
    gb = sympy.groebner(exprs, t, *symbols(ring), order="lex")
    return [from_sympy(g, ring) for g in gb.exprs if t not in g.free_symbols]


def reference_kernel(images, source: RingSpec, target_vars):
    """Kernel of ``source -> k[target_vars]`` sending variables to ``images`` (sympy exprs)."""
    tv = sympy.symbols(list(target_vars))
    sv = symbols(source)
    graph = [s - img for s, img in zip(sv, images)]
    gb = sympy.groebner(graph, *tv, *sv, order="lex")
    return [from_sympy(g, source) for g in gb.exprs if not (g.free_symbols & set(tv))]
