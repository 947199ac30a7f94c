"""Parametric ideal families: monomial space curves, squarefree Veronese
ideals, generic 2 x n minors, points in the projective plane, line
arrangements, and Jacobian ideals."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import PreconditionError, RingError
from .ideal import Ideal, dimension_height, ideal_intersect, ring_map_kernel
from .ring import Polynomial, RingSpec, polynomial_ring


# --------------------------------------------------------------------------
# Jacobian ideals
# --------------------------------------------------------------------------

def jacobian_matrix(gens: Sequence[Polynomial]) -> list:
    ring = gens[0].ring
    return [[g.derivative(v) for v in ring.vars] for g in gens]


def determinant(rows: list) -> Polynomial:
    """Laplace expansion along the first row, memoized on the remaining columns."""
    k = len(rows)
    memo: dict = {}

    def det(r, cols):
        if r == k:
            return rows[0][0].ring.one()
        hit = memo.get((r, cols))
        if hit is not None:
            return hit
        total = rows[0][0].ring.zero()
        for i, c in enumerate(cols):
            entry = rows[r][c]
            if not entry:
                continue
            minor = det(r + 1, cols[:i] + cols[i + 1:])
            total = total + entry * minor if i % 2 == 0 else total - entry * minor
        memo[(r, cols)] = total
        return total

    return det(0, tuple(range(k)))


def minors(matrix: list, r: int) -> list:
    """All nonzero ``r x r`` minors of ``matrix`` (a list of rows)."""
    nrows, ncols = len(matrix), len(matrix[0])
    out = []
    for rs in itertools.combinations(range(nrows), r):
        for cs in itertools.combinations(range(ncols), r):
            d = determinant([[matrix[i][j] for j in cs] for i in rs])
            if d:
                out.append(d)
    return out


def jacobian_ideal(J: Ideal, height: int | None = None) -> Ideal:
    """``J`` plus the ``r x r`` minors of its Jacobian matrix, ``r = height(J)``."""
    if J.ring.characteristic:
        raise RingError("Jacobian ideals are only built over the rationals")
    gens = J.nonzero_gens()
    if not gens or J.is_zero():
        raise PreconditionError("the zero ideal has no Jacobian ideal")
    if J.is_unit():
        raise PreconditionError("the unit ideal has no Jacobian ideal")
    if height is None:
        _, height = dimension_height(J)
    if height <= 0:
        raise PreconditionError("J has height 0 (it is the unit ideal or zero)")
    return Ideal(J.ring, list(gens) + minors(jacobian_matrix(gens), height))


def minors_ideal(J: Ideal, r: int) -> Ideal:
    """The ideal of ``r x r`` minors of the Jacobian matrix of ``J``'s generators."""
    return Ideal(J.ring, minors(jacobian_matrix(J.nonzero_gens()), r))


# --------------------------------------------------------------------------
# monomial space curves
# --------------------------------------------------------------------------

def curve_weights(p: int, q: int) -> tuple:
    return (2 * q + 1, 2 * q + p + 1, 2 * q + 2 * p + 1)


def _check_curve(p, q):
    if p < 0 or q < 0:
        raise PreconditionError("p and q must be nonnegative")
    if q == 0 or p + q == 0:
        raise PreconditionError(f"(p, q) = ({p}, {q}) gives a nonpositive exponent "
                                "in the closed form of I")


def monomial_curve(p: int, q: int, ring: RingSpec | None = None):
    """Closed-form ``(J, I)`` for ``x = u^a, y = u^b, z = u^c`` with
    ``(a, b, c) = (2q+1, 2q+p+1, 2q+2p+1)``."""
    _check_curve(p, q)
    if ring is None:
        ring = polynomial_ring("x y z")[0]
    x, y, z = ring.gens()
    s = p + q
    J = Ideal(ring, [x ** (s + 1) - y * z ** q, x * z - y ** 2, x ** s * y - z ** (q + 1)])
    I = Ideal(ring, [x * z - y ** 2, x ** (s + 1), x ** s * y, x ** (s - 1) * y ** 2,
                     y * z ** q, y ** 2 * z ** (q - 1), z ** (q + 1)])
    return J, I


def toric_kernel(weights: Sequence[int], ring: RingSpec | None = None) -> Ideal:
    """Kernel of ``k[x, y, z] -> k[u]`` sending the variables to ``u^w``."""
    if ring is None:
        ring = polynomial_ring("x y z")[0]
    if len(weights) != ring.nvars or any(w <= 0 for w in weights):
        raise PreconditionError("need one positive weight per variable")
    target = RingSpec(("u",) if "u" not in ring.vars else ("u_",))
    u = target.gens()[0]
    return ring_map_kernel(ring, target, [u ** w for w in weights])


def curve_is_reduced_parametrization(p: int, q: int) -> bool:
    """Whether the weights are coprime, so the toric kernel is the curve's ideal."""
    a, b, c = curve_weights(p, q)
    return gcd(gcd(a, b), c) == 1


# --------------------------------------------------------------------------
# squarefree Veronese and generic matrices
# --------------------------------------------------------------------------

def squarefree_veronese(n: int, r: int):
    """``J`` = squarefree monomials of degree ``r`` in ``x0..xn``; ``I`` adds ``x_i^r x_j^r``."""
    if not 2 <= r <= n:
        raise PreconditionError(f"need 2 <= r <= n, got n={n}, r={r}")
    ring = polynomial_ring([f"x{i}" for i in range(n + 1)])[0]
    xs = ring.gens()
    J = []
    for combo in itertools.combinations(range(n + 1), r):
        m = ring.one()
        for i in combo:
            m = m * xs[i]
        J.append(m)
    extra = [xs[i] ** r * xs[j] ** r for i, j in itertools.combinations(range(n + 1), 2)]
    return Ideal(ring, J), Ideal(ring, J + extra)


def generic_matrix(n: int, ring: RingSpec | None = None) -> list:
    if ring is None:
        ring = polynomial_ring([f"x{i}" for i in range(1, 2 * n + 1)])[0]
    xs = ring.gens()
    return [xs[:n], xs[n:2 * n]]


def generic_matrix_minors(n: int) -> Ideal:
    """2 x 2 minors of the generic matrix ``[[x1..xn], [x(n+1)..x(2n)]]``."""
    if n < 3:
        raise PreconditionError("the generic matrix family needs n >= 3")
    M = generic_matrix(n)
    ring = M[0][0].ring
    return Ideal(ring, [M[0][i] * M[1][j] - M[0][j] * M[1][i]
                        for i, j in itertools.combinations(range(n), 2)])


# --------------------------------------------------------------------------
# points and line arrangements
# --------------------------------------------------------------------------

def _kernel_basis(column):
    """Two independent integer vectors orthogonal to a nonzero 3-vector."""
    c = [Fraction(v) for v in column]
    pivot = next(i for i, v in enumerate(c) if v)
    out = []
    for j in range(3):
        if j == pivot:
            continue
        v = [Fraction(0)] * 3
        v[j] = c[pivot]
        v[pivot] = -c[j]
        out.append(v)
    return out


def points_ideal(coords, ring: RingSpec | None = None) -> Ideal:
    """Vanishing ideal of the points of the projective plane given as columns of a 3 x k matrix."""
    if ring is None:
        ring = polynomial_ring("x y z")[0]
    if ring.nvars != 3:
        raise RingError("points live in a ring with three variables")
    rows = [list(r) for r in coords]
    if len(rows) != 3 or len({len(r) for r in rows}) != 1:
        raise PreconditionError("coordinates must form a 3 x k matrix")
    xs = ring.gens()
    ideals = []
    for k in range(len(rows[0])):
        col = [rows[i][k] for i in range(3)]
        if not any(col):
            raise PreconditionError(f"column {k} is zero")
        forms = []
        for v in _kernel_basis(col):
            f = ring.zero()
            for a, x in zip(v, xs):
                if a:
                    f = f + x * ring.constant(a)
            forms.append(f)
        ideals.append(Ideal(ring, forms))
    out = ideals[0]
    for P in ideals[1:]:
        out = ideal_intersect(out, P)
    return out.reduced()


def _proportional(f: Polynomial, g: Polynomial) -> bool:
    return f.monic() == g.monic()


def arrangement_gradient(forms, ring: RingSpec | None = None) -> Ideal:
    """Ideal of the partial derivatives of the product of linear forms."""
    if ring is None:
        ring = polynomial_ring("x y z")[0]
    polys = [ring(f) if isinstance(f, str) else f for f in forms]
    if not polys:
        raise PreconditionError("need at least one linear form")
    for f in polys:
        if f.degree() != 1 or not f.is_homogeneous():
            raise PreconditionError(f"{f} is not a linear form")
    for f, g in itertools.combinations(polys, 2):
        if _proportional(f, g):
            raise PreconditionError(f"repeated factor: {f} and {g} are proportional")
    prod = ring.one()
    for f in polys:
        prod = prod * f
    partials = [prod.derivative(v) for v in ring.vars]
    missing = [v for v, d in zip(ring.vars, partials) if not d]
    if missing:
        warnings.warn(f"the arrangement does not involve {', '.join(missing)}; "
                      "its partial derivative is zero", stacklevel=2)
    return Ideal(ring, partials)


# --------------------------------------------------------------------------
# job-level description
# --------------------------------------------------------------------------

FAMILIES = ("monomial_curve", "squarefree_veronese", "generic_matrix", "points", "arrangement")


@dataclass
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise PreconditionError(f"unknown family {self.family!r}; expected one of {FAMILIES}")

    def build(self) -> dict:
        """Named ideals of the family: ``J`` always, ``I`` when a closed form exists."""
        p = self.params
        if self.family == "monomial_curve":
            J, I = monomial_curve(int(p["p"]), int(p["q"]))
            return {"J": J, "I": I}
        if self.family == "squarefree_veronese":
            J, I = squarefree_veronese(int(p["n"]), int(p["r"]))
            return {"J": J, "I": I}
        if self.family == "generic_matrix":
            return {"J": generic_matrix_minors(int(p["n"]))}
        if self.family == "points":
            return {"J": points_ideal(p["coords"])}
        return {"J": arrangement_gradient(p["forms"])}
