"""The 2x2 Lax-pair ansatz as an exact polynomial system.

For xdot = G~ P x with G~ = [[0, 1], [-1, 0]] and a 2x2 P, look for L linear
in x (columns A x and Y x) and constant B with Ldot = [B, L].  Equating
coefficients of x1, x2 in all four entries yields 8 polynomial equations in
the 12 unknowns a1..a4, y1..y4, b1..b4.  This module builds that system
exactly (numeric rational or symbolic p), verifies the closed-form general
solution of the symmetric case together with its trace and denominator
identities, checks ideal membership of the distinguished y3,y4-only basis
element, and verifies the nilpotent family of the p1 = p4, p2 = -p3 case.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DenominatorZero, ValidationError
from .engine import buchberger, in_ideal, DEFAULT_OP_BUDGET, DEFAULT_PAIR_BUDGET
from .poly import GaussianRational, I_UNIT, LEX, MultiPoly, PolyRing

ANSATZ_UNKNOWNS = ("b1", "b2", "b3", "b4",
                   "a1", "a2", "a3", "a4",
                   "y1", "y2", "y3", "y4")


@dataclass(frozen=True)
class AnsatzSystem:
    """The 8 equations plus the ring they live in."""

    ring: PolyRing
    equations: tuple[MultiPoly, ...]
    symmetric: bool
    p_values: tuple | None   # four Fractions, or None when p is symbolic

    def residuals_at(self, values: dict) -> list:
        """Exact evaluation of all 8 equations at an assignment."""
        return [eq.evaluate(values) for eq in self.equations]


def _coefficients_in_x(entry: MultiPoly, big: PolyRing,
                       target: PolyRing) -> tuple[MultiPoly, MultiPoly]:
    """Split a polynomial linear in x1, x2 into its two coefficient polys."""
    ix1 = big.variables.index("x1")
    ix2 = big.variables.index("x2")
    keep = [i for i in range(big.nvars) if i not in (ix1, ix2)]
    names = [big.variables[i] for i in keep]
    idx_map = [target.variables.index(v) for v in names]
    c1: dict = {}
    c2: dict = {}
    for mono, c in entry.terms.items():
        if mono[ix1] + mono[ix2] != 1:
            raise ValidationError("entry is not linear in x1, x2")
        reduced = [0] * target.nvars
        for src_pos, tgt_pos in zip(keep, idx_map):
            reduced[tgt_pos] = mono[src_pos]
        dest = c1 if mono[ix1] else c2
        key = tuple(reduced)
        dest[key] = dest.get(key, 0) + c
    return target.from_terms(c1), target.from_terms(c2)


def build_ansatz_system(p_values=None, symmetric: bool = False,
                        order: str = LEX) -> AnsatzSystem:
    """Equate d/dt L with [B, L] entrywise and collect the 8 equations.

    p_values gives (p1, p2, p3, p4) as exact rationals; None keeps them as
    ring variables (below the unknowns in the order).  With symmetric=True
    the slot p3 must equal p2 (numeric) or is identified with it (symbolic).
    """
    if p_values is not None:
        p_values = tuple(Fraction(v) for v in p_values)
        if len(p_values) != 4:
            raise ValidationError("p_values must have four entries")
        if symmetric and p_values[2] != p_values[1]:
            raise ValidationError("symmetric ansatz requires p3 == p2")
        extra = ()
    else:
        extra = ("p1", "p2", "p4") if symmetric else ("p1", "p2", "p3", "p4")

    target = PolyRing(ANSATZ_UNKNOWNS + extra, order)
    big = PolyRing(("x1", "x2") + ANSATZ_UNKNOWNS + extra, order)

    x1, x2 = big.var("x1"), big.var("x2")
    u = {name: big.var(name) for name in ANSATZ_UNKNOWNS}
    if p_values is not None:
        p1, p2, p3, p4 = (big.const(v) for v in p_values)
    else:
        p1 = big.var("p1")
        p2 = big.var("p2")
        p3 = p2 if symmetric else big.var("p3")
        p4 = big.var("p4")

    # xdot = G~ P x with G~ = [[0, 1], [-1, 0]]
    xdot1 = p3 * x1 + p4 * x2
    xdot2 = -p1 * x1 - p2 * x2

    def lin(c1, c2, v1, v2):
        return u[c1] * v1 + u[c2] * v2

    l = [[lin("a1", "a2", x1, x2), lin("y1", "y2", x1, x2)],
         [lin("a3", "a4", x1, x2), lin("y3", "y4", x1, x2)]]
    ldot = [[lin("a1", "a2", xdot1, xdot2), lin("y1", "y2", xdot1, xdot2)],
            [lin("a3", "a4", xdot1, xdot2), lin("y3", "y4", xdot1, xdot2)]]
    b = [[u["b1"], u["b2"]], [u["b3"], u["b4"]]]

    equations = []
    for i in range(2):
        for j in range(2):
            comm = sum((b[i][k] * l[k][j] - l[i][k] * b[k][j] for k in range(2)),
                       big.zero())
            diff = ldot[i][j] - comm
            equations.extend(_coefficients_in_x(diff, big, target))
    return AnsatzSystem(ring=target, equations=tuple(equations),
                        symmetric=symmetric, p_values=p_values)


def general_solution_values(p1, p2, p4, b4, y1, y2, y3, y4) -> dict:
    """Closed-form solution of the symmetric-case ansatz.

    Free parameters are b4, y1..y4; the rest follow.  Raises DenominatorZero
    on either of the two degenerate loci.
    """
    p1, p2, p4, b4, y1, y2, y3, y4 = (
        Fraction(v) for v in (p1, p2, p4, b4, y1, y2, y3, y4))
    den1 = y2 * (p1 * y2 - 2 * p2 * y1) + p4 * y1 * y1
    den2 = y2 * y3 - y1 * y4
    if den1 == 0:
        raise DenominatorZero("y2 (p1 y2 - 2 p2 y1) + p4 y1^2 = 0")
    if den2 == 0:
        raise DenominatorZero("y2 y3 - y1 y4 = 0")
    a3 = (p1 * y4 * (y1 * y4 - 2 * y2 * y3)
          + 2 * p2 * y2 * y3 ** 2 - p4 * y1 * y3 ** 2) / den1
    a4 = (y4 ** 2 * (2 * p2 * y1 - p1 * y2)
          + p4 * y3 * (y2 * y3 - 2 * y1 * y4)) / den1
    b2 = -(p1 * y2 ** 2 - 2 * p2 * y1 * y2 + p4 * y1 ** 2) / (2 * den2)
    b3 = (p1 * y4 ** 2 - 2 * p2 * y3 * y4 + p4 * y3 ** 2) / (2 * den2)
    b1 = (-b4 * y1 * y4 + b4 * y2 * y3 + p1 * y2 * y4 - p2 * y1 * y4
          - p2 * y2 * y3 + p4 * y1 * y3) / den2
    return {"a1": -y3, "a2": -y4, "a3": a3, "a4": a4,
            "b1": b1, "b2": b2, "b3": b3, "b4": b4,
            "y1": y1, "y2": y2, "y3": y3, "y4": y4}


def verify_general_solution(p_values, free_values) -> dict:
    """Substitute the closed forms into the 8 symmetric-case equations.

    p_values = (p1, p2, p4), free_values = (b4, y1, y2, y3, y4).  Every
    equation must vanish exactly; additionally the trace identity
    Tr(L^2) * den1 = 4 (y2 y3 - y1 y4)^2 H holds as a polynomial identity
    in x1, x2, and the lower-left entry of L matches the displayed form.
    """
    p1, p2, p4 = (Fraction(v) for v in p_values)
    b4, y1, y2, y3, y4 = (Fraction(v) for v in free_values)
    values = general_solution_values(p1, p2, p4, b4, y1, y2, y3, y4)

    system = build_ansatz_system((p1, p2, p2, p4), symmetric=True)
    residuals = system.residuals_at(values)

    ring = PolyRing(("x1", "x2"))
    x1, x2 = ring.var("x1"), ring.var("x2")
    l00 = values["a1"] * x1 + values["a2"] * x2
    l01 = values["y1"] * x1 + values["y2"] * x2
    l10 = values["a3"] * x1 + values["a4"] * x2
    l11 = values["y3"] * x1 + values["y4"] * x2

    # displayed lower-left entry, grouped as in the closed form
    den1 = y2 * (p1 * y2 - 2 * p2 * y1) + p4 * y1 * y1
    q = ((p1 * y4 * (y1 * y4 - 2 * y2 * y3) + 2 * p2 * y2 * y3 ** 2
          - p4 * y1 * y3 ** 2) / den1) * x1 + \
        (((2 * p2 * y1 - p1 * y2) * y4 ** 2
          + p4 * y3 * (y2 * y3 - 2 * y1 * y4)) / den1) * x2
    q_matches = (l10 - q).is_zero()

    trace = l00 * l00 + l11 * l11 + 2 * (l01 * l10)
    ham = (p1 * x1 * x1 + 2 * p2 * x1 * x2 + p4 * x2 * x2) * Fraction(1, 2)
    den2 = y2 * y3 - y1 * y4
    trace_ok = (trace * den1 - 4 * den2 * den2 * ham).is_zero()

    return {
        "equations_zero": all(r == 0 for r in residuals),
        "residuals": residuals,
        "q_matches": q_matches,
        "trace_identity": trace_ok,
    }


def denominator_identities() -> dict:
    """Both denominators of the general solution, as exact symbolic identities.

    den1 = (y1, y2) G~^T P G~ (y1, y2)^T and den2 = (y1, y2) G~^T (y3, y4)^T,
    verified in the polynomial ring over p1, p2, p4, y1..y4.
    """
    ring = PolyRing(("p1", "p2", "p4", "y1", "y2", "y3", "y4"))
    p1, p2, p4, y1, y2, y3, y4 = ring.vars()

    # G~^T P G~ for symmetric P = [[p1, p2], [p2, p4]]: [[p4, -p2], [-p2, p1]]
    rhs1 = p4 * y1 * y1 - 2 * p2 * y1 * y2 + p1 * y2 * y2
    lhs1 = y2 * (p1 * y2 - 2 * p2 * y1) + p4 * y1 * y1

    # G~^T (y3, y4)^T = (-y4, y3)^T
    rhs2 = y1 * (-y4) + y2 * y3
    lhs2 = y2 * y3 - y1 * y4

    return {
        "quadratic_form_identity": (lhs1 - rhs1).is_zero(),
        "pairing_identity": (lhs2 - rhs2).is_zero(),
    }


def displayed_basis_element(p_values, ring: PolyRing | None = None) -> MultiPoly:
    """The degree-2 element in y3, y4 only, written out term by term."""
    p1, p2, p3, p4 = (Fraction(v) for v in p_values)
    if ring is None:
        ring = PolyRing(ANSATZ_UNKNOWNS)
    y3, y4 = ring.var("y3"), ring.var("y4")
    return (
        p1 * p1 * p2 * p4 * y4 * y4
        - p1 * p1 * p3 * p4 * y4 * y4
        - p1 * p2 * p2 * p3 * y4 * y4
        - p1 * p2 * p2 * p4 * y3 * y4
        + p1 * p2 * p3 * p3 * y4 * y4
        + p1 * p2 * p4 * p4 * y3 * y3
        + p1 * p3 * p3 * p4 * y3 * y4
        - p1 * p3 * p4 * p4 * y3 * y3
        + p2 * p2 * p2 * p3 * y3 * y4
        - p2 * p2 * p3 * p4 * y3 * y3
        - p2 * p3 * p3 * p3 * y3 * y4
        + p2 * p3 * p3 * p4 * y3 * y3
    )


def basis_element_membership(p_values,
                             pair_budget: int = DEFAULT_PAIR_BUDGET,
                             op_budget: int = DEFAULT_OP_BUDGET) -> dict:
    """Check the displayed element lies in the (non-symmetric) ansatz ideal.

    The element belongs to the generically computed Groebner basis, so its
    specialization at any numeric p must reduce to zero modulo the basis of
    the specialized ideal.
    """
    system = build_ansatz_system(tuple(p_values), symmetric=False)
    basis = buchberger(list(system.equations),
                       pair_budget=pair_budget, op_budget=op_budget)
    element = displayed_basis_element(p_values, system.ring)
    return {
        "member": in_ideal(element, basis, op_budget=op_budget),
        "basis_size": len(basis),
        "element_terms": len(element.terms),
    }


def degenerate_family_check(p1, p2, y2) -> dict:
    """The p1 = p4 != 0, p2 = -p3 != 0 family: Lax pairs with L^2 = 0.

    Scaled by the free parameter y2, L = (i x1 - x2) * [[1, -y2], [1/y2, -1]]
    is nilpotent, so every trace power vanishes and the family contributes
    no first integrals.  The completing B = mu/2 [[0, y2], [1/y2, 0]] with
    mu = -(p2 + i p1) satisfies all 8 equations exactly over Q(i).
    """
    p1 = Fraction(p1)
    p2 = Fraction(p2)
    y2 = Fraction(y2)
    if p1 == 0 or p2 == 0:
        raise ValidationError("family requires p1 = p4 != 0 and p2 = -p3 != 0")
    if y2 == 0:
        raise ValidationError("the free scale y2 must be nonzero")

    i = I_UNIT
    mu = -(GaussianRational(p2) + i * p1)
    values = {
        "a1": i, "a2": GaussianRational(-1),
        "a3": i / y2, "a4": GaussianRational(-1) / y2,
        "y1": -(i * y2), "y2": GaussianRational(y2),
        "y3": -i, "y4": GaussianRational(1),
        "b1": GaussianRational(0), "b2": mu * y2 / 2,
        "b3": mu / (2 * y2), "b4": GaussianRational(0),
    }
    system = build_ansatz_system((p1, p2, -p2, p1), symmetric=False)
    residuals = system.residuals_at(values)

    ring = PolyRing(("x1", "x2"))
    x1, x2 = ring.var("x1"), ring.var("x2")
    u = i * x1 - x2
    l = [[u, -(u * y2)], [u * (Fraction(1) / y2), -u]]
    square = [[sum((l[r][k] * l[k][c] for k in range(2)), ring.zero())
               for c in range(2)] for r in range(2)]
    nilpotent = all(square[r][c].is_zero() for r in range(2) for c in range(2))
    trace_sq = l[0][0] * l[0][0] + l[1][1] * l[1][1] + 2 * (l[0][1] * l[1][0])

    return {
        "equations_zero": all(r == 0 for r in residuals),
        "l_squared_zero": nilpotent,
        "trace_zero": trace_sq.is_zero(),
    }
