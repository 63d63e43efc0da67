"""Buchberger's algorithm and exact division over MultiPoly.

The control flow (pair queue with the Gebauer-Moller criteria, normal
selection strategy, minimalization, tail reduction) lives here once; the
hot division loop runs in a kernel selected at import time -- the compiled
_ckernel if available, else the pure-Python _pykernel.  Set
LAXFORGE_KERNEL=python|c to force the choice.

Every returned basis is the reduced Groebner basis (monic, mutually
reduced, sorted by leading monomial descending), and by default every
S-polynomial of the result is re-reduced to zero as a post-hoc certificate.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm

from ..errors import ResourceExceeded, RingMismatch, VerificationError
from .poly import GREVLEX, MultiPoly, PolyRing
from . import _pykernel
from ._pykernel import content_strip, mono_div, mono_lcm, mono_mul, order_key

DEFAULT_PAIR_BUDGET = 200_000
DEFAULT_OP_BUDGET = 10_000_000


def _load_kernel():
    forced = os.environ.get("LAXFORGE_KERNEL", "").strip().lower()
    if forced in ("python", "py", "pure"):
        return _pykernel
    if forced == "c":
        from . import _ckernel
        return _ckernel
    try:
        from . import _ckernel
        return _ckernel
    except ImportError:
        return _pykernel


_KERNEL = _load_kernel()


def kernel_name() -> str:
    """Which reduction kernel is active ('c' or 'python')."""
    return _KERNEL.KERNEL_NAME


def _require_rational(p: MultiPoly):
    for c in p.terms.values():
        if not isinstance(c, Fraction):
            raise RingMismatch(
                "Groebner operations need Fraction coefficients, got "
                f"{type(c).__name__}")


def _to_int_terms(p: MultiPoly) -> tuple[dict, int]:
    """Clear denominators; returns (integer terms, denominator used)."""
    _require_rational(p)
    den = 1
    for c in p.terms.values():
        den = lcm(den, c.denominator)
    return {m: int(c * den) for m, c in p.terms.items()}, den


def _monic_from_int(ring: PolyRing, terms: dict) -> MultiPoly:
    lc = terms[max(terms, key=ring.key)]
    return MultiPoly(ring, {m: Fraction(c, lc) for m, c in terms.items()})


def _common_ring(polys) -> PolyRing:
    rings = {p.ring for p in polys}
    if len(rings) != 1:
        raise RingMismatch("polynomials come from different rings")
    return rings.pop()


def s_polynomial(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Exact S-polynomial: (L/lt f) f - (L/lt g) g with L = lcm of the lms."""
    ring = _common_ring([f, g])
    _require_rational(f)
    _require_rational(g)
    if f.is_zero() or g.is_zero():
        raise VerificationError("S-polynomial of the zero polynomial")
    mf, cf = f.leading_term()
    mg, cg = g.leading_term()
    l = mono_lcm(mf, mg)
    out: dict = {}
    qf, qg = mono_div(l, mf), mono_div(l, mg)
    for m, c in f.terms.items():
        key = mono_mul(qf, m)
        out[key] = out.get(key, 0) + c / cf
    for m, c in g.terms.items():
        key = mono_mul(qg, m)
        s = out.get(key, 0) - c / cg
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return MultiPoly(ring, {m: c for m, c in out.items() if c})


def reduce(f: MultiPoly, basis: list[MultiPoly],
           op_budget: int = DEFAULT_OP_BUDGET) -> MultiPoly:
    """Multivariate division: the normal form of f modulo basis.

    The remainder is canonical when basis is a Groebner basis; the division
    scan order (basis list order) makes it deterministic in general.
    """
    ring = _common_ring([f, *basis]) if basis else f.ring
    if f.is_zero():
        return f
    f_int, f_den = _to_int_terms(f)
    grevlex = ring.order == GREVLEX
    state = _KERNEL.ReducerState(grevlex, op_budget)
    any_basis = False
    for g in basis:
        if g.is_zero():
            continue
        state.push(_to_int_terms(g)[0])
        any_basis = True
    if not any_basis:
        return f
    out, mult = state.normal_form(f_int)
    scale = Fraction(1, mult * f_den)
    return MultiPoly(ring, {m: c * scale for m, c in out.items()})


def _divides(m1, m2) -> bool:
    for a, b in zip(m1, m2):
        if a > b:
            return False
    return True


def _update_pairs(pairs: list, lms: list, t: int, keyfn):
    """Gebauer-Moller update after appending the basis element with index t.

    Candidates are scanned in ascending lcm order, so the proper-divisor
    criterion only needs to test against earlier survivors (divisibility
    implies order-smaller, and dropping is transitive).
    """
    tau = lms[t]
    cand = [(mono_lcm(lms[i], tau), i) for i in range(t)]
    cand.sort(key=lambda entry: keyfn(entry[0]))
    survivors: list = []
    kept_lcms: list = []
    for l, i in cand:
        drop = False
        for l2 in kept_lcms:
            if l2 != l and _divides(l2, l):
                drop = True
                break
        if not drop:
            survivors.append((l, i))
            kept_lcms.append(l)
    # one pair per lcm value; a coprime member retires its whole class
    fresh = []
    pos = 0
    while pos < len(survivors):
        l = survivors[pos][0]
        end = pos
        coprime = False
        while end < len(survivors) and survivors[end][0] == l:
            if l == mono_mul(lms[survivors[end][1]], tau):
                coprime = True
            end += 1
        if not coprime:
            fresh.append((survivors[pos][1], t, l))
        pos = end
    out = []
    for (i, j, l) in pairs:
        if _divides(tau, l) and \
                mono_lcm(lms[i], tau) != l and mono_lcm(lms[j], tau) != l:
            continue
        out.append((i, j, l))
    out.extend(fresh)
    return out


def buchberger(generators: list[MultiPoly],
               pair_budget: int = DEFAULT_PAIR_BUDGET,
               op_budget: int = DEFAULT_OP_BUDGET,
               verify: bool = True) -> list[MultiPoly]:
    """Reduced Groebner basis of the ideal generated by the inputs.

    Raises ResourceExceeded past the S-pair / term-operation budgets.  With
    verify=True (default) every S-polynomial of the returned basis is
    re-reduced to zero afterwards, certifying the result independently of
    the pair-pruning criteria used during the run.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return []
    ring = _common_ring(gens)
    grevlex = ring.order == GREVLEX
    keyfn = order_key(grevlex)

    state = _KERNEL.ReducerState(grevlex, op_budget)
    raw: list[dict] = []
    lms: list[tuple] = []
    pairs: list = []

    def push(p_int: dict):
        nonlocal pairs
        stored = state.push(p_int)
        raw.append(stored)
        lms.append(max(stored, key=keyfn))
        pairs = _update_pairs(pairs, lms, len(raw) - 1, keyfn)

    for g in gens:
        push(_to_int_terms(g)[0])

    steps = 0
    while pairs:
        steps += 1
        if steps > pair_budget:
            raise ResourceExceeded(f"S-pair budget exceeded ({pair_budget})")
        best = min(range(len(pairs)),
                   key=lambda k: (keyfn(pairs[k][2]), pairs[k][0], pairs[k][1]))
        i, j, _ = pairs.pop(best)
        h = state.reduce_spair(i, j)
        if h:
            push(h)

    # minimal basis: drop elements whose lm another lm divides
    order = sorted(range(len(raw)), key=lambda i: keyfn(lms[i]))
    alive = [True] * len(raw)
    for pos, i in enumerate(order):
        for j in order[:pos]:
            if alive[j] and mono_div(lms[i], lms[j]) is not None:
                alive[i] = False
                break
    kept = [raw[i] for i in range(len(raw)) if alive[i]]

    # reduced basis: tail-reduce each against the others
    final_int: list[dict] = []
    for i, g in enumerate(kept):
        other = _KERNEL.ReducerState(grevlex, op_budget)
        for k, o in enumerate(kept):
            if k != i:
                other.push(o)
        h = other.reduce(g)
        if h:
            final_int.append(h)
    final_int.sort(key=lambda p: keyfn(max(p, key=keyfn)), reverse=True)
    basis = [_monic_from_int(ring, p) for p in final_int]

    if verify:
        verify_groebner(basis, op_budget=op_budget)
    return basis


def verify_groebner(basis: list[MultiPoly],
                    op_budget: int = DEFAULT_OP_BUDGET) -> None:
    """Certify a basis by reducing every S-polynomial to zero."""
    if not basis:
        return
    ring = _common_ring(basis)
    grevlex = ring.order == GREVLEX
    state = _KERNEL.ReducerState(grevlex, op_budget)
    for g in basis:
        state.push(_to_int_terms(g)[0])
    n = len(basis)
    for i in range(n):
        for j in range(i + 1, n):
            if state.reduce_spair(i, j):
                raise VerificationError(
                    f"S-polynomial of basis elements {i}, {j} does not "
                    "reduce to zero: not a Groebner basis")


def in_ideal(f: MultiPoly, basis: list[MultiPoly],
             op_budget: int = DEFAULT_OP_BUDGET) -> bool:
    """Ideal membership through a Groebner basis: normal form == 0."""
    return reduce(f, basis, op_budget=op_budget).is_zero()
