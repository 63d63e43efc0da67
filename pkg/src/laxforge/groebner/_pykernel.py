"""Pure-Python reduction kernel for the Buchberger engine.

A polynomial crosses this boundary as dict[exponent-tuple, int]; callers
clear rational denominators first.  Reduction is integer pseudo-division
with content (gcd) stripping, which keeps coefficients small.  The compiled
kernel in _ckernel.pyx implements the same ReducerState/s_poly interface
with packed monomials; the engine drives either one.

The tuple-level monomial helpers here are also the shared utilities the
engine uses for pair bookkeeping (cold path), whichever kernel is active.
"""

from __future__ import annotations

from math import gcd

from ..errors import ResourceExceeded

KERNEL_NAME = "python"


def key_lex(m):
    return m


def key_grevlex(m):
    return (sum(m), tuple(-e for e in reversed(m)))


def order_key(grevlex: bool):
    return key_grevlex if grevlex else key_lex


def mono_mul(m1, m2):
    return tuple(a + b for a, b in zip(m1, m2))


def mono_div(m1, m2):
    out = []
    for a, b in zip(m1, m2):
        d = a - b
        if d < 0:
            return None
        out.append(d)
    return tuple(out)


def mono_lcm(m1, m2):
    return tuple(a if a > b else b for a, b in zip(m1, m2))


def content_strip(f: dict, keyfn) -> dict:
    """Divide by the integer content and make the leading coefficient > 0."""
    if not f:
        return f
    g = 0
    for c in f.values():
        g = gcd(g, c)
        if g == 1:
            break
    if f[max(f, key=keyfn)] < 0:
        g = -g
    if g != 1:
        return {m: c // g for m, c in f.items()}
    return f


def s_poly(f: dict, g: dict, grevlex: bool) -> dict:
    """Integer S-polynomial, content-stripped."""
    keyfn = order_key(grevlex)
    mf = max(f, key=keyfn)
    mg = max(g, key=keyfn)
    cf, cg = f[mf], g[mg]
    l = mono_lcm(mf, mg)
    qf, qg = mono_div(l, mf), mono_div(l, mg)
    g0 = gcd(cf, cg)
    af, ag = cg // g0, cf // g0
    out: dict = {}
    for m, c in f.items():
        out[mono_mul(qf, m)] = af * c
    for m, c in g.items():
        key = mono_mul(qg, m)
        s = out.get(key, 0) - ag * c
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return content_strip(out, keyfn)


class ReducerState:
    """A growing basis plus the integer division loop against it."""

    def __init__(self, grevlex: bool, op_budget: int):
        self.grevlex = grevlex
        self.keyfn = order_key(grevlex)
        self.op_budget = op_budget
        self.ops = 0
        self.polys: list[dict] = []
        self.lms: list[tuple] = []
        self.lcs: list[int] = []
        self.tails: list[list] = []

    def __len__(self):
        return len(self.lms)

    def lm_tuple(self, i: int) -> tuple:
        return self.lms[i]

    def _charge(self, n: int):
        self.ops += n
        if self.ops > self.op_budget:
            raise ResourceExceeded(
                f"term-operation budget exceeded ({self.op_budget})")

    def push(self, poly: dict) -> dict:
        """Append a basis element; returns its normalized integer form."""
        poly = content_strip(dict(poly), self.keyfn)
        if not poly:
            raise ValueError("cannot push the zero polynomial")
        lm = max(poly, key=self.keyfn)
        self.polys.append(poly)
        self.lms.append(lm)
        self.lcs.append(poly[lm])
        self.tails.append([(m, c) for m, c in poly.items() if m != lm])
        return poly

    def _divide(self, f: dict, track: bool):
        out: dict = {}
        mult = 1
        nb = len(self.lms)
        lms, lcs, tails = self.lms, self.lcs, self.tails
        keyfn = self.keyfn
        while f:
            m = max(f, key=keyfn)
            c = f.pop(m)
            reduced = False
            for i in range(nb):
                q = mono_div(m, lms[i])
                if q is None:
                    continue
                glc = lcs[i]
                g0 = gcd(c, glc)
                scale = abs(glc) // g0
                if scale != 1:
                    self._charge(len(f) + len(out))
                    for k in f:
                        f[k] *= scale
                    for k in out:
                        out[k] *= scale
                    mult *= scale
                    c *= scale
                factor = c // glc
                tail = tails[i]
                self._charge(len(tail))
                for gm, gc in tail:
                    key = mono_mul(q, gm)
                    s = f.get(key, 0) - factor * gc
                    if s:
                        f[key] = s
                    else:
                        f.pop(key, None)
                reduced = True
                break
            if not reduced:
                out[m] = c
        if track:
            return out, mult
        return content_strip(out, keyfn), 1

    def reduce(self, f: dict) -> dict:
        """Content-stripped full normal form (for basis building)."""
        return self._divide(dict(f), track=False)[0]

    def reduce_spair(self, i: int, j: int) -> dict:
        """Normal form of the S-polynomial of basis elements i and j."""
        sp = s_poly(self.polys[i], self.polys[j], self.grevlex)
        if not sp:
            return {}
        return self._divide(sp, track=False)[0]

    def normal_form(self, f: dict) -> tuple[dict, int]:
        """(mult * exact normal form of f, mult) with integer mult >= 1."""
        return self._divide(dict(f), track=True)
