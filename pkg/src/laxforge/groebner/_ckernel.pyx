# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
"""Compiled reduction kernel: same interface as _pykernel, packed monomials.

Exponent vectors are packed into bytes objects with 2-byte big-endian slots
laid out so that raw bytes comparison (memcmp) realizes the monomial order:

  lex      -> one slot per exponent, variable 0 first;
  grevlex  -> total degree slot, then (0xFFFF - e) for the exponents in
              reversed variable order.

Keys being bytes makes dict lookups and max() run at memcmp speed; the
slot arithmetic for multiply/divide/lcm runs in C.  Coefficients stay
arbitrary-precision Python ints (they are small after content stripping,
but correctness must not depend on that).
"""

from cpython.bytes cimport PyBytes_AS_STRING, PyBytes_FromStringAndSize

from math import gcd

from laxforge.errors import ResourceExceeded

KERNEL_NAME = "c"

cdef int SLOT_MAX = 0xFFFF


cdef inline int _get(const unsigned char *p, Py_ssize_t i) noexcept:
    return (p[2 * i] << 8) | p[2 * i + 1]


cdef inline void _set(unsigned char *p, Py_ssize_t i, int v) noexcept:
    p[2 * i] = <unsigned char>((v >> 8) & 0xFF)
    p[2 * i + 1] = <unsigned char>(v & 0xFF)


cdef bytes _pack(tuple mono, bint grevlex):
    cdef Py_ssize_t nv = len(mono)
    cdef Py_ssize_t nslots = nv + 1 if grevlex else nv
    cdef bytes out = PyBytes_FromStringAndSize(NULL, 2 * nslots)
    cdef unsigned char *p = <unsigned char *>PyBytes_AS_STRING(out)
    cdef Py_ssize_t i
    cdef int e, deg = 0
    if grevlex:
        for i in range(nv):
            e = <int>mono[i]
            if e < 0 or e > SLOT_MAX:
                raise OverflowError("exponent out of packed range")
            deg += e
        if deg > SLOT_MAX:
            raise OverflowError("total degree out of packed range")
        _set(p, 0, deg)
        for i in range(nv):
            _set(p, 1 + i, SLOT_MAX - <int>mono[nv - 1 - i])
    else:
        for i in range(nv):
            e = <int>mono[i]
            if e < 0 or e > SLOT_MAX:
                raise OverflowError("exponent out of packed range")
            _set(p, i, e)
    return out


cdef tuple _unpack(bytes b, Py_ssize_t nvars, bint grevlex):
    cdef const unsigned char *p = <const unsigned char *>PyBytes_AS_STRING(b)
    cdef list out = [0] * nvars
    cdef Py_ssize_t i
    if grevlex:
        for i in range(nvars):
            out[nvars - 1 - i] = SLOT_MAX - _get(p, 1 + i)
    else:
        for i in range(nvars):
            out[i] = _get(p, i)
    return tuple(out)


cdef bytes _pmul(bytes a, bytes b, Py_ssize_t nvars, bint grevlex):
    cdef const unsigned char *pa = <const unsigned char *>PyBytes_AS_STRING(a)
    cdef const unsigned char *pb = <const unsigned char *>PyBytes_AS_STRING(b)
    cdef Py_ssize_t nslots = nvars + 1 if grevlex else nvars
    cdef bytes out = PyBytes_FromStringAndSize(NULL, 2 * nslots)
    cdef unsigned char *po = <unsigned char *>PyBytes_AS_STRING(out)
    cdef Py_ssize_t i
    cdef int v
    if grevlex:
        v = _get(pa, 0) + _get(pb, 0)
        if v > SLOT_MAX:
            raise OverflowError("total degree overflow")
        _set(po, 0, v)
        for i in range(1, nslots):
            _set(po, i, _get(pa, i) + _get(pb, i) - SLOT_MAX)
    else:
        for i in range(nslots):
            v = _get(pa, i) + _get(pb, i)
            if v > SLOT_MAX:
                raise OverflowError("exponent overflow")
            _set(po, i, v)
    return out


cdef object _pdiv(bytes a, bytes b, Py_ssize_t nvars, bint grevlex):
    """a / b as packed monomials, or None when not divisible."""
    cdef const unsigned char *pa = <const unsigned char *>PyBytes_AS_STRING(a)
    cdef const unsigned char *pb = <const unsigned char *>PyBytes_AS_STRING(b)
    cdef Py_ssize_t nslots = nvars + 1 if grevlex else nvars
    cdef Py_ssize_t i
    cdef int va, vb
    # check divisibility first so no object is allocated on the fail path
    if grevlex:
        for i in range(1, nslots):
            if _get(pa, i) > _get(pb, i):      # stored negated: e_a < e_b fails
                return None
    else:
        for i in range(nslots):
            if _get(pa, i) < _get(pb, i):
                return None
    cdef bytes out = PyBytes_FromStringAndSize(NULL, 2 * nslots)
    cdef unsigned char *po = <unsigned char *>PyBytes_AS_STRING(out)
    if grevlex:
        _set(po, 0, _get(pa, 0) - _get(pb, 0))
        for i in range(1, nslots):
            _set(po, i, _get(pa, i) - _get(pb, i) + SLOT_MAX)
    else:
        for i in range(nslots):
            _set(po, i, _get(pa, i) - _get(pb, i))
    return out


cdef dict _content_strip(dict f):
    """Divide by the integer content; make the leading coefficient positive."""
    if not f:
        return f
    cdef object g = 0
    for c in f.values():
        g = gcd(g, c)
        if g == 1:
            break
    if f[max(f)] < 0:
        g = -g
    if g == 1:
        return f
    return {m: c // g for m, c in f.items()}


cdef class ReducerState:
    """A growing basis plus the integer division loop against it."""

    cdef public bint grevlex
    cdef public long long op_budget
    cdef public long long ops
    cdef Py_ssize_t nvars
    cdef list polys      # list of dict[bytes, int]
    cdef list lms        # list of bytes
    cdef list lcs        # list of int
    cdef list tails      # list of list[(bytes, int)]

    def __init__(self, bint grevlex, op_budget):
        self.grevlex = grevlex
        self.op_budget = <long long>op_budget
        self.ops = 0
        self.nvars = -1
        self.polys = []
        self.lms = []
        self.lcs = []
        self.tails = []

    def __len__(self):
        return len(self.lms)

    cdef inline int _charge(self, long long n) except -1:
        self.ops += n
        if self.ops > self.op_budget:
            raise ResourceExceeded(
                f"term-operation budget exceeded ({self.op_budget})")
        return 0

    cdef dict _pack_poly(self, dict f):
        cdef dict out = {}
        for m, c in f.items():
            if self.nvars < 0:
                self.nvars = len(<tuple>m)
            out[_pack(<tuple>m, self.grevlex)] = c
        return out

    cdef dict _unpack_poly(self, dict f):
        cdef dict out = {}
        for m, c in f.items():
            out[_unpack(<bytes>m, self.nvars, self.grevlex)] = c
        return out

    def lm_tuple(self, Py_ssize_t i):
        return _unpack(<bytes>self.lms[i], self.nvars, self.grevlex)

    def push(self, dict poly):
        """Append a basis element; returns its normalized tuple form."""
        cdef dict packed = _content_strip(self._pack_poly(poly))
        if not packed:
            raise ValueError("cannot push the zero polynomial")
        cdef bytes lm = max(packed)
        self.polys.append(packed)
        self.lms.append(lm)
        self.lcs.append(packed[lm])
        self.tails.append([(m, c) for m, c in packed.items() if m != lm])
        return self._unpack_poly(packed)

    cdef tuple _divide(self, dict f, bint track):
        cdef dict out = {}
        cdef object mult = 1
        cdef Py_ssize_t nb = len(self.lms)
        cdef Py_ssize_t i
        cdef bytes m
        cdef object c, glc, g0, factor, s
        cdef object q
        cdef list tail
        cdef bint reduced
        while f:
            m = max(f)
            c = f.pop(m)
            reduced = False
            for i in range(nb):
                q = _pdiv(m, <bytes>self.lms[i], self.nvars, self.grevlex)
                if q is None:
                    continue
                glc = self.lcs[i]
                g0 = gcd(c, glc)
                scale = glc // g0 if glc > 0 else (-glc) // g0
                if scale != 1:
                    self._charge(len(f) + len(out))
                    for k in f:
                        f[k] = f[k] * scale
                    for k in out:
                        out[k] = out[k] * scale
                    mult = mult * scale
                    c = c * scale
                factor = c // glc
                tail = <list>self.tails[i]
                self._charge(len(tail))
                for gm, gc in tail:
                    key = _pmul(<bytes>q, <bytes>gm, self.nvars, self.grevlex)
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
        return _content_strip(out), 1

    def reduce(self, dict f):
        """Content-stripped full normal form (for basis building)."""
        cdef dict packed = self._pack_poly(dict(f))
        out, _ = self._divide(packed, False)
        return self._unpack_poly(out)

    def reduce_spair(self, Py_ssize_t i, Py_ssize_t j):
        """Normal form of the S-polynomial of basis elements i and j."""
        cdef dict sp = self._s_poly(<dict>self.polys[i], <dict>self.polys[j])
        if not sp:
            return {}
        out, _ = self._divide(sp, False)
        return self._unpack_poly(out)

    def normal_form(self, dict f):
        """(mult * exact normal form of f, mult) with integer mult >= 1."""
        cdef dict packed = self._pack_poly(dict(f))
        out, mult = self._divide(packed, True)
        return self._unpack_poly(out), mult

    cdef dict _s_poly(self, dict f, dict g):
        cdef bytes mf = max(f)
        cdef bytes mg = max(g)
        cdef object cf = f[mf]
        cdef object cg = g[mg]
        cdef const unsigned char *pf = <const unsigned char *>PyBytes_AS_STRING(mf)
        cdef const unsigned char *pg = <const unsigned char *>PyBytes_AS_STRING(mg)
        cdef Py_ssize_t nslots = self.nvars + 1 if self.grevlex else self.nvars
        cdef bytes l = PyBytes_FromStringAndSize(NULL, 2 * nslots)
        cdef unsigned char *pl = <unsigned char *>PyBytes_AS_STRING(l)
        cdef Py_ssize_t i
        cdef int ef, eg, deg
        if self.grevlex:
            deg = 0
            for i in range(1, nslots):
                ef = _get(pf, i)
                eg = _get(pg, i)
                _set(pl, i, ef if ef < eg else eg)    # negated: min = max exponent
                deg += SLOT_MAX - (ef if ef < eg else eg)
            if deg > SLOT_MAX:
                raise OverflowError("total degree overflow")
            _set(pl, 0, deg)
        else:
            for i in range(nslots):
                ef = _get(pf, i)
                eg = _get(pg, i)
                _set(pl, i, ef if ef > eg else eg)
        qf = _pdiv(l, mf, self.nvars, self.grevlex)
        qg = _pdiv(l, mg, self.nvars, self.grevlex)
        g0 = gcd(cf, cg)
        af = cg // g0
        ag = cf // g0
        cdef dict out = {}
        for m, c in f.items():
            out[_pmul(<bytes>qf, <bytes>m, self.nvars, self.grevlex)] = af * c
        for m, c in g.items():
            key = _pmul(<bytes>qg, <bytes>m, self.nvars, self.grevlex)
            s = out.get(key, 0) - ag * c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return _content_strip(out)
