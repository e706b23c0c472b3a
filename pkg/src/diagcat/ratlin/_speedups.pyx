# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse integer row reduction: the int64 fast path.

Same contract as ``_pykernel``: rows are sorted sparse integer vectors,
pivoting restricted to columns < npivot, stored rows primitive.  Values
are kept in C int64 arrays while every intermediate quantity provably
fits; rows overflow into Python-integer lists and the arithmetic stays
exact.  Stored rows and canonicalized residuals are bit-identical to the
pure backend.
"""

from array import array as _array

from cpython.array cimport array, clone, resize
from math import gcd as _pygcd

BACKEND = "cython"

cdef array _TPL_I = _array('i', [])
cdef array _TPL_Q = _array('q', [])

# int64 magnitude cap for fast-path arithmetic; merges are pre-checked so
# |a*v1 + b*v2| below 2**62 can never wrap.
DEF SMALL_LIMIT = 4611686018427387904  # 2**62

_RENORM_BITS = 256


cdef long long _gcd_ll(long long a, long long b):
    cdef long long t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef class Row:
    cdef array cols          # array('i')
    cdef array svals         # array('q') when small, else None
    cdef list bvals          # list of Python ints when big, else None
    cdef long long maxabs    # valid in small mode
    cdef bint small

    cdef inline Py_ssize_t length(self):
        return len(self.cols)


cdef Row _row_small(array cols, array svals, long long maxabs):
    cdef Row r = Row.__new__(Row)
    r.cols = cols
    r.svals = svals
    r.bvals = None
    r.maxabs = maxabs
    r.small = True
    return r


cdef Row _row_big(array cols, list bvals):
    cdef Row r = Row.__new__(Row)
    r.cols = cols
    r.svals = None
    r.bvals = bvals
    r.maxabs = 0
    r.small = False
    return r


cdef Row _fill_small(array ac, object vals, Py_ssize_t n):
    cdef array sv = clone(_TPL_Q, n, False)
    cdef long long[::1] svv = sv
    cdef long long m = 0, x
    cdef Py_ssize_t i
    for i in range(n):
        x = vals[i]
        svv[i] = x
        if x < 0:
            x = -x
        if x > m:
            m = x
    return _row_small(ac, sv, m)


cdef Row _row_from_lists(object cols, object vals):
    cdef Py_ssize_t n = len(cols)
    cdef Py_ssize_t i
    cdef bint small = True
    cdef object v
    for i in range(n):
        v = vals[i]
        if not (-SMALL_LIMIT < v < SMALL_LIMIT):
            small = False
            break
    cdef array ac = clone(_TPL_I, n, False)
    cdef int[::1] cv = ac
    for i in range(n):
        cv[i] = cols[i]
    if small:
        return _fill_small(ac, vals, n)
    return _row_big(ac, list(vals))


cdef Row _to_big(Row r):
    if not r.small:
        return r
    cdef Py_ssize_t n = r.length()
    cdef long long[::1] sv = r.svals
    cdef list out = [0] * n
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = int(sv[i])
    return _row_big(r.cols, out)


cdef Row _maybe_shrink(Row r):
    if r.small:
        return r
    cdef Py_ssize_t n = r.length(), i
    cdef object v
    for i in range(n):
        v = r.bvals[i]
        if not (-SMALL_LIMIT < v < SMALL_LIMIT):
            return r
    return _fill_small(r.cols, r.bvals, n)


cdef Row _merge_small(Row r1, long long a, Row r2, long long b):
    """a*r1 + b*r2; caller guarantees every product and sum fits int64."""
    cdef Py_ssize_t n1 = r1.length(), n2 = r2.length()
    cdef array oc = clone(_TPL_I, n1 + n2, False)
    cdef array ov = clone(_TPL_Q, n1 + n2, False)
    cdef int[::1] c1 = r1.cols, c2 = r2.cols, co = oc
    cdef long long[::1] v1 = r1.svals, v2 = r2.svals, vo = ov
    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef int ci, cj
    cdef long long s, t, m = 0
    while i < n1 and j < n2:
        ci = c1[i]
        cj = c2[j]
        if ci < cj:
            s = a * v1[i]
            co[k] = ci
            vo[k] = s
            i += 1
            k += 1
        elif ci > cj:
            s = b * v2[j]
            co[k] = cj
            vo[k] = s
            j += 1
            k += 1
        else:
            s = a * v1[i] + b * v2[j]
            i += 1
            j += 1
            if s == 0:
                continue
            co[k] = ci
            vo[k] = s
            k += 1
        t = s if s > 0 else -s
        if t > m:
            m = t
    while i < n1:
        s = a * v1[i]
        co[k] = c1[i]
        vo[k] = s
        t = s if s > 0 else -s
        if t > m:
            m = t
        i += 1
        k += 1
    while j < n2:
        s = b * v2[j]
        co[k] = c2[j]
        vo[k] = s
        t = s if s > 0 else -s
        if t > m:
            m = t
        j += 1
        k += 1
    resize(oc, k)
    resize(ov, k)
    return _row_small(oc, ov, m)


cdef Row _merge_big(Row r1, object a, Row r2, object b):
    cdef Row b1 = _to_big(r1), b2 = _to_big(r2)
    cdef Py_ssize_t n1 = b1.length(), n2 = b2.length()
    cdef array oc = clone(_TPL_I, n1 + n2, False)
    cdef int[::1] c1 = b1.cols, c2 = b2.cols, co = oc
    cdef list v1 = b1.bvals, v2 = b2.bvals
    cdef list vo = []
    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef int ci, cj
    cdef object s
    while i < n1 and j < n2:
        ci = c1[i]
        cj = c2[j]
        if ci < cj:
            co[k] = ci
            vo.append(a * v1[i])
            i += 1
            k += 1
        elif ci > cj:
            co[k] = cj
            vo.append(b * v2[j])
            j += 1
            k += 1
        else:
            s = a * v1[i] + b * v2[j]
            if s:
                co[k] = ci
                vo.append(s)
                k += 1
            i += 1
            j += 1
    while i < n1:
        co[k] = c1[i]
        vo.append(a * v1[i])
        i += 1
        k += 1
    while j < n2:
        co[k] = c2[j]
        vo.append(b * v2[j])
        j += 1
        k += 1
    resize(oc, k)
    return _row_big(oc, vo)


cdef Row _scale_div_small(Row r, long long g):
    cdef Py_ssize_t n = r.length(), i
    cdef array ov = clone(_TPL_Q, n, False)
    cdef long long[::1] src = r.svals
    cdef long long[::1] dst = ov
    cdef long long m = 0, x
    for i in range(n):
        x = src[i] // g
        dst[i] = x
        if x < 0:
            x = -x
        if x > m:
            m = x
    return _row_small(r.cols, ov, m)


cdef Row _normalize(Row r):
    cdef Py_ssize_t n = r.length(), i
    if n == 0:
        return r
    cdef long long g
    cdef long long[::1] sv
    cdef object gg
    if r.small:
        sv = r.svals
        g = 0
        for i in range(n):
            g = _gcd_ll(g, sv[i])
            if g == 1:
                break
        if sv[0] < 0:
            g = -g
        if g == 1:
            return r
        return _scale_div_small(r, g)
    gg = 0
    for i in range(n):
        gg = _pygcd(gg, r.bvals[i])
        if gg == 1:
            break
    if r.bvals[0] < 0:
        gg = -gg
    if gg != 1:
        r = _row_big(r.cols, [v // gg for v in r.bvals])
    return _maybe_shrink(r)


cdef tuple _row_out(Row r):
    cdef Py_ssize_t n = r.length(), i
    cdef list oc = [0] * n
    cdef list ov = [0] * n
    cdef int[::1] cv = r.cols
    cdef long long[::1] sv
    for i in range(n):
        oc[i] = cv[i]
    if r.small:
        sv = r.svals
        for i in range(n):
            ov[i] = int(sv[i])
    else:
        for i in range(n):
            ov[i] = r.bvals[i]
    return oc, ov


cdef Py_ssize_t _first_ge(Row r, int c):
    cdef int[::1] cv = r.cols
    cdef Py_ssize_t lo = 0, hi = r.length(), mid
    while lo < hi:
        mid = (lo + hi) // 2
        if cv[mid] <= c:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef int _first_col(Row r):
    cdef int[::1] cv = r.cols
    return cv[0]


cdef object _lead_obj(Row p):
    if p.small:
        return int((<long long[::1]>p.svals)[0])
    return p.bvals[0]


cdef object _val_obj(Row r, Py_ssize_t i):
    if r.small:
        return int((<long long[::1]>r.svals)[i])
    return r.bvals[i]


cdef tuple _reduce_impl(object ech, Row r):
    cdef dict rows = ech._rows
    cdef int npivot = ech.npivot
    scale = 1  # Python int: exact across overflow
    cdef Py_ssize_t i = 0
    cdef int c
    cdef Row p
    cdef long long al, bl, g
    cdef object a, b, gg, obj, bound, v
    while i < r.length():
        c = (<int[::1]>r.cols)[i]
        if c >= npivot:
            break
        obj = rows.get(c)
        if obj is None:
            i += 1
            continue
        p = <Row>obj
        if r.small and p.small:
            al = (<long long[::1]>p.svals)[0]
            bl = (<long long[::1]>r.svals)[i]
            g = _gcd_ll(al, bl)
            al = al // g
            bl = bl // g
            if al < 0:
                al = -al
                bl = -bl
            bound = int(al) * int(r.maxabs) + (int(bl) if bl >= 0 else int(-bl)) * int(p.maxabs)
            if bound < SMALL_LIMIT:
                r = _merge_small(r, al, p, -bl)
                scale *= int(al)
                i = _first_ge(r, c)
                continue
            a = int(al)
            b = int(bl)
        else:
            a = _lead_obj(p)
            b = _val_obj(r, i)
            gg = _pygcd(a, b)
            a //= gg
            b //= gg
            if a < 0:
                a = -a
                b = -b
        r = _merge_big(r, a, p, -b)
        scale *= a
        if scale.bit_length() > _RENORM_BITS:
            gg = scale
            for v in r.bvals:
                gg = _pygcd(gg, v)
                if gg == 1:
                    break
            if gg > 1:
                scale //= gg
                r = _row_big(r.cols, [v // gg for v in r.bvals])
        r = _maybe_shrink(r)
        i = _first_ge(r, c)
    return r, scale


class Echelon:
    """Drop-in compiled replacement for ``_pykernel.Echelon``."""

    def __init__(self, npivot):
        self.npivot = npivot
        self._rows = {}
        self.rank = 0

    def pivots(self):
        return sorted(self._rows)

    def row(self, p):
        return _row_out(self._rows[p])

    def reduce(self, cols, vals):
        r, scale = _reduce_impl(self, _row_from_lists(cols, vals))
        oc, ov = _row_out(r)
        return oc, ov, scale

    def add(self, cols, vals):
        r, scale = _reduce_impl(self, _row_from_lists(cols, vals))
        if r.length() and _first_col(r) < self.npivot:
            r = _normalize(r)
            p = _first_col(r)
            self._rows[p] = r
            self.rank += 1
            return p, None
        oc, ov = _row_out(r)
        return None, (oc, ov, scale)
