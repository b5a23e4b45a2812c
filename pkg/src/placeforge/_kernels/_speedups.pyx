# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: sparse term products and weighted term minima.

Fast C paths cover the desk-scale envelope (few variables, small exponents,
moderate weight numerators); anything outside is delegated to the exact
pure-Python fallback, so results are identical across backends.
"""

from libc.stdlib cimport free, malloc

from ._fallback import mul_terms as _py_mul_terms
from ._fallback import term_mins as _py_term_mins

cdef extern from *:
    ctypedef long long int128 "__int128"
    ctypedef unsigned long long uint128 "unsigned __int128"

EXP_LIMIT = 2**62

_PACK_BITS = 15
_PACK_MAX = 1 << 14          # per-factor exponent bound for the packed path
_WEIGHT_MAX = 1 << 28
_EXP_MAX = 1 << 12
_D_MAX = 1 << 10


def backend():
    return "compiled"


cdef bint _exps_below(list exps, long long bound):
    cdef tuple e
    for e in exps:
        for v in e:
            if not (0 <= v < bound):
                return False
    return True


cdef bint _ints_below(values, long long bound):
    for v in values:
        if not (-bound < v < bound):
            return False
    return True


cdef long long _pack(tuple e, int n):
    cdef long long key = 0
    cdef int k
    for k in range(n):
        key = (key << _PACK_BITS) | <long long> e[k]
    return key


cdef tuple _unpack(long long key, int n):
    cdef list out = [0] * n
    cdef int k
    cdef long long mask = (1 << _PACK_BITS) - 1
    for k in range(n - 1, -1, -1):
        out[k] = key & mask
        key >>= _PACK_BITS
    return tuple(out)


cdef struct KC:
    long long key
    unsigned long long c


cdef int _kc_cmp(const void* x, const void* y) noexcept nogil:
    cdef long long a = (<KC*> x).key
    cdef long long b = (<KC*> y).key
    if a < b:
        return -1
    if a > b:
        return 1
    return 0

cdef extern from "stdlib.h":
    void qsort(void* base, size_t nmemb, size_t size,
               int (*compar)(const void*, const void*)) nogil


cdef dict _mul_packed_fp(list ea, list ca, list eb, list cb, unsigned long long p, int n):
    cdef Py_ssize_t la = len(ea), lb = len(eb)
    cdef Py_ssize_t total = la * lb
    cdef long long* ka = <long long*> malloc(la * sizeof(long long))
    cdef long long* kb = <long long*> malloc(lb * sizeof(long long))
    cdef unsigned long long* va = <unsigned long long*> malloc(la * sizeof(unsigned long long))
    cdef unsigned long long* vb = <unsigned long long*> malloc(lb * sizeof(unsigned long long))
    cdef KC* prods = <KC*> malloc(total * sizeof(KC))
    cdef Py_ssize_t i, j, w
    cdef unsigned long long acc
    cdef long long key
    if ka == NULL or kb == NULL or va == NULL or vb == NULL or prods == NULL:
        free(ka); free(kb); free(va); free(vb); free(prods)
        raise MemoryError()
    try:
        for i in range(la):
            ka[i] = _pack(<tuple> ea[i], n)
            va[i] = <unsigned long long> ca[i]
        for j in range(lb):
            kb[j] = _pack(<tuple> eb[j], n)
            vb[j] = <unsigned long long> cb[j]
        with nogil:
            w = 0
            for i in range(la):
                for j in range(lb):
                    prods[w].key = ka[i] + kb[j]
                    prods[w].c = <unsigned long long> ((<uint128> va[i] * vb[j]) % p)
                    w += 1
            qsort(prods, total, sizeof(KC), _kc_cmp)
        out = {}
        i = 0
        while i < total:
            key = prods[i].key
            acc = prods[i].c
            i += 1
            while i < total and prods[i].key == key:
                acc = (acc + prods[i].c) % p
                i += 1
            acc %= p
            if acc:
                out[_unpack(key, n)] = acc
        return out
    finally:
        free(ka); free(kb); free(va); free(vb); free(prods)


cdef dict _mul_packed_obj(list ea, list ca, list eb, list cb, int n):
    # Packed exponent keys, arbitrary-precision Python coefficients.
    cdef Py_ssize_t la = len(ea), lb = len(eb)
    cdef long long* ka = <long long*> malloc(la * sizeof(long long))
    cdef long long* kb = <long long*> malloc(lb * sizeof(long long))
    if ka == NULL or kb == NULL:
        free(ka); free(kb)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef dict acc = {}
    cdef long long key
    try:
        for i in range(la):
            ka[i] = _pack(<tuple> ea[i], n)
        for j in range(lb):
            kb[j] = _pack(<tuple> eb[j], n)
        for i in range(la):
            c1 = ca[i]
            for j in range(lb):
                key = ka[i] + kb[j]
                prod = c1 * cb[j]
                prev = acc.get(key)
                if prev is None:
                    acc[key] = prod
                else:
                    v = prev + prod
                    if v:
                        acc[key] = v
                    else:
                        del acc[key]
        return {_unpack(k, n): v for k, v in acc.items()}
    finally:
        free(ka); free(kb)


def mul_terms(list ea, list ca, list eb, list cb, p):
    """Sparse term product; see the fallback for the full contract."""
    if not ea or not eb:
        return {}
    cdef int n = len(<tuple> ea[0])
    if 0 < n <= 4 and _exps_below(ea, _PACK_MAX) and _exps_below(eb, _PACK_MAX):
        if p and p < (1 << 61):
            return _mul_packed_fp(ea, ca, eb, cb, <unsigned long long> p, n)
        if not p:
            return _mul_packed_obj(ea, ca, eb, cb, n)
    return _py_mul_terms(ea, ca, eb, cb, p)


cdef int _quad_sign_c(long long a, long long b, long long d) noexcept nogil:
    cdef int128 lhs, rhs
    if b == 0:
        return 1 if a > 0 else (-1 if a < 0 else 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    lhs = <int128> a * a
    rhs = <int128> b * b * d
    if lhs > rhs:
        return 1 if a > 0 else -1
    if lhs < rhs:
        return 1 if b > 0 else -1
    return 0


def term_mins(list exps, levels):
    """All indices of minimal weighted value plus the minimum; see fallback."""
    cdef Py_ssize_t m = len(exps)
    cdef int n = len(<tuple> exps[0]) if m else 0
    cdef int nlev = len(levels)
    if m == 0 or n > 8 or nlev > 8 or not _exps_below(exps, _EXP_MAX):
        return _py_term_mins(exps, levels)
    for arow, brow, d in levels:
        if d >= _D_MAX or not _ints_below(arow, _WEIGHT_MAX) or not _ints_below(brow, _WEIGHT_MAX):
            return _py_term_mins(exps, levels)

    cdef long long* flat = <long long*> malloc(m * n * sizeof(long long))
    cdef long long* wa = <long long*> malloc(nlev * n * sizeof(long long))
    cdef long long* wb = <long long*> malloc(nlev * n * sizeof(long long))
    cdef long long* ds = <long long*> malloc(nlev * sizeof(long long))
    cdef long long* best = <long long*> malloc(2 * nlev * sizeof(long long))
    cdef long long* cur = <long long*> malloc(2 * nlev * sizeof(long long))
    cdef Py_ssize_t* amins = <Py_ssize_t*> malloc(m * sizeof(Py_ssize_t))
    if flat == NULL or wa == NULL or wb == NULL or ds == NULL or best == NULL or cur == NULL or amins == NULL:
        free(flat); free(wa); free(wb); free(ds); free(best); free(cur); free(amins)
        raise MemoryError()
    cdef Py_ssize_t i, na
    cdef int k, lv, cmp
    cdef long long sa, sb
    try:
        for i in range(m):
            e = <tuple> exps[i]
            for k in range(n):
                flat[i * n + k] = <long long> e[k]
        for lv in range(nlev):
            arow, brow, d = levels[lv]
            ds[lv] = <long long> d
            for k in range(n):
                wa[lv * n + k] = <long long> arow[k]
                wb[lv * n + k] = <long long> brow[k]
        with nogil:
            for lv in range(nlev):
                sa = 0
                sb = 0
                for k in range(n):
                    sa += flat[k] * wa[lv * n + k]
                    sb += flat[k] * wb[lv * n + k]
                best[2 * lv] = sa
                best[2 * lv + 1] = sb
            amins[0] = 0
            na = 1
            for i in range(1, m):
                cmp = 0
                for lv in range(nlev):
                    sa = 0
                    sb = 0
                    for k in range(n):
                        sa += flat[i * n + k] * wa[lv * n + k]
                        sb += flat[i * n + k] * wb[lv * n + k]
                    cur[2 * lv] = sa
                    cur[2 * lv + 1] = sb
                    if cmp == 0:
                        cmp = _quad_sign_c(sa - best[2 * lv], sb - best[2 * lv + 1], ds[lv])
                # cmp computed over all levels so cur[] is complete if it wins
                if cmp < 0:
                    for lv in range(2 * nlev):
                        best[lv] = cur[lv]
                    amins[0] = i
                    na = 1
                elif cmp == 0:
                    amins[na] = i
                    na += 1
        argmins = [amins[i] for i in range(na)]
        pairs = tuple((best[2 * lv], best[2 * lv + 1]) for lv in range(nlev))
        return argmins, pairs
    finally:
        free(flat); free(wa); free(wb); free(ds); free(best); free(cur); free(amins)
