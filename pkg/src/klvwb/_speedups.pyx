# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel for sparse Laurent-polynomial arithmetic.

Same contract as klvwb._poly_ops: dicts of {int exponent: nonzero int
coefficient}.  Exponents and coefficients stay Python ints, so arbitrary
precision is preserved; the win is C-level dict iteration and call overhead.
"""

BACKEND = "compiled"


cpdef dict padd(dict a, dict b):
    cdef dict out = dict(a)
    cdef object e, c, s
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


cpdef dict psub(dict a, dict b):
    cdef dict out = dict(a)
    cdef object e, c, s
    for e, c in b.items():
        s = out.get(e, 0) - c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


cpdef dict pneg(dict a):
    cdef dict out = {}
    cdef object e, c
    for e, c in a.items():
        out[e] = -c
    return out


cpdef dict pmul(dict a, dict b):
    cdef dict out = {}
    cdef object ea, ca, eb, cb, e, s
    if len(a) > len(b):
        a, b = b, a
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]
    return out


cpdef dict pbar(dict a):
    cdef dict out = {}
    cdef object e, c
    for e, c in a.items():
        out[-e] = c
    return out


cpdef dict pmonmul(dict a, object coeff, object shift):
    """coeff * q**shift * a, for an integer scalar coeff."""
    cdef dict out = {}
    cdef object e, c
    if not coeff:
        return out
    for e, c in a.items():
        out[e + shift] = c * coeff
    return out


cpdef paccum(dict acc, dict a, dict b):
    """acc += a*b, in place."""
    cdef object ea, ca, eb, cb, e, s
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = acc.get(e, 0) + ca * cb
            if s:
                acc[e] = s
            else:
                del acc[e]


cpdef paccum_scaled(dict acc, dict a, object coeff, object shift):
    """acc += coeff * q**shift * a, in place, for an integer scalar coeff."""
    cdef object e, c, e2, s
    if not coeff:
        return
    for e, c in a.items():
        e2 = e + shift
        s = acc.get(e2, 0) + c * coeff
        if s:
            acc[e2] = s
        else:
            del acc[e2]
