"""Pure-Python kernel for sparse Laurent-polynomial arithmetic.

Polynomials are plain dicts mapping integer exponents to nonzero integer
coefficients.  Every function either returns a fresh normalized dict (no zero
values) or, for the accumulating variants, mutates its first argument in
place.  klvwb._speedups provides the same API compiled with Cython; callers
import whichever backend klvwb.laurent selected.
"""

BACKEND = "pure"


def padd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def psub(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) - c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def pneg(a):
    return {e: -c for e, c in a.items()}


def pmul(a, b):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def pbar(a):
    return {-e: c for e, c in a.items()}


def pmonmul(a, coeff, shift):
    """coeff * q**shift * a, for an integer scalar coeff."""
    if not coeff:
        return {}
    return {e + shift: c * coeff for e, c in a.items()}


def paccum(acc, a, b):
    """acc += a*b, in place."""
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = acc.get(e, 0) + ca * cb
            if s:
                acc[e] = s
            else:
                del acc[e]


def paccum_scaled(acc, a, coeff, shift):
    """acc += coeff * q**shift * a, in place, for an integer scalar coeff."""
    if not coeff:
        return
    for e, c in a.items():
        e2 = e + shift
        s = acc.get(e2, 0) + c * coeff
        if s:
            acc[e2] = s
        else:
            del acc[e2]
