"""Exact arithmetic in Z[q, q^-1] plus rational series over (1-q^a) factors.

LaurentPoly is an immutable sparse polynomial with arbitrary-precision
integer coefficients; the variable q tracks the grading twist throughout the
package.  PoincareSeries represents num / prod_i (1 - q^{a_i}) exactly, the
shape taken by equivariant cohomology rings of stabilizers.

The coefficient-dict arithmetic is delegated to a kernel module: the
compiled klvwb._speedups when built, otherwise the pure-Python
klvwb._poly_ops.  Set KLVWB_PURE_PYTHON=1 to force the fallback.
"""

from __future__ import annotations

import os
import re

from .errors import DomainError

if os.environ.get("KLVWB_PURE_PYTHON"):
    from . import _poly_ops as ops
else:
    try:
        from . import _speedups as ops  # type: ignore[attr-defined]
    except ImportError:
        from . import _poly_ops as ops


def kernel_backend() -> str:
    """Name of the arithmetic kernel in use: 'compiled' or 'pure'."""
    return "compiled" if ops.BACKEND == "compiled" else "pure"


class LaurentPoly:
    """Element of Z[q, q^-1], stored as {exponent: nonzero coefficient}."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            self._c = {}
        else:
            self._c = {int(e): int(c) for e, c in coeffs.items() if c}

    @classmethod
    def _raw(cls, d: dict) -> "LaurentPoly":
        """Wrap a kernel-produced dict without copying; d must be normalized."""
        p = cls.__new__(cls)
        p._c = d
        return p

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls._raw({0: 1})

    @classmethod
    def q(cls) -> "LaurentPoly":
        return cls._raw({1: 1})

    @classmethod
    def monomial(cls, coeff: int, exp: int) -> "LaurentPoly":
        return cls._raw({exp: coeff} if coeff else {})

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.monomial(other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return LaurentPoly._raw(ops.padd(self._c, other._c))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return LaurentPoly._raw(ops.psub(self._c, other._c))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return LaurentPoly._raw(ops.psub(other._c, self._c))

    def __neg__(self):
        return LaurentPoly._raw(ops.pneg(self._c))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return LaurentPoly._raw(ops.pmul(self._c, other._c))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative powers of a polynomial are not defined")
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __bool__(self):
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def bar(self) -> "LaurentPoly":
        """Substitute q -> q^-1."""
        return LaurentPoly._raw(ops.pbar(self._c))

    def shift(self, n: int) -> "LaurentPoly":
        """Multiply by q^n."""
        return LaurentPoly._raw(ops.pmonmul(self._c, 1, n))

    def coefficient(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def degree_window(self) -> tuple[int, int]:
        """(min exponent, max exponent); undefined for the zero polynomial."""
        if not self._c:
            raise DomainError("degree window of the zero polynomial")
        exps = self._c.keys()
        return (min(exps), max(exps))

    def truncate(self, max_deg: int) -> "LaurentPoly":
        """Keep exactly the terms of exponent <= max_deg."""
        return LaurentPoly._raw({e: c for e, c in self._c.items() if e <= max_deg})

    def is_nonnegative(self) -> bool:
        """True iff every stored coefficient is >= 0."""
        return all(c >= 0 for c in self._c.values())

    def items(self):
        """Terms as (exponent, coefficient) pairs in increasing exponent order."""
        return sorted(self._c.items())

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({render_poly(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return parse_poly(text)


def render_poly(p: LaurentPoly) -> str:
    """Canonical text form: increasing exponents, e.g. '1-q', 'q^-1+2q+q^2'."""
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.items():
        if e == 0:
            body = str(abs(c))
        else:
            var = "q" if e == 1 else f"q^{e}"
            body = var if abs(c) == 1 else f"{abs(c)}{var}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("-" if c < 0 else "+") + body)
    return "".join(parts)


_TERM_RE = re.compile(
    r"([+-]?)\s*(?:(\d+)\s*\*?\s*)?(q(?:\^(-?\d+))?)?\s*", re.ASCII
)


def parse_poly(text: str) -> LaurentPoly:
    """Parse the canonical rendering (also accepts '*' and whitespace)."""
    s = text.strip()
    if not s:
        raise DomainError("empty polynomial string")
    pos = 0
    coeffs: dict[int, int] = {}
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise DomainError(f"cannot parse polynomial {text!r} at offset {pos}")
        sign, num, qpart, qexp = m.groups()
        if num is None and qpart is None:
            raise DomainError(f"cannot parse polynomial {text!r} at offset {pos}")
        if not first and not sign:
            raise DomainError(f"missing sign in polynomial {text!r} at offset {pos}")
        coeff = int(num) if num is not None else 1
        if sign == "-":
            coeff = -coeff
        exp = 0
        if qpart is not None:
            exp = int(qexp) if qexp is not None else 1
        val = coeffs.get(exp, 0) + coeff
        if val:
            coeffs[exp] = val
        else:
            coeffs.pop(exp, None)
        pos = m.end()
        first = False
    return LaurentPoly(coeffs)


ZERO = LaurentPoly.zero()
ONE = LaurentPoly.one()
Q = LaurentPoly.q()


def _den_poly(factors) -> LaurentPoly:
    out = ONE
    for a in factors:
        out = out * (ONE - LaurentPoly.monomial(1, a))
    return out


class PoincareSeries:
    """num / prod_i (1 - q^{a_i}) with exact arithmetic.

    Equality is decided by cross-multiplication, never by truncation.
    Construction cancels denominator factors that divide the numerator
    exactly, so rendering is stable across equivalent build paths.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den=()):
        den = sorted(int(a) for a in den)
        if any(a < 1 for a in den):
            raise DomainError("denominator exponents must be positive")
        num, den = _reduce(num, den)
        self.num = num
        self.den = tuple(den)

    @classmethod
    def of_poly(cls, p: LaurentPoly) -> "PoincareSeries":
        return cls(p, ())

    @classmethod
    def one(cls) -> "PoincareSeries":
        return cls(ONE, ())

    @classmethod
    def zero(cls) -> "PoincareSeries":
        return cls(ZERO, ())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "PoincareSeries") -> "PoincareSeries":
        if not isinstance(other, PoincareSeries):
            return NotImplemented
        den = _multiset_max(self.den, other.den)
        a = self.num * _den_poly(_multiset_diff(den, self.den))
        b = other.num * _den_poly(_multiset_diff(den, other.den))
        return PoincareSeries(a + b, den)

    def __mul__(self, other) -> "PoincareSeries":
        if isinstance(other, (LaurentPoly, int)):
            return PoincareSeries(self.num * other, self.den)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (LaurentPoly, int)):
            other = PoincareSeries.of_poly(
                other if isinstance(other, LaurentPoly) else LaurentPoly.monomial(other, 0)
            )
        if not isinstance(other, PoincareSeries):
            return NotImplemented
        return self.num * _den_poly(other.den) == other.num * _den_poly(self.den)

    def __hash__(self):
        raise TypeError("PoincareSeries is not hashable")

    def expand(self, lo: int, hi: int) -> dict[int, int]:
        """Coefficients of the power-series expansion for exponents in [lo, hi]."""
        if hi < lo:
            raise DomainError("empty expansion window")
        cur = dict(self.num._c)
        for a in self.den:
            # multiply by 1/(1-q^a) = sum_j q^{aj}, truncating above hi
            nxt: dict[int, int] = {}
            for e, c in cur.items():
                x = e
                while x <= hi:
                    nxt[x] = nxt.get(x, 0) + c
                    x += a
            cur = nxt
        return {e: c for e, c in cur.items() if lo <= e <= hi and c}

    def coefficient(self, m: int) -> int:
        return self.expand(m, m).get(m, 0)

    def __str__(self) -> str:
        return render_series(self)

    def __repr__(self) -> str:
        return f"PoincareSeries({render_series(self)!r})"


def _multiset_max(a, b):
    out = []
    for v in sorted(set(a) | set(b)):
        out.extend([v] * max(list(a).count(v), list(b).count(v)))
    return out


def _multiset_diff(a, b):
    out = list(a)
    for v in b:
        out.remove(v)
    return out


def _divide_once(num: LaurentPoly, a: int):
    """num / (1 - q^a) if the division is exact, else None."""
    if num.is_zero():
        return num
    lo, hi = num.degree_window()
    c = dict(num._c)
    h: dict[int, int] = {}
    # (1 - q^a) has unit constant term: synthesize quotient from low end up
    for e in range(lo, hi + 1):
        v = c.get(e, 0) + h.get(e - a, 0)
        if v:
            h[e] = v
    quot = LaurentPoly(h)
    if quot * (ONE - LaurentPoly.monomial(1, a)) == num:
        return quot
    return None


def _reduce(num: LaurentPoly, den: list[int]):
    out = []
    for a in den:
        q = _divide_once(num, a)
        if q is None:
            out.append(a)
        else:
            num = q
    return num, out


def render_series(s: PoincareSeries) -> str:
    """Canonical text form, e.g. '(1+q)/(1-q)', '1/(1-q)^2', 'q^2'."""
    num = render_poly(s.num)
    if not s.den:
        return num
    if len(s.num._c) > 1:
        num = f"({num})"
    parts = []
    for a in sorted(set(s.den)):
        k = s.den.count(a)
        base = "(1-q)" if a == 1 else f"(1-q^{a})"
        parts.append(base if k == 1 else f"{base}^{k}")
    return f"{num}/{''.join(parts)}"


def parse_series(obj) -> PoincareSeries:
    """Build from the file form {'num': '1', 'den': [1, 2]}."""
    if not isinstance(obj, dict) or set(obj) - {"num", "den"}:
        raise DomainError(f"bad series object {obj!r}")
    num = parse_poly(obj.get("num", "1"))
    den = obj.get("den", [])
    if not isinstance(den, list) or not all(isinstance(a, int) for a in den):
        raise DomainError(f"bad series denominator {den!r}")
    return PoincareSeries(num, den)


def series_to_json(s: PoincareSeries) -> dict:
    return {"num": render_poly(s.num), "den": list(s.den)}
