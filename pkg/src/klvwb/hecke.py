"""The Iwahori-Hecke algebra of a finite Weyl group, over Z[q, q^-1].

Elements are finite sums sum_w c_w(q) T_w in the standard basis, with
T_x T_s = T_{xs} when the length goes up and T_x T_s = q T_{xs} + (q-1) T_x
when it goes down.  The module also provides the bar involution
(q -> q^-1, T_w -> T_{w^-1}^-1) and the Kazhdan-Lusztig basis C_w,
normalized so that C_w = sum_x P_{x,w}(q) T_x with P in Z[q],
bar(C_w) = q^{-len(w)} C_w and P_{w,w} = 1.

kl_basis computes the C_w by iterated bar-correction; verify_kl_basis
re-checks the defining properties independently of how a table was made,
which also pins the table by uniqueness.
"""

from __future__ import annotations

from .coxeter import CoxElt, CoxeterSystem
from .errors import DomainError, SystemMismatch
from .laurent import ONE, Q, ZERO, LaurentPoly, render_poly

_QM1 = Q - ONE  # q - 1


class HeckeElt:
    """Finite Z[q,q^-1]-combination of standard basis elements T_w."""

    __slots__ = ("system", "terms")

    def __init__(self, system: CoxeterSystem, terms=None):
        self.system = system
        self.terms: dict[CoxElt, LaurentPoly] = {}
        if terms:
            for w, c in terms.items():
                if not c.is_zero():
                    self.terms[w] = c

    def _check(self, other: "HeckeElt"):
        if self.system is not other.system:
            raise SystemMismatch("Hecke elements over different Coxeter systems")

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, ZERO) + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return HeckeElt(self.system, out)

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        return self + other.scale(LaurentPoly.monomial(-1, 0))

    def scale(self, c: LaurentPoly) -> "HeckeElt":
        if c.is_zero():
            return HeckeElt(self.system)
        return HeckeElt(self.system, {w: cw * c for w, cw in self.terms.items()})

    def coefficient(self, w: CoxElt) -> LaurentPoly:
        return self.terms.get(w, ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, HeckeElt)
            and self.system is other.system
            and self.terms == other.terms
        )

    def __hash__(self):
        raise TypeError("HeckeElt is not hashable")

    def mul_gen(self, s: int) -> "HeckeElt":
        """Right multiplication by T_s."""
        out: dict[CoxElt, LaurentPoly] = {}
        def _add(w, c):
            v = out.get(w, ZERO) + c
            if v.is_zero():
                out.pop(w, None)
            else:
                out[w] = v
        for x, c in self.terms.items():
            xs = x.mul_gen(s)
            if xs.length > x.length:
                _add(xs, c)
            else:
                _add(xs, c * Q)
                _add(x, c * _QM1)
        return HeckeElt(self.system, out)

    def __mul__(self, other: "HeckeElt") -> "HeckeElt":
        self._check(other)
        sys = self.system
        out = HeckeElt(sys)
        for w, c in sorted(other.terms.items(), key=lambda t: _order_key(sys, t[0])):
            cur = self.scale(c)
            for s in sys.reduced_word(w):
                cur = cur.mul_gen(s)
            out = out + cur
        return out

    def bar(self) -> "HeckeElt":
        """Ring involution: q -> q^-1 on coefficients, T_w -> (T_{w^-1})^-1."""
        sys = self.system
        out = HeckeElt(sys)
        table = _bar_table(sys)
        for w, c in self.terms.items():
            out = out + table[w].scale(c.bar())
        return out

    def __str__(self) -> str:
        sys = self.system
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda x: _order_key(sys, x)):
            c = self.terms[w]
            cs = render_poly(c)
            if len(c._c) > 1 or cs.startswith("-"):
                cs = f"({cs})"
            bits.append(f"{cs}*{render_token(sys, w)}")
        return " + ".join(bits)

    __repr__ = __str__


def _order_key(sys: CoxeterSystem, w: CoxElt):
    return (w.length, sys.reduced_word(w))


def render_token(sys: CoxeterSystem, w: CoxElt, basis: str = "T") -> str:
    """T_{s1 s2 s1} prints as 'T[1,2,1]'; the identity as 'T[]'."""
    word = sys.reduced_word(w)
    return f"{basis}[{','.join(str(s + 1) for s in word)}]"


def parse_token(sys: CoxeterSystem, token: str) -> tuple[str, CoxElt]:
    """Inverse of render_token: 'C[1,2]' -> ('C', s1 s2)."""
    token = token.strip()
    if len(token) < 3 or token[0] not in "TC" or token[1] != "[" or token[-1] != "]":
        raise DomainError(f"bad Hecke token {token!r}")
    inner = token[2:-1].strip()
    word = [] if not inner else [int(p) - 1 for p in inner.split(",")]
    for s in word:
        if not 0 <= s < sys.rank:
            raise DomainError(f"generator index out of range in {token!r}")
    return token[0], sys.from_word(word)


def unit(sys: CoxeterSystem) -> HeckeElt:
    return HeckeElt(sys, {sys.identity: ONE})


def T(sys: CoxeterSystem, w) -> HeckeElt:
    """Standard basis element; w is a CoxElt or a word of 0-based indices."""
    if not isinstance(w, CoxElt):
        w = sys.from_word(w)
    return HeckeElt(sys, {w: ONE})


def mul_T(a: HeckeElt, b: HeckeElt) -> HeckeElt:
    return a * b


def bar_hecke(a: HeckeElt) -> HeckeElt:
    return a.bar()


def _bar_table(sys: CoxeterSystem) -> dict[CoxElt, HeckeElt]:
    """bar(T_w) for every w, built along the length recursion."""
    cached = getattr(sys, "_hecke_bar_table", None)
    if cached is not None:
        return cached
    # bar(T_s) = T_s^-1 = q^-1 T_s + (q^-1 - 1) T_e, from the quadratic relation
    qinv = LaurentPoly.monomial(1, -1)
    table: dict[CoxElt, HeckeElt] = {sys.identity: unit(sys)}
    gen_bar = {
        s: HeckeElt(
            sys,
            {sys.generator(s): qinv, sys.identity: qinv - ONE},
        )
        for s in range(sys.rank)
    }
    for w in sys.elements():
        if w.length == 0:
            continue
        word = sys.reduced_word(w)
        prev = table[sys.from_word(word[:-1])]
        table[w] = prev * gen_bar[word[-1]]
    sys._hecke_bar_table = table
    return table


class KLBasis:
    """The family C_w with its polynomials P_{x,w}."""

    def __init__(self, sys: CoxeterSystem, table: dict[CoxElt, HeckeElt]):
        self.system = sys
        self.table = table

    def c(self, w: CoxElt) -> HeckeElt:
        return self.table[w]

    def p(self, x: CoxElt, w: CoxElt) -> LaurentPoly:
        return self.table[w].coefficient(x)


def kl_basis(sys: CoxeterSystem) -> KLBasis:
    """Compute every C_w by bar-correction in increasing length order."""
    cached = getattr(sys, "_kl_basis_cache", None)
    if cached is not None:
        return cached
    els = sorted(sys.elements(), key=lambda w: _order_key(sys, w))
    table: dict[CoxElt, HeckeElt] = {}
    bound = 4 * len(els) ** 2
    for w in els:
        c = T(sys, w)
        for _ in range(bound):
            delta = c.bar().scale(LaurentPoly.monomial(1, w.length)) - c
            if delta.is_zero():
                break
            x = max(delta.terms, key=lambda v: _order_key(sys, v))
            coeff = delta.terms[x]
            p = (-coeff).truncate((w.length - x.length - 1) // 2)
            c = c - table[x].scale(p)
        else:
            raise DomainError(f"bar correction failed for {render_token(sys, w)}")
        table[w] = c
    out = KLBasis(sys, table)
    sys._kl_basis_cache = out
    return out


def verify_kl_basis(basis: KLBasis) -> list[str]:
    """Re-check the defining properties; returns a list of failure messages.

    An empty list certifies the table: self-duality, unitriangularity with
    Bruhat support, the degree bound, and coefficient non-negativity, which
    together determine the basis uniquely.
    """
    sys = basis.system
    problems = []
    for w, c in basis.table.items():
        twisted = c.bar().scale(LaurentPoly.monomial(1, w.length))
        if twisted != c:
            problems.append(f"{render_token(sys, w, 'C')}: not bar self-dual")
        if c.coefficient(w) != ONE:
            problems.append(f"{render_token(sys, w, 'C')}: diagonal is not 1")
        for x, p in c.terms.items():
            if x != w and not sys.leq_bruhat(x, w):
                problems.append(
                    f"P[{render_token(sys, x)},{render_token(sys, w)}]: "
                    "support outside the Bruhat interval"
                )
            if not p.is_nonnegative():
                problems.append(
                    f"P[{render_token(sys, x)},{render_token(sys, w)}]: "
                    f"negative coefficient in {render_poly(p)}"
                )
            lo, hi = p.degree_window()
            if lo < 0:
                problems.append(
                    f"P[{render_token(sys, x)},{render_token(sys, w)}]: "
                    "negative exponent"
                )
            if x != w and hi > (w.length - x.length - 1) // 2:
                problems.append(
                    f"P[{render_token(sys, x)},{render_token(sys, w)}]: "
                    "degree bound exceeded"
                )
    return problems


def kl_table_csv(sys: CoxeterSystem) -> str:
    """KL polynomial table as CSV rows 'x,w,P' in basis order."""
    basis = kl_basis(sys)
    lines = ["x,w,P"]
    for w in sorted(sys.elements(), key=lambda v: _order_key(sys, v)):
        c = basis.c(w)
        for x in sorted(c.terms, key=lambda v: _order_key(sys, v)):
            lines.append(
                f"{sys.element_token(x)},{sys.element_token(w)},"
                f"{render_poly(c.terms[x])}"
            )
    return "\n".join(lines) + "\n"
