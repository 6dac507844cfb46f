"""The Hecke-algebra module attached to an orbit datum.

Vectors live in the free Z[q,q^-1]-module on the datum's parameters (the
standard basis m_gamma).  Each simple reflection acts by the sparse matrix
its case descriptors prescribe; arbitrary algebra elements act through
reduced words, which the validated braid relations make well defined.

beta is the bar-semilinear duality: beta(m_gamma) = q^-dim * n_gamma with
n_gamma the costandard expansion.  The costandard table comes from the
datum; when absent it is derived by propagating bar(T_s)-compatibility
upward from the closed orbits through U- and T-ascents, the only situations
where duality is forced.  Parameters that no such chain reaches (cuspidal
local systems, and both partners of an N-ascent) make the table
underivable and duality-dependent operations raise MissingCostandard.
"""

from __future__ import annotations

from . import datum as dm
from .coxeter import CoxElt
from .errors import DatumError, MissingCostandard, SystemMismatch
from .hecke import HeckeElt, kl_basis, parse_token
from .laurent import ONE, Q, ZERO, LaurentPoly, ops, render_poly

_MINUS_ONE = LaurentPoly.monomial(-1, 0)
_Q_MINUS_1 = Q - ONE
_Q_MINUS_2 = Q - ONE - ONE
_QINV = LaurentPoly.monomial(1, -1)
_QINV_MINUS_1 = _QINV - ONE


class ModuleVector:
    """Finitely supported map parameter -> Laurent polynomial."""

    __slots__ = ("datum", "coords")

    def __init__(self, datum: dm.OrbitDatum, coords=None):
        self.datum = datum
        self.coords: dict[str, LaurentPoly] = {}
        if coords:
            for pid, c in coords.items():
                if not c.is_zero():
                    self.coords[pid] = c

    @classmethod
    def _raw(cls, datum, raw: dict[str, dict]) -> "ModuleVector":
        v = cls.__new__(cls)
        v.datum = datum
        v.coords = {pid: LaurentPoly._raw(c) for pid, c in raw.items() if c}
        return v

    def _check(self, other: "ModuleVector"):
        if self.datum is not other.datum:
            raise SystemMismatch("vectors over different datums")

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        self._check(other)
        out = dict(self.coords)
        for pid, c in other.coords.items():
            s = out.get(pid, ZERO) + c
            if s.is_zero():
                out.pop(pid, None)
            else:
                out[pid] = s
        return ModuleVector(self.datum, out)

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        return self + other.scale(_MINUS_ONE)

    def scale(self, c: LaurentPoly) -> "ModuleVector":
        if c.is_zero():
            return ModuleVector(self.datum)
        return ModuleVector(self.datum, {pid: v * c for pid, v in self.coords.items()})

    def coefficient(self, pid: str) -> LaurentPoly:
        return self.coords.get(pid, ZERO)

    def is_zero(self) -> bool:
        return not self.coords

    def __eq__(self, other):
        return (
            isinstance(other, ModuleVector)
            and self.datum is other.datum
            and self.coords == other.coords
        )

    def __hash__(self):
        raise TypeError("ModuleVector is not hashable")

    def items_in_datum_order(self):
        return [(p.id, self.coords[p.id]) for p in self.datum.params if p.id in self.coords]

    def __str__(self) -> str:
        if not self.coords:
            return "0"
        bits = []
        for pid, c in self.items_in_datum_order():
            cs = render_poly(c)
            if len(c._c) > 1 or cs.startswith("-"):
                cs = f"({cs})"
            bits.append(f"+ {cs}*m[{pid}]")
        return " ".join(bits)

    __repr__ = __str__


def basis_vector(d: dm.OrbitDatum, pid: str) -> ModuleVector:
    if pid not in d.param_by_id:
        raise DatumError(f"unknown parameter {pid!r}")
    return ModuleVector(d, {pid: ONE})


class ActionTable:
    """Per simple reflection, the sparse column form of the T_s action."""

    def __init__(self, d: dm.OrbitDatum):
        self.datum = d
        self.columns: dict[int, dict[str, list[tuple[str, LaurentPoly]]]] = {}
        for s in range(d.coxeter.rank):
            cols = {}
            for p in d.params:
                desc = d.descriptor(s, p.id)
                if desc is None:
                    raise DatumError(f"no descriptor for ({p.id}, s{s + 1})")
                cols[p.id] = _column(p.id, desc)
            self.columns[s] = cols

    def apply(self, s: int, v: ModuleVector) -> ModuleVector:
        """T_s . v"""
        cols = self.columns[s]
        out: dict[str, dict] = {}
        for pid, c in v.coords.items():
            for target, a in cols[pid]:
                acc = out.get(target)
                if acc is None:
                    acc = out[target] = {}
                ops.paccum(acc, c._c, a._c)
        return ModuleVector._raw(self.datum, out)

    def apply_word(self, word, v: ModuleVector) -> ModuleVector:
        """T_w . v for w given by a reduced word (leftmost letter outermost)."""
        for s in reversed(word):
            v = self.apply(s, v)
        return v


def _column(pid: str, desc) -> list[tuple[str, LaurentPoly]]:
    if isinstance(desc, dm.CompactG):
        return [(pid, Q)]
    if isinstance(desc, dm.AscentU):
        return [(desc.up, ONE)]
    if isinstance(desc, dm.DescentU):
        return [(desc.down, Q), (pid, _Q_MINUS_1)]
    if isinstance(desc, dm.AscentT):
        return [(desc.cross, ONE), (desc.up, ONE)]
    if isinstance(desc, dm.DescentT):
        d1, d2 = desc.downs
        return [(d1, _Q_MINUS_1), (d2, _Q_MINUS_1), (pid, _Q_MINUS_2)]
    if isinstance(desc, dm.DescentTNonParity):
        return [(pid, _MINUS_ONE)]
    if isinstance(desc, dm.AscentN):
        u1, u2 = desc.ups
        return [(pid, ONE), (u1, ONE), (u2, ONE)]
    if isinstance(desc, dm.DescentN):
        return [(desc.down, _Q_MINUS_1), (pid, _Q_MINUS_1), (desc.partner, _MINUS_ONE)]
    if isinstance(desc, dm.ExplicitRow):
        return [(t, c) for t, c in desc.coeffs if not c.is_zero()]
    raise DatumError(f"unknown descriptor {desc!r}")


def build_action_table(d: dm.OrbitDatum) -> ActionTable:
    """Internal constructor: no validation gate (validation itself needs it)."""
    table = d._cache.get("action_table")
    if table is None:
        table = d._cache["action_table"] = ActionTable(d)
    return table


def ts_matrix(d: dm.OrbitDatum) -> ActionTable:
    """The validated action table of the datum."""
    dm.ensure_valid(d)
    return build_action_table(d)


def _bar_ts_apply(table: ActionTable, s: int, v: ModuleVector) -> ModuleVector:
    """bar(T_s) . v = q^-1 T_s v + (q^-1 - 1) v."""
    return table.apply(s, v).scale(_QINV) + v.scale(_QINV_MINUS_1)


def costandard_table(d: dm.OrbitDatum):
    """(table, origin): column gamma holds the m-expansion of n_gamma.

    origin is 'given' when the datum carries the table, 'derived' when it
    was reconstructed by ascent propagation.  Raises MissingCostandard when
    neither is possible, DatumError if propagation is inconsistent.
    """
    cached = d._cache.get("costandard")
    if cached is not None:
        return cached
    if d.costandard is not None:
        out = ({col: dict(rows) for col, rows in d.costandard.items()}, "given")
        d._cache["costandard"] = out
        return out

    table = build_action_table(d)
    beta_cols: dict[str, ModuleVector] = {}
    for p in d.basis:
        if d.orbit_by_id[p.orbit].closed:
            beta_cols[p.id] = ModuleVector(d, {p.id: LaurentPoly.monomial(1, -p.dim)})

    # propagate duality through U/T ascents, level by level in dim
    for p in d.basis:
        if p.id in beta_cols:
            continue
        candidates = []
        for s in range(d.coxeter.rank):
            for src in d.basis:
                desc = d.descriptor(s, src.id)
                if isinstance(desc, dm.AscentU) and desc.up == p.id:
                    if src.id in beta_cols:
                        candidates.append(_bar_ts_apply(table, s, beta_cols[src.id]))
                elif isinstance(desc, dm.AscentT) and desc.up == p.id:
                    if src.id in beta_cols and desc.cross in beta_cols:
                        candidates.append(
                            _bar_ts_apply(table, s, beta_cols[src.id])
                            - beta_cols[desc.cross]
                        )
        if candidates:
            first = candidates[0]
            for other in candidates[1:]:
                if other != first:
                    raise DatumError(
                        f"duality propagation inconsistent at parameter {p.id}"
                    )
            beta_cols[p.id] = first

    missing = [p.id for p in d.basis if p.id not in beta_cols]
    if missing:
        raise MissingCostandard(
            "costandard table absent and not derivable for parameter(s): "
            + ", ".join(missing)
        )
    derived = {}
    for p in d.basis:
        col = beta_cols[p.id].scale(LaurentPoly.monomial(1, p.dim))
        derived[p.id] = dict(col.coords)
    out = (derived, "derived")
    d._cache["costandard"] = out
    return out


def _beta_columns(d: dm.OrbitDatum) -> dict[str, ModuleVector]:
    """beta(m_gamma) = q^-dim(gamma) n_gamma, as vectors."""
    cols = d._cache.get("beta_cols")
    if cols is None:
        table, _ = costandard_table(d)
        cols = {}
        for p in d.params:
            cols[p.id] = ModuleVector(
                d, {row: c.shift(-p.dim) for row, c in table[p.id].items()}
            )
        d._cache["beta_cols"] = cols
    return cols


def beta(x: ModuleVector, d: dm.OrbitDatum) -> ModuleVector:
    """The bar-semilinear duality involution."""
    cols = _beta_columns(d)
    out: dict[str, dict] = {}
    for pid, c in x.coords.items():
        barc = ops.pbar(c._c)
        for row, entry in cols[pid].coords.items():
            acc = out.get(row)
            if acc is None:
                acc = out[row] = {}
            ops.paccum(acc, barc, entry._c)
    return ModuleVector._raw(d, out)


def act(h, x: ModuleVector, d: dm.OrbitDatum) -> ModuleVector:
    """Apply a Hecke element, or a token like 'T[1,2]' / 'C[1]', to x."""
    dm.ensure_valid(d)
    sys = d.coxeter
    table = build_action_table(d)
    if isinstance(h, str):
        basis_letter, w = parse_token(sys, h)
        if basis_letter == "T":
            return table.apply_word(sys.reduced_word(w), x)
        return _act_c(d, w, x)
    if isinstance(h, HeckeElt):
        if h.system is not sys:
            raise SystemMismatch("Hecke element over a different Coxeter system")
        out = ModuleVector(d)
        for w, c in h.terms.items():
            out = out + table.apply_word(sys.reduced_word(w), x).scale(c)
        return out
    raise DatumError(f"cannot act by {h!r}")


def _act_c(d: dm.OrbitDatum, w: CoxElt, x: ModuleVector) -> ModuleVector:
    """C_w . x through the Kazhdan-Lusztig expansion of C_w in the T-basis."""
    sys = d.coxeter
    table = build_action_table(d)
    cw = kl_basis(sys).c(w)
    out = ModuleVector(d)
    for v, p in cw.terms.items():
        out = out + table.apply_word(sys.reduced_word(v), x).scale(p)
    return out


def t_matrix_columns(d: dm.OrbitDatum, w: CoxElt) -> dict[str, ModuleVector]:
    """Columns of the T_w action, memoized along the word recursion."""
    mats = d._cache.setdefault("t_mats", {})
    col = mats.get(w)
    if col is not None:
        return col
    table = build_action_table(d)
    sys = d.coxeter
    if w.length == 0:
        col = {p.id: basis_vector(d, p.id) for p in d.params}
    else:
        word = sys.reduced_word(w)
        prefix = t_matrix_columns(d, sys.from_word(word[:-1]))
        s = word[-1]
        # T_w = T_{w'} T_s, so the w-column is M_{w'} applied to T_s m_gamma
        col = {}
        for p in d.params:
            v = table.apply(s, basis_vector(d, p.id))
            col[p.id] = matrix_apply(prefix, v)
    mats[w] = col
    return col


def c_matrix_columns(d: dm.OrbitDatum, w: CoxElt) -> dict[str, ModuleVector]:
    """Columns of the C_w action: sum of P_{x,w} T_x columns."""
    mats = d._cache.setdefault("c_mats", {})
    col = mats.get(w)
    if col is not None:
        return col
    cw = kl_basis(d.coxeter).c(w)
    col = {p.id: ModuleVector(d) for p in d.params}
    for x, poly in cw.terms.items():
        tx = t_matrix_columns(d, x)
        for pid in col:
            col[pid] = col[pid] + tx[pid].scale(poly)
    mats[w] = col
    return col


def matrix_apply(columns: dict[str, ModuleVector], v: ModuleVector) -> ModuleVector:
    out: dict[str, dict] = {}
    d = v.datum
    for pid, c in v.coords.items():
        for row, entry in columns[pid].coords.items():
            acc = out.get(row)
            if acc is None:
                acc = out[row] = {}
            ops.paccum(acc, c._c, entry._c)
    return ModuleVector._raw(d, out)
