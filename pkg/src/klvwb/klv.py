"""Self-dual basis solver and the structure constants it controls.

For each parameter delta the solver finds the unique vector
L_delta = m_delta + sum of strictly lower terms that the duality beta fixes
up to the twist q^-dim(delta), with polynomial entries P bounded in degree
by (dim(delta) - dim(gamma) - 1)/2.  Existence and uniqueness hold whenever
the datum's duality is a genuine triangular involution; verify_klv_table
re-checks every defining property independently of the solver, so the
algorithm itself is replaceable.

On top of the table: mu extracts extreme-degree coefficients, c_expansion
expresses C_w . L_tau in the self-dual basis (exact unitriangular back
substitution, no division), and is_clean / is_cuspidal / parity_check are
the executable forms of the structural corollaries.
"""

from __future__ import annotations

from . import datum as dm
from . import hmodule as hm
from .coxeter import CoxElt
from .errors import DatumError, NonGeometricDatum
from .laurent import ONE, LaurentPoly, render_poly

ITERATION_FACTOR = 4


class KLVTable:
    """Unitriangular matrix of polynomials P[gamma, delta] in basis order."""

    def __init__(self, datum: dm.OrbitDatum, columns: dict[str, hm.ModuleVector]):
        self.datum = datum
        self.columns = columns

    def p(self, gamma: str, delta: str) -> LaurentPoly:
        return self.columns[delta].coefficient(gamma)

    def column(self, delta: str) -> hm.ModuleVector:
        return self.columns[delta]

    def rows(self):
        """(gamma, delta, P) triples in basis order, nonzero entries only."""
        d = self.datum
        for delta in d.basis:
            col = self.columns[delta.id]
            for gamma in d.basis:
                c = col.coefficient(gamma.id)
                if not c.is_zero():
                    yield (gamma.id, delta.id, c)


def klv_table(d: dm.OrbitDatum) -> KLVTable:
    """Solve for the self-dual basis, processing parameters by (dim, id)."""
    dm.ensure_valid(d)
    cached = d._cache.get("klv_table")
    if cached is not None:
        return cached
    columns: dict[str, hm.ModuleVector] = {}
    bound = ITERATION_FACTOR * len(d.params) ** 2
    index = d.basis_index
    for delta in d.basis:
        twist = LaurentPoly.monomial(1, delta.dim)
        vec = hm.basis_vector(d, delta.id)
        for _ in range(bound):
            diff = hm.beta(vec, d).scale(twist) - vec
            if diff.is_zero():
                break
            gamma = max(diff.coords, key=index.__getitem__)
            if index[gamma] >= index[delta.id]:
                raise NonGeometricDatum(
                    f"correction support at or above {delta.id} (datum {d.name})"
                )
            coeff = diff.coords[gamma]
            gap = delta.dim - d.param_by_id[gamma].dim
            fix = (-coeff).truncate((gap - 1) // 2)
            if fix.is_zero():
                raise NonGeometricDatum(
                    f"no degree-bounded correction at ({gamma}, {delta.id}) "
                    f"(datum {d.name})"
                )
            vec = vec - columns[gamma].scale(fix)
        else:
            raise NonGeometricDatum(
                f"self-dual correction did not converge at {delta.id} (datum {d.name})"
            )
        columns[delta.id] = vec
    table = KLVTable(d, columns)
    d._cache["klv_table"] = table
    return table


def verify_klv_table(table: KLVTable, d: dm.OrbitDatum) -> list[str]:
    """Independent re-check of the defining contract; empty list means pass."""
    problems = []
    for delta in d.basis:
        col = table.columns[delta.id]
        twisted = hm.beta(col, d).scale(LaurentPoly.monomial(1, delta.dim))
        if twisted != col:
            problems.append(f"L[{delta.id}] is not self-dual")
        if col.coefficient(delta.id) != ONE:
            problems.append(f"P[{delta.id},{delta.id}] != 1")
        for gamma_id, poly in col.coords.items():
            gamma = d.param_by_id[gamma_id]
            if gamma_id == delta.id:
                continue
            if not d.leq_orbits(gamma.orbit, delta.orbit):
                problems.append(
                    f"P[{gamma_id},{delta.id}] supported outside the closure order"
                )
            lo, hi = poly.degree_window()
            if lo < 0:
                problems.append(f"P[{gamma_id},{delta.id}] has negative exponents")
            if 2 * hi > delta.dim - gamma.dim - 1:
                problems.append(
                    f"P[{gamma_id},{delta.id}] = {render_poly(poly)} "
                    "exceeds the degree bound"
                )
            if not poly.is_nonnegative():
                problems.append(
                    f"P[{gamma_id},{delta.id}] = {render_poly(poly)} "
                    "has negative coefficients"
                )
    return problems


def mu(table: KLVTable, gamma: str, delta: str) -> int:
    """Extreme-degree coefficient of P[gamma, delta]; 0 off the parity line."""
    if gamma == delta:
        raise DatumError("mu is defined for distinct parameters")
    d = table.datum
    gap = d.param_by_id[delta].dim - d.param_by_id[gamma].dim - 1
    if gap < 0 or gap % 2:
        return 0
    return table.p(gamma, delta).coefficient(gap // 2)


def _as_element(d: dm.OrbitDatum, w) -> CoxElt:
    if isinstance(w, CoxElt):
        if w.system is not d.coxeter:
            raise DatumError("element over a different Coxeter system")
        return w
    return d.coxeter.from_word(w)


def c_expansion(d: dm.OrbitDatum, w, tau: str) -> dict[str, LaurentPoly]:
    """Coefficients of C_w . L_tau in the self-dual basis.

    Computed in the standard basis, then solved back through the
    unitriangular table, highest position first; no division occurs.
    """
    table = klv_table(d)
    w = _as_element(d, w)
    if tau not in d.param_by_id:
        raise DatumError(f"unknown parameter {tau!r}")
    cw_cols = hm.c_matrix_columns(d, w)
    residual = hm.matrix_apply(cw_cols, table.column(tau))
    index = d.basis_index
    out: dict[str, LaurentPoly] = {}
    while not residual.is_zero():
        top = max(residual.coords, key=index.__getitem__)
        c = residual.coords[top]
        out[top] = c
        residual = residual - table.column(top).scale(c)
    return out


def is_clean(table: KLVTable, tau: str) -> bool:
    """True iff the simple class equals the standard class."""
    col = table.columns[tau]
    return set(col.coords) == {tau}


def is_cuspidal(d: dm.OrbitDatum, tau: str) -> bool:
    """True iff no ascent from another orbit produces tau in its C_s expansion."""
    if tau not in d.param_by_id:
        raise DatumError(f"unknown parameter {tau!r}")
    target_orbit = d.param_by_id[tau].orbit
    sys = d.coxeter
    for s in range(sys.rank):
        gen = sys.generator(s)
        for p in d.params:
            if p.orbit == target_orbit:
                continue
            if dm.s_star(d, s, p.orbit) != target_orbit:
                continue
            if tau in c_expansion(d, gen, p.id):
                return False
    return True


def parity_check(d: dm.OrbitDatum, window: int = 10) -> dm.ValidationReport:
    """Integer-power and single-parity checks over every series of the datum."""
    from . import extseries

    table = klv_table(d)
    checks = []

    problems = []
    count = 0
    for gamma_id, delta_id, poly in table.rows():
        count += 1
        if any(not isinstance(e, int) for e, _ in poly.items()):
            problems.append(f"P[{gamma_id},{delta_id}] has non-integer powers")
    for w in d.coxeter.elements():
        for p in d.params:
            for gamma_id, poly in c_expansion(d, w, p.id).items():
                count += 1
                if any(not isinstance(e, int) for e, _ in poly.items()):
                    problems.append(
                        f"c[{d.coxeter.element_token(w)},{p.id},{gamma_id}] "
                        "has non-integer powers"
                    )
    checks.append(
        dm.CheckResult(
            "integer-powers",
            not problems,
            "; ".join(problems) if problems else f"{count} polynomials",
        )
    )

    problems = []
    count = 0
    for tau in d.basis:
        for gamma in d.basis:
            es = extseries.ext_poincare(d, tau.id, gamma.id)
            count += 1
            if not extseries.single_parity(es, window):
                problems.append(f"Ext({tau.id},{gamma.id}) mixes parities")
        ic = extseries.ic_cohomology(d, tau.id)
        count += 1
        if not extseries.single_parity(ic, window):
            problems.append(f"IC({tau.id}) mixes parities")
    checks.append(
        dm.CheckResult(
            "series-parity",
            not problems,
            "; ".join(problems) if problems else f"{count} series, window q^0..q^{window}",
        )
    )
    return dm.ValidationReport(checks)


def klv_csv(table: KLVTable) -> str:
    lines = ["gamma,delta,P"]
    for gamma_id, delta_id, poly in table.rows():
        lines.append(f"{gamma_id},{delta_id},{render_poly(poly)}")
    return "\n".join(lines) + "\n"


def klv_jsonable(table: KLVTable) -> list[dict]:
    return [
        {"gamma": g, "delta": dl, "P": render_poly(p)} for g, dl, p in table.rows()
    ]
