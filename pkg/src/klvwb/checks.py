"""Aggregated invariant suites behind the command line 'check' subcommand.

Each suite re-runs one family of declared invariants against a datum:
validation, the Hecke-algebra oracle for its Weyl group, the duality
involution laws, the self-dual basis contract, the module-equals-algebra
cross oracle (hecke-regular datums), positivity of the C_w structure
constants, cuspidal-implies-clean, and series parity.  Results come back
as named pass/fail lines in a fixed order, so output is byte-stable.
"""

from __future__ import annotations

from . import datum as dm
from . import hecke
from . import hmodule as hm
from . import klv as klvmod
from .laurent import ONE, Q, LaurentPoly

_QINV = LaurentPoly.monomial(1, -1)


def run_check_suites(d: dm.OrbitDatum, window: int = 10) -> dm.ValidationReport:
    checks = []

    validation = dm.validate_datum(d)
    detail = "" if validation.ok else "; ".join(
        f"{c.name}: {c.detail}" for c in validation.checks if not c.passed
    )
    checks.append(dm.CheckResult("validation", validation.ok, detail))
    if not validation.ok:
        return dm.ValidationReport(checks)

    checks.append(_hecke_oracle(d))
    checks.append(_involution_suite(d))
    checks.append(_selfdual_suite(d))
    checks.append(_cross_oracle(d))
    checks.append(_positivity_suite(d))
    checks.append(_cuspidal_clean_suite(d))
    checks.append(_parity_suite(d, window))
    return dm.ValidationReport(checks)


def _hecke_oracle(d: dm.OrbitDatum) -> dm.CheckResult:
    sys = d.coxeter
    problems = []
    for s in range(sys.rank):
        ts = hecke.T(sys, [s])
        lhs = hecke.mul_T(ts + hecke.unit(sys), ts - hecke.unit(sys).scale(Q))
        if not lhs.is_zero():
            problems.append(f"(T{s + 1}+1)(T{s + 1}-q) != 0")
    for s in range(sys.rank):
        for t in range(s + 1, sys.rank):
            m = sys.coxeter_m(s, t)
            left = right = hecke.unit(sys)
            for k in range(m):
                left = hecke.mul_T(left, hecke.T(sys, [s if k % 2 == 0 else t]))
                right = hecke.mul_T(right, hecke.T(sys, [t if k % 2 == 0 else s]))
            if left != right:
                problems.append(f"braid relation (s{s + 1}, s{t + 1}) fails")
    basis = hecke.kl_basis(sys)
    problems.extend(hecke.verify_kl_basis(basis))
    for s in range(sys.rank):
        cs = basis.c(sys.generator(s))
        if hecke.mul_T(cs, cs) != cs.scale(Q + ONE):
            problems.append(f"C{s + 1}^2 != (q+1) C{s + 1}")
    n = sys.order()
    return dm.CheckResult(
        "hecke-oracle", not problems,
        "; ".join(problems) if problems else f"|W|={n}, quadratic+braid+kl-basis",
    )


def _involution_suite(d: dm.OrbitDatum) -> dm.CheckResult:
    sys = d.coxeter
    table = hm.build_action_table(d)
    problems = []
    for p in d.params:
        v = hm.basis_vector(d, p.id)
        if hm.beta(hm.beta(v, d), d) != v:
            problems.append(f"beta^2 != id at {p.id}")
        for s in range(sys.rank):
            lhs = hm.beta(table.apply(s, v), d)
            bv = hm.beta(v, d)
            rhs = table.apply(s, bv).scale(_QINV) + bv.scale(_QINV - ONE)
            if lhs != rhs:
                problems.append(f"beta(T{s + 1} m[{p.id}]) != bar(T{s + 1}) beta(m[{p.id}])")
    return dm.CheckResult(
        "involution", not problems,
        "; ".join(problems) if problems else f"{len(d.params)} basis vectors",
    )


def _selfdual_suite(d: dm.OrbitDatum) -> dm.CheckResult:
    table = klvmod.klv_table(d)
    problems = klvmod.verify_klv_table(table, d)
    if not problems:
        # stability: C_w L_tau is again self-dual up to the combined twist
        for w in d.coxeter.elements():
            cols = hm.c_matrix_columns(d, w)
            for p in d.params:
                vec = hm.matrix_apply(cols, table.column(p.id))
                twist = LaurentPoly.monomial(1, w.length + p.dim)
                if hm.beta(vec, d).scale(twist) != vec:
                    problems.append(
                        f"C[{d.coxeter.element_token(w)}] L[{p.id}] not self-dual"
                    )
    return dm.CheckResult(
        "selfdual-basis", not problems,
        "; ".join(problems) if problems else f"{len(d.params)} columns verified",
    )


def _cross_oracle(d: dm.OrbitDatum) -> dm.CheckResult:
    if not d.name.startswith("hecke-regular:"):
        return dm.CheckResult("cross-oracle", True, "not a hecke-regular datum; skipped")
    sys = d.coxeter
    table = klvmod.klv_table(d)
    basis = hecke.kl_basis(sys)
    problems = []
    for w in sys.elements():
        token = sys.element_token(w)
        expected = {sys.element_token(x): p for x, p in basis.c(w).terms.items()}
        got = dict(table.column(token).coords)
        if expected != got:
            problems.append(f"table column {token} differs from the algebra oracle")
    return dm.CheckResult(
        "cross-oracle", not problems,
        "; ".join(problems) if problems else f"{sys.order()} columns equal",
    )


def _positivity_suite(d: dm.OrbitDatum) -> dm.CheckResult:
    problems = []
    count = 0
    for w in d.coxeter.elements():
        for p in d.params:
            for gamma, coeff in klvmod.c_expansion(d, w, p.id).items():
                count += 1
                if not coeff.is_nonnegative():
                    problems.append(
                        f"c[{d.coxeter.element_token(w)},{p.id},{gamma}] "
                        "has a negative coefficient"
                    )
    return dm.CheckResult(
        "positivity", not problems,
        "; ".join(problems) if problems else f"{count} coefficients checked",
    )


def _cuspidal_clean_suite(d: dm.OrbitDatum) -> dm.CheckResult:
    table = klvmod.klv_table(d)
    problems = []
    cuspidals = []
    for p in d.params:
        if klvmod.is_cuspidal(d, p.id):
            cuspidals.append(p.id)
            if not klvmod.is_clean(table, p.id):
                problems.append(f"{p.id} is cuspidal but not clean")
    return dm.CheckResult(
        "cuspidal-clean", not problems,
        "; ".join(problems) if problems else "cuspidals: " + (",".join(cuspidals) or "none"),
    )


def _parity_suite(d: dm.OrbitDatum, window: int) -> dm.CheckResult:
    report = klvmod.parity_check(d, window)
    problems = [f"{c.name}: {c.detail}" for c in report.checks if not c.passed]
    detail = "; ".join(problems) if problems else "; ".join(
        f"{c.name} ({c.detail})" for c in report.checks
    )
    return dm.CheckResult("parity", not problems, detail)
