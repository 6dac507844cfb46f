import random

import pytest

from klvwb.coxeter import build_system
from klvwb.errors import SystemMismatch
from klvwb.hecke import (
    HeckeElt,
    T,
    bar_hecke,
    kl_basis,
    kl_table_csv,
    mul_T,
    parse_token,
    render_token,
    unit,
    verify_kl_basis,
)
from klvwb.laurent import ONE, Q, LaurentPoly, parse_poly


def rand_elt(sys, rng, nterms=3):
    els = sys.elements()
    out = HeckeElt(sys)
    for _ in range(rng.randint(1, nterms)):
        w = rng.choice(els)
        c = LaurentPoly({rng.randint(-3, 3): rng.randint(-5, 5)})
        out = out + HeckeElt(sys, {w: c})
    return out


def test_quadratic_relation():
    sys = build_system("A1")
    ts = T(sys, [0])
    assert mul_T(ts, ts) == ts.scale(Q - ONE) + unit(sys).scale(Q)


def test_braid_move_product():
    sys = build_system("A2")
    assert mul_T(T(sys, [0]), T(sys, [1])) == T(sys, [0, 1])


def test_idempotent_like_product():
    # (T_e + T_s)^2 = (q+1)(T_e + T_s), expanded via the quadratic relation
    sys = build_system("A1")
    a = unit(sys) + T(sys, [0])
    lhs = mul_T(a, a)
    # oracle: expand by hand: T_e + 2T_s + T_s^2 = (q+1)T_e + (q+1)T_s
    assert lhs == a.scale(Q + ONE)
    assert lhs.coefficient(sys.identity) == parse_poly("1+q")


def test_braid_relations_all_pairs():
    for label in ["A2", "B2", "G2", "A3"]:
        sys = build_system(label)
        for s in range(sys.rank):
            for t in range(s + 1, sys.rank):
                m = sys.coxeter_m(s, t)
                left = unit(sys)
                right = unit(sys)
                for k in range(m):
                    left = mul_T(left, T(sys, [s if k % 2 == 0 else t]))
                    right = mul_T(right, T(sys, [t if k % 2 == 0 else s]))
                assert left == right, (label, s, t)


def test_t_products_follow_length_additivity():
    sys = build_system("A3")
    for x in sys.elements():
        for s in range(sys.rank):
            prod = mul_T(T(sys, x), T(sys, [s]))
            xs = x.mul_gen(s)
            if xs.length > x.length:
                assert prod == T(sys, xs)


def test_quadratic_as_left_and_right_operator():
    # T_s (T_s T_w) = (q-1) T_s T_w + q T_w, and the mirror on the right
    for label in ["A2", "B2"]:
        sys = build_system(label)
        for s in range(sys.rank):
            ts = T(sys, [s])
            for w in sys.elements():
                tw = T(sys, w)
                left = mul_T(ts, tw)
                assert mul_T(ts, left) == left.scale(Q - ONE) + tw.scale(Q)
                right = mul_T(tw, ts)
                assert mul_T(right, ts) == right.scale(Q - ONE) + tw.scale(Q)


def test_bar_of_generator():
    # oracle: bar(T_s) must be the two-sided inverse of T_s
    sys = build_system("A1")
    ts = T(sys, [0])
    b = bar_hecke(ts)
    assert mul_T(b, ts) == unit(sys)
    assert mul_T(ts, b) == unit(sys)
    expected = HeckeElt(
        sys, {sys.generator(0): parse_poly("q^-1"), sys.identity: parse_poly("-1+q^-1")}
    )
    assert b == expected


def test_bar_fixed_line():
    sys = build_system("A1")
    a = unit(sys) + T(sys, [0])
    assert bar_hecke(a) == a.scale(parse_poly("q^-1"))


def test_bar_is_involution_and_multiplicative():
    rng = random.Random(31337)
    for label in ["A2", "B2"]:
        sys = build_system(label)
        for _ in range(25):
            a, b = rand_elt(sys, rng), rand_elt(sys, rng)
            assert bar_hecke(bar_hecke(a)) == a
            assert bar_hecke(mul_T(a, b)) == mul_T(bar_hecke(a), bar_hecke(b))


def test_kl_basis_a1():
    sys = build_system("A1")
    basis = kl_basis(sys)
    cs = basis.c(sys.generator(0))
    assert cs == unit(sys) + T(sys, [0])
    assert verify_kl_basis(basis) == []


def test_kl_basis_a2_all_ones():
    sys = build_system("A2")
    basis = kl_basis(sys)
    assert verify_kl_basis(basis) == []
    w0 = sys.from_word([0, 1, 0])
    c = basis.c(w0)
    assert set(c.terms) == set(sys.elements())
    assert all(p == ONE for p in c.terms.values())
    for w in sys.elements():
        for x in c.terms:
            if sys.leq_bruhat(x, w):
                assert basis.p(x, w) == ONE


def test_kl_basis_b2_all_ones():
    sys = build_system("B2")
    basis = kl_basis(sys)
    assert verify_kl_basis(basis) == []
    for w in sys.elements():
        for x in sys.elements():
            expected = ONE if sys.leq_bruhat(x, w) else None
            got = basis.c(w).terms.get(x)
            assert got == expected


def test_kl_basis_a3_passes_verifier():
    sys = build_system("A3")
    basis = kl_basis(sys)
    assert verify_kl_basis(basis) == []
    # S4 is the smallest symmetric group with a non-constant polynomial
    nontrivial = [
        p for c in basis.table.values() for p in c.terms.values() if p != ONE
    ]
    assert nontrivial and all(p == ONE + Q for p in nontrivial)


def test_cs_squared():
    for label in ["A2", "B2"]:
        sys = build_system(label)
        basis = kl_basis(sys)
        for s in range(sys.rank):
            cs = basis.c(sys.generator(s))
            assert mul_T(cs, cs) == cs.scale(Q + ONE)


def test_verifier_catches_corruption():
    sys = build_system("A2")
    basis = kl_basis(sys)
    table = dict(basis.table)
    w0 = sys.from_word([0, 1, 0])
    table[w0] = table[w0] + T(sys, sys.identity).scale(Q)
    from klvwb.hecke import KLBasis

    assert verify_kl_basis(KLBasis(sys, table)) != []


def test_tokens():
    sys = build_system("A2")
    w = sys.from_word([0, 1, 0])
    assert render_token(sys, w) == "T[1,2,1]"
    assert parse_token(sys, "T[1,2,1]") == ("T", w)
    assert parse_token(sys, "C[]") == ("C", sys.identity)


def test_kl_table_csv_shape():
    sys = build_system("A1")
    csv = kl_table_csv(sys)
    assert csv.splitlines() == ["x,w,P", "e,e,1", "e,1,1", "1,1,1"]


def test_system_mismatch():
    a, b = build_system("A1"), build_system("A1")
    with pytest.raises(SystemMismatch):
        mul_T(T(a, [0]), T(b, [0]))
