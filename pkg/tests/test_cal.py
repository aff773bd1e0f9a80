import random

import pytest

from powsat.cal import (
    ArrayAtom, ArrayVar, CardAtom, ConstArray, IndexEq, Read, SetComp, Store,
    ValApp, ValueAtom, ValueConst, ValueVar, cal_brute_force, cal_size, catom,
    eval_cal, size_report, translate,
)
from powsat.errors import MalformedInputError
from powsat.formula import Var, atom, conj, disj, neg
from powsat.oracles import finite_oracle
from powsat.qfbapa import Card, IntConst, MAXC
from powsat.qfbapai import solve_qfbapai
from powsat.structures import Finite

from powsat.generators import gen_cal
from helpers import chain_structure


def solve_cal(f, s, n, **kw):
    tr = translate(f, finite_oracle(s), Finite(n))
    return solve_qfbapai(tr.problem, **kw), tr


a, b = ArrayVar("a"), ArrayVar("b")
v, w = ValueVar("v"), ValueVar("w")


def req(array, index):
    return Read(array, index)


def veq(x, y):
    return catom(ValueAtom("=", (x, y)))


def aeq(x, y):
    return catom(ArrayAtom("=", (x, y)))


# --- identities (negated validities must be unsat) -------------------------

VALIDITIES = [
    # read over write
    veq(req(Store(a, "i", v), "i"), v),
    # write over same index
    veq(req(Store(Store(a, "i", v), "i", w), "i"), w),
    # store preserves other positions
    disj(catom(IndexEq("i", "j")), veq(req(Store(a, "i", v), "j"), req(a, "j"))),
    # extensionality of pointwise equality
    disj(neg(aeq(a, b)), veq(req(a, "i"), req(b, "i"))),
    # reflexivity
    aeq(a, a),
    veq(req(a, "i"), req(a, "i")),
    # constant array reads
    veq(req(ConstArray("zero"), "i"), ValueConst("zero")),
    # stored value appears somewhere: |{l : a'(l) = v}| >= 1 after store
    disj(
        neg(aeq(b, Store(a, "i", v))),
        catom(CardAtom("le", IntConst(1), Card(SetComp(atom("=", Var("b"), Var("v")))))),
    ),
    # two stores at distinct indices commute
    disj(
        catom(IndexEq("i", "j")),
        aeq(Store(Store(a, "i", v), "j", w), Store(Store(a, "j", w), "i", v)),
    ),
    # overwrite collapses
    aeq(Store(Store(a, "i", v), "i", w), Store(a, "i", w)),
    # a = b implies reads at the same index agree (contrapositive shape)
    disj(neg(veq(req(a, "i"), v)), disj(neg(aeq(a, b)), veq(req(b, "i"), v))),
    # index equality transport
    disj(neg(catom(IndexEq("i", "j"))), veq(req(a, "i"), req(a, "j"))),
    # cardinality of the whole index set
    catom(CardAtom("eq", Card(SetComp(atom("=", Var("a"), Var("a")))), MAXC)),
    # empty defined set
    catom(CardAtom("eq", Card(SetComp(neg(atom("=", Var("a"), Var("a"))))), IntConst(0))),
    # defined sets are monotone under conjunction
    catom(CardAtom(
        "le",
        Card(SetComp(conj(atom("=", Var("a"), Var("v")), atom("=", Var("b"), Var("b"))))),
        Card(SetComp(atom("=", Var("a"), Var("v")))),
    )),
    # complement counting
    catom(CardAtom(
        "eq",
        __import__("powsat.qfbapa", fromlist=["PSum"]).PSum(
            Card(SetComp(atom("=", Var("a"), Var("v")))),
            Card(SetComp(neg(atom("=", Var("a"), Var("v"))))),
        ),
        MAXC,
    )),
    # stored cell membership: after b = store(a,i,v), the set {l : b(l) = v}
    # contains i (cardinality at least 1)
    disj(
        neg(aeq(b, Store(a, "i", v))),
        catom(CardAtom("le", IntConst(1), Card(SetComp(atom("=", Var("b"), Var("v")))))),
    ),
    # reading the stored array at j either hits v or the old value
    disj(
        veq(req(Store(a, "i", v), "j"), v),
        veq(req(Store(a, "i", v), "j"), req(a, "j")),
    ),
    # pointwise equality is symmetric
    disj(neg(aeq(a, b)), aeq(b, a)),
    # pointwise equality is transitive (three arrays via stores kept small)
    disj(neg(conj(aeq(a, b), aeq(b, Store(a, "i", req(a, "i"))))), aeq(a, Store(a, "i", req(a, "i")))),
    # storing the read value back is the identity
    aeq(Store(a, "i", req(a, "i")), a),
]


@pytest.mark.parametrize("k", range(len(VALIDITIES)))
def test_validity_suite(k):
    f = VALIDITIES[k]
    for size in (2, 3):
        s = chain_structure(size)
        r, _ = solve_cal(neg(f), s, 2)
        assert r.is_unsat, f"validity {k} refuted on carrier {size}"


def test_read_over_write_unsat_all_sizes():
    f = neg(veq(req(Store(a, "i", v), "i"), v))
    for n in (1, 2, 3):
        r, _ = solve_cal(f, chain_structure(2), n)
        assert r.is_unsat


def test_pointwise_eq_with_differing_read():
    f = conj(aeq(a, b), neg(veq(req(a, "i"), req(b, "i"))))
    r, _ = solve_cal(f, chain_structure(2), 2)
    assert r.is_unsat


def test_store_decreases_zero_count():
    # |{l : a(l) = zero}| = |{l : b(l) = zero}|, a = store(b, i, top), b[i] = zero
    s = chain_structure(2)
    zeros_a = Card(SetComp(atom("=", Var("a"), __import__("powsat.formula", fromlist=["Const"]).Const("zero"))))
    zeros_b = Card(SetComp(atom("=", Var("b"), __import__("powsat.formula", fromlist=["Const"]).Const("zero"))))
    f = conj(
        catom(CardAtom("eq", zeros_a, zeros_b)),
        aeq(a, Store(b, "i", ValueConst("top"))),
        veq(req(b, "i"), ValueConst("zero")),
    )
    r, _ = solve_cal(f, s, 2)
    assert r.is_unsat
    assert cal_brute_force(f, s, 2).is_unsat


def test_abstraction_shapes():
    s = chain_structure(2)
    # duplicate reads collapse to one abstraction
    f = catom(ValueAtom("R" if False else "=", (req(a, "i"), req(a, "i"))))
    tr = translate(f, finite_oracle(s), Finite(2))
    assert len(tr.state.read_abs) == 1
    # constant-array reads introduce nothing
    g = veq(req(ConstArray("zero"), "i"), v)
    tr2 = translate(g, finite_oracle(s), Finite(2))
    assert not tr2.state.read_abs and not tr2.state.write_abs
    # two abstracted reads at one index share one singleton
    h = conj(veq(req(a, "i"), v), veq(req(b, "i"), v))
    tr3 = translate(h, finite_oracle(s), Finite(2))
    assert len(tr3.state.singleton_sets) == 1
    # a store alone: one fresh array, two inclusions plus one |.|=1
    st = aeq(b, Store(a, "i", v))
    tr4 = translate(st, finite_oracle(s), Finite(2))
    assert len(tr4.state.write_abs) == 1
    assert len(tr4.state.side) == 3


def test_nested_store_rounds():
    s = chain_structure(2)
    f = veq(req(Store(Store(a, "i", v), "j", w), "i"), v)
    tr = translate(f, finite_oracle(s), Finite(2))
    assert len(tr.state.write_abs) == 2
    assert tr.state.rounds <= cal_size(f)


def test_duplicate_store_terms_share_abstraction():
    s = chain_structure(2)
    t = Store(a, "i", v)
    f = conj(aeq(b, t), veq(req(t, "i"), v))
    tr = translate(f, finite_oracle(s), Finite(2))
    assert len(tr.state.write_abs) == 1
    r = solve_qfbapai(tr.problem)
    assert r.is_sat == cal_brute_force(f, s, 2).is_sat


def test_fixpoint_bound_property():
    rng = random.Random(53)
    for _ in range(60):
        f, s, n = gen_cal(rng)
        tr = translate(f, finite_oracle(s), Finite(n))
        text = repr(f)
        stores_reads = text.count("Store(") + text.count("Read(")
        assert tr.state.rounds <= max(1, stores_reads)


def test_singleton_constraints_unique():
    rng = random.Random(59)
    for _ in range(40):
        f, s, n = gen_cal(rng)
        tr = translate(f, finite_oracle(s), Finite(n))
        card_ones = [
            c for c in tr.state.side
            if "IntEq" in type(c.literal).__name__ and "I!" in str(c)
        ]
        assert len(card_ones) == len(tr.state.singleton_sets)


def test_differential_vs_brute_force():
    rng = random.Random(61)
    for _ in range(120):
        f, s, n = gen_cal(rng)
        got, tr = solve_cal(f, s, n)
        want = cal_brute_force(f, s, n)
        assert not got.is_unknown
        assert got.is_sat == want.is_sat, f"\n{f}\ncarrier={s.carrier_size} n={n}"


def test_size_report_examples():
    s = chain_structure(2)
    # no arrays at all
    f = veq(v, w)
    tr = translate(f, finite_oracle(s), Finite(2))
    rep = size_report(tr)
    assert rep.within
    # single store atom
    g = aeq(b, Store(a, "i", v))
    rep2 = size_report(translate(g, finite_oracle(s), Finite(2)))
    assert rep2.within and rep2.bound >= 64 * rep2.input_size


def test_size_report_corpus():
    rng = random.Random(67)
    for _ in range(150):
        f, s, n = gen_cal(rng)
        rep = size_report(translate(f, finite_oracle(s), Finite(n)))
        assert rep.within, f"{rep} for {f}"


def test_malformed_component_signature():
    from powsat.formula import Signature
    from powsat.structures import FiniteStructure

    sig = Signature(sorts=("elem",), relations=(("R", ("elem", "elem")),))
    s = FiniteStructure(signature=sig, carrier_size=2, constants={}, functions={},
                        relations={"R": frozenset()})
    with pytest.raises(MalformedInputError):
        translate(veq(v, w), finite_oracle(s), Finite(2))
