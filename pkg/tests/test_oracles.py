import random

from powsat.formula import Const, Var, app, atom, conj, neg
from powsat.oracles import finite_oracle, lia_oracle
from powsat.structures import UNBOUNDED, brute_force_power_sat

from helpers import chain_structure, random_formula, random_structure


def test_finite_oracle_basic():
    o = finite_oracle(chain_structure(2))
    f = conj(atom("<=", Var("x"), Var("y")), neg(atom("<=", Var("y"), Var("x"))))
    r = o.decide(f)
    assert r.is_sat and o.model_check(f, r.model)
    assert o.decide(neg(atom("=", Var("x"), Var("x")))).is_unsat


def test_finite_oracle_capacity_becomes_unknown(monkeypatch):
    monkeypatch.setenv("POWSAT_CAPACITY", "3")
    o = finite_oracle(chain_structure(3))
    f = atom("=", Var("x"), Var("y"))
    assert o.decide(f).is_unknown


def test_lia_oracle_examples():
    o = lia_oracle()
    f = conj(
        atom("=", app("+", Var("x"), Var("y")), Var("z")),
        neg(atom("=", Var("x"), Var("z"))),
    )
    r = o.decide(f)
    assert r.is_sat and o.model_check(f, r.model)
    assert r.model["y"] != 0
    assert o.decide(conj(atom("<=", Var("x"), Const("0")),
                         atom("<=", Const("1"), Var("x")))).is_unsat


def test_lia_oracle_naturals_mode():
    o = lia_oracle(naturals=True)
    assert o.decide(atom("=", app("+", Var("x"), Const("1")), Const("0"))).is_unsat
    r = o.decide(atom("<=", Const("0"), Var("x")))
    assert r.is_sat and r.model["x"] >= 0
    assert not o.model_check(atom("<=", Const("0"), Var("x")), {"x": -1})


def test_decide_models_always_pass_model_check():
    rng = random.Random(91)
    for _ in range(200):
        s = random_structure(rng)
        o = finite_oracle(s)
        f = random_formula(rng, s, ["x", "y"], rng.randint(1, 5))
        r = o.decide(f)
        if r.is_sat:
            assert o.model_check(f, r.model)


def test_oracles_agree_on_bounded_instances():
    # force models into {0,1} by explicit bounds; compare with a 2-chain
    fin = finite_oracle(chain_structure(2))
    lia = lia_oracle()
    x, y = Var("x"), Var("y")
    cases = [
        conj(atom("<=", x, y), neg(atom("=", x, y))),
        conj(atom("<=", x, y), atom("<=", y, x), neg(atom("=", x, y))),
        neg(atom("<=", x, x)),
    ]
    for f in cases:
        bounded = conj(
            f,
            atom("<=", Const("0"), x), atom("<=", x, Const("1")),
            atom("<=", Const("0"), y), atom("<=", y, Const("1")),
        )
        assert lia.decide(bounded).is_sat == fin.decide(f).is_sat


def test_unbounded_skolem_shape_sat():
    # many distinct-inequalities: satisfiable in a large enough power
    f = conj(*[neg(atom("=", Var(f"a{i}"), Var(f"b{i}"))) for i in range(4)])
    o = lia_oracle(naturals=True)
    r = o.decide(f)
    assert r.is_sat
