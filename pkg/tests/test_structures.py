import random

import pytest

from powsat.errors import CapacityError, MalformedInputError
from powsat.formula import Const, Var, app, atom, conj, neg
from powsat.structures import (
    UNBOUNDED, Finite, PowerPoint, brute_force_power_sat, brute_force_sat,
    eval_term, holds, power_holds,
)

from helpers import all_envs, chain_structure, mod_structure, random_formula, random_structure


def max_structure():
    from powsat.formula import Signature
    from powsat.structures import FiniteStructure

    sig = Signature(
        sorts=("elem",),
        functions=(("max", ("elem", "elem"), "elem"),),
        relations=(("=", ("elem", "elem")),),
    )
    return FiniteStructure(
        signature=sig, carrier_size=2, constants={},
        functions={"max": {(a, b): max(a, b) for a in range(2) for b in range(2)}},
        relations={"=": frozenset({(0, 0), (1, 1)})},
    ).validate()


def test_eval_term_table_lookup():
    s = max_structure()
    assert eval_term(s, app("max", Var("x"), Var("y")), {"x": 0, "y": 1}) == 1


def test_eval_term_constant():
    s = chain_structure(2)
    assert eval_term(s, Const("zero"), {}) == 0
    assert eval_term(s, Const("top"), {}) == 1


def test_eval_term_nested():
    s = mod_structure(2)
    # successor mod 2 applied twice to 0 -> 0
    assert eval_term(s, app("succ", app("succ", Var("x"))), {"x": 0}) == 0


def test_eval_term_unknown_symbol():
    s = chain_structure(2)
    with pytest.raises(MalformedInputError):
        eval_term(s, Const("nope"), {})
    with pytest.raises(MalformedInputError):
        eval_term(s, app("nope", Var("x")), {"x": 0})


def test_holds_basic():
    s = chain_structure(2)
    f = conj(atom("<=", Var("x"), Var("y")), neg(atom("<=", Var("y"), Var("x"))))
    assert holds(s, f, {"x": 0, "y": 1})
    assert not holds(s, f, {"x": 1, "y": 0})


def test_holds_tautology_and_equality():
    s = chain_structure(2)
    a = atom("<=", Var("x"), Var("y"))
    from powsat.formula import disj

    assert holds(s, disj(a, neg(a)), {"x": 1, "y": 0})
    eq = atom("=", Var("x"), Var("y"))
    assert holds(s, eq, {"x": 0, "y": 0})
    assert not holds(s, eq, {"x": 0, "y": 1})


def test_power_holds_pointwise():
    s = chain_structure(2)
    le = atom("<=", Var("x"), Var("y"))
    assert power_holds(s, 2, le, PowerPoint({"x": (0, 1), "y": (1, 1)}))
    assert not power_holds(s, 2, le, PowerPoint({"x": (0, 1), "y": (0, 0)}))


def test_power_holds_negation_some_index():
    s = chain_structure(2)
    ne = neg(atom("=", Var("x"), Var("y")))
    assert power_holds(s, 2, ne, PowerPoint({"x": (0, 1), "y": (1, 1)}))
    assert not power_holds(s, 2, ne, PowerPoint({"x": (1, 1), "y": (1, 1)}))


def test_power_holds_length_mismatch():
    s = chain_structure(2)
    with pytest.raises(MalformedInputError):
        power_holds(s, 3, atom("=", Var("x"), Var("x")), PowerPoint({"x": (0, 1)}))


def test_brute_force_sat_examples():
    s = chain_structure(2)
    f = conj(atom("<=", Var("x"), Var("y")), neg(atom("<=", Var("y"), Var("x"))))
    r = brute_force_sat(s, f)
    assert r.is_sat and r.model == {"x": 0, "y": 1}
    assert brute_force_sat(s, neg(atom("=", Var("x"), Var("x")))).is_unsat


def test_brute_force_sat_matches_hand_enumeration():
    s = chain_structure(3)
    rng = random.Random(5)
    vars_ = ["x", "y", "z"]
    for _ in range(60):
        f = random_formula(rng, s, vars_, rng.randint(1, 5))
        want = any(holds(s, f, env) for env in all_envs(vars_, 3))
        assert brute_force_sat(s, f, vars_).is_sat == want


def test_brute_force_power_one_index_matches_component():
    rng = random.Random(23)
    for _ in range(80):
        s = random_structure(rng)
        f = random_formula(rng, s, ["x", "y"], rng.randint(1, 4))
        assert brute_force_power_sat(s, 1, f, ["x", "y"]).is_sat == \
            brute_force_sat(s, f, ["x", "y"]).is_sat


def test_power_of_one_coincides_with_holds_pointwise():
    # exhaustive check on carriers up to 3
    rng = random.Random(29)
    for _ in range(60):
        s = random_structure(rng, max_carrier=3)
        f = random_formula(rng, s, ["x", "y"], rng.randint(1, 4))
        for env in all_envs(["x", "y"], s.carrier_size):
            point = PowerPoint({v: (val,) for v, val in env.items()})
            assert power_holds(s, 1, f, point) == holds(s, f, env)


def test_power_jump_between_sizes():
    # somewhere >0 and somewhere <top is impossible with one index, fine with two
    s = chain_structure(2)
    x = Var("x")
    f = conj(
        atom("<=", Const("zero"), x),
        neg(atom("<=", x, Const("zero"))),
        neg(atom("<=", Const("top"), x)),
    )
    assert brute_force_power_sat(s, 1, f).is_unsat
    r = brute_force_power_sat(s, 2, f)
    assert r.is_sat
    assert power_holds(s, 2, f, r.model)


def test_unbounded_power_is_capacity_error():
    s = chain_structure(2)
    with pytest.raises(CapacityError):
        brute_force_power_sat(s, UNBOUNDED, atom("=", Var("x"), Var("x")))


def test_capacity_cap_env(monkeypatch):
    s = chain_structure(3)
    monkeypatch.setenv("POWSAT_CAPACITY", "10")
    f = atom("=", Var("x"), Var("y"))
    with pytest.raises(CapacityError):
        brute_force_sat(s, f, ["x", "y", "z"])
    monkeypatch.delenv("POWSAT_CAPACITY")
    assert brute_force_sat(s, f, ["x", "y", "z"]).is_sat


def test_power_literal_semantics_property():
    # positive literal: holds at every index; negative: fails at some index
    rng = random.Random(31)
    for _ in range(60):
        s = random_structure(rng, max_carrier=3)
        n = rng.randint(1, 3)
        f = random_formula(rng, s, ["x"], 1)
        vec = tuple(rng.randrange(s.carrier_size) for _ in range(n))
        point = PowerPoint({"x": vec})
        from powsat.formula import Atom, Not

        if isinstance(f, Atom):
            want = all(holds(s, f, {"x": v}) for v in vec)
        elif isinstance(f, Not) and isinstance(f.inner, Atom):
            want = not all(holds(s, f.inner, {"x": v}) for v in vec)
        else:
            continue
        assert power_holds(s, n, f, point) == want


def test_power_monotone_in_n():
    rng = random.Random(41)
    checked = 0
    for _ in range(200):
        s = random_structure(rng)
        f = random_formula(rng, s, ["x", "y"], rng.randint(1, 4))
        for n in (1, 2):
            r = brute_force_power_sat(s, n, f, ["x", "y"])
            if r.is_sat:
                assert brute_force_power_sat(s, n + 1, f, ["x", "y"]).is_sat
                checked += 1
    assert checked > 50


def test_finite_card_validation():
    with pytest.raises(MalformedInputError):
        Finite(0)
