import random

import pytest

from powsat.errors import CapacityError
from powsat.formula import And, Atom, Const, Not, Var, atom, conj, neg
from powsat.oracles import finite_oracle, lia_oracle
from powsat.qfbapa import Card, IntConst, IntEq, IntLe, MAXC, SVar, SetEq, batom, eval_formula
from powsat.qfbapai import (
    QFBAPAIProblem, RegionPattern, SupportCertificate, all_patterns,
    build_component_query, build_qfbapa_query, check_certificate_qfbapai,
    qfbapai_brute_force, solve_qfbapai, witness_induced_model,
)
from powsat.structures import Finite, UNBOUNDED

from powsat.generators import gen_qfbapai
from helpers import chain_structure


def lia_problem(skeleton, set_vars, definitions, arrays, constants=(), n=3):
    return QFBAPAIProblem(
        oracle=lia_oracle(),
        index_card=Finite(n),
        skeleton=skeleton,
        set_vars=tuple(set_vars),
        definitions=definitions,
        arrays=tuple(arrays),
        constants=tuple(constants),
    ).validate()


x = Var("x")
GE0 = atom("<=", Const("0"), x)          # x >= 0
LE_M1 = atom("<=", x, Const("-1"))       # x <= -1
VALID = atom("=", x, x)


def test_partition_of_odd_universe_unsat():
    p = lia_problem(
        batom(IntEq(Card(SVar("S1")), Card(SVar("S2")))),
        ["S1", "S2"],
        {"S1": GE0, "S2": LE_M1},
        ["x"],
        n=3,
    )
    assert solve_qfbapai(p).is_unsat


def test_valid_definition_forces_universe():
    p = lia_problem(
        batom(SetEq(SVar("S1"), __import__("powsat.qfbapa", fromlist=["EMPTY"]).EMPTY)),
        ["S1"],
        {"S1": VALID},
        ["x"],
        n=2,
    )
    assert solve_qfbapai(p).is_unsat


def test_full_cardinality_constant_witness():
    p = lia_problem(
        batom(IntEq(Card(SVar("S1")), MAXC)),
        ["S1"],
        {"S1": GE0},
        ["x"],
        n=3,
    )
    r = solve_qfbapai(p)
    assert r.is_sat
    assert all(v >= 0 for v in r.model.arrays["x"])
    assert len(r.model.arrays["x"]) == 3


def test_confinement_blocks_phantom_default_region():
    # S1 = I is forced by a valid definition, so demanding a nonempty
    # complement must be unsat; without the default-region confinement the
    # two sub-queries would wrongly accept at the empty support with b=0
    from powsat.qfbapa import SCompl

    p = lia_problem(
        conj(
            batom(IntLe(IntConst(1), Card(SCompl(SVar("S1"))))),
            batom(IntLe(IntConst(1), Card(SVar("S1")))),
        ),
        ["S1"],
        {"S1": VALID},
        ["x"],
        n=3,
    )
    assert solve_qfbapai(p).is_unsat


def test_build_component_query_shapes():
    p = lia_problem(batom(IntLe(IntConst(0), MAXC)), ["S1"], {"S1": GE0}, ["x"], n=2)
    pos = RegionPattern((1,))
    y1 = build_component_query(p, [pos], b=1)
    assert "x@1" in str(y1) and "x@0" not in str(y1)
    y0 = build_component_query(p, [pos], b=0)
    assert "x@0" in str(y0)
    # k=2, region (+,-), b=0: the default tuple must avoid phi1 & ~phi2
    p2 = lia_problem(
        batom(IntLe(IntConst(0), MAXC)), ["S1", "S2"], {"S1": GE0, "S2": LE_M1}, ["x"], n=2,
    )
    y = build_component_query(p2, [RegionPattern((1, 0))], b=0)
    assert isinstance(y, And)
    # the rank-1 tuple contributes phi1 & ~phi2; the default tuple
    # contributes one negated pattern disjunction over x@0
    default_nots = [
        g for g in y.parts
        if isinstance(g, Not) and "x@0" in str(g)
    ]
    assert len(default_nots) == 1 and isinstance(default_nots[0].inner, And)


def test_build_qfbapa_query_cover():
    p = lia_problem(batom(IntLe(IntConst(0), MAXC)), ["S1"], {"S1": GE0}, ["x"], n=2)
    y = build_qfbapa_query(p, [RegionPattern((1,)), RegionPattern((0,))], b=1)
    # complementary regions: the cover constraint is valid, so the query
    # reduces to F plus two nonemptiness atoms
    from powsat.qfbapa import qfbapa_sat

    assert qfbapa_sat(y, maxc=2).is_sat
    y_single = build_qfbapa_query(p, [RegionPattern((1,))], b=1)
    r = qfbapa_sat(y_single, maxc=2)
    assert r.is_sat and r.model.sets["S1"] == frozenset({0, 1})


def test_unbounded_index_card_rejected():
    p = QFBAPAIProblem(
        oracle=lia_oracle(), index_card=UNBOUNDED,
        skeleton=batom(IntLe(IntConst(0), MAXC)),
        set_vars=("S1",), definitions={"S1": GE0}, arrays=("x",),
    )
    with pytest.raises(CapacityError):
        solve_qfbapai(p)


def test_pattern_cap():
    defs = {f"S{i}": GE0 for i in range(1, 14)}
    p = QFBAPAIProblem(
        oracle=lia_oracle(), index_card=Finite(2),
        skeleton=batom(IntLe(IntConst(0), MAXC)),
        set_vars=tuple(defs), definitions=defs, arrays=("x",),
    )
    with pytest.raises(CapacityError):
        solve_qfbapai(p)


def test_differential_vs_brute_force():
    rng = random.Random(37)
    for _ in range(200):
        p = gen_qfbapai(rng)
        got = solve_qfbapai(p)
        want = qfbapai_brute_force(p)
        assert not got.is_unknown
        assert got.is_sat == want.is_sat, str(p)
        if got.is_sat:
            n = p.index_card.n
            induced = witness_induced_model(p, got.model, n)
            assert eval_formula(p.skeleton, induced)


def test_shared_constant_coupling_family():
    rng = random.Random(41)
    for _ in range(80):
        p = gen_qfbapai(rng, coupled=True)
        got = solve_qfbapai(p)
        want = qfbapai_brute_force(p)
        assert got.is_sat == want.is_sat, str(p)


def test_certificate_round_trip_and_mutations():
    rng = random.Random(43)
    accepted = mutated = 0
    for _ in range(150):
        p = gen_qfbapai(rng)
        r = solve_qfbapai(p)
        if not r.is_sat:
            continue
        cert = r.certificate
        assert check_certificate_qfbapai(p, cert)
        accepted += 1
        from powsat.mutations import qfbapai_certificate_mutations

        for bad in qfbapai_certificate_mutations(p, cert):
            assert not check_certificate_qfbapai(p, bad)
            mutated += 1
        # a flipped cover bit may or may not stay valid (a covered b=0
        # certificate doubles as a b=1 certificate); what must hold is
        # that anything the checker accepts assembles into a sound witness
        flipped = SupportCertificate(cert.regions, 1 - cert.cover_bit,
                                     cert.component_model, cert.set_model)
        if check_certificate_qfbapai(p, flipped):
            from powsat.qfbapai import assemble_arrays

            w = assemble_arrays(p, flipped.regions, flipped.cover_bit,
                                flipped.component_model, flipped.set_model)
            induced = witness_induced_model(p, w, p.index_card.n)
            assert eval_formula(p.skeleton, induced)
    assert accepted > 25 and mutated > 10


def test_certificate_wrong_universe_size():
    rng = random.Random(47)
    for _ in range(40):
        p = gen_qfbapai(rng)
        r = solve_qfbapai(p)
        if not r.is_sat:
            continue
        from powsat.qfbapa import SetModel

        m = r.certificate.set_model
        bad_model = SetModel(maxc=m.maxc + 1, sets=m.sets, ints=m.ints)
        bad = SupportCertificate(r.certificate.regions, r.certificate.cover_bit,
                                 r.certificate.component_model, bad_model)
        assert not check_certificate_qfbapai(p, bad)
        break


def test_finite_oracle_instances_match_chain():
    s = chain_structure(3)
    p = QFBAPAIProblem(
        oracle=finite_oracle(s),
        index_card=Finite(3),
        skeleton=batom(IntEq(Card(SVar("S1")), IntConst(2))),
        set_vars=("S1",),
        definitions={"S1": atom("<=", Var("x"), Var("c"))},
        arrays=("x",),
        constants=("c",),
    ).validate()
    r = solve_qfbapai(p)
    assert r.is_sat
    w = r.model
    c = w.constants["c"]
    assert sum(1 for v in w.arrays["x"] if v <= c) == 2
    assert qfbapai_brute_force(p).is_sat
