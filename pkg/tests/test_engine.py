"""The compiled kernel and the pure-Python kernel must agree exactly."""

import itertools
import random

import pytest

from powsat._engine import BACKEND, pure
from powsat._engine.program import compile_query

from helpers import random_formula, random_structure

try:
    from powsat._engine import _speedups
except ImportError:
    _speedups = None

needs_compiled = pytest.mark.skipif(_speedups is None, reason="extension not built")


def test_backend_selected():
    assert BACKEND in ("compiled", "pure")


@needs_compiled
def test_scan_parity_random():
    rng = random.Random(17)
    for _ in range(150):
        s = random_structure(rng)
        vars_ = ["x", "y"][: rng.randint(1, 2)]
        f = random_formula(rng, s, vars_, rng.randint(1, 4))
        q = compile_query(s, f, vars_)
        assert pure.scan_component(q) == _speedups.scan_component(q)
        n = rng.randint(1, 3)
        assert pure.scan_power(q, n) == _speedups.scan_power(q, n)


@needs_compiled
def test_eval_parity_exhaustive_small():
    rng = random.Random(19)
    for _ in range(40):
        s = random_structure(rng, max_carrier=2)
        vars_ = ["x", "y"]
        f = random_formula(rng, s, vars_, rng.randint(1, 3))
        q = compile_query(s, f, vars_)
        m = s.carrier_size
        for env in itertools.product(range(m), repeat=2):
            assert pure.eval_component(q, list(env)) == _speedups.eval_component(q, list(env))
        for point in itertools.product(range(m), repeat=4):
            assert pure.eval_power(q, list(point), 2) == _speedups.eval_power(q, list(point), 2)


@needs_compiled
def test_trivial_formulas():
    from powsat.formula import TRUE, FALSE

    rng = random.Random(3)
    s = random_structure(rng)
    for f, want in ((TRUE, 0), (FALSE, -1)):
        q = compile_query(s, f, [])
        assert pure.scan_component(q) == _speedups.scan_component(q) == want
