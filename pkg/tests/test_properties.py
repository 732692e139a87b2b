import os
import random

import pytest

from eqseidel import properties
from eqseidel.catalog import parse_space, render_space

SEED = int(os.environ.get("PROPERTY_SEED", "20240601"))


@pytest.fixture(scope="module")
def results():
    print(f"\nproperty seed: {SEED}")
    return properties.run_all(SEED)


def test_suites_pass(results):
    for r in results:
        print(r.line())
    assert all(r.passed for r in results), [f for r in results for f in r.failures[:3]]


def test_case_count(results):
    assert sum(r.cases for r in results) >= 1000


def test_same_seed_same_cases():
    a = properties.parse_render_fixpoint(seed=5, cases=20)
    b = properties.parse_render_fixpoint(seed=5, cases=20)
    assert (a.cases, a.failures) == (b.cases, b.failures)
    rng1, rng2 = random.Random(9), random.Random(9)
    assert properties.random_space_text(rng1) == properties.random_space_text(rng2)


def test_random_specs_are_valid():
    rng = random.Random(SEED)
    for _ in range(50):
        spec = parse_space(properties.random_space_text(rng))
        assert parse_space(render_space(spec)) == spec


def test_failures_carry_the_seed():
    res = properties.SuiteResult("demo", 42, cases=3, failures=["x"])
    assert res.line() == "[FAIL] demo: 3 cases, 1 failures (seed 42)"
