import json

import pytest

from ppcalc.errors import SpecError
from ppcalc.verify import SUITES, SuiteConfig, SuiteReport, run_suite, tensor_annihilator
from ppcalc.modules import cyclic_module
from ppcalc.rings import zmod

from oracles import TableModule


def test_all_suites_registered():
    assert set(SUITES) >= {"duality", "herzog", "presta", "sigmaphi", "fstar", "epi", "elem4", "sigmaphiprop",
                           "tenspur", "tensor", "atomicity", "cextens", "definable", "ziegler", "tenspp"}


def test_unknown_suite():
    with pytest.raises(SpecError):
        run_suite("nonsense")


def test_config_validation():
    with pytest.raises(SpecError):
        SuiteConfig(max_module_size=0)
    with pytest.raises(SpecError):
        SuiteConfig(budget=0)


@pytest.mark.parametrize("name", ["herzog", "tensor", "cextens", "tenspp"])
def test_small_runs_pass(name):
    r = run_suite(name, SuiteConfig(rings=("zmod4",), max_module_size=4, tuple_len=1))
    assert r.passed, r.failures[:3]
    assert r.instances > 0


def test_report_json_is_deterministic_and_excludes_runtime():
    cfg = SuiteConfig(rings=("zmod4",), max_module_size=4, tuple_len=1, budget=50)
    a, b = run_suite("presta", cfg), run_suite("presta", cfg)
    assert a.dumps() == b.dumps()
    data = json.loads(a.dumps())
    assert "runtime" not in data
    assert data["passed"] is True and data["suite"] == "presta"


def test_budget_sampling_is_seeded_and_noted():
    cfg = SuiteConfig(rings=("zmod8",), tuple_len=1, budget=20, seed=3)
    r = run_suite("presta", cfg)
    assert any("sampled 20" in n for n in r.notes)
    assert run_suite("presta", cfg).dumps() == r.dumps()


def test_failures_fail_the_report():
    r = SuiteReport("x", {}, instances=3, failures=[{"check": "c"}])
    assert not r.passed and "FAIL" in r.summary()


def test_tensor_annihilator_against_pure_tensor_search():
    # a ⊗ b = 0 in Z/4 ⊗ Z/2 iff a·b is even: brute force on Z/4 ⊗ Z/2 ≅ Z/2
    R = zmod(4)
    m, l = cyclic_module(R, [4]), cyclic_module(R, [2], side="left")
    tm, tl = TableModule(m), TableModule(l)
    for a in range(m.size):
        ann = set(tensor_annihilator(m, (a,), l))
        expect = {(b,) for b in range(l.size) if (tm.coords[a][0] * tl.coords[b][0]) % 2 == 0}
        assert ann == expect
