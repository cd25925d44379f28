import pytest
from hypothesis import given, strategies as st

from ppcalc.dsl import parse
from ppcalc.errors import ArityMismatch, RingMismatch
from ppcalc.formulas import make_formula
from ppcalc.modules import cyclic_module
from ppcalc.rings import INTEGERS, ring_from_spec, zmod
from ppcalc.semantics import (WitnessCertificate, check_certificate, evaluate, holds, leq_semantic, leq_syntactic,
                              pp_type_generator, validation_family)

from oracles import brute_eval
from strategies import formulas, ring_and_formula, small_modules, z_groups


def test_annihilator_in_z4():
    R = zmod(4)
    sol = evaluate(parse("x1*2=0", R), cyclic_module(R, [4]))
    assert sorted(sol) == [(0,), (2,)]


@given(st.data())
def test_evaluate_matches_witness_search(data):
    side = data.draw(st.sampled_from(["right", "left"]))
    R, phi = data.draw(ring_and_formula(side=side))
    m = data.draw(st.sampled_from(small_modules(R, side)))
    assert set(evaluate(phi, m)) == brute_eval(phi, m)


@given(formulas(INTEGERS), z_groups())
def test_evaluate_over_integers(phi, m):
    assert set(evaluate(phi, m)) == brute_eval(phi, m)


@given(st.data())
def test_holds_agrees_with_evaluate(data):
    R, phi = data.draw(ring_and_formula())
    m = data.draw(st.sampled_from(small_modules(R, cap=4)))
    sol = brute_eval(phi, m)
    tup = tuple(data.draw(st.integers(0, m.size - 1)) for _ in range(phi.n))
    assert holds(m, phi, tup) == (tup in sol)


def test_zero_length_tuple_is_trivially_true():
    R = zmod(4)
    phi = make_formula(R, "right", [], [[2]], 0, 1)
    m = cyclic_module(R, [4])
    assert list(evaluate(phi, m)) == [()]
    assert holds(m, phi, ())


def test_mismatches_rejected():
    m = cyclic_module(zmod(4), [4])
    with pytest.raises(RingMismatch):
        evaluate(parse("x1 = 0", zmod(8)), m)
    with pytest.raises(ArityMismatch):
        holds(m, parse("x1 = 0", zmod(4)), (1, 2))


def test_validation_family_for_zmod():
    assert sorted(m.size for m in validation_family(zmod(8))) == [2, 4, 8]


def _brute_leq(phi, psi, modules):
    return all(brute_eval(phi, m) <= brute_eval(psi, m) for m in modules)


@given(st.data())
def test_leq_syntactic_agrees_with_brute_force(data):
    R = data.draw(st.sampled_from([zmod(4), zmod(8), zmod(6)]))
    n = data.draw(st.integers(1, 2))
    phi = data.draw(formulas(R, "right", n))
    psi = data.draw(formulas(R, "right", n))
    cert = leq_syntactic(phi, psi)
    # Z/n modules of size ≤ 8 contain every Z/d, d | n, which generate the category
    truth = _brute_leq(phi, psi, small_modules(R, cap=8))
    assert cert.implies == truth
    if cert.kind in ("syntactic_yes", "semantic_no"):
        assert check_certificate(phi, psi, cert)
    if cert.kind == "semantic_no":
        assert cert.tuple in brute_eval(phi, cert.module)
        assert cert.tuple not in brute_eval(psi, cert.module)


@given(st.data())
def test_leq_syntactic_sound_on_table_rings(data):
    R = data.draw(st.sampled_from([ring_from_spec("f2xf2"), ring_from_spec("ut2f2")]))
    phi = data.draw(formulas(R, "right", 1, max_t=1))
    psi = data.draw(formulas(R, "right", 1, max_t=1))
    cert = leq_syntactic(phi, psi)
    if cert.kind == "syntactic_yes":
        assert check_certificate(phi, psi, cert)
        assert _brute_leq(phi, psi, small_modules(R))
    elif cert.kind == "semantic_no":
        assert cert.tuple in brute_eval(phi, cert.module)
        assert cert.tuple not in brute_eval(psi, cert.module)


@given(formulas(INTEGERS, n=1), formulas(INTEGERS, n=1), st.lists(z_groups(), min_size=3, max_size=3))
def test_leq_syntactic_sound_over_integers(phi, psi, groups):
    cert = leq_syntactic(phi, psi)
    if cert.kind == "syntactic_yes":
        assert _brute_leq(phi, psi, groups)


def test_tampered_certificate_rejected():
    R = zmod(8)
    phi, psi = parse("E y . x1 = y*4", R), parse("x1*2 = 0", R)
    cert = leq_syntactic(phi, psi)
    assert cert.kind == "syntactic_yes"
    bad = WitnessCertificate("syntactic_yes", cert.G1, cert.G2, [[int(x) + 1 for x in row] for row in cert.K])
    assert not check_certificate(phi, psi, bad)


def test_reflexive_pairs_give_identity_witness():
    R = zmod(4)
    phi = parse("E y . x1 = y*2 & x1*2 = 0", R)
    assert leq_syntactic(phi, phi).kind == "syntactic_yes"


def test_leq_semantic_counterexample():
    R = zmod(4)
    ok, bad = leq_semantic(parse("x1*2 = 0", R), parse("E y . x1 = y*2", R))
    assert ok is False or bad is None
    ok, bad = leq_semantic(parse("x1 = 0", R), parse("x1*2 = 0", R))
    assert ok and bad is None


@given(st.data())
def test_pp_type_generator_generates(data):
    R = data.draw(st.sampled_from([zmod(4), zmod(8), ring_from_spec("f2xf2")]))
    m = data.draw(st.sampled_from(small_modules(R, cap=8)))
    n = data.draw(st.integers(1, 2))
    tup = tuple(data.draw(st.integers(0, m.size - 1)) for _ in range(n))
    gen = pp_type_generator(m, tup).formula
    assert tup in brute_eval(gen, m)
    psi = data.draw(formulas(R, "right", n, max_t=1))
    if tup in brute_eval(psi, m):
        assert _brute_leq(gen, psi, small_modules(R, cap=8))
