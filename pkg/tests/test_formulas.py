import pytest
from hypothesis import given, strategies as st

from ppcalc.dsl import parse, to_text
from ppcalc.errors import ArityMismatch, PartitionMismatch, RingMismatch, SideMismatch
from ppcalc.formulas import (bottom, conj, dual, free_realization, make_formula, psum, pushforward, sigma_colon_phi,
                             top)
from ppcalc.modules import cyclic_module, restrict_along
from ppcalc.rings import INTEGERS, reduction_hom, ring_from_spec, zmod

from oracles import brute_eval, brute_sum
from strategies import formulas, ring_and_formula, small_modules


def test_dual_of_annihilator_over_integers():
    d = dual(parse("x1*2 = 0", INTEGERS))
    assert d.side == "left"
    assert to_text(d) == "E z1 . x1 - 2*z1 = 0"


def test_top_and_bottom():
    R = zmod(4)
    m = cyclic_module(R, [4, 2])
    assert len(brute_eval(top(R, 2), m)) == 64
    assert brute_eval(bottom(R, 2), m) == {(int(m.zero), int(m.zero))}


def test_shape_errors():
    R = zmod(4)
    with pytest.raises(ArityMismatch):
        conj(parse("x1 = 0", R), parse("x2 = 0", R))
    with pytest.raises(SideMismatch):
        psum(parse("x1 = 0", R), parse("x1 = 0", R, side="left"))
    with pytest.raises(RingMismatch):
        conj(parse("x1 = 0", R), parse("x1 = 0", zmod(8)))
    with pytest.raises(PartitionMismatch):
        make_formula(R, "right", [[1], [1]], [], 2, 1, (1,))


@given(st.data())
def test_conj_and_sum_semantics(data):
    R, phi = data.draw(ring_and_formula())
    psi = data.draw(formulas(R, "right", phi.n))
    m = data.draw(st.sampled_from(small_modules(R, cap=4)))
    a, b = brute_eval(phi, m), brute_eval(psi, m)
    assert brute_eval(conj(phi, psi), m) == a & b
    assert brute_eval(psum(phi, psi), m) == brute_sum(a, b, m)


@given(st.data())
def test_dual_is_an_involution(data):
    R, phi = data.draw(ring_and_formula())
    m = data.draw(st.sampled_from(small_modules(R, cap=4)))
    assert brute_eval(dual(dual(phi)), m) == brute_eval(phi, m)


@given(st.data())
def test_dual_reverses_order_on_forced_rings(data):
    # over Z/n the modules of size ≤ 8 include every Z/d, d | n
    R = data.draw(st.sampled_from([zmod(4), zmod(8)]))
    phi = data.draw(formulas(R, "right", 1))
    psi = data.draw(formulas(R, "right", 1))
    rights, lefts = small_modules(R, "right"), small_modules(R, "left")
    le = all(brute_eval(phi, m) <= brute_eval(psi, m) for m in rights)
    dle = all(brute_eval(dual(psi), m) <= brute_eval(dual(phi), m) for m in lefts)
    assert le == dle


@given(st.data())
def test_pushforward_matches_restriction(data):
    f = data.draw(st.sampled_from([reduction_hom(zmod(8), zmod(4)), reduction_hom(zmod(4), zmod(2)),
                                   reduction_hom(INTEGERS, zmod(4))]))
    phi = data.draw(formulas(f.source, "right"))
    m = data.draw(st.sampled_from(small_modules(f.target, cap=8)))
    assert brute_eval(pushforward(f, phi), m) == brute_eval(phi, restrict_along(f, m))


@given(st.data())
def test_free_realization_generates_type(data):
    R = data.draw(st.sampled_from([zmod(4), zmod(8)]))
    phi = data.draw(formulas(R, "right", 1))
    fr = free_realization(phi)
    c = fr.module
    assert tuple(fr.tuple) in brute_eval(phi, c)
    psi = data.draw(formulas(R, "right", 1))
    implied = all(brute_eval(phi, m) <= brute_eval(psi, m) for m in small_modules(R))
    assert (tuple(fr.tuple) in brute_eval(psi, c)) == implied


def test_sigma_colon_phi_partition_checked():
    R = zmod(4)
    sigma = parse("x1 + x2 = 0", R)
    phi = parse("x1*2 = 0", R)
    with pytest.raises(PartitionMismatch):
        sigma_colon_phi(sigma, phi)
    beta = sigma_colon_phi(parse("x1*2 = 0", R), phi)
    assert beta.n == 1


def test_formula_over_table_ring_round_trips_through_dual():
    R = ring_from_spec("ut2f2")
    phi = parse("E y . x1 = y*e3", R)
    for m in small_modules(R, cap=4):
        assert brute_eval(dual(dual(phi)), m) == brute_eval(phi, m)
