import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ppcalc.definable import (PpPair, PpPairSet, default_universe, definable_trace, direct_extension, dual_category,
                              everything, finite_join_membership, generated_subcategory, join, meet, members,
                              membership, restriction, tensor_extension, tenspp_criterion, ziegler_points)
from ppcalc.dsl import parse
from ppcalc.errors import SideMismatch
from ppcalc.modules import (bimodule_from_commutative, bimodule_from_hom, cyclic_module, direct_sum,
                            enumerate_modules, restrict_along, tensor)
from ppcalc.rings import diagonal_hom, reduction_hom, ring_from_spec, zmod

from oracles import brute_eval, brute_indecomposable, brute_isomorphic
from strategies import formulas

Z4, Z8 = zmod(4), zmod(8)
_UNI: dict = {}


def universe(R, side="right"):
    key = (R.key, side)
    if key not in _UNI:
        _UNI[key] = default_universe(R, side)
    return _UNI[key]


def pair(R, top, bot, side="right"):
    return PpPair(parse(top, R, side, n=1), parse(bot, R, side, n=1))


def brute_member(m, spec) -> bool:
    return all(brute_eval(p.top, m) <= brute_eval(p.bottom, m) for p in spec.pairs)


def test_default_universes():
    assert len(universe(Z4)) == 16  # Z/2^a + Z/4^b of order ≤ 64
    assert all(m.size <= 64 for m in universe(Z8))


def test_killed_by_two():
    spec = PpPairSet(Z4, "right", [pair(Z4, "true", "x1*2 = 0")])
    got = {m.label for m in members(spec, universe(Z4))}
    assert got == {m.label for m in universe(Z4) if all(o == 2 for o in m.orders)}


@settings(max_examples=25)
@given(st.lists(st.tuples(formulas(Z8, n=1), formulas(Z8, n=1)), min_size=1, max_size=2))
def test_membership_matches_brute_closure(pairs):
    spec = PpPairSet(Z8, "right", [PpPair(a, b) for a, b in pairs])
    for m in universe(Z8).modules[:12]:
        assert membership(m, spec) == brute_member(m, spec)


def test_generated_by_z4():
    spec = generated_subcategory([cyclic_module(Z4, [4])])
    assert sorted(m.label for m in members(spec, universe(Z4))) == ["0", "Z/4", "Z/4+Z/4", "Z/4+Z/4+Z/4"]


def test_generated_subcategory_closure():
    gens = [cyclic_module(Z8, [2]), cyclic_module(Z8, [8])]
    spec = generated_subcategory(gens)
    mem = members(spec, universe(Z8))
    labels = {m.label for m in mem}
    assert {"Z/2", "Z/8"} <= labels
    # closed under direct sums and summands inside the universe
    for a, b in itertools.product(mem, mem):
        if a.size * b.size <= 64:
            assert membership(direct_sum([a, b]).module, spec)
    assert "Z/4" not in labels


def test_meet_is_intersection():
    a = generated_subcategory([cyclic_module(Z8, [2]), cyclic_module(Z8, [4])])
    b = generated_subcategory([cyclic_module(Z8, [4]), cyclic_module(Z8, [8])])
    both = meet(a, b)
    for m in universe(Z8):
        assert membership(m, both) == (membership(m, a) and membership(m, b))
    assert {m.label for m in members(both, universe(Z8))} >= {"Z/4"}


def test_everything_contains_all():
    assert len(members(everything(Z4), universe(Z4))) == len(universe(Z4))


def test_join_and_finite_join_agree():
    gs = [[cyclic_module(Z8, [2])], [cyclic_module(Z8, [8])]]
    specs = [generated_subcategory(g) for g in gs]
    j = join(specs, universe(Z8))
    for m in universe(Z8):
        assert membership(m, j) == (finite_join_membership(m, gs, universe(Z8)) is not None)
    z4 = cyclic_module(Z8, [4])
    assert not membership(z4, j)


def test_join_of_z2_and_z4_is_everything():
    gs = [[cyclic_module(Z4, [2])], [cyclic_module(Z4, [4])]]
    j = join([generated_subcategory(g) for g in gs], universe(Z4))
    assert len(members(j, universe(Z4))) == len(universe(Z4))
    assert finite_join_membership(cyclic_module(Z4, [4]), [[cyclic_module(Z4, [2])]] * 2) is None


def test_dual_category_of_killed_by_two():
    spec = PpPairSet(Z4, "right", [pair(Z4, "true", "x1*2 = 0")])
    d = dual_category(spec)
    assert d.side == "left"
    got = {m.label for m in members(d, universe(Z4, "left"))}
    assert got == {m.label for m in universe(Z4, "left") if all(o == 2 for o in m.orders)}
    back = dual_category(d)
    for m in universe(Z4):
        assert membership(m, back) == membership(m, spec)


def test_pair_sides_checked():
    with pytest.raises(SideMismatch):
        PpPairSet(Z4, "right", [pair(Z4, "true", "2*x1 = 0", side="left")])


def test_direct_extension_law():
    f = reduction_hom(Z8, Z4)
    spec = generated_subcategory([cyclic_module(Z8, [2]), cyclic_module(Z8, [8])])
    ext = direct_extension(f, spec)
    for m in universe(Z4):
        assert membership(m, ext) == membership(restrict_along(f, m), spec)


def test_restriction_and_trace():
    f = reduction_hom(Z8, Z4)
    spec = generated_subcategory([cyclic_module(Z4, [2])])
    res = restriction(f, spec, universe(Z4))
    assert membership(restrict_along(f, cyclic_module(Z4, [2])), res)
    assert not membership(restrict_along(f, cyclic_module(Z4, [4])), res)
    trace = definable_trace(f, universe(Z4))
    mem = {m.label for m in members(trace, universe(Z8))}
    assert {"Z/2", "Z/4"} <= mem and "Z/8" not in mem


def test_ziegler_points_zmod():
    for n, sizes in ((4, [2, 4]), (8, [2, 4, 8])):
        pts = ziegler_points(zmod(n)).points
        assert sorted(p.size for p in pts) == sizes
        assert all(brute_indecomposable(p) for p in pts)
        # every indecomposable up to the cap is one of them
        for m in enumerate_modules(zmod(n), 8):
            if brute_indecomposable(m):
                assert sum(brute_isomorphic(m, p) for p in pts) == 1


def test_ziegler_points_table_ring():
    R = ring_from_spec("ut2f2")
    pts = ziegler_points(R, 8).points
    assert all(brute_indecomposable(p) for p in pts)
    for a, b in itertools.combinations(pts, 2):
        assert not brute_isomorphic(a, b)
    assert sorted(p.size for p in pts) == [2, 2, 4]


def test_tensor_extension_parity():
    # F2 → F2×F2 diagonal: every M ⊗ S has even length, yet the generated
    # subcategory contains the length-one module F2 × 0
    d = diagonal_hom(zmod(2))
    S = d.target
    gens = enumerate_modules(zmod(2), 8)
    spec = tensor_extension(gens, d)
    for m in gens:
        size = tensor(m, bimodule_from_hom(d)).module.size
        assert _length(size) % 2 == 0
    small = [m for m in enumerate_modules(S, 2) if m.size == 2]
    assert small and all(membership(m, spec) for m in small)


def _length(size):
    k = 0
    while size > 1:
        size //= 2
        k += 1
    return k


def test_tenspp_matches_direct_closure():
    R = Z4
    bims = [bimodule_from_commutative(cyclic_module(R, [o])) for o in (2, 4)]
    U = universe(R).modules[:8]
    for s_text, t_text in (("x1*2 = 0", "true"), ("true", "x1*2 = 0"), ("E y . x1 = y*2", "x1*2 = 0")):
        sigma, tau = parse(s_text, R, n=1), parse(t_text, R, n=1)
        res = tenspp_criterion(sigma, tau, bims, arities=(1,))
        direct = all(brute_eval(sigma, tensor(m, b).module) <= brute_eval(tau, tensor(m, b).module)
                     for m in U for b in bims)
        assert res.holds == direct
