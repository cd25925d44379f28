import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ppcalc.errors import AxiomViolation, CapExceeded, NotInjective
from ppcalc.modules import (ModuleHom, bimodule_from_commutative, cyclic_module, decompose, direct_sum,
                            enumerate_homs, enumerate_modules, find_isomorphism, indecomposable, is_isomorphic,
                            is_split_embedding, module_from_spec, module_from_tables, module_to_spec,
                            regular_bimodule, regular_module, restrict_along, split_embedding_into, tensor)
from ppcalc.rings import reduction_hom, ring_from_spec, zmod

from oracles import brute_homs, brute_indecomposable, brute_isomorphic, brute_splits, tensor_size_gcd
from strategies import small_modules, z_groups

RINGS = ["zmod4", "zmod8", "f2xf2", "ut2f2"]


def test_cyclic_shorthand():
    m = module_from_spec('{"cyclic":[4]}', zmod(4))
    assert m.size == 4 and m.side == "right"
    assert module_from_spec({"ring": "z", "cyclic": [2, 3]}).size == 6


def test_module_tables_validated():
    R = zmod(4)
    add = [[(a + b) % 2 for b in range(2)] for a in range(2)]
    act = [[(a * r) % 2 for r in range(4)] for a in range(2)]
    assert module_from_tables(R, "right", add, act).size == 2
    bad = [[a for r in range(4)] for a in range(2)]  # 0 acts as identity
    with pytest.raises(AxiomViolation):
        module_from_tables(R, "right", add, bad)


@pytest.mark.parametrize("ring", RINGS)
def test_spec_round_trip(ring):
    R = ring_from_spec(ring)
    for m in small_modules(R):
        back = module_from_spec(module_to_spec(m))
        assert back.size == m.size and is_isomorphic(back, m)


@given(z_groups(), z_groups())
def test_tensor_size_matches_gcd_formula(a, b):
    t = tensor(a, bimodule_from_commutative(b))
    assert t.module.size == tensor_size_gcd(a.orders, b.orders)


@pytest.mark.parametrize("ring", ["zmod4", "zmod6", "f2xf2"])
def test_tensor_bilinear_and_balanced(ring):
    R = ring_from_spec(ring)
    mods = small_modules(R, cap=6)
    for m, x in itertools.product(mods[:4], mods[:4]):
        b = bimodule_from_commutative(x)
        res = tensor(m, b)
        tab, T = res.table, res.module
        for a1, a2, y in itertools.product(range(m.size), range(m.size), range(x.size)):
            assert tab[m.add(a1, a2), y] == T.add(tab[a1, y], tab[a2, y])
        for a, y1, y2 in itertools.product(range(m.size), range(x.size), range(x.size)):
            assert tab[a, x.add(y1, y2)] == T.add(tab[a, y1], tab[a, y2])
        for a, y, r in itertools.product(range(m.size), range(x.size), R.elements()):
            assert tab[m.act(a, r), y] == tab[a, b.left_act(y, r)]
        # pure tensors generate M ⊗ X
        assert T.size == 1 or len(set(tab.ravel().tolist())) > 1


def test_tensor_over_noncommutative_ring():
    R = ring_from_spec("ut2f2")
    B = regular_bimodule(R)
    for m in small_modules(R, cap=4):
        assert tensor(m, B).module.size == m.size  # M ⊗ R ≅ M


@pytest.mark.parametrize("ring", RINGS)
def test_indecomposable_matches_idempotent_search(ring):
    R = ring_from_spec(ring)
    for m in small_modules(R):
        assert indecomposable(m) == brute_indecomposable(m), m


@pytest.mark.parametrize("ring", ["zmod4", "f2xf2", "ut2f2"])
def test_hom_enumeration_matches_brute_force(ring):
    R = ring_from_spec(ring)
    mods = small_modules(R, cap=4)
    for a, b in itertools.product(mods, mods):
        found = {tuple(ModuleHom(a, b, mat, check=False).table.tolist()) for mat in enumerate_homs(a, b)}
        assert found == set(brute_homs(a, b))


@pytest.mark.parametrize("ring", ["zmod4", "ut2f2"])
def test_isomorphism_matches_brute_force(ring):
    R = ring_from_spec(ring)
    mods = small_modules(R)
    for a, b in itertools.combinations(mods, 2):
        if a.size == b.size and a.size <= 8:
            assert is_isomorphic(a, b) == brute_isomorphic(a, b)
            iso = find_isomorphism(a, b)
            if iso is not None:
                assert len(set(iso.table.tolist())) == a.size


@pytest.mark.parametrize("ring", ["zmod4", "zmod8", "ut2f2"])
def test_split_embedding_matches_brute_force(ring):
    R = ring_from_spec(ring)
    mods = small_modules(R)
    checked = 0
    for s, t in itertools.product(mods, mods):
        if s.size > t.size or t.size > 8:
            continue
        back = brute_homs(t, s)
        for mat in enumerate_homs(s, t):
            h = ModuleHom(s, t, mat, check=False)
            if not h.is_injective:
                with pytest.raises(NotInjective):
                    is_split_embedding(h)
                continue
            ok, r = is_split_embedding(h)
            tab = h.table.tolist()
            assert ok == any(all(g[tab[x]] == x for x in range(s.size)) for g in back)
            if ok:
                assert r.compose(h).table.tolist() == list(range(s.size))
            checked += 1
    assert checked > 0


def test_z2_into_z4_does_not_split():
    R = zmod(4)
    s, t = cyclic_module(R, [2]), cyclic_module(R, [4])
    h = ModuleHom(s, t, [[2]])
    assert is_split_embedding(h)[0] is False
    assert not brute_splits(h.table.tolist(), s, t)


def test_decompose_recovers_summands():
    R = zmod(8)
    m = cyclic_module(R, [2, 4, 8])
    parts = decompose(m)
    assert sorted(p[0].size for p in parts) == [2, 4, 8]
    for s, incl, proj in parts:
        assert proj.compose(incl).table.tolist() == list(range(s.size))


def test_split_embedding_into_sum_of_targets():
    R = zmod(4)
    m = cyclic_module(R, [2, 4])
    out = split_embedding_into(m, [cyclic_module(R, [2]), cyclic_module(R, [4])])
    assert out is not None
    total, emb = out
    assert is_split_embedding(emb)[0]
    assert split_embedding_into(cyclic_module(R, [4]), [cyclic_module(R, [2])]) is None


def test_direct_sum_maps():
    R = ring_from_spec("ut2f2")
    mods = small_modules(R, cap=4)
    ds = direct_sum(mods[:2])
    assert ds.module.size == mods[0].size * mods[1].size
    for inj, proj, m in zip(ds.injections, ds.projections, mods[:2]):
        assert proj.compose(inj).table.tolist() == list(range(m.size))


def test_restriction_along_surjection():
    f = reduction_hom(zmod(8), zmod(4))
    m = restrict_along(f, cyclic_module(zmod(4), [4]))
    assert m.ring == zmod(8) and m.size == 4
    assert [m.act(1, r) for r in range(8)] == [r % 4 for r in range(8)]


def test_enumerate_modules_counts():
    # Z/4: sums of Z/2 and Z/4 of order ≤ 8
    assert sorted(m.elementary_divisors for m in enumerate_modules(zmod(4), 8)) == sorted(
        [(), (2,), (4,), (2, 2), (2, 4), (2, 2, 2)])
    assert len(enumerate_modules(regular_module(zmod(2)).ring, 4)) == 3


def test_hom_enumeration_cap():
    R = zmod(2)
    big = cyclic_module(R, [2] * 9)
    with pytest.raises(CapExceeded):
        enumerate_homs(big, big)


@given(st.lists(st.sampled_from([2, 4]), min_size=1, max_size=3))
def test_z4_modules_are_sums_of_indecomposables(orders):
    m = cyclic_module(zmod(4), orders)
    parts = decompose(m)
    assert all(indecomposable(p[0]) for p in parts)
    assert int(np.prod([p[0].size for p in parts])) == m.size
