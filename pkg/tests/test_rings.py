import itertools

import pytest
from hypothesis import given, strategies as st

from ppcalc.errors import AxiomViolation, NotAHom, SpecError
from ppcalc.groups import check_abelian_group, decompose
from ppcalc.rings import (INTEGERS, RingHom, diagonal_hom, hom_check, hom_from_spec, product, reduction_hom,
                          ring_from_spec, table_ring, upper_triangular_f2, zmod)


def _axioms_hold(R):
    els = list(R.elements())
    for a, b, c in itertools.product(els, repeat=3):
        assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
        assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
        assert R.mul(R.add(a, b), c) == R.add(R.mul(a, c), R.mul(b, c))
    for a in els:
        assert R.mul(R.one, a) == a == R.mul(a, R.one)
        assert R.add(a, R.neg(a)) == R.zero


@pytest.mark.parametrize("name", ["f2", "zmod4", "zmod8", "zmod6", "f2xf2", "ut2f2"])
def test_shorthand_rings_satisfy_axioms(name):
    _axioms_hold(ring_from_spec(name))


def test_ring_specs_round_trip():
    for name in ["z", "zmod4", "f2xf2", "ut2f2"]:
        R = ring_from_spec(name)
        assert ring_from_spec(R.spec) == R


def test_integers_json_spec():
    assert ring_from_spec('{"kind":"Z"}') is INTEGERS


def test_ut2_is_noncommutative_and_not_forced():
    R = upper_triangular_f2()
    assert R.order == 8
    assert not R.is_commutative
    assert not R.forced


def test_product_decomposition():
    R = product([zmod(2), zmod(2)])
    assert R.order == 4
    assert sorted(R.additive_orders) == [2, 2]
    assert R.characteristic == 2


def test_bad_table_rejected():
    add = [[0, 1], [1, 0]]
    mul = [[0, 0], [0, 0]]  # no unit
    with pytest.raises(AxiomViolation):
        table_ring(add, mul)


def test_nonassociative_table_rejected():
    # Z/3 addition with a multiplication that is distributive-breaking
    add = [[(a + b) % 3 for b in range(3)] for a in range(3)]
    mul = [[0, 0, 0], [0, 1, 2], [0, 2, 2]]
    with pytest.raises(AxiomViolation):
        table_ring(add, mul)


def test_unknown_ring_rejected():
    with pytest.raises(SpecError):
        ring_from_spec("quaternions")


def test_reduction_and_diagonal_homs():
    f = reduction_hom(zmod(8), zmod(4))
    assert [f(a) for a in range(8)] == [0, 1, 2, 3, 0, 1, 2, 3]
    assert f.is_surjective
    d = diagonal_hom(zmod(2))
    assert d.target.order == 4
    hom_check(d)


def test_non_hom_rejected():
    with pytest.raises(NotAHom):
        hom_check(RingHom(zmod(4), zmod(2), [0, 1, 1, 1]))
    with pytest.raises(NotAHom):
        hom_from_spec({"source": "zmod4", "target": "zmod2", "map": [0, 0, 0, 0]})


def test_group_check_detects_nonassociativity():
    add = [[0, 1, 2], [1, 0, 2], [2, 2, 0]]
    with pytest.raises(AxiomViolation):
        check_abelian_group(add, 0)


@given(st.lists(st.sampled_from([2, 3, 4, 5, 8, 9]), min_size=1, max_size=3).filter(lambda xs: _prod(xs) <= 96))
def test_group_decomposition_matches_direct_sum(orders):
    # table of ⊕ Z/o in mixed radix, decomposed from scratch
    els = list(itertools.product(*[range(o) for o in orders]))
    index = {e: i for i, e in enumerate(els)}
    add = [[index[tuple((x + y) % o for x, y, o in zip(a, b, orders))] for b in els] for a in els]
    found, coords = decompose(add, 0)
    assert len(els) == max(1, _prod(found))
    assert _elementary(found) == _elementary(orders)
    # coordinates are additive
    for a, b in itertools.product(range(len(els)), repeat=2):
        s = add[a][b]
        assert all((coords[a][k] + coords[b][k] - coords[s][k]) % found[k] == 0 for k in range(len(found)))


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _elementary(orders):
    out = []
    for o in orders:
        p = 2
        while o > 1:
            q = 1
            while o % p == 0:
                o //= p
                q *= p
            if q > 1:
                out.append(q)
            p += 1
    return sorted(out)


@given(st.integers(2, 30), st.integers(-100, 100), st.integers(-100, 100))
def test_zmod_arithmetic(n, a, b):
    R = zmod(n)
    x, y = R.from_int(a), R.from_int(b)
    assert R.add(x, y) == (a + b) % n
    assert R.mul(x, y) == (a * b) % n
    assert R.int_value(x) % n == a % n
