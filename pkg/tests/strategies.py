"""Hypothesis strategies for rings, modules and formulas."""

from hypothesis import strategies as st

from ppcalc.formulas import make_formula
from ppcalc.modules import cyclic_module, enumerate_modules
from ppcalc.rings import INTEGERS, ring_from_spec

FINITE_RINGS = ["f2", "zmod4", "zmod8", "zmod6", "f2xf2", "ut2f2"]
_MODULES: dict = {}


def finite_ring():
    return st.sampled_from(FINITE_RINGS).map(ring_from_spec)


def small_modules(R, side="right", cap=8):
    key = (R.key, side, cap)
    if key not in _MODULES:
        _MODULES[key] = [m for m in enumerate_modules(R, cap, side) if m.size > 1]
    return _MODULES[key]


@st.composite
def formulas(draw, R, side="right", n=None, max_t=2, max_m=2):
    n = draw(st.integers(1, 2)) if n is None else n
    t = draw(st.integers(0, max_t))
    m = draw(st.integers(1, max_m))
    if R is INTEGERS:
        entry = st.integers(-4, 4)
    else:
        entry = st.sampled_from(list(R.elements()))
    A = [[draw(entry) for _ in range(m)] for _ in range(n)]
    B = [[draw(entry) for _ in range(m)] for _ in range(t)]
    return make_formula(R, side, A, B, n, m)


@st.composite
def ring_and_formula(draw, side="right", n=None):
    R = draw(finite_ring())
    return R, draw(formulas(R, side, n))


def z_groups():
    return st.lists(st.sampled_from([2, 3, 4, 5, 6, 8, 9]), min_size=1, max_size=2).filter(
        lambda xs: _prod(xs) <= 16).map(lambda xs: cyclic_module(INTEGERS, xs))


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out
