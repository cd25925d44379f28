import itertools

from hypothesis import given, strategies as st

from ppcalc.linalg import Presentation, invariant_factors, kernel_of_map, matmul, smith_form, solve_congruences

small = st.integers(-6, 6)


def matrices(max_rows=3, max_cols=3):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def _det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))


@given(matrices())
def test_smith_form_factorisation(a):
    sf = smith_form(a)
    d = matmul(matmul(sf.u, a), sf.v)
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            assert x == (sf.diagonal[i] if i == j else 0)
    nz = [x for x in sf.diagonal if x]
    assert all(x > 0 for x in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    assert abs(_det(sf.u)) == 1 and abs(_det(sf.v)) == 1


def test_invariant_factors_known():
    assert invariant_factors([[2, 0], [0, 3]]) == [1, 6]
    assert invariant_factors([[4, 0], [0, 6]]) == [2, 12]


@given(matrices(2, 3), st.lists(st.integers(0, 6), min_size=2, max_size=2),
       st.lists(small, min_size=2, max_size=2))
def test_congruence_solver_matches_search(a, moduli, b):
    rows = len(a)
    moduli, b = moduli[:rows], b[:rows]
    moduli = [m if m != 1 else 0 for m in moduli]
    sol = solve_congruences(a, b, moduli)
    cols = len(a[0])

    def ok(x):
        return all((sum(a[i][j] * x[j] for j in range(cols)) - b[i]) % moduli[i] == 0 if moduli[i]
                   else sum(a[i][j] * x[j] for j in range(cols)) == b[i] for i in range(rows))

    found = any(ok(x) for x in itertools.product(range(-8, 9), repeat=cols))
    if sol is None:
        assert not found
    else:
        assert ok(sol.particular)
        for k in sol.kernel:
            assert all((sum(a[i][j] * k[j] for j in range(cols))) % moduli[i] == 0 if moduli[i]
                       else sum(a[i][j] * k[j] for j in range(cols)) == 0 for i in range(rows))


def test_presentation_of_cyclic_quotients():
    p = Presentation(2, [[4, 0], [0, 6]])
    assert p.order == 24
    p = Presentation(2, [[2, 2], [0, 4]])
    assert p.order == 8


def test_kernel_of_reduction():
    # Z/4 -> Z/2, 1 -> 1 has kernel generated by 2
    gens = kernel_of_map([[1]], [4], [2])
    span = {(g[0] * k) % 4 for g in gens for k in range(4)}
    assert span == {0, 2}
