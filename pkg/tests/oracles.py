"""Brute-force reference implementations used by the tests.

Nothing here calls the lattice evaluator, the congruence solver or the
tensor presentation code.  Modules are read off as addition and action
tables and every question is settled by exhaustive search.
"""

from __future__ import annotations

import itertools
from math import gcd, prod


class TableModule:
    """A finite module as plain Python tables."""

    def __init__(self, m):
        self.size = m.size
        self.add = [[int(x) for x in row] for row in m.add_table]
        self.zero = int(m.zero)
        self.neg = [row.index(self.zero) for row in self.add]
        self.ring = m.ring
        self.act = [[int(x) for x in row] for row in m.act_table] if m.ring.is_finite else None
        # element = Σ c_k g_k, read from the carrier's own coordinates
        self.orders = list(m.orders)
        self.gens = [int(m.generator(k)) for k in range(len(self.orders))]
        self.coords = [[int(c) for c in row] for row in m.coords]

    def times_int(self, a: int, k: int) -> int:
        out = self.zero
        for _ in range(abs(k) % (self.size or 1)):
            out = self.add[out][a]
        return self.neg[out] if k < 0 else out

    def scale(self, a: int, r) -> int:
        if self.act is None:
            return self.times_int(a, r)
        return self.act[a][r]

    def total(self, terms) -> int:
        out = self.zero
        for t in terms:
            out = self.add[out][t]
        return out


def brute_eval(phi, m) -> set:
    """{x̄ : ∃ȳ  x̄A + ȳB = 0} by enumerating every ȳ."""
    tm = m if isinstance(m, TableModule) else TableModule(m)
    n, t, cols = phi.n, phi.t, phi.m
    reachable = set()
    for ys in itertools.product(range(tm.size), repeat=t):
        reachable.add(tuple(tm.total(tm.scale(ys[k], phi.B[k][j]) for k in range(t)) for j in range(cols)))
    out = set()
    for xs in itertools.product(range(tm.size), repeat=n):
        need = tuple(tm.neg[tm.total(tm.scale(xs[i], phi.A[i][j]) for i in range(n))] for j in range(cols))
        if need in reachable:
            out.add(xs)
    return out


def brute_sum(phi_set: set, psi_set: set, m) -> set:
    tm = m if isinstance(m, TableModule) else TableModule(m)
    return {tuple(tm.add[a][b] for a, b in zip(x, y)) for x in phi_set for y in psi_set}


def tensor_size_gcd(orders_a, orders_b) -> int:
    """|⊕Z/a_i ⊗_Z ⊕Z/b_j| = Π gcd(a_i, b_j)."""
    return prod(gcd(a, b) for a in orders_a for b in orders_b)


def brute_homs(src, dst) -> list:
    """All module homs src → dst as lookup tables."""
    s, d = TableModule(src), TableModule(dst)
    order_of = []
    for b in range(d.size):
        k, x = 1, b
        while x != d.zero:
            x = d.add[x][b]
            k += 1
        order_of.append(k)
    choices = [[b for b in range(d.size) if o % order_of[b] == 0] for o in s.orders]
    out = []
    for imgs in itertools.product(*choices):
        table = [d.total(d.times_int(imgs[k], c[k]) for k in range(len(imgs))) for c in s.coords]
        if all(table[s.add[a][b]] == d.add[table[a]][table[b]] for a in range(s.size) for b in range(s.size)):
            if s.act is None or all(table[s.act[a][r]] == d.act[table[a]][r]
                                    for a in range(s.size) for r in range(len(s.act[0]))):
                out.append(tuple(table))
    return out


def brute_indecomposable(m) -> bool:
    """Nonzero with no idempotent endomorphism other than 0 and 1."""
    if m.size == 1:
        return False
    ident = tuple(range(m.size))
    zero = tuple([int(m.zero)] * m.size)
    for e in brute_homs(m, m):
        if e in (ident, zero):
            continue
        if all(e[e[a]] == e[a] for a in range(m.size)):
            return False
    return True


def brute_isomorphic(a, b) -> bool:
    if a.size != b.size:
        return False
    return any(len(set(h)) == a.size for h in brute_homs(a, b))


def brute_splits(h_table, src, dst) -> bool:
    """Some r: dst → src with r∘h = id."""
    return any(all(r[h_table[x]] == x for x in range(src.size)) for r in brute_homs(dst, src))
