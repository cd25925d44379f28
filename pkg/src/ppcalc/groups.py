"""Cyclic decomposition of finite abelian groups given by an addition table."""

from __future__ import annotations

from collections import deque

from .errors import AxiomViolation
from .linalg import Presentation


def check_abelian_group(add, zero: int) -> None:
    size = len(add)
    for a in range(size):
        if len(add[a]) != size:
            raise AxiomViolation("addition table shape", (a,))
        for b in range(size):
            c = add[a][b]
            if not 0 <= c < size:
                raise AxiomViolation("addition closed", (a, b))
    for a in range(size):
        if add[zero][a] != a:
            raise AxiomViolation("additive identity", (a,))
        if zero not in add[a]:
            raise AxiomViolation("additive inverse", (a,))
        for b in range(a + 1, size):
            if add[a][b] != add[b][a]:
                raise AxiomViolation("addition commutative", (a, b))
    for a in range(size):
        ra = add[a]
        for b in range(size):
            ab = ra[b]
            rb = add[b]
            rab = add[ab]
            for c in range(size):
                if rab[c] != ra[rb[c]]:
                    raise AxiomViolation("addition associative", (a, b, c))


def decompose(add, zero: int):
    """Return (orders, coords) where coords[e] are e's coordinates in ⊕ Z/orders.

    Generators are chosen greedily; relations come from the non-tree edges of
    a breadth-first Cayley graph walk and are diagonalised by Smith form.
    """
    size = len(add)
    gens: list[int] = []
    span = {zero}
    while len(span) < size:
        g = min(e for e in range(size) if e not in span)
        gens.append(g)
        frontier = list(span)
        new = set(span)
        cur = frontier
        while cur:
            nxt = []
            for h in cur:
                s = add[h][g]
                if s not in new:
                    new.add(s)
                    nxt.append(s)
            cur = nxt
        span = new
    k = len(gens)
    word = {zero: [0] * k}
    relations = []
    queue = deque([zero])
    while queue:
        e = queue.popleft()
        for i, g in enumerate(gens):
            f = add[e][g]
            w = list(word[e])
            w[i] += 1
            if f in word:
                rel = [x - y for x, y in zip(w, word[f])]
                if any(rel):
                    relations.append(rel)
            else:
                word[f] = w
                queue.append(f)
    pres = Presentation(k, relations)
    coords = [pres.coords(word[e]) for e in range(size)]
    return pres.orders, coords
