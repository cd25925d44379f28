"""Finite modules, bimodules, homomorphisms and tensor products.

A module is stored as a finite abelian group ⊕ Z/o_k in coordinates together
with one integer matrix per ring element: coords(x·r) = T_r · coords(x),
reduced modulo the orders.  Elements are indexed by the mixed-radix code of
their coordinates (first coordinate most significant) unless the module was
built from user tables, in which case the user's labels are kept.

>>> from ppcalc.rings import zmod
>>> M = cyclic_module(zmod(4), [2, 4])
>>> M.size, M.add(5, 7), M.act(3, 2)
(8, 4, 2)
"""

from __future__ import annotations

import os
from functools import cached_property
from itertools import combinations_with_replacement

import numpy as np

from .errors import AxiomViolation, CapExceeded, NotAHom, NotInjective, RingMismatch, SideMismatch, SpecError
from .groups import check_abelian_group, decompose as decompose_group
from .linalg import Presentation, kernel_of_map, solve_congruences
from .rings import INTEGERS, Ring, RingHom, opposite

DEFAULT_MAX_TENSOR_GENERATORS = 4096
DEFAULT_MAX_ENUMERATION = 1 << 16


def max_cells() -> int:
    return int(os.environ.get("PPCALC_MAX_CELLS", 1 << 22))


def _prime_powers(d: int) -> list[int]:
    out = []
    p = 2
    while p * p <= d:
        if d % p == 0:
            q = 1
            while d % p == 0:
                d //= p
                q *= p
            out.append(q)
        p += 1
    if d > 1:
        out.append(d)
    return out


def _reduce_rows(mat: np.ndarray, orders) -> np.ndarray:
    if not len(orders):
        return mat
    o = np.array(orders, dtype=np.int64)[:, None]
    return np.mod(mat, o)


class Carrier:
    """A finite abelian group ⊕ Z/orders[k] with element labels."""

    def __init__(self, orders, coords=None):
        self.orders = tuple(int(o) for o in orders)
        if any(o < 2 for o in self.orders):
            raise SpecError(f"cyclic orders must be >= 2: {self.orders}")
        self.rank = len(self.orders)
        size = 1
        for o in self.orders:
            size *= o
        self.size = size
        w = [1] * self.rank
        for k in range(self.rank - 2, -1, -1):
            w[k] = w[k + 1] * self.orders[k + 1]
        self._weights = np.array(w, dtype=np.int64)
        self._orders_arr = np.array(self.orders, dtype=np.int64)
        if coords is None:
            self._labels = None
        else:
            coords = np.asarray(coords, dtype=np.int64).reshape(size, self.rank)
            codes = coords @ self._weights
            lookup = np.empty(size, dtype=np.int64)
            lookup[codes] = np.arange(size)
            self._labels = (coords, lookup)

    @property
    def canonical(self) -> bool:
        return self._labels is None

    @cached_property
    def coords(self) -> np.ndarray:
        if self._labels is not None:
            return self._labels[0]
        if self.size > max_cells():
            raise CapExceeded("carrier enumeration", self.size, max_cells())
        e = np.arange(self.size, dtype=np.int64)[:, None]
        return (e // self._weights[None, :]) % self._orders_arr[None, :]

    def coords_of(self, e) -> np.ndarray:
        if self._labels is not None:
            return self._labels[0][e]
        e = np.asarray(e, dtype=np.int64)
        return (e[..., None] // self._weights) % self._orders_arr

    def encode(self, c) -> np.ndarray:
        """Element labels of coordinate vectors (last axis), reducing mod orders."""
        c = np.asarray(c, dtype=np.int64)
        if self.rank == 0:
            return np.zeros(c.shape[:-1], dtype=np.int64)
        codes = np.mod(c, self._orders_arr) @ self._weights
        if self._labels is not None:
            return self._labels[1][codes]
        return codes

    def element(self, coords) -> int:
        return int(self.encode(np.array(coords, dtype=np.int64)))

    @cached_property
    def zero(self) -> int:
        return self.element([0] * self.rank)

    def add(self, a, b):
        return int(self.encode(self.coords_of(a) + self.coords_of(b)))

    def neg(self, a):
        return int(self.encode(-self.coords_of(a)))

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords
        return self.encode(c[:, None, :] + c[None, :, :])

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.encode(-self.coords)

    def generator(self, k: int) -> int:
        return self.element([int(i == k) for i in range(self.rank)])

    def elements(self):
        return range(self.size)

    def tuples(self, n: int) -> np.ndarray:
        """All n-tuples of elements as an array of shape (size**n, n), lexicographic."""
        total = self.size ** n
        if total > max_cells():
            raise CapExceeded("tuple enumeration", total, max_cells())
        idx = np.arange(total, dtype=np.int64)
        cols = []
        for i in range(n):
            w = self.size ** (n - 1 - i)
            cols.append((idx // w) % self.size)
        return np.stack(cols, axis=1) if cols else np.zeros((1, 0), dtype=np.int64)

    @cached_property
    def elementary_divisors(self) -> tuple:
        out = []
        for o in self.orders:
            out.extend(_prime_powers(o))
        return tuple(sorted(out))

    def _matrix_eq(self, x: np.ndarray, y: np.ndarray) -> bool:
        return not _reduce_rows(np.asarray(x) - np.asarray(y), self.orders).any()


def _scalar_matrix(k: int, rank: int) -> np.ndarray:
    return np.eye(rank, dtype=np.int64) * int(k)


def _ring_mats(ring: Ring, build, rank: int):
    if not ring.is_finite:
        return None
    return np.stack([build(r) for r in ring.elements()]) if ring.order else None


class FiniteModule(Carrier):
    """A finite left or right module over a ring."""

    def __init__(self, ring: Ring, side: str, orders, mats=None, coords=None, label: str | None = None):
        super().__init__(orders, coords)
        if side not in ("left", "right"):
            raise SpecError(f"side must be 'left' or 'right', got {side!r}")
        self.ring = ring
        self.side = side
        if ring.is_finite:
            if mats is None:
                if not ring.forced:
                    raise SpecError("action matrices are required for rings not generated by 1")
                mats = np.stack([_scalar_matrix(ring.int_value(r), self.rank) for r in ring.elements()])
            mats = np.asarray(mats, dtype=np.int64).reshape(ring.order, self.rank, self.rank)
            self.mats = np.mod(mats, self._orders_arr[None, :, None]) if self.rank else mats
        else:
            self.mats = None
        self.label = label or self._default_label()

    def _default_label(self) -> str:
        if not self.orders:
            return "0"
        return "+".join(f"Z/{o}" for o in self.orders) if self.ring.forced else f"M{self.orders}"

    def __repr__(self):
        return f"FiniteModule({self.label} over {self.ring.name}, {self.side})"

    def act_matrix(self, r) -> np.ndarray:
        if self.mats is None:
            return _scalar_matrix(r, self.rank)
        return self.mats[r]

    def act(self, a, r) -> int:
        return int(self.encode(self.act_matrix(r) @ self.coords_of(a)))

    def act_many(self, elems, r) -> np.ndarray:
        return self.encode(self.coords_of(elems) @ self.act_matrix(r).T)

    @cached_property
    def act_table(self) -> np.ndarray:
        """act_table[a][r] = a·r (right) or r·a (left)."""
        c = self.coords
        return np.stack([self.encode(c @ self.mats[r].T) for r in self.ring.elements()], axis=1)

    @cached_property
    def key(self):
        parts = [self.ring.key, self.side, self.orders]
        if self.mats is not None:
            parts.append(self.mats.tobytes())
        if self._labels is not None:
            parts.append(self._labels[0].tobytes())
        return tuple(parts)

    def __eq__(self, other):
        return isinstance(other, FiniteModule) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def with_side(self, side: str) -> "FiniteModule":
        """Reinterpret a module over a commutative ring on the other side."""
        if side == self.side:
            return self
        if not self.ring.is_commutative:
            raise SideMismatch("only modules over commutative rings can change side")
        return self._clone(side=side)

    def over_opposite(self) -> "FiniteModule":
        """A right R-module viewed as a left R^op-module (and vice versa)."""
        side = "left" if self.side == "right" else "right"
        return self._clone(ring=opposite(self.ring), side=side)

    def _clone(self, ring=None, side=None, label=None):
        coords = None if self._labels is None else self._labels[0]
        return FiniteModule(ring or self.ring, side or self.side, self.orders, self.mats, coords,
                            label or self.label)

    def relabel(self, label: str) -> "FiniteModule":
        return self._clone(label=label)

    @property
    def ring_generators(self):
        """Ring elements whose action determines all others (additively)."""
        if not self.ring.is_finite or self.ring.forced:
            return ()
        return self.ring.additive_generators


class Bimodule(Carrier):
    """An (R,S)-bimodule; either ring may be the integers."""

    def __init__(self, left_ring: Ring, right_ring: Ring, orders, lmats=None, rmats=None, coords=None,
                 label: str | None = None):
        super().__init__(orders, coords)
        self.left_ring = left_ring
        self.right_ring = right_ring
        self.lmats = self._prepare(left_ring, lmats)
        self.rmats = self._prepare(right_ring, rmats)
        self.label = label or ("+".join(f"Z/{o}" for o in self.orders) or "0")

    def _prepare(self, ring, mats):
        if not ring.is_finite:
            return None
        if mats is None:
            if not ring.forced:
                raise SpecError("action matrices are required for rings not generated by 1")
            mats = np.stack([_scalar_matrix(ring.int_value(r), self.rank) for r in ring.elements()])
        return np.asarray(mats, dtype=np.int64).reshape(ring.order, self.rank, self.rank)

    def __repr__(self):
        return f"Bimodule({self.label} over ({self.left_ring.name},{self.right_ring.name}))"

    def left_matrix(self, r):
        return _scalar_matrix(r, self.rank) if self.lmats is None else self.lmats[r]

    def right_matrix(self, s):
        return _scalar_matrix(s, self.rank) if self.rmats is None else self.rmats[s]

    def left_act(self, b, r):
        return int(self.encode(self.left_matrix(r) @ self.coords_of(b)))

    def right_act(self, b, s):
        return int(self.encode(self.right_matrix(s) @ self.coords_of(b)))

    def left_module(self) -> FiniteModule:
        coords = None if self._labels is None else self._labels[0]
        return FiniteModule(self.left_ring, "left", self.orders, self.lmats, coords, self.label)

    def right_module(self) -> FiniteModule:
        coords = None if self._labels is None else self._labels[0]
        return FiniteModule(self.right_ring, "right", self.orders, self.rmats, coords, self.label)

    @cached_property
    def key(self):
        parts = [self.left_ring.key, self.right_ring.key, self.orders]
        for m in (self.lmats, self.rmats):
            parts.append(None if m is None else m.tobytes())
        if self._labels is not None:
            parts.append(self._labels[0].tobytes())
        return tuple(parts)


# -- constructors -------------------------------------------------------------

def zero_module(ring: Ring, side: str = "right") -> FiniteModule:
    mats = None if not ring.is_finite else np.zeros((ring.order, 0, 0), dtype=np.int64)
    return FiniteModule(ring, side, (), mats, label="0")


def cyclic_module(ring: Ring, orders, side: str = "right", label=None) -> FiniteModule:
    """⊕ Z/d_i with the action forced by the additive structure."""
    orders = [int(d) for d in orders if int(d) != 1]
    if ring.is_finite:
        if not ring.forced:
            raise SpecError("the 'cyclic' shorthand needs a ring generated by 1")
        for d in orders:
            if ring.characteristic % d:
                raise AxiomViolation("characteristic annihilates module", (d, ring.characteristic))
    return FiniteModule(ring, side, orders, label=label)


def regular_module(ring: Ring, side: str = "right") -> FiniteModule:
    """R as a module over itself; element labels agree with ring elements."""
    if not ring.is_finite:
        raise SpecError("the integers are not a finite module")
    pick = ring.right_mult_matrix if side == "right" else ring.left_mult_matrix
    mats = np.stack([pick(r) for r in ring.elements()])
    return FiniteModule(ring, side, ring.additive_orders, mats, ring.coord_array, label=ring.name)


def regular_bimodule(ring: Ring) -> Bimodule:
    lm = np.stack([ring.left_mult_matrix(r) for r in ring.elements()])
    rm = np.stack([ring.right_mult_matrix(r) for r in ring.elements()])
    return Bimodule(ring, ring, ring.additive_orders, lm, rm, ring.coord_array, label=ring.name)


def bimodule_from_hom(f: RingHom) -> Bimodule:
    """S as an (R,S)-bimodule: r·s·s' = f(r)·s·s'."""
    S = f.target
    lm_base = [S.left_mult_matrix(f(r)) for r in f.source.elements()] if f.source.is_finite else None
    lm = np.stack(lm_base) if lm_base is not None else None
    rm = np.stack([S.right_mult_matrix(s) for s in S.elements()])
    return Bimodule(f.source, S, S.additive_orders, lm, rm, S.coord_array, label=S.name)


def bimodule_from_left(L: FiniteModule) -> Bimodule:
    """A left R-module as an (R,Z)-bimodule."""
    if L.side != "left":
        raise SideMismatch("expected a left module")
    coords = None if L._labels is None else L._labels[0]
    return Bimodule(L.ring, INTEGERS, L.orders, L.mats, None, coords, label=L.label)


def bimodule_from_commutative(M: FiniteModule) -> Bimodule:
    """A module over a commutative ring as a bimodule with equal actions."""
    if not M.ring.is_commutative:
        raise SideMismatch("needs a commutative ring")
    coords = None if M._labels is None else M._labels[0]
    return Bimodule(M.ring, M.ring, M.orders, M.mats, M.mats, coords, label=M.label)


def module_from_tables(ring: Ring, side: str, add, act=None, label=None, check: bool = True) -> FiniteModule:
    add = [list(map(int, r)) for r in add]
    size = len(add)
    zero = next((z for z in range(size) if add[z] == list(range(size))), None)
    if zero is None:
        raise AxiomViolation("additive identity")
    if check:
        check_abelian_group(add, zero)
    orders, coords = decompose_group(add, zero)
    coords = np.array(coords, dtype=np.int64).reshape(size, len(orders))
    index = {tuple(c): e for e, c in enumerate(coords.tolist())}
    gens = [index[tuple(int(i == k) for i in range(len(orders)))] for k in range(len(orders))]
    if not ring.is_finite:
        M = FiniteModule(ring, side, orders, None, coords, label)
        if act is not None:
            raise SpecError("modules over Z take no action table")
        return M
    if act is None:
        if not ring.forced:
            raise SpecError("an action table is required")
        M = FiniteModule(ring, side, orders, None, coords, label)
        return module_check(M) if check else M
    act = [list(map(int, r)) for r in act]
    if len(act) != size or any(len(r) != ring.order for r in act):
        raise AxiomViolation("action table shape")
    if check:
        _check_action_table(ring, side, add, act, zero)
    mats = np.zeros((ring.order, len(orders), len(orders)), dtype=np.int64)
    for r in ring.elements():
        for k, g in enumerate(gens):
            mats[r, :, k] = coords[act[g][r]]
    M = FiniteModule(ring, side, orders, mats, coords, label)
    if check:
        table = M.act_table
        for a in range(size):
            for r in ring.elements():
                if table[a][r] != act[a][r]:
                    raise AxiomViolation("action additive in the module element", (a, r))
        module_check(M)
    return M


def _check_action_table(ring, side, add, act, zero):
    size = len(add)
    one = ring.one
    for a in range(size):
        if act[a][one] != a:
            raise AxiomViolation("unit", (a,))
        if not all(0 <= x < size for x in act[a]):
            raise AxiomViolation("action closed", (a,))
    for a in range(size):
        for r in ring.elements():
            for s in ring.elements():
                if act[a][ring.add(r, s)] != add[act[a][r]][act[a][s]]:
                    raise AxiomViolation("action additive in the ring element", (a, r, s))
                rs = ring.mul(r, s)
                lhs = act[a][rs]
                rhs = act[act[a][r]][s] if side == "right" else act[act[a][s]][r]
                if lhs != rhs:
                    raise AxiomViolation("action associative", (a, r, s))
    for a in range(size):
        for b in range(size):
            ab = add[a][b]
            for r in ring.elements():
                if act[ab][r] != add[act[a][r]][act[b][r]]:
                    raise AxiomViolation("action additive in the module element", (a, b, r))


def _check_mats(ring: Ring, side: str, carrier: Carrier, matrix, what: str) -> None:
    if not ring.is_finite:
        return
    rank = carrier.rank
    o = carrier._orders_arr
    for r in ring.elements():
        t = matrix(r)
        if rank and _reduce_rows(t * o[None, :], carrier.orders).any():
            raise AxiomViolation(f"{what} action well defined", (r,))
    if not carrier._matrix_eq(matrix(ring.one), np.eye(rank, dtype=np.int64)):
        raise AxiomViolation("unit", (ring.one,))
    for r in ring.elements():
        tr = matrix(r)
        for s in ring.elements():
            ts = matrix(s)
            if not carrier._matrix_eq(matrix(ring.add(r, s)), tr + ts):
                raise AxiomViolation(f"{what} action additive in the ring element", (r, s))
            prod = ts @ tr if side == "right" else tr @ ts
            if not carrier._matrix_eq(matrix(ring.mul(r, s)), prod):
                raise AxiomViolation(f"{what} action associative", (r, s))


def module_check(m):
    """Verify the module (or bimodule) axioms; returns m."""
    if isinstance(m, Bimodule):
        _check_mats(m.left_ring, "left", m, m.left_matrix, "left")
        _check_mats(m.right_ring, "right", m, m.right_matrix, "right")
        if m.left_ring.is_finite and m.right_ring.is_finite:
            for r in m.left_ring.elements():
                lr = m.left_matrix(r)
                for s in m.right_ring.elements():
                    rs = m.right_matrix(s)
                    if not m._matrix_eq(lr @ rs, rs @ lr):
                        raise AxiomViolation("actions commute", (r, s))
        return m
    _check_mats(m.ring, m.side, m, m.act_matrix, "module")
    return m


def module_from_presentation(ring: Ring, side: str, pres: Presentation, ambient_action, label=None) -> FiniteModule:
    """Quotient of Z^g by a relation lattice, with the action induced from Z^g.

    ``ambient_action(r)`` is a g×g integer matrix acting on column vectors.
    """
    if not pres.is_finite:
        raise SpecError("presentation defines an infinite group")
    k = len(pres.orders)
    lifts = np.array([pres.lift(i) for i in range(k)], dtype=object).reshape(k, pres.ngens)
    cm = np.array(pres.coord_matrix, dtype=object).reshape(pres.ngens, k)
    o = np.array(pres.orders, dtype=object)

    def induced(amb):
        images = (np.array(amb, dtype=object) @ lifts.T).T  # k × g
        c = images @ cm
        return np.array(np.mod(c, o).T, dtype=np.int64) if k else np.zeros((0, 0), dtype=np.int64)

    if ring.is_finite:
        mats = np.stack([induced(ambient_action(r)) for r in ring.elements()])
    else:
        mats = None
    return FiniteModule(ring, side, pres.orders, mats, label=label)


def restrict_along(f: RingHom, m: FiniteModule) -> FiniteModule:
    if m.ring != f.target:
        raise RingMismatch("module is not over the hom's target")
    coords = None if m._labels is None else m._labels[0]
    if f.source.is_finite:
        mats = np.stack([m.act_matrix(f(r)) for r in f.source.elements()])
    else:
        mats = None
    return FiniteModule(f.source, m.side, m.orders, mats, coords, label=m.label)


# -- homomorphisms --------------------------------------------------------------

class ModuleHom:
    """coords(h(x)) = matrix · coords(x), reduced modulo the target orders."""

    def __init__(self, source: FiniteModule, target: FiniteModule, matrix, check: bool = True):
        self.source = source
        self.target = target
        self.matrix = _reduce_rows(np.asarray(matrix, dtype=np.int64).reshape(target.rank, source.rank),
                                   target.orders)
        if check:
            hom_module_check(self)

    def __call__(self, x) -> int:
        return int(self.target.encode(self.matrix @ self.source.coords_of(x)))

    def apply_many(self, xs) -> np.ndarray:
        return self.target.encode(self.source.coords_of(np.asarray(xs)) @ self.matrix.T)

    @cached_property
    def table(self) -> np.ndarray:
        return self.target.encode(self.source.coords @ self.matrix.T)

    def compose(self, other: "ModuleHom") -> "ModuleHom":
        """self ∘ other."""
        return ModuleHom(other.source, self.target, self.matrix @ other.matrix, check=False)

    @property
    def is_injective(self) -> bool:
        images = [list(self.matrix[:, k]) for k in range(self.source.rank)]
        gens = kernel_of_map(images, self.source.orders, self.target.orders)
        o = self.source.orders
        return all(all(int(g[k]) % o[k] == 0 for k in range(len(o))) for g in gens)

    def __repr__(self):
        return f"ModuleHom({self.source.label} -> {self.target.label})"


def hom_from_table(source: FiniteModule, target: FiniteModule, table) -> ModuleHom:
    table = [int(x) for x in table]
    if len(table) != source.size:
        raise NotAHom("table length", ())
    mat = np.zeros((target.rank, source.rank), dtype=np.int64)
    for k in range(source.rank):
        mat[:, k] = target.coords_of(table[source.generator(k)])
    h = ModuleHom(source, target, mat)
    got = h.table
    for x in range(source.size):
        if got[x] != table[x]:
            raise NotAHom("not additive", (x,))
    return h


def _linearity_rings(source: FiniteModule):
    return source.ring_generators


def hom_module_check(h: ModuleHom) -> ModuleHom:
    S, T = h.source, h.target
    if S.ring != T.ring or S.side != T.side:
        raise NotAHom("ring or side mismatch", ())
    x = h.matrix
    if S.rank and _reduce_rows(x * S._orders_arr[None, :], T.orders).any():
        raise NotAHom("not well defined on the source group", ())
    for r in _linearity_rings(S):
        if not T._matrix_eq(x @ S.act_matrix(r), T.act_matrix(r) @ x):
            raise NotAHom("does not commute with the action", (r,))
    return h


def identity_hom(m: FiniteModule) -> ModuleHom:
    return ModuleHom(m, m, np.eye(m.rank, dtype=np.int64), check=False)


def _hom_system(src: FiniteModule, dst: FiniteModule):
    """Linear conditions on X (dst.rank × src.rank, flattened row-major) for a hom src → dst."""
    rs, rd = src.rank, dst.rank
    rows, mods = [], []
    for i in range(rd):
        for k in range(rs):
            row = [0] * (rd * rs)
            row[i * rs + k] = src.orders[k]
            rows.append(row)
            mods.append(dst.orders[i])
    for r in _linearity_rings(src):
        ts = src.act_matrix(r)
        td = dst.act_matrix(r)
        for i in range(rd):
            for k in range(rs):
                row = [0] * (rd * rs)
                for l in range(rs):
                    row[i * rs + l] += int(ts[l, k])
                for l in range(rd):
                    row[l * rs + k] -= int(td[i, l])
                rows.append(row)
                mods.append(dst.orders[i])
    return rows, mods


def hom_generators(src: FiniteModule, dst: FiniteModule) -> list[np.ndarray]:
    rows, mods = _hom_system(src, dst)
    n = src.rank * dst.rank
    if n == 0:
        return []
    sol = solve_congruences(rows, [0] * len(rows), mods, ncols=n)
    gens = []
    for k in sol.kernel:
        m = _reduce_rows(np.array(k, dtype=np.int64).reshape(dst.rank, src.rank), dst.orders)
        if m.any():
            gens.append(m)
    return gens


def enumerate_homs(src: FiniteModule, dst: FiniteModule, cap: int = DEFAULT_MAX_ENUMERATION, stop=None):
    """Every hom src → dst as a matrix; ``stop(matrix)`` returning True ends early."""
    gens = hom_generators(src, dst)
    zero = np.zeros((dst.rank, src.rank), dtype=np.int64)
    seen = {zero.tobytes()}
    out = [zero]
    if stop is not None and stop(zero):
        return out
    frontier = [zero]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                c = _reduce_rows(m + g, dst.orders)
                b = c.tobytes()
                if b in seen:
                    continue
                seen.add(b)
                out.append(c)
                if len(out) > cap:
                    raise CapExceeded("hom enumeration", len(out), cap)
                if stop is not None and stop(c):
                    return out
                nxt.append(c)
        frontier = nxt
    return out


def _is_nontrivial_idempotent(m: FiniteModule, e: np.ndarray) -> bool:
    if not e.any():
        return False
    if m._matrix_eq(e, np.eye(m.rank, dtype=np.int64)):
        return False
    return m._matrix_eq(e @ e, e)


def _is_endomorphism(m: FiniteModule, e: np.ndarray) -> bool:
    if m.rank and _reduce_rows(e * m._orders_arr[None, :], m.orders).any():
        return False
    return all(m._matrix_eq(e @ m.act_matrix(r), m.act_matrix(r) @ e) for r in _linearity_rings(m))


def find_idempotent(m: FiniteModule, cap: int = DEFAULT_MAX_ENUMERATION):
    """A nontrivial idempotent endomorphism, or None if there is none.

    Coordinate projections are tried first; otherwise End(m) is enumerated.
    """
    r = m.rank
    for bits in range(1, (1 << r) - 1):
        e = np.diag([(bits >> k) & 1 for k in range(r)]).astype(np.int64)
        if _is_endomorphism(m, e) and _is_nontrivial_idempotent(m, e):
            return e
    found = []

    def stop(e):
        if _is_nontrivial_idempotent(m, e):
            found.append(e)
            return True
        return False

    enumerate_homs(m, m, cap, stop)
    return found[0] if found else None


def indecomposable(m: FiniteModule, cap: int = DEFAULT_MAX_ENUMERATION) -> bool:
    if m.size == 1:
        return False
    return find_idempotent(m, cap) is None


def is_isomorphic(a: FiniteModule, b: FiniteModule, cap: int = DEFAULT_MAX_ENUMERATION) -> bool:
    return find_isomorphism(a, b, cap) is not None


def find_isomorphism(a: FiniteModule, b: FiniteModule, cap: int = DEFAULT_MAX_ENUMERATION):
    if a.ring != b.ring or a.side != b.side:
        return None
    if a.size != b.size or a.elementary_divisors != b.elementary_divisors:
        return None
    if a.size == 1:
        return ModuleHom(a, b, np.zeros((b.rank, a.rank), dtype=np.int64), check=False)
    if a.ring.is_finite and not a.ring.forced:
        for r in a.ring.elements():
            if _image_size(a, r) != _image_size(b, r):
                return None
    found = []

    def stop(x):
        h = ModuleHom(a, b, x, check=False)
        if h.is_injective:
            found.append(h)
            return True
        return False

    enumerate_homs(a, b, cap, stop)
    return found[0] if found else None


def _image_size(m: FiniteModule, r) -> int:
    return len(set(m.act_many(np.arange(m.size), r).tolist()))


# -- direct sums and decompositions --------------------------------------------

class DirectSum:
    def __init__(self, module, injections, projections):
        self.module = module
        self.injections = injections
        self.projections = projections


def direct_sum(ms, ring: Ring | None = None, side: str | None = None, cap: int | None = None) -> DirectSum:
    ms = list(ms)
    if not ms:
        if ring is None:
            raise SpecError("empty direct sum needs a ring")
        z = zero_module(ring, side or "right")
        return DirectSum(z, [], [])
    ring = ms[0].ring
    side = ms[0].side
    for m in ms:
        if m.ring != ring or m.side != side:
            raise RingMismatch("summands over different rings or sides")
    size = 1
    for m in ms:
        size *= m.size
    if cap is not None and size > cap:
        raise CapExceeded("direct sum", size, cap)
    orders = [o for m in ms for o in m.orders]
    rank = len(orders)
    if ring.is_finite:
        mats = np.zeros((ring.order, rank, rank), dtype=np.int64)
        off = 0
        for m in ms:
            for r in ring.elements():
                mats[r, off:off + m.rank, off:off + m.rank] = m.act_matrix(r)
            off += m.rank
    else:
        mats = None
    label = "+".join(m.label for m in ms if m.size > 1) or "0"
    total = FiniteModule(ring, side, orders, mats, label=label)
    inj, proj = [], []
    off = 0
    for m in ms:
        e = np.zeros((rank, m.rank), dtype=np.int64)
        e[off:off + m.rank, :] = np.eye(m.rank, dtype=np.int64)
        inj.append(ModuleHom(m, total, e, check=False))
        proj.append(ModuleHom(total, m, e.T.copy(), check=False))
        off += m.rank
    return DirectSum(total, inj, proj)


def submodule_image(m: FiniteModule, e: np.ndarray):
    """The image of an endomorphism matrix as a module, with inclusion and corestriction."""
    w = [list(map(int, e[:, j])) for j in range(m.rank)]
    g = len(w)
    rels = kernel_of_map(w, [0] * g, m.orders)
    pres = Presentation(g, rels)
    wmat = [[w[j][i] for j in range(g)] for i in range(m.rank)]

    def ambient(r):
        t = m.act_matrix(r)
        out = np.zeros((g, g), dtype=np.int64)
        for j in range(g):
            target = [int(x) for x in t @ np.array(w[j], dtype=np.int64)]
            sol = solve_congruences(wmat, target, list(m.orders), ncols=g)
            if sol is None:
                raise AxiomViolation("image not a submodule", (j,))
            out[:, j] = sol.particular
        return out

    sub = module_from_presentation(m.ring, m.side, pres, ambient)
    incl = np.zeros((m.rank, sub.rank), dtype=np.int64)
    for c in range(sub.rank):
        lift = pres.lift(c)
        incl[:, c] = [sum(w[j][i] * lift[j] for j in range(g)) for i in range(m.rank)]
    proj = np.zeros((sub.rank, m.rank), dtype=np.int64)
    for k in range(m.rank):
        proj[:, k] = pres.coords([int(j == k) for j in range(g)])
    return sub, ModuleHom(sub, m, incl, check=False), ModuleHom(m, sub, proj, check=False)


def decompose(m: FiniteModule, cap: int = DEFAULT_MAX_ENUMERATION):
    """Indecomposable summands as (summand, inclusion, projection) triples."""
    if m.size == 1:
        return []
    if not m.ring.is_finite or m.ring.forced:
        out = []
        for k, d in enumerate(m.orders):
            for q in _prime_powers(d):
                s = cyclic_module(m.ring, [q], m.side)
                incl = np.zeros((m.rank, 1), dtype=np.int64)
                incl[k, 0] = d // q
                proj = np.zeros((1, m.rank), dtype=np.int64)
                proj[0, k] = pow(d // q, -1, q) if q > 1 else 0
                out.append((s, ModuleHom(s, m, incl, check=False), ModuleHom(m, s, proj, check=False)))
        return out
    e = find_idempotent(m, cap)
    if e is None:
        ident = identity_hom(m)
        return [(m, ident, ident)]
    out = []
    one = np.eye(m.rank, dtype=np.int64)
    for part in (e, _reduce_rows(one - e, m.orders)):
        sub, incl, proj = submodule_image(m, part)
        for s, i2, p2 in decompose(sub, cap):
            out.append((s, incl.compose(i2), p2.compose(proj)))
    return out


def is_split_embedding(h: ModuleHom):
    """(True, retraction) if h splits, (False, None) otherwise."""
    if not h.is_injective:
        raise NotInjective("the map is not injective")
    S, T = h.source, h.target
    rows, mods = _hom_system(T, S)  # unknown Y: T → S, S.rank × T.rank
    rs, rt = S.rank, T.rank
    rhs = [0] * len(rows)
    x = h.matrix
    for i in range(rs):
        for k in range(rs):
            row = [0] * (rs * rt)
            for l in range(rt):
                row[i * rt + l] = int(x[l, k])
            rows.append(row)
            mods.append(S.orders[i])
            rhs.append(int(i == k))
    if rs == 0:
        return True, ModuleHom(T, S, np.zeros((0, rt), dtype=np.int64), check=False)
    sol = solve_congruences(rows, rhs, mods, ncols=rs * rt)
    if sol is None:
        return False, None
    y = np.array(sol.particular, dtype=np.int64).reshape(rs, rt)
    return True, ModuleHom(T, S, y)


def split_embedding_into(m: FiniteModule, targets, cap: int = DEFAULT_MAX_ENUMERATION):
    """Search for a split embedding of m into a direct sum of the given modules.

    Summands of m are matched with pairwise distinct indecomposable summands
    of copies of the targets (one copy per summand of m).  Returns the direct
    sum and the embedding, or None.
    """
    parts = decompose(m, cap)
    if not parts:
        z = zero_module(m.ring, m.side)
        return z, ModuleHom(m, z, np.zeros((0, m.rank), dtype=np.int64), check=False)
    pools = [(t, decompose(t, cap)) for t in targets]
    chosen = []
    for s, incl, proj in parts:
        hit = None
        for ti, (t, tparts) in enumerate(pools):
            for ts, tincl, _ in tparts:
                iso = find_isomorphism(s, ts, cap)
                if iso is not None:
                    hit = (ti, tincl.compose(iso))
                    break
            if hit:
                break
        if hit is None:
            return None
        chosen.append((hit, proj))
    total = direct_sum([targets[ti] for (ti, _), _ in chosen])
    mat = np.zeros((total.module.rank, m.rank), dtype=np.int64)
    for (ti_emb, proj), inj in zip(chosen, total.injections):
        _, emb = ti_emb
        mat += inj.matrix @ emb.matrix @ proj.matrix
    return total.module, ModuleHom(m, total.module, mat)


# -- tensor products ------------------------------------------------------------

class TensorResult:
    def __init__(self, module, left, right, pres: Presentation, gm: int, gx: int, left_coords, right_coords):
        self.module = module
        self.left = left
        self.right = right
        self._pres = pres
        self._gm = gm
        self._gx = gx
        self._lc = left_coords
        self._rc = right_coords

    def pure_tensor(self, a: int, b: int) -> int:
        return int(self.pure_tensor_many(np.array([a]), np.array([b]))[0])

    def pure_tensor_many(self, a, b) -> np.ndarray:
        """Classes of a_i ⊗ b_i for equal-length arrays a, b."""
        ca = self.left.coords_of(np.asarray(a))
        cb = self.right.coords_of(np.asarray(b))
        amb = (ca[:, :, None] * cb[:, None, :]).reshape(len(ca), self._gm * self._gx)
        return self.module.encode(self.ambient_coords(amb))

    def ambient_coords(self, amb) -> np.ndarray:
        p = self._pres
        if not p.orders:
            return np.zeros((len(amb), 0), dtype=np.int64)
        return p.coords_many(amb)

    @cached_property
    def table(self) -> np.ndarray:
        a, b = np.meshgrid(np.arange(self.left.size), np.arange(self.right.size), indexing="ij")
        return self.pure_tensor_many(a.ravel(), b.ravel()).reshape(self.left.size, self.right.size)


def tensor(m: FiniteModule, x, max_generators: int = DEFAULT_MAX_TENSOR_GENERATORS) -> TensorResult:
    """M ⊗_R X for a right module M and a left module or (R,S)-bimodule X."""
    if m.side != "right":
        raise SideMismatch("the first tensor factor must be a right module")
    if isinstance(x, Bimodule):
        ring, left_mat = x.left_ring, x.left_matrix
    else:
        if x.side != "left":
            raise SideMismatch("the second tensor factor must be a left module or bimodule")
        ring, left_mat = x.ring, x.act_matrix
    if ring != m.ring:
        raise RingMismatch("tensor factors over different rings")
    cells = m.size * x.size
    if cells > max_generators:
        raise CapExceeded("tensor pure-tensor generators", cells, max_generators)
    gm, gx = m.rank, x.rank
    g = gm * gx
    rels = []
    for i in range(gm):
        for j in range(gx):
            for d in (m.orders[i], x.orders[j]):
                row = [0] * g
                row[i * gx + j] = d
                rels.append(row)
    if ring.is_finite and not ring.forced:
        for rho in ring.additive_generators:
            tm = m.act_matrix(rho)
            tx = left_mat(rho)
            for i in range(gm):
                for j in range(gx):
                    row = [0] * g
                    for i2 in range(gm):
                        row[i2 * gx + j] += int(tm[i2, i])
                    for j2 in range(gx):
                        row[i * gx + j2] -= int(tx[j2, j])
                    if any(row):
                        rels.append(row)
    pres = Presentation(g, rels)
    if isinstance(x, Bimodule):
        S = x.right_ring

        def ambient(s):
            rx = x.right_matrix(s)
            out = np.zeros((g, g), dtype=np.int64)
            for i in range(gm):
                out[i * gx:(i + 1) * gx, i * gx:(i + 1) * gx] = rx
            return out

        mod = module_from_presentation(S, "right", pres, ambient)
    else:
        mod = module_from_presentation(INTEGERS, "right", pres, None)
    label = f"({m.label})@({x.label})"
    mod = mod.relabel(label)
    return TensorResult(mod, m, x, pres, gm, gx, None, None)


def tensor_map(h: ModuleHom, x, source_tensor: TensorResult | None = None,
               target_tensor: TensorResult | None = None) -> tuple:
    """h ⊗ 1_X between the tensor products; returns (hom, source tensor, target tensor)."""
    st = source_tensor or tensor(h.source, x)
    tt = target_tensor or tensor(h.target, x)
    gx = x.rank
    gs, gt = h.source.rank, h.target.rank
    k = st.module.rank
    mat = np.zeros((tt.module.rank, k), dtype=np.int64)
    hm = h.matrix
    for c in range(k):
        lift = st._pres.lift(c)
        amb = np.zeros(gt * gx, dtype=object)
        for i in range(gs):
            for j in range(gx):
                v = lift[i * gx + j]
                if v:
                    for i2 in range(gt):
                        amb[i2 * gx + j] += int(hm[i2, i]) * v
        mat[:, c] = tt._pres.coords([int(a) for a in amb]) if tt.module.rank else []
    return ModuleHom(st.module, tt.module, mat, check=False), st, tt


# -- enumeration of small modules -------------------------------------------------

def _divisors(n: int) -> list[int]:
    return [d for d in range(2, n + 1) if n % d == 0]


def abelian_groups(ring: Ring, size_cap: int, side: str = "right", max_order: int | None = None):
    """All ⊕ Z/d_i (prime-power d_i, up to isomorphism) with size ≤ cap, as modules over a ring generated by 1."""
    if ring.is_finite:
        cands = [q for q in _divisors(ring.characteristic) if len(_prime_powers(q)) == 1]
    else:
        cands = [q for q in range(2, size_cap + 1) if len(_prime_powers(q)) == 1]
    if max_order is not None:
        cands = [q for q in cands if q <= max_order]
    out = [zero_module(ring, side)]

    def rec(start, cur, size):
        for i in range(start, len(cands)):
            q = cands[i]
            if size * q > size_cap:
                continue
            nxt = cur + [q]
            out.append(cyclic_module(ring, nxt, side))
            rec(i, nxt, size * q)

    rec(0, [], 1)
    out.sort(key=lambda m: (m.size, m.orders))
    return out


def right_ideals(ring: Ring) -> list[frozenset]:
    def close(s):
        span = {ring.zero}
        gens = {ring.mul(a, r) for a in s for r in ring.elements()}
        frontier = list(span)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = ring.add(a, g)
                    if b not in span:
                        span.add(b)
                        nxt.append(b)
            frontier = nxt
        return frozenset(span)

    found = {close(set())}
    frontier = list(found)
    while frontier:
        nxt = []
        for ideal in frontier:
            for a in ring.elements():
                if a not in ideal:
                    j = close(set(ideal) | {a})
                    if j not in found:
                        found.add(j)
                        nxt.append(j)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _quotient_of_free(ring: Ring, copies: int, vectors) -> FiniteModule:
    """R^copies / (right submodule generated by the given vectors), R finite."""
    return quotient_of_free(ring, copies, vectors)[0]


def quotient_of_free(ring: Ring, copies: int, vectors, side: str = "right"):
    """R^copies modulo the submodule generated by ``vectors``, plus the basis images.

    For side 'left' the submodule is the left submodule R·v.  Returns
    (module, basis) where basis[i] is the class of the i-th basis vector.
    """
    mul = ring.mul if side == "right" else (lambda a, b: ring.mul(b, a))
    ro = ring.additive_orders
    r = len(ro)
    g = copies * r
    rels = []
    for c in range(copies):
        for k, o in enumerate(ro):
            row = [0] * g
            row[c * r + k] = o
            rels.append(row)
    for v in vectors:
        for s in ring.elements():
            row = []
            for c in range(copies):
                row.extend(ring.coords(mul(v[c], s)))
            rels.append(row)
    pres = Presentation(g, rels)
    pick = ring.right_mult_matrix if side == "right" else ring.left_mult_matrix

    def ambient(s):
        out = np.zeros((g, g), dtype=np.int64)
        m = pick(s)
        for c in range(copies):
            out[c * r:(c + 1) * r, c * r:(c + 1) * r] = m
        return out

    mod = module_from_presentation(ring, side, pres, ambient)
    basis = []
    one = ring.coords(ring.one)
    for c in range(copies):
        vec = [0] * g
        vec[c * r:(c + 1) * r] = one
        basis.append(mod.element(pres.coords(vec)) if mod.rank else 0)
    return mod, basis


def indecomposable_pool(ring: Ring, size_cap: int, cap: int = DEFAULT_MAX_ENUMERATION):
    """Indecomposable right modules found among R/I and R²/vR (best effort for table rings)."""
    cands = []
    for ideal in right_ideals(ring):
        cands.append(_quotient_of_free(ring, 1, [(a,) for a in ideal]))
    if ring.order ** 2 <= 4 * size_cap * ring.order:
        for a in ring.elements():
            for b in ring.elements():
                q = _quotient_of_free(ring, 2, [(a, b)])
                if q.size <= size_cap:
                    cands.append(q)
    pool: list[FiniteModule] = []
    for c in cands:
        if c.size == 1 or c.size > size_cap:
            continue
        for s, _, _ in decompose(c, cap):
            if not any(is_isomorphic(s, p, cap) for p in pool):
                pool.append(s)
    pool.sort(key=lambda m: (m.size, m.elementary_divisors))
    return [p.relabel(f"P{i}") for i, p in enumerate(pool)]


def enumerate_modules(ring: Ring, size_cap: int, side: str = "right", cap: int = DEFAULT_MAX_ENUMERATION):
    """Modules of size ≤ size_cap up to isomorphism (complete for rings generated by 1)."""
    if not ring.is_finite or ring.forced:
        return abelian_groups(ring, size_cap, side)
    if side == "left":
        return [m.over_opposite() for m in enumerate_modules(opposite(ring), size_cap, "right", cap)]
    pool = indecomposable_pool(ring, size_cap, cap)
    out = [zero_module(ring, side)]
    for count in range(1, 16):
        added = False
        for combo in combinations_with_replacement(range(len(pool)), count):
            size = 1
            for i in combo:
                size *= pool[i].size
            if size > size_cap:
                continue
            added = True
            ds = direct_sum([pool[i] for i in combo]).module
            out.append(ds.relabel("+".join(pool[i].label for i in combo)))
        if not added:
            break
    out.sort(key=lambda m: (m.size, m.label))
    return out


# -- JSON specs -------------------------------------------------------------------

def module_from_spec(spec, ring: Ring | None = None):
    """FiniteModule or Bimodule from a JSON-like dict."""
    import json

    from .rings import ring_from_spec

    if isinstance(spec, str):
        spec = json.loads(spec)
    if not isinstance(spec, dict):
        raise SpecError("module spec must be an object")
    if "left_act" in spec or "right_act" in spec or "left_ring" in spec:
        lr = ring_from_spec(spec.get("left_ring", spec.get("ring"))) if (
            spec.get("left_ring") or spec.get("ring")) else ring
        rr = ring_from_spec(spec.get("right_ring", spec.get("ring"))) if (
            spec.get("right_ring") or spec.get("ring")) else ring
        if lr is None or rr is None:
            raise SpecError("bimodule spec needs rings")
        return bimodule_from_spec(spec, lr, rr)
    if "ring" in spec:
        ring = ring_from_spec(spec["ring"])
    if ring is None:
        raise SpecError("module spec needs a ring")
    side = spec.get("side", "right")
    label = spec.get("label")
    if "cyclic" in spec:
        return cyclic_module(ring, spec["cyclic"], side, label=label)
    if "add" in spec:
        return module_from_tables(ring, side, spec["add"], spec.get("act"), label=label)
    if spec.get("regular"):
        return regular_module(ring, side)
    raise SpecError("module spec needs 'cyclic' or 'add'")


def bimodule_from_spec(spec, left_ring: Ring, right_ring: Ring) -> Bimodule:
    if "cyclic" in spec:
        b = Bimodule(left_ring, right_ring, [d for d in spec["cyclic"] if d != 1], label=spec.get("label"))
        return module_check(b)
    lm = module_from_tables(left_ring, "left", spec["add"], spec.get("left_act"))
    rm = module_from_tables(right_ring, "right", spec["add"], spec.get("right_act"))
    coords = None if lm._labels is None else lm._labels[0]
    b = Bimodule(left_ring, right_ring, lm.orders, lm.mats, rm.mats, coords, label=spec.get("label"))
    return module_check(b)


def module_to_spec(m) -> dict:
    if isinstance(m, Bimodule):
        out = {"left_ring": m.left_ring.spec, "right_ring": m.right_ring.spec}
        if m.canonical and (m.lmats is None or m.left_ring.forced) and (m.rmats is None or m.right_ring.forced):
            out["cyclic"] = list(m.orders)
            return out
        out["add"] = m.add_table.tolist()
        if m.lmats is not None:
            out["left_act"] = [[m.left_act(b, r) for r in m.left_ring.elements()] for b in m.elements()]
        if m.rmats is not None:
            out["right_act"] = [[m.right_act(b, s) for s in m.right_ring.elements()] for b in m.elements()]
        return out
    out = {"ring": m.ring.spec, "side": m.side, "label": m.label}
    if m.canonical and (not m.ring.is_finite or m.ring.forced):
        out["cyclic"] = list(m.orders)
        return out
    out["add"] = m.add_table.tolist()
    if m.ring.is_finite:
        out["act"] = m.act_table.tolist()
    return out
