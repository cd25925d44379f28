"""Rings and ring homomorphisms.

Three concrete kinds are provided: the integers, the integers modulo n and
finite rings given by addition and multiplication tables.  Products and
opposites of finite rings are expanded to tables.  Elements are plain ints:
the integer itself for Z, the residue for Z/n and the element index for a
table ring.

>>> R = zmod(4)
>>> R.mul(3, 3), R.from_int(-1)
(1, 3)
>>> product([zmod(2), zmod(2)]).order
4
"""

from __future__ import annotations

import json
from functools import cached_property
from itertools import product as iproduct

import numpy as np

from .errors import AxiomViolation, NotAHom, SpecError
from .groups import check_abelian_group, decompose


class Ring:
    is_finite = True
    is_commutative = True

    # -- additive group in coordinates -------------------------------------
    @property
    def additive_orders(self) -> tuple:
        raise NotImplementedError

    def coords(self, a) -> tuple:
        raise NotImplementedError

    def from_coords(self, c):
        raise NotImplementedError

    def int_value(self, a):
        """k with a = k·1, or None if a is not an integer multiple of 1."""
        raise NotImplementedError

    @property
    def forced(self) -> bool:
        """True when every element is an integer multiple of 1."""
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def __eq__(self, other):
        return isinstance(other, Ring) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return self.name

    def to_json(self) -> str:
        return json.dumps(self.spec, sort_keys=True)


class Integers(Ring):
    is_finite = False
    name = "Z"
    key = ("Z",)
    spec = {"kind": "Z"}
    zero = 0
    one = 1
    order = None
    forced = True
    additive_orders = (0,)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def from_int(self, k):
        return int(k)

    def int_value(self, a):
        return a

    def coords(self, a):
        return (a,)

    def from_coords(self, c):
        return int(c[0])

    def contains(self, a) -> bool:
        return isinstance(a, (int, np.integer))

    def elements(self):
        raise SpecError("the integers are infinite")

    def symmetric_int(self, a):
        return a


class FiniteRing(Ring):
    """A finite ring given by tables; subclasses may override the arithmetic."""

    def __init__(self, add, mul, zero: int, one: int, spec=None, name=None):
        self.add_table = tuple(tuple(int(x) for x in row) for row in add)
        self.mul_table = tuple(tuple(int(x) for x in row) for row in mul)
        self.order = len(self.add_table)
        self.zero = int(zero)
        self.one = int(one)
        self.spec = spec if spec is not None else self._table_spec()
        self.name = name or f"Table({self.order})"
        self.key = ("T", self.add_table, self.mul_table, self.zero, self.one)

    def _table_spec(self):
        return {
            "kind": "Table",
            "order": self.order,
            "add": [list(r) for r in self.add_table],
            "mul": [list(r) for r in self.mul_table],
            "zero": self.zero,
            "one": self.one,
        }

    def add(self, a, b):
        return self.add_table[a][b]

    def mul(self, a, b):
        return self.mul_table[a][b]

    @cached_property
    def _neg(self):
        out = [0] * self.order
        for a in range(self.order):
            out[a] = self.add_table[a].index(self.zero)
        return tuple(out)

    def neg(self, a):
        return self._neg[a]

    def elements(self):
        return range(self.order)

    def contains(self, a) -> bool:
        return isinstance(a, (int, np.integer)) and 0 <= a < self.order

    @cached_property
    def is_commutative(self):
        m = self.mul_table
        return all(m[a][b] == m[b][a] for a in range(self.order) for b in range(a))

    # -- additive structure --------------------------------------------------
    @cached_property
    def _decomposition(self):
        return decompose(self.add_table, self.zero)

    @property
    def additive_orders(self):
        return self._decomposition[0]

    def coords(self, a):
        return self._decomposition[1][a]

    @cached_property
    def _coord_index(self):
        return {c: e for e, c in enumerate(self._decomposition[1])}

    def from_coords(self, c):
        c = tuple(int(x) % d for x, d in zip(c, self.additive_orders))
        return self._coord_index[c]

    @cached_property
    def coord_array(self) -> np.ndarray:
        return np.array(self._decomposition[1], dtype=np.int64).reshape(self.order, len(self.additive_orders))

    @cached_property
    def additive_generators(self) -> tuple:
        r = len(self.additive_orders)
        return tuple(self.from_coords(tuple(int(i == k) for i in range(r))) for k in range(r))

    @cached_property
    def _multiples_of_one(self):
        out = {}
        k, x = 0, self.zero
        while x not in out:
            out[x] = k
            k += 1
            x = self.add(x, self.one)
        return out

    @property
    def characteristic(self) -> int:
        return len(self._multiples_of_one)

    @property
    def forced(self):
        return self.characteristic == self.order

    def int_value(self, a):
        return self._multiples_of_one.get(a)

    def from_int(self, k):
        c = self.characteristic
        k = int(k) % c
        for x, j in self._multiples_of_one.items():
            if j == k:
                return x
        raise AssertionError("unreachable")

    def symmetric_int(self, a):
        k = self.int_value(a)
        if k is None:
            return None
        c = self.characteristic
        return k - c if 2 * k > c else k

    # matrices of x ↦ x·b and x ↦ a·x on additive coordinates (columns = images of generators)
    def right_mult_matrix(self, b) -> np.ndarray:
        return self._mult_mats[0][b]

    def left_mult_matrix(self, a) -> np.ndarray:
        return self._mult_mats[1][a]

    @cached_property
    def _mult_mats(self):
        gens = self.additive_generators
        r = len(gens)
        right = np.zeros((self.order, r, r), dtype=np.int64)
        left = np.zeros((self.order, r, r), dtype=np.int64)
        for x in range(self.order):
            for c, g in enumerate(gens):
                right[x, :, c] = self.coords(self.mul(g, x))
                left[x, :, c] = self.coords(self.mul(x, g))
        return right, left


class IntegersMod(FiniteRing):
    def __init__(self, n: int):
        if n < 2:
            raise SpecError(f"Zmod needs n >= 2, got {n}")
        self.n = n
        self.order = n
        self.zero = 0
        self.one = 1
        self.spec = {"kind": "Zmod", "n": n}
        self.name = f"Z/{n}"
        self.key = ("Zmod", n)

    @cached_property
    def add_table(self):
        n = self.n
        return tuple(tuple((a + b) % n for b in range(n)) for a in range(n))

    @cached_property
    def mul_table(self):
        n = self.n
        return tuple(tuple((a * b) % n for b in range(n)) for a in range(n))

    def add(self, a, b):
        return (a + b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def neg(self, a):
        return (-a) % self.n

    is_commutative = True
    forced = True
    characteristic = property(lambda self: self.n)

    @property
    def additive_orders(self):
        return (self.n,)

    def coords(self, a):
        return (a,)

    def from_coords(self, c):
        return int(c[0]) % self.n

    def from_int(self, k):
        return int(k) % self.n

    def int_value(self, a):
        return a

    @cached_property
    def additive_generators(self):
        return (1,)

    @cached_property
    def coord_array(self):
        return np.arange(self.n, dtype=np.int64).reshape(self.n, 1)


INTEGERS = Integers()


def zmod(n: int) -> IntegersMod:
    return IntegersMod(n)


def table_ring(add, mul, zero=0, one=1, check=True, name=None) -> FiniteRing:
    r = FiniteRing(add, mul, zero, one, name=name)
    return ring_check(r) if check else r


def product(factors) -> FiniteRing:
    factors = list(factors)
    if not factors or any(not f.is_finite for f in factors):
        raise SpecError("products need at least one finite factor")
    sizes = [f.order for f in factors]
    elems = list(iproduct(*[range(s) for s in sizes]))
    index = {e: i for i, e in enumerate(elems)}
    add = [[index[tuple(f.add(x, y) for f, x, y in zip(factors, a, b))] for b in elems] for a in elems]
    mul = [[index[tuple(f.mul(x, y) for f, x, y in zip(factors, a, b))] for b in elems] for a in elems]
    zero = index[tuple(f.zero for f in factors)]
    one = index[tuple(f.one for f in factors)]
    spec = {"kind": "Product", "factors": [f.spec for f in factors]}
    name = "x".join(f.name for f in factors)
    return ring_check(FiniteRing(add, mul, zero, one, spec=spec, name=name))


def opposite(r: Ring) -> Ring:
    if not r.is_finite or isinstance(r, IntegersMod):
        return r
    mul = [[r.mul_table[b][a] for b in range(r.order)] for a in range(r.order)]
    spec = r.spec["of"] if r.spec.get("kind") == "Opposite" else {"kind": "Opposite", "of": r.spec}
    if r.spec.get("kind") == "Opposite":
        name = r.name[:-3] if r.name.endswith("^op") else None
    else:
        name = r.name + "^op"
    return FiniteRing(r.add_table, mul, r.zero, r.one, spec=spec, name=name)


def upper_triangular_f2() -> FiniteRing:
    """Upper triangular 2x2 matrices over F2; [[a,b],[0,c]] has index 4a+2b+c."""
    elems = list(iproduct(range(2), repeat=3))
    index = {e: i for i, e in enumerate(elems)}

    def mul(x, y):
        a, b, c = x
        d, e, f = y
        return (a * d % 2, (a * e + b * f) % 2, c * f % 2)

    add = [[index[tuple((p + q) % 2 for p, q in zip(x, y))] for y in elems] for x in elems]
    mult = [[index[mul(x, y)] for y in elems] for x in elems]
    return ring_check(FiniteRing(add, mult, index[(0, 0, 0)], index[(1, 0, 1)], name="UT2(F2)"))


def ring_check(r: Ring) -> Ring:
    """Exhaustively verify the ring axioms of a finite ring (returns r)."""
    if not r.is_finite or isinstance(r, IntegersMod):
        return r
    q = r.order
    if len(r.mul_table) != q or any(len(row) != q for row in r.mul_table):
        raise AxiomViolation("multiplication table shape")
    if not (0 <= r.zero < q and 0 <= r.one < q):
        raise AxiomViolation("zero/one index in range", (r.zero, r.one))
    check_abelian_group(r.add_table, r.zero)
    A, M = r.add_table, r.mul_table
    for a in range(q):
        for b in range(q):
            if not 0 <= M[a][b] < q:
                raise AxiomViolation("multiplication closed", (a, b))
    for a in range(q):
        if M[r.one][a] != a or M[a][r.one] != a:
            raise AxiomViolation("multiplicative unit", (a,))
    for a in range(q):
        Ma = M[a]
        for b in range(q):
            ab = Ma[b]
            Mb = M[b]
            Ab = A[b]
            for c in range(q):
                if M[ab][c] != Ma[Mb[c]]:
                    raise AxiomViolation("multiplication associative", (a, b, c))
                if Ma[Ab[c]] != A[ab][Ma[c]]:
                    raise AxiomViolation("left distributive", (a, b, c))
                if M[A[a][b]][c] != A[Ma[c]][Mb[c]]:
                    raise AxiomViolation("right distributive", (a, b, c))
    return r


class RingHom:
    """A unital ring homomorphism; from Z it is determined by 1 ↦ 1."""

    def __init__(self, source: Ring, target: Ring, images=None):
        self.source = source
        self.target = target
        if source.is_finite:
            if images is None:
                raise SpecError("a hom from a finite ring needs its element table")
            self.images = tuple(int(x) for x in images)
        else:
            self.images = None

    def __call__(self, r):
        if self.images is None:
            return self.target.from_int(r)
        return self.images[r]

    @property
    def is_surjective(self) -> bool:
        if not self.target.is_finite:
            return False
        if self.images is None:
            return self.target.forced
        return len(set(self.images)) == self.target.order

    @property
    def spec(self):
        out = {"source": self.source.spec, "target": self.target.spec}
        if self.images is None:
            out["unit_image"] = self.target.one
        else:
            out["map"] = list(self.images)
        return out

    def __repr__(self):
        return f"RingHom({self.source.name} -> {self.target.name})"


def hom_check(h: RingHom) -> RingHom:
    S, T = h.source, h.target
    if not S.is_finite:
        return h
    if len(h.images) != S.order or not all(T.contains(x) for x in h.images):
        raise NotAHom("map table shape", ())
    f = h.images
    if f[S.zero] != T.zero:
        raise NotAHom("zero not preserved", (S.zero,))
    if f[S.one] != T.one:
        raise NotAHom("one not preserved", (S.one, f[S.one]))
    for a in S.elements():
        for b in S.elements():
            if f[S.add(a, b)] != T.add(f[a], f[b]):
                raise NotAHom("addition not preserved", (a, b))
            if f[S.mul(a, b)] != T.mul(f[a], f[b]):
                raise NotAHom("multiplication not preserved", (a, b))
    return h


def reduction_hom(source: Ring, target: Ring) -> RingHom:
    """The canonical map k·1 ↦ k·1 between rings generated by 1 (checked)."""
    if not source.is_finite:
        return RingHom(source, target)
    images = []
    for a in source.elements():
        k = source.int_value(a)
        if k is None:
            raise NotAHom("source element is not a multiple of 1", (a,))
        images.append(target.from_int(k))
    return hom_check(RingHom(source, target, images))


def identity_hom(r: Ring) -> RingHom:
    if not r.is_finite:
        return RingHom(r, r)
    return RingHom(r, r, list(r.elements()))


def diagonal_hom(r: FiniteRing, factors: int = 2) -> RingHom:
    """R → R×…×R, a ↦ (a, …, a)."""
    target = product([r] * factors)
    base = r.order
    images = []
    for a in r.elements():
        idx = 0
        for _ in range(factors):
            idx = idx * base + a
        images.append(idx)
    return hom_check(RingHom(r, target, images))


SHORTHANDS = {
    "z": lambda: INTEGERS,
    "f2": lambda: zmod(2),
    "f2xf2": lambda: product([zmod(2), zmod(2)]),
    "ut2f2": upper_triangular_f2,
}


def ring_from_spec(spec) -> Ring:
    """Build and validate a ring from a JSON-like dict, JSON text or shorthand name."""
    if isinstance(spec, Ring):
        return spec
    if isinstance(spec, str):
        s = spec.strip()
        low = s.lower()
        if low in SHORTHANDS:
            return SHORTHANDS[low]()
        if low.startswith("zmod") and low[4:].isdigit():
            return zmod(int(low[4:]))
        try:
            spec = json.loads(s)
        except json.JSONDecodeError as exc:
            raise SpecError(f"unrecognised ring '{spec}'") from exc
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SpecError(f"ring spec must be an object with 'kind': {spec!r}")
    kind = spec["kind"]
    if kind in ("Z", "Integers"):
        return INTEGERS
    if kind in ("Zmod", "IntegersMod"):
        return zmod(int(spec["n"]))
    if kind in ("Table", "TableRing"):
        try:
            r = FiniteRing(spec["add"], spec["mul"], spec.get("zero", 0), spec.get("one", 1))
        except (KeyError, TypeError) as exc:
            raise SpecError(f"bad table ring spec: {exc}") from exc
        if "order" in spec and int(spec["order"]) != r.order:
            raise SpecError("declared order does not match the tables")
        return ring_check(r)
    if kind == "Product":
        return product([ring_from_spec(f) for f in spec["factors"]])
    if kind == "Opposite":
        return opposite(ring_from_spec(spec["of"]))
    raise SpecError(f"unknown ring kind '{kind}'")


def hom_from_spec(spec) -> RingHom:
    if isinstance(spec, str):
        spec = json.loads(spec)
    source = ring_from_spec(spec["source"])
    target = ring_from_spec(spec["target"])
    if not source.is_finite:
        if "unit_image" in spec and int(spec["unit_image"]) != target.one:
            raise NotAHom("one not preserved", (1, spec["unit_image"]))
        return RingHom(source, target)
    return hom_check(RingHom(source, target, spec["map"]))
