"""Evaluation of pp formulas on finite modules, pp-types and implication.

Solution sets are computed without enumerating witnesses.  The tuple x̄ lies
in φ(M) iff the vector of left-hand sides Σ_i x_i·A_ij, read in the additive
coordinates of M^m, lies in the subgroup spanned by the images of the bound
variables.  That subgroup is kept as an integer lattice containing the
coordinate orders, so membership is a Hermite-form reduction.  When the ring
is generated by 1 the action is scalar and the test splits into one lattice
of dimension m per distinct coordinate order.

>>> from ppcalc.rings import zmod
>>> from ppcalc.modules import cyclic_module
>>> from ppcalc.dsl import parse
>>> R = zmod(4)
>>> sorted(evaluate(parse("x1*2 = 0", R), cyclic_module(R, [4])).elements())
[(0,), (2,)]
"""

from __future__ import annotations

import itertools
import random
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from .errors import ArityMismatch, CapExceeded, RingMismatch, SideMismatch
from .formulas import DEFAULT_MAX_REALIZATION, BimodPpFormula, PpFormula, free_realization, make_formula
from .linalg import kernel_of_map, lattice_from, solve_congruences
from .modules import Bimodule, FiniteModule, abelian_groups, cyclic_module, indecomposable_pool
from .rings import Ring, opposite

_CACHE_SIZE = 200_000


class _LRU(OrderedDict):
    def get_or(self, key, build):
        try:
            val = self[key]
            self.move_to_end(key)
            return val
        except KeyError:
            val = build()
            self[key] = val
            if len(self) > _CACHE_SIZE:
                self.popitem(last=False)
            return val


_lattices = _LRU()
_evals = _LRU()
_tuple_coords = _LRU()


def clear_caches() -> None:
    _lattices.clear()
    _evals.clear()
    _tuple_coords.clear()


def _all_tuples(carrier, n: int):
    """(tuples, their coordinates) for the whole of carrier^n, cached."""
    def build():
        t = carrier.tuples(n)
        return t, carrier.coords_of(t)

    return _tuple_coords.get_or((carrier.key, n), build)


# -- solution sets ---------------------------------------------------------------

class SolutionSet:
    """A subset of M^n stored as a boolean mask over lexicographically indexed tuples."""

    def __init__(self, module, n: int, mask: np.ndarray):
        self.module = module
        self.n = n
        self.mask = np.asarray(mask, dtype=bool)

    def _index(self, tup) -> int:
        idx = 0
        for a in tup:
            idx = idx * self.module.size + int(a)
        return idx

    def _decode(self, idx: int) -> tuple:
        out = []
        s = self.module.size
        for _ in range(self.n):
            out.append(idx % s)
            idx //= s
        return tuple(reversed(out))

    def __contains__(self, tup) -> bool:
        if len(tup) != self.n:
            raise ArityMismatch(f"expected a {self.n}-tuple")
        return bool(self.mask[self._index(tup)])

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __iter__(self):
        return (self._decode(int(i)) for i in np.flatnonzero(self.mask))

    def elements(self) -> set:
        return set(self)

    def __eq__(self, other):
        return (isinstance(other, SolutionSet) and self.n == other.n and self.module.key == other.module.key
                and np.array_equal(self.mask, other.mask))

    def __hash__(self):
        return hash((self.n, self.mask.tobytes()))

    def issubset(self, other: "SolutionSet") -> bool:
        return not (self.mask & ~other.mask).any()

    def __and__(self, other: "SolutionSet") -> "SolutionSet":
        return SolutionSet(self.module, self.n, self.mask & other.mask)

    @property
    def bits(self) -> int:
        return int.from_bytes(np.packbits(self.mask).tobytes(), "big")

    @property
    def is_everything(self) -> bool:
        return bool(self.mask.all())

    def to_json(self) -> list:
        return [list(t) for t in self]

    def __repr__(self):
        return f"SolutionSet({len(self)} of {self.module.size}^{self.n})"


# -- evaluation --------------------------------------------------------------------

def _check_formula_module(phi: PpFormula, m: FiniteModule) -> None:
    if not isinstance(m, FiniteModule):
        raise SideMismatch("one-sided formulas are evaluated on one-sided modules")
    if phi.ring != m.ring:
        raise RingMismatch(f"formula over {phi.ring.name}, module over {m.ring.name}")
    if phi.side != m.side:
        raise SideMismatch(f"{phi.side} formula on a {m.side} module")


def _int_system(phi: PpFormula):
    iv = phi.ring.int_value
    A = np.array([[iv(x) for x in row] for row in phi.A], dtype=np.int64).reshape(phi.n, phi.m)
    B = np.array([[iv(x) for x in row] for row in phi.B], dtype=np.int64).reshape(phi.t, phi.m)
    return A, B


def _bimod_int_system(beta: BimodPpFormula):
    R, S = beta.left_ring, beta.right_ring
    C = np.zeros((beta.n + beta.t, beta.m), dtype=np.int64)
    for j, eq in enumerate(beta.equations):
        for r, v, s in eq:
            C[v, j] += R.int_value(r) * S.int_value(s)
    return C[:beta.n], C[beta.n:]


def _scalar_mask(key, A, B, carrier, tuples, X=None) -> np.ndarray:
    """Membership for scalar actions: one lattice row(B) + o·Z^m per coordinate order o."""
    m = A.shape[1]
    ok = np.ones(len(tuples), dtype=bool)
    if m == 0 or carrier.rank == 0:
        return ok
    if X is None:
        X = carrier.coords_of(tuples)  # N × n × r
    for k, o in enumerate(carrier.orders):
        lat = _lattices.get_or((key, "o", o), lambda: lattice_from(B.tolist(), m, [o] * m))
        vec = np.mod(X[:, :, k] @ A, o)
        ok &= lat.contains_many(vec)
    return ok


def _general_mask(key, coef, n, t, m, carrier, tuples, X=None) -> np.ndarray:
    """Membership for general actions; coef[v][j] is the r×r coefficient matrix of variable v in equation j."""
    r = carrier.rank
    ok = np.ones(len(tuples), dtype=bool)
    if m == 0 or r == 0:
        return ok
    dim = m * r
    moduli = list(carrier.orders) * m

    def build():
        vecs = []
        for b in range(t):
            for l in range(r):
                vecs.append([int(coef[n + b][j][k, l]) for j in range(m) for k in range(r)])
        return lattice_from(vecs, dim, moduli)

    lat = _lattices.get_or(key, build)
    if X is None:
        X = carrier.coords_of(tuples)
    C = np.stack([np.stack(coef[v]) for v in range(n)]) if n else np.zeros((0, m, r, r), dtype=np.int64)
    F = np.einsum("vjkl,Nvl->Njk", C, X).reshape(len(tuples), dim)
    F = np.mod(F, np.array(moduli, dtype=np.int64))
    return ok & lat.contains_many(F)


def _formula_mask(phi: PpFormula, m: FiniteModule, tuples, X=None) -> np.ndarray:
    if not m.ring.is_finite or m.ring.forced:
        A, B = _int_system(phi)
        return _scalar_mask(phi.key, A, B, m, tuples, X)
    coef = []
    for v in range(phi.n + phi.t):
        row = phi.A[v] if v < phi.n else phi.B[v - phi.n]
        coef.append([m.act_matrix(row[j]) for j in range(phi.m)])
    return _general_mask((phi.key, m.key), coef, phi.n, phi.t, phi.m, m, tuples, X)


def _bimod_forced(b: Bimodule) -> bool:
    return all(not R.is_finite or R.forced for R in (b.left_ring, b.right_ring))


def _bimod_mask(beta: BimodPpFormula, b: Bimodule, tuples, X=None) -> np.ndarray:
    if _bimod_forced(b):
        A, B = _bimod_int_system(beta)
        return _scalar_mask(beta.key, A, B, b, tuples, X)
    r = b.rank
    coef = [[np.zeros((r, r), dtype=np.int64) for _ in range(beta.m)] for _ in range(beta.n + beta.t)]
    for j, eq in enumerate(beta.equations):
        for rr, v, s in eq:
            coef[v][j] = coef[v][j] + b.left_matrix(rr) @ b.right_matrix(s)
    return _general_mask((beta.key, b.key), coef, beta.n, beta.t, beta.m, b, tuples, X)


def evaluate(phi: PpFormula, m: FiniteModule) -> SolutionSet:
    """φ(M) as a subgroup of M^n."""
    _check_formula_module(phi, m)

    def build():
        mask = _formula_mask(phi, m, *_all_tuples(m, phi.n))
        return SolutionSet(m, phi.n, mask)

    return _evals.get_or((phi.key, m.key), build)


def eval_bimod(beta: BimodPpFormula, b: Bimodule) -> SolutionSet:
    if not isinstance(b, Bimodule):
        raise SideMismatch("bimodule formulas are evaluated on bimodules")
    if beta.left_ring != b.left_ring or beta.right_ring != b.right_ring:
        raise RingMismatch("formula and bimodule rings differ")

    def build():
        return SolutionSet(b, beta.n, _bimod_mask(beta, b, *_all_tuples(b, beta.n)))

    return _evals.get_or((beta.key, b.key), build)


def holds(m, phi, tup) -> bool:
    """M ⊨ φ(ā)."""
    tup = tuple(int(a) for a in tup)
    if len(tup) != phi.n:
        raise ArityMismatch(f"formula has {phi.n} free variables, tuple has {len(tup)}")
    cached = _evals.get((phi.key, m.key))
    if cached is not None:
        return tup in cached
    arr = np.array([tup], dtype=np.int64).reshape(1, phi.n)
    if isinstance(phi, BimodPpFormula):
        return bool(_bimod_mask(phi, m, arr)[0])
    _check_formula_module(phi, m)
    return bool(_formula_mask(phi, m, arr)[0])


# -- ring coordinates for linear systems -------------------------------------------

def _ring_linear(R: Ring):
    """(orders, coords, from_coords, right-mult matrix, left-mult matrix) of R's additive group."""
    if not R.is_finite:
        def mat(b):
            return np.array([[int(b)]], dtype=np.int64)
        return (0,), (lambda a: (int(a),)), (lambda c: int(c[0])), mat, mat
    return R.additive_orders, R.coords, R.from_coords, R.right_mult_matrix, R.left_mult_matrix


# -- pp-types ----------------------------------------------------------------------

@dataclass
class PpTypeGen:
    module: FiniteModule
    tuple: tuple
    formula: PpFormula


def pp_type_generator(m: FiniteModule, tup) -> PpTypeGen:
    """A formula generating pp^M(ā): ∃z̄ (θ(z̄) ∧ x̄ = z̄H).

    z̄ stands for the coordinate generators c̄ of M, θ for a generating set
    of the R-linear relations among them and H for the coordinates of ā.
    """
    R = m.ring
    tup = tuple(int(a) for a in tup)
    n, r = len(tup), m.rank
    orders, _, from_coords, _, _ = _ring_linear(R)
    nc = len(orders)
    # additive generators of R^r: copy k, ring coordinate c; image = c_k acted on by e_c
    gens_ring = [from_coords([int(i == c) for i in range(nc)]) for c in range(nc)]
    images, src_orders = [], []
    for k in range(r):
        for c in range(nc):
            images.append([int(x) for x in m.act_matrix(gens_ring[c])[:, k]])
            src_orders.append(orders[c])
    rels = kernel_of_map(images, src_orders, m.orders)
    basis = lattice_from(rels, r * nc).basis() if r else []
    cols = [[from_coords(v[k * nc:(k + 1) * nc]) for k in range(r)] for v in basis]
    cols = [c for c in cols if any(x != R.zero for x in c)]
    theta = [[c[k] for c in cols] for k in range(r)]
    Q = len(cols)
    coords = m.coords_of(np.array(tup, dtype=np.int64)).reshape(n, r) if n else np.zeros((0, r), dtype=np.int64)
    zero, one = R.zero, R.one
    A = [[zero] * Q + [one if i == l else zero for l in range(n)] for i in range(n)]
    B = [list(theta[k]) + [R.neg(R.from_int(int(coords[l, k]))) for l in range(n)] for k in range(r)]
    phi = make_formula(R, m.side, A, B, n, Q + n)
    return PpTypeGen(m, tup, phi)


# -- implication ---------------------------------------------------------------------

def validation_family(ring: Ring, side: str = "right", size_cap: int = 16) -> list:
    """Test modules on which semantic comparison is carried out.

    Z/n: the cyclic modules Z/d, d | n.  Z: cyclic groups of prime-power order
    up to the cap.  Other finite rings: indecomposables found up to the cap.
    """
    key = (ring.key, side, size_cap)

    def build():
        if not ring.is_finite:
            return [m for m in abelian_groups(ring, size_cap, side) if m.rank == 1]
        if ring.forced:
            return [cyclic_module(ring, [d], side) for d in range(2, ring.characteristic + 1)
                    if ring.characteristic % d == 0]
        if side == "left":
            return [p.over_opposite() for p in indecomposable_pool(opposite(ring), size_cap)]
        return indecomposable_pool(ring, size_cap)

    return _families.get_or(("validation",) + key, build)


_families = _LRU()


def _family_for(phi, family):
    if family is None:
        return validation_family(phi.ring, phi.side)
    return family


def _same_shape(phi: PpFormula, psi: PpFormula) -> None:
    if phi.ring != psi.ring:
        raise RingMismatch("formulas over different rings")
    if phi.side != psi.side:
        raise SideMismatch("formulas on different sides")
    if phi.n != psi.n:
        raise ArityMismatch(f"arities {phi.n} and {psi.n} differ")


def leq_semantic(phi: PpFormula, psi: PpFormula, family=None):
    """(True, None) if φ(M) ⊆ ψ(M) on every module of the family, else (False, (M, ā))."""
    _same_shape(phi, psi)
    for m in _family_for(phi, family):
        a, b = evaluate(phi, m), evaluate(psi, m)
        bad = a.mask & ~b.mask
        if bad.any():
            return False, (m, a._decode(int(np.flatnonzero(bad)[0])))
    return True, None


def equivalent_semantic(phi: PpFormula, psi: PpFormula, family=None) -> bool:
    _same_shape(phi, psi)
    return all(evaluate(phi, m) == evaluate(psi, m) for m in _family_for(phi, family))


def pair_closed(m: FiniteModule, top: PpFormula, bottom: PpFormula) -> bool:
    """φ/ψ is closed on M: φ(M) ⊆ ψ(M), i.e. φ(M) = (φ ∧ ψ)(M)."""
    return evaluate(top, m).issubset(evaluate(bottom, m))


@dataclass
class WitnessCertificate:
    """Evidence for or against lower ≤ upper.

    kind is one of syntactic_yes (G', G'', K), semantic_no (module, tuple in
    lower but not upper), syntactic_no (the matrix system is insoluble but no
    finite counterexample was produced) or unknown.
    """

    kind: str
    G1: list | None = None
    G2: list | None = None
    K: list | None = None
    module: FiniteModule | None = None
    tuple: tuple | None = None
    reason: str = ""

    @property
    def implies(self) -> bool | None:
        if self.kind == "syntactic_yes":
            return True
        if self.kind in ("semantic_no", "syntactic_no"):
            return False
        return None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "syntactic_yes":
            out.update({"G1": self.G1, "G2": self.G2, "K": self.K})
        if self.kind == "semantic_no":
            from .modules import module_to_spec
            out.update({"module": module_to_spec(self.module), "tuple": list(self.tuple)})
        if self.reason:
            out["reason"] = self.reason
        return out


def check_certificate(lower: PpFormula, upper: PpFormula, cert: WitnessCertificate) -> bool:
    """Check the evidence carried by a certificate.

    syntactic_yes: A_up + G'B_up = A_lo K and G''B_up = B_lo K with exact
    ring arithmetic.  semantic_no: the tuple satisfies lower but not upper in
    the module.  Other kinds carry nothing checkable and give False.
    """
    if cert.kind == "semantic_no":
        return holds(cert.module, lower, cert.tuple) and not holds(cert.module, upper, cert.tuple)
    if cert.kind != "syntactic_yes":
        return False
    R = upper.ring
    mul = R.mul if upper.side == "right" else (lambda a, b: R.mul(b, a))
    n, tu, mu, tl, ml = upper.n, upper.t, upper.m, lower.t, lower.m

    def entry(left_rows, right_cols, i, j, inner):
        s = R.zero
        for k in range(inner):
            s = R.add(s, mul(left_rows[i][k], right_cols[k][j]))
        return s

    for i in range(n):
        for j in range(mu):
            lhs = R.add(upper.A[i][j], entry(cert.G1, upper.B, i, j, tu))
            if lhs != entry(lower.A, cert.K, i, j, ml):
                return False
    for i in range(tl):
        for j in range(mu):
            if entry(cert.G2, upper.B, i, j, tu) != entry(lower.B, cert.K, i, j, ml):
                return False
    return True


def _solve_matrix_criterion(lower: PpFormula, upper: PpFormula):
    R = upper.ring
    orders, coords, from_coords, rmul, lmul = _ring_linear(R)
    nc = len(orders)
    n, tu, mu, tl, ml = upper.n, upper.t, upper.m, lower.t, lower.m
    right = upper.side == "right"
    # unknown layout: G1 (n×tu), G2 (tl×tu), K (ml×mu); each entry nc integer coordinates
    g1 = lambda i, k: (i * tu + k) * nc
    g2 = lambda i, k: (n * tu + i * tu + k) * nc
    kk = lambda l, j: (n * tu + tl * tu + l * mu + j) * nc
    nvar = (n * tu + tl * tu + ml * mu) * nc
    rows, rhs, mods = [], [], []

    def unknown_times_const(row, base, const, sign):
        # coordinates of (unknown * const) for right formulas, (const * unknown) for left
        mat = rmul(const) if right else lmul(const)
        for c in range(nc):
            for d in range(nc):
                row[c][base + d] += sign * int(mat[c, d])

    def const_times_unknown(row, base, const, sign):
        mat = lmul(const) if right else rmul(const)
        for c in range(nc):
            for d in range(nc):
                row[c][base + d] += sign * int(mat[c, d])

    for i in range(n + tl):
        for j in range(mu):
            row = [[0] * nvar for _ in range(nc)]
            if i < n:
                for k in range(tu):
                    unknown_times_const(row, g1(i, k), upper.B[k][j], 1)
                for l in range(ml):
                    const_times_unknown(row, kk(l, j), lower.A[i][l], -1)
                target = coords(upper.A[i][j])
            else:
                ii = i - n
                for k in range(tu):
                    unknown_times_const(row, g2(ii, k), upper.B[k][j], 1)
                for l in range(ml):
                    const_times_unknown(row, kk(l, j), lower.B[ii][l], -1)
                target = [0] * nc
            for c in range(nc):
                rows.append(row[c])
                rhs.append(-int(target[c]))
                mods.append(orders[c])
    if nvar == 0:
        ok = all(v % d == 0 if d else v == 0 for v, d in zip(rhs, mods))
        return ([], [], []) if ok else None
    sol = solve_congruences(rows, rhs, mods, ncols=nvar)
    if sol is None:
        return None
    x = sol.particular

    def elem(base):
        return from_coords([x[base + c] for c in range(nc)])

    G1 = [[elem(g1(i, k)) for k in range(tu)] for i in range(n)]
    G2 = [[elem(g2(i, k)) for k in range(tu)] for i in range(tl)]
    K = [[elem(kk(l, j)) for j in range(mu)] for l in range(ml)]
    return G1, G2, K


def leq_syntactic(lower: PpFormula, upper: PpFormula, family=None,
                  cap: int = DEFAULT_MAX_REALIZATION) -> WitnessCertificate:
    """Decide lower ≤ upper by the matrix criterion.

    With H = [A; B] for each formula, lower ≤ upper iff there are G', G'', K
    with [[I, G'], [0, G'']]·H_upper = H_lower·K.  A failed solve is backed by
    a counterexample from the validation family or the free realization of
    ``lower`` when one can be produced.
    """
    _same_shape(lower, upper)
    R = upper.ring
    if lower == upper:
        z = R.zero
        G1 = [[z] * upper.t for _ in range(upper.n)]
        G2 = [[R.one if i == k else z for k in range(upper.t)] for i in range(upper.t)]
        K = [[R.one if i == j else z for j in range(upper.m)] for i in range(upper.m)]
        return WitnessCertificate("syntactic_yes", G1, G2, K)
    sol = _solve_matrix_criterion(lower, upper)
    if sol is not None:
        cert = WitnessCertificate("syntactic_yes", *sol)
        if not check_certificate(lower, upper, cert):
            return WitnessCertificate("unknown", reason="witness failed exact re-check")
        return cert
    ok, ce = leq_semantic(lower, upper, family)
    if not ok:
        return WitnessCertificate("semantic_no", module=ce[0], tuple=ce[1])
    if R.is_finite:
        try:
            fr = free_realization(lower, materialize=True, cap=cap)
        except CapExceeded as exc:
            return WitnessCertificate("syntactic_no", reason=str(exc))
        c, a = fr.module, fr.tuple
        if holds(c, upper, a):
            return WitnessCertificate("unknown", reason="free realization satisfies the upper formula")
        return WitnessCertificate("semantic_no", module=c, tuple=a)
    for m in abelian_groups(R, 16, lower.side):
        ok, ce = leq_semantic(lower, upper, [m])
        if not ok:
            return WitnessCertificate("semantic_no", module=ce[0], tuple=ce[1])
    return WitnessCertificate("syntactic_no", reason="matrix system has no integer solution")


# -- bounded formula families --------------------------------------------------------

@dataclass
class FormulaFamily:
    """Representatives of the pp formulas of given arity up to equivalence on ``modules``."""

    ring: Ring
    side: str
    n: int
    modules: list
    formulas: list
    raw_count: int
    truncated: bool = False
    signatures: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.formulas)

    def __len__(self):
        return len(self.formulas)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _candidates_forced_mod(R: Ring, side: str, n: int, m_max: int):
    """Normal forms ⋀_j (d_j | x̄·a_j) with d_j | N, a_j reduced mod d_j.

    Any formula with t, m ≤ 2 over Z/N is equivalent to one of these after a
    Smith reduction of B (bound variables and equations change basis).
    """
    N = R.characteristic
    conds = []
    for d in _divisors(N):
        if d == 1:
            continue
        for a in itertools.product(range(d), repeat=n):
            if any(a):
                conds.append((d, a))
    yield top_like(R, side, n)
    for m in range(1, m_max + 1):
        for combo in itertools.combinations_with_replacement(range(len(conds)), m):
            cs = [conds[i] for i in combo]
            A = [[R.from_int(c[1][i]) for c in cs] for i in range(n)]
            brows = []
            for j, (d, _) in enumerate(cs):
                if d != N:
                    brows.append([R.from_int(d) if jj == j else R.zero for jj in range(m)])
            yield make_formula(R, side, A, brows, n, m)


def top_like(R: Ring, side: str, n: int) -> PpFormula:
    return make_formula(R, side, [[] for _ in range(n)], [], n, 0)


def _candidates_raw(R: Ring, side: str, n: int, t_max: int, m_max: int):
    elems = list(R.elements())
    yield top_like(R, side, n)
    for m in range(1, m_max + 1):
        for t in range(0, t_max + 1):
            for entries in itertools.product(elems, repeat=(n + t) * m):
                A = [list(entries[i * m:(i + 1) * m]) for i in range(n)]
                B = [list(entries[(n + k) * m:(n + k + 1) * m]) for k in range(t)]
                yield make_formula(R, side, A, B, n, m)


def _candidates_integers(R: Ring, side: str, n: int, t_max: int, m_max: int, sample: int, seed: int):
    yield top_like(R, side, n)
    for i in range(n):
        for r in range(0, 9):
            A = [[r if k == i else 0] for k in range(n)]
            yield make_formula(R, side, A, [], n, 1)
            unit = [[1 if k == i else 0] for k in range(n)]
            yield make_formula(R, side, unit, [[-r]], n, 1)
    rng = random.Random(seed * 1000 + n)
    for _ in range(sample):
        m = rng.randint(1, m_max)
        t = rng.randint(0, t_max)
        A = [[rng.randint(-4, 4) for _ in range(m)] for _ in range(n)]
        B = [[rng.randint(-4, 4) for _ in range(m)] for _ in range(t)]
        yield make_formula(R, side, A, B, n, m)


def formula_family(ring: Ring, side: str = "right", n: int = 1, t_max: int | None = None, m_max: int = 2,
                   modules=None, raw_cap: int = 5000, sample: int = 400, seed: int = 0) -> FormulaFamily:
    """The bounded family of n-ary formulas (t, m within the caps), deduplicated.

    Z/N uses the Smith normal forms, Z a seeded sample with small entries and
    other finite rings a raw enumeration (t ≤ 1 unless given) truncated at
    ``raw_cap`` candidates.  Two candidates are identified when their solution sets agree on every
    module of ``modules`` (the validation family by default).
    """
    mods = list(modules) if modules is not None else validation_family(ring, side)
    if t_max is None:
        t_max = 2 if (not ring.is_finite or ring.forced) else 1
    key = ("family", ring.key, side, n, t_max, m_max, tuple(m.key for m in mods), raw_cap, sample, seed)

    def build():
        if not ring.is_finite:
            cands = _candidates_integers(ring, side, n, t_max, m_max, sample, seed)
        elif ring.forced:
            cands = _candidates_forced_mod(ring, side, n, m_max)
        else:
            cands = _candidates_raw(ring, side, n, t_max, m_max)
        seen = {}
        raw = 0
        truncated = False
        for phi in cands:
            if raw >= raw_cap:
                truncated = True
                break
            raw += 1
            sig = tuple(evaluate(phi, m).mask.tobytes() for m in mods)
            if sig not in seen:
                seen[sig] = phi
        sigs = list(seen)
        return FormulaFamily(ring, side, n, mods, [seen[s] for s in sigs], raw, truncated, sigs)

    return _families.get_or(key, build)


def signature(phi: PpFormula, modules) -> tuple:
    return tuple(evaluate(phi, m).mask.tobytes() for m in modules)


def check_pp_type_generator(gen: PpTypeGen, family: FormulaFamily | None = None) -> bool:
    """Every family formula satisfied by ā is implied by the generator on the test modules."""
    m, tup, phi = gen.module, gen.tuple, gen.formula
    if family is None:
        family = formula_family(m.ring, m.side, len(tup))
    if not holds(m, phi, tup):
        return False
    for psi in family:
        if holds(m, psi, tup) and not leq_semantic(phi, psi, family.modules)[0]:
            return False
    return True


__all__ = [
    "SolutionSet", "evaluate", "eval_bimod", "holds", "PpTypeGen", "pp_type_generator", "validation_family",
    "leq_semantic", "equivalent_semantic", "leq_syntactic", "pair_closed", "WitnessCertificate",
    "check_certificate", "FormulaFamily", "formula_family", "check_pp_type_generator", "clear_caches",
]
