"""pp formulas in matrix form and the syntactic constructions on them.

A right formula with matrices A (n×m) and B (t×m) stands for
∃ȳ (x̄A + ȳB = 0): equation j reads Σ_i x_i·A_ij + Σ_k y_k·B_kj = 0.  A left
formula stores the same matrices with the coefficients acting on the left.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ArityMismatch, CapExceeded, PartitionMismatch, RingMismatch, SideMismatch, SpecError
from .rings import Ring, RingHom

DEFAULT_MAX_REALIZATION = 1 << 14


def _other(side: str) -> str:
    return "left" if side == "right" else "right"


def _matrix(rows, nrows: int, ncols: int, ring: Ring, what: str):
    rows = [list(r) for r in rows]
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise SpecError(f"matrix {what} should be {nrows}×{ncols}")
    out = []
    for r in rows:
        norm = []
        for x in r:
            x = int(x)
            if ring.is_finite and not ring.contains(x):
                raise SpecError(f"entry {x} of {what} is not an element of {ring.name}")
            norm.append(x)
        out.append(tuple(norm))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class PpFormula:
    ring: Ring
    side: str
    n: int
    t: int
    m: int
    A: tuple
    B: tuple
    partition: tuple
    key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise SpecError(f"side must be left or right, got {self.side!r}")
        object.__setattr__(self, "A", _matrix(self.A, self.n, self.m, self.ring, "A"))
        object.__setattr__(self, "B", _matrix(self.B, self.t, self.m, self.ring, "B"))
        part = tuple(int(p) for p in self.partition)
        if any(p <= 0 for p in part) or sum(part) != self.n:
            raise PartitionMismatch(f"partition {part} does not sum to n={self.n}")
        object.__setattr__(self, "partition", part)
        object.__setattr__(self, "key", (self.ring.key, self.side, self.n, self.t, self.m, self.A, self.B, part))

    def __eq__(self, other):
        return isinstance(other, PpFormula) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        from .dsl import to_text
        return f"PpFormula[{self.ring.name},{self.side}]({to_text(self)!r})"

    def column(self, j: int) -> list:
        return [self.A[i][j] for i in range(self.n)] + [self.B[k][j] for k in range(self.t)]

    def with_partition(self, partition) -> "PpFormula":
        return make_formula(self.ring, self.side, self.A, self.B, self.n, self.m, partition)

    def to_json(self) -> dict:
        return {"A": [list(r) for r in self.A], "B": [list(r) for r in self.B], "partition": list(self.partition),
                "n": self.n, "t": self.t, "m": self.m, "side": self.side, "ring": self.ring.spec}


def make_formula(ring: Ring, side: str, A, B, n: int | None = None, m: int | None = None, partition=None) -> PpFormula:
    A = [list(r) for r in A]
    B = [list(r) for r in B]
    if n is None:
        n = len(A)
    if m is None:
        m = len(A[0]) if A else (len(B[0]) if B else 0)
    if partition is None:
        partition = (1,) * n
    return PpFormula(ring, side, n, len(B), m, A, B, tuple(partition))


def top(ring: Ring, n: int, side: str = "right") -> PpFormula:
    """x̄ = x̄: no equations."""
    return make_formula(ring, side, [[] for _ in range(n)], [], n, 0)


def bottom(ring: Ring, n: int, side: str = "right") -> PpFormula:
    """x̄ = 0."""
    A = [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]
    return make_formula(ring, side, A, [], n, n)


def annihilator(ring: Ring, r, side: str = "right") -> PpFormula:
    """x·r = 0 (or r·x = 0 on the left)."""
    return make_formula(ring, side, [[r]], [], 1, 1)


def divisibility(ring: Ring, r, side: str = "right") -> PpFormula:
    """r | x, i.e. ∃y (x = y·r)."""
    return make_formula(ring, side, [[ring.one]], [[ring.neg(r)]], 1, 1)


def _same_shape(phi: PpFormula, psi: PpFormula) -> None:
    if phi.ring != psi.ring:
        raise RingMismatch("formulas over different rings")
    if phi.side != psi.side:
        raise SideMismatch("formulas on different sides")
    if phi.n != psi.n:
        raise ArityMismatch(f"arities {phi.n} and {psi.n} differ")


def conj(phi: PpFormula, psi: PpFormula) -> PpFormula:
    """φ ∧ ψ: A = [A_φ | A_ψ], B = diag(B_φ, B_ψ)."""
    _same_shape(phi, psi)
    z = phi.ring.zero
    A = [list(phi.A[i]) + list(psi.A[i]) for i in range(phi.n)]
    B = [list(r) + [z] * psi.m for r in phi.B] + [[z] * phi.m + list(r) for r in psi.B]
    return make_formula(phi.ring, phi.side, A, B, phi.n, phi.m + psi.m, phi.partition)


def psum(phi: PpFormula, psi: PpFormula) -> PpFormula:
    """φ + ψ = ∃x̄₁x̄₂ (φ(x̄₁) ∧ ψ(x̄₂) ∧ x̄ = x̄₁ + x̄₂).

    Bound variables are ordered x̄₁, x̄₂, then φ's and ψ's own; equations are
    φ's, ψ's, then the n equations x_i − x₁_i − x₂_i = 0.
    """
    _same_shape(phi, psi)
    R = phi.ring
    z, one, mone = R.zero, R.one, R.neg(R.one)
    n, mp, mq = phi.n, phi.m, psi.m
    width = mp + mq + n

    def eye(i, sign):
        return [sign if j == i else z for j in range(n)]

    A = [[z] * (mp + mq) + eye(i, one) for i in range(n)]
    B = []
    for i in range(n):
        B.append(list(phi.A[i]) + [z] * mq + eye(i, mone))
    for i in range(n):
        B.append([z] * mp + list(psi.A[i]) + eye(i, mone))
    for r in phi.B:
        B.append(list(r) + [z] * (mq + n))
    for r in psi.B:
        B.append([z] * mp + list(r) + [z] * n)
    return make_formula(R, phi.side, A, B, n, width, phi.partition)


def dual(phi: PpFormula) -> PpFormula:
    """Elementary dual ∃z̄ (x̄ = Az̄ ∧ Bz̄ = 0), on the opposite side.

    Free variables n, bound m, equations n + t: x_i − Σ_j A_ij z_j = 0 and
    Σ_j B_kj z_j = 0.
    """
    R = phi.ring
    n, t, m = phi.n, phi.t, phi.m
    z, one = R.zero, R.one
    A = [[one if i == e else z for e in range(n + t)] for i in range(n)]
    B = [[R.neg(phi.A[e][j]) for e in range(n)] + [phi.B[k][j] for k in range(t)] for j in range(m)]
    return make_formula(R, _other(phi.side), A, B, n, n + t, phi.partition)


def pushforward(f: RingHom, phi: PpFormula) -> PpFormula:
    if phi.ring != f.source:
        raise RingMismatch("formula is not over the hom's source")
    A = [[f(x) for x in r] for r in phi.A]
    B = [[f(x) for x in r] for r in phi.B]
    return make_formula(f.target, phi.side, A, B, phi.n, phi.m, phi.partition)


@dataclass
class FreeRealization:
    """Generators c̄ (g of them) with relations c̄Θ = 0 and ā = c̄H.

    For a formula these are Θ = [A; B] and H = [I_n; 0]; ``module`` and
    ``tuple`` are the materialised C_φ and ā for finite rings.
    """

    formula: PpFormula
    g: int
    theta: tuple  # g × m
    H: tuple  # g × n
    module: object = None
    tuple: tuple | None = None


def free_realization(phi: PpFormula, materialize: bool = True, cap: int = DEFAULT_MAX_REALIZATION) -> FreeRealization:
    R = phi.ring
    g = phi.n + phi.t
    theta = tuple(tuple(r) for r in (list(phi.A) + list(phi.B)))
    H = tuple(tuple(R.one if (i == l) else R.zero for l in range(phi.n)) for i in range(g))
    fr = FreeRealization(phi, g, theta, H)
    if materialize and R.is_finite:
        size = R.order ** g
        if size > cap:
            raise CapExceeded("free realization carrier", size, cap)
        from .modules import quotient_of_free

        cols = [tuple(theta[i][j] for i in range(g)) for j in range(phi.m)]
        mod, basis = quotient_of_free(R, g, cols, phi.side)
        fr.module = mod.relabel("C_phi")
        fr.tuple = tuple(basis[:phi.n])
    return fr


@dataclass(frozen=True, eq=False)
class BimodPpFormula:
    """∃ bound. ⋀_j Σ r·x_v·s = 0 over (R,S)-bimodules; variables 0..n-1 are free."""

    left_ring: Ring
    right_ring: Ring
    n: int
    t: int
    equations: tuple
    key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        eqs = []
        for eq in self.equations:
            terms = []
            for r, v, s in eq:
                if not 0 <= v < self.n + self.t:
                    raise SpecError(f"variable index {v} out of range")
                terms.append((int(r), int(v), int(s)))
            eqs.append(tuple(terms))
        object.__setattr__(self, "equations", tuple(eqs))
        object.__setattr__(self, "key", (self.left_ring.key, self.right_ring.key, self.n, self.t, self.equations))

    @property
    def m(self) -> int:
        return len(self.equations)

    def __eq__(self, other):
        return isinstance(other, BimodPpFormula) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def sigma_colon_phi(sigma: PpFormula, phi: PpFormula) -> BimodPpFormula:
    """(σ:φ)(ȳ) = ∃ū ⋀_j Dθ(Σ_l H_l ȳ_l s_lj + Σ_i ū_i t_ij).

    Uses the free realization c̄ = (x̄, ȳ_φ) of φ, so θ = [A; B] and
    H = [I; 0].  Dθ(w̄) = ∃v̄ (w̄ = Θv̄), giving for every equation j of σ and
    every generator c the equation
        [c < n] y_c·s_{l(c)j} + Σ_i u_{i,c}·t_ij − Σ_q Θ_cq·v_{j,q} = 0.
    Bound variables: u_{i,c} (index n + i·g + c), then v_{j,q}.
    """
    if sigma.side != "right" or phi.side != "right":
        raise SideMismatch("(σ:φ) takes right formulas")
    k = sigma.n
    if len(phi.partition) != k:
        raise PartitionMismatch(f"φ has {len(phi.partition)} blocks but σ has {k} free variables")
    R, S = phi.ring, sigma.ring
    fr = free_realization(phi, materialize=False)
    g, theta = fr.g, fr.theta
    Q = phi.m
    p, J = sigma.t, sigma.m
    n = phi.n
    block = []
    for l, size in enumerate(phi.partition):
        block.extend([l] * size)
    r_one, s_one = R.one, S.one
    eqs = []
    for j in range(J):
        for c in range(g):
            terms = []
            if c < n:
                s = sigma.A[block[c]][j]
                if s != S.zero:
                    terms.append((r_one, c, s))
            for i in range(p):
                s = sigma.B[i][j]
                if s != S.zero:
                    terms.append((r_one, n + i * g + c, s))
            for q in range(Q):
                r = theta[c][q]
                if r != R.zero:
                    terms.append((R.neg(r), n + p * g + j * Q + q, s_one))
            eqs.append(terms)
    return BimodPpFormula(R, S, n, p * g + J * Q, eqs)
