"""Exact integer linear algebra: Smith form, lattices, congruence systems.

Every decision procedure in the package reduces to linear algebra over the
integers with per-row moduli, so everything here works on plain Python
ints (lists of lists) and never touches floating point.

>>> smith_form([[2, 4], [6, 8]]).diagonal
[2, 4]
>>> solve_congruences([[2]], [1], [4]) is None
True
>>> solve_congruences([[2]], [2], [4]).particular
[1]
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = x*a + y*b = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def transpose(a, ncols=None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


@dataclass
class SmithForm:
    """U @ A @ V = D with U, V unimodular and D diagonal, d_i | d_{i+1}.

    ``diagonal`` has min(rows, cols) entries; ``v_inv`` is V^{-1}.
    """

    diagonal: list
    u: list
    v: list
    v_inv: list

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_form(a, rows: int | None = None, cols: int | None = None, want_u: bool = True) -> SmithForm:
    """Smith normal form with both transforms.

    ``rows``/``cols`` are needed only when ``a`` is empty in one dimension.
    """
    m = len(a) if rows is None else rows
    n = (len(a[0]) if a else 0) if cols is None else cols
    a = [list(map(int, r)) for r in a] if m else []
    u = identity(m) if want_u else None
    v = identity(n)
    vi = identity(n)

    def row_combine(i, j, x, y, p, q):
        # row_i <- x*row_i + y*row_j ; row_j <- p*row_i + q*row_j
        ri, rj = a[i], a[j]
        a[i] = [x * s + y * t for s, t in zip(ri, rj)]
        a[j] = [p * s + q * t for s, t in zip(ri, rj)]
        if u is not None:
            ui, uj = u[i], u[j]
            u[i] = [x * s + y * t for s, t in zip(ui, uj)]
            u[j] = [p * s + q * t for s, t in zip(ui, uj)]

    def col_combine(i, j, x, y, p, q):
        # col_i <- x*col_i + y*col_j ; col_j <- p*col_i + q*col_j  (det xq - yp = 1)
        for r in a:
            s, t = r[i], r[j]
            r[i], r[j] = x * s + y * t, p * s + q * t
        for r in v:
            s, t = r[i], r[j]
            r[i], r[j] = x * s + y * t, p * s + q * t
        # inverse acts on rows of v_inv
        ri, rj = vi[i], vi[j]
        vi[i] = [q * s - p * t for s, t in zip(ri, rj)]
        vi[j] = [-y * s + x * t for s, t in zip(ri, rj)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vi[i], vi[j] = vi[j], vi[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                if row[j] and (best is None or abs(row[j]) < best[0]):
                    best = (abs(row[j]), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            for i in range(t + 1, m):
                b = a[i][t]
                if b:
                    p = a[t][t]
                    if b % p == 0:
                        row_combine(i, t, 1, -(b // p), 0, 1)
                        # row_combine writes row i first; restore convention
                    else:
                        g, x, y = xgcd(p, b)
                        row_combine(t, i, x, y, -(b // g), p // g)
            for j in range(t + 1, n):
                b = a[t][j]
                if b:
                    p = a[t][t]
                    if b % p == 0:
                        col_combine(j, t, 1, -(b // p), 0, 1)
                    else:
                        g, x, y = xgcd(p, b)
                        col_combine(t, j, x, y, -(b // g), p // g)
            if any(a[i][t] for i in range(t + 1, m)):
                continue
            p = a[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_combine(t, bad, 1, 1, 0, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if u is not None:
                u[t] = [-x for x in u[t]]
        t += 1
    diag = [a[i][i] for i in range(min(m, n))]
    return SmithForm(diag, u, v, vi)


def invariant_factors(a, rows=None, cols=None) -> list[int]:
    return smith_form(a, rows, cols, want_u=False).diagonal


@dataclass
class CongruenceSolution:
    particular: list
    kernel: list  # generators of the homogeneous solution lattice


def solve_congruences(a, b, moduli, ncols: int | None = None) -> CongruenceSolution | None:
    """Solve a x = b with row i taken modulo moduli[i] (0 means over Z).

    Returns None when there is no integer solution.
    """
    r = len(a)
    c = (len(a[0]) if a else 0) if ncols is None else ncols
    extra = [i for i in range(r) if moduli[i]]
    aug = [list(a[i]) + [moduli[i] if k == i else 0 for k in extra] for i in range(r)]
    width = c + len(extra)
    if r == 0:
        return CongruenceSolution([0] * c, [[int(i == j) for j in range(c)] for i in range(c)])
    sf = smith_form(aug, r, width)
    ub = [sum(sf.u[i][k] * b[k] for k in range(r)) for i in range(r)]
    w = [0] * width
    for i in range(r):
        d = sf.diagonal[i] if i < len(sf.diagonal) else 0
        if d:
            if ub[i] % d:
                return None
            w[i] = ub[i] // d
        elif ub[i]:
            return None
    y = [sum(sf.v[i][k] * w[k] for k in range(width)) for i in range(width)]
    rank = sf.rank
    kernel = []
    for k in range(rank, width):
        vec = [sf.v[i][k] for i in range(c)]
        if any(vec):
            kernel.append(vec)
    return CongruenceSolution(y[:c], kernel)


class Lattice:
    """Integer lattice in row-echelon (Hermite) form with incremental insertion."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: dict[int, list[int]] = {}  # pivot column -> row

    def add(self, vec) -> None:
        vec = [int(x) for x in vec]
        for col in range(self.dim):
            x = vec[col]
            if not x:
                continue
            row = self.rows.get(col)
            if row is None:
                if x < 0:
                    vec = [-e for e in vec]
                self.rows[col] = vec
                return
            p = row[col]
            if x % p == 0:
                q = x // p
                vec = [e - q * f for e, f in zip(vec, row)]
                continue
            g, s, t = xgcd(p, x)
            new = [s * f + t * e for f, e in zip(row, vec)]
            vec = [(p // g) * e - (x // g) * f for f, e in zip(row, vec)]
            self.rows[col] = new
            # the displaced combination still needs reducing in later columns
        return

    def normalize(self) -> None:
        cols = sorted(self.rows)
        for idx in range(len(cols) - 1, -1, -1):
            row = self.rows[cols[idx]]
            for later in cols[idx + 1:]:
                other = self.rows[later]
                q = row[later] // other[later]
                if q:
                    row = [e - q * f for e, f in zip(row, other)]
            self.rows[cols[idx]] = row

    def reduce(self, vec):
        vec = [int(x) for x in vec]
        for col in range(self.dim):
            x = vec[col]
            if not x:
                continue
            row = self.rows.get(col)
            if row is None or x % row[col]:
                return vec
            q = x // row[col]
            vec = [e - q * f for e, f in zip(vec, row)]
        return vec

    def __contains__(self, vec) -> bool:
        return not any(self.reduce(vec))

    def basis(self) -> list[list[int]]:
        return [self.rows[c] for c in sorted(self.rows)]

    def contains_many(self, vecs: np.ndarray) -> np.ndarray:
        """Vectorised membership test for the rows of an integer array."""
        v = np.array(vecs, dtype=np.int64, copy=True)
        if v.ndim == 1:
            v = v[None, :]
        ok = np.ones(v.shape[0], dtype=bool)
        for col in sorted(self.rows):
            row = np.array(self.rows[col], dtype=np.int64)
            p = row[col]
            q = v[:, col] // p
            ok &= v[:, col] == q * p
            v -= q[:, None] * row[None, :]
        ok &= ~v.any(axis=1)
        return ok


def lattice_from(vectors, dim: int, moduli=None) -> Lattice:
    lat = Lattice(dim)
    if moduli is not None:
        for i, d in enumerate(moduli):
            if d:
                lat.add([d if k == i else 0 for k in range(dim)])
    for vec in vectors:
        lat.add(vec)
    lat.normalize()
    return lat


class Presentation:
    """The abelian group Z^g / (row span of ``relations``), in Smith coordinates.

    Coordinates of the class of x are (x V)_i mod s_i over the kept indices
    (those with s_i != 1); ``lift(k)`` returns a preimage of the k-th basis
    vector of the quotient.
    """

    def __init__(self, ngens: int, relations):
        relations = [list(r) for r in relations if any(r)]
        self.ngens = ngens
        if relations:
            sf = smith_form(relations, len(relations), ngens, want_u=False)
            diag = list(sf.diagonal) + [0] * (ngens - len(sf.diagonal))
            v, vi = sf.v, sf.v_inv
        else:
            diag = [0] * ngens
            v, vi = identity(ngens), identity(ngens)
        self.keep = [i for i in range(ngens) if diag[i] != 1]
        self.orders = tuple(diag[i] for i in self.keep)
        # reduce the coordinate map modulo the orders to keep entries small
        self.coord_matrix = [
            [(v[r][i] % diag[i]) if diag[i] else v[r][i] for i in self.keep] for r in range(ngens)
        ]
        self._lifts = [vi[i] for i in self.keep]

    @property
    def is_finite(self) -> bool:
        return all(self.orders)

    @property
    def order(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out

    def coords(self, x) -> tuple:
        out = []
        for k, d in enumerate(self.orders):
            s = sum(x[r] * self.coord_matrix[r][k] for r in range(self.ngens) if x[r])
            out.append(s % d if d else s)
        return tuple(out)

    def coords_many(self, xs: np.ndarray) -> np.ndarray:
        cm = np.array(self.coord_matrix, dtype=np.int64).reshape(self.ngens, len(self.orders))
        out = np.asarray(xs, dtype=np.int64) @ cm
        ords = np.array(self.orders, dtype=np.int64)
        return np.where(ords > 0, np.mod(out, np.where(ords > 0, ords, 1)), out)

    def lift(self, k: int) -> list[int]:
        return list(self._lifts[k])


def kernel_of_map(images, source_orders, target_orders):
    """Generators of the kernel of a hom between finite abelian groups in coordinates.

    ``images[i]`` is the target coordinate vector of the i-th source generator.
    The kernel is returned as integer coordinate vectors of the source.
    """
    s = len(source_orders)
    t = len(target_orders)
    # unknown x in Z^s with sum x_i images[i] = 0 mod target orders
    a = [[images[i][j] for i in range(s)] for j in range(t)]
    sol = solve_congruences(a, [0] * t, list(target_orders), ncols=s)
    gens = [list(k) for k in sol.kernel]
    for i, d in enumerate(source_orders):
        if d:
            gens.append([d if k == i else 0 for k in range(s)])
    return gens
