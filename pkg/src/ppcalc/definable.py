"""Definable subcategories given by pp-pairs, relative to a finite universe of modules.

A pair φ/ψ is closed on M when φ(M) ⊆ ψ(M).  For a comparable pair (ψ ≤ φ)
this is φ(M) = ψ(M); for an arbitrary pair it is closedness of φ/(φ ∧ ψ),
so pairs drawn from a formula family never need to be made comparable
syntactically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import RingMismatch, SideMismatch, SpecError
from .formulas import PpFormula, conj, dual, pushforward, sigma_colon_phi
from .modules import (Bimodule, FiniteModule, enumerate_modules, indecomposable, is_isomorphic, is_split_embedding,
                      restrict_along, split_embedding_into, tensor)
from .rings import Ring, RingHom
from .semantics import eval_bimod, evaluate, formula_family, leq_semantic, validation_family

DEFAULT_UNIVERSE_CAP_FORCED = 64
DEFAULT_UNIVERSE_CAP_TABLE = 16
DEFAULT_ARITIES = (1, 2)


@dataclass(frozen=True)
class PpPair:
    top: PpFormula
    bottom: PpFormula

    @property
    def key(self):
        return (self.top.key, self.bottom.key)

    def closed_on(self, m: FiniteModule) -> bool:
        return evaluate(self.top, m).issubset(evaluate(self.bottom, m))

    def comparable_bottom(self) -> PpFormula:
        """ψ ∧ φ, the bottom of the equivalent comparable pair."""
        return conj(self.bottom, self.top)

    def to_json(self) -> dict:
        from .dsl import to_text
        return {"top": to_text(self.top), "bottom": to_text(self.bottom), "n": self.top.n}


@dataclass
class PpPairSet:
    """A set Φ of pp-pairs; the subcategory it defines is {M : every pair closed on M}.

    ``generators`` records modules known to generate the subcategory when it
    was built from them (used by the finite join search).
    """

    ring: Ring
    side: str
    pairs: list = field(default_factory=list)
    generators: list | None = None
    label: str = ""

    def __post_init__(self):
        seen = set()
        out = []
        for p in self.pairs:
            if p.top.ring != self.ring or p.bottom.ring != self.ring:
                raise RingMismatch("pair over a different ring")
            if p.top.side != self.side or p.bottom.side != self.side:
                raise SideMismatch("pair on a different side")
            if p.top.n != p.bottom.n:
                raise SpecError("pair formulas of different arity")
            if p.key not in seen:
                seen.add(p.key)
                out.append(p)
        self.pairs = out

    @property
    def keys(self) -> set:
        return {p.key for p in self.pairs}

    def __len__(self):
        return len(self.pairs)

    def to_json(self) -> dict:
        return {"ring": self.ring.spec, "side": self.side, "pairs": [p.to_json() for p in self.pairs]}


@dataclass
class Universe:
    ring: Ring
    side: str
    modules: list

    def __iter__(self):
        return iter(self.modules)

    def __len__(self):
        return len(self.modules)


def default_universe(ring: Ring, side: str = "right", size_cap: int | None = None) -> Universe:
    """All modules up to the cap (64 for rings generated by 1, 16 otherwise), up to isomorphism."""
    if size_cap is None:
        forced = not ring.is_finite or ring.forced
        size_cap = DEFAULT_UNIVERSE_CAP_FORCED if forced else DEFAULT_UNIVERSE_CAP_TABLE
    return Universe(ring, side, enumerate_modules(ring, size_cap, side))


# -- membership ---------------------------------------------------------------------

def _bits(phi: PpFormula, m: FiniteModule) -> int:
    return evaluate(phi, m).bits


def membership(m: FiniteModule, spec: PpPairSet) -> bool:
    if m.ring != spec.ring or m.side != spec.side:
        raise RingMismatch("module and subcategory over different rings or sides")
    cache = {}

    def bits(phi):
        b = cache.get(phi.key)
        if b is None:
            b = cache[phi.key] = _bits(phi, m)
        return b

    for p in spec.pairs:
        t = bits(p.top)
        if t & ~bits(p.bottom):
            return False
    return True


def members(spec: PpPairSet, universe) -> list:
    return [m for m in universe if membership(m, spec)]


def membership_vector(spec: PpPairSet, universe) -> tuple:
    return tuple(membership(m, spec) for m in universe)


# -- lattice operations ----------------------------------------------------------------

def everything(ring: Ring, side: str = "right") -> PpPairSet:
    """The empty pair set, defining the whole module category."""
    return PpPairSet(ring, side, [], label="Mod")


def meet(*specs: PpPairSet) -> PpPairSet:
    if not specs:
        raise SpecError("meet of no subcategories")
    ring, side = specs[0].ring, specs[0].side
    pairs = []
    for s in specs:
        if s.ring != ring or s.side != side:
            raise RingMismatch("meet of subcategories over different rings")
        pairs.extend(s.pairs)
    return PpPairSet(ring, side, pairs, label="meet")


def _family_formulas(ring: Ring, side: str, arities) -> dict:
    return {n: list(formula_family(ring, side, n)) for n in arities}


def closed_pairs(modules, ring: Ring, side: str = "right", arities=DEFAULT_ARITIES) -> PpPairSet:
    """All pairs φ/ψ of distinct bounded-family formulas closed on every given module."""
    modules = list(modules)
    pairs = []
    for n, fam in _family_formulas(ring, side, arities).items():
        k = len(fam)
        ok = np.ones((k, k), dtype=bool)
        for m in modules:
            masks = np.stack([evaluate(phi, m).mask for phi in fam]).astype(np.int32)
            # ok[i, j] iff no tuple lies in φ_i(M) but not φ_j(M)
            ok &= (masks @ (1 - masks).T) == 0
        np.fill_diagonal(ok, False)
        for i, j in zip(*np.nonzero(ok)):
            pairs.append(PpPair(fam[i], fam[j]))
    return PpPairSet(ring, side, pairs, generators=modules)


def generated_subcategory(modules, ring: Ring | None = None, side: str | None = None,
                          arities=DEFAULT_ARITIES) -> PpPairSet:
    """⟨modules⟩ at the bounded family: every family pair closed on all of them."""
    modules = list(modules)
    if ring is None:
        if not modules:
            raise SpecError("need a ring for the subcategory generated by nothing")
        ring, side = modules[0].ring, modules[0].side
    spec = closed_pairs(modules, ring, side or "right", arities)
    spec.label = "generated"
    return spec


def saturate(spec: PpPairSet, universe, arities=DEFAULT_ARITIES) -> PpPairSet:
    """All family pairs closed on the universe members of spec."""
    return closed_pairs(members(spec, universe), spec.ring, spec.side, arities)


def join(specs, universe, arities=DEFAULT_ARITIES) -> PpPairSet:
    """Intersection of the saturated pair sets; generated by the union of the members."""
    specs = list(specs)
    if not specs:
        raise SpecError("join of no subcategories")
    sats = [saturate(s, universe, arities) for s in specs]
    common = set.intersection(*(s.keys for s in sats))
    pairs = [p for p in sats[0].pairs if p.key in common]
    gens = []
    for s in sats:
        for m in s.generators:
            if not any(g is m for g in gens):
                gens.append(m)
    return PpPairSet(specs[0].ring, specs[0].side, pairs, generators=gens, label="join")


def finite_join_membership(m: FiniteModule, generator_lists, universe=None):
    """Is m a pure (= split, for finite modules) submodule of M_1 ⊕ … ⊕ M_k with M_i ∈ ⟨G_i⟩?

    Each ⟨G_i⟩ is represented by its members in the universe (the generators
    themselves when no universe is given).  Returns the split embedding found,
    or None.
    """
    targets = []
    for gens in generator_lists:
        gens = list(gens)
        if universe is None:
            targets.extend(gens)
            continue
        spec = generated_subcategory(gens, m.ring, m.side)
        targets.extend(members(spec, universe))
    found = split_embedding_into(m, targets)
    if found is None:
        return None
    total, emb = found
    ok, _ = is_split_embedding(emb)
    return (total, emb) if ok else None


# -- duality ------------------------------------------------------------------------

def dual_category(spec: PpPairSet) -> PpPairSet:
    """The pairs Dψ/Dφ for φ/ψ in Φ, on the other side.

    With closure read as φ(M) ⊆ ψ(M), the dual pair of φ/ψ is D(φ∧ψ)/Dφ,
    equivalently (Dψ + Dφ)/Dφ, which is closed exactly when Dψ ⊆ Dφ.
    """
    duals = {}

    def d(phi):
        out = duals.get(phi.key)
        if out is None:
            out = duals[phi.key] = dual(phi)
        return out

    side = "left" if spec.side == "right" else "right"
    pairs = [PpPair(d(p.bottom), d(p.top)) for p in spec.pairs]
    return PpPairSet(spec.ring, side, pairs, label="dual")


# -- change of rings ------------------------------------------------------------------

def direct_extension(f: RingHom, spec: PpPairSet) -> PpPairSet:
    if spec.ring != f.source:
        raise RingMismatch("subcategory is not over the hom's source")
    pushed = {}

    def push(phi):
        out = pushed.get(phi.key)
        if out is None:
            out = pushed[phi.key] = pushforward(f, phi)
        return out

    pairs = [PpPair(push(p.top), push(p.bottom)) for p in spec.pairs]
    return PpPairSet(f.target, spec.side, pairs, label="direct extension")


def restriction(f: RingHom, spec: PpPairSet, target_universe, arities=DEFAULT_ARITIES) -> PpPairSet:
    """Source-family pairs φ/ψ with f_*φ/f_*ψ closed on every target-universe member of spec."""
    if spec.ring != f.target:
        raise RingMismatch("subcategory is not over the hom's target")
    mems = members(spec, target_universe)
    pairs = []
    for n, fam in _family_formulas(f.source, spec.side, arities).items():
        pushed = [pushforward(f, phi) for phi in fam]
        k = len(fam)
        ok = np.ones((k, k), dtype=bool)
        for m in mems:
            masks = np.stack([evaluate(p, m).mask for p in pushed]).astype(np.int32)
            ok &= (masks @ (1 - masks).T) == 0
        np.fill_diagonal(ok, False)
        for i, j in zip(*np.nonzero(ok)):
            pairs.append(PpPair(fam[i], fam[j]))
    restricted = [restrict_along(f, m) for m in mems]
    return PpPairSet(f.source, spec.side, pairs, generators=restricted, label="restriction")


def restriction_membership_oracle(m: FiniteModule, f: RingHom, spec: PpPairSet, target_universe) -> bool:
    """m is a pure submodule of M_R for some M in the subcategory (universe members, finite sums)."""
    restricted = [restrict_along(f, x) for x in members(spec, target_universe)]
    return split_embedding_into(m, restricted) is not None


def definable_trace(f: RingHom, target_universe, side: str = "right", arities=DEFAULT_ARITIES) -> PpPairSet:
    return restriction(f, everything(f.target, side), target_universe, arities)


def tensor_extension(generators, b, target_ring: Ring | None = None, arities=DEFAULT_ARITIES) -> PpPairSet:
    """⟨M ⊗ B : M a generator⟩ over the right ring of B (B a bimodule, or a hom R → S)."""
    if isinstance(b, RingHom):
        from .modules import bimodule_from_hom
        b = bimodule_from_hom(b)
    if not isinstance(b, Bimodule):
        raise SpecError("tensor extension needs a bimodule or a ring hom")
    S = target_ring or b.right_ring
    products = [tensor(m, b).module for m in generators]
    spec = generated_subcategory(products, S, "right", arities)
    spec.label = "tensor extension"
    return spec


# -- Ziegler points ---------------------------------------------------------------------

@dataclass
class ZieglerPointSet:
    ring: Ring
    points: list


def ziegler_points(ring: Ring, size_cap: int = 16, side: str = "right") -> ZieglerPointSet:
    """Indecomposable modules of size ≤ cap up to isomorphism (finite modules are pure-injective)."""
    if not ring.is_finite:
        raise SpecError("Ziegler points are enumerated for finite rings only")
    pts = []
    for m in enumerate_modules(ring, size_cap, side):
        if m.size > 1 and indecomposable(m) and not any(is_isomorphic(m, p) for p in pts):
            pts.append(m)
    return ZieglerPointSet(ring, pts)


# -- tensor pp-pair criterion -------------------------------------------------------------

@dataclass
class TensppResult:
    holds: bool | None
    checked: int
    failure: dict | None = None
    reason: str = ""


def _partitions(n: int, k: int):
    """Compositions of n into k positive parts."""
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _partitions(n - first, k - 1):
            yield (first,) + rest


def tenspp_criterion(sigma: PpFormula, tau: PpFormula, bimodules, d_modules=None,
                     arities=DEFAULT_ARITIES) -> TensppResult:
    """For every family φ some φ' with φ ≤_D φ' and (σ:φ) ≤_B (τ:φ').

    D defaults to the validation family of R (so D is Mod-R); φ itself is
    tried first for φ'.
    """
    bimodules = list(bimodules)
    if not bimodules:
        return TensppResult(True, 0)
    R = bimodules[0].left_ring
    k = sigma.n
    if tau.n != k:
        raise SpecError("σ and τ must have the same number of free variables")
    dmods = list(d_modules) if d_modules is not None else validation_family(R, "right")
    colon = {}

    def _scp(s, phi):
        key = (s.key, phi.key)
        if key not in colon:
            colon[key] = sigma_colon_phi(s, phi)
        return colon[key]

    checked = 0
    for n in arities:
        if n < k:
            continue
        fam = list(formula_family(R, "right", n))
        for part in _partitions(n, k):
            fam_p = [phi.with_partition(part) for phi in fam]
            for phi in fam_p:
                checked += 1
                lhs = [eval_bimod(_scp(sigma, phi), b) for b in bimodules]
                cands = [phi] + [p for p in fam_p if p is not phi]
                found = False
                for phi2 in cands:
                    if phi2 is not phi and not leq_semantic(phi, phi2, dmods)[0]:
                        continue
                    if all(l.issubset(eval_bimod(_scp(tau, phi2), b)) for l, b in zip(lhs, bimodules)):
                        found = True
                        break
                if not found:
                    from .dsl import to_text
                    return TensppResult(False, checked, {"phi": to_text(phi), "partition": list(part)})
    return TensppResult(True, checked)
