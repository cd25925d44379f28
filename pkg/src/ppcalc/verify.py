"""Brute-force verification suites.

Each suite enumerates small instances (exhaustively below the caps, by a
seeded sample above them), compares two independent computations and records
every disagreement with enough data to replay it.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .definable import (PpPair, PpPairSet, closed_pairs, default_universe, definable_trace, direct_extension,
                        dual_category, everything, finite_join_membership, generated_subcategory, join, meet,
                        membership, members, restriction, tensor_extension,
                        ziegler_points)
from .dsl import parse, to_text
from .errors import CapExceeded, SpecError
from .formulas import conj, dual, psum, pushforward, sigma_colon_phi
from .modules import (Bimodule, ModuleHom, split_embedding_into, abelian_groups, bimodule_from_commutative, bimodule_from_hom, direct_sum,
                      enumerate_homs, enumerate_modules, indecomposable, is_isomorphic,
                      is_split_embedding, module_to_spec, regular_bimodule, restrict_along,
                      tensor, tensor_map)
from .rings import INTEGERS, Ring, diagonal_hom, identity_hom, reduction_hom, ring_from_spec, zmod
from .semantics import (SolutionSet, _all_tuples, check_certificate, equivalent_semantic, eval_bimod, evaluate,
                        formula_family, holds, leq_semantic, leq_syntactic, pp_type_generator, validation_family)


@dataclass
class SuiteConfig:
    rings: tuple | None = None
    max_module_size: int = 8
    tuple_len: int = 2
    universe_cap: int | None = None
    seed: int = 0
    budget: int | None = None

    def __post_init__(self):
        if self.max_module_size < 1 or self.tuple_len < 1:
            raise SpecError("suite caps must be positive")
        if self.budget is not None and self.budget < 1:
            raise SpecError("instance budget must be positive")
        if self.rings is not None:
            self.rings = tuple(self.rings)

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class SuiteReport:
    suite: str
    config: dict
    instances: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self, include_runtime: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "config": self.config,
            "instances": self.instances,
            "skipped": self.skipped,
            "passed": self.passed,
            "failures": sorted(self.failures, key=lambda f: json.dumps(f, sort_keys=True)),
            "notes": list(self.notes),
        }
        if include_runtime:
            out["runtime"] = round(self.runtime, 3)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def summary(self) -> str:
        state = "PASS" if self.passed else "FAIL"
        return (f"{self.suite}: {state} ({self.instances} instances, {len(self.failures)} failures, "
                f"{self.skipped} skipped)")


class _Run:
    def __init__(self, name: str, cfg: SuiteConfig):
        self.report = SuiteReport(name, cfg.to_json())
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)

    def check(self, ok: bool, check: str, **repro):
        self.report.instances += 1
        if not ok:
            repro["check"] = check
            self.report.failures.append(_jsonable(repro))
        return ok

    def skip(self, n: int = 1):
        self.report.skipped += n

    def note(self, text: str):
        self.report.notes.append(text)

    def limit(self, items, what: str):
        """All items, or a seeded sample of ``budget`` of them (order preserved)."""
        items = list(items)
        b = self.cfg.budget
        if b is None or len(items) <= b:
            return items
        keep = sorted(self.rng.sample(range(len(items)), b))
        self.note(f"{what}: sampled {b} of {len(items)}")
        return [items[i] for i in keep]


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _ring(name) -> Ring:
    return ring_from_spec(name)


def _rings(cfg: SuiteConfig, default) -> list:
    return [_ring(r) for r in (cfg.rings or default)]


def _mod(m) -> dict:
    return module_to_spec(m)


def _bimod(b: Bimodule) -> dict:
    return module_to_spec(b)


def _tuples(m, n: int) -> np.ndarray:
    return _all_tuples(m, n)[0]


def _small_modules(R: Ring, cap: int, side: str = "right") -> list:
    return enumerate_modules(R, cap, side)


def _small_bimodules(R: Ring, cap: int) -> list:
    """(R,R)-bimodules used by the tensor suites: abelian groups over commutative forced rings, else R itself."""
    if R.is_finite and R.forced:
        return [bimodule_from_commutative(m) for m in abelian_groups(R, cap) if m.size > 1]
    out = [regular_bimodule(R)]
    return [b for b in out if b.size <= cap]


def random_formula(R: Ring, side: str, n: int, rng: random.Random, t_max: int = 2, m_max: int = 2):
    from .formulas import make_formula
    t = rng.randint(0, t_max)
    m = rng.randint(1, m_max)
    pool = list(R.elements()) if R.is_finite else list(range(-4, 5))
    A = [[rng.choice(pool) for _ in range(m)] for _ in range(n)]
    B = [[rng.choice(pool) for _ in range(m)] for _ in range(t)]
    return make_formula(R, side, A, B, n, m)


# -- tensor helpers -----------------------------------------------------------------

def tensor_annihilator(m, tup, l, product=None) -> SolutionSet:
    """{b̄ ∈ L^n : Σ a_i ⊗ b_i = 0 in M ⊗ L}."""
    tup = tuple(int(a) for a in tup)
    n = len(tup)
    T = product or tensor(m, l)
    tm = T.module
    bt = _tuples(l, n)
    if tm.rank == 0:
        return SolutionSet(l, n, np.ones(len(bt), dtype=bool))
    table = T.table
    c = tm.coords
    acc = np.zeros((len(bt), tm.rank), dtype=np.int64)
    for i, a in enumerate(tup):
        acc += c[table[a, bt[:, i]]]
    return SolutionSet(l, n, tm.encode(acc) == tm.zero)


def tensored_tuples(T, tup, btuples, partition) -> np.ndarray:
    """Rows (Σ_{i in block l} a_i ⊗ b_i)_l for each row b̄ of ``btuples``."""
    tm = T.module
    table = T.table
    out = []
    i = 0
    for size in partition:
        acc = np.zeros((len(btuples), tm.rank), dtype=np.int64)
        for _ in range(size):
            acc += tm.coords[table[tup[i], btuples[:, i]]] if tm.rank else 0
            i += 1
        out.append(tm.encode(acc))
    return np.stack(out, axis=1)


def _tuple_index(rows: np.ndarray, size: int) -> np.ndarray:
    idx = np.zeros(len(rows), dtype=np.int64)
    for col in range(rows.shape[1]):
        idx = idx * size + rows[:, col]
    return idx


def brute_sigma_set(sigma, T, tup, b, partition) -> np.ndarray:
    """Mask over B^n of b̄ with M ⊗ B ⊨ σ(ā ⊗ b̄)."""
    bt = _tuples(b, len(tup))
    rows = tensored_tuples(T, tup, bt, partition)
    smask = evaluate(sigma, T.module).mask
    return smask[_tuple_index(rows, T.module.size)]


def _partitions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _partitions(n - first, k - 1):
            yield (first,) + rest


def _subgroup_sum(x: SolutionSet, y: SolutionSet) -> np.ndarray:
    """Mask of X + Y inside B^n."""
    b, n = x.module, x.n
    tups, coords = _all_tuples(b, n)
    xs = coords[np.flatnonzero(x.mask)]
    ys = coords[np.flatnonzero(y.mask)]
    sums = (xs[:, None, :, :] + ys[None, :, :, :]).reshape(-1, n, b.rank)
    rows = b.encode(sums)
    mask = np.zeros(len(tups), dtype=bool)
    mask[_tuple_index(rows.reshape(-1, n), b.size)] = True
    return mask


# -- suites -------------------------------------------------------------------------

def suite_duality(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("duality", cfg)
    for R in _rings(cfg, ("zmod4", "zmod8")):
        right = validation_family(R, "right")
        left = validation_family(R, "left")
        for n in range(1, cfg.tuple_len + 1):
            fam = list(formula_family(R, "right", n))
            extra = [random_formula(R, "right", n, run.rng) for _ in range(100)]
            duals = {}

            def d(phi):
                if phi.key not in duals:
                    duals[phi.key] = dual(phi)
                return duals[phi.key]

            for phi in fam + extra:
                run.check(equivalent_semantic(dual(d(phi)), phi, right), "D(D(phi)) = phi",
                          ring=R.spec, formula=to_text(phi))
            pairs = run.limit(itertools.combinations_with_replacement(fam, 2), f"{R.name} n={n} pairs")
            for phi, psi in pairs:
                dphi, dpsi = d(phi), d(psi)
                run.check(equivalent_semantic(dual(conj(psi, phi)), psum(dpsi, dphi), left),
                          "D(psi & phi) = D(psi) + D(phi)", ring=R.spec, phi=to_text(phi), psi=to_text(psi))
                run.check(equivalent_semantic(dual(psum(psi, phi)), conj(dpsi, dphi), left),
                          "D(psi + phi) = D(psi) & D(phi)", ring=R.spec, phi=to_text(phi), psi=to_text(psi))
        for r in R.elements() if R.is_finite else range(0, 9):
            k = R.int_value(r) if not R.is_finite or R.forced else f"e{r}"
            ann = parse(f"x1*{k} = 0", R)
            div = parse(f"E z . x1 = {k}*z", R, side="left")
            run.check(equivalent_semantic(dual(ann), div, left), "D(x*r = 0) = r | x", ring=R.spec, r=k)
    return run.report


def suite_herzog(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("herzog", cfg)
    for R in _rings(cfg, ("zmod4", "zmod8")):
        ms = _small_modules(R, cfg.max_module_size, "right")
        ls = _small_modules(R, cfg.max_module_size, "left")
        for m in ms:
            for n in range(1, cfg.tuple_len + 1):
                for tup in run.limit(map(tuple, _tuples(m, n).tolist()), f"{R.name} {m.label} {n}-tuples"):
                    dphi = dual(pp_type_generator(m, tup).formula)
                    for l in ls:
                        T = _tensor_cached(m, l)
                        ann = tensor_annihilator(m, tup, l, T)
                        run.check(ann == evaluate(dphi, l), "annihilator = D(generator)", ring=R.spec,
                                  M=_mod(m), tuple=list(tup), L=_mod(l))
    return run.report


_TENSORS: dict = {}


def _tensor_cached(m, x):
    key = (m.key, x.key)
    if key not in _TENSORS:
        if len(_TENSORS) > 4096:
            _TENSORS.clear()
        _TENSORS[key] = tensor(m, x)
    return _TENSORS[key]


def _abelian_sample(cfg: SuiteConfig, count: int = 20, cap: int = 16) -> list:
    groups = [g for g in abelian_groups(INTEGERS, cap) if g.size > 1]
    rng = random.Random(cfg.seed)
    if len(groups) <= count:
        return groups
    return [groups[i] for i in sorted(rng.sample(range(len(groups)), count))]


def suite_presta(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("presta", cfg)
    for R in _rings(cfg, ("zmod4", "zmod8", "z")):
        groups = _abelian_sample(cfg) if not R.is_finite else None
        for n in range(1, cfg.tuple_len + 1):
            fam = list(formula_family(R, "right", n))
            pairs = run.limit(itertools.product(fam, fam), f"{R.name} n={n} pairs")
            for lo, up in pairs:
                cert = leq_syntactic(lo, up)
                repro = dict(ring=R.spec, lower=to_text(lo), upper=to_text(up), n=n, certificate=cert.kind)
                if cert.kind == "syntactic_yes":
                    run.check(check_certificate(lo, up, cert), "certificate re-check", **repro)
                if cert.kind == "semantic_no":
                    c = cert.module
                    run.check(holds(c, lo, cert.tuple) and not holds(c, up, cert.tuple), "counterexample", **repro)
                if R.is_finite:
                    sem = leq_semantic(lo, up)[0]
                    run.check(cert.implies is sem, "syntactic = semantic", **repro)
                else:
                    if cert.kind == "syntactic_yes":
                        run.check(leq_semantic(lo, up, groups)[0], "soundness on random groups", **repro)
                    elif cert.kind not in ("semantic_no", "syntactic_no"):
                        run.skip()
            if fam:
                cert = leq_syntactic(fam[0], fam[0])
                run.check(cert.kind == "syntactic_yes" and check_certificate(fam[0], fam[0], cert),
                          "identity witness", ring=R.spec, formula=to_text(fam[0]))
    return run.report


def _sigma_instances(run: _Run, R: Ring, cfg: SuiteConfig, m_cap: int):
    """(M, ā, partition, σ) with σ over R having one free variable per block."""
    sig_fams = {k: list(formula_family(R, "right", k)) for k in range(1, min(2, cfg.tuple_len) + 1)}
    out = []
    for m in _small_modules(R, m_cap, "right"):
        for n in range(1, cfg.tuple_len + 1):
            for tup in map(tuple, _tuples(m, n).tolist()):
                for k in range(1, min(n, 2) + 1):
                    for part in _partitions(n, k):
                        for sigma in sig_fams[k]:
                            out.append((m, tup, part, sigma))
    return out


def suite_sigmaphi(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("sigmaphi", cfg)
    for R in _rings(cfg, ("zmod2", "zmod4")):
        bims = _small_bimodules(R, cfg.max_module_size)
        m_cap = cfg.max_module_size
        insts = run.limit(_sigma_instances(run, R, cfg, m_cap), f"{R.name} instances")
        gens = {}
        u0 = parse("x1 = 0", R)
        for m, tup, part, sigma in insts:
            gkey = (m.key, tup)
            if gkey not in gens:
                gens[gkey] = pp_type_generator(m, tup).formula
            phi = gens[gkey].with_partition(part)
            beta = sigma_colon_phi(sigma, phi)
            for b in bims:
                T = _tensor_cached(m, b)
                lhs = eval_bimod(beta, b).mask
                rhs = brute_sigma_set(sigma, T, tup, b, part)
                run.check(bool(np.array_equal(lhs, rhs)), "(sigma:phi)(B) = brute force", ring=R.spec, M=_mod(m),
                          tuple=list(tup), partition=list(part), sigma=to_text(sigma), B=_bimod(b))
        done = set()
        for m, tup, part, sigma in insts:
            if len(part) != 1 or (m.key, tup) in done:
                continue
            done.add((m.key, tup))
            phi = gens[(m.key, tup)].with_partition((len(tup),))
            beta = sigma_colon_phi(u0, phi)
            dphi = dual(phi)
            for b in bims:
                run.check(eval_bimod(beta, b) .mask.tolist() == evaluate(dphi, b.left_module()).mask.tolist(),
                          "(u=0 : phi) = D(phi)", ring=R.spec, M=_mod(m), tuple=list(tup), B=_bimod(b))
    return run.report


def _homs_fstar():
    return [reduction_hom(zmod(4), zmod(2)), reduction_hom(INTEGERS, zmod(4))]


def suite_fstar(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("fstar", cfg)
    for f in _homs_fstar():
        U = default_universe(f.target, "right", cfg.universe_cap)
        tgt_val = validation_family(f.target, "right")
        for n in range(1, cfg.tuple_len + 1):
            fam = list(formula_family(f.source, "right", n))
            pushed = [pushforward(f, phi) for phi in fam]
            for m in U:
                mr = restrict_along(f, m)
                for phi, fphi in zip(fam, pushed):
                    same = np.array_equal(evaluate(fphi, m).mask, evaluate(phi, mr).mask)
                    run.check(same, "f*phi(M) = phi(M_R)",
                              hom=f.spec, formula=to_text(phi), M=_mod(m))
            pairs = list(itertools.product(range(len(fam)), repeat=2))
            budget = cfg.budget or 2000
            if len(pairs) > budget:
                run.note(f"{f} n={n}: sampled {budget} of {len(pairs)} pairs")
                pairs = sorted(run.rng.sample(pairs, budget))
            for i, j in pairs:
                phi, psi = fam[i], fam[j]
                # lattice homomorphism, syntactically
                run.check(pushforward(f, conj(phi, psi)) == conj(pushed[i], pushed[j]), "f*(phi & psi)",
                          hom=f.spec, phi=to_text(phi), psi=to_text(psi))
                run.check(pushforward(f, psum(phi, psi)) == psum(pushed[i], pushed[j]), "f*(phi + psi)",
                          hom=f.spec, phi=to_text(phi), psi=to_text(psi))
                cert = leq_syntactic(psi, phi)
                if cert.kind == "syntactic_yes":
                    run.check(leq_semantic(pushed[j], pushed[i], tgt_val)[0], "pp-pair pushes to a pp-pair",
                              hom=f.spec, phi=to_text(phi), psi=to_text(psi))
                for m in U:
                    a = evaluate(pushed[i], m).issubset(evaluate(pushed[j], m))
                    mr = restrict_along(f, m)
                    b = evaluate(phi, mr).issubset(evaluate(psi, mr))
                    run.check(a == b, "closure transfers", hom=f.spec, phi=to_text(phi), psi=to_text(psi),
                              M=_mod(m))
    return run.report


def _surjections():
    return [reduction_hom(zmod(4), zmod(2)), reduction_hom(zmod(8), zmod(4)), reduction_hom(zmod(8), zmod(2))]


def _test_specs(R: Ring, U) -> list:
    """Pair sets used as sample definable subcategories."""
    specs = [everything(R), PpPairSet(R, "right", [PpPair(parse("x1 = x1", R), parse("x1*2 = 0", R))], label="2M=0"),
             PpPairSet(R, "right", [PpPair(parse("x1 = x1", R), parse("E z . x1 = z*2", R))], label="M=2M")]
    for p in ziegler_points(R, 16).points if R.is_finite else []:
        specs.append(generated_subcategory([p]))
    specs.append(generated_subcategory([], R, "right"))
    return specs


def _same_class(x, y) -> bool:
    # over rings generated by 1 a module is its abelian group
    if not x.ring.is_finite or x.ring.forced:
        return x.elementary_divisors == y.elementary_divisors
    return is_isomorphic(x, y)


def _iso_classes_equal(xs, ys) -> bool:
    if len(xs) != len(ys):
        return False
    left = list(ys)
    for x in xs:
        for i, y in enumerate(left):
            if _same_class(x, y):
                del left[i]
                break
        else:
            return False
    return True


def suite_epi(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("epi", cfg)
    for f in _surjections():
        R, S = f.source, f.target
        UR = default_universe(R, "right", cfg.universe_cap)
        US = default_universe(S, "right", cfg.universe_cap)
        kernel = [r for r in R.elements() if f(r) == S.zero]
        killed = [m for m in UR if all(not m.act_matrix(r).any() for r in kernel)]
        for spec in _test_specs(R, UR):
            ext = direct_extension(f, spec)
            lhs = [restrict_along(f, n) for n in US if membership(n, ext)]
            rhs = [m for m in killed if membership(m, spec)]
            run.check(_iso_classes_equal(lhs, rhs), "D^S = D ∩ Mod-S", hom=f.spec, spec=spec.label,
                      lhs=[_mod(m) for m in lhs], rhs=[_mod(m) for m in rhs])
        small = [n for n in US if n.size <= 4]
        for a, b in itertools.product(small, repeat=2):
            hs = len(enumerate_homs(a, b))
            hr = len(enumerate_homs(restrict_along(f, a), restrict_along(f, b)))
            run.check(hs == hr, "restriction is full", hom=f.spec, A=_mod(a), B=_mod(b), hom_S=hs, hom_R=hr)
    return run.report


def _homs_elem4():
    return [reduction_hom(zmod(4), zmod(2)), reduction_hom(zmod(8), zmod(4)), identity_hom(zmod(4)),
            reduction_hom(INTEGERS, zmod(4)), diagonal_hom(zmod(2))]


def suite_elem4(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("elem4", cfg)
    for f in _homs_elem4():
        R, S = f.source, f.target
        bim = bimodule_from_hom(f)
        sval = validation_family(S, "right")
        ms = _small_modules(R, min(cfg.max_module_size, 8), "right")
        sig_fams = {n: list(formula_family(S, "right", n)) for n in range(1, cfg.tuple_len + 1)}
        for m in ms:
            T = tensor(m, bim)
            for n in range(1, cfg.tuple_len + 1):
                for tup in run.limit(map(tuple, _tuples(m, n).tolist()), f"{f} {m.label} {n}-tuples"):
                    phi = pp_type_generator(m, tup).formula
                    img = tuple(int(T.pure_tensor(a, S.one)) for a in tup)
                    gen_s = pp_type_generator(T.module, img).formula
                    run.check(equivalent_semantic(gen_s, pushforward(f, phi), sval), "pp(a⊗1) generated by f*phi",
                              hom=f.spec, M=_mod(m), tuple=list(tup))
                    ones = (S.one,) * n
                    for sigma in sig_fams[n]:
                        beta = sigma_colon_phi(sigma, phi.with_partition((1,) * n))
                        run.check(holds(T.module, sigma, img) == holds(bim, beta, ones), "sigma(a⊗1) iff (sigma:phi)(1)",
                                  hom=f.spec, M=_mod(m), tuple=list(tup), sigma=to_text(sigma))
    return run.report


def suite_sigmaphiprop(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("sigmaphiprop", cfg)
    budget = cfg.budget or 2000
    for R in _rings(cfg, ("zmod2", "zmod4")):
        bims = _small_bimodules(R, cfg.max_module_size)
        insts = []
        for n in range(1, cfg.tuple_len + 1):
            fam = list(formula_family(R, "right", n))
            for k in range(1, min(n, 2) + 1):
                sigmas = list(formula_family(R, "right", k))
                for part in _partitions(n, k):
                    for phi, psi, sigma in itertools.product(fam, fam, sigmas):
                        insts.append((phi.with_partition(part), psi.with_partition(part), sigma))
        if len(insts) > budget:
            keep = sorted(run.rng.sample(range(len(insts)), budget))
            run.note(f"{R.name}: sampled {budget} of {len(insts)} triples")
            insts = [insts[i] for i in keep]
        for phi, psi, sigma in insts:
            s_sum = sigma_colon_phi(sigma, psum(phi, psi))
            s_meet = sigma_colon_phi(sigma, conj(phi, psi))
            s_phi, s_psi = sigma_colon_phi(sigma, phi), sigma_colon_phi(sigma, psi)
            for b in bims:
                x, y = eval_bimod(s_phi, b), eval_bimod(s_psi, b)
                repro = dict(ring=R.spec, phi=to_text(phi), psi=to_text(psi), partition=list(phi.partition),
                             sigma=to_text(sigma), B=_bimod(b))
                run.check(eval_bimod(s_sum, b) == (x & y), "(sigma:phi+psi) = (sigma:phi) & (sigma:psi)", **repro)
                big = eval_bimod(s_meet, b).mask
                run.check(not (_subgroup_sum(x, y) & ~big).any(), "(sigma:phi&psi) >= sum", **repro)
    return run.report


def suite_tenspur(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("tenspur", cfg)
    cases = [(zmod(4), _small_bimodules(zmod(4), 4) + [bimodule_from_hom(reduction_hom(zmod(4), zmod(2)))]),
             (zmod(2), [bimodule_from_hom(diagonal_hom(zmod(2)))])]
    for R, bims in cases:
        ms = _small_modules(R, cfg.max_module_size, "right")
        per_pair, dropped = 6, 0
        for src, tgt in itertools.product(ms, repeat=2):
            if src.size == 1 or src.size > tgt.size:
                continue
            splits = []
            for mat in enumerate_homs(src, tgt):
                h = ModuleHom(src, tgt, mat, check=False)
                if h.is_injective and is_split_embedding(h)[0]:
                    splits.append(h)
            if len(splits) > per_pair:
                dropped += len(splits) - per_pair
                splits = [splits[i] for i in sorted(run.rng.sample(range(len(splits)), per_pair))]
            for h in splits:
                for b in bims:
                    hb, _, _ = tensor_map(h, b, _tensor_cached(src, b), _tensor_cached(tgt, b))
                    ok = hb.is_injective and is_split_embedding(hb)[0]
                    run.check(ok, "split survives tensoring", ring=R.spec, source=_mod(src), target=_mod(tgt),
                              matrix=h.matrix.tolist(), B=_bimod(b))
        if dropped:
            run.note(f"{R.name}: {dropped} split embeddings beyond {per_pair} per module pair not tensored")
    return run.report


def _act_table(x):
    """Element × ring-element action table."""
    mats = [x.act_matrix(r) for r in x.ring.elements()]
    c = x.coords
    return np.stack([x.encode(c @ np.asarray(mat).T) for mat in mats], axis=1)


def suite_tensor(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("tensor", cfg)
    for R in _rings(cfg, ("zmod4", "f2xf2", "ut2f2")):
        ms = _small_modules(R, cfg.max_module_size, "right")
        ls = _small_modules(R, cfg.max_module_size, "left")
        for m, l in itertools.product(ms, ls):
            if m.size * l.size > 64:
                continue
            T = _tensor_cached(m, l)
            t = T.table
            add = T.module.add_table
            ma, la = m.add_table, l.add_table
            ok1 = np.array_equal(t[ma.reshape(-1)].reshape(m.size, m.size, l.size),
                                 add[t[:, None, :], t[None, :, :]])
            ok2 = np.array_equal(t[:, la.reshape(-1)].reshape(m.size, l.size, l.size),
                                 add[t[:, :, None], t[:, None, :]])
            mact, lact = _act_table(m), _act_table(l)
            ok3 = all(np.array_equal(t[mact[:, r], :], t[:, lact[:, r]]) for r in R.elements())
            run.check(ok1 and ok2, "bilinear", ring=R.spec, M=_mod(m), L=_mod(l))
            run.check(ok3, "balanced", ring=R.spec, M=_mod(m), L=_mod(l))
    return run.report


def _length(m) -> int:
    """Composition length of a module over F2×F2 (every simple has two elements)."""
    return int(round(np.log2(m.size)))


def suite_cextens(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("cextens", cfg)
    f = diagonal_hom(zmod(2))
    S = f.target
    b = bimodule_from_hom(f)
    ms = _small_modules(f.source, 16, "right")
    products = [tensor(m, b).module for m in ms]
    for m, p in zip(ms, products):
        run.check(_length(p) % 2 == 0, "M⊗S has even length", M=_mod(m), length=_length(p))
    spec = tensor_extension(ms, f)
    US = default_universe(S, "right", 16)
    simples = [n for n in US if n.size == 2]
    run.check(len(simples) == 2, "two simple S-modules", count=len(simples))
    for n in simples:
        run.check(membership(n, spec), "simple summand lies in the tensor extension", N=_mod(n))
        run.check(_length(n) % 2 == 1, "simple has odd length", N=_mod(n))
        run.check(not any(is_isomorphic(n, p) for p in products), "simple is not of the form M⊗S", N=_mod(n))
    return run.report


def _canonical_map_bijective(m, l1, l2) -> bool:
    """M⊗(L1⊕L2) → (M⊗L1)⊕(M⊗L2) on pure tensors is a well-defined bijection."""
    ds = direct_sum([l1, l2])
    s = ds.module
    T = tensor(m, s)
    T1, T2 = tensor(m, l1), tensor(m, l2)
    if T.module.size != T1.module.size * T2.module.size:
        return False
    p1 = ds.projections[0].table
    p2 = ds.projections[1].table
    # class of a ⊗ (x1, x2) ↦ (class a⊗x1, class a⊗x2); must respect equality of classes both ways
    img = T1.table[:, p1] * T2.module.size + T2.table[:, p2]
    src = T.table
    pairs = {}
    for a, b in zip(src.ravel().tolist(), img.ravel().tolist()):
        if pairs.setdefault(a, b) != b:
            return False
    return len(set(pairs.values())) == len(pairs)


def suite_atomicity(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("atomicity", cfg)
    for R in _rings(cfg, ("zmod2", "zmod4")):
        bims = _small_bimodules(R, cfg.max_module_size)
        insts = run.limit(_sigma_instances(run, R, cfg, min(cfg.max_module_size, 4)), f"{R.name} instances")
        psi_fams = {n: list(formula_family(R, "right", n)) for n in range(1, cfg.tuple_len + 1)}
        gens = {}
        for m, tup, part, sigma in insts:
            gkey = (m.key, tup)
            if gkey not in gens:
                gens[gkey] = pp_type_generator(m, tup).formula
            phi = gens[gkey].with_partition(part)
            s_phi = sigma_colon_phi(sigma, phi)
            in_type = [psi.with_partition(part) for psi in psi_fams[len(tup)] if holds(m, psi, tup)]
            colons = [sigma_colon_phi(sigma, psi) for psi in in_type]
            for b in bims:
                top = eval_bimod(s_phi, b)
                ok = all(eval_bimod(c, b).issubset(top) for c in colons)
                run.check(ok, "generator is maximal", ring=R.spec, M=_mod(m), tuple=list(tup),
                          partition=list(part), sigma=to_text(sigma), B=_bimod(b))
        # relatgen: maximality transfers to bimodules in <B>
        for b in bims:
            gen_b = generated_subcategory([b.right_module()])
            for l in bims:
                if not membership(l.right_module(), gen_b):
                    continue
                for m, tup, part, sigma in insts[:: max(1, len(insts) // 50)]:
                    phi = gens[(m.key, tup)].with_partition(part)
                    top = eval_bimod(sigma_colon_phi(sigma, phi), l)
                    ok = all(eval_bimod(sigma_colon_phi(sigma, psi.with_partition(part)), l).issubset(top)
                             for psi in psi_fams[len(tup)] if holds(m, psi, tup))
                    run.check(ok, "maximality transfers to <B>", ring=R.spec, B=_bimod(b), L=_bimod(l), M=_mod(m),
                              tuple=list(tup), sigma=to_text(sigma))
        small = [x for x in _small_modules(R, 4, "left") if x.size > 1]
        for m in _small_modules(R, 4, "right"):
            for l1, l2 in itertools.combinations_with_replacement(small, 2):
                run.check(_canonical_map_bijective(m, l1, l2), "M⊗(L1⊕L2) = (M⊗L1)⊕(M⊗L2)", ring=R.spec,
                          M=_mod(m), L1=_mod(l1), L2=_mod(l2))
    return run.report


def _specs_for_lattice(R: Ring, U) -> list:
    specs = _test_specs(R, U)
    small = [m for m in U if 1 < m.size <= 8]
    for a, b in itertools.combinations(small[:4], 2):
        specs.append(generated_subcategory([a, b]))
    return specs


def suite_definable(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("definable", cfg)
    for R in _rings(cfg, ("zmod4", "zmod8")):
        U = default_universe(R, "right", cfg.universe_cap)
        specs = _specs_for_lattice(R, U)
        vecs = [tuple(membership(m, s) for m in U) for s in specs]
        for (i, a), (j, b) in itertools.combinations(enumerate(specs), 2):
            mv = [membership(m, meet(a, b)) for m in U]
            run.check(mv == [x and y for x, y in zip(vecs[i], vecs[j])], "meet = intersection", ring=R.spec,
                      specs=[a.label, b.label])
            jn = join([a, b], U)
            jv = [membership(m, jn) for m in U]
            run.check(all(z or not (x or y) for x, y, z in zip(vecs[i], vecs[j], jv)), "join contains inputs",
                      ring=R.spec, specs=[a.label, b.label])
            union = [m for m, x, y in zip(U, vecs[i], vecs[j]) if x or y]
            run.check(jn.keys == closed_pairs(union, R, "right").keys, "join pairs = closed pairs of union",
                      ring=R.spec, specs=[a.label, b.label])
            gens_a = [m for m, x in zip(U, vecs[i]) if x]
            gens_b = [m for m, y in zip(U, vecs[j]) if y]
            for m, z in zip(U, jv):
                fj = finite_join_membership(m, [gens_a, gens_b]) is not None
                run.check(fj == z, "finite join = pair-set join", ring=R.spec, specs=[a.label, b.label], M=_mod(m))
        for s, v in zip(specs, vecs):
            dd = dual_category(dual_category(s))
            run.check([membership(m, dd) for m in U] == list(v), "D^d^d = D", ring=R.spec, spec=s.label)
        # order reversal between D and its dual on the universes
        left_u = default_universe(R, "left", cfg.universe_cap)
        fam = list(formula_family(R, "right", 1))
        for s in specs:
            mem = members(s, U)
            dmem = members(dual_category(s), left_u)
            for phi, psi in itertools.product(fam, fam):
                a = all(evaluate(psi, m).issubset(evaluate(phi, m)) for m in mem)
                dphi, dpsi = dual(phi), dual(psi)
                b = all(evaluate(dphi, m).issubset(evaluate(dpsi, m)) for m in dmem)
                run.check(a == b, "psi <=_D phi iff Dphi <=_Dd Dpsi", ring=R.spec, spec=s.label, phi=to_text(phi),
                          psi=to_text(psi))
    for f in _surjections():
        R, S = f.source, f.target
        UR = default_universe(R, "right", cfg.universe_cap)
        US = default_universe(S, "right", cfg.universe_cap)
        trace = definable_trace(f, US)
        specs = _specs_for_lattice(R, UR)
        for s in specs:
            ext = direct_extension(f, s)
            for n in US:
                run.check(membership(n, ext) == membership(restrict_along(f, n), s), "direct extension law",
                          hom=f.spec, spec=s.label, N=_mod(n))
            back = restriction(f, ext, US)
            both = meet(s, trace)
            for m in UR:
                run.check(membership(m, back) == membership(m, both), "restriction of extension = D ∩ DefTr",
                          hom=f.spec, spec=s.label, M=_mod(m))
        for c in _specs_for_lattice(S, US):
            res = restriction(f, c, US)
            cmem = members(c, US)
            restricted = [restrict_along(f, n) for n in cmem]
            gen = generated_subcategory(restricted, R, "right")
            for n, nr in zip(cmem, restricted):
                run.check(membership(nr, res), "f^*C inside C|_R", hom=f.spec, spec=c.label, N=_mod(n))
            for m in UR:
                r = membership(m, res)
                run.check(r == membership(m, gen), "C|_R = <f^*C>", hom=f.spec, spec=c.label, M=_mod(m))
                oracle = split_embedding_into(m, restricted) is not None
                run.check(r == oracle, "C|_R = pure submodules of restrictions", hom=f.spec, spec=c.label,
                          M=_mod(m))
        # direct extension respects meets; and is injective on subcategories of the trace
        tr_mem = [membership(m, trace) for m in UR]
        inside = [s for s in specs if all(t or not membership(m, s) for m, t in zip(UR, tr_mem))]
        ext = {id(s): direct_extension(f, s) for s in specs}
        ext_mem = {id(s): [membership(n, ext[id(s)]) for n in US] for s in specs}
        for a, b in itertools.combinations(specs, 2):
            em, me = direct_extension(f, meet(a, b)), meet(ext[id(a)], ext[id(b)])
            lhs = [membership(n, em) for n in US]
            rhs = [membership(n, me) for n in US]
            run.check(lhs == rhs, "extension preserves meets", hom=f.spec, specs=[a.label, b.label])
        for a, b in itertools.combinations(inside, 2):
            if ext_mem[id(a)] == ext_mem[id(b)]:
                same = [membership(m, a) for m in UR] == [membership(m, b) for m in UR]
                run.check(same, "extension injective below the trace", hom=f.spec, specs=[a.label, b.label])
    return run.report


_EXPECTED_ZIEGLER = {"zmod4": [(2,), (4,)], "zmod8": [(2,), (4,), (8,)], "f2": [(2,)]}


def suite_ziegler(cfg: SuiteConfig) -> SuiteReport:
    run = _Run("ziegler", cfg)
    for name in cfg.rings or ("zmod4", "zmod8", "f2", "f2xf2"):
        R = _ring(name)
        pts = ziegler_points(R, cfg.universe_cap or 16).points
        for p in pts:
            run.check(indecomposable(p), "point is indecomposable", ring=R.spec, point=_mod(p))
        for p, q in itertools.combinations(pts, 2):
            run.check(not is_isomorphic(p, q), "points pairwise non-isomorphic", ring=R.spec, p=_mod(p), q=_mod(q))
        if name in _EXPECTED_ZIEGLER:
            got = sorted(p.elementary_divisors for p in pts)
            run.check(got == sorted(_EXPECTED_ZIEGLER[name]), "expected points", ring=R.spec, got=got)
        if name == "f2xf2":
            run.check(len(pts) == 2 and all(p.size == 2 for p in pts), "expected points", ring=R.spec,
                      got=[p.size for p in pts])
        U = default_universe(R, "right", 16)
        classes = [tuple(membership(m, generated_subcategory([p])) for m in U) for p in pts]
        run.check(len(set(classes)) == len(classes), "points generate distinct subcategories", ring=R.spec)
    return run.report


def suite_tenspp(cfg: SuiteConfig) -> SuiteReport:
    """tenspp_criterion against direct closure of σ/τ on M ⊗ B (D = Mod-R proxy)."""
    from .definable import tenspp_criterion
    run = _Run("tenspp", cfg)
    for R in _rings(cfg, ("zmod2", "zmod4", "zmod8")):
        bims = _small_bimodules(R, 8)
        U = default_universe(R, "right", 16)
        fam = list(formula_family(R, "right", 1))
        for sigma, tau in itertools.product(fam, fam):
            res = tenspp_criterion(sigma, tau, bims, arities=(1,))
            direct = all(evaluate(sigma, _tensor_cached(m, b).module).issubset(
                evaluate(tau, _tensor_cached(m, b).module)) for m in U for b in bims)
            run.check(res.holds == direct, "criterion = direct closure", ring=R.spec, sigma=to_text(sigma),
                      tau=to_text(tau), criterion=res.holds, direct=direct)
    return run.report


SUITES = {
    "duality": suite_duality,
    "herzog": suite_herzog,
    "presta": suite_presta,
    "sigmaphi": suite_sigmaphi,
    "fstar": suite_fstar,
    "epi": suite_epi,
    "elem4": suite_elem4,
    "sigmaphiprop": suite_sigmaphiprop,
    "tenspur": suite_tenspur,
    "tensor": suite_tensor,
    "atomicity": suite_atomicity,
    "cextens": suite_cextens,
    "definable": suite_definable,
    "ziegler": suite_ziegler,
    "tenspp": suite_tenspp,
}


def run_suite(name: str, cfg: SuiteConfig | None = None) -> SuiteReport:
    if name not in SUITES:
        raise SpecError(f"unknown suite '{name}'; choose from {', '.join(sorted(SUITES))}")
    cfg = cfg or SuiteConfig()
    t0 = time.perf_counter()
    try:
        report = SUITES[name](cfg)
    except CapExceeded as exc:
        report = SuiteReport(name, cfg.to_json(), skipped=1, notes=[f"stopped: {exc}"])
    report.runtime = time.perf_counter() - t0
    return report
