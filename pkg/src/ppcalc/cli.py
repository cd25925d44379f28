"""Command-line interface: ``ppcalc <command> [options]``.

Rings, modules, homs and subcategory specs are given inline (shorthand name
or JSON text) or as a path to a JSON file.  Exit codes: 0 success, 1 failed
verification, 2 usage or input error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .dsl import bimod_to_text, parse, to_text
from .errors import CapExceeded, PpCalcError, SpecError
from .formulas import conj, dual, free_realization, psum, pushforward, sigma_colon_phi
from .modules import (DEFAULT_MAX_TENSOR_GENERATORS, Bimodule, FiniteModule, ModuleHom, bimodule_from_commutative,
                      bimodule_from_hom,
                      is_split_embedding, module_from_spec, module_to_spec, tensor)
from .rings import ring_from_spec, hom_from_spec

CONFIG_KEYS = ("max_module_size", "max_tensor_generators", "seed", "tuple_len", "family_caps", "universe_cap")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


# -- input helpers ---------------------------------------------------------------------

def _read(text: str):
    """Inline JSON/shorthand, or the contents of a file when ``text`` names one."""
    if text.startswith("@"):
        text = text[1:]
        with open(text) as fh:
            return fh.read()
    if not text.lstrip().startswith(("{", "[")) and os.path.isfile(text):
        with open(text) as fh:
            return fh.read()
    return text


def _json(text: str):
    raw = _read(text)
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from exc


def _ring(args, attr="ring"):
    text = getattr(args, attr)
    if text is None:
        raise SpecError(f"--{attr.replace('_', '-')} is required")
    return ring_from_spec(_read(text).strip())


def _check_size(m, args):
    cap = args.max_module_size
    if cap is not None and m.size > cap:
        raise CapExceeded("module size", m.size, cap)
    return m


def _module(text: str, ring, args):
    spec = _json(text)
    if isinstance(spec, dict) and ring is not None and "ring" not in spec and "left_ring" not in spec:
        if "left_act" in spec or "right_act" in spec:
            spec = dict(spec, left_ring=ring.spec, right_ring=ring.spec)
        if getattr(args, "side", None) and "side" not in spec:
            spec = dict(spec, side=args.side)
    return _check_size(module_from_spec(spec, ring), args)


def _formula(text: str, ring, args, partition=None):
    side = getattr(args, "side", None) or "right"
    return parse(text, ring, side, partition=partition)


def _tuple(text: str | None) -> tuple:
    if text is None or not text.strip():
        return ()
    try:
        return tuple(int(x) for x in text.replace("(", "").replace(")", "").split(","))
    except ValueError as exc:
        raise SpecError(f"bad tuple {text!r}") from exc


def _ints(text: str | None):
    if text is None:
        return None
    return tuple(int(x) for x in text.split(",") if x.strip())


def _emit(args, text: str, data) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def _set_text(sol) -> str:
    if sol.n == 1:
        return "{" + ",".join(str(t[0]) for t in sol) + "}"
    return "{" + ",".join("(" + ",".join(map(str, t)) + ")" for t in sol) + "}"


def _formula_json(phi) -> dict:
    return {"text": to_text(phi), "matrix": phi.to_json()}


# -- commands ---------------------------------------------------------------------------

def cmd_eval(args):
    from .semantics import evaluate

    R = _ring(args)
    m = _module(args.module, R, args)
    phi = _formula(args.formula, R, args)
    sol = evaluate(phi, m)
    _emit(args, _set_text(sol), {"result": sol.to_json(), "size": len(sol), "formula": to_text(phi)})
    return 0


def cmd_holds(args):
    from .semantics import holds

    R = _ring(args)
    m = _module(args.module, R, args)
    phi = _formula(args.formula, R, args)
    ok = holds(m, phi, _tuple(args.tuple))
    _emit(args, "true" if ok else "false", {"result": ok})
    return 0


def cmd_dual(args):
    R = _ring(args)
    d = dual(_formula(args.formula, R, args))
    _emit(args, to_text(d), {"result": _formula_json(d)})
    return 0


def _two(args, op):
    if len(args.formula) != 2:
        raise SpecError("give exactly two --formula arguments")
    R = _ring(args)
    phi, psi = (_formula(f, R, args) for f in args.formula)
    out = op(phi, psi)
    _emit(args, to_text(out), {"result": _formula_json(out)})
    return 0


def cmd_conj(args):
    return _two(args, conj)


def cmd_sum(args):
    return _two(args, psum)


def cmd_push(args):
    f = hom_from_spec(_read(args.hom))
    phi = _formula(args.formula, f.source, args)
    out = pushforward(f, phi)
    _emit(args, to_text(out), {"result": _formula_json(out)})
    return 0


def cmd_leq(args):
    from .semantics import leq_semantic, leq_syntactic

    R = _ring(args)
    lower, upper = _formula(args.lower, R, args), _formula(args.upper, R, args)
    data = {}
    verdicts = []
    if args.mode in ("syntactic", "both"):
        cert = leq_syntactic(lower, upper)
        data["witness"] = cert.to_json()
        verdicts.append(cert.implies)
    if args.mode in ("semantic", "both"):
        ok, bad = leq_semantic(lower, upper)
        sem = {"result": ok, "family": "validation"}
        if bad is not None:
            sem["module"] = module_to_spec(bad[0])
            sem["tuple"] = list(bad[1])
        data["semantic"] = sem
        verdicts.append(ok)
    known = [v for v in verdicts if v is not None]
    result = None if not known else known[0]
    if args.mode == "both" and len(known) == 2 and known[0] != known[1]:
        data["disagreement"] = True
    data["result"] = result
    text = {True: "true", False: "false", None: "unknown"}[result]
    if not args.json and "witness" in data:
        text += "\n" + json.dumps(data["witness"], sort_keys=True)
    _emit(args, text, data)
    return 0


def cmd_pptype(args):
    from .semantics import pp_type_generator

    R = _ring(args)
    m = _module(args.module, R, args)
    gen = pp_type_generator(m, _tuple(args.tuple))
    _emit(args, to_text(gen.formula), {"result": _formula_json(gen.formula), "tuple": list(gen.tuple)})
    return 0


def cmd_freereal(args):
    R = _ring(args)
    fr = free_realization(_formula(args.formula, R, args))
    data = {"generators": fr.g, "theta": [list(r) for r in fr.theta], "H": [list(r) for r in fr.H]}
    text = f"generators {fr.g}, relations {len(fr.theta[0]) if fr.theta else 0}"
    if fr.module is not None:
        data["module"] = module_to_spec(fr.module)
        data["tuple"] = list(fr.tuple)
        text += f"\nmodule {fr.module.label} (order {fr.module.size}), tuple {tuple(fr.tuple)}"
    _emit(args, text, data)
    return 0


def cmd_sigmaphi(args):
    R = _ring(args)
    S = ring_from_spec(_read(args.sigma_ring).strip()) if args.sigma_ring else R
    sigma = parse(args.sigma, S, "right")
    phi = parse(args.formula, R, "right", partition=_ints(args.partition) or None)
    if args.partition is None and len(phi.partition) != sigma.n:
        phi = phi.with_partition((1,) * phi.n) if phi.n == sigma.n else phi
    beta = sigma_colon_phi(sigma, phi)
    _emit(args, bimod_to_text(beta), {"result": bimod_to_text(beta), "n": beta.n, "t": beta.t,
                                      "equations": [[list(t) for t in eq] for eq in beta.equations]})
    return 0


def cmd_tensor(args):
    R = _ring(args)
    m = _module(args.module, R, args)
    if args.hom:
        x = bimodule_from_hom(hom_from_spec(_read(args.hom)))
    elif args.bimodule:
        x = _module(args.bimodule, R, args)
    else:
        raise SpecError("give --bimodule or --hom")
    if isinstance(x, FiniteModule) and x.side != "left":
        if not R.is_commutative:
            raise SpecError("the second factor must be a left module or a bimodule")
        x = bimodule_from_commutative(x)
    cap = args.max_tensor_generators or DEFAULT_MAX_TENSOR_GENERATORS
    res = tensor(m, x, max_generators=cap)
    out = res.module
    data = {"size": out.size, "elementary_divisors": list(out.elementary_divisors), "module": module_to_spec(out)}
    if args.table:
        data["table"] = res.table.tolist()
    _emit(args, f"order {out.size}, elementary divisors {list(out.elementary_divisors)}", data)
    return 0


def cmd_split(args):
    R = _ring(args)
    src = _module(args.source, R, args)
    dst = _module(args.target, R, args)
    mat = _json(args.map)
    h = ModuleHom(src, dst, mat)
    ok, retraction = is_split_embedding(h)
    data = {"result": ok}
    if ok:
        data["retraction"] = retraction.matrix.tolist()
    _emit(args, "split" if ok else "not split", data)
    return 0


# -- definable subcategories ---------------------------------------------------------------

def _spec(text: str, ring=None, side=None):
    from .definable import PpPair, PpPairSet

    data = _json(text)
    R = ring_from_spec(data["ring"]) if "ring" in data else ring
    if R is None:
        raise SpecError("subcategory spec needs a ring")
    side = data.get("side", side or "right")
    pairs = []
    for p in data.get("pairs", []):
        n = p.get("n")
        top = parse(p["top"], R, side)
        bot = parse(p["bottom"], R, side)
        n = max(top.n, bot.n, 1) if n is None else int(n)
        pairs.append(PpPair(parse(p["top"], R, side, n), parse(p["bottom"], R, side, n)))
    return PpPairSet(R, side, pairs, label=data.get("label", ""))


def _universe(args, ring, side):
    from .definable import Universe, default_universe

    if args.universe:
        mods = [module_from_spec(s, ring) for s in _json(args.universe)]
        return Universe(ring, side, [m for m in mods if m.side == side])
    return default_universe(ring, side, args.universe_cap)


def _spec_report(spec, universe, extra=None):
    from .definable import members

    mem = members(spec, universe)
    data = {"spec": spec.to_json(), "members": [module_to_spec(m) for m in mem],
            "member_labels": [m.label for m in mem], "universe_size": len(universe)}
    R = spec.ring
    if R.is_finite and not R.forced:
        data["scope"] = "relative to universe"
    if extra:
        data.update(extra)
    text = f"{len(spec.pairs)} pairs; members ({len(mem)} of {len(universe)}): " + ", ".join(m.label for m in mem)
    return text, data


def cmd_defsub(args):
    from . import definable as dfn

    arities = _ints(args.family_caps) or dfn.DEFAULT_ARITIES
    op = args.op
    if op == "ziegler":
        R = _ring(args)
        pts = dfn.ziegler_points(R, args.universe_cap or 16, args.side or "right")
        return _ziegler_out(args, pts)
    if op in ("extend", "restrict"):
        f = hom_from_spec(_read(args.hom))
        spec = _spec(args.spec[0], f.source, args.side)
        if op == "extend":
            out = dfn.direct_extension(f, spec)
        else:
            spec = _spec(args.spec[0], f.target, args.side)
            uni_src = _universe(args, f.source, spec.side)
            uni_tgt = dfn.default_universe(f.target, spec.side, args.universe_cap)
            out = dfn.restriction(f, spec, uni_tgt, arities)
            text, data = _spec_report(out, uni_src)
            _emit(args, text, data)
            return 0
        text, data = _spec_report(out, _universe(args, out.ring, out.side))
        _emit(args, text, data)
        return 0
    if op == "tensor-extend":
        if not args.generators:
            raise SpecError("tensor-extend needs --generators")
        if args.hom:
            b = bimodule_from_hom(hom_from_spec(_read(args.hom)))
        elif args.bimodule:
            b = module_from_spec(_json(args.bimodule), _ring(args) if args.ring else None)
        else:
            raise SpecError("tensor-extend needs --hom or --bimodule")
        if not isinstance(b, Bimodule):
            raise SpecError("--bimodule must describe a bimodule")
        gens = [module_from_spec(s, b.left_ring) for s in _json(args.generators)]
        out = dfn.tensor_extension(gens, b, arities=arities)
        text, data = _spec_report(out, _universe(args, out.ring, "right"))
        _emit(args, text, data)
        return 0
    ring = _ring(args) if args.ring else None
    if op == "generate":
        R = ring
        gens = [module_from_spec(s, R) for s in _json(args.generators)]
        out = dfn.generated_subcategory(gens, R, args.side or "right", arities)
        text, data = _spec_report(out, _universe(args, out.ring, out.side))
        _emit(args, text, data)
        return 0
    if not args.spec:
        raise SpecError(f"defsub {op} needs --spec")
    specs = [_spec(s, ring, args.side) for s in args.spec]
    R, side = specs[0].ring, specs[0].side
    if op == "membership":
        if not args.module:
            raise SpecError("membership needs --module")
        m = module_from_spec(_json(args.module), R)
        ok = dfn.membership(m, specs[0])
        _emit(args, "true" if ok else "false", {"result": ok})
        return 0
    if op == "meet":
        out = dfn.meet(*specs)
        text, data = _spec_report(out, _universe(args, R, side))
    elif op == "join":
        uni = _universe(args, R, side)
        out = dfn.join(specs, uni, arities)
        text, data = _spec_report(out, uni)
    elif op == "dual":
        out = dfn.dual_category(specs[0])
        text, data = _spec_report(out, _universe(args, out.ring, out.side))
    else:
        raise SpecError(f"unknown defsub operation {op!r}")
    _emit(args, text, data)
    return 0


def _ziegler_out(args, pts):
    data = {"points": [module_to_spec(p) for p in pts.points], "labels": [p.label for p in pts.points],
            "sizes": [p.size for p in pts.points]}
    R = pts.ring
    if R.is_finite and not R.forced:
        data["scope"] = "relative to universe"
    text = f"{len(pts.points)} points: " + ", ".join(f"{p.label} (order {p.size})" for p in pts.points)
    _emit(args, text, data)
    return 0


def cmd_ziegler(args):
    from .definable import ziegler_points

    R = _ring(args)
    return _ziegler_out(args, ziegler_points(R, args.max_module_size or 16, args.side or "right"))


def cmd_verify(args):
    from .verify import SuiteConfig, run_suite

    rings = tuple(_read(r).strip() for r in args.ring) if args.ring else None
    cfg = SuiteConfig(rings=rings, max_module_size=args.max_module_size or 8, tuple_len=args.tuple_len or 2,
                      universe_cap=args.universe_cap, seed=args.seed or 0, budget=args.budget)
    report = run_suite(args.suite, cfg)
    if args.json:
        print(report.dumps())
    else:
        print(report.summary())
        for f in report.failures[:20]:
            print("  FAIL", json.dumps(f, sort_keys=True))
    return 0 if report.passed else 1


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--config", help="JSON file of default option values (flags win)")
    common.add_argument("--side", choices=("left", "right"))
    common.add_argument("--max-module-size", type=int)
    common.add_argument("--max-tensor-generators", type=int)

    p = _Parser(prog="ppcalc", description="pp formula calculus over rings")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = cmd("eval", cmd_eval, "solution set of a formula in a module")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--module", required=True)
    sp.add_argument("--formula", required=True)

    sp = cmd("holds", cmd_holds, "does a tuple satisfy a formula")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--module", required=True)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--tuple", required=True, help="comma-separated element labels")

    sp = cmd("dual", cmd_dual, "elementary dual of a formula")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--formula", required=True)

    for name, func in (("conj", cmd_conj), ("sum", cmd_sum)):
        sp = cmd(name, func, f"{'conjunction' if name == 'conj' else 'sum'} of two formulas")
        sp.add_argument("--ring", required=True)
        sp.add_argument("--formula", action="append", required=True)

    sp = cmd("push", cmd_push, "push a formula forward along a ring hom")
    sp.add_argument("--hom", required=True)
    sp.add_argument("--formula", required=True)

    sp = cmd("leq", cmd_leq, "decide lower ≤ upper")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--lower", required=True)
    sp.add_argument("--upper", required=True)
    sp.add_argument("--mode", choices=("syntactic", "semantic", "both"), default="syntactic")

    sp = cmd("pptype", cmd_pptype, "formula generating the pp-type of a tuple")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--module", required=True)
    sp.add_argument("--tuple", default="")

    sp = cmd("freereal", cmd_freereal, "free realization of a formula")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--formula", required=True)

    sp = cmd("sigmaphi", cmd_sigmaphi, "the bimodule formula (sigma:phi)")
    sp.add_argument("--ring", required=True, help="ring of phi")
    sp.add_argument("--sigma-ring", help="ring of sigma (defaults to --ring)")
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--partition", help="block sizes of phi's free variables, e.g. 1,1")

    sp = cmd("tensor", cmd_tensor, "tensor product M ⊗ X")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--module", required=True)
    sp.add_argument("--bimodule")
    sp.add_argument("--hom", help="tensor with the bimodule of a ring hom")
    sp.add_argument("--table", action="store_true", help="include the pure-tensor table")

    sp = cmd("split", cmd_split, "does an embedding split")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--source", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--map", required=True, help="JSON matrix on coordinates")

    sp = cmd("defsub", cmd_defsub, "definable subcategory operations")
    sp.add_argument("op", choices=("membership", "meet", "join", "dual", "extend", "restrict",
                                   "tensor-extend", "ziegler", "generate"))
    sp.add_argument("--ring")
    sp.add_argument("--spec", action="append", default=[])
    sp.add_argument("--module")
    sp.add_argument("--universe", help="JSON list of module specs")
    sp.add_argument("--universe-cap", type=int)
    sp.add_argument("--family-caps", help="arities of the bounded formula family, e.g. 1,2")
    sp.add_argument("--hom")
    sp.add_argument("--bimodule")
    sp.add_argument("--generators", help="JSON list of module specs")

    sp = cmd("ziegler", cmd_ziegler, "indecomposable finite modules up to a size")
    sp.add_argument("--ring", required=True)

    sp = cmd("verify", cmd_verify, "run a verification suite")
    sp.add_argument("suite")
    sp.add_argument("--ring", action="append")
    sp.add_argument("--tuple-len", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--universe-cap", type=int)
    return p


def _apply_config(args) -> None:
    if not args.config:
        return
    cfg = _json(args.config)
    if not isinstance(cfg, dict):
        raise SpecError("config file must hold a JSON object")
    for key, value in cfg.items():
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise SpecError(f"unknown config key {key!r}")
        if getattr(args, key, None) is None:
            setattr(args, key, value)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_config(args)
        return args.func(args)
    except PpCalcError as exc:
        print(f"ppcalc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, KeyError, ValueError, TypeError) as exc:
        print(f"ppcalc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
