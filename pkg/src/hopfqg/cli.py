"""Command-line front end.

Exit codes: 0 every identity passed, 1 some identity failed, 2 bad input
(unreadable file, malformed JSON, schema error), 3 a construction's
precondition does not hold.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Optional

from .exactlin import DimensionError, LinearMap
from .hopfq import (
    AxiomError,
    HopfCoquasigroup,
    HopfQuasigroup,
    HqgAutomorphism,
    antipode_properties,
    automorphism_from_loop_perm,
    check_automorphism,
    check_coquasigroup,
    check_hopf_quasigroup,
    dualize,
    hopf_from_json,
    hopf_predicates,
    inner_automorphism_perm,
    loop_algebra,
)
from .loops import LoopError, builtin_loop, classify, loop_from_json
from .report import Report
from .ydq import (
    SUITES,
    AmbientMismatch,
    GElement,
    PreconditionError,
    check_compat,
    check_module,
    make_canonical,
    module_from_json,
    sample_morphism_pairs,
    unit_object,
    verify_t_category,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


class InputError(Exception):
    """Anything wrong with user-supplied files or arguments."""


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno} "
                         f"(offset {exc.pos}): {exc.msg}") from exc


# -- ambient ----------------------------------------------------------------------

class Ambient:
    """A Hopf quasigroup plus, when it came from a loop, that loop."""

    def __init__(self, H, loop=None, label: str = ""):
        self.H, self.loop, self.label = H, loop, label


def _ambient_from_data(data, label: str, *, check: bool = True) -> Ambient:
    if not isinstance(data, dict):
        raise InputError(f"{label}: expected a JSON object")
    if "table" in data:
        L = loop_from_json(data)
        return Ambient(loop_algebra(L), L, label)
    if "mult" in data:
        return Ambient(hopf_from_json(data, check=check), None, label)
    raise InputError(f"{label}: neither a loop file ('table') nor a structure-constant file ('mult')")


def load_ambient(path: Optional[str], builtin: Optional[str], *, check: bool = True) -> Ambient:
    if builtin and path:
        raise InputError("give either a file or --builtin, not both")
    if builtin:
        L = builtin_loop(builtin)
        return Ambient(loop_algebra(L), L, L.name or builtin)
    if not path:
        raise InputError("no input: give a file or --builtin NAME")
    return _ambient_from_data(read_json(path), str(path), check=check)


def parse_automorphism(spec, amb: Ambient, base: Path = Path("."), label: Optional[str] = None) -> HqgAutomorphism:
    """``"id"``, ``{"inner": g}``, ``{"loop_perm": [...]}``, ``{"matrix": rows}`` or ``{"file": path}``.

    On the command line the same forms are written ``id``, ``inner:g``,
    ``perm:p0,p1,...`` and ``file:path``.
    """
    n = amb.H.dim
    if isinstance(spec, str):
        kind, _, arg = spec.partition(":")
        if kind == "id" and not arg:
            spec = {"identity": True}
        elif kind == "inner":
            spec = {"inner": _int(arg, spec)}
        elif kind == "perm":
            spec = {"loop_perm": [_int(x, spec) for x in arg.split(",")]}
        elif kind == "file":
            spec = {"file": arg}
        else:
            raise InputError(f"cannot parse automorphism {spec!r}")
    if not isinstance(spec, dict) or len(spec) != 1:
        raise InputError(f"automorphism spec must have exactly one key, got {spec!r}")
    (kind, arg), = spec.items()
    if kind == "identity":
        return HqgAutomorphism.identity(n)
    if kind in ("inner", "loop_perm"):
        if amb.loop is None:
            raise InputError(f"{kind!r} automorphisms need a loop ambient")
        perm = inner_automorphism_perm(amb.loop, arg) if kind == "inner" else arg
        if kind == "loop_perm" and sorted(perm) != list(range(n)):
            raise InputError(f"loop_perm {perm} is not a permutation of 0..{n - 1}")
        return automorphism_from_loop_perm(amb.loop, perm, label or f"{kind}:{arg}")
    if kind == "matrix":
        return HqgAutomorphism(LinearMap(arg, dom=n), label=label)
    if kind == "file":
        return HqgAutomorphism(LinearMap(read_json(base / arg), dom=n), label=label or arg)
    raise InputError(f"unknown automorphism kind {kind!r}")


def _int(text: str, ctx: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InputError(f"expected an integer in {ctx!r}, got {text!r}") from None


# -- commands -------------------------------------------------------------------------

def cmd_check_loop(args) -> Report:
    if args.builtin:
        L = builtin_loop(args.builtin)
    elif args.path:
        L = loop_from_json(read_json(args.path))
    else:
        raise InputError("no input: give a loop file or --builtin NAME")
    rep = Report("check_loop")
    rep.add("latin square with two-sided identity", True, detail=f"order {L.size}")
    rep.info["loop"] = L.name or str(args.path)
    rep.info.update(classify(L).as_dict())
    return rep


def cmd_check_hopf(args) -> Report:
    amb = load_ambient(args.path, args.builtin, check=False)
    H = amb.H
    rep = Report("check_hopf")
    rep.info["ambient"] = amb.label
    if args.dual:
        if isinstance(H, HopfCoquasigroup):
            raise InputError("--dual expects a Hopf quasigroup input")
        C = dualize(H, check=False)
        rep.merge(check_coquasigroup(C, optional_flags=False), "coquasigroup")
        flags = check_coquasigroup(C, optional_flags=True)
        rep.info["co-flexible"] = flags["co-flexible"].passed
        rep.info["co-moufang"] = flags["co-moufang"].passed
        return rep
    if isinstance(H, HopfCoquasigroup):
        rep.merge(check_coquasigroup(H, optional_flags=False), "coquasigroup")
        return rep
    rep.merge(check_hopf_quasigroup(H), "axioms")
    rep.merge(antipode_properties(H), "antipode")
    flags = hopf_predicates(H)
    rep.info.update(flags.as_dict())
    if amb.loop is not None:
        rep.info["associative"] = classify(amb.loop).is_associative
    return rep


def cmd_check_aut(args) -> Report:
    amb = load_ambient(args.path, args.builtin)
    rep = Report("check_aut")
    rep.info["ambient"] = amb.label
    for i, spec in enumerate(args.aut):
        try:
            a = parse_automorphism(spec, amb)
        except LoopError as exc:
            rep.add(f"{spec}: loop automorphism", False, {"error": str(exc)})
            continue
        rep.merge(check_automorphism(amb.H, a.matrix), spec)
    return rep


def cmd_build_ydq(args) -> Report:
    amb = load_ambient(args.path, args.builtin)
    alpha = parse_automorphism(args.alpha, amb, label=args.alpha)
    beta = parse_automorphism(args.beta, amb, label=args.beta)
    for a, which in ((alpha, "alpha"), (beta, "beta")):
        r = check_automorphism(amb.H, a.matrix)
        if not r.passed:
            raise PreconditionError(f"{which} is not a Hopf quasigroup automorphism",
                                    {"failed": [e.name for e in r.failures]})
    M = make_canonical(amb.H, alpha, beta, name="canonical")
    rep = Report("build_ydq")
    rep.info["ambient"] = amb.label
    rep.info["mdim"] = M.mdim
    rep.merge(check_module(M))
    cr = check_compat(M)
    rep.info["compat"] = {"coaction_form": cr.coaction_form, "exchange_form": cr.exchange_form}
    if args.out:
        Path(args.out).write_text(json.dumps(M.to_json(), sort_keys=True) + "\n")
    return rep


def _load_config(path: str):
    cfg = read_json(path)
    if not isinstance(cfg, dict):
        raise InputError(f"{path}: config must be a JSON object")
    for key in ("ambient", "modules"):
        if key not in cfg:
            raise InputError(f"{path}: config is missing {key!r}")
    return cfg


def cmd_verify_tcategory(args) -> Report:
    cfg = _load_config(args.config)
    base = Path(args.config).resolve().parent
    amb_spec = cfg["ambient"]
    if not isinstance(amb_spec, dict):
        raise InputError("'ambient' must be an object")
    if "builtin" in amb_spec:
        amb = load_ambient(None, amb_spec["builtin"])
    elif "file" in amb_spec:
        amb = load_ambient(str(base / amb_spec["file"]), None)
    else:
        raise InputError("'ambient' needs 'builtin' or 'file'")
    H = amb.H
    if not isinstance(H, HopfQuasigroup):
        raise InputError("the ambient must be a Hopf quasigroup")

    auts = {"id": HqgAutomorphism.identity(H.dim)}
    for name, spec in cfg.get("automorphisms", {}).items():
        auts[name] = parse_automorphism(spec, amb, base, label=name)

    def aut(name):
        if name not in auts:
            raise InputError(f"unknown automorphism {name!r}")
        return auts[name]

    elements = {"e": GElement.identity(H.dim)}
    for name, pair in cfg.get("elements", {}).items():
        if not (isinstance(pair, list) and len(pair) == 2):
            raise InputError(f"element {name!r} must be [alpha, beta]")
        elements[name] = GElement(aut(pair[0]), aut(pair[1]))

    modules, names = [], []
    for i, spec in enumerate(cfg["modules"]):
        name = spec.get("name", f"M{i}")
        if "canonical" in spec:
            a, b = spec["canonical"]
            M = make_canonical(H, aut(a), aut(b), name=name)
        elif spec.get("unit"):
            M = unit_object(H)
        elif "file" in spec:
            M = module_from_json(H, read_json(base / spec["file"]), name=name)
        else:
            raise InputError(f"module {name!r} needs 'canonical', 'unit' or 'file'")
        modules.append(M)
        names.append(name)

    gen_names = cfg.get("gens", [])
    for g in gen_names:
        if g not in elements:
            raise InputError(f"unknown element {g!r} in 'gens'")
    gens = [elements[g] for g in gen_names]

    max_dim = args.max_dim if args.max_dim is not None else cfg.get("max_dim", 16)
    morph_cfg = cfg.get("morphisms", {})
    seed = args.seed if args.seed is not None else morph_cfg.get("seed", 0)
    count = morph_cfg.get("count", 0)
    morphisms = sample_morphism_pairs(modules, count, random.Random(seed), max_dim=max_dim)

    suites = cfg.get("suites")
    if suites is not None and not set(suites) <= set(SUITES):
        raise InputError(f"unknown suites {sorted(set(suites) - set(SUITES))}; choose from {list(SUITES)}")
    rep = verify_t_category(H, modules, gens, morphisms, triples=cfg.get("triples", True),
                            strict=cfg.get("strict", False), max_dim=max_dim, names=names,
                            gen_names=gen_names, suites=suites)
    rep.info.update({
        "ambient": amb.label,
        "modules": {nm: M.mdim for nm, M in zip(names, modules)},
        "gens": gen_names,
        "morphism_pairs": len(morphisms),
        "seed": seed,
        "max_dim": max_dim,
    })
    return rep


# -- entry point ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopfqg", description="Exact verification of Hopf quasigroups "
                                "and twisted Yetter-Drinfeld quasimodules.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, ambient=True):
        if ambient:
            sp.add_argument("path", nargs="?", help="loop or structure-constant JSON file")
            sp.add_argument("--builtin", help="cyclic(n), s3 or octonion16")
        sp.add_argument("--json", metavar="OUT", help="write the JSON report here ('-' for stdout)")
        sp.add_argument("--quiet", action="store_true", help="suppress the text report")

    sp = sub.add_parser("check-loop", help="validate and classify a loop")
    common(sp)
    sp.set_defaults(func=cmd_check_loop)

    sp = sub.add_parser("check-hopf", help="Hopf quasigroup axioms (or coquasigroup with --dual)")
    common(sp)
    sp.add_argument("--dual", action="store_true", help="check the dual Hopf coquasigroup instead")
    sp.set_defaults(func=cmd_check_hopf)

    sp = sub.add_parser("check-aut", help="check Hopf quasigroup automorphisms")
    common(sp)
    sp.add_argument("--aut", action="append", required=True,
                    help="id, inner:g, perm:p0,p1,... or file:path (repeatable)")
    sp.set_defaults(func=cmd_check_aut)

    sp = sub.add_parser("build-ydq", help="build the canonical module H in component (alpha, beta)")
    common(sp)
    sp.add_argument("--alpha", default="id")
    sp.add_argument("--beta", default="id")
    sp.add_argument("--out", help="write the module file here")
    sp.set_defaults(func=cmd_build_ydq)

    sp = sub.add_parser("verify-tcategory", help="run the braided crossed category suite from a config")
    sp.add_argument("config")
    common(sp, ambient=False)
    sp.add_argument("--max-dim", type=int, default=None, help="skip triple checks above this module dimension (16)")
    sp.add_argument("--seed", type=int, default=None, help="seed for sampled morphisms")
    sp.set_defaults(func=cmd_verify_tcategory)
    return p


def _emit(rep: Report, args) -> None:
    if not args.quiet:
        print(rep.render())
    if args.json == "-":
        sys.stdout.write(rep.dumps())
    elif args.json:
        Path(args.json).write_text(rep.dumps())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        if exc.witness:
            print(f"witness: {json.dumps(exc.witness, sort_keys=True)}", file=sys.stderr)
        return EXIT_PRECONDITION
    except AxiomError as exc:
        rep = Report(args.command)
        rep.merge(exc.report)
        _emit(rep, args)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (LoopError, DimensionError, AmbientMismatch, ValueError, KeyError, TypeError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(rep, args)
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
