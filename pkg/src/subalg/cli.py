"""``sa``: command-line front end.

Exit codes: 0 success or the property holds, 1 the property fails (or nothing was found),
2 bad input or usage.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .constructions import (FilterSpec, dilate, generate_subalgebra, neat_reduct, pad_algebra, reduced_product,
                            reduct, representation_via_Z)
from .core import FnAlgebra, as_finite_sa, dimension_set, dimset, full_fsa, zero_set
from .errors import CapacityError, FormatError, IntegrityError, PreconditionError, UsageError
from .io import dumps, dumps_map, load, load_sa
from .predicates import DEFAULT_MAX_VIOLATIONS, check_axioms, is_distinguished, is_strongly_distinguished
from .search import DEFAULT_BUDGET, find_embedding, find_neat_embedding, is_representable_up_to
from .substitution import check_subst_laws, gamma_hom, is_gamma_homomorphism, subst

OK, NEGATIVE, BAD_INPUT = 0, 1, 2


def id_list(text):
    """``"0,2,3"`` -> ``[0, 2, 3]``; the empty string is the empty list."""
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def dim_base(text):
    """``"2x3"`` -> ``(2, 3)``."""
    try:
        a, u = text.lower().split("x")
        return int(a), int(u)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected DIMxBASE such as 2x3, got {text!r}") from None


def _render_text(value, indent=0):
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in
                                                        (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(value, list):
        if all(isinstance(v, dict) for v in value):
            return "\n\n".join(_render_text(v, indent) for v in value)
        return "\n".join(f"{pad}- {json.dumps(v)}" for v in value)
    return f"{pad}{json.dumps(value)}"


def emit(args, value):
    text = json.dumps(value, indent=2) if args.format == "json" else _render_text(value)
    print(text)


def emit_algebra(args, algebra, mapping):
    text = dumps(algebra)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.map:
        Path(args.map).write_text(dumps_map(mapping), encoding="utf-8")
    return OK


# -- commands ------------------------------------------------------------------------------------

def cmd_check(args):
    A = load_sa(args.file)
    bad = check_axioms(A, max_violations=args.max_violations)
    if args.format == "json":
        emit(args, {"sa": not bad, "violations": [v.to_json() for v in bad]})
    else:
        print("SA" if not bad else f"{len(bad)} violation(s)")
        for v in bad:
            print(v)
    return OK if not bad else NEGATIVE


def cmd_delta(args):
    A = load_sa(args.file)
    ids = args.ids if args.ids is not None else range(A.size)
    for x in ids:
        if not 0 <= x < A.size:
            raise UsageError(f"element {x} out of range (size {A.size})")
    emit(args, {"delta": {str(x): sorted(dimension_set(A, x)) for x in ids}})
    return OK


def cmd_zero_set(args):
    A = load_sa(args.file)
    gamma = dimset(args.gamma, A.dimension)
    emit(args, {"gamma": sorted(gamma), "zero_set": sorted(zero_set(A, gamma))})
    return OK


def cmd_subst(args):
    A = load_sa(args.file)
    emit(args, {"result": subst(A, tuple(args.s), args.gamma, args.a)})
    return OK


def cmd_laws(args):
    A = load_sa(args.file)
    reports = check_subst_laws(A, budget=args.budget, seed=args.seed, require_sa=not args.allow_non_sa)
    emit(args, [r.to_json() for r in reports])
    return OK if all(r.status == "pass" for r in reports) else NEGATIVE


def cmd_gamma_hom(args):
    A = load_sa(args.file)
    gamma = dimset(args.gamma, A.dimension)
    images, target = gamma_hom(A, gamma)
    rep = is_gamma_homomorphism(images, A, target, gamma)
    emit(args, {"gamma": sorted(gamma), "base": sorted(zero_set(A, gamma)),
                "map": [list(f.table) for f in images], "homomorphism": rep.to_json()})
    return OK if rep.holds else NEGATIVE


def cmd_distinguished(args):
    A = load_sa(args.file)
    rep = is_strongly_distinguished(A) if args.strong else is_distinguished(A)
    emit(args, rep.to_json())
    return OK if rep.holds else NEGATIVE


def cmd_sub(args):
    A = load_sa(args.file)
    S, inclusion = generate_subalgebra(A, args.gens)
    return emit_algebra(args, S, inclusion)


def _filter(spec, count):
    if spec == "trivial":
        return FilterSpec.trivial(count)
    if spec.startswith("principal:"):
        try:
            j = int(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad filter {spec!r}") from None
        return FilterSpec.principal(count, j)
    if spec.startswith("file:"):
        path = spec.split(":", 1)[1]
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
            return FilterSpec(int(data["index_size"]), data["sets"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise FormatError(f"{path}: not a filter file ({e})") from None
    raise UsageError(f"filter must be trivial, principal:<i> or file:<path>, got {spec!r}")


def cmd_product(args):
    algebras = [load_sa(f) for f in args.files]
    Q, qmap = reduced_product(algebras, _filter(args.filter, len(algebras)))
    return emit_algebra(args, Q, [list(r) for r in qmap.representatives])


def cmd_represent_z(args):
    A = load_sa(args.file)
    rep = representation_via_Z(A)
    if rep.status != "embedding":
        emit(args, rep.to_json())
        return NEGATIVE
    images = FnAlgebra(A.dimension, len(rep.base), rep.images)
    return emit_algebra(args, images, list(range(A.size)))


def _witness_result(args, w):
    if w is None:
        emit(args, {"map": None, "target": None, "verified": False})
        return NEGATIVE
    emit(args, w.to_json())
    return OK


def cmd_represent(args):
    A = load_sa(args.file)
    rep = is_representable_up_to(A, args.max_base, budget=args.budget or DEFAULT_BUDGET)
    emit(args, rep.to_json())
    return OK if rep.status == "witness" else NEGATIVE


def cmd_embed(args):
    A, B = load_sa(args.source), load(args.target)
    return _witness_result(args, find_embedding(A, B, budget=args.budget or DEFAULT_BUDGET))


def cmd_neat_embed(args):
    B, A = load_sa(args.source), load(args.target)
    return _witness_result(args, find_neat_embedding(B, A, args.beta, budget=args.budget or DEFAULT_BUDGET))


def cmd_reduct(args):
    A = load_sa(args.file)
    B, mapping = reduct(A, args.beta)
    return emit_algebra(args, B, mapping)


def cmd_neat(args):
    A = load_sa(args.file)
    B, mapping = neat_reduct(A, args.beta)
    return emit_algebra(args, B, mapping)


def cmd_dilate(args):
    afn = load(args.file)
    if not isinstance(afn, FnAlgebra):
        raise UsageError("dilate needs a function algebra (FnAlgebra file)")
    d = dilate(afn, args.extra)
    if not d.ok:
        emit(args, {"ok": False, "failures": d.failures})
        return NEGATIVE
    image = FnAlgebra(afn.dimension + args.extra, afn.base_size, d.images)
    return emit_algebra(args, image, [f.canonical_id for f in d.images])


def cmd_pad(args):
    B = load_sa(args.file)
    P = pad_algebra(B, args.gamma, args.v)
    return emit_algebra(args, P, list(range(B.size)))


def cmd_full(args):
    afn = full_fsa(args.dimension, args.base_size)
    out = as_finite_sa(afn) if args.tabulate else afn
    return emit_algebra(args, out, list(range(afn.size)))


def cmd_verify(args):
    from .suite import SUITES, SuiteConfig, run_suite
    for name in args.suite or ():
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    extra = () if args.no_extra else args.extra
    cfg = SuiteConfig(max_dim=args.max_dim, max_base=args.max_base, seed=args.seed, budget=args.budget,
                      fixture_dir=args.fixture_dir, **({} if extra is None else {"extra": tuple(extra)}))
    report = run_suite(cfg, names=args.suite, jobs=args.jobs, allow_skip=args.allow_skip)
    if args.format == "json":
        emit(args, report.to_json())
    else:
        for r in report.results:
            line = f"{r.status.upper():4}  {r.name}  ({r.seconds:.2f}s)"
            if r.reason:
                line += f"  {r.reason}"
            print(line)
            if r.counterexample is not None:
                print(f"      counterexample: {json.dumps(r.counterexample)}")
    return OK if report.ok else NEGATIVE


# -- parser --------------------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (verify only)")
    common.add_argument("--budget", type=int, default=None, help="case or search budget")
    common.add_argument("-v", "--verbose", action="store_true")

    writes = argparse.ArgumentParser(add_help=False)
    writes.add_argument("-o", "--output", help="write the algebra here instead of stdout")
    writes.add_argument("--map", help="write the sidecar map file here")

    parser = argparse.ArgumentParser(prog="sa", description="Finite substitution algebra toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_, *parents):
        p = sub.add_parser(name, help=help_, parents=[common, *parents])
        p.set_defaults(func=func)
        return p

    p = add("check", cmd_check, "check the axioms")
    p.add_argument("file")
    p.add_argument("--max-violations", type=int, default=DEFAULT_MAX_VIOLATIONS)

    p = add("delta", cmd_delta, "dimension sets")
    p.add_argument("file")
    p.add_argument("--ids", type=id_list, default=None)

    p = add("zero-set", cmd_zero_set, "elements whose dimension set avoids GAMMA")
    p.add_argument("file")
    p.add_argument("--gamma", type=id_list, required=True)

    p = add("subst", cmd_subst, "generalized substitution s *_(GAMMA) a")
    p.add_argument("file")
    p.add_argument("--s", type=id_list, required=True, help="one id per index")
    p.add_argument("--gamma", type=id_list, required=True)
    p.add_argument("--a", type=int, required=True)

    p = add("laws", cmd_laws, "check the substitution laws")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-non-sa", action="store_true", help="run on tables that fail the axioms")

    p = add("gamma-hom", cmd_gamma_hom, "the map a -> (s -> s *_(GAMMA) a) and its check")
    p.add_argument("file")
    p.add_argument("--gamma", type=id_list, required=True)

    p = add("distinguished", cmd_distinguished, "distinguishedness")
    p.add_argument("file")
    p.add_argument("--strong", action="store_true")

    p = add("sub", cmd_sub, "generated subalgebra", writes)
    p.add_argument("file")
    p.add_argument("--gens", type=id_list, default=[])

    p = add("product", cmd_product, "reduced product by a filter", writes)
    p.add_argument("files", nargs="+")
    p.add_argument("--filter", default="trivial")

    p = add("represent-z", cmd_represent_z, "representation over the zero-dimensional elements", writes)
    p.add_argument("file")

    p = add("represent", cmd_represent, "bounded representability search")
    p.add_argument("file")
    p.add_argument("--max-base", type=int, required=True)

    p = add("embed", cmd_embed, "least embedding of SOURCE into TARGET")
    p.add_argument("source")
    p.add_argument("target")

    p = add("neat-embed", cmd_neat_embed, "embed SOURCE into the neat reduct of TARGET")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--beta", type=int, default=None)

    p = add("reduct", cmd_reduct, "forget operations at and above BETA", writes)
    p.add_argument("file")
    p.add_argument("--beta", type=int, required=True)

    p = add("neat", cmd_neat, "neat reduct to BETA", writes)
    p.add_argument("file")
    p.add_argument("--beta", type=int, required=True)

    p = add("dilate", cmd_dilate, "cylinders in EXTRA more dimensions", writes)
    p.add_argument("file")
    p.add_argument("--extra", type=int, required=True)

    p = add("pad", cmd_pad, "pad to dimension GAMMA with projections", writes)
    p.add_argument("file")
    p.add_argument("--gamma", type=int, required=True)
    p.add_argument("--v", type=id_list, required=True, help="the new constants")

    p = add("full", cmd_full, "the full function algebra", writes)
    p.add_argument("--dimension", type=int, required=True)
    p.add_argument("--base-size", type=int, required=True)
    p.add_argument("--tabulate", action="store_true", help="emit operation tables instead of functions")

    p = add("verify", cmd_verify, "run the verification suites")
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--max-base", type=int, default=2)
    p.add_argument("--extra", type=dim_base, action="append",
                   help="extra full algebra for the axiom suite, e.g. 2x3 (repeatable; replaces the defaults)")
    p.add_argument("--no-extra", action="store_true", help="check only the max-dim by max-base grid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fixture-dir", default=None)
    p.add_argument("--allow-skip", action="store_true")
    p.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return BAD_INPUT if e.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (FormatError, UsageError, PreconditionError, CapacityError, OSError) as e:
        print(f"sa {args.command}: {e}", file=sys.stderr)
        return BAD_INPUT
    except IntegrityError as e:
        print(f"sa {args.command}: integrity failure: {e}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
