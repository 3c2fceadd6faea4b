"""``ultrapath`` command line: JSON in, JSON (or DOT) out.

Exit status is 0 on success, 1 on a domain error (bad space, failed
precondition) and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional, Sequence

from . import embeddings, generators, monoid, paths, ramsey, suite, trees
from .io import (
    FormatError,
    dumps,
    jsonable,
    metric_from_json,
    path_from_json,
    scheme_from_json,
    space_from_json,
)
from .rational import to_ext_rational, to_rational
from .spaces import SpaceError, spectrum, validate_metric


class DomainError(Exception):
    def __init__(self, payload: dict):
        super().__init__(payload.get("message", ""))
        self.payload = payload


def _rationals(text: str) -> list:
    return [to_rational(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t.strip())


def _degrees(text: str) -> tuple:
    out = []
    for t in text.split(","):
        t = t.strip().lower()
        out.append(trees.UNBOUNDED if t in ("u", "unbounded", "inf") else int(t))
    return tuple(out)


def _read_json(source: Optional[str]) -> Any:
    if source is None or source == "-":
        text = sys.stdin.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError({"error": "malformed_json", "message": str(exc)}) from None


def _json_arg(text: str) -> Any:
    """Inline JSON, or ``@file`` to read one."""
    if text.startswith("@"):
        return _read_json(text[1:])
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError({"error": "malformed_json", "message": str(exc)}) from None


def _space(source: Optional[str]):
    return space_from_json(_read_json(source))


def _path(text: str, host, alpha):
    """A JSON path, or ``phi:<point>`` (``phi:0,1`` for a word)."""
    if text.startswith("phi:"):
        ref = text[4:]
        x = _ints(ref) if isinstance(host, monoid.WordHost) else int(ref)
        return paths.phi(host, x, alpha)
    return path_from_json(_json_arg(text), host)


# --- handlers ------------------------------------------------------------

def cmd_space(args) -> Any:
    if args.verb == "validate":
        s = _space(args.input)
        return {"valid": True, "n": s.n, "labels": list(s.labels), "spectrum": spectrum(s)}
    s = _space(args.input)
    if args.verb == "spectrum":
        if args.point is not None:
            if not 0 <= args.point < s.n:
                raise DomainError({"error": "bad_point", "message": f"no point {args.point}"})
            return {"point": args.point, "spectrum": spectrum(s, args.point)}
        return {"spectrum": spectrum(s), "points": list(s.point_spectra)}
    if args.verb == "nerve":
        return {"nerve": list(s.nerve)}
    tree = trees.space_to_tree(s)
    if args.format == "dot":
        return trees.to_dot(tree)
    return tree


def cmd_gen(args) -> Any:
    if args.verb == "max":
        return generators.max_space(_rationals(args.spec))
    if args.verb == "omega":
        degrees = _degrees(args.degrees) if args.degrees else ()
        return generators.omega_space(generators.LevelSpec(tuple(_rationals(args.levels)), degrees), args.width)
    if args.verb == "ultv":
        return generators.ultv_approx(_rationals(args.spec), args.width)
    return generators.prop2_space(_rationals(args.spec), args.width, args.family_cap)


def cmd_embed(args) -> Any:
    src = _space(args.source)
    tgt = _space(args.target)
    f = embeddings.find_isometric_embedding(src, tgt)
    return {"found": f is not None, "map": f}


def _scheme_or_space(data):
    if isinstance(data, dict) and "diam" in data:
        return scheme_from_json(data)
    return space_from_json(data)


def cmd_check(args) -> Any:
    if args.verb == "space":
        s = _space(args.input)
        report = embeddings.check_extension_properties(s)
        report["prop4_i"] = embeddings.check_prop4_i(s)
        report["prop4_ii"] = embeddings.check_prop4_ii(s)
        return report
    if args.verb == "scheme":
        scheme = scheme_from_json(_read_json(args.input))
        s = trees.scheme_materialize(scheme, args.width)
        report = embeddings.check_extension_properties(s)
        report["width"] = args.width
        report["points"] = s.n
        return report
    if args.verb == "theorem4":
        return ramsey.check_theorem4(_scheme_or_space(_read_json(args.input)))
    return embeddings.check_theorem6(scheme_from_json(_read_json(args.input)))


def cmd_path(args) -> Any:
    s = _space(args.input)
    alpha = to_ext_rational(args.alpha)
    if args.verb == "enum":
        found = paths.enumerate_paths(s, alpha, to_rational(args.beta))
        return {"count": len(found), "paths": found}
    p = _path(args.p, s, alpha)
    if args.verb == "ball":
        return paths.path_ball(p, to_rational(args.r))
    q = _path(args.q, s, alpha)
    if args.verb == "dist":
        return {"distance": paths.path_distance(p, q)}
    if args.verb == "inf":
        return {"infimum": paths.path_infimum(p, q)}
    return {"leq": paths.path_leq(p, q)}


def cmd_monoid(args) -> Any:
    if args.verb == "embed":
        levels, words = monoid.embed_into_omega(_space(args.input))
        return {"levels": list(levels), "words": [words[i] for i in sorted(words)]}
    if args.verb == "add":
        lv = tuple(_rationals(args.levels))
        f = monoid.WeightedWord(lv, _ints(args.f))
        g = monoid.WeightedWord(lv, _ints(args.g))
        return {"sum": monoid.add_words(f, g), "distance": monoid.word_distance(f, g)}
    if args.verb == "pathsum":
        host = monoid.WordHost(tuple(_rationals(args.levels)), args.width)
        alpha = to_ext_rational(args.alpha)
        p, q = _path(args.p, host, alpha), _path(args.q, host, alpha)
        return {"sum": monoid.path_sum(p, q)}
    return suite.monoid_suite(tuple(_rationals(args.levels)), args.width, args.seed, args.samples)


def cmd_ramsey(args) -> Any:
    if args.verb == "dstar":
        m, labels = metric_from_json(_read_json(args.input))
        return ramsey.subdominant_dstar(m, labels)
    s = _space(args.input)
    pattern = space_from_json(_json_arg(args.pattern))
    r = ramsey.check_divisible(s, pattern, args.k, heuristic=args.heuristic, seed=args.seed)
    return r


# --- parser --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled suites")

    parser = argparse.ArgumentParser(prog="ultrapath", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def group(name, handler, help_):
        g = groups.add_parser(name, help=help_)
        sub = g.add_subparsers(dest="verb", required=True)
        g.set_defaults(handler=handler)
        return sub

    def verb(sub, name, help_, input_=True):
        v = sub.add_parser(name, help=help_, parents=[common])
        if input_:
            v.add_argument("--input", "-i", default=None, help="JSON file (default: standard input)")
        return v

    sp = group("space", cmd_space, "inspect a finite ultrametric space")
    verb(sp, "validate", "check the axioms, report a witness on failure")
    verb(sp, "spectrum", "spectrum of the space or of one point").add_argument("--point", type=int)
    verb(sp, "nerve", "list the nerve balls")
    verb(sp, "tree", "valued tree of the space")

    gp = group("gen", cmd_gen, "generate spaces")
    v = verb(gp, "max", "the max-space on a value set", input_=False)
    v.add_argument("--spec", required=True)
    v = verb(gp, "omega", "word space truncation", input_=False)
    v.add_argument("--levels", required=True)
    v.add_argument("--degrees", default=None, help="comma list, 'u' for unbounded")
    v.add_argument("--width", type=int, required=True)
    v = verb(gp, "ultv", "finite approximation of the universal space", input_=False)
    v.add_argument("--spec", required=True)
    v.add_argument("--width", type=int, required=True)
    v = verb(gp, "prop2", "indivisible-type construction at finite scale", input_=False)
    v.add_argument("--spec", required=True)
    v.add_argument("--width", type=int, required=True)
    v.add_argument("--family-cap", type=int, default=8)

    ep = group("embed", cmd_embed, "embedding search")
    v = verb(ep, "find", "first isometric embedding of source into target", input_=False)
    v.add_argument("--source", required=True)
    v.add_argument("--target", required=True)

    cp = group("check", cmd_check, "criteria reports")
    verb(cp, "space", "extension properties of a finite space")
    verb(cp, "scheme", "extension properties of a materialized scheme").add_argument("--width", type=int, default=3)
    verb(cp, "theorem4", "chain and diameter conditions (space or scheme)")
    verb(cp, "theorem6", "the four indivisibility conditions of a scheme")

    pp = group("path", cmd_path, "α-paths over a space")
    for name, help_ in (("enum", "list (α, β)-paths"), ("dist", "distance of two paths"),
                        ("inf", "infimum of two paths"), ("leq", "order test"), ("ball", "path ball")):
        v = verb(pp, name, help_)
        v.add_argument("--alpha", default="inf")
        if name == "enum":
            v.add_argument("--beta", default="0")
        else:
            v.add_argument("--p", required=True, help="path JSON, @file, or phi:<point>")
            if name == "ball":
                v.add_argument("--r", required=True)
            else:
                v.add_argument("--q", required=True)

    mp = group("monoid", cmd_monoid, "word monoid and path sums")
    verb(mp, "embed", "embed a space into the word monoid")
    v = verb(mp, "add", "add two words", input_=False)
    v.add_argument("--levels", required=True)
    v.add_argument("--f", required=True)
    v.add_argument("--g", required=True)
    v = verb(mp, "pathsum", "sum of two paths over the word monoid", input_=False)
    v.add_argument("--levels", required=True)
    v.add_argument("--width", type=int, default=None)
    v.add_argument("--alpha", default="inf")
    v.add_argument("--p", required=True)
    v.add_argument("--q", required=True)
    v = verb(mp, "check", "seeded invariant suite", input_=False)
    v.add_argument("--levels", required=True)
    v.add_argument("--width", type=int, required=True)
    v.add_argument("--samples", type=int, default=2000)

    rp = group("ramsey", cmd_ramsey, "subdominant ultrametric and colorings")
    verb(rp, "dstar", "subdominant ultrametric of a metric")
    v = verb(rp, "divisible", "search a coloring avoiding a pattern")
    v.add_argument("--pattern", required=True, help="pattern space JSON or @file")
    v.add_argument("--k", type=int, default=2)
    v.add_argument("--heuristic", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.handler(args)
    except DomainError as exc:
        return _fail(exc.payload)
    except SpaceError as exc:
        return _fail({"error": exc.kind, "witness": list(exc.witness), "message": str(exc)})
    except (ValueError, TypeError, KeyError, OSError, RecursionError) as exc:
        return _fail({"error": type(exc).__name__, "message": str(exc)})
    if isinstance(result, str):
        sys.stdout.write(result)
    else:
        if args.format == "dot":
            print("error: DOT output is only available for trees", file=sys.stderr)
            return 2
        sys.stdout.write(dumps(result))
    return 0


def _fail(payload: dict) -> int:
    sys.stdout.write(dumps(payload))
    print(f"error: {payload.get('message') or payload.get('error')}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
