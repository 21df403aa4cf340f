"""Command line front end: ``anmirror <subcommand> [flags]``.

Exit codes: 0 when every check passes, 1 when a check fails or a path is
inadmissible, 2 for malformed input or out-of-range parameters.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import sympy as sp

from . import fs_ring, paths, svg, syz_base, toric, wrapped
from .errors import AnMirrorError, DegenerateCrossing, InvalidInput, InvalidParameter
from .report import Record, Report, RunConfig, check, fmt, parse_fraction

SUITES = ("toric", "glue", "paths", "fs", "wrapped", "compat")
PATHS_PER_N = 50


# Path files

class PathFileError(InvalidInput):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line, self.col = line, col


def _locate(text: str, token: str) -> tuple[int, int]:
    idx = text.find(json.dumps(token))
    if idx < 0:
        return 1, 1
    line = text.count("\n", 0, idx) + 1
    return line, idx - (text.rfind("\n", 0, idx) + 1) + 1


def parse_path_file(text: str) -> tuple[int, tuple[Fraction, ...], paths.PLPath]:
    """Read ``{"n": int, "a": ["p/q", ...], "vertices": [["p/q", "p/q"], ...]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PathFileError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise PathFileError("top level must be an object", 1, 1)
    for key in ("n", "a", "vertices"):
        if key not in doc:
            raise PathFileError(f"missing field {key!r}", 1, 1)

    def rational(tok) -> Fraction:
        if isinstance(tok, int) and not isinstance(tok, bool):
            return Fraction(tok)
        if not isinstance(tok, str):
            raise PathFileError(f"expected a rational string, got {tok!r}", *_locate(text, str(tok)))
        try:
            return parse_fraction(tok)
        except InvalidParameter as exc:
            raise PathFileError(str(exc), *_locate(text, tok)) from exc

    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise PathFileError("n must be a positive integer", *_locate(text, "n"))
    a = tuple(rational(t) for t in doc["a"])
    if len(a) != n + 1:
        raise PathFileError(f"expected {n + 1} punctures, got {len(a)}", *_locate(text, "a"))
    verts = []
    for v in doc["vertices"]:
        if not isinstance(v, list) or len(v) != 2:
            raise PathFileError(f"vertex must be a pair, got {v!r}", *_locate(text, "vertices"))
        verts.append((rational(v[0]), rational(v[1])))
    try:
        a = paths.as_punctures(a)
    except InvalidParameter as exc:
        raise PathFileError(str(exc), *_locate(text, "a")) from exc
    return n, a, paths.PLPath(tuple(verts))


def path_to_json(n: int, a: Sequence[Fraction], path: paths.PLPath) -> str:
    verts = ",\n  ".join(json.dumps([fmt(x), fmt(y)]) for x, y in path.vertices)
    return (f'{{\n "n": {n},\n "a": {json.dumps([fmt(Fraction(x)) for x in a])},\n'
            f' "vertices": [\n  {verts}\n ]\n}}\n')


def cmd_transform(text: str) -> tuple[str, int]:
    n, a, path = parse_path_file(text)
    lines = [f"punctures {fmt(list(a))}", f"vertices {len(path)}"]
    adm = paths.is_admissible(path, a)
    strong = paths.is_strongly_admissible(path)
    lines.append(f"admissible {'yes' if adm else 'no'}" + ("" if adm else f" reason={json.dumps(adm.reason)}"))
    lines.append(f"strongly-admissible {'yes' if strong else 'no'}")
    if not adm:
        return "\n".join(lines) + "\n", 1
    by_cross = paths.winding_by_crossings(path, a)
    lines.append(f"winding-by-crossings {fmt(by_cross)}")
    if strong:
        lines.append(f"winding-by-lift {fmt(paths.winding_by_lift(path, a))}")
    else:
        lines.append("winding-by-lift n/a (path is not strongly admissible)")
    degrees = paths.syz_transform(path, a).degrees
    lines.append(f"degrees {fmt(degrees)}")
    return "\n".join(lines) + "\n", 0


# Verification suites

def _punctures(n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(i + 1) for i in range(n + 1))


def suite_toric(cfg: RunConfig) -> list[Record]:
    n = cfg.n
    fan = toric.build_fan(n)
    out = [check("toric.smooth-fan", all(toric.det(*fan.cone_rays(c)) == 1 for c in range(n + 1)),
                 rays=len(fan.rays), cones=len(fan.cones))]
    form = [[toric.intersection_number(r, c, fan) for c in range(1, n + 1)] for r in range(1, n + 1)]
    cartan = [[-2 if r == c else (1 if abs(r - c) == 1 else 0) for c in range(n)] for r in range(n)]
    out.append(check("toric.intersection-form", form == cartan, matrix=form))
    bad = [m for m in toric.box_points((-3, 3, -3, 3))
           if any(toric.divisor_class(toric.principal_divisor(m, fan), fan).degrees)]
    out.append(check("toric.principal-degree-zero", not bad, characters=49, failures=bad[:3]))
    rng = random.Random(cfg.seed)
    trips = []
    for _ in range(20):
        d = toric.DivisorClass(tuple(rng.randint(-3, 3) for _ in range(n)))
        if toric.divisor_class(toric.bundle_with_degrees(d, fan), fan) != d:
            trips.append(d.degrees)
    out.append(check("toric.bundle-roundtrip", not trips, samples=20, failures=trips[:3]))
    return out


def suite_glue(cfg: RunConfig) -> list[Record]:
    u, w = syz_base.u, syz_base.w
    loop = syz_base.monodromy(False)
    out = [check("glue.monodromy-uncorrected", sp.simplify(loop.images[0] - u * w) == 0
                 and loop.images[1] == w, image=str(loop.images[0]))]
    corr = syz_base.monodromy(True)
    out.append(check("glue.monodromy-corrected", sp.simplify(corr.images[0] - u) == 0,
                     image=str(sp.simplify(corr.images[0]))))
    mat = syz_base.monodromy_matrix()
    out.append(check("glue.monodromy-matrix", mat == sp.Matrix([[1, 1], [0, 1]]), matrix=mat.tolist()))
    try:
        cover = syz_base.glued_cover_relations(cfg.n)
        out.append(check("glue.cocycle", True, triples=cover.cocycle_checked))
    except AnMirrorError as exc:
        out.append(check("glue.cocycle", False, error=json.dumps(str(exc))))
    match = syz_base.match_resolution_charts(cfg.n)
    out.append(check("glue.toric-charts", match.ok,
                     witness=json.dumps(match.witness, sort_keys=True) if match.ok else "none",
                     failures=len(match.failures)))
    return out


def suite_paths(cfg: RunConfig) -> list[Record]:
    n = cfg.n
    a = _punctures(n)
    rng = random.Random(cfg.seed)
    disagree, transform_bad, windings = [], [], set()
    for k in range(PATHS_PER_N):
        path = paths.random_strongly_admissible_path(a, rng)
        wc, wl = paths.winding_by_crossings(path, a), paths.winding_by_lift(path, a)
        windings.update(wc)
        if wc != wl:
            disagree.append(k)
        if paths.syz_transform(path, a).degrees != tuple(-x for x in wc):
            transform_bad.append(k)
    scope = f"n={n}"
    out = [check("paths.winding-agreement", not disagree, scope, samples=PATHS_PER_N,
                 windings_seen=sorted(windings), failures=disagree[:3]),
           check("paths.transform-negated-winding", not transform_bad, scope, samples=PATHS_PER_N,
                 failures=transform_bad[:3])]
    g0 = paths.syz_transform(paths.gamma0(a), a).degrees
    out.append(check("paths.zero-section", not any(g0), scope, degrees=g0))
    sec = paths.check_section(a)
    out.append(check("paths.section-residency", sec.max_residency <= 1e-12, scope,
                     max_error=sec.max_residency, grid="21x21"))
    out.append(check("paths.section-projection", sec.max_projection_error <= 1e-12, scope,
                     max_error=sec.max_projection_error, grid="21x21"))
    out.append(check("paths.section-isotropy", sec.max_pullback <= 1e-6, scope,
                     max_value=sec.max_pullback, grid="21x21"))
    return out


def suite_fs(cfg: RunConfig) -> list[Record]:
    n, w = cfg.n, cfg.w_max
    eps = cfg.epsilon
    rep = fs_ring.verify_ring_isom(n, w, eps)
    scope = f"n={n},w={w}"
    out = [
        check("fs.count-law", not rep.count_mismatches, scope, epsilon=rep.eps,
              failures=[list(m) for m in rep.count_mismatches[:3]]),
        check("fs.products", not rep.product_mismatches, scope, products=rep.products_checked,
              failures=len(rep.product_mismatches)),
        check("fs.continuation", not rep.continuation_mismatches, scope,
              failures=len(rep.continuation_mismatches)),
        check("fs.unit", not rep.unit_failures, scope, failures=len(rep.unit_failures)),
        check("fs.marked-point-law", not rep.degree_mismatches, scope, triangles=rep.min_matches
              + len(rep.degree_mismatches), failures=len(rep.degree_mismatches)),
        check("fs.perturbation-stability", rep.stable_under_halving, scope),
        check("fs.min-or-max", not rep.degree_mismatches, scope,
              resolution="min", min_rule_matches=rep.min_matches,
              max_rule_matches=f"{rep.max_matches}/{rep.max_cases}"),
    ]
    k_max = max(w, 4)
    ceps = fs_ring.default_epsilon(n, k_max)
    for cid, e in (("fs.count-law", ceps), ("fs.count-law-halved", ceps / 2)):
        bad = fs_ring.count_law_mismatches(n, k_max, e)
        out.append(check(cid, not bad, f"n={n},k<={k_max}", epsilon=e,
                         failures=[list(m) for m in bad[:3]]))
    pairing = [[fs_ring.dual_cycle_pairing(i, j, n) for j in range(1, n + 1)] for i in range(1, n + 1)]
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    out.append(check("fs.dual-cycles", pairing == ident, f"n={n}", matrix=pairing))
    if n <= 2:
        table, _ = fs_ring.ring_A_structure(n, w, eps)
        bad = fs_ring.check_associativity(table)
        out.append(check("fs.associativity", not bad, scope, failures=len(bad)))
    return out


def _worked_identity(sign: int) -> tuple[bool, str]:
    xy = fs_ring.Monomial(1, 1)
    g0 = wrapped.WrappedGenerator(0, 0, 1, xy, 0, 1)
    g1 = wrapped.WrappedGenerator(0, 0, 1, xy, 1, 1)
    total = wrapped.psi(g0, sign) + wrapped.psi(g1, sign)
    want = {xy: sign}
    return total.as_dict() == want, str(total)


def suite_wrapped(cfg: RunConfig) -> list[Record]:
    n, w, sign = cfg.n, cfg.w_max, cfg.sign
    rep = wrapped.verify_psi_ring_isom(n, w, sign)
    scope = f"n={n},w={w},sign={sign:+d}"
    ok, img = _worked_identity(sign)
    return [
        check("wrapped.equivariance", not rep.equivariance_failures, scope,
              failures=rep.equivariance_failures[:3]),
        check("wrapped.multiplicative", not rep.product_failures, scope,
              products=rep.products_checked, failures=len(rep.product_failures)),
        check("wrapped.index-bound", not rep.index_overflows, scope, violations=len(rep.index_overflows)),
        check("wrapped.binomial-identity", not rep.binomial_failures, scope, failures=rep.binomial_failures),
        check("wrapped.injective", not rep.injectivity_failures, scope,
              failures=rep.injectivity_failures[:3]),
        check("wrapped.surjective", not rep.surjectivity_failures, scope,
              max_promotion=rep.max_promotion_used, budget=rep.promotion_budget,
              failures=rep.surjectivity_failures[:3]),
        check("wrapped.worked-identity", ok, f"n=1,sign={sign:+d}", image=json.dumps(img),
              expected="s" if sign == 1 else "-s (sign automorphism)"),
    ]


def suite_compat(cfg: RunConfig) -> list[Record]:
    n, m = cfg.n, cfg.pole_cutoff
    twist_cap = max(cfg.w_max, 1)
    out = []
    recs = wrapped.compare_with_mirror_side(n, m, twist_cap, "delta", cfg.sign)
    for r in recs:
        out.append(Record("compat.filtered-dims", r.status,
                          {"localized": r.localized, "algebraic": r.algebraic,
                           "toric": "n/a" if r.toric is None else r.toric,
                           "certified": r.algebraic_certified, "toric_block": list(r.toric_block)},
                          f"n={n},block={r.block[0]}-{r.block[1]},pole={r.pole},twist<={twist_cap}"))
    return out


SUITE_FUNCS: dict[str, Callable[[RunConfig], list[Record]]] = {
    "toric": suite_toric, "glue": suite_glue, "paths": suite_paths,
    "fs": suite_fs, "wrapped": suite_wrapped, "compat": suite_compat,
}


def cmd_verify(suite: str, cfg: RunConfig) -> Report:
    names = SUITES if suite == "all" else (suite,)
    rep = Report(cfg)
    if "fs" in names:
        rep.notes.append("marked points inside triangles follow ord = min(exponents)")
    if "wrapped" in names and cfg.sign == -1:
        rep.notes.append("sign -1: structure map is multiplication by 1 - s, psi carries (-1)^w")
    for name in names:
        for rec in SUITE_FUNCS[name](cfg):
            rep.add(rec)
    return rep


# Other subcommands

def cmd_toric(cfg: RunConfig, src: int, tgt: int) -> str:
    fan = toric.build_fan(cfg.n)
    n = cfg.n
    lines = [f"rays {fmt([list(r) for r in fan.rays])}",
             f"cones {fmt([list(c) for c in fan.cones])}"]
    form = [[toric.intersection_number(r, c, fan) for c in range(1, n + 1)] for r in range(1, n + 1)]
    lines.append(f"intersection-form {fmt(form)}")
    d_src = wrapped.mirror_bundle(src, n, "delta")
    d_tgt = wrapped.mirror_bundle(tgt, n, "delta")
    D = toric.bundle_with_degrees(d_tgt, fan) - toric.bundle_with_degrees(d_src, fan)
    box = cfg.box or toric.natural_box(D, fan, max(cfg.w_max, 1))
    dims = toric.hom_on_Yv_truncated(d_src, d_tgt, cfg.pole_cutoff, box, fan)
    lines.append(f"hom source={src} target={tgt} divisor={fmt(D.coefficients)} box={fmt(box)}")
    for m, (d, raw) in enumerate(zip(dims.dims, dims.raw)):
        lines.append(f"pole={m} dim={'not-stabilized' if d is None else d} raw={raw}")
    return "\n".join(lines) + "\n"


def cmd_fs_ring(cfg: RunConfig) -> str:
    n, w = cfg.n, cfg.w_max
    eps = cfg.epsilon or fs_ring.default_epsilon(n, w)
    lines = [f"epsilon {fmt(eps)}"]
    for k in range(w + 1):
        for i0 in range(n + 1):
            for i1 in range(n + 1):
                gens = fs_ring.geometric_generators(i0, i1, k, n, eps)
                mons = [str(fs_ring.gen_monomial(g, n)) for g in gens]
                lines.append(f"generators k={k} block={i0}-{i1} count={len(gens)} monomials={fmt(mons)}")
    table, records = fs_ring.ring_A_structure(n, w, eps)
    for rec in sorted(records, key=lambda r: (r.right, r.left)):
        out = "0" if rec.output is None else str(fs_ring.gen_monomial(rec.output, n))
        lines.append(f"product {str(fs_ring.gen_monomial(rec.left, n))}@{rec.left.i0}-{rec.left.i1}"
                     f" * {str(fs_ring.gen_monomial(rec.right, n))}@{rec.right.i0}-{rec.right.i1}"
                     f" = {out} marked={'-' if rec.s0 is None else rec.s0}")
    return "\n".join(lines) + "\n"


def cmd_wrapped_ring(cfg: RunConfig) -> str:
    n, w, sign = cfg.n, cfg.w_max, cfg.sign
    lines = [f"sign {sign:+d}"]
    for lvl in range(w + 1):
        for i0 in range(n + 1):
            for i1 in range(n + 1):
                for g in wrapped.wrapped_generators(i0, i1, lvl, n):
                    lines.append(f"psi {g} = {wrapped.psi(g, sign)}")
    return "\n".join(lines) + "\n"


# Argument handling

def _int_tuple(text: str, size: int, flag: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise InvalidParameter(f"{flag} expects {size} comma-separated integers") from exc
    if len(vals) != size:
        raise InvalidParameter(f"{flag} expects {size} comma-separated integers")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=1)
    common.add_argument("--wmax", type=int, default=2)
    common.add_argument("--pole-cutoff", type=int, default=2)
    common.add_argument("--box", help="m1_lo,m1_hi,m2_lo,m2_hi")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--epsilon", help="perturbation size as p/q")
    common.add_argument("--sign", type=int, default=1, choices=(1, -1))
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="anmirror", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    p = sub.add_parser("transform", parents=[common], help="winding and line bundle of a path file")
    p.add_argument("path_file")
    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suite", choices=SUITES + ("all",))
    p = sub.add_parser("plot", parents=[common], help="emit an SVG figure")
    p.add_argument("target", choices=("base", "thimbles", "wrapping"))
    p.add_argument("--block", default="0,0", help="i0,i1 for thimble and wrapping plots")
    p = sub.add_parser("toric", parents=[common], help="fan data and boxed hom dimensions")
    p.add_argument("--bundles", default="0,0", help="source,target bundle indices")
    sub.add_parser("fs-ring", parents=[common], help="thimble generators and products")
    sub.add_parser("wrapped-ring", parents=[common], help="wrapped generators and their psi images")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    box = _int_tuple(args.box, 4, "--box") if args.box else None
    eps = parse_fraction(args.epsilon) if args.epsilon else None
    return RunConfig(args.subcommand, args.n, args.wmax, args.pole_cutoff, box, args.seed,
                     eps, args.sign, args.out)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _check_index(i: int, n: int, what: str) -> None:
    if not 0 <= i <= n:
        raise InvalidParameter(f"{what} index {i} outside 0..{n}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = _config(args)
        if args.subcommand == "transform":
            try:
                text = Path(args.path_file).read_text()
            except OSError as exc:
                raise InvalidInput(f"cannot read {args.path_file}: {exc.strerror}") from exc
            body, code = cmd_transform(text)
            _emit(body, cfg.out)
            return code
        if args.subcommand == "verify":
            rep = cmd_verify(args.suite, cfg)
            _emit(rep.render(), cfg.out)
            return 0 if rep.ok else 1
        if args.subcommand == "plot":
            block = _int_tuple(args.block, 2, "--block")
            for i in block:
                _check_index(i, cfg.n, "block")
            if args.target == "base":
                doc = svg.plot_base(cfg.n)
            elif args.target == "thimbles":
                doc = svg.plot_thimbles(cfg.n, cfg.w_max, block, cfg.epsilon)
            else:
                doc = svg.plot_wrapping(cfg.n, cfg.w_max, block)
            _emit(doc, cfg.out)
            return 0
        if args.subcommand == "toric":
            src, tgt = _int_tuple(args.bundles, 2, "--bundles")
            _check_index(src, cfg.n, "bundle")
            _check_index(tgt, cfg.n, "bundle")
            _emit(cmd_toric(cfg, src, tgt), cfg.out)
            return 0
        if args.subcommand == "fs-ring":
            _emit(cmd_fs_ring(cfg), cfg.out)
            return 0
        _emit(cmd_wrapped_ring(cfg), cfg.out)
        return 0
    except DegenerateCrossing as exc:
        print(f"error: degenerate crossing: {exc}", file=sys.stderr)
        return 2
    except (InvalidInput, InvalidParameter) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AnMirrorError as exc:
        if isinstance(exc, AssertionError):
            raise
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
