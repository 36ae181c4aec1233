"""Command-line entry point: ``cartan235 <command> ...``.

Exit codes: 0 when every check passes (or the answer is merely undetermined),
1 when a mathematical check fails, 2 on usage, parse or validation errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .algebra import BUILTIN_ALGEBRAS, InvalidAlgebraError, StratifiedAlgebra
from .maps import NotInvertibleError, PolyMapPair, load_map_file, parse_point

FORMAT_ENV = "CARTAN235_FORMAT"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    status: str  # pass, fail or undetermined
    details: dict = field(default_factory=dict)
    timing: float = 0.0

    @property
    def exit_code(self) -> int:
        return EXIT_FAIL if self.status == "fail" else EXIT_OK

    def to_json(self) -> dict:
        return {"command": self.command, "status": self.status,
                "details": self.details, "timing_seconds": round(self.timing, 4)}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2)
        lines = [f"{self.command}: {self.status.upper()}  ({self.timing:.2f} s)"]
        lines += _text_lines(self.details, 1)
        return "\n".join(lines)


def _text_lines(value, depth: int) -> list[str]:
    pad = "  " * depth
    out = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                out.append(f"{pad}{k}:")
                out += _text_lines(v, depth + 1)
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)) and not _flat(v):
                out.append(f"{pad}-")
                out += _text_lines(v, depth + 1)
            else:
                out.append(f"{pad}- {_scalar(v)}")
    return out


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "(" + ", ".join(_scalar(x) for x in v) + ")"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _fr(c) -> str:
    return str(Fraction(c))


def _matrix(rows) -> list[str]:
    return ["[" + ", ".join(str(e) for e in row) + "]" for row in rows]


# -- verify -------------------------------------------------------------------

def _spot_check_group(rng: random.Random, samples: int) -> list[str]:
    """Seeded rational samples of the group axioms; redundant with the certificates."""
    from .families import random_point
    from .group import group_inv, group_mul

    bad = []
    zero = (Fraction(0),) * 5
    for _ in range(samples):
        p, q, r = (random_point(rng) for _ in range(3))
        if group_mul(group_mul(p, q), r) != group_mul(p, group_mul(q, r)):
            bad.append(f"associativity at {[_fr(x) for x in p + q + r]}")
        if group_mul(p, group_inv(p)) != zero:
            bad.append(f"inverse at {[_fr(x) for x in p]}")
    return bad


def _residual_list(items) -> list[str]:
    return [str(x) for x in items]


def cmd_verify(args) -> Report:
    from . import frames, group

    target = args.target
    checks: dict[str, list[str]] = {}
    if target == "group":
        checks["associativity (15 symbols)"] = _residual_list(group.certify_associativity())
        checks["inverse is negation"] = _residual_list(group.certify_inverse())
        checks["identity"] = _residual_list(group.certify_identity())
        if args.samples:
            rng = random.Random(args.seed)
            checks[f"sampled axioms (seed {args.seed}, n={args.samples})"] = _spot_check_group(
                rng, args.samples)
    elif target == "bch":
        checks["third-order BCH equals the group law"] = _residual_list(group.certify_bch())
    elif target == "dilation":
        checks["dilations are automorphisms, r∘s = rs"] = _residual_list(group.certify_dilation())
    elif target == "frame":
        checks["left frame equals reference fields"] = [
            frames.FRAME_NAMES[j] for j in frames.certify_reference_frame()]
        checks["bracket table"] = [
            f"[{frames.FRAME_NAMES[i]},{frames.FRAME_NAMES[j]}] off by {r}"
            for i, j, r in frames.certify_brackets()]
        checks["left and right frames commute"] = [
            f"({i},{j}): {r}" for i, j, r in frames.certify_frames_commute()]
    elif target == "coframe":
        checks["<theta_i, Y_j> = delta_ij"] = [
            f"({i + 1},{j + 1}): {r}" for i, j, r in frames.certify_duality()]
        checks["coframe equals reference forms"] = [
            frames.COFRAME_NAMES[i] for i in frames.certify_reference_coframe()]
    else:  # argparse restricts the choices
        raise UsageError(f"unknown verify target {target!r}")
    details = {name: {"status": "pass" if not res else "fail", "residuals": res}
               for name, res in checks.items()}
    status = "pass" if all(not r for r in checks.values()) else "fail"
    return Report(f"verify {target}", status, details)


# -- contact-check / pansu-numeric ----------------------------------------------

def _load_pair(args) -> tuple:
    try:
        f, g = load_map_file(args.map)
        if args.inverse:
            g = load_map_file(args.inverse)[0]
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as err:
        raise UsageError(f"cannot read map: {err}") from err
    pair = None
    if g is not None:
        try:
            pair = PolyMapPair(f, g)
        except NotInvertibleError as err:
            raise UsageError(f"inverse rejected: {err}") from err
    return f, pair


def _parse_radii(text: str) -> list[float]:
    try:
        radii = [float(Fraction(t.strip())) if "/" in t else float(t) for t in text.split(",")]
    except ValueError as err:
        raise UsageError(f"bad --radii: {err}") from err
    if not radii or any(r <= 0 for r in radii) or any(b >= a for a, b in zip(radii, radii[1:])):
        raise UsageError("--radii must be positive and strictly decreasing")
    return radii


def cmd_contact_check(args) -> Report:
    from .pansu import check_contact

    f, pair = _load_pair(args)
    if args.numeric:
        return _numeric_check(args, f, pair)
    if pair is None:
        raise UsageError("symbolic contact check needs an inverse (embedded or --inverse)")
    rep = check_contact(pair)
    details = {
        "identities_checked": len(rep.checked),
        "witness_entry": list(rep.witness) if rep.witness else None,
        "residual": str(rep.residual) if rep.residual is not None else None,
    }
    if rep.matrix is not None:
        details["J_H"] = str(rep.matrix.jh)
        details["det_equals_JH5"] = rep.det_certified
        details["pansu_matrix"] = _matrix(rep.matrix.entries)
    return Report("contact-check", rep.status, details)


def _numeric_check(args, f, pair) -> Report:
    from .pansu import (DomainError, NonFiniteError, check_contact, convergence_report,
                        pansu_numeric, point_scale)

    try:
        point = parse_point(args.point, exact=True)
    except ValueError as err:
        raise UsageError(f"bad --point: {err}") from err
    radii = _parse_radii(args.radii)
    try:
        estimates = pansu_numeric(f, [float(x) for x in point], radii)
        scale = point_scale(f, [float(x) for x in point])
    except (DomainError, NonFiniteError) as err:
        return Report("contact-check --numeric", "fail", {"error": str(err)})
    exact = None
    if pair is not None:
        rep = check_contact(pair)
        if rep.passed:
            exact = [[float(v) for v in row] for row in rep.matrix.at(point)]
    conv = convergence_report(estimates, radii, exact=exact, min_factor=args.min_factor,
                              scale=scale)
    details = {
        "point": [_fr(x) for x in point],
        "reference": conv.reference,
        "radii": radii,
        "errors": [f"{e:.3e}" for e in conv.errors],
        "roundoff_floors": [f"{e:.3e}" for e in conv.floors],
        "ratios": [None if r is None else f"{r:.3g}" for r in conv.ratios],
        "min_factor_per_decade": args.min_factor,
        "final_estimate": [[f"{v:.6g}" for v in row] for row in estimates[-1].tolist()],
    }
    if exact is not None:
        details["exact"] = [[f"{v:.6g}" for v in row] for row in exact]
    return Report("contact-check --numeric", "pass" if conv.converged else "fail", details)


# -- symmetries, prolong, induce --------------------------------------------------

def cmd_symmetries(args) -> Report:
    from .symmetry import algebra_diagnostics, solve_symmetries

    if args.max_wdeg < 0:
        raise UsageError("--max-wdeg must be non-negative")
    need_structure = args.structure or args.diagnostics
    alg = solve_symmetries(args.max_wdeg, structure=need_structure)
    details: dict = {
        "dimension": alg.dim,
        "grading": {str(k): v for k, v in alg.grading().items()},
        "basis": [
            {"weight": w, "field": str(fld)} for fld, w in zip(alg.basis, alg.weights)
        ],
    }
    status = "pass"
    if need_structure:
        details["closure_failures"] = [list(p) for p in alg.closure_failures]
        if alg.closure_failures:
            status = "fail"
    if args.structure:
        details["structure_constants"] = [
            {"i": i, "j": j, "bracket": {str(k): _fr(c) for k, c in enumerate(v) if c}}
            for (i, j), v in sorted(alg.structure.items()) if any(v)
        ]
    if args.diagnostics:
        diag = algebra_diagnostics(alg)
        details["diagnostics"] = diag.to_json()
        if not diag.ok:
            status = "fail"
    return Report("symmetries", status, details)


def _load_algebra(name: str) -> StratifiedAlgebra:
    if name in BUILTIN_ALGEBRAS:
        return BUILTIN_ALGEBRAS[name]()
    try:
        return StratifiedAlgebra.load(name)
    except OSError as err:
        raise UsageError(f"cannot read algebra file: {err}") from err


def cmd_prolong(args) -> Report:
    from .prolongation import rigidity_report

    if args.max_level < 0:
        raise UsageError("--max-level must be non-negative")
    alg = _load_algebra(args.algebra)
    alg.validate()
    rep = rigidity_report(alg, args.max_level)
    details = {"algebra": alg.name or args.algebra, "layer_dimensions": list(alg.layer_dims)}
    details.update(rep.to_json())
    return Report("prolong", "pass" if rep.verdict == "rigid" else "undetermined", details)


def cmd_induce(args) -> Report:
    from .symmetry import NotContactError, build_induced_field, is_contact_field

    _, pair = _load_pair(args)
    if pair is None:
        raise UsageError("induce needs an inverse (embedded or --inverse)")
    try:
        fld = build_induced_field(pair, args.direction)
    except NotContactError as err:
        return Report("induce", "fail", {"error": str(err)})
    check = is_contact_field(fld)
    names = ("X1", "X2", "Y", "Z1", "Z2")
    details = {
        "direction": args.direction,
        "field": {n: str(c) for n, c in zip(names, fld.coeffs)},
        "is_contact_field": check.passed,
        "failed_condition": check.condition,
    }
    return Report("induce", "pass" if check.passed else "fail", details)


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    default_fmt = os.environ.get(FORMAT_ENV, "text")
    if default_fmt not in ("text", "json"):
        default_fmt = "text"
    def shared(defaults: bool) -> argparse.ArgumentParser:
        # the copy attached to subcommands must not overwrite values given earlier
        fmt = default_fmt if defaults else argparse.SUPPRESS
        seed = 0 if defaults else argparse.SUPPRESS
        sp = argparse.ArgumentParser(add_help=False)
        sp.add_argument("--format", choices=("text", "json"), default=fmt,
                        help=f"output format (default from ${FORMAT_ENV}, else text)")
        sp.add_argument("--seed", type=int, default=seed, help="seed for sampled checks")
        return sp

    common = shared(False)
    p = argparse.ArgumentParser(prog="cartan235", parents=[shared(True)],
                                description="Exact identities on the Cartan group.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a symbolic certificate suite")
    v.add_argument("target", choices=("group", "frame", "coframe", "bch", "dilation"))
    v.add_argument("--samples", type=int, default=0, help="extra seeded rational samples")
    v.set_defaults(func=cmd_verify)

    def map_args(sp, numeric_default=False):
        sp.add_argument("map", help="JSON map file")
        sp.add_argument("--inverse", help="JSON file holding the inverse map")
        sp.add_argument("--point", default="0,0,0,0,0", help="base point, e.g. 1,0,1/2,0,-1/12")
        sp.add_argument("--radii", default="0.1,0.01,0.001")
        sp.add_argument("--min-factor", type=float, default=5.0,
                        help="required error reduction per decade of r")
        sp.set_defaults(func=cmd_contact_check, numeric=numeric_default)

    c = sub.add_parser("contact-check", parents=[common], help="check a map is contact")
    map_args(c)
    c.add_argument("--numeric", action="store_true", help="estimate the Pansu matrix numerically")
    n = sub.add_parser("pansu-numeric", parents=[common], help="contact-check --numeric")
    map_args(n, numeric_default=True)

    s = sub.add_parser("symmetries", parents=[common], help="solve for polynomial contact fields")
    s.add_argument("--max-wdeg", type=int, required=True)
    s.add_argument("--structure", action="store_true")
    s.add_argument("--diagnostics", action="store_true")
    s.set_defaults(func=cmd_symmetries)

    pr = sub.add_parser("prolong", parents=[common], help="Tanaka prolongation dimensions")
    pr.add_argument("algebra", help=f"builtin ({', '.join(BUILTIN_ALGEBRAS)}) or JSON file")
    pr.add_argument("--max-level", type=int, default=5)
    pr.set_defaults(func=cmd_prolong)

    i = sub.add_parser("induce", parents=[common], help="field induced by a contact map")
    i.add_argument("map")
    i.add_argument("--inverse")
    i.add_argument("--direction", choices=("X1", "X2"), required=True)
    i.set_defaults(func=cmd_induce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except (UsageError, InvalidAlgebraError) as err:
        if args.format == "json":
            print(json.dumps({"command": args.command, "status": "error", "error": str(err)}))
        else:
            print(f"cartan235: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    report.timing = time.perf_counter() - start
    print(report.render(args.format))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
