"""The ``blp`` command-line interface.

Subcommands
-----------
norm         Hardy or Bergman p-norm of a series file.
gfun         g-function of a series: grid dump or chosen points.
dyadic       dyadic square function of a series: grid dump or chosen points.
atoms        synthesize an atom system, truncate, and report norms.
multiplier   multiplier scan over a generated family.
equiv-scan   square-function vs norm equivalence scan over a family.
kernel-scan  kernel integral growth table near the boundary.

Reports go to ``--out`` (or stdout) as byte-stable JSON or CSV.  Scan
subcommands accept ``--figures`` to render PNG charts next to the report
file.  Exit codes: 0 success, 2 bad configuration or input, 3 accuracy or
evaluation failure.  ``BLP_THREADS`` caps worker threads.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .atoms import AtomSystem, auto_truncation_degree, coefficient_lp_norm, taylor_truncate
from .errors import BlpError, ConfigurationError
from .harness import (
    ScanReport,
    _versions,
    emit,
    emit_payload,
    run_equivalence_scan,
    run_kernel_scan,
    run_multiplier_scan,
)
from .norms import Exponent, bergman_norm, hardy_norm
from .quadrature import build_disk_rule
from .series import FamilySpec, TruncatedSeries
from .squarefuncs import (
    default_g_config,
    dyadic_field,
    dyadic_square_function,
    g_field_squared,
    g_function,
)

_FAMILY_CHOICES = {
    "random-decay": "random_decay",
    "lacunary": "lacunary",
    "monomial": "monomial",
    "atom-truncation": "atom_truncation",
}

_MULTIPLIER_CHOICES = {
    "ones": "ones",
    "constant": "constant",
    "dyadic-pm1": "dyadic_pm1",
}


def _add_output_args(parser: argparse.ArgumentParser, figures: bool = False) -> None:
    parser.add_argument("--format", choices=("json", "csv"), default="json",
                        help="report format (default json)")
    parser.add_argument("--out", type=Path, default=None,
                        help="write the report here instead of stdout")
    if figures:
        parser.add_argument("--figures", action="store_true",
                            help="render PNG charts next to --out")


def _add_rule_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--radial-order", type=int, default=None,
                        help="radial Gauss-Legendre order (default: degree + 1)")
    parser.add_argument("--angular-count", type=int, default=None,
                        help="uniform angular nodes (default: 2*degree + 9)")
    parser.add_argument("--grading", choices=("uniform", "geometric"), default=None,
                        help="radial grading (default depends on subcommand)")
    parser.add_argument("--grading-ratio", type=float, default=0.5)
    parser.add_argument("--grading-levels", type=int, default=12)


def _add_family_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", choices=sorted(_FAMILY_CHOICES), default="random-decay")
    parser.add_argument("--degree", type=int, default=64)
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--seed", type=int, default=12345)
    parser.add_argument("--decay", type=float, default=1.0,
                        help="decay exponent s for random-decay coefficients")


def _family_spec(args) -> FamilySpec:
    return FamilySpec(
        kind=_FAMILY_CHOICES[args.family],
        degree=args.degree,
        count=args.count,
        seed=args.seed,
        decay_exponent=args.decay,
    )


def _build_rule(args, degree: int, default_grading: str = "uniform"):
    radial = args.radial_order if args.radial_order is not None else degree + 1
    angular = args.angular_count if args.angular_count is not None else 2 * degree + 9
    grading = args.grading if args.grading is not None else default_grading
    return build_disk_rule(radial, angular, grading, args.grading_ratio, args.grading_levels)


def _rule_meta(rule) -> dict:
    return {
        "radial_order": rule.radial_order,
        "radial_nodes": int(rule.radial_nodes.size),
        "angular_count": rule.angular_count,
        "grading": rule.grading,
    }


def _load_json(path: Path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read JSON file {path}: {exc}")


def _load_series(path: Path) -> TruncatedSeries:
    return TruncatedSeries.from_pairs(_load_json(path))


def _parse_point(text: str) -> complex:
    try:
        re_part, im_part = text.split(",")
        return complex(float(re_part), float(im_part))
    except ValueError as exc:
        raise ConfigurationError(f"point {text!r} must be 're,im': {exc}")


def _write_output(data: bytes, args) -> None:
    if args.out is not None:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)


def _emit_report(report: ScanReport, args) -> int:
    _write_output(emit(report, args.format), args)
    if getattr(args, "figures", False):
        if args.out is None:
            raise ConfigurationError("--figures needs --out to anchor the figure paths")
        from .plotting import render_scan_figures

        for path in render_scan_figures(report, args.out):
            print(f"figure: {path}", file=sys.stderr)
    return 0


def _cmd_norm(args) -> int:
    f = _load_series(args.series)
    p = Exponent(args.p)
    if args.space == "bergman":
        rule = _build_rule(args, f.degree)
        value = bergman_norm(f, p, rule)
        meta = _rule_meta(rule)
    else:
        angular = args.angular_count if args.angular_count is not None else 2 * f.degree + 9
        value = hardy_norm(f, p, angular)
        meta = {"angular_count": angular}
    payload = {
        "space": args.space,
        "p": p.p,
        "degree": f.degree,
        "norm": value,
        "norm_p_power": value**p.p,
        "rule": meta,
    }
    _write_output(emit_payload(payload, args.format), args)
    return 0


def _pointwise_or_grid(args, f: TruncatedSeries, kind: str) -> int:
    """Shared body of ``gfun`` and ``dyadic``: rows of (z_re, z_im, value)."""
    rows = []
    if args.z:
        if kind == "g":
            cfg = default_g_config(f)
            values = [(z, g_function(f, z, cfg)) for z in map(_parse_point, args.z)]
        else:
            values = [(z, dyadic_square_function(f, z)) for z in map(_parse_point, args.z)]
        for z, v in values:
            rows.append({"z_re": z.real, "z_im": z.imag, "value": v})
        rule_meta: dict = {"points": len(rows)}
    else:
        rule = _build_rule(args, f.degree)
        field = np.sqrt(g_field_squared(f, rule)) if kind == "g" else dyadic_field(f, rule)
        angles = rule.angles
        for i, rho in enumerate(rule.radial_nodes):
            for j in range(rule.angular_count):
                rows.append(
                    {
                        "z_re": rho * np.cos(angles[j]),
                        "z_im": rho * np.sin(angles[j]),
                        "value": field[i, j],
                    }
                )
        rule_meta = _rule_meta(rule)
    values_only = [row["value"] for row in rows]
    report = ScanReport(
        kind=f"{kind}_field",
        seed=None,
        config={"degree": f.degree, "rule": rule_meta},
        columns=("z_re", "z_im", "value"),
        rows=rows,
        aggregates={"value_min": min(values_only), "value_max": max(values_only)},
        versions=_versions(),
    )
    _write_output(emit(report, args.format), args)
    return 0


def _cmd_gfun(args) -> int:
    return _pointwise_or_grid(args, _load_series(args.series), "g")


def _cmd_dyadic(args) -> int:
    return _pointwise_or_grid(args, _load_series(args.series), "dyadic")


def _cmd_atoms(args) -> int:
    system = AtomSystem.from_json_dict(_load_json(args.system))
    degree = args.truncate if args.truncate is not None else auto_truncation_degree(system)
    series = taylor_truncate(system, degree)
    rule = _build_rule(args, degree)
    norm = bergman_norm(series, system.p, rule)
    coeff_norm = coefficient_lp_norm(system)
    max_abs_a = max(abs(a) for _, a in system.pairs)
    payload = {
        "p": system.p.p,
        "atom_count": len(system.pairs),
        "boundary_stressed": system.boundary_stressed,
        "truncation_degree": degree,
        "truncation_tail_factor": max_abs_a**degree,
        "coefficient_lp_norm": coeff_norm,
        "bergman_norm": norm,
        "norm_to_coefficient_ratio": (norm / coeff_norm) if coeff_norm > 0 else None,
        "rule": _rule_meta(rule),
    }
    _write_output(emit_payload(payload, args.format), args)
    return 0


def _cmd_multiplier(args) -> int:
    report = run_multiplier_scan(
        _family_spec(args),
        args.p,
        kind=_MULTIPLIER_CHOICES[args.kind],
        value=args.value,
        radial_order=args.radial_order,
        angular_count=args.angular_count,
        grading=args.grading or "uniform",
        grading_ratio=args.grading_ratio,
        grading_levels=args.grading_levels,
    )
    return _emit_report(report, args)


def _cmd_equiv_scan(args) -> int:
    report = run_equivalence_scan(
        _family_spec(args),
        args.p,
        quantity=args.quantity,
        radial_order=args.radial_order,
        angular_count=args.angular_count,
        grading=args.grading or "uniform",
        grading_ratio=args.grading_ratio,
        grading_levels=args.grading_levels,
    )
    return _emit_report(report, args)


def _cmd_kernel_scan(args) -> int:
    ps = [args.p] if args.p is not None else None
    radii = [float(r) for r in args.radii.split(",")] if args.radii else None
    report = run_kernel_scan(
        ps=ps,
        radii=radii,
        radial_order=args.radial_order if args.radial_order is not None else 24,
        angular_count=args.angular_count if args.angular_count is not None else 16384,
        grading=args.grading or "geometric",
        grading_ratio=args.grading_ratio,
        grading_levels=args.grading_levels,
    )
    return _emit_report(report, args)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blp",
        description="square functions, disk-space norms, and equivalence scans on the unit disk",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    norm = sub.add_parser("norm", help="Hardy/Bergman norm of a series file")
    norm.add_argument("--series", type=Path, required=True, help="JSON file: list of [re, im] coefficients")
    norm.add_argument("--space", choices=("hardy", "bergman"), default="bergman")
    norm.add_argument("--p", type=float, default=2.0)
    _add_rule_args(norm)
    _add_output_args(norm)
    norm.set_defaults(func=_cmd_norm)

    for name, fn, blurb in (
        ("gfun", _cmd_gfun, "g-function values"),
        ("dyadic", _cmd_dyadic, "dyadic square-function values"),
    ):
        cmd = sub.add_parser(name, help=f"{blurb} on a grid or at --z points")
        cmd.add_argument("--series", type=Path, required=True)
        cmd.add_argument("--z", action="append", default=None, metavar="RE,IM",
                         help="evaluate at this point (repeatable); omit for a grid dump")
        _add_rule_args(cmd)
        _add_output_args(cmd)
        cmd.set_defaults(func=fn)

    atoms = sub.add_parser("atoms", help="synthesize an atom system and report norms")
    atoms.add_argument("--system", type=Path, required=True,
                       help='JSON file: {"p": p, "atoms": [{"c": [re,im], "a": [re,im]}, ...]}')
    atoms.add_argument("--truncate", type=int, default=None,
                       help="truncation degree (default: auto from max |a|)")
    _add_rule_args(atoms)
    _add_output_args(atoms)
    atoms.set_defaults(func=_cmd_atoms)

    mult = sub.add_parser("multiplier", help="multiplier-operator scan over a family")
    mult.add_argument("--p", type=float, default=2.0)
    mult.add_argument("--kind", choices=sorted(_MULTIPLIER_CHOICES), default="dyadic-pm1")
    mult.add_argument("--value", type=float, default=2.0, help="value for --kind constant")
    _add_family_args(mult)
    _add_rule_args(mult)
    _add_output_args(mult, figures=True)
    mult.set_defaults(func=_cmd_multiplier)

    equiv = sub.add_parser("equiv-scan", help="square-function equivalence scan over a family")
    equiv.add_argument("--p", type=float, default=2.0)
    equiv.add_argument("--quantity", choices=("dyadic", "g"), default="g")
    _add_family_args(equiv)
    _add_rule_args(equiv)
    _add_output_args(equiv, figures=True)
    equiv.set_defaults(func=_cmd_equiv_scan)

    kernel = sub.add_parser("kernel-scan", help="kernel integral growth near the boundary")
    kernel.add_argument("--p", type=float, default=None,
                        help="single exponent (default: scan 0.5, 1, 2)")
    kernel.add_argument("--radii", type=str, default=None,
                        help="comma-separated |w| values (default 0.9,0.99,0.999)")
    _add_rule_args(kernel)
    _add_output_args(kernel, figures=True)
    kernel.set_defaults(func=_cmd_kernel_scan)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BlpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
