"""Experiment runner: equivalence, kernel, and multiplier scans.

Every scan produces a `ScanReport` — config echo, per-row results, and
aggregate ratio brackets (min/median/max) that stand in for the existential
constants in the norm equivalences: the report never claims true constants,
only the observed bracket for the given family.

Reports are reproducible to the byte: family generation is seeded, every
reduction runs in a documented deterministic order, `emit` formats floats
with fixed 17-significant-digit precision, and nothing records wall-clock
state.  Worker threads (capped by the ``BLP_THREADS`` environment variable)
only parallelize independent per-member computations; results are gathered
in submission order before any aggregation.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import AccuracyError, ConfigurationError
from .norms import as_exponent, bergman_norm, lp_disk_norm_values
from .operators import (
    REFINE_TOL,
    apply_multiplier,
    constant_multiplier,
    dyadic_pm1_multiplier,
    kernel_comparator,
    kernel_integral_detail,
    multiplier_constant,
    ones_multiplier,
)
from .quadrature import build_disk_rule, build_radial_rule
from .series import FamilySpec, TruncatedSeries, generate_family
from .squarefuncs import dyadic_field, g_field_squared

QUANTITIES = ("dyadic", "g")
MULTIPLIER_KINDS = ("ones", "constant", "dyadic_pm1")

DEFAULT_KERNEL_PS = (0.5, 1.0, 2.0)
DEFAULT_KERNEL_RADII = (0.9, 0.99, 0.999)
DEFAULT_KERNEL_RADIAL_ORDER = 24
DEFAULT_KERNEL_ANGULAR_COUNT = 16384


@dataclass
class ScanReport:
    """Machine-readable scan result; see `emit` for the byte-stable formats."""

    kind: str
    seed: int | None
    config: dict
    columns: tuple
    rows: list
    aggregates: dict
    versions: dict


def _versions() -> dict:
    return {"blp": __version__, "numpy": np.__version__}


def _worker_count() -> int:
    env = os.environ.get("BLP_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            raise ConfigurationError(f"BLP_THREADS must be an integer, got {env!r}")
        if n < 1:
            raise ConfigurationError("BLP_THREADS must be >= 1")
        return n
    return min(8, os.cpu_count() or 1)


def _map_ordered(fn, items: list) -> list:
    """Apply ``fn`` across items, in parallel if allowed, preserving order."""
    workers = _worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _ratio_aggregates(rows: list, key: str = "ratio") -> dict:
    values = [row[key] for row in rows if row.get(key) is not None]
    out = {
        f"{key}_min": min(values) if values else None,
        f"{key}_median": statistics.median(values) if values else None,
        f"{key}_max": max(values) if values else None,
    }
    return out


def _rule_config(radial_order, angular_count, grading, grading_ratio, grading_levels) -> dict:
    return {
        "radial_order": radial_order,
        "angular_count": angular_count,
        "grading": grading,
        "grading_ratio": grading_ratio,
        "grading_levels": grading_levels,
    }


def _family_config(spec: FamilySpec) -> dict:
    return {
        "kind": spec.kind,
        "degree": spec.degree,
        "count": spec.count,
        "seed": spec.seed,
        "decay_exponent": spec.decay_exponent,
    }


def run_equivalence_scan(
    spec: FamilySpec,
    p,
    quantity: str = "g",
    radial_order: int | None = None,
    angular_count: int | None = None,
    grading: str = "uniform",
    grading_ratio: float = 0.5,
    grading_levels: int = 12,
) -> ScanReport:
    """Bracket the ratio ``||Q(f)||_{L^p} / ||f||_{A^p}`` over a family.

    ``quantity="dyadic"`` compares the dyadic square function against the
    norm directly.  ``quantity="g"`` centers each member (a_0 := 0) before
    forming the ratio — the g-function cannot see the constant term — and
    additionally records the split form ``|f(0)| + ||g(f)||`` (p-th powers
    for p < 1) evaluated on the uncentered member.

    Members with zero norm are skipped with a warning row.
    """
    if quantity not in QUANTITIES:
        raise ConfigurationError(f"unknown quantity {quantity!r}; expected one of {QUANTITIES}")
    pval = as_exponent(p).p
    if radial_order is None:
        radial_order = spec.degree + 1
    if angular_count is None:
        angular_count = 2 * spec.degree + 9
    rule = build_disk_rule(radial_order, angular_count, grading, grading_ratio, grading_levels)
    inner_rule = build_radial_rule(spec.degree + 1)
    family = generate_family(spec)

    if quantity == "dyadic":
        columns = ("id", "bergman", "quantity", "ratio", "warning")

        def row_fn(item):
            i, f = item
            norm_f = bergman_norm(f, pval, rule)
            if norm_f == 0.0:
                return {
                    "id": i,
                    "bergman": None,
                    "quantity": None,
                    "ratio": None,
                    "warning": "zero norm; member skipped",
                }
            norm_d = lp_disk_norm_values(dyadic_field(f, rule), pval, rule)
            return {
                "id": i,
                "bergman": norm_f,
                "quantity": norm_d,
                "ratio": norm_d / norm_f,
                "warning": "",
            }

    else:
        columns = (
            "id",
            "bergman",
            "quantity",
            "ratio",
            "f0_abs",
            "bergman_full",
            "split",
            "split_ratio",
            "warning",
        )

        def row_fn(item):
            i, f = item
            f0 = complex(f.coeffs[0])
            if f0 == 0:
                centered = f
            else:
                shifted = np.concatenate(([0.0], f.coeffs[1:]))
                centered = TruncatedSeries(shifted)
            norm_centered = bergman_norm(centered, pval, rule)
            if norm_centered == 0.0:
                return {
                    "id": i,
                    "bergman": None,
                    "quantity": None,
                    "ratio": None,
                    "f0_abs": abs(f0),
                    "bergman_full": None,
                    "split": None,
                    "split_ratio": None,
                    "warning": "zero norm after centering; member skipped",
                }
            g_sq = g_field_squared(f, rule, inner_rule)
            norm_g = lp_disk_norm_values(np.sqrt(g_sq), pval, rule)
            norm_full = bergman_norm(f, pval, rule)
            if pval >= 1.0:
                split = abs(f0) + norm_g
                split_ratio = split / norm_full
            else:
                split = abs(f0) ** pval + norm_g**pval
                split_ratio = split / norm_full**pval
            return {
                "id": i,
                "bergman": norm_centered,
                "quantity": norm_g,
                "ratio": norm_g / norm_centered,
                "f0_abs": abs(f0),
                "bergman_full": norm_full,
                "split": split,
                "split_ratio": split_ratio,
                "warning": "",
            }

    rows = _map_ordered(row_fn, list(enumerate(family)))
    aggregates = {
        "member_count": len(rows),
        "skipped_count": sum(1 for r in rows if r["warning"]),
    }
    aggregates.update(_ratio_aggregates(rows))
    if quantity == "g":
        aggregates.update(_ratio_aggregates(rows, "split_ratio"))

    return ScanReport(
        kind="equivalence",
        seed=spec.seed,
        config={
            "quantity": quantity,
            "p": pval,
            "family": _family_config(spec),
            "rule": _rule_config(radial_order, angular_count, grading, grading_ratio, grading_levels),
            "inner_radial_order": spec.degree + 1,
        },
        columns=columns,
        rows=rows,
        aggregates=aggregates,
        versions=_versions(),
    )


def run_kernel_scan(
    ps=None,
    radii=None,
    radial_order: int = DEFAULT_KERNEL_RADIAL_ORDER,
    angular_count: int = DEFAULT_KERNEL_ANGULAR_COUNT,
    grading: str = "geometric",
    grading_ratio: float = 0.5,
    grading_levels: int = 12,
) -> ScanReport:
    """Tabulate kernel integrals against their boundary-growth comparator.

    For each (p, |w|) the row records the integral, the comparator
    ``(1-|w|^2)^(-p)``, their product (the normalized ratio), and the
    relative change under rule doubling.  A row whose doubled value moves
    by more than ``1e-4`` relative raises `AccuracyError`.
    """
    ps = tuple(float(x) for x in (ps if ps is not None else DEFAULT_KERNEL_PS))
    radii = tuple(float(x) for x in (radii if radii is not None else DEFAULT_KERNEL_RADII))
    for r in radii:
        if not 0.0 <= r < 1.0:
            raise ConfigurationError(f"kernel scan radius {r!r} must lie in [0, 1)")
    rule = build_disk_rule(radial_order, angular_count, grading, grading_ratio, grading_levels)
    cells = [(p, r) for p in ps for r in radii]
    columns = ("p", "w_abs", "integral", "comparator", "ratio", "refine_rel_change")

    def row_fn(cell):
        p, r = cell
        value, _, rel_change = kernel_integral_detail(complex(r), p, rule)
        if rel_change > REFINE_TOL:
            raise AccuracyError(
                f"kernel integral at p = {p}, |w| = {r} changed by {rel_change:.3e} "
                f"under rule doubling (tolerance {REFINE_TOL})"
            )
        comparator = kernel_comparator(complex(r), p)
        return {
            "p": p,
            "w_abs": r,
            "integral": value,
            "comparator": comparator,
            "ratio": value / comparator,
            "refine_rel_change": rel_change,
        }

    rows = _map_ordered(row_fn, cells)
    per_p = {}
    for p in ps:
        ratios = [row["ratio"] for row in rows if row["p"] == p]
        band = max(ratios) / min(ratios)
        per_p[format(p, ".17g")] = {
            "ratio_min": min(ratios),
            "ratio_max": max(ratios),
            "band_factor": band,
            "band_ok": band <= 2.0,
            "max_refine_rel_change": max(
                row["refine_rel_change"] for row in rows if row["p"] == p
            ),
        }
    aggregates = {"per_p": per_p}

    return ScanReport(
        kind="kernel",
        seed=None,
        config={
            "ps": list(ps),
            "radii": list(radii),
            "rule": _rule_config(radial_order, angular_count, grading, grading_ratio, grading_levels),
            "refine_tolerance": REFINE_TOL,
        },
        columns=columns,
        rows=rows,
        aggregates=aggregates,
        versions=_versions(),
    )


def run_multiplier_scan(
    spec: FamilySpec,
    p,
    kind: str = "dyadic_pm1",
    value: complex = 2.0,
    radial_order: int | None = None,
    angular_count: int | None = None,
    grading: str = "uniform",
    grading_ratio: float = 0.5,
    grading_levels: int = 12,
) -> ScanReport:
    """Bracket ``||m f||_{A^p} / (constant * ||f||_{A^p})`` over a family.

    ``kind`` selects the multiplier: all-ones, a constant, or the dyadic
    ±1 sequence that flips sign on each dyadic block.
    """
    if kind not in MULTIPLIER_KINDS:
        raise ConfigurationError(f"unknown multiplier kind {kind!r}; expected one of {MULTIPLIER_KINDS}")
    pval = as_exponent(p).p
    if radial_order is None:
        radial_order = spec.degree + 1
    if angular_count is None:
        angular_count = 2 * spec.degree + 9
    rule = build_disk_rule(radial_order, angular_count, grading, grading_ratio, grading_levels)
    length = spec.degree + 1
    if kind == "ones":
        m = ones_multiplier(length)
    elif kind == "constant":
        m = constant_multiplier(value, length)
    else:
        m = dyadic_pm1_multiplier(length)
    constant = multiplier_constant(m)
    family = generate_family(spec)
    columns = ("id", "norm_f", "norm_mf", "ratio", "warning")

    def row_fn(item):
        i, f = item
        norm_f = bergman_norm(f, pval, rule)
        if norm_f == 0.0:
            return {
                "id": i,
                "norm_f": None,
                "norm_mf": None,
                "ratio": None,
                "warning": "zero norm; member skipped",
            }
        norm_mf = bergman_norm(apply_multiplier(f, m), pval, rule)
        return {
            "id": i,
            "norm_f": norm_f,
            "norm_mf": norm_mf,
            "ratio": norm_mf / (constant * norm_f),
            "warning": "",
        }

    rows = _map_ordered(row_fn, list(enumerate(family)))
    aggregates = {
        "member_count": len(rows),
        "skipped_count": sum(1 for r in rows if r["warning"]),
        "multiplier_constant": constant,
    }
    aggregates.update(_ratio_aggregates(rows))

    return ScanReport(
        kind="multiplier",
        seed=spec.seed,
        config={
            "p": pval,
            "multiplier_kind": kind,
            "constant_value": [complex(value).real, complex(value).imag] if kind == "constant" else None,
            "multiplier_constant": constant,
            "family": _family_config(spec),
            "rule": _rule_config(radial_order, angular_count, grading, grading_ratio, grading_levels),
        },
        columns=columns,
        rows=rows,
        aggregates=aggregates,
        versions=_versions(),
    )


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ConfigurationError(f"non-finite value {x!r} cannot enter a report")
    if x == 0.0:
        x = 0.0  # normalize -0.0 so sign bits never leak into bytes
    return format(x, ".17g")


def _scalar_token(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    raise ConfigurationError(f"cannot serialize report value of type {type(value).__name__}")


def _write_json(value, out: list, indent: int) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        items = list(value.items())
        for i, (k, v) in enumerate(items):
            out.append(pad + "  " + json.dumps(str(k)) + ": ")
            _write_json(v, out, indent + 1)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        if not len(value):
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(value):
            out.append(pad + "  ")
            _write_json(v, out, indent + 1)
            out.append(",\n" if i < len(value) - 1 else "\n")
        out.append(pad + "]")
    else:
        out.append(_scalar_token(value))


def report_as_dict(report: ScanReport) -> dict:
    return {
        "kind": report.kind,
        "seed": report.seed,
        "config": report.config,
        "columns": list(report.columns),
        "rows": report.rows,
        "aggregates": report.aggregates,
        "versions": report.versions,
    }


def emit(report: ScanReport, format: str = "json") -> bytes:
    """Serialize a report byte-stably.

    JSON uses fixed key order (construction order) and 17-significant-digit
    floats with -0.0 normalized.  CSV is exactly one header line plus one
    line per row (config and aggregates are JSON-only).
    """
    if format == "json":
        out: list = []
        _write_json(report_as_dict(report), out, 0)
        out.append("\n")
        return "".join(out).encode("utf-8")
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([_csv_cell(row.get(col)) for col in report.columns])
        return buf.getvalue().encode("utf-8")
    raise ConfigurationError(f"unknown report format {format!r}; expected 'json' or 'csv'")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return _format_float(float(v))
    if isinstance(v, (bool,)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _flatten(payload: dict, prefix: str = "") -> list:
    items = []
    for k, v in payload.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            items.extend(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            items.append((key, ";".join(_csv_cell(x) for x in v)))
        else:
            items.append((key, v))
    return items


def emit_payload(payload: dict, format: str = "json") -> bytes:
    """Serialize a single result object with the same byte-stable formatting
    as `emit`.  CSV flattens nested keys into dotted ``key,value`` rows."""
    if format == "json":
        out: list = []
        _write_json(payload, out, 0)
        out.append("\n")
        return "".join(out).encode("utf-8")
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("key", "value"))
        for key, v in _flatten(payload):
            writer.writerow((key, _csv_cell(v)))
        return buf.getvalue().encode("utf-8")
    raise ConfigurationError(f"unknown report format {format!r}; expected 'json' or 'csv'")
