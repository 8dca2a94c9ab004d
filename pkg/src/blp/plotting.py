"""Figure rendering for scan reports.

Kept separate from report emission on purpose: reports are byte-stable
machine-readable artifacts, figures are a convenience view rendered next to
them when the CLI is passed ``--figures``.  Nothing here feeds back into
report bytes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .errors import ConfigurationError
from .harness import ScanReport


def _ratio_rows(report: ScanReport) -> tuple[list, list]:
    ids, ratios = [], []
    for row in report.rows:
        if row.get("ratio") is not None:
            ids.append(row["id"])
            ratios.append(row["ratio"])
    return ids, ratios


def _family_figures(report: ScanReport, base: Path) -> list[Path]:
    ids, ratios = _ratio_rows(report)
    if not ratios:
        return []
    agg = report.aggregates
    label = f"{report.kind} scan, p = {report.config['p']:g}"
    paths = []

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(ids, ratios, ".", markersize=4, color="#2c6fbb")
    for key, style in (("ratio_min", ":"), ("ratio_median", "--"), ("ratio_max", ":")):
        if agg.get(key) is not None:
            ax.axhline(agg[key], linestyle=style, linewidth=1, color="#b25542")
    ax.set_xlabel("member id")
    ax.set_ylabel("ratio")
    ax.set_title(label)
    fig.tight_layout()
    path = base.with_name(base.name + "_ratios.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(5.4, 4.2))
    ax.hist(ratios, bins=24, color="#2c6fbb", edgecolor="white")
    ax.set_xlabel("ratio")
    ax.set_ylabel("members")
    ax.set_title(label + " (spread)")
    fig.tight_layout()
    path = base.with_name(base.name + "_spread.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)
    return paths


def _kernel_figures(report: ScanReport, base: Path) -> list[Path]:
    ps = report.config["ps"]
    paths = []

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for p in ps:
        pts = [(1.0 - row["w_abs"], row["ratio"]) for row in report.rows if row["p"] == p]
        pts.sort(reverse=True)
        ax.semilogx([x for x, _ in pts], [y for _, y in pts], "o-", label=f"p = {p:g}")
    ax.invert_xaxis()
    ax.set_xlabel("1 - |w|")
    ax.set_ylabel("integral x (1 - |w|^2)^p")
    ax.set_title("kernel growth against the boundary comparator")
    ax.legend()
    fig.tight_layout()
    path = base.with_name(base.name + "_ratios.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for p in ps:
        pts = [(1.0 - row["w_abs"], row["integral"]) for row in report.rows if row["p"] == p]
        pts.sort(reverse=True)
        ax.loglog([x for x, _ in pts], [y for _, y in pts], "o-", label=f"integral, p = {p:g}")
        cmp_pts = [(1.0 - row["w_abs"], row["comparator"]) for row in report.rows if row["p"] == p]
        cmp_pts.sort(reverse=True)
        ax.loglog([x for x, _ in cmp_pts], [y for _, y in cmp_pts], "--", color="gray")
    ax.invert_xaxis()
    ax.set_xlabel("1 - |w|")
    ax.set_ylabel("value")
    ax.set_title("kernel integrals (solid) vs comparator (dashed)")
    ax.legend()
    fig.tight_layout()
    path = base.with_name(base.name + "_integrals.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)
    return paths


def render_scan_figures(report: ScanReport, out_path) -> list[Path]:
    """Render PNG figures for a scan next to its report file.

    ``out_path`` is the report path; figures land beside it with derived
    names (``<stem>_ratios.png`` etc.).  Returns the written paths.
    """
    base = Path(out_path)
    base = base.with_name(base.stem)
    if report.kind == "kernel":
        return _kernel_figures(report, base)
    if report.kind in ("equivalence", "multiplier"):
        return _family_figures(report, base)
    raise ConfigurationError(f"no figure renderer for scan kind {report.kind!r}")
