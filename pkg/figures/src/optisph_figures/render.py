"""Render optisph CSV reports as figures.

Each report starts with a provenance line ``# optisph <command> seed=<n>``
followed by a CSV header and data rows.  A `FigureSpec` names the input
report, the figure kind, and the output image; rendering refuses reports
whose provenance or column schema does not match the requested kind, and
reports with no data rows.  Rendering is pure file-to-file and emits
identical bytes for identical inputs.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

REPORT_MAGIC = "# optisph"

#: figure kind -> (accepted commands, required column header)
KINDS = {
    "error-sweep": ({"exp1", "exp2"}, ["L", "trials", "e_max", "e_mean"]),
    "cond-curve": ({"cond"}, ["L", "m", "kappa"]),
    "cond-max": ({"cond"}, ["L", "m", "kappa"]),
    "err-surface": ({"errsurface"}, ["ell", "m", "e"]),
    "timing": ({"bench"}, ["L", "trials", "tau_i", "tau_f", "tau_f1"]),
}

PNG_METADATA = {"Software": "optisph-figures"}


class FigureError(ValueError):
    """Input report cannot be rendered as the requested figure kind."""


@dataclass(frozen=True)
class FigureSpec:
    source: Path
    kind: str
    out: Path

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigureError(
                f"unknown figure kind {self.kind!r}; expected one of {sorted(KINDS)}"
            )


def read_report(path, kind: str):
    """Parse and validate a report for the given figure kind."""
    commands, header = KINDS[kind]
    try:
        lines = Path(path).read_text(encoding="ascii").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise FigureError(f"{path}: {exc}")
    if not lines or not lines[0].startswith(REPORT_MAGIC + " "):
        raise FigureError(f"{path}: missing '{REPORT_MAGIC}' provenance line")
    fields = lines[0].split()
    if len(fields) < 4 or not fields[3].startswith("seed="):
        raise FigureError(f"{path}: malformed provenance line {lines[0]!r}")
    command = fields[2]
    if command not in commands:
        raise FigureError(
            f"{path}: report from {command!r} cannot be drawn as {kind!r} "
            f"(expects one of {sorted(commands)})"
        )
    rows = list(csv.reader(lines[1:]))
    if not rows or rows[0] != header:
        found = rows[0] if rows else None
        raise FigureError(f"{path}: expected columns {header}, found {found}")
    data = [row for row in rows[1:] if row]
    if not data:
        raise FigureError(f"{path}: no data rows to plot")
    return command, data


def _numeric(rows, columns):
    return [np.array([float(r[c]) for r in rows]) for c in columns]


def _render_error_sweep(command, rows, ax):
    usable = [r for r in rows if not r[2].startswith("error:")]
    if not usable:
        raise FigureError("no data rows to plot: every band limit failed")
    band, e_max, e_mean = _numeric(usable, [0, 2, 3])
    ax.semilogy(band, e_max, "o-", label="max error")
    ax.semilogy(band, e_mean, "s--", label="mean error")
    ax.set_xlabel("band limit L")
    ax.set_ylabel("round-trip error")
    ax.set_title(f"{command}: accuracy sweep")
    ax.legend()


def _split_cond(rows):
    curves, maxima = {}, {}
    for r in rows:
        L = int(r[0])
        if r[1] == "max":
            maxima[L] = float(r[2])
        else:
            curves.setdefault(L, []).append((int(r[1]), float(r[2])))
    return curves, maxima


def _render_cond_curve(command, rows, ax):
    curves, _ = _split_cond(rows)
    if not curves:
        raise FigureError("no data rows to plot: no per-order rows present")
    for L in sorted(curves):
        pts = sorted(curves[L])
        ax.semilogy([m for m, _ in pts], [k for _, k in pts], label=f"L = {L}")
    ax.set_xlabel("order m")
    ax.set_ylabel("condition number")
    ax.set_title("per-order conditioning")
    ax.legend()


def _render_cond_max(command, rows, ax):
    _, maxima = _split_cond(rows)
    if not maxima:
        raise FigureError("no data rows to plot: no max-summary rows present")
    band = sorted(maxima)
    ax.semilogy(band, [maxima[L] for L in band], "o-")
    ax.set_xlabel("band limit L")
    ax.set_ylabel("max condition number")
    ax.set_title("worst-order conditioning vs band limit")


def _render_err_surface(command, rows, ax):
    ell, m, e = _numeric(rows, [0, 1, 2])
    L = int(ell.max()) + 1
    surface = np.full((L, 2 * L - 1), np.nan)
    floor = np.finfo(float).tiny
    surface[ell.astype(int), m.astype(int) + L - 1] = np.log10(np.maximum(e, floor))
    mesh = ax.imshow(
        surface,
        origin="lower",
        aspect="auto",
        extent=(-(L - 1) - 0.5, L - 1 + 0.5, -0.5, L - 1 + 0.5),
    )
    ax.set_xlabel("order m")
    ax.set_ylabel("degree ell")
    ax.set_title("log10 coefficient error")
    plt.colorbar(mesh, ax=ax)


def _render_timing(command, rows, ax):
    band, tau_i, tau_f, tau_f1 = _numeric(rows, [0, 2, 3, 4])
    order = np.argsort(band)
    band, tau_i, tau_f, tau_f1 = band[order], tau_i[order], tau_f[order], tau_f1[order]
    ax.loglog(band, tau_i, "o-", label="inverse")
    ax.loglog(band, tau_f, "s-", label="forward")
    ax.loglog(band, tau_f1, "^--", label="forward, solve step")
    # cubic and quartic guides anchored at the smallest measured band limit
    anchor = tau_i[0]
    ax.loglog(band, anchor * (band / band[0]) ** 3, "r-", label="O(L^3)")
    ax.loglog(band, anchor * (band / band[0]) ** 4, "r--", label="O(L^4)")
    ax.set_xlabel("band limit L")
    ax.set_ylabel("wall time [s]")
    ax.set_title("transform timings")
    ax.legend()


_RENDERERS = {
    "error-sweep": _render_error_sweep,
    "cond-curve": _render_cond_curve,
    "cond-max": _render_cond_max,
    "err-surface": _render_err_surface,
    "timing": _render_timing,
}


def render(spec: FigureSpec):
    """Render one figure and write it to ``spec.out``; returns the Figure."""
    command, rows = read_report(spec.source, spec.kind)
    fig, ax = plt.subplots(figsize=(6.4, 4.8), dpi=120)
    try:
        _RENDERERS[spec.kind](command, rows, ax)
        fig.tight_layout()
        fig.savefig(spec.out, metadata=PNG_METADATA)
    finally:
        plt.close(fig)
    return fig
