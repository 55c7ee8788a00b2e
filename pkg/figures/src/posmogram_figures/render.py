"""Figure rendering: solid/dashed overlays and the labeled l=5 family."""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, read_density_file, read_overlay_file

FIGURE_IDS = ("fig1", "fig2", "fig3")


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    inputs: tuple
    output: str

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise SchemaError(f"unknown figure id {self.figure_id!r}; use one of {FIGURE_IDS}")
        if not self.inputs:
            raise SchemaError("at least one input file is required")
        if not str(self.output).endswith((".png", ".svg")):
            raise SchemaError("output image must be .png or .svg")


def _padded_limits(values, margin=0.05):
    lo, hi = float(np.min(values)), float(np.max(values))
    pad = margin * (hi - lo or 1.0)
    return lo - pad, hi + pad


def _count_nodes(density, rel_threshold=1e-4):
    d = np.asarray(density)
    thr = rel_threshold * d.max()
    k = np.arange(1, d.size - 1)
    return int(np.count_nonzero((d[k] < d[k - 1]) & (d[k] < d[k + 1]) & (d[k] < thr)))


def _render_overlay(spec: FigureSpec, ax):
    overlay = read_overlay_file(spec.inputs[0])
    mode = f"({overlay.report.get('l', '?')},{overlay.report.get('m', '?')})"
    level = overlay.report.get("sho_level", overlay.report.get("n", "?"))
    ax.plot(overlay.lambdas, overlay.density, "-", color="tab:blue", label=mode)
    ax.plot(overlay.lambdas, overlay.sho_density, "--", color="tab:red",
            label=f"SHO n={level}")
    ax.set_xlim(*_padded_limits(overlay.lambdas))
    ax.set_ylim(*_padded_limits([0.0, overlay.density.max(), overlay.sho_density.max()]))


def _render_family(spec: FigureSpec, ax):
    blocks = [b for path in spec.inputs for b in read_density_file(path)]
    peak = 0.0
    for block in blocks:
        nodes = _count_nodes(block.density)
        ax.plot(block.lambdas, block.density,
                label=f"({block.l},{block.m}), {nodes} node{'s' if nodes != 1 else ''}")
        peak = max(peak, float(block.density.max()))
    ax.set_xlim(*_padded_limits(np.concatenate([b.lambdas for b in blocks])))
    ax.set_ylim(*_padded_limits([0.0, peak]))


def render(spec: FigureSpec) -> str:
    """Write the requested figure and return the output path."""
    fig, ax = plt.subplots(figsize=(7.2, 4.5))
    try:
        if spec.figure_id in ("fig1", "fig3"):
            _render_overlay(spec, ax)
        else:
            _render_family(spec, ax)
        ax.set_xlabel("posmom eigenvalue")
        ax.set_ylabel("distribution density")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(spec.output)
    finally:
        plt.close(fig)
    return str(spec.output)
