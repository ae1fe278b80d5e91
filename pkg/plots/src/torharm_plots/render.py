"""GridFileV1 heatmaps for torus field and error maps.

Values render through a linear or logarithmic color scale over an explicit
clip range (which is exactly the colorbar range).  Cells whose flag marks the
value untrustworthy are painted flat flag colors instead: DIV white (regions
of divergence), SLOW orange (partially converged halo), INSIDE light gray,
SING magenta.  An optional overlay draws the torus tube outline plus the three
midplane markers rho = R0 - r0^2/R0, rho = a, rho = R0.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.colors import LogNorm, Normalize

from .gridfile import FLAGS, Grid, load_grid

__all__ = ["PlotSpec", "RenderResult", "render"]

FLAG_COLORS = {
    "DIV": (1.0, 1.0, 1.0, 1.0),      # divergence regions in white
    "SLOW": (1.0, 0.6, 0.2, 1.0),
    "INSIDE": (0.75, 0.75, 0.75, 1.0),
    "SING": (1.0, 0.0, 1.0, 1.0),
}


@dataclass(frozen=True)
class PlotSpec:
    """One rendering request; clip is the exact colorbar range."""

    input_path: str
    output_path: str
    scale: str = "log"              # "linear" or "log"
    clip: tuple[float, float] = (1e-16, 1.0)
    overlay: tuple[float, float] | None = None  # (R0, r0)
    mirror: bool = False            # reflect to the full (x, z) plane
    cmap: str = "inferno"

    def __post_init__(self):
        if self.scale not in ("linear", "log"):
            raise ValueError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        lo, hi = self.clip
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise ValueError(f"clip range must be finite with lo < hi, got {self.clip}")
        if self.scale == "log" and lo <= 0.0:
            raise ValueError("log scale needs a positive clip floor")


@dataclass(frozen=True)
class RenderResult:
    """What was drawn: the per-cell RGBA actually painted plus the color range."""

    output_path: str
    rgba: np.ndarray        # (n_rho, n_z, 4) before any mirroring
    vmin: float
    vmax: float


def _cell_colors(grid: Grid, spec: PlotSpec):
    norm = (LogNorm(*spec.clip) if spec.scale == "log" else Normalize(*spec.clip))
    cmap = plt.get_cmap(spec.cmap).copy()
    cmap.set_bad(FLAG_COLORS["DIV"])  # nan values come from divergence regions
    vals = np.clip(grid.values, spec.clip[0], spec.clip[1])
    with np.errstate(invalid="ignore"):
        rgba = cmap(norm(np.ma.masked_invalid(vals)))
    for name, color in FLAG_COLORS.items():
        idx = FLAGS.index(name)
        rgba[grid.flags == idx] = color
    return rgba, norm


def render(spec: PlotSpec) -> RenderResult:
    """Render one GridFileV1 to PNG; the source values are never modified."""
    grid = load_grid(spec.input_path)
    rgba, norm = _cell_colors(grid, spec)

    # imshow wants (rows = z, cols = rho) with the first row at the bottom
    img = np.transpose(rgba, (1, 0, 2))
    extent = [grid.rho_min, grid.rho_max, grid.z_min, grid.z_max]
    if spec.mirror and grid.rho_min == 0.0:
        img = np.concatenate([img[:, ::-1], img], axis=1)
        extent[0] = -grid.rho_max

    fig, ax = plt.subplots(figsize=(7.0, 5.6))
    ax.imshow(img, origin="lower", extent=extent, interpolation="nearest",
              aspect="equal")
    mappable = plt.cm.ScalarMappable(norm=norm, cmap=spec.cmap)
    fig.colorbar(mappable, ax=ax, label="value")
    if spec.overlay is not None:
        _draw_overlay(ax, *spec.overlay, mirror=spec.mirror and grid.rho_min == 0.0)
    ax.set_xlabel("rho")
    ax.set_ylabel("z")
    fig.savefig(spec.output_path, dpi=150)
    plt.close(fig)
    return RenderResult(spec.output_path, rgba, norm.vmin, norm.vmax)


def _draw_overlay(ax, R0: float, r0: float, mirror: bool = False) -> None:
    theta = np.linspace(0.0, 2.0 * np.pi, 256)
    sides = (-1.0, 1.0) if mirror else (1.0,)
    a = float(np.sqrt(R0 * R0 - r0 * r0))
    for s in sides:
        ax.plot(s * (R0 + r0 * np.cos(theta)), r0 * np.sin(theta),
                color="tab:blue", lw=1.2)
        ax.plot([s * (R0 - r0 * r0 / R0)], [0.0], marker="o", mfc="none",
                color="tab:blue", ms=7)
        ax.plot([s * a], [0.0], marker="+", color="tab:blue", ms=9)
        ax.plot([s * R0], [0.0], marker="*", color="tab:blue", ms=9)
