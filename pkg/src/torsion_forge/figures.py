"""Region figure for the g7 family: the circles L = 0, N = 0, M = 0, the
special points and the shaded region where alpha' > 0 with a non-flat
instanton."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle, Rectangle  # noqa: E402

from .anomaly import special_points  # noqa: E402
from .scalars import eval_approx  # noqa: E402

__all__ = ["CIRCLES", "region_figure"]

# center and radius of each boundary circle in the (eps, rho) plane
CIRCLES = {
    "L": ((1.5, -1.0), 2.0),
    "N": ((-0.5, 1.0), 1.0),
    "M": ((0.0, 0.5), 0.5),
}


def region_figure(rows: Iterable[Mapping[str, object]], path: str, step: float,
                  bounds: Tuple[float, float] = (-2.0, 2.0), title: Optional[str] = None) -> None:
    """Write the figure to ``path``; the format follows the file extension.

    ``rows`` are scan records with float-convertible eps and rho and a
    boolean in_DeltaPlus; each flagged grid point shades one cell.
    """
    fig, ax = plt.subplots(figsize=(8, 8))
    lo, hi = bounds
    for row in rows:
        if row["in_DeltaPlus"]:
            x, y = float(Fraction(str(row["eps"]))), float(Fraction(str(row["rho"])))
            ax.add_patch(Rectangle((x - step / 2, y - step / 2), step, step, color="#9ecae1", lw=0))
    styles = {"L": "tab:red", "N": "tab:green", "M": "tab:purple"}
    for name, (center, radius) in CIRCLES.items():
        ax.add_patch(Circle(center, radius, fill=False, color=styles[name], lw=1.5, label=f"{name} = 0"))
    for name, (e, r) in special_points().items():
        x, y = eval_approx(e, {}), eval_approx(r, {})
        ax.plot([x], [y], "ko", ms=4)
        ax.annotate(name, (x, y), textcoords="offset points", xytext=(5, 5))
    for name, (x, y) in {"LC": (0, 0), "+": (0.5, 0), "-": (-0.5, 0), "c": (0, 0.5)}.items():
        ax.plot([x], [y], marker="x", color="0.3", ms=5)
    # Hermitian line rho = 1/2 - eps
    ax.plot([lo, hi], [0.5 - lo, 0.5 - hi], ls="--", color="0.5", lw=1, label="Hermitian line")
    ax.set_xlim(lo, hi)
    ax.set_ylim(lo, hi)
    ax.set_aspect("equal")
    ax.axhline(0, color="0.8", lw=0.8)
    ax.axvline(0, color="0.8", lw=0.8)
    ax.set_xlabel("eps")
    ax.set_ylabel("rho")
    ax.set_title(title or "alpha' > 0 with non-flat instanton (shaded)")
    ax.legend(loc="lower left")
    fig.savefig(path)
    plt.close(fig)
