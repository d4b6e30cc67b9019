"""Figure rendering for patches, slices and experiment reports.

Figures are written straight to files (Agg backend); they accompany the
delimited outputs of the command line and never feed back into any
exact computation.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_Z5 = complex(math.cos(2 * math.pi / 5), math.sin(2 * math.pi / 5))
_Z5_3 = complex(math.cos(6 * math.pi / 5), math.sin(6 * math.pi / 5))


def plot_patch(patch, path, max_points: int = 20000) -> None:
    """Scatter of the patch as seen from the positive x axis."""
    pts = patch.points
    step = max(1, len(pts) // max_points)
    ys, zs, hs = [], [], []
    for p in pts[::step]:
        v = p.value()
        ys.append(v[1].embed())
        zs.append(v[2].embed())
        hs.append(v[0].embed())
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter(ys, zs, s=4, c=hs, cmap="viridis", linewidths=0)
    ax.set_aspect("equal")
    ax.set_xlabel("y")
    ax.set_ylabel("z")
    ax.set_title(f"{patch.kind}-type patch, {patch.size} points")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_slice(points, window, path) -> None:
    """Physical slice beside its star image inside the slice window."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 5))
    zs = [z.embed() for z in points]
    ax1.scatter([z.real for z in zs], [z.imag for z in zs], s=8,
                color="tab:blue", linewidths=0)
    ax1.set_aspect("equal")
    ax1.set_title(f"slice, {len(points)} points")
    stars = []
    for z in points:
        r, s = z.star5()
        w = r.embed() + s.embed() * _Z5_3
        stars.append(w)
    ax2.scatter([w.real for w in stars], [w.imag for w in stars], s=8,
                color="tab:orange", linewidths=0)
    poly = []
    for r, s in window.vertices:
        poly.append(r.embed() + s.embed() * _Z5_3)
    if poly:
        poly.append(poly[0])
        ax2.plot([w.real for w in poly], [w.imag for w in poly],
                 color="black", linewidth=1)
    ax2.set_aspect("equal")
    ax2.set_title("star image in the slice window")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_centroid_trend(report: dict, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(report["radii"], report["deviations"], "o-",
              label="star-centroid deviation")
    ax.axhline(report["threshold"], color="grey", linestyle="--",
               label=f"threshold {report['threshold']}")
    ax.set_xlabel("patch radius")
    ax.set_ylabel("deviation from window centroid")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_cardinality_hist(report: dict, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(report["cardinalities"], bins=30, color="tab:green")
    ax.set_xlabel("sample cardinality")
    ax.set_ylabel("count")
    ax.set_title(f"{report['samples']} convex samples, "
                 f"{len(report['collisions'])} collisions")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
