"""Optional PNG rendering of density grids and Carleman partial sums.

The CLI only calls into this module when ``--figure`` is given; the
default output stays plain data.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, path) -> str:
    fig.tight_layout()
    # fixed metadata so repeated runs write identical files
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return str(path)


def density_figure(rows: list[dict], title: str, path) -> str:
    """Line plot of the (x, density) grid rows."""
    xs = [float(r["x"]) for r in rows]
    ys = [float(r["density"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, ys, lw=1.5, color="tab:blue")
    ax.set_xlabel("x")
    ax.set_ylabel("f(x)")
    ax.set_title(title)
    ax.set_ylim(bottom=0)
    return _finish(fig, path)


def carleman_figure(partial_sums, rho_hat: float, title: str, path) -> str:
    """Partial sums of the Carleman series against n on log-log axes."""
    ns = list(range(1, len(partial_sums) + 1))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(ns, [float(s) for s in partial_sums], marker=".", lw=1)
    ax.set_xlabel("n")
    ax.set_ylabel("partial sum")
    ax.set_title(f"{title}  (rho_hat = {rho_hat:.3f})")
    return _finish(fig, path)
