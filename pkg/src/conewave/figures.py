"""Matplotlib renderings of the report artifacts, written next to the CSV/JSON.

All figures are file outputs (Agg backend); nothing here is interactive.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return Path(path)


def fig_sobolev(path, r_inner, l1_masses, l2_masses, slope):
    r_inner = np.asarray(r_inner)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    x = np.log(1.0 / r_inner)
    ax1.plot(x, l2_masses, "o-", label="quadratic mass")
    ax1.plot(x, l2_masses[0] + slope * (x - x[0]), "k--",
             label=f"slope {slope:.4f}")
    ax1.set_xlabel("ln(1/r_inner)")
    ax1.set_ylabel("integral of |grad f1|^2")
    ax1.legend()
    incr = np.diff(l1_masses)
    ax2.semilogy(np.arange(1, len(l1_masses)), np.abs(incr), "s-")
    ax2.set_xlabel("octave")
    ax2.set_ylabel("|increment| of integral of |grad f1|")
    return _save(fig, path)


def fig_margin_hist(path, margins, beta=None, title="lower-bound margins"):
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.hist(np.asarray(margins), bins=60, color="steelblue")
    ax.axvline(0.0, color="k", lw=0.8)
    ax.set_xlabel("margin")
    ax.set_ylabel("count")
    if beta is not None:
        title = f"{title} (beta={beta:.4g})"
    ax.set_title(title)
    return _save(fig, path)


def fig_profile(path, s, values, label="P(s)"):
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.plot(s, values)
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("s")
    ax.set_ylabel(label)
    return _save(fig, path)


def fig_responses(path, tables):
    """tables: list of (eps, s, R) triples."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    for eps, s, r in tables:
        ax.plot(s, r, label=f"eps={eps:g}")
    ax.set_xlabel("scaled radius r/eps")
    ax.set_ylabel("radial response R")
    ax.legend(fontsize=8)
    return _save(fig, path)


def fig_energy_trace(path, trace):
    arr = np.asarray(trace, dtype=float)
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.plot(arr[:, 0], arr[:, 1])
    ax.set_xlabel("t")
    ax.set_ylabel("discrete energy")
    e0 = arr[0, 1]
    if e0 > 0:
        drift = np.max(np.abs(arr[:, 1] - e0)) / e0
        ax.set_title(f"relative drift {drift:.2e}")
    return _save(fig, path)


def fig_snapshot(path, u, extent, t=None):
    fig, ax = plt.subplots(figsize=(5, 4.2))
    im = ax.imshow(u.T, origin="lower", cmap="RdBu_r",
                   extent=(-extent, extent, -extent, extent))
    fig.colorbar(im, ax=ax, shrink=0.85)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if t is not None:
        ax.set_title(f"u at t={t:g}")
    return _save(fig, path)


def fig_convergence(path, h_values, errors, reference_order=2.0):
    h = np.asarray(h_values, dtype=float)
    e = np.asarray(errors, dtype=float)
    fig, ax = plt.subplots(figsize=(5, 3.8))
    ax.loglog(h, e, "o-", label="measured")
    ax.loglog(h, e[0] * (h / h[0]) ** reference_order, "k--",
              label=f"order {reference_order:g}")
    ax.set_xlabel("grid spacing h")
    ax.set_ylabel("error")
    ax.legend()
    return _save(fig, path)


def fig_distances(path, eps_values, distances, ylabel="pairwise L2 distance"):
    fig, ax = plt.subplots(figsize=(5, 3.8))
    ax.loglog(eps_values[:-1], distances, "o-")
    ax.set_xlabel("eps")
    ax.set_ylabel(ylabel)
    return _save(fig, path)


def fig_margins_vs_eps(path, eps_values, margins):
    fig, ax = plt.subplots(figsize=(5, 3.8))
    ax.semilogx(eps_values, margins, "o-")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("eps")
    ax.set_ylabel("min lower-bound margin")
    return _save(fig, path)


def fig_crossings(path, eps_values, xs, title="slice crossing points"):
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.semilogx(eps_values, xs, "o")
    ax.axhline(1.0, color="gray", lw=0.8, ls="--")
    ax.axhline(-1.0, color="gray", lw=0.8, ls="--")
    ax.set_xlabel("eps")
    ax.set_ylabel("x coordinate of crossing")
    ax.set_title(title)
    return _save(fig, path)


def fig_corpus(path, curves, limit=None):
    fig, ax = plt.subplots(figsize=(5, 4.2))
    for c in curves:
        ax.plot(c.points[:, 1], c.points[:, 2], lw=0.7, alpha=0.6)
    if limit is not None:
        ax.plot(limit.points[:, 1], limit.points[:, 2], "k-", lw=2.0)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    return _save(fig, path)
