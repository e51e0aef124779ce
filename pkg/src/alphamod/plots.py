"""Figure rendering for symbol scans, certificates and coefficient grids.

Everything draws through the Agg backend into PNG files with pinned
metadata, so repeated runs on identical inputs produce identical bytes.
"""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt  # noqa: E402

from .certify import Certificate  # noqa: E402
from .group import SampledSignal  # noqa: E402
from .symbol import SymbolGrid  # noqa: E402
from .transform import CoefficientGrid  # noqa: E402

__all__ = [
    "plot_symbol",
    "plot_parts",
    "plot_certificate",
    "plot_coefficients",
    "plot_signal",
]

_SAVE = dict(dpi=110, metadata={"Software": "alphamod"})


def _maybe_logx(ax, x):
    x = np.asarray(x)
    pos = x[x > 0]
    if pos.size >= 2 and pos.max() / max(pos.min(), 1e-12) > 100.0 and x.min() >= 0:
        ax.set_xscale("log")


def plot_symbol(grid: SymbolGrid, path, limit=None, title="") -> str:
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    x = grid.xi_values
    ax.plot(x, grid.m_values, lw=1.4, color="#1f5fa8", label="m(xi)")
    if limit is not None:
        ax.axhline(limit, color="#888888", lw=0.9, ls="--", label="limit")
    _maybe_logx(ax, x)
    ax.set_xlabel("xi")
    ax.set_ylabel("m(xi)")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    ax.grid(alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)
    return str(path)


def plot_parts(grid: SymbolGrid, path, title="") -> str:
    if grid.parts is None:
        raise ValueError("grid carries no per-interval data")
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    mask = np.all(np.isfinite(grid.parts), axis=1)
    x = grid.xi_values[mask]
    labels = ("far left", "critical window", "mid left", "right half-line")
    colors = ("#b44", "#b84", "#484", "#15a")
    for k in range(4):
        vals = np.abs(grid.parts[mask, k])
        ax.plot(x, np.maximum(vals, 1e-300), lw=1.2, color=colors[k],
                label=labels[k])
    ax.set_yscale("log")
    _maybe_logx(ax, x)
    ax.set_xlabel("xi")
    ax.set_ylabel("interval contribution")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    ax.grid(alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)
    return str(path)


def plot_certificate(cert: Certificate, grid: SymbolGrid, path, title="") -> str:
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(grid.xi_values, grid.m_values, lw=1.4, color="#1f5fa8",
            label="m(xi) scan")
    ax.axhline(cert.limit_value, color="#888888", lw=0.9, ls="--",
               label="large-xi limit")
    if np.isfinite(cert.A_est):
        ax.axhline(cert.A_est, color="#2a7d2a", lw=1.1, label="A_est")
    if np.isfinite(cert.B_est):
        ax.axhline(cert.B_est, color="#a03030", lw=1.1, label="B_est")
    if cert.tail_report is not None:
        t = cert.tail_report.total
        ax.fill_between(
            [cert.xi_max, max(grid.xi_values.max(), cert.xi_max) * 1.05],
            cert.limit_value - t, cert.limit_value + t,
            color="#d8c468", alpha=0.45, label="certified tail band",
        )
    _maybe_logx(ax, grid.xi_values)
    ax.set_xlabel("xi")
    ax.set_ylabel("m(xi)")
    ax.set_title(title or f"{cert.window_id}, alpha={cert.alpha:g}: {cert.status}")
    ax.legend(loc="best", fontsize=9)
    ax.grid(alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)
    return str(path)


def plot_coefficients(grid: CoefficientGrid, path, title="") -> str:
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    mag = np.abs(grid.values).T
    mesh = ax.pcolormesh(grid.x_values(), grid.omega, mag, shading="auto",
                         cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="|V(x, omega)|")
    ax.set_xlabel("x")
    ax.set_ylabel("omega")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)
    return str(path)


def plot_signal(sig: SampledSignal, path, other: SampledSignal | None = None,
                title="") -> str:
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    t = sig.times()
    ax.plot(t, sig.samples.real, lw=1.0, color="#1f5fa8", label="Re")
    ax.plot(t, np.abs(sig.samples), lw=1.0, color="#a03030", label="|.|")
    if other is not None:
        ax.plot(other.times(), np.abs(other.samples - sig.samples), lw=0.9,
                color="#2a7d2a", label="|difference|")
    ax.set_xlabel("t")
    ax.set_ylabel("amplitude")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    ax.grid(alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)
    return str(path)
