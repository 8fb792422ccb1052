"""Figures written straight to image files (Agg backend, no display needed)."""

from __future__ import annotations

from math import isqrt

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def matrix_figure(M, path, title: str = "") -> None:
    """Entry moduli as a heatmap, with block lines when the size is a square."""
    M = np.asarray(M)
    fig, ax = plt.subplots(figsize=(4.5, 4.0))
    im = ax.imshow(np.abs(M), cmap="viridis", interpolation="nearest")
    N = M.shape[0]
    n = isqrt(N)
    if n * n == N and n > 1 and M.shape[1] == N:
        for k in range(1, n):
            ax.axhline(k * n - 0.5, color="white", lw=0.6)
            ax.axvline(k * n - 0.5, color="white", lw=0.6)
    ax.set_xticks([])
    ax.set_yticks([])
    ax.set_title(title or f"|entries|, {M.shape[0]}x{M.shape[1]}")
    fig.colorbar(im, ax=ax, fraction=0.046)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def singular_values_figure(s, path, title: str = "", reference=None) -> None:
    """Singular values in descending order, optionally against expected values."""
    s = np.asarray(s, dtype=float)
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    k = np.arange(1, s.size + 1)
    ax.plot(k, s, "o-", label="computed")
    if reference is not None:
        ax.plot(k, np.sort(np.asarray(reference, dtype=float))[::-1], "x", ms=9, label="expected")
        ax.legend()
    ax.set_xlabel("index")
    ax.set_ylabel("singular value")
    ax.set_title(title or "singular values")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
