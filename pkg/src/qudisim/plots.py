"""Figure rendering for the CLI (histograms and gate-count comparisons)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .encoding import representation_gate_counts
from .sim import ShotHistogram


def histogram_figure(hist: ShotHistogram, path, expected_level: float | None = None) -> None:
    """Bar chart of outcome probabilities, outcomes sorted lexicographically."""
    outcomes = sorted(hist.counts)
    probs = [hist.counts[o] / hist.shots for o in outcomes] if hist.shots else []
    fig, ax = plt.subplots(figsize=(max(6.0, 0.22 * len(outcomes)), 3.5))
    ax.bar(range(len(outcomes)), probs, color="#336699")
    if expected_level is not None:
        ax.axhline(expected_level, color="#aa3333", ls="--", lw=1,
                   label=f"expected {expected_level:.4f}")
        ax.legend(frameon=False, fontsize=8)
    ax.set_xticks(range(len(outcomes)))
    ax.set_xticklabels(outcomes, rotation=90, fontsize=6, family="monospace")
    ax.set_ylabel("probability")
    ax.set_xlabel("measured digit string")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def gate_count_figure(m: int, n: int, path) -> None:
    """Gate totals of the four encodings versus the column exponent n."""
    n_axis = list(range(0, max(n, 4) + 1))
    series: dict[str, list[int]] = {}
    for nn in n_axis:
        for name, count in representation_gate_counts(nn, m).items():
            series.setdefault(name, []).append(max(count, 1))  # log scale floor
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    for name, counts in series.items():
        ax.semilogy(n_axis, counts, marker="o", ms=3, label=name)
    ax.axvline(n, color="gray", lw=0.8, ls=":")
    ax.set_xlabel("n (columns = 2^n)")
    ax.set_ylabel(f"elementary gates (m={m})")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
