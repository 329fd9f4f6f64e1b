"""Static plot of aligned citation histograms (optional matplotlib dependency)."""

from __future__ import annotations

from .analysis import HistogramSpec


def plot_histogram(spec: HistogramSpec, path, label_a: str = "a", label_b: str = "b",
                   max_citations: int | None = None) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    lows = [b[0] for b in spec.bins]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(lows, [b[2] for b in spec.bins], width=spec.bin_width, align="edge",
           alpha=0.6, label=label_a)
    ax.bar(lows, [b[3] for b in spec.bins], width=spec.bin_width, align="edge",
           alpha=0.6, label=label_b)
    if max_citations is not None:
        ax.set_xlim(0, max_citations)
    ax.set_xlabel("citations")
    ax.set_ylabel("papers")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
