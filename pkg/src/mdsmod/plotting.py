"""BER-versus-SNR figures from sweep CSV files."""
from __future__ import annotations

import warnings
from collections import defaultdict

from .io import read_csv


def load_curves(paths) -> dict[tuple, list[tuple[float, float]]]:
    """Group rows by ``(pipeline, N, Q, M1, mapping)``; rows without a usable BER are skipped."""
    curves = defaultdict(list)
    for path in paths:
        rows = read_csv(path)
        if not rows:
            warnings.warn(f"{path}: no data rows, skipped")
        for row in rows:
            try:
                snr, ber = float(row["snr_db"]), float(row["ber"])
            except (TypeError, ValueError):
                warnings.warn(f"{path}: unreadable row {row}, skipped")
                continue
            if ber <= 0:
                warnings.warn(f"{path}: zero BER at {snr} dB cannot go on a log axis, skipped")
                continue
            key = (row["pipeline"], row["N"], row["Q"], row["M1"], row["mapping"])
            curves[key].append((snr, ber))
    return {k: sorted(v) for k, v in curves.items()}


def plot(paths, out) -> int:
    """Write a log-scale BER plot to ``out``; returns the number of curves drawn."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    curves = load_curves(paths)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for (pipeline, N, Q, M1, mapping), pts in curves.items():
        x, y = zip(*pts)
        ax.semilogy(x, y, marker="o", label=f"{pipeline} N={N} Q={Q} M1={M1} {mapping}")
    ax.set_xlabel("symbol SNR 1/N0 (dB)")
    ax.set_ylabel("BER")
    ax.grid(True, which="both", alpha=0.3)
    if curves:
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)
    return len(curves)
