"""Plot the CSV artifacts written by `sparse-refine benchmark --out DIR`.

Usage: python scripts/plot_experiment.py DIR
Writes PNG files next to the CSVs.
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

MODELS = ["baseline", "informed", "target"]


def convergence(out: Path) -> None:
    df = pd.read_csv(out / "convergence.csv")
    fig, ax = plt.subplots()
    ax.semilogy(df.n_refined, df.max_abs_error, label="max abs error")
    ax.semilogy(df.n_refined, df.rmse, label="RMSE")
    ax.set_xlabel("refinement points")
    ax.legend()
    fig.savefig(out / "convergence.png", dpi=150)


def histogram(out: Path) -> None:
    df = pd.read_csv(out / "histogram.csv")
    fig, ax = plt.subplots()
    for model in ["baseline", "informed"]:
        h = df[df.model == model]
        ax.stairs(h.density, list(h.lower) + [h.upper.iloc[-1]], label=model)
    ax.set_xlabel("percentage error")
    ax.set_ylabel("density")
    ax.legend()
    fig.savefig(out / "histogram.png", dpi=150)


def errors(out: Path) -> None:
    df = pd.read_csv(out / "errors.csv")
    fig, ax = plt.subplots()
    for model in MODELS:
        ax.plot(df["index"], df[f"pct_{model}"], "o", ms=3, label=model)
    ax.set_xlabel("test point")
    ax.set_ylabel("percentage error")
    ax.legend()
    fig.savefig(out / "errors.png", dpi=150)


def slices(out: Path) -> None:
    for path in sorted(out.glob("slice_*.csv")):
        df = pd.read_csv(path)
        axes = path.stem.removeprefix("slice_").split("_")
        if len(axes) == 1:
            fig, ax = plt.subplots()
            for col in ["truth"] + MODELS:
                ax.plot(df[axes[0]], df[col], label=col)
            ax.set_xlabel(axes[0])
            ax.legend()
        else:
            a, b = axes
            n = int(round(len(df) ** 0.5))
            fig, grid = plt.subplots(1, 4, figsize=(16, 4), subplot_kw={"projection": "3d"})
            for ax, col in zip(grid, ["truth"] + MODELS):
                ax.plot_surface(
                    df[a].to_numpy().reshape(n, n),
                    df[b].to_numpy().reshape(n, n),
                    df[col].to_numpy().reshape(n, n),
                    cmap="viridis",
                )
                ax.set_title(col)
        fig.savefig(path.with_suffix(".png"), dpi=150)


def main() -> None:
    out = Path(sys.argv[1])
    convergence(out)
    histogram(out)
    errors(out)
    slices(out)


if __name__ == "__main__":
    main()
