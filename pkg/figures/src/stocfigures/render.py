"""Figure rendering from stocbeam CSV data.

``render_figure <id> --data <dir> --out <file>`` draws one of the five
panels (2a, 2b, 3, 4, 5) from the preset CSV files produced by
``stocbeam figure <n>``. Only the CSVs are consulted; nothing is
recomputed here.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .io import SchemaError, load_csv, require_columns

FIGURE_IDS = ("2a", "2b", "3", "4", "5")

# colour naming for the three voltages of panel 3
_FIG3_SERIES = (("fig3_200kV", "200 kV", "tab:blue"),
                ("fig3_20kV", "20 kV", "magenta"),
                ("fig3_2kV", "2 kV", "tab:green"))
_FIG4_SERIES = (("fig4_10mrad", "10 mrad"),
                ("fig4_25mrad", "25 mrad"),
                ("fig4_50mrad", "50 mrad"))


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: which panel, from which files, on which scales."""

    figure_id: str
    csv_paths: tuple[Path, ...]
    xscale: str = "linear"
    yscale: str = "linear"
    labels: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(f"unknown figure id {self.figure_id!r}")
        for path in self.csv_paths:
            if not path.exists():
                raise SchemaError(f"{path}: file not found")


def build_spec(figure_id: str, data_dir: str | Path) -> FigureSpec:
    """Assemble the spec for a panel from a preset CSV directory."""
    data_dir = Path(data_dir)
    if figure_id in ("2a", "2b"):
        names = tuple(f"fig{figure_id}_n{n}" for n in range(6))
        labels = tuple(f"n={n}" for n in range(6))
        return FigureSpec(
            figure_id,
            tuple(data_dir / f"{name}.csv" for name in names),
            labels=labels,
        )
    if figure_id == "3":
        return FigureSpec(
            "3",
            tuple(data_dir / f"{name}.csv" for name, _, _ in _FIG3_SERIES),
            xscale="log",
            yscale="log",
            labels=tuple(label for _, label, _ in _FIG3_SERIES),
        )
    if figure_id == "4":
        return FigureSpec(
            "4",
            tuple(data_dir / f"{name}.csv" for name, _ in _FIG4_SERIES),
            xscale="log",
            yscale="log",
            labels=tuple(label for _, label in _FIG4_SERIES),
        )
    if figure_id == "5":
        return FigureSpec(
            "5",
            (data_dir / "fig5_20kV.csv", data_dir / "fig5_200V.csv"),
            xscale="log",
            labels=("20 kV", "200 V"),
        )
    raise ValueError(f"unknown figure id {figure_id!r}")


def _draw_2a(spec: FigureSpec, ax) -> None:
    for path, label in zip(spec.csv_paths, spec.labels):
        table = load_csv(path)
        require_columns(table, ("q_r", "rho_up", "rho_down"))
        qr = table.column("q_r")
        (line,) = ax.plot(qr, table.column("rho_up"), "-", label=label)
        ax.plot(qr, table.column("rho_down"), "--", color=line.get_color())
    ax.set_xlabel(r"$Qr$")
    ax.set_ylabel(r"spin density")
    ax.legend(title=r"$\alpha = n\pi/10$", fontsize="small")


def _draw_2b(spec: FigureSpec, ax) -> None:
    for path, label in zip(spec.csv_paths, spec.labels):
        table = load_csv(path)
        require_columns(table, ("q_r", "p_diff"))
        ax.plot(table.column("q_r"), table.column("p_diff"), label=label)
    ax.set_xlabel(r"$Qr$")
    ax.set_ylabel(r"differential polarisation")
    ax.set_ylim(-1.05, 1.05)
    ax.legend(title=r"$\alpha = n\pi/10$", fontsize="small")


def _draw_radius_polarisation(spec: FigureSpec, ax, colors=None) -> None:
    for i, (path, label) in enumerate(zip(spec.csv_paths, spec.labels)):
        table = load_csv(path)
        require_columns(table, ("delta_r_nm", "p"))
        kwargs = {"color": colors[i]} if colors else {}
        ax.plot(table.column("delta_r_nm"), table.column("p"), label=label, **kwargs)
    ax.set_xlabel(r"detector radius $\Delta r$ [nm]")
    ax.set_ylabel(r"polarisation $p$")
    ax.legend(fontsize="small")


def _draw_5(spec: FigureSpec, ax_left) -> None:
    ax_right = ax_left.twinx()
    for path, label, ax, color in zip(
        spec.csv_paths, spec.labels, (ax_left, ax_right), ("tab:blue", "tab:red")
    ):
        table = load_csv(path)
        require_columns(table, ("delta_r_nm", "p", "de", "fom"))
        ax.plot(table.column("delta_r_nm"), table.column("fom"),
                color=color, label=label)
        ax.set_ylabel(f"FoM ({label})", color=color)
        ax.tick_params(axis="y", labelcolor=color)
    ax_left.set_xlabel(r"detector radius $\Delta r$ [nm]")


def render(spec: FigureSpec, out: str | Path) -> Path:
    """Draw the panel and write it to ``out``; returns the written path."""
    fig = render_to_figure(spec)
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out)
    plt.close(fig)
    return out


def render_to_figure(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if spec.figure_id == "2a":
        _draw_2a(spec, ax)
    elif spec.figure_id == "2b":
        _draw_2b(spec, ax)
    elif spec.figure_id == "3":
        _draw_radius_polarisation(
            spec, ax, colors=[c for _, _, c in _FIG3_SERIES]
        )
    elif spec.figure_id == "4":
        _draw_radius_polarisation(spec, ax)
    elif spec.figure_id == "5":
        _draw_5(spec, ax)
    ax.set_xscale(spec.xscale)
    ax.set_yscale(spec.yscale)
    fig.tight_layout()
    return fig


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figure", description="Render a panel from stocbeam CSV data"
    )
    parser.add_argument("figure_id", choices=FIGURE_IDS)
    parser.add_argument("--data", required=True, help="directory of preset CSVs")
    parser.add_argument("--out", required=True, help="output image path")
    ns = parser.parse_args(argv)
    try:
        spec = build_spec(ns.figure_id, ns.data)
        render(spec, ns.out)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
