"""Command-line front end.

Subcommands: ``densities``, ``diff-pol``, ``int-pol``, ``fom`` and
``figure <n>`` presets that reproduce the reference curves. Tables are
written as CSV (``#``-prefixed metadata lines, one header row, floats
with 17 significant digits) or JSON; writes are atomic (temp file then
rename) and byte-identical across runs of the same configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path

from . import __version__
from .beamline import AnnularAperture, BeamParams
from .errors import ConfigError, DomainError, ModeError, QuadratureError
from .polarimetry import SweepTable, peak_figure_of_merit, sweep

MODES = ("densities", "diff-pol", "int-pol", "fom", "figure")


@dataclass(frozen=True)
class RunConfig:
    """A fully validated run request."""

    mode: str
    voltage: float | None = None
    alpha: float | None = None
    alpha_band: tuple[float, float] | None = None
    radius_grid: tuple[float, ...] | None = None
    qr_grid: tuple[float, ...] | None = None
    figure_id: str | None = None
    out: str = "-"
    fmt: str = "csv"

    def to_args(self) -> list[str]:
        """Serialize back to an argv list; parse_config round-trips it."""
        args = [self.mode]
        if self.mode == "figure":
            args.append(self.figure_id)
        if self.voltage is not None:
            args += ["--voltage", repr(self.voltage)]
        if self.alpha is not None:
            args += ["--alpha", repr(self.alpha)]
        if self.alpha_band is not None:
            args += ["--alpha-band", f"{self.alpha_band[0]!r}:{self.alpha_band[1]!r}"]
        if self.radius_grid is not None:
            args += ["--radius", "list:" + ",".join(repr(r) for r in self.radius_grid)]
        if self.qr_grid is not None:
            args += ["--qr", "list:" + ",".join(repr(r) for r in self.qr_grid)]
        args += ["--out", self.out, "--format", self.fmt]
        return args


def _parse_grid(text: str, key: str) -> tuple[float, ...]:
    """Grid syntax: ``start:stop:count`` (linear, inclusive), ``log:`` prefix
    for log spacing, ``list:`` prefix for an explicit comma list."""
    try:
        if text.startswith("list:"):
            values = tuple(float(v) for v in text[5:].split(","))
        else:
            log = text.startswith("log:")
            body = text[4:] if log else text
            parts = body.split(":")
            if len(parts) != 3:
                raise ValueError("expected start:stop:count")
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
            if count < 2:
                raise ValueError("count must be >= 2")
            if log:
                if start <= 0 or stop <= start:
                    raise ValueError("log grid needs 0 < start < stop")
                ratio = (stop / start) ** (1.0 / (count - 1))
                values = tuple(start * ratio**i for i in range(count))
            else:
                if stop <= start:
                    raise ValueError("grid needs start < stop")
                step = (stop - start) / (count - 1)
                values = tuple(start + step * i for i in range(count))
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from exc
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(key, "grid must be strictly ascending")
    return values


def _parse_band(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ConfigError("alpha-band", "expected lo:hi")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ConfigError("alpha-band", str(exc)) from exc
    if not (0.0 <= lo < hi < math.pi / 2):
        raise ConfigError("alpha-band", "band must satisfy 0 <= lo < hi < pi/2")
    return lo, hi


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stocbeam",
        description="Spin-to-orbital conversion of electron Bessel beams "
        "in a magnetic round lens",
    )
    parser.add_argument("--config", help="JSON config file; flags override its values")
    sub = parser.add_subparsers(dest="mode", required=True)

    def common(p, radius=False, qr=False):
        p.add_argument("--voltage", type=float, help="accelerating voltage [V]")
        p.add_argument("--alpha", type=float, help="convergence angle [rad]")
        p.add_argument("--alpha-band", help="convergence band lo:hi [rad]")
        if radius:
            p.add_argument("--radius", help="detector radius grid start:stop:count [nm]")
        if qr:
            p.add_argument("--qr", help="dimensionless Q*r grid start:stop:count")
        p.add_argument("--out", default="-", help="output path ('-' = stdout)")
        p.add_argument("--format", dest="fmt", default="csv", choices=("csv", "json"))

    common(sub.add_parser("densities", help="spin densities vs Q r"), qr=True)
    common(sub.add_parser("diff-pol", help="differential polarisation vs Q r"), qr=True)
    common(sub.add_parser("int-pol", help="detector-integrated polarisation"), radius=True)
    common(sub.add_parser("fom", help="polarisation, efficiency and figure of merit"), radius=True)
    fig = sub.add_parser("figure", help="reproduce a reference figure's data")
    fig.add_argument("figure_id", choices=("2", "3", "4", "5"))
    fig.add_argument("--out", default="figure_data", help="output directory")
    fig.add_argument("--format", dest="fmt", default="csv", choices=("csv", "json"))
    return parser


def parse_config(argv: list[str]) -> RunConfig:
    """Parse argv (plus optional --config JSON file) into a RunConfig."""
    parser = _build_parser()
    ns = parser.parse_args(argv)
    file_values: dict = {}
    if getattr(ns, "config", None):
        try:
            file_values = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", str(exc)) from exc
        if not isinstance(file_values, dict):
            raise ConfigError("config", "config file must hold a JSON object")
        unknown = set(file_values) - {
            "voltage", "alpha", "alpha_band", "radius", "qr", "out", "format"
        }
        if unknown:
            raise ConfigError("config", f"unknown key {sorted(unknown)[0]!r}")

    def pick(flag, key, cast=None):
        v = getattr(ns, flag, None)
        if v is None:
            v = file_values.get(key)
            if v is not None and cast is not None:
                v = cast(v)
        return v

    mode = ns.mode
    voltage = pick("voltage", "voltage", float)
    alpha = pick("alpha", "alpha", float)
    band_text = pick("alpha_band", "alpha_band", str)
    radius_text = pick("radius", "radius", str)
    qr_text = pick("qr", "qr", str)
    out = ns.out if ns.out != "-" or "out" not in file_values else file_values["out"]
    fmt = ns.fmt if ns.fmt != "csv" or "format" not in file_values else file_values["format"]

    if voltage is not None and voltage <= 0:
        raise ConfigError("voltage", f"must be positive, got {voltage!r}")
    if alpha is not None and not (0.0 <= alpha < math.pi):
        raise ConfigError("alpha", f"must lie in [0, pi), got {alpha!r}")
    band = _parse_band(band_text) if band_text else None

    if mode == "figure":
        return RunConfig(mode="figure", figure_id=ns.figure_id, out=ns.out, fmt=fmt)

    if mode in ("densities", "diff-pol"):
        if alpha is None:
            raise ConfigError("alpha", f"required for mode {mode!r}")
        qr_grid = _parse_grid(qr_text, "qr") if qr_text else _parse_grid("0:10:501", "qr")
        return RunConfig(mode=mode, alpha=alpha, qr_grid=qr_grid, out=out, fmt=fmt)

    if voltage is None:
        raise ConfigError("voltage", f"required for mode {mode!r}")
    radius_grid = (
        _parse_grid(radius_text, "radius") if radius_text else _parse_grid("0.01:1.0:100", "radius")
    )
    if mode == "int-pol":
        if (alpha is None) == (band is None):
            raise ConfigError("alpha", "int-pol needs exactly one of --alpha / --alpha-band")
        return RunConfig(
            mode=mode, voltage=voltage, alpha=alpha, alpha_band=band,
            radius_grid=radius_grid, out=out, fmt=fmt,
        )
    if mode == "fom":
        if band is None:
            raise ConfigError("alpha-band", "fom requires --alpha-band (annular mode)")
        return RunConfig(
            mode=mode, voltage=voltage, alpha_band=band,
            radius_grid=radius_grid, out=out, fmt=fmt,
        )
    raise ConfigError("mode", f"unknown mode {mode!r}")


def _format_float(x: float) -> str:
    return f"{x:.17g}"


def _render_csv(table: SweepTable, config_echo: str) -> str:
    lines = [f"# tool=stocbeam {__version__}", f"# config={config_echo}"]
    for key in sorted(table.metadata):
        lines.append(f"# {key}={table.metadata[key]}")
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def _render_json(table: SweepTable, config_echo: str) -> str:
    payload = {
        "tool": f"stocbeam {__version__}",
        "config": config_echo,
        "metadata": dict(sorted(table.metadata.items())),
        "columns": list(table.columns),
        "rows": [list(row) for row in table.rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(table: SweepTable, config: RunConfig, path: str | Path) -> None:
    # the echo omits the destination so identical runs to different
    # paths stay byte-identical
    echo = " ".join(replace(config, out="-").to_args())
    text = _render_csv(table, echo) if config.fmt == "csv" else _render_json(table, echo)
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        _write_atomic(Path(path), text)


def _run_table_mode(config: RunConfig) -> None:
    if config.mode in ("densities", "diff-pol"):
        table = sweep("qr", config.qr_grid, {"alpha": config.alpha})
        if config.mode == "densities":
            keep = ("q_r", "rho_up", "rho_down")
        else:
            keep = ("q_r", "p_diff")
        idx = [table.columns.index(c) for c in keep]
        table = SweepTable(
            keep, tuple(tuple(row[i] for i in idx) for row in table.rows), table.metadata
        )
        _emit(table, config, config.out)
        return
    fixed = {"voltage": config.voltage, "alpha": config.alpha, "alpha_band": config.alpha_band}
    table = sweep("detector-radius", config.radius_grid, fixed)
    if config.mode == "int-pol" and config.alpha_band is not None:
        keep = ("delta_r_nm", "p")
        idx = [table.columns.index(c) for c in keep]
        table = SweepTable(
            keep, tuple(tuple(row[i] for i in idx) for row in table.rows), table.metadata
        )
    _emit(table, config, config.out)
    if config.mode == "fom":
        beam = BeamParams(config.voltage)
        aperture = AnnularAperture(*config.alpha_band)
        lo, hi = config.radius_grid[0], config.radius_grid[-1]
        dr_opt, best = peak_figure_of_merit(beam, aperture, lo, hi)
        print(
            f"peak fom={best.figure_of_merit:.6e} at delta_r={dr_opt:.4f} nm "
            f"(p={best.polarisation:.6e}, de={best.detection_efficiency:.6e})"
        )


# Reference-figure presets; angles in rad, voltages in V, radii in nm.
_FIG3_VOLTAGES = (("200kV", 200e3), ("20kV", 20e3), ("2kV", 2e3))
_FIG4_ALPHAS = (("10mrad", 0.010), ("25mrad", 0.025), ("50mrad", 0.050))
_FIG5_BANDS = (("20kV", 20e3, (8e-3, 12e-3)), ("200V", 200.0, (80e-3, 120e-3)))


def _run_figure(config: RunConfig) -> None:
    out_dir = Path(config.out)
    ext = config.fmt
    fid = config.figure_id

    def emit(table: SweepTable, name: str) -> None:
        _emit(table, config, out_dir / f"{name}.{ext}")

    if fid == "2":
        qr_grid = _parse_grid("0:10:501", "qr")
        for n in range(6):
            alpha = n * math.pi / 10.0
            table = sweep("qr", qr_grid, {"alpha": alpha})
            dens_idx = [table.columns.index(c) for c in ("q_r", "rho_up", "rho_down")]
            emit(
                SweepTable(
                    ("q_r", "rho_up", "rho_down"),
                    tuple(tuple(row[i] for i in dens_idx) for row in table.rows),
                    dict(table.metadata, n=str(n)),
                ),
                f"fig2a_n{n}",
            )
            pol_idx = [table.columns.index(c) for c in ("q_r", "p_diff")]
            emit(
                SweepTable(
                    ("q_r", "p_diff"),
                    tuple(tuple(row[i] for i in pol_idx) for row in table.rows),
                    dict(table.metadata, n=str(n)),
                ),
                f"fig2b_n{n}",
            )
    elif fid == "3":
        grid = _parse_grid("log:0.001:2.0:121", "radius")
        for label, voltage in _FIG3_VOLTAGES:
            table = sweep("detector-radius", grid, {"voltage": voltage, "alpha": 0.050})
            emit(table, f"fig3_{label}")
    elif fid == "4":
        grid = _parse_grid("log:0.001:2.0:121", "radius")
        for label, alpha in _FIG4_ALPHAS:
            table = sweep("detector-radius", grid, {"voltage": 20e3, "alpha": alpha})
            emit(table, f"fig4_{label}")
    elif fid == "5":
        grid = _parse_grid("log:0.01:5.0:121", "radius")
        for label, voltage, band in _FIG5_BANDS:
            table = sweep(
                "detector-radius", grid, {"voltage": voltage, "alpha_band": band}
            )
            emit(table, f"fig5_{label}")
            dr_opt, best = peak_figure_of_merit(
                BeamParams(voltage), AnnularAperture(*band)
            )
            print(
                f"{label}: peak fom={best.figure_of_merit:.6e} "
                f"at delta_r={dr_opt:.4f} nm"
            )
    else:
        raise ConfigError("figure", f"unknown figure id {fid!r}")


def run(config: RunConfig) -> int:
    """Execute a validated configuration; returns a process exit status."""
    try:
        if config.mode == "figure":
            _run_figure(config)
        else:
            _run_table_mode(config)
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 4
    except QuadratureError as exc:
        print(f"error: quadrature: {exc}", file=sys.stderr)
        return 3
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ModeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
