import json
import math

import pytest

from stocbeam import ConfigError
from stocbeam.cli import RunConfig, _parse_band, _parse_grid, main, parse_config


class TestGridParsing:
    def test_linear(self):
        g = _parse_grid("0:10:5", "qr")
        assert g == pytest.approx((0.0, 2.5, 5.0, 7.5, 10.0))

    def test_log(self):
        g = _parse_grid("log:0.01:1.0:3", "radius")
        assert g == pytest.approx((0.01, 0.1, 1.0))

    def test_list(self):
        assert _parse_grid("list:0.1,0.5,2.0", "radius") == (0.1, 0.5, 2.0)

    @pytest.mark.parametrize(
        "bad",
        ["0:10", "10:0:5", "0:10:1", "log:0:1:5", "log:2:1:5", "list:3,2,1", "a:b:c"],
    )
    def test_rejects_malformed(self, bad):
        with pytest.raises(ConfigError) as exc:
            _parse_grid(bad, "radius")
        assert exc.value.field == "radius"

    def test_band(self):
        assert _parse_band("0.008:0.012") == (0.008, 0.012)
        for bad in ("0.012:0.008", "0.008", "x:y", "0:1.6"):
            with pytest.raises(ConfigError) as exc:
                _parse_band(bad)
            assert exc.value.field == "alpha-band"


class TestParseConfig:
    def test_densities_defaults(self):
        cfg = parse_config(["densities", "--alpha", "0.3"])
        assert cfg.mode == "densities"
        assert cfg.alpha == 0.3
        assert len(cfg.qr_grid) == 501
        assert cfg.out == "-" and cfg.fmt == "csv"

    def test_missing_alpha_named(self):
        with pytest.raises(ConfigError) as exc:
            parse_config(["diff-pol"])
        assert exc.value.field == "alpha"

    def test_negative_voltage_named(self):
        with pytest.raises(ConfigError) as exc:
            parse_config(["int-pol", "--voltage", "-5", "--alpha", "0.05"])
        assert exc.value.field == "voltage"

    def test_int_pol_needs_exactly_one_angle_spec(self):
        with pytest.raises(ConfigError):
            parse_config(["int-pol", "--voltage", "2000"])
        with pytest.raises(ConfigError):
            parse_config(
                ["int-pol", "--voltage", "2000", "--alpha", "0.05",
                 "--alpha-band", "0.008:0.012"]
            )

    def test_fom_requires_band(self):
        with pytest.raises(ConfigError) as exc:
            parse_config(["fom", "--voltage", "20000", "--alpha", "0.01"])
        assert exc.value.field == "alpha-band"

    def test_round_trip(self):
        cfg = parse_config(
            ["fom", "--voltage", "20000", "--alpha-band", "0.008:0.012",
             "--radius", "log:0.01:5:41", "--format", "json"]
        )
        again = parse_config(cfg.to_args())
        assert again == cfg

    def test_round_trip_figure(self):
        cfg = parse_config(["figure", "5", "--out", "some_dir"])
        assert parse_config(cfg.to_args()) == cfg

    def test_config_file_merge_and_override(self, tmp_path):
        cfg_file = tmp_path / "run.json"
        cfg_file.write_text(json.dumps({"voltage": 2000.0, "alpha": 0.05}))
        cfg = parse_config(["--config", str(cfg_file), "int-pol"])
        assert cfg.voltage == 2000.0 and cfg.alpha == 0.05
        # explicit flag wins over the file value
        cfg = parse_config(
            ["--config", str(cfg_file), "int-pol", "--voltage", "200"]
        )
        assert cfg.voltage == 200.0

    def test_config_file_unknown_key(self, tmp_path):
        cfg_file = tmp_path / "run.json"
        cfg_file.write_text(json.dumps({"volts": 2000.0}))
        with pytest.raises(ConfigError) as exc:
            parse_config(["--config", str(cfg_file), "int-pol"])
        assert exc.value.field == "config"

    def test_config_file_missing(self):
        with pytest.raises(ConfigError):
            parse_config(["--config", "/no/such/file.json", "int-pol"])


class TestMainExitCodes:
    def test_bad_flag_value_exits_2(self, capsys):
        assert main(["int-pol", "--voltage", "-5", "--alpha", "0.05"]) == 2
        assert "voltage" in capsys.readouterr().err

    def test_unwritable_out_exits_4(self, tmp_path, capsys):
        target = tmp_path / "blocked"
        target.write_text("")
        rc = main(
            ["densities", "--alpha", "0.3", "--qr", "0:1:3",
             "--out", str(target / "x.csv")]
        )
        assert rc == 4
        assert "io" in capsys.readouterr().err


class TestCsvOutput:
    def test_densities_schema_and_metadata(self, tmp_path):
        out = tmp_path / "d.csv"
        rc = main(
            ["densities", "--alpha", "0.3", "--qr", "0:2:5", "--out", str(out)]
        )
        assert rc == 0
        lines = out.read_text().splitlines()
        comments = [l for l in lines if l.startswith("#")]
        assert comments[0].startswith("# tool=stocbeam ")
        assert any(l.startswith("# config=") for l in comments)
        header = [l for l in lines if not l.startswith("#")][0]
        assert header == "q_r,rho_up,rho_down"
        data = [l for l in lines if not l.startswith("#")][1:]
        assert len(data) == 5

    def test_alpha_zero_gives_identical_density_columns(self, tmp_path):
        out = tmp_path / "d0.csv"
        assert main(["densities", "--alpha", "0", "--qr", "0:8:33", "--out", str(out)]) == 0
        rows = [
            l.split(",") for l in out.read_text().splitlines() if not l.startswith("#")
        ][1:]
        for _, up, down in rows:
            assert up == down

    def test_diff_pol_on_axis_value(self, tmp_path):
        out = tmp_path / "p.csv"
        assert main(["diff-pol", "--alpha", "0.3", "--qr", "0:1:3", "--out", str(out)]) == 0
        rows = [
            l.split(",") for l in out.read_text().splitlines() if not l.startswith("#")
        ][1:]
        assert float(rows[0][1]) == pytest.approx(1.0, abs=1e-14)

    def test_json_format(self, tmp_path):
        out = tmp_path / "d.json"
        assert main(
            ["densities", "--alpha", "0.3", "--qr", "0:2:5",
             "--format", "json", "--out", str(out)]
        ) == 0
        payload = json.loads(out.read_text())
        assert payload["columns"] == ["q_r", "rho_up", "rho_down"]
        assert len(payload["rows"]) == 5
        assert payload["tool"].startswith("stocbeam ")

    def test_deterministic_bytes(self, tmp_path):
        args = ["int-pol", "--voltage", "2000", "--alpha", "0.05",
                "--radius", "log:0.01:1:9"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_no_temp_file_left_behind(self, tmp_path):
        out = tmp_path / "d.csv"
        assert main(["densities", "--alpha", "0.3", "--qr", "0:1:3", "--out", str(out)]) == 0
        assert [p.name for p in tmp_path.iterdir()] == ["d.csv"]


class TestFigurePresets:
    def test_figure_2_files(self, tmp_path):
        out = tmp_path / "fig2"
        assert main(["figure", "2", "--out", str(out)]) == 0
        names = sorted(p.name for p in out.iterdir())
        assert names == sorted(
            [f"fig2a_n{n}.csv" for n in range(6)] + [f"fig2b_n{n}.csv" for n in range(6)]
        )
        header = [
            l for l in (out / "fig2b_n3.csv").read_text().splitlines()
            if not l.startswith("#")
        ][0]
        assert header == "q_r,p_diff"

    def test_figure_3_files_and_alpha(self, tmp_path):
        out = tmp_path / "fig3"
        assert main(["figure", "3", "--out", str(out)]) == 0
        names = sorted(p.name for p in out.iterdir())
        assert names == ["fig3_200kV.csv", "fig3_20kV.csv", "fig3_2kV.csv"]
        text = (out / "fig3_2kV.csv").read_text()
        assert "alpha=0.05" in text

    def test_figure_5_files_and_peak_line(self, tmp_path, capsys):
        out = tmp_path / "fig5"
        assert main(["figure", "5", "--out", str(out)]) == 0
        names = sorted(p.name for p in out.iterdir())
        assert names == ["fig5_200V.csv", "fig5_20kV.csv"]
        printed = capsys.readouterr().out
        assert "20kV: peak fom=" in printed and "200V: peak fom=" in printed
        header = [
            l for l in (out / "fig5_20kV.csv").read_text().splitlines()
            if not l.startswith("#")
        ][0]
        assert header == "delta_r_nm,p,de,fom"


def test_run_config_is_frozen():
    cfg = RunConfig(mode="densities", alpha=0.3, qr_grid=(0.0, 1.0))
    with pytest.raises(Exception):
        cfg.alpha = 0.5  # type: ignore[misc]


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "stocbeam", "diff-pol", "--alpha", "0.3",
         "--qr", "0:1:3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "q_r,p_diff" in proc.stdout
