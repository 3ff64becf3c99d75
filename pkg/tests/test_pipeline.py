from __future__ import annotations

import os
from pathlib import Path

import pytest

from espeni import cli
from espeni.config import ENV_VAR, PipelineConfig, load_config, parse_config_text
from espeni.errors import ConfigError, PipelineError, SchemaError
from espeni.pipeline import run_pipeline
from espeni.tables import file_digest


def fixture_config(
    data_dir: Path, out_dir: Path, calendar_csv: Path | None = None, **overrides
) -> PipelineConfig:
    values = dict(
        elexon_dir=data_dir / "elexon",
        ng_dir=data_dir / "ng",
        out_dir=out_dir,
        flag_path=data_dir / "flags.csv",
        calendar_path=calendar_csv,
    )
    values.update(overrides)
    return PipelineConfig(**values)


class TestRun:
    def test_golden_outputs_byte_identical(self, data_dir, tmp_path, calendar_csv):
        config = fixture_config(data_dir, tmp_path, calendar_csv)
        assert run_pipeline(config, quiet=True) == 0
        for name in ("espeni_raw.csv", "espeni.csv"):
            got = (tmp_path / name).read_bytes()
            want = (data_dir / "golden" / name).read_bytes()
            assert got == want, f"{name} differs from the golden file"

    def test_rerun_is_byte_identical(self, data_dir, tmp_path, calendar_csv):
        config = fixture_config(data_dir, tmp_path, calendar_csv)
        run_pipeline(config, quiet=True)
        first = {
            name: (tmp_path / name).read_bytes()
            for name in ("espeni_raw.csv", "espeni.csv")
        }
        run_pipeline(config, quiet=True)
        for name, data in first.items():
            assert (tmp_path / name).read_bytes() == data

    def test_checksum_sidecars(self, data_dir, tmp_path, calendar_csv):
        run_pipeline(fixture_config(data_dir, tmp_path, calendar_csv), quiet=True)
        for name in ("espeni_raw.csv", "espeni.csv"):
            sidecar = tmp_path / f"{name}.sha256"
            digest, recorded_name = (
                sidecar.read_text("utf-8").strip().split("  ")
            )
            assert recorded_name == name
            assert digest == file_digest(tmp_path / name, "sha256")

    def test_legacy_md5_sidecar_optional(self, data_dir, tmp_path, calendar_csv):
        run_pipeline(fixture_config(data_dir, tmp_path, calendar_csv, legacy_md5=True), quiet=True)
        assert (tmp_path / "espeni.csv.md5").is_file()

    def test_no_temp_files_left_behind(self, data_dir, tmp_path, calendar_csv):
        run_pipeline(fixture_config(data_dir, tmp_path, calendar_csv), quiet=True)
        leftovers = [p for p in tmp_path.iterdir() if ".tmp-" in p.name]
        assert leftovers == []

    def test_empty_elexon_dir_fails_with_stage(self, data_dir, tmp_path, calendar_csv):
        empty = tmp_path / "empty"
        empty.mkdir()
        config = fixture_config(data_dir, tmp_path, calendar_csv, elexon_dir=empty)
        with pytest.raises(PipelineError) as exc:
            run_pipeline(config, quiet=True)
        assert exc.value.stage == "ingest-elexon"
        assert isinstance(exc.value.cause, SchemaError)

    def test_missing_required_config(self):
        with pytest.raises(ConfigError):
            run_pipeline(PipelineConfig(), quiet=True)

    def test_calendar_written_when_configured(self, data_dir, tmp_path):
        cal_path = tmp_path / "masterdatetime_iso8601.csv"
        config = fixture_config(data_dir, tmp_path, calendar_path=cal_path)  # generates and persists
        run_pipeline(config, quiet=True)
        header = cal_path.read_text("utf-8").splitlines()[0]
        assert header.startswith("datesp,settlementdate,settlementperiod,utc,")


class TestConfigFile:
    def test_parse_and_relative_paths(self, tmp_path):
        text = (
            "# comment\n"
            "elexon_dir = sources/elexon\n"
            "ng_dir = sources/ng\n"
            "out_dir = out\n"
            "flag_path = flags.csv\n"
            "biomass_ratio_mode = computed\n"
            "detector_categories = CCGT, NUCLEAR, WIND\n"
            "listen_address = 127.0.0.1:9000\n"
            "legacy_md5 = true\n"
            "fetch_url_ng = https://example.org/data/demanddata.csv\n"
        )
        cfg = parse_config_text(text, base_dir=tmp_path)
        assert cfg.elexon_dir == tmp_path / "sources/elexon"
        assert cfg.detector_categories == ["CCGT", "NUCLEAR", "WIND"]
        assert cfg.biomass_ratio_mode == "computed"
        assert cfg.legacy_md5 is True
        assert len(cfg.fetch_urls["ng"]) == 1

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_text("frobnicate = yes\n")

    def test_bad_mode_rejected(self):
        with pytest.raises(ConfigError):
            parse_config_text("biomass_ratio_mode = guess\n")

    def test_env_var_default(self, tmp_path, monkeypatch):
        path = tmp_path / "espeni.conf"
        path.write_text("out_dir = out\n", "utf-8")
        monkeypatch.setenv(ENV_VAR, str(path))
        cfg = load_config()
        assert cfg.out_dir == tmp_path / "out"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.conf")


def write_cli_config(data_dir: Path, tmp_path: Path, calendar_csv: Path) -> Path:
    out = tmp_path / "out"
    text = (
        f"elexon_dir = {data_dir / 'elexon'}\n"
        f"ng_dir = {data_dir / 'ng'}\n"
        f"out_dir = {out}\n"
        f"flag_path = {data_dir / 'flags.csv'}\n"
        f"calendar_path = {calendar_csv}\n"
    )
    path = tmp_path / "espeni.conf"
    path.write_text(text, "utf-8")
    return path


class TestCli:
    def test_run_and_golden(self, data_dir, tmp_path, capsys, calendar_csv):
        config_path = write_cli_config(data_dir, tmp_path, calendar_csv)
        assert cli.main(["run", "--config", str(config_path)]) == 0
        out = capsys.readouterr().out
        assert "espeni.csv" in out
        got = (tmp_path / "out" / "espeni.csv").read_bytes()
        assert got == (data_dir / "golden" / "espeni.csv").read_bytes()

    def test_calendar_command(self, tmp_path):
        out = tmp_path / "cal.csv"
        rc = cli.main(
            ["calendar", "--start", "2020-03-28", "--end", "2020-03-30", "--out", str(out)]
        )
        assert rc == 0
        assert out.read_text("utf-8").count("\n") == 143  # header + 142 entries

    def test_calendar_rejects_bad_range(self, tmp_path, capsys):
        rc = cli.main(
            ["calendar", "--start", "1990-01-01", "--end", "1990-01-02",
             "--out", str(tmp_path / "cal.csv")]
        )
        assert rc == 1

    def test_ingest_detect_roundtrip(self, data_dir, tmp_path, calendar_csv):
        parsed = tmp_path / "elexon_parsed.csv"
        rc = cli.main(
            ["ingest", "elexon", "--dir", str(data_dir / "elexon"),
             "--calendar", str(calendar_csv), "--out", str(parsed)]
        )
        assert rc == 0
        flags = tmp_path / "flags.csv"
        rc = cli.main(["detect", "--in", str(parsed), "--flags", str(flags)])
        assert rc == 0
        text = flags.read_text("utf-8")
        assert text.splitlines()[0] == "source,datesp,flag,note,updated_utc"
        assert text.count("auto:zero-drop") == 3

    def test_ingest_ng(self, data_dir, tmp_path, calendar_csv):
        parsed = tmp_path / "ng_parsed.csv"
        rc = cli.main(["ingest", "ng", "--dir", str(data_dir / "ng"),
                       "--calendar", str(calendar_csv), "--out", str(parsed)])
        assert rc == 0
        header = parsed.read_text("utf-8").splitlines()[0]
        assert header.startswith("NGEM_SETTLEMENT_DATE,")

    def test_stats_command(self, data_dir, tmp_path, capsys, calendar_csv):
        config_path = write_cli_config(data_dir, tmp_path, calendar_csv)
        cli.main(["run", "--config", str(config_path)])
        capsys.readouterr()
        rc = cli.main(["stats", "--raw", str(tmp_path / "out" / "espeni_raw.csv")])
        assert rc == 0
        out = capsys.readouterr().out
        assert "Error blocks: 2" in out
        assert "POWER_ESPENI_MW" in out

    def test_compare_command(self, data_dir, tmp_path, capsys, calendar_csv):
        config_path = write_cli_config(data_dir, tmp_path, calendar_csv)
        cli.main(["run", "--config", str(config_path)])
        capsys.readouterr()
        beis = tmp_path / "beis.csv"
        beis.write_text("month,supply_gwh\n2020-03,2000\n", "utf-8")
        rc = cli.main(
            ["compare", "--espeni", str(tmp_path / "out" / "espeni.csv"),
             "--beis", str(beis), "--granularity", "month"]
        )
        assert rc == 0
        assert "2020-03" in capsys.readouterr().out

    def test_empty_sources_exit_code_2(self, data_dir, tmp_path, calendar_csv):
        empty = tmp_path / "empty"
        empty.mkdir()
        out = tmp_path / "out"
        config = tmp_path / "bad.conf"
        config.write_text(
            f"elexon_dir = {empty}\nng_dir = {empty}\nout_dir = {out}\n"
            f"calendar_path = {calendar_csv}\n",
            "utf-8",
        )
        assert cli.main(["run", "--config", str(config)]) == 2

    def test_missing_config_exit_code_1(self, tmp_path, monkeypatch):
        monkeypatch.delenv(ENV_VAR, raising=False)
        assert cli.main(["run"]) == 1
