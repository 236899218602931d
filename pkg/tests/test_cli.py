#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests de la ligne de commande: sous-commandes, codes de sortie et rapports écrits.
"""

import json

import numpy as np
import pytest

from config.settings import Settings
from core.app_manager import ExitCode, parse_grid, parse_params
from main import main
from measures.errors import ConfigError
from reports.report_types import BGReport, Verdict
from reports.report_writer import read_csv_report, read_report


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    """Répertoire courant temporaire (logs/) avec quelques fichiers d'entrée"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("TCILAB_CONFIG", raising=False)
    files = {
        "mu.json": {"weights": [0.3, 0.7]},
        "uniform.json": {"space": {"n": 2}, "kind": "uniform"},
        "hamming.json": {"form": "hamming"},
        "inflated.json": {"form": "quadratic", "a": 20.0},
    }
    for name, data in files.items():
        (tmp_path / name).write_text(json.dumps(data), encoding="utf-8")
    return tmp_path


class TestParsing:
    def test_parse_grid(self):
        assert parse_grid(None) is None
        assert parse_grid("0:1:5").tolist() == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
        assert parse_grid("0.1, 0.2").tolist() == pytest.approx([0.1, 0.2])
        with pytest.raises(ConfigError):
            parse_grid("0:1")

    def test_parse_params(self):
        params = parse_params(["x=1", "chi=1,2,3"])
        assert params == {"x": 1.0, "chi": [1.0, 2.0, 3.0]}
        with pytest.raises(ConfigError):
            parse_params(["x"])
        with pytest.raises(ConfigError) as info:
            parse_params(["a=b"])
        assert info.value.field == "param.a"


class TestExitCodes:
    def test_entropy_of_identical_measures(self, workdir, capsys):
        code = main(["entropy", "--measure", "mu.json", "--nu", "mu.json", "--out", "out"])
        assert code == ExitCode.SUCCESS
        assert "entropy = " in capsys.readouterr().out
        report = read_report(workdir / "out" / "entropy.json")
        assert report.values["entropy"] == pytest.approx(0.0, abs=1e-15)

    def test_bg_check_of_best_alpha(self, workdir):
        code = main(["bg-check", "--measure", "mu.json", "--cost", "hamming.json", "--out", "out"])
        assert code == ExitCode.SUCCESS
        report = read_report(workdir / "out" / "bg-check.json")
        assert isinstance(report, BGReport)
        assert report.verdict is Verdict.PASS

    def test_bg_check_of_inflated_alpha(self, workdir):
        code = main(["bg-check", "--measure", "uniform.json", "--cost", "hamming.json",
                     "--alpha", "inflated.json", "--out", "out"])
        assert code == ExitCode.FALSIFIED
        assert read_report(workdir / "out" / "bg-check.json").witness_s is not None

    def test_deviate_with_inflated_alpha(self, workdir):
        code = main(["deviate", "--measure", "uniform.json", "--cost", "hamming.json",
                     "--alpha", "inflated.json", "--param", "sizes=10", "--grid", "0.15",
                     "--replicas", "2000", "--seed", "3", "--format", "csv", "--out", "out"])
        assert code == ExitCode.FALSIFIED
        frame = read_csv_report(workdir / "out" / "deviate.csv")
        assert len(frame) == 1
        assert frame["verdict"][0] == "fail"
        assert frame["p_hat"][0] > frame["bound"][0]

    def test_conjugate_curve(self, workdir):
        code = main(["conjugate", "--alpha", "inflated.json", "--t", "0,1,2", "--out", "out"])
        assert code == ExitCode.SUCCESS
        report = read_report(workdir / "out" / "conjugate.json")
        # (a t^2)* (s) = s^2 / (4a)
        assert report.y == pytest.approx([0.0, 1.0 / 80.0, 4.0 / 80.0], rel=1e-6, abs=1e-12)

    def test_malformed_input_file(self, workdir):
        (workdir / "broken.json").write_text('{"weights": [0.5, 0.5]', encoding="utf-8")
        assert main(["entropy", "--measure", "broken.json", "--nu", "mu.json", "--out", "out"]) == ExitCode.ERROR
        assert not (workdir / "out" / "entropy.json").exists()

    def test_missing_arguments(self, workdir):
        assert main(["entropy", "--nu", "mu.json", "--out", "out"]) == ExitCode.ERROR
        assert main(["alpha", "--measure", "mu.json", "--out", "out"]) == ExitCode.ERROR
        assert main(["deviate", "--measure", "mu.json", "--cost", "hamming.json", "--out", "out"]) == ExitCode.ERROR

    def test_usage_errors(self, workdir):
        assert main(["no-such-command"]) == ExitCode.ERROR
        assert main(["entropy", "--format", "xml"]) == ExitCode.ERROR

    def test_malformed_config(self, workdir):
        (workdir / "settings.json").write_text('{"devlab": {"seed": }', encoding="utf-8")
        code = main(["entropy", "--measure", "mu.json", "--nu", "mu.json", "--config", "settings.json",
                     "--out", "out"])
        assert code == ExitCode.ERROR


class TestSettings:
    def test_strict_loading(self, tmp_path):
        path = tmp_path / "settings.json"
        path.write_text('{\n  "cli": {\n    "format": \n}', encoding="utf-8")
        with pytest.raises(ConfigError) as info:
            Settings(str(path), strict=True)
        assert info.value.line == 4
        # sans le mode strict, retour aux valeurs par défaut
        assert Settings(str(path)).output_format == "json"
        with pytest.raises(ConfigError):
            Settings(str(tmp_path / "absent.json"), strict=True)

    def test_sections_override_defaults(self, tmp_path):
        path = tmp_path / "settings.json"
        path.write_text(json.dumps({"devlab": {"replicas": 123}, "duality": {"simplex_steps": {"2": 0.01}}}),
                        encoding="utf-8")
        settings = Settings(str(path))
        assert settings.replicas == 123
        assert settings.block_size == 4096
        assert np.isclose(settings.simplex_step(2), 0.01)

    def test_save_writes_current_values(self, tmp_path):
        settings = Settings(str(tmp_path / "absent.json"))
        settings.replicas = 777
        target = tmp_path / "nested" / "saved.json"
        assert settings.save(str(target))
        again = Settings(str(target), strict=True)
        assert again.replicas == 777
        assert again.simplex_steps == settings.simplex_steps
