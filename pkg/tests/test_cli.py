"""Tests for the command-line interface."""

import os

from heunrad.cli import main


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPresets:
    def test_fig2_writes_both_formats(self, tmp_path, capsys):
        out = os.path.join(tmp_path, "fig2")
        code, stdout, _ = run(capsys, ["fig2", "--samples", "40", "--out", out])
        assert code == 0
        assert os.path.exists(out + ".csv") and os.path.exists(out + ".svg")
        assert "parameters:" in stdout and "max err_estimate:" in stdout
        assert "M=5" in stdout and "lambda=0.7" in stdout

    def test_fig1_preset_range(self, tmp_path, capsys):
        out = os.path.join(tmp_path, "fig1")
        code, stdout, _ = run(capsys, ["fig1", "--samples", "30", "--out", out])
        assert code == 0
        assert "range=0.1:9.9" in stdout
        header = open(out + ".csv").readline().strip()
        assert header == "coordinate,re,im,abs"


class TestParameterized:
    def test_dirac_horizon_csv(self, tmp_path, capsys):
        out = os.path.join(tmp_path, "d")
        code, stdout, _ = run(capsys, [
            "dirac", "--region", "horizon", "--range", "1:20", "--samples", "25",
            "--out", out, "--format", "csv"])
        assert code == 0
        assert os.path.exists(out + ".csv") and not os.path.exists(out + ".svg")

    def test_kg_svg(self, tmp_path, capsys):
        out = os.path.join(tmp_path, "kgc")
        code, stdout, _ = run(capsys, [
            "kg", "--omega", "0.3", "--l", "1", "--range", "0.5:10",
            "--samples", "20", "--out", out, "--format", "svg"])
        assert code == 0
        assert os.path.exists(out + ".svg")
        assert "omega=0.3" in stdout

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfg = os.path.join(tmp_path, "run.cfg")
        with open(cfg, "w") as fh:
            fh.write("# curve setup\nsamples = 20\nrange = 1:30\nM = 5\n")
        out = os.path.join(tmp_path, "c")
        code, stdout, _ = run(capsys, [
            "dirac", "--config", cfg, "--samples", "15", "--out", out])
        assert code == 0
        assert "samples=15" in stdout       # flag wins
        assert "range=1:30" in stdout       # file value used

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = os.path.join(tmp_path, "bad.cfg")
        with open(cfg, "w") as fh:
            fh.write("masses = 5\n")
        code, _, err = run(capsys, ["dirac", "--config", cfg])
        assert code == 1
        assert err.startswith("ERROR ")


class TestErrors:
    def test_machine_parsable_error_line(self, tmp_path, capsys):
        code, _, err = run(capsys, [
            "dirac", "--region", "origin", "--range", "1:20",
            "--out", os.path.join(tmp_path, "x")])
        assert code == 1
        line = err.strip().splitlines()[-1]
        assert line.startswith("ERROR ")
        assert ":" in line

    def test_bad_range_spec(self, tmp_path, capsys):
        code, _, err = run(capsys, ["kg", "--range", "nonsense",
                                    "--out", os.path.join(tmp_path, "y")])
        assert code == 1
        assert err.startswith("ERROR ")
