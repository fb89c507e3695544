import csv
import json
import math

import pytest

from app import build_parser, main


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


def read_json_lines(path):
    with open(path, encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]


@pytest.fixture
def out(tmp_path):
    return str(tmp_path / "out.csv")


class TestParser:
    def test_commands(self):
        parser = build_parser()
        for command in ("heaviness", "bound", "transform", "simulate", "verify"):
            assert parser.parse_args([command]).command == command

    def test_command_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestHeaviness:
    def test_symmetric_bernoulli(self, out):
        assert main(["heaviness", "--dist", "bernoulli", "--p", "0.5", "--a-grid", "0.1:2:5", "--out", out]) == 0
        rows = read_csv(out)
        assert [float(r["a"]) for r in rows] == pytest.approx([0.1, 0.575, 1.05, 1.525, 2.0])
        assert all(abs(float(r["H"])) <= 1e-12 for r in rows)

    def test_missing_distribution(self, out):
        assert main(["heaviness", "--out", out]) == 1

    def test_unknown_distribution(self, out, capsys):
        assert main(["heaviness", "--dist", "cauchy", "--out", out]) == 1
        assert capsys.readouterr().err.startswith("error: ")


class TestTransform:
    def test_solve_yx(self, out):
        assert main(["transform", "--solve-yx", "--x", "0.5", "--out", out]) == 0
        [row] = read_csv(out)
        assert float(row["residual"]) <= 1e-12
        assert row["boundary_flag"] == "false"

    def test_fenchel_needs_distribution(self, out):
        assert main(["transform", "--fenchel", "--x", "0.5", "--out", out]) == 1

    def test_yule_walker_rate_outside(self, out):
        assert main(["transform", "--ldp", "ldp-yw", "--theta", "0.5", "--x", "1.5", "--format", "json", "--out", out]) == 0
        [row] = read_json_lines(out)
        # +inf is written as null
        assert row["value"] is None


class TestBound:
    def test_csv_rows(self, out):
        assert main(["bound", "--bound", "thm21", "--y", "1", "--x", "0,1", "--out", out]) == 0
        rows = read_csv(out)
        assert list(rows[0]) == ["x", "bound_raw", "bound_clamped", "argmin", "method", "notes"]
        assert float(rows[0]["bound_raw"]) == 2.0
        assert float(rows[0]["bound_clamped"]) == 1.0
        assert float(rows[1]["bound_raw"]) == pytest.approx(2 * math.exp(-0.5), rel=1e-15)
        assert rows[1]["method"] == "closed-form"

    def test_json_output(self, tmp_path):
        path = str(tmp_path / "out.jsonl")
        assert main(["bound", "--bound", "ar1-ls", "--n", "100", "--x", "0.1:0.3:3", "--format", "json", "--out", path]) == 0
        rows = read_json_lines(path)
        assert len(rows) == 3
        assert rows[0]["bound_raw"] > rows[2]["bound_raw"]

    def test_missing_parameter(self, out, capsys):
        assert main(["bound", "--bound", "thm21", "--x", "1", "--out", out]) == 1
        assert "y" in capsys.readouterr().err

    def test_bad_grid(self, out):
        assert main(["bound", "--bound", "ar1-ls", "--x", "0:1:zero", "--out", out]) == 1

    def test_geometric_branching_from_offspring(self, out):
        assert main(["bound", "--bound", "geometric-branching", "--n", "10", "--x", "1", "--out", out]) == 0
        assert float(read_csv(out)[0]["bound_raw"]) < 1


class TestConfigFiles:
    def test_json_config(self, tmp_path, out):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"bound": "thm21", "y": 2.0, "x_grid": "1,2"}))
        assert main(["bound", "--config", str(config), "--out", out]) == 0
        assert len(read_csv(out)) == 2

    def test_flags_override_file(self, tmp_path, out):
        config = tmp_path / "run.toml"
        config.write_text('bound = "thm21"\ny = 2.0\nx_grid = [1.0]\n')
        assert main(["bound", "--config", str(config), "--y", "1", "--out", out]) == 0
        assert float(read_csv(out)[0]["bound_raw"]) == pytest.approx(2 * math.exp(-0.5))

    def test_unknown_key(self, tmp_path, out, capsys):
        config = tmp_path / "run.json"
        config.write_text('{\n  "bound": "thm21",\n  "colour": 1\n}\n')
        assert main(["bound", "--config", str(config), "--out", out]) == 1
        assert "colour (line 3)" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, out):
        assert main(["bound", "--config", str(tmp_path / "nope.json"), "--out", out]) == 1


class TestSimulate:
    def test_ar1_columns(self, out):
        assert main(["simulate", "--model", "ar1", "--n", "10", "--trials", "5", "--seed", "3", "--out", out]) == 0
        rows = read_csv(out)
        assert [int(r["path_index"]) for r in rows] == [0, 1, 2, 3, 4]
        assert {"theta_hat", "theta_tilde", "extinct"} <= set(rows[0])

    def test_reproducible(self, tmp_path):
        first, second = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        args = ["simulate", "--model", "galton-watson", "--n", "6", "--trials", "4", "--seed", "11"]
        assert main(args + ["--out", first]) == 0
        assert main(args + ["--out", second]) == 0
        assert read_csv(first) == read_csv(second)


class TestVerify:
    def test_needs_model(self, out):
        assert main(["verify", "--x", "0.5", "--trials", "1000", "--out", out]) == 1

    def test_too_few_trials(self, out):
        assert main(["verify", "--model", "ar1", "--n", "20", "--x", "0.5", "--trials", "10", "--out", out]) == 1

    def test_ar1_tail(self, out):
        args = ["verify", "--model", "ar1", "--n", "20", "--x", "0.5", "--trials", "1000", "--out", out]
        assert main(args) == 0
        [row] = read_csv(out)
        assert row["verdict"] == "pass"
        assert int(row["trials"]) == 1000

    def test_mean_check(self, out):
        args = ["verify", "--model", "ar1", "--n", "20", "--check", "V", "--t", "0,0.2", "--trials", "1000", "--out", out]
        assert main(args) == 0
        rows = read_csv(out)
        assert float(rows[0]["empirical"]) == 1.0
        assert float(rows[0]["bound_raw"]) == 1.0

    def test_violated_bound_exits_two(self, out):
        # |M_n| >= 1 is near certain, the least-squares bound at x = 1 is ~1e-8
        args = [
            "verify", "--model", "ar1", "--n", "100", "--bound", "ar1-ls", "--event", "two-sided",
            "--x", "1", "--trials", "1000", "--out", out,
        ]
        assert main(args) == 2
        [row] = read_csv(out)
        assert row["verdict"] == "fail"
        assert float(row["empirical"]) > float(row["bound_clamped"])

    @pytest.mark.parametrize("check", ["W", "subgaussian"])
    def test_other_mean_checks(self, out, check):
        args = ["verify", "--model", "ar1", "--n", "20", "--check", check, "--t", "0", "--trials", "1000", "--out", out]
        assert main(args) == 0
        [row] = read_csv(out)
        assert row["verdict"] == "pass"

    def test_identity_check(self, out):
        args = [
            "verify", "--model", "galton-watson", "--offspring", "geometric:p=0.5", "--n", "6",
            "--check", "identity", "--t", "0", "--trials", "1000", "--out", out,
        ]
        assert main(args) == 0
        [row] = read_csv(out)
        assert float(row["empirical"]) == 1.0
        assert row["verdict"] == "pass"

    def test_degenerate_mean_is_inconclusive(self, out):
        args = ["verify", "--model", "ar1", "--theta", "1.2", "--n", "20", "--check", "V", "--t", "1", "--trials", "1000", "--out", out]
        assert main(args) == 0
        [row] = read_csv(out)
        assert row["verdict"] == "inconclusive"

    def test_rerun_is_byte_identical(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["verify", "--model", "ar1", "--theta", "1.2", "--n", "100", "--x", "0.05:0.5:10", "--trials", "2000", "--seed", "42"]
        assert main(args + ["--out", str(first)]) == 0
        assert main(args + ["--workers", "2", "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    @pytest.mark.slow
    def test_lotka_nagaev_rerun_is_byte_identical(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        args = [
            "verify", "--model", "galton-watson", "--offspring", "geometric:p=0.5", "--n", "10",
            "--x", "0.5,1,2", "--trials", "100000", "--seed", "42",
        ]
        assert main(args + ["--out", str(first)]) == 0
        assert main(args + ["--workers", "4", "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    @pytest.mark.slow
    def test_lotka_nagaev_sweep(self, out):
        args = [
            "verify", "--model", "galton-watson", "--offspring", "geometric:p=0.5", "--n", "10",
            "--x", "0.5,1,2", "--trials", "100000", "--workers", "2", "--out", out,
        ]
        assert main(args) == 0
        assert all(row["verdict"] in ("pass", "vacuous") for row in read_csv(out))
