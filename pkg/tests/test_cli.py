"""Command-line contract: exit codes, payload schema, determinism, config
precedence, and the file-writing report path."""

import json
import shutil
import subprocess

import pytest

from graphck.cli import (EXIT_PASS, EXIT_REFUTED, EXIT_USAGE, RunConfig,
                         UsageError, build_config, load_config_file, main)
from graphck.quantum_graph import build_pi_graph, to_dot


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv) -> tuple[int, dict]:
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


class TestExitCodes:
    def test_graph_build_passes(self, capsys):
        code, payload = run_json(capsys, "graph", "build", "--family", "relation")
        assert code == EXIT_PASS
        assert payload["schema"] == 1
        assert payload["graph"]["n"] == 2

    def test_verified_refutation_is_exit_2(self, capsys):
        code, payload = run_json(capsys, "ck", "verify", "--family", "pi2-finite")
        assert code == EXIT_REFUTED
        assert payload["report"]["passed"] is False

    def test_passing_checks_are_exit_0(self, capsys):
        code, payload = run_json(capsys, "hopf", "check", "--model", "sd", "--d", "3")
        assert code == EXIT_PASS
        assert payload["report"]["passed"] is True
        assert payload["magic"]["passed"] is True

    def test_literal_model_is_a_recorded_refutation(self, capsys):
        code, payload = run_json(capsys, "hopf", "check", "--model", "literal",
                                 "--n", "2")
        assert code == EXIT_REFUTED
        report = payload["report"]
        assert report["delta_homomorphism"]["status"] == "pass"
        assert report["coassociativity"]["status"] == "not-applicable"
        assert "256" in report["coassociativity"]["detail"]

    def test_usage_errors_are_exit_1(self, capsys):
        assert run(capsys, "nonsense")[0] == EXIT_USAGE
        assert run(capsys, "ck", "verify", "--family", "bogus")[0] == EXIT_USAGE
        assert run(capsys, "hopf", "check", "--model", "sd")[0] == EXIT_USAGE
        assert run(capsys, "hopf", "aw", "--algebra", "cyclic")[0] == EXIT_USAGE
        assert run(capsys)[0] == EXIT_USAGE

    def test_truncation_too_small_is_usage(self, capsys):
        code, _, err = run(capsys, "ck", "build", "--family", "Pi2-inf", "-N", "5")
        assert code == EXIT_USAGE
        assert "too small" in err

    def test_dim_assertion(self, capsys):
        code, _, err = run(capsys, "ck", "build", "--family", "pi2-finite",
                           "--dim", "9")
        assert code == EXIT_USAGE
        assert "backing dimension 4" in err
        assert run(capsys, "ck", "build", "--family", "pi2-finite",
                   "--dim", "4")[0] == EXIT_PASS

    def test_dot_format_is_for_graphs_only(self, capsys):
        code, _, err = run(capsys, "magic", "pi", "-f", "dot")
        assert code == EXIT_USAGE
        assert "graph payloads" in err


class TestGraphAndMagicPayloads:
    def test_dot_golden(self, capsys):
        code, out, _ = run(capsys, "graph", "build", "--family", "pi",
                           "--n", "2", "-f", "dot")
        assert code == EXIT_PASS
        assert out == to_dot(build_pi_graph(2))

    def test_commutant_payload(self, capsys):
        code, payload = run_json(capsys, "magic", "commutant",
                                 "--family", "relation", "--n", "2")
        assert code == EXIT_PASS
        assert payload["count"] == 2
        assert payload["overflow"] is False
        assert payload["perms"] == [[1, 2, 3, 4], [1, 3, 2, 4]]
        assert payload["cycles"] == ["(1)(2)(3)(4)", "(1)(2 3)(4)"]

    def test_magic_pi_passes(self, capsys):
        code, payload = run_json(capsys, "magic", "pi", "--n", "3")
        assert code == EXIT_PASS
        assert payload["magic"]["passed"] is True
        assert payload["matrix"]["rows"] == 9


class TestCKPayloads:
    def test_published_family_operators(self, capsys):
        code, payload = run_json(capsys, "ck", "build", "--family", "pi2-finite")
        assert code == EXIT_PASS
        assert payload["backing"] == {"kind": "finite", "dim": 4}
        assert payload["isometries"]["e1_1"]["entries"] == [[2, 1, "1", "0"]]
        assert "literal_projections" in payload

    def test_relation_family_verify_verdicts(self, capsys):
        code, payload = run_json(capsys, "ck", "verify", "--family", "Pi2-inf",
                                 "-N", "60")
        assert code == EXIT_REFUTED
        report = payload["report"]
        assert all(v["status"] == "pass" for v in report["relation1"].values())
        assert report["relation2_skipped"] == ["x11"]
        assert report["mutual_orthogonality"]["x12|x22"]["status"] == "fail"
        assert report["mutual_orthogonality"]["x11|x12"]["status"] == "pass"

    def test_closure_finite_only(self, capsys):
        code, payload = run_json(capsys, "ck", "closure", "--family", "pi2-finite")
        assert code == EXIT_PASS
        assert payload["dimension"] == 16
        assert payload["full_matrix_algebra"] is True
        code, _, err = run(capsys, "ck", "closure", "--family", "Pi2-inf")
        assert code == EXIT_USAGE
        assert "finite" in err

    def test_claim_published_params(self, capsys):
        code, payload = run_json(capsys, "ck", "verify", "--family", "claim",
                                 "--params", "published", "-N", "60")
        assert code == EXIT_REFUTED  # orthogonality against x22 still fails
        assert payload["experimental"] is True
        assert all(v["status"] == "pass"
                   for v in payload["report"]["relation1"].values())

    def test_claim_broadcast_and_per_edge_params(self, capsys):
        code, _ = run_json(capsys, "ck", "build", "--family", "claim",
                           "--params", "0:0", "-N", "60")
        assert code == EXIT_PASS
        code, _ = run_json(capsys, "ck", "build", "--family", "claim",
                           "--params", "e1_2=0:2,e1_3=4:2,e2_4=3:0,"
                                       "e3_4=4:1,e2_3=1:0,e3_2=3:1", "-N", "60")
        assert code == EXIT_PASS

    def test_claim_bad_params(self, capsys):
        code, _, err = run(capsys, "ck", "build", "--family", "claim",
                           "--params", "zz")
        assert code == EXIT_USAGE
        assert "A:D" in err
        code, _, err = run(capsys, "ck", "build", "--family", "claim",
                           "--params", "published", "--n", "3")
        assert code == EXIT_USAGE


class TestHopfPayloads:
    def test_cointegral_d3(self, capsys):
        code, payload = run_json(capsys, "hopf", "cointegral", "--d", "3")
        assert code == EXIT_PASS
        assert payload["solutions"] == [[["delta[123]", "1", "0"]]]
        assert payload["report"]["solution_count"] == 1

    def test_aw_blocks(self, capsys):
        code, payload = run_json(capsys, "hopf", "aw", "--algebra", "sd-group",
                                 "--size", "3")
        assert code == EXIT_PASS
        assert payload["blocks"] == [1, 1, 2]
        assert payload["sum_of_squares"] == 6

    def test_aw_cluster_failure_is_refutation(self, capsys):
        code, payload = run_json(capsys, "hopf", "aw", "--algebra", "cyclic",
                                 "--size", "4", "--tol", "10.0")
        assert code == EXIT_REFUTED
        assert "error" in payload
        assert "blocks" not in payload

    def test_dqg(self, capsys):
        code, payload = run_json(capsys, "hopf", "dqg", "--d", "2")
        assert code == EXIT_PASS
        assert payload["report"]["block_sizes"] == [1, 1]

    def test_group_ring_descriptor_embedded(self, capsys):
        code, payload = run_json(capsys, "hopf", "check", "--model", "group-ring",
                                 "--n", "2", "--group", "SL", "--shift", "0")
        assert code == EXIT_REFUTED  # same dimension obstruction as literal
        assert payload["descriptor"]["localization"] == "t^-1"

    def test_group_ring_shift_validation(self, capsys):
        code, _, err = run(capsys, "hopf", "check", "--model", "group-ring",
                           "--n", "2", "--group", "SL", "--shift", "1")
        assert code == EXIT_USAGE
        assert "shift 1" in err

    def test_sd_degree_bounds(self, capsys):
        assert run(capsys, "hopf", "check", "--model", "sd", "--d", "9")[0] == \
            EXIT_USAGE


class TestDeterminismAndFormats:
    def test_json_output_is_byte_identical_across_runs(self, capsys):
        argvs = [
            ("graph", "build", "--family", "relation", "--n", "3"),
            ("ck", "verify", "--family", "Pi2-inf", "-N", "60"),
            ("hopf", "check", "--model", "sd", "--d", "3"),
            ("hopf", "aw", "--algebra", "sd-group", "--size", "3"),
        ]
        for argv in argvs:
            first = run(capsys, *argv)
            second = run(capsys, *argv)
            assert first == second, argv

    def test_json_is_sorted_and_newline_terminated(self, capsys):
        _, out, _ = run(capsys, "magic", "pi", "--n", "2")
        assert out.endswith("\n")
        payload = json.loads(out)
        assert list(payload) == sorted(payload)

    def test_text_format(self, capsys):
        code, out, _ = run(capsys, "magic", "pi", "--n", "2", "-f", "text")
        assert code == EXIT_PASS
        assert "magic.passed = True" in out
        assert "{" not in out

    def test_seed_flag_reaches_the_payload(self, capsys):
        _, payload = run_json(capsys, "hopf", "aw", "--algebra", "cyclic",
                              "--size", "3", "--seed", "5")
        assert payload["seed"] == 5


class TestConfig:
    def test_config_file_and_flag_precedence(self, tmp_path, capsys):
        path = tmp_path / "run.cfg"
        path.write_text("# comment\ntruncation_N = 60\nmargin = auto\nseed=3\n")
        code, payload = run_json(capsys, "ck", "build", "--family", "Pi2-inf",
                                 "--config", str(path))
        assert code == EXIT_PASS
        assert payload["backing"]["n"] == 60
        assert payload["backing"]["margin"] == 6  # auto: largest stride
        code, payload = run_json(capsys, "ck", "build", "--family", "Pi2-inf",
                                 "--config", str(path), "-N", "80", "--margin", "10")
        assert payload["backing"] == {"kind": "truncated", "n": 80,
                                      "margin": 10, "window": 35}

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("depth = 3\n")
        with pytest.raises(UsageError, match="unknown config key"):
            load_config_file(str(path))

    def test_bad_value_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("truncation_N = many\n")
        with pytest.raises(UsageError, match="bad value"):
            load_config_file(str(path))

    def test_missing_file_is_usage_error(self, capsys):
        code, _, err = run(capsys, "graph", "build", "--family", "pi",
                           "--config", "/nonexistent.cfg")
        assert code == EXIT_USAGE
        assert "cannot read" in err

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("truncation_N\n")
        with pytest.raises(UsageError, match="key=value"):
            load_config_file(str(path))

    def test_validate_bounds(self):
        with pytest.raises(UsageError):
            RunConfig(truncation_N=0).validate()
        with pytest.raises(UsageError):
            RunConfig(margin=-1).validate()
        with pytest.raises(UsageError):
            RunConfig(tolerance=0.0).validate()
        with pytest.raises(UsageError):
            RunConfig(output_format="yaml").validate()
        RunConfig().validate()

    def test_build_config_defaults(self):
        import argparse
        config = build_config(argparse.Namespace())
        assert config == RunConfig()


class TestReportCommand:
    def test_report_writes_everything_and_is_deterministic(self, tmp_path, capsys):
        out1 = tmp_path / "a"
        code, payload = run_json(capsys, "report", "--out", str(out1), "-N", "60")
        assert code == EXIT_PASS
        assert payload["surprises"] == []
        assert payload["checks"] >= 20

        csv_path = out1 / "summary.csv"
        json_path = out1 / "summary.json"
        assert csv_path.is_file() and csv_path.stat().st_size > 0
        assert json_path.is_file()
        figures = sorted((out1 / "figures").glob("*.png"))
        assert len(figures) >= 3
        for fig in figures:
            assert fig.stat().st_size > 0

        summary = json.loads(json_path.read_text())
        assert summary["schema"] == 1
        assert all(row["matches_expected"] for row in summary["rows"])

        # a second run into a fresh directory must be byte-identical
        out2 = tmp_path / "b"
        code2, _ = run_json(capsys, "report", "--out", str(out2), "-N", "60")
        assert code2 == EXIT_PASS
        assert csv_path.read_bytes() == (out2 / "summary.csv").read_bytes()
        assert json_path.read_bytes() == (out2 / "summary.json").read_bytes()
        for fig in figures:
            twin = out2 / "figures" / fig.name
            assert fig.read_bytes() == twin.read_bytes()

    def test_expected_refutations_are_not_surprises(self, tmp_path, capsys):
        out = tmp_path / "r"
        _, payload = run_json(capsys, "report", "--out", str(out), "-N", "60")
        summary = json.loads((out / "summary.json").read_text())
        refuted = [row for row in summary["rows"] if row["expected"] == "fail"]
        assert refuted  # the battery includes on-purpose refutations
        for row in refuted:
            assert row["observed"] == "fail"
            assert row["matches_expected"]


class TestInstalledEntryPoint:
    def test_console_script(self):
        exe = shutil.which("graphck")
        assert exe, "console script not installed"
        proc = subprocess.run([exe, "graph", "build", "--family", "pi",
                               "--n", "2", "-f", "dot"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout == to_dot(build_pi_graph(2))

    def test_module_invocation_exit_codes(self):
        proc = subprocess.run(["python3", "-m", "graphck.cli", "ck", "verify",
                               "--family", "pi2-finite"], capture_output=True)
        assert proc.returncode == 2
        proc = subprocess.run(["python3", "-m", "graphck.cli", "ck", "verify",
                               "--family", "zzz"], capture_output=True)
        assert proc.returncode == 1
