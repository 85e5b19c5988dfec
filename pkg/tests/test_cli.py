import json

import numpy as np
import pytest

from dfscavity.cli import (
    DEFAULT_G,
    ConfigError,
    main,
    parse_config,
    run_experiment,
    serialize_config,
)


class TestConfigParsing:
    def test_empty_text_with_experiment_gives_defaults(self):
        config = parse_config("", experiment="bell")
        assert config.experiment == "bell"
        assert config.G == DEFAULT_G
        assert config.resolved_delta() == pytest.approx(10 * DEFAULT_G)
        assert config.n_max == 8

    def test_negative_coupling_names_key(self):
        with pytest.raises(ConfigError, match="'G'"):
            parse_config("G = -1\n", experiment="bell")

    def test_unknown_key_names_key_and_line(self):
        with pytest.raises(ConfigError, match=r"'frobnicate'.*line 3"):
            parse_config("# comment\n\nfrobnicate = 1\n", experiment="bell")

    def test_non_finite_number_rejected(self):
        with pytest.raises(ConfigError, match="finite"):
            parse_config("G = inf\n", experiment="bell")

    def test_missing_experiment_rejected(self):
        with pytest.raises(ConfigError, match="experiment"):
            parse_config("G = 1.0\n")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config("nbar = 0.1\nnbar = 0.2\n", experiment="thermal")

    def test_comments_and_lists(self):
        text = """
        experiment = stagger-sweep   # inline comment
        t1_fractions = 0.0, 0.02, 0.1
        seed = 7
        """
        config = parse_config(text)
        assert config.experiment == "stagger-sweep"
        assert config.t1_fractions == (0.0, 0.02, 0.1)
        assert config.seed == 7

    def test_round_trip_through_serialize(self):
        config = parse_config(
            "experiment = teleport\nG = 2.5e5\ntheta = 0.7\ndelta_over_G = 10,40\nseed = 3\n")
        again = parse_config(serialize_config(config))
        assert again == config

    def test_documented_sample_config_parses(self):
        sample = """
        # teleportation sweep at a stiffer detuning
        experiment = teleport
        G       = 2.9530971e5        # rad/s
        delta   = 5.9061942e6        # rad/s (10 G if omitted)
        n_max   = 8
        theta_points = 12
        delay_points = 8
        seed    = 7
        """
        config = parse_config(sample)
        assert config.experiment == "teleport"
        assert config.resolved_delta() == pytest.approx(5.9061942e6)
        assert parse_config(serialize_config(config)) == config

    def test_cli_positional_overrides_config_key(self):
        config = parse_config("experiment = bell\n", experiment="thermal")
        assert config.experiment == "thermal"

    def test_bad_experiment_name(self):
        with pytest.raises(ConfigError, match="unknown experiment"):
            parse_config("experiment = frobnicate\n")


class TestExperiments:
    def test_durations_reference_values(self):
        report = run_experiment(parse_config("", experiment="durations"))
        assert report.passed
        res = report.results
        assert res["entangle_time_s"] == pytest.approx(1.33e-5, rel=0.01)
        assert res["cnot_time_aggregate_s"] == pytest.approx(9.31e-5, rel=0.01)
        assert res["aggregate_minus_bottom_up_s"] == pytest.approx(
            res["entangle_time_s"], rel=1e-6)

    def test_cnot_verify_passes_with_convention_record(self):
        report = run_experiment(parse_config("", experiment="cnot-verify"))
        assert report.passed
        assert report.conventions["application_order"] == "listed_first_applied_first"
        assert report.conventions["p_sign"] == 1
        assert len(report.results["candidates"]) == 4
        assert sum(c["passed"] for c in report.results["candidates"]) == 2

    def test_bell_maps_each_label_to_itself(self):
        report = run_experiment(parse_config("", experiment="bell"))
        assert report.passed
        rows = report.results["discrimination"]
        assert len(rows) == 4
        for row in rows:
            assert row["input"] == row["observed"]
            assert row["probability"] >= 1 - 1e-12

    def test_entangle_passes(self):
        report = run_experiment(parse_config("", experiment="entangle"))
        assert report.passed
        amp = report.results["amplitudes"]["gege"]
        assert amp[1] == pytest.approx(-1 / np.sqrt(2), abs=1e-12)

    def test_teleport_grid_passes(self):
        config = parse_config("theta_points = 4\ndelay_points = 3\n", experiment="teleport")
        report = run_experiment(config)
        assert report.passed
        assert report.results["max_branch_deviation_from_1"] < 1e-10
        assert report.results["bare_comparison"]["fidelity"] < 1e-12

    def test_stagger_sweep_passes_and_documents_bound(self):
        report = run_experiment(parse_config("", experiment="stagger-sweep"))
        assert report.passed
        ref = report.results["reference_point"]
        assert ref["fidelity_amplitude"] >= 0.98
        assert ref["fidelity_amplitude"] == pytest.approx(0.99861, abs=1e-5)
        assert report.results["closed_form_max_defect"] < 1e-12

    def test_thermal_monotone(self):
        config = parse_config("nbar_points = 20\n", experiment="thermal")
        report = run_experiment(config)
        assert report.passed
        table = report.results["table"]
        assert table[0][1] == pytest.approx(1.0, abs=1e-12)

    def test_validate_effective_honest_failure_flags(self):
        config = parse_config("", experiment="validate-effective")
        report = run_experiment(config)
        flags = report.flags
        assert flags["unitarity_ok"]
        assert flags["normalization_ok"]
        assert flags["guard_levels_empty"]
        assert flags["difference_nonempty_as_recorded"]
        assert flags["derived_tracks_full_better"]
        assert flags["derived_infidelity_decreasing"]
        # the two claims the exact dynamics does not support
        assert not flags["fit_gate_passed"]
        assert not flags["pair_rabi_deviation_decreasing"]
        assert not report.passed


class TestDeterminism:
    def test_json_reports_byte_identical(self):
        config = parse_config("seed = 5\ntheta_points = 3\ndelay_points = 2\n",
                              experiment="teleport")
        first = run_experiment(config).to_json().encode()
        second = run_experiment(config).to_json().encode()
        assert first == second

    def test_csv_reports_byte_identical(self):
        config = parse_config("", experiment="stagger-sweep")
        first = run_experiment(config).to_csv().encode()
        second = run_experiment(config).to_csv().encode()
        assert first == second

    def test_json_is_sorted_and_clean(self):
        report = run_experiment(parse_config("", experiment="durations"))
        text = report.to_json()
        parsed = json.loads(text)
        assert list(parsed) == sorted(parsed)
        for line in text.splitlines():
            assert line == line.rstrip()

    def test_csv_uses_lf_and_header(self):
        report = run_experiment(parse_config("", experiment="stagger-sweep"))
        text = report.to_csv()
        assert "\r" not in text
        assert text.splitlines()[0] == "t1_fraction,fidelity_amplitude,fidelity_squared"


class TestMainEntryPoint:
    def test_success_exit_zero_and_file_written(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["bell", "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["passed"] is True
        assert payload["experiment"] == "bell"

    def test_config_error_exit_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("G = -1\n")
        code = main(["bell", "--config", str(bad)])
        assert code == 2
        assert "G" in capsys.readouterr().err

    def test_missing_config_file_exit_two(self, capsys):
        assert main(["bell", "--config", "/nonexistent/path.cfg"]) == 2

    def test_experiment_failure_exit_one_report_still_written(self, tmp_path, capsys):
        out = tmp_path / "validate.json"
        code = main(["validate-effective", "--out", str(out)])
        assert code == 1
        payload = json.loads(out.read_text())
        assert payload["passed"] is False
        assert payload["results"]["runs"][0]["fit_gate_fired"] is True

    def test_repeated_runs_byte_identical_on_disk(self, tmp_path, capsys):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["teleport", "--out", str(out1), "--seed", "9"]) == 0
        assert main(["teleport", "--out", str(out2), "--seed", "9"]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_seed_flag_overrides_config(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("seed = 1\n")
        out = tmp_path / "r.json"
        main(["teleport", "--config", str(cfg), "--out", str(out), "--seed", "4"])
        payload = json.loads(out.read_text())
        assert payload["config"]["seed"] == 4
