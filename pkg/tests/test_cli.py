"""CLI: config ingestion, CSV emission, verification report, exit codes."""

import numpy as np
import pytest

from coexsim.checks import run_all_checks
from coexsim.cli import ConfigError, load_config, main
from coexsim.filterbank import PrototypeFilter

GOOD_CONFIG = """\
M: 512
cp_ratio: 1/8
incumbent_set: {range: [-5, 5]}
secondary_set: [0]
var_qam: 1.0
var_pam: 0.5
delta_f: 0.0
seed: 42
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "scenario.yaml"
    path.write_text(GOOD_CONFIG)
    return str(path)


class TestConfigLoading:
    def test_round_trip(self, config_file):
        cfg = load_config(config_file)
        assert cfg.M == 512
        assert cfg.incumbent_set == frozenset(range(-5, 6))
        assert cfg.secondary_set == frozenset({0})
        assert cfg.seed == 42

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text(GOOD_CONFIG + "cp_ration: 1/4\n")
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            load_config("/nonexistent/config.yaml")

    def test_explicit_list_sets(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("M: 64\nincumbent_set: [0, 1, 2]\nsecondary_set: [0]\n")
        assert load_config(str(path)).incumbent_set == frozenset({0, 1, 2})


class TestTableCommand:
    def test_grid_and_symmetry(self, config_file, tmp_path):
        out = tmp_path / "table.csv"
        rc = main(["table", "--config", config_file, "--direction", "s2i",
                   "--lmin", "-50", "--lmax", "50", "--lstep", "1", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "l,power_linear,power_db"
        assert len(lines) == 102
        db = {float(r.split(",")[0]): r.split(",")[2] for r in lines[1:]}
        for l in range(1, 51):
            assert db[l] == db[-l]

    def test_bad_step_exits_2(self, config_file, tmp_path):
        rc = main(["table", "--config", config_file, "--direction", "s2i",
                   "--lstep", "0", "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_missing_config_exits_2(self, tmp_path):
        rc = main(["table", "--config", str(tmp_path / "none.yaml"), "--direction", "s2i",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_o2o_direction_rejected(self, config_file, tmp_path):
        rc = main(["table", "--config", config_file, "--direction", "o2o",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_both_directions_emit_fig5_pair(self, config_file, tmp_path):
        for direction in ("s2i", "i2s"):
            out = tmp_path / f"{direction}.csv"
            rc = main(["table", "--config", config_file, "--direction", direction,
                       "--lmin", "-20", "--lmax", "20", "--lstep", "0.5", "--out", str(out)])
            assert rc == 0
            assert len(out.read_text().splitlines()) == 82


class TestSimulateCommand:
    def test_columns_and_determinism(self, config_file, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (out1, out2):
            rc = main(["simulate", "--config", config_file, "--direction", "s2i",
                       "--symbols", "200", "--out", str(out)])
            assert rc == 0
        assert out1.read_bytes() == out2.read_bytes()
        lines = out1.read_text().splitlines()
        assert lines[0] == "l,power_mc,std_err,power_closed,power_psd"
        assert len(lines) == 12

    def test_mc_tracks_closed_column(self, config_file, tmp_path):
        out = tmp_path / "s.csv"
        main(["simulate", "--config", config_file, "--direction", "s2i",
              "--symbols", "1200", "--out", str(out)])
        psd_miss = 0.0
        for row in out.read_text().splitlines()[1:]:
            l, p_mc, _, p_closed, p_psd = row.split(",")
            assert abs(10 * np.log10(float(p_mc) / float(p_closed))) < 0.5
            if abs(float(l)) >= 2:
                psd_miss = max(psd_miss, abs(10 * np.log10(float(p_psd) / float(p_mc))))
        # toward the CP-OFDM victim the PSD column visibly departs from the MC
        assert psd_miss > 10.0

    def test_seed_override_changes_output(self, config_file, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["simulate", "--config", config_file, "--direction", "o2o",
              "--symbols", "64", "--out", str(a)])
        main(["simulate", "--config", config_file, "--direction", "o2o",
              "--symbols", "64", "--seed", "7", "--out", str(b)])
        assert a.read_bytes() != b.read_bytes()


class TestVerifyCommand:
    def test_passes_on_reference_filter(self, config_file, capsys):
        rc = main(["verify", "--config", config_file])
        out = capsys.readouterr().out
        assert rc == 0
        assert "FAIL" not in out
        assert out.count("PASS") == 8

    def test_missing_config_is_usage_error(self, tmp_path):
        rc = main(["verify", "--config", str(tmp_path / "none.yaml")])
        assert rc == 2


class TestVerifySuiteNegative:
    def test_corrupted_coefficient_fails_checks(self):
        bad = PrototypeFilter(overlap_K=4, coeffs=(1.0, 0.9, 1 / np.sqrt(2), 0.235147))
        results = {r.name: r.passed for r in run_all_checks(bad)}
        assert not results["parseval-power-conservation"]
        assert not results["filter-normalization"]
        # closed form and oracle share the corrupted coefficients, so their
        # equivalence still holds; the energy checks are what catch the damage
        assert not results["filter-unit-energy"]


class TestPsdCommand:
    def test_psd_csv(self, config_file, tmp_path):
        out = tmp_path / "psd.csv"
        rc = main(["psd", "--config", config_file, "--lmin", "-2", "--lmax", "2",
                   "--lstep", "0.5", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "f_norm,psd_cpofdm,psd_oqam,psd_cpofdm_db,psd_oqam_db"
        assert len(lines) == 10
