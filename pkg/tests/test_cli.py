import json

import numpy as np
import pytest
from click.testing import CliRunner

from triqal.cli import main
from triqal.io import load_algebra, to_pairs


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def family_file(tmp_path, runner):
    path = tmp_path / "fam.json"
    result = runner.invoke(main, ["family", "--d", "0.25", "--alpha", "4",
                                  "--out", str(path)])
    assert result.exit_code == 0, result.output
    return path


@pytest.fixture
def trivial_file(tmp_path, runner):
    path = tmp_path / "triv.json"
    result = runner.invoke(main, ["family", "--trivial", "--out", str(path)])
    assert result.exit_code == 0, result.output
    return path


class TestFamily:
    def test_written_file_entries(self, family_file):
        doc = json.loads(family_file.read_text())
        assert doc["n"] == 2
        assert doc["P"] == [0, 1]
        assert doc["Qbar"][0][0][1][1] == [1.0, 0.0]      # alpha * d
        assert doc["Qbar"][1][1][0][0] == [0.0625, 0.0]   # d / alpha
        assert "Qm" not in doc and "h" not in doc

    def test_report_values(self, runner):
        result = runner.invoke(main, ["family", "--d", "0.25", "--alpha", "4"])
        assert result.exit_code == 0
        assert "a = 0.500000000000" in result.output
        assert "max system residual: 0" in result.output

    def test_complex_literals(self, runner):
        result = runner.invoke(main, ["family", "--d", "1+1i", "--alpha", "i"])
        assert result.exit_code == 0, result.output

    def test_zero_d_rejected(self, runner):
        result = runner.invoke(main, ["family", "--d", "0", "--alpha", "2"])
        assert result.exit_code == 2
        assert "d must be nonzero" in result.stderr

    def test_bad_literal_rejected(self, runner):
        result = runner.invoke(main, ["family", "--d", "zzz", "--alpha", "2"])
        assert result.exit_code == 2

    def test_requires_parameters(self, runner):
        result = runner.invoke(main, ["family"])
        assert result.exit_code == 2

    def test_json_flag(self, runner):
        result = runner.invoke(main, ["family", "--trivial", "--json"])
        doc = json.loads(result.output)
        assert doc["command"] == "family"
        assert doc["vars"]["c"] == [1.0, 0.0]


class TestCheck:
    def test_documented_passing_subset(self, runner, family_file):
        result = runner.invoke(main, ["check", str(family_file),
                                      "--axioms", "vii,pentagon"])
        assert result.exit_code == 0, result.output
        assert "result: ok" in result.output

    def test_default_set_fails_on_family_member(self, runner, family_file):
        result = runner.invoke(main, ["check", str(family_file)])
        assert result.exit_code == 1
        assert "result: FAILED" in result.output
        assert "axiom i" in result.output
        assert "note: h defaulted to identity" in result.output

    def test_trivial_fails_axiom_iv(self, runner, trivial_file):
        result = runner.invoke(main, ["check", str(trivial_file),
                                      "--axioms", "iv"])
        assert result.exit_code == 1
        assert "FAIL" in result.output

    def test_broken_permutation_is_input_error(self, runner, family_file,
                                               tmp_path):
        doc = json.loads(family_file.read_text())
        doc["P"] = [1, 0]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        result = runner.invoke(main, ["check", str(bad)])
        assert result.exit_code == 2
        assert "'P'" in result.stderr

    def test_unknown_token_is_input_error(self, runner, family_file):
        result = runner.invoke(main, ["check", str(family_file),
                                      "--axioms", "banana"])
        assert result.exit_code == 2

    def test_env_tolerance_and_flag_override(self, runner, trivial_file):
        loose = runner.invoke(main, ["check", str(trivial_file),
                                     "--axioms", "iv"],
                              env={"TRIQAL_TOL": "2.0"})
        assert loose.exit_code == 0, loose.output
        strict = runner.invoke(main, ["check", str(trivial_file),
                                      "--axioms", "iv", "--tol", "1e-9"],
                               env={"TRIQAL_TOL": "2.0"})
        assert strict.exit_code == 1

    def test_deterministic_output(self, runner, family_file):
        first = runner.invoke(main, ["check", str(family_file)])
        second = runner.invoke(main, ["check", str(family_file)])
        assert first.output == second.output

    def test_missing_file(self, runner):
        result = runner.invoke(main, ["check", "no-such-file.json"])
        assert result.exit_code == 2


class TestFull:
    def test_writes_tensors(self, runner, family_file, tmp_path):
        out = tmp_path / "full.json"
        result = runner.invoke(main, ["full", str(family_file),
                                      "--out", str(out)])
        assert result.exit_code == 0
        doc = json.loads(out.read_text())
        assert doc["m31"][0][0][0][0] == [0.75, 0.0]
        assert set(doc) == {"n", "m22", "m31", "m13", "m04", "m40"}

    def test_singular_h_is_input_error(self, runner, family_file, tmp_path):
        h_path = tmp_path / "h.json"
        h_path.write_text(json.dumps({"h": to_pairs(
            np.ones((2, 2), dtype=complex))}))
        result = runner.invoke(main, ["full", str(family_file),
                                      "--h", str(h_path)])
        assert result.exit_code == 2
        assert "singular" in result.stderr


class TestPentagon:
    def test_family_member_passes(self, runner, family_file):
        result = runner.invoke(main, ["pentagon", str(family_file)])
        assert result.exit_code == 0, result.output
        assert "result: ok" in result.output


class TestLens:
    def test_values(self, runner, family_file):
        for p, q, expected in ((3, 1, "2.000000000000"),
                               (4, 1, "2.000000000000"),
                               (4, 3, "2.562500000000")):
            result = runner.invoke(main, ["lens", "--p", str(p),
                                          "--q", str(q), str(family_file)])
            assert result.exit_code == 0
            assert result.stdout.strip() == expected

    def test_coprimality_error(self, runner, family_file):
        result = runner.invoke(main, ["lens", "--p", "4", "--q", "2",
                                      str(family_file)])
        assert result.exit_code == 2
        assert "q must be coprime to p" in result.stderr

    def test_network_dump(self, runner, family_file, tmp_path):
        out = tmp_path / "net.json"
        result = runner.invoke(main, ["lens", "--p", "5", "--q", "2",
                                      str(family_file),
                                      "--dump-network", str(out)])
        assert result.exit_code == 0
        net = json.loads(out.read_text())
        assert net["p"] == 5 and net["q"] == 2
        assert len(net["tetras"]) == 6

    def test_json_flag(self, runner, family_file):
        result = runner.invoke(main, ["lens", "--p", "3", "--q", "1",
                                      str(family_file), "--json"])
        doc = json.loads(result.output)
        assert doc["value"] == [2.0, 0.0]


class TestRoundTrip:
    def test_written_family_file_loads_bit_exactly(self, family_file,
                                                   tmp_path, runner):
        alg, h = load_algebra(family_file)
        assert h is None
        # Re-serialize through the library and compare documents exactly.
        from triqal.io import save_algebra
        second = tmp_path / "second.json"
        save_algebra(second, alg)
        assert json.loads(family_file.read_text()) == json.loads(
            second.read_text())
