import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from copcone.errors import DataError
from copcone.io import canonical_json, load_matrix, to_jsonable

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(*args, env=None):
    import os

    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "copcone", *args],
        capture_output=True,
        text=True,
        env=full_env,
    )


class TestLoadMatrix:
    def test_json_fixture(self):
        mf = load_matrix(str(FIXTURES / "horn.json"))
        assert mf.n == 5
        assert mf.data[0, 1] == -1.0
        assert len(mf.digest) == 64

    def test_text_fallback(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("2\n1 0\n0 2\n")
        mf = load_matrix(str(p))
        assert mf.n == 2
        assert mf.data[1, 1] == 2.0

    def test_factor_field(self):
        mf = load_matrix(str(FIXTURES / "w6.json"))
        assert mf.factor is not None
        assert np.abs(mf.factor @ mf.factor.T - mf.data).max() == 0.0

    def test_rejects_asymmetric(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"n": 2, "data": [[1, 2], [3, 4]]}')
        with pytest.raises(DataError):
            load_matrix(str(p))

    def test_rejects_malformed(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        with pytest.raises(DataError):
            load_matrix(str(p))

    def test_missing_file(self):
        with pytest.raises(DataError):
            load_matrix("no_such_file.json")


class TestCanonicalJson:
    def test_sorted_and_newline_terminated(self):
        out = canonical_json({"b": 1, "a": 2})
        assert out.index('"a"') < out.index('"b"')
        assert out.endswith("\n")

    def test_numpy_scalars(self):
        out = to_jsonable(
            {
                "f": np.float64(0.5),
                "i": np.int64(3),
                "b": np.bool_(True),
                "arr": np.arange(3.0),
            }
        )
        assert out == {"f": 0.5, "i": 3, "b": True, "arr": [0.0, 1.0, 2.0]}
        assert isinstance(out["b"], bool)

    def test_float_canonicalization_is_stable(self):
        x = 0.1 + 0.2
        assert to_jsonable(x) == to_jsonable(np.float64(x))


class TestCliExitCodes:
    def test_check_in(self):
        r = run_cli("check", "--cone", "copositive", str(FIXTURES / "horn.json"))
        assert r.returncode == 0
        assert json.loads(r.stdout)["result"]["answer"] == "IN"

    def test_check_not_in(self):
        r = run_cli("check", "--cone", "psd", str(FIXTURES / "horn.json"))
        assert r.returncode == 1
        assert json.loads(r.stdout)["result"]["answer"] == "NOT_IN"

    def test_usage_error(self):
        r = run_cli("check", str(FIXTURES / "horn.json"))
        assert r.returncode == 64

    def test_data_error(self):
        r = run_cli("check", "--cone", "psd", "missing.json")
        assert r.returncode == 65

    def test_factorize_error_tag(self):
        r = run_cli("factorize", "--method", "dd", str(FIXTURES / "horn.json"))
        assert r.returncode == 1
        assert "error" in json.loads(r.stdout)["result"]


class TestCliDeterminism:
    @pytest.mark.parametrize(
        "args",
        [
            ("check", "--cone", "copositive", "horn.json"),
            ("factorize", "--method", "dd", "dd_example.json"),
            ("factorize", "--method", "horn6", "w6.json"),
            ("bounds", "w6.json", "--witness", "hornplus0.json"),
            ("orbit", "e12.json"),
            ("verify-orth", "w6.json", "hornplus0.json", "--factor", "w6.json"),
        ],
    )
    def test_byte_identical_reports(self, args):
        full = [a if not a.endswith(".json") else str(FIXTURES / a) for a in args]
        r1 = run_cli(*full)
        r2 = run_cli(*full)
        assert r1.stdout == r2.stdout
        assert r1.stdout.strip()

    def test_stdout_carries_no_timing(self):
        r = run_cli("check", "--cone", "copositive", str(FIXTURES / "horn.json"))
        assert "wall" not in r.stdout
        assert "wall time" in r.stderr


class TestCliFlags:
    def test_env_tolerance(self):
        r = run_cli(
            "check",
            "--cone",
            "nonneg",
            str(FIXTURES / "j2.json"),
            env={"COPCONE_TOL": "1e-6"},
        )
        assert json.loads(r.stdout)["tolerance"]["abs"] == 1e-6

    def test_tol_flag_beats_env(self):
        r = run_cli(
            "check",
            "--cone",
            "nonneg",
            str(FIXTURES / "j2.json"),
            "--tol",
            "1e-5",
            env={"COPCONE_TOL": "1e-6"},
        )
        assert json.loads(r.stdout)["tolerance"]["abs"] == 1e-5

    def test_bounds_table_mode(self):
        r = run_cli("bounds", "--n", "6")
        res = json.loads(r.stdout)["result"]
        assert res["interval"] == [9, 15]

    def test_report_digests_inputs(self):
        r = run_cli("check", "--cone", "copositive", str(FIXTURES / "horn.json"))
        inputs = json.loads(r.stdout)["inputs"]
        assert all(len(v) == 64 for v in inputs.values())


def test_certificate_checker_script(tmp_path):
    root = FIXTURES.parent
    r = run_cli("check", "--cone", "copositive", str(FIXTURES / "horn.json"))
    report = tmp_path / "report.json"
    report.write_text(r.stdout)
    chk = subprocess.run(
        [
            sys.executable,
            str(root / "scripts" / "check_certificate.py"),
            str(report),
            str(FIXTURES / "horn.json"),
        ],
        capture_output=True,
        text=True,
    )
    assert chk.returncode == 0, chk.stdout + chk.stderr
