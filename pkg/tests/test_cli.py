import csv
import io
import json
import subprocess
import sys

import mpmath
import pytest

from d5mock.cli import RunConfig, main
from d5mock.errors import DomainError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def value_line(out):
    return next(line for line in out.splitlines() if line.startswith("value")).split()[1]


class TestEval:
    def test_d5(self, capsys):
        code, out, _ = run(capsys, "eval", "d5", "--q", "0.1")
        assert code == 0
        assert value_line(out).startswith("1.2471869")
        assert "err_estimate" in out and "terms_used" in out

    def test_at_zero(self, capsys):
        code, out, _ = run(capsys, "eval", "d5", "--q", "0")
        assert code == 0 and value_line(out) == "1.0"

    def test_outside_disc(self, capsys):
        code, out, err = run(capsys, "eval", "h2", "--q", "1.5")
        assert code == 2 and out == ""
        assert "|q| must be < 1" in err

    def test_alpha_and_json(self, capsys):
        code, out, _ = run(capsys, "eval", "omega", "--repr", "lerch", "--alpha", "1,0.2", "--format", "json")
        d = json.loads(out)
        assert code == 0 and d["representation"] == "LERCH" and d["rigorous"] is True

    def test_missing_representation(self, capsys):
        code, _, err = run(capsys, "eval", "d5", "--repr", "lerch", "--q", "0.2")
        assert code == 2 and "LERCH" in err

    def test_bad_number(self):
        with pytest.raises(SystemExit) as e:
            main(["eval", "d5", "--q", "abc"])
        assert e.value.code == 2


class TestVerify:
    def test_main_theorem(self, capsys):
        code, out, err = run(capsys, "verify", "main-theorem", "--alpha", "1", "--format", "json")
        (rep,) = json.loads(out)
        assert code == 0 and rep["passed"] and rep["rel_residual"] < 1e-10
        assert "1/1 passed" in err

    def test_unknown(self, capsys):
        code, _, err = run(capsys, "verify", "nosuch")
        assert code == 2 and "nosuch" in err

    def test_failure_exit_code(self, capsys):
        code, out, _ = run(capsys, "verify", "main-theorem", "--alpha", "1", "--tol", "1e-40")
        assert code == 1 and out.startswith("FAIL")

    def test_point_must_match_schema(self, capsys):
        code, _, _ = run(capsys, "verify", "watson", "--q", "0.3")
        assert code == 2

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "verify", "repr-omega", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 9 and all(r["passed"] == "True" for r in rows)

    def test_all(self, capsys):
        code, _, err = run(capsys, "verify", "all")
        assert code == 0
        passed, total = err.strip().split()[0].split("/")
        assert passed == total


class TestCoeffs:
    def test_d5(self, capsys):
        code, out, _ = run(capsys, "coeffs", "d5", "--order", "7")
        assert code == 0 and json.loads(out) == [1, 2, 4, 6, 10, 16, 23]

    def test_h1(self, capsys):
        _, out, _ = run(capsys, "coeffs", "h1", "--order", "7")
        assert json.loads(out) == [1, 3, 7, 14, 27, 49, 84]

    def test_d5_star(self, capsys):
        _, out, _ = run(capsys, "coeffs", "d5-star", "--order", "43")
        cs = json.loads(out)
        assert {k: c for k, c in enumerate(cs) if c} == {0: 1, 2: -1, 6: 1, 12: -1, 20: 1, 30: -1, 42: 1}

    def test_order_cap(self, capsys):
        code, _, _ = run(capsys, "coeffs", "d5", "--order", "5000")
        assert code == 2

    def test_csv(self, capsys):
        _, out, _ = run(capsys, "coeffs", "h2", "--order", "3", "--format", "csv")
        assert out.splitlines() == ["exponent,coefficient", "0,1", "1,-1", "2,1"]


class TestWrt:
    def test_n_two(self, capsys):
        code, out, _ = run(capsys, "wrt", "2", "2")
        assert code == 0 and out.splitlines() == ["N,re_tau,im_tau", "2,1.0,0.0"]

    def test_n_one(self, capsys):
        code, _, _ = run(capsys, "wrt", "1", "5")
        assert code == 2

    def test_precision_stable(self, capsys):
        _, lo, _ = run(capsys, "wrt", "2", "10")
        _, hi, _ = run(capsys, "wrt", "2", "10", "--precision", "256")
        a = list(csv.reader(io.StringIO(lo)))[1:]
        b = list(csv.reader(io.StringIO(hi)))[1:]
        for ra, rb in zip(a, b):
            assert ra[0] == rb[0]
            with mpmath.workprec(256):
                for x, y in zip(ra[1:], rb[1:]):
                    assert abs(mpmath.mpf(x) - mpmath.mpf(y)) < 1e-25


class TestIntegral:
    def test_mordell(self, capsys):
        code, out, _ = run(capsys, "integral", "mordell", "--alpha", "1")
        assert code == 0 and value_line(out).startswith("1.4790611714")
        assert "nodes_used" in out

    def test_bad_alpha(self, capsys):
        code, _, err = run(capsys, "integral", "watson", "--alpha", "-1")
        assert code == 2 and "Re(alpha)" in err


class TestConfig:
    @pytest.mark.parametrize("kw", [{"precision_bits": 40}, {"tol": 0}, {"order": 0}])
    def test_invariants(self, kw):
        with pytest.raises(DomainError):
            RunConfig(**kw)

    def test_flags_reach_config(self, capsys):
        code, _, err = run(capsys, "eval", "d5", "--q", "0.1", "--precision", "32")
        assert code == 2 and "precision" in err


def test_deterministic_output():
    cmd = [sys.executable, "-m", "d5mock", "verify", "triple-product", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    assert a.returncode == 0 and a.stdout == b.stdout and a.stdout
