from __future__ import annotations

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from ckc.chain import JointAngles, LinkLengths
from ckc.cli import EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, main, parse_links, scaling_exponent
from ckc.closure import joint_positions
from ckc.records import RecordError, dumps, iter_records, parse_record


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def square_record() -> dict:
    links = LinkLengths.unit(4)
    ang = JointAngles([math.pi / 2, 0.0, 3 * math.pi / 2], [math.pi / 2] * 3)
    return {
        "links": links.a,
        "alpha": ang.alpha,
        "beta": ang.beta,
        "joints": joint_positions(links, ang),
    }


class TestRecords:
    def test_dumps_roundtrip(self):
        x = [0.1, 1 / 3, 1e-300, 123456789.123456789, -2.5e17]
        back = json.loads(dumps({"x": np.array(x), "i": 3, "b": True, "s": "ok", "n": None}))
        assert back == {"x": x, "i": 3, "b": True, "s": "ok", "n": None}

    def test_nonfinite(self):
        with pytest.raises(ValueError):
            dumps([math.inf])

    def test_parse_errors(self):
        with pytest.raises(RecordError):
            parse_record("{bad")
        with pytest.raises(RecordError):
            parse_record("[1, 2]")
        with pytest.raises(RecordError):
            parse_record('{"links": [1, 1, 1, 1]}')
        with pytest.raises(RecordError):
            parse_record('{"links": [1, 1, 1, 1], "alpha": [0], "beta": [0]}')
        with pytest.raises(RecordError):
            parse_record('{"links": [5, 1, 1], "alpha": [0, 0], "beta": [0, 0]}')

    def test_pretty_single_object(self):
        text = json.dumps({"links": [1, 1, 1], "alpha": [0, 0], "beta": [0, 0]}, indent=2)
        assert len(list(iter_records(text))) == 1


class TestParseLinks:
    def test_inline(self):
        assert parse_links("1, 2,3").tolist() == [1.0, 2.0, 3.0]

    def test_file(self, tmp_path):
        f = tmp_path / "a.txt"
        f.write_text("6\n5\n4\n1\n1\n")
        assert parse_links(str(f)).tolist() == [6, 5, 4, 1, 1]


class TestSample:
    def test_five_bar(self, capsys, tmp_path):
        out = tmp_path / "s.jsonl"
        code, _, _ = run(capsys, "sample", "--links", "1,1,1,1,1", "--count", "10", "--seed", "7", "--out", str(out))
        assert code == EXIT_OK
        recs = [json.loads(line) for line in out.read_text().splitlines()]
        assert len(recs) == 10
        for i, r in enumerate(recs):
            assert set(r) >= {"links", "alpha", "beta", "joints", "diagonals", "residual", "cases", "seed"}
            assert r["residual"] < 1e-9 and r["seed"] == 7 and r["index"] == i
            assert len(r["joints"]) == 5 and len(r["alpha"]) == 4 and len(r["cases"]) == 3
        code, text, _ = run(capsys, "verify", str(out))
        assert code == EXIT_OK and text.count(" ok") == 10

    def test_non_closable(self, capsys):
        code, _, err = run(capsys, "sample", "--links", "5,1,1", "--count", "1")
        assert code == EXIT_INFEASIBLE and "non-closable" in err

    @pytest.mark.parametrize("bad", ["1,x,1", "1,0,1,1", "1,1"])
    def test_bad_links(self, capsys, bad):
        assert run(capsys, "sample", "--links", bad)[0] == EXIT_INPUT

    def test_flag_errors(self, capsys):
        assert run(capsys, "sample")[0] == EXIT_INPUT
        assert run(capsys, "sample", "--links", "1,1,1", "--unit-links", "3")[0] == EXIT_INPUT
        assert run(capsys, "sample", "--unit-links", "4", "--count", "0")[0] == EXIT_INPUT
        assert run(capsys, "nosuch")[0] == EXIT_INPUT

    def test_byte_identical(self, capsys, tmp_path):
        a, b, c = (tmp_path / f"{x}.jsonl" for x in "abc")
        args = ["sample", "--links", "2,3,4,2,3", "--count", "6", "--seed", "11"]
        run(capsys, *args, "--out", str(a))
        run(capsys, *args, "--out", str(b))
        run(capsys, *args, "--jobs", "3", "--out", str(c))
        assert a.read_bytes() == b.read_bytes() == c.read_bytes()

    def test_prefix_stable(self, capsys, tmp_path):
        # sample i does not depend on how many samples are requested
        a, b = tmp_path / "a", tmp_path / "b"
        run(capsys, "sample", "--unit-links", "6", "--count", "2", "--out", str(a))
        run(capsys, "sample", "--unit-links", "6", "--count", "5", "--out", str(b))
        assert b.read_text().splitlines()[:2] == a.read_text().splitlines()

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "sample", "--unit-links", "4", "--count", "2", "--format", "csv")
        lines = out.splitlines()
        assert code == EXIT_OK and lines[0] == "sample,joint,x,y,z,alpha,beta"
        assert len(lines) == 1 + 2 * 4

    def test_stdout_json(self, capsys):
        code, out, err = run(capsys, "sample", "--unit-links", "5")
        assert code == EXIT_OK and json.loads(out)["residual"] < 1e-9 and "max residual" in err


class TestVerify:
    def test_square(self, capsys, tmp_path):
        f = tmp_path / "sq.json"
        f.write_text(dumps(square_record()))
        assert run(capsys, "verify", str(f))[0] == EXIT_OK

    def test_perturbed(self, capsys, tmp_path):
        rec = square_record()
        rec["alpha"] = rec["alpha"] + np.array([1e-6, 0.0, 0.0])
        f = tmp_path / "p.json"
        f.write_text(dumps(rec))
        code, out, _ = run(capsys, "verify", str(f))
        assert code == EXIT_VERIFY and "FAIL" in out

    def test_tampered_joints(self, capsys, tmp_path):
        rec = square_record()
        rec["joints"] = rec["joints"] + 1e-3
        f = tmp_path / "j.json"
        f.write_text(dumps(rec))
        assert run(capsys, "verify", str(f))[0] == EXIT_VERIFY

    def test_malformed(self, capsys, tmp_path):
        f = tmp_path / "bad.json"
        f.write_text("{bad")
        assert run(capsys, "verify", str(f))[0] == EXIT_INPUT
        assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == EXIT_INPUT

    def test_tolerance_flag(self, capsys, tmp_path):
        rec = square_record()
        rec["alpha"] = rec["alpha"] + np.array([1e-6, 0.0, 0.0])
        rec.pop("joints")
        f = tmp_path / "p.json"
        f.write_text(dumps(rec))
        assert run(capsys, "verify", str(f), "--tol", "1e-3")[0] == EXIT_OK


class TestDiagspace:
    def test_five_bar(self, capsys):
        code, out, _ = run(capsys, "diagspace", "--links", "1,1,1,1,1")
        assert code == EXIT_OK
        assert "P: {0 <= L_3 <= 2, |L_3-1| <= L_2 <= L_3+1}" in out
        assert "raw [-1,3] x [0,2]" in out

    def test_mixed(self, capsys):
        out = run(capsys, "diagspace", "--links", "2,3,4,2,3")[1]
        assert "P: {1 <= L_3 <= 5, |L_3-4| <= L_2 <= L_3+4}" in out
        assert "clamped [0,9] x [1,5]" in out

    def test_area(self, capsys):
        out = run(capsys, "diagspace", "--links", "6,5,4,1,1", "--area")[1]
        area = float(out.split("monte carlo area:")[1].split()[0])
        assert abs(area - 4.0) < 0.05

    def test_grid(self, capsys, tmp_path):
        f = tmp_path / "g.csv"
        code, out, _ = run(capsys, "diagspace", "--links", "4,1,6,5,1", "--grid", "11", "--out", str(f))
        rows = f.read_text().splitlines()
        assert code == EXIT_OK and rows[0] == "L_2,L_3,in_P,in_Q,in_DS" and len(rows) == 122
        assert "P: {4 <= L_3 <= 6" in out

    def test_dimension_too_large(self, capsys):
        assert run(capsys, "diagspace", "--unit-links", "9", "--grid", "2")[0] == EXIT_INPUT


class TestCubeMap:
    def test_table(self, capsys):
        code, out, err = run(capsys, "cube", "--links", "6,5,4,1,1", "--count", "50")
        lines = out.splitlines()
        assert code == EXIT_OK and lines[0] == "s_2,s_3,U_2,U_3,L_2,L_3,member"
        assert all(line.endswith(",1") for line in lines[1:])
        assert "members: 50/50" in err

    def test_grid_staircase(self, capsys):
        out = run(capsys, "cube", "--links", "6,5,4,1,1", "--grid", "3")[1]
        row = [r for r in out.splitlines() if r.startswith("0,0,")][0].split(",")
        assert float(row[2]) == 0.0 and float(row[5]) == pytest.approx(math.sqrt(2))

    def test_hypothesis(self, capsys):
        assert run(capsys, "cube", "--unit-links", "5")[0] == EXIT_INFEASIBLE
        code, _, err = run(capsys, "cube", "--unit-links", "5", "--force", "--count", "2000")
        assert code == EXIT_OK and "members: 2000/2000" not in err


class TestDirections:
    def test_balance(self, capsys):
        code, out, err = run(capsys, "directions", "--unit-links", "1000")
        assert code == EXIT_OK
        d = np.loadtxt(out.splitlines()[1:], delimiter=",")
        assert d.shape == (1000, 5)
        assert np.allclose(np.linalg.norm(d[:, 2:], axis=1), 1.0)
        assert np.linalg.norm(d[:, 2:].sum(axis=0)) < 1e-9 * 1000
        assert float(err.split("balance norm:")[1].split()[0]) < 1e-9 * 1000

    def test_random_fifty(self, capsys):
        out = run(capsys, "directions", "--links", ",".join(["1", "2", "3"] * 16 + ["2", "2"]), "--seed", "3")[1]
        d = np.loadtxt(out.splitlines()[1:], delimiter=",")
        assert np.linalg.norm((d[:, 1:2] * d[:, 2:]).sum(axis=0)) < 1e-9 * d[:, 1].sum()


class TestBench:
    def test_small_sweep(self, capsys):
        code, out, err = run(capsys, "bench", "--sizes", "200,2000,20000")
        rows = np.loadtxt(out.splitlines()[1:], delimiter=",")
        assert code == EXIT_OK and rows.shape == (3, 3)
        assert np.all(rows[:, 2] < 1e-9)
        assert "log-log slope" in err

    def test_slope(self):
        rows = [(10, 1.0, 0.0), (100, 10.0, 0.0), (1000, 100.0, 0.0)]
        assert scaling_exponent(rows) == pytest.approx(1.0)


def test_module_entry_point(tmp_path):
    out = tmp_path / "o.jsonl"
    proc = subprocess.run(
        [sys.executable, "-m", "ckc", "sample", "--unit-links", "5", "--count", "2", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert len(out.read_text().splitlines()) == 2
