import csv
import json
import subprocess
import sys
from fractions import Fraction as Fr
from pathlib import Path

import pytest

from hkconv.cli import main
from hkconv.experiment import config_from_dict, parse_schedule
from hkconv.gallery import typewriter_indices

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "value"]
    return [(int(n), v) for n, v in rows[1:]]


class TestNorm:
    def test_typewriter(self, capsys):
        code, out, _ = run(capsys, "norm", "--gallery", "typewriter", "--n", "5")
        doc = json.loads(out)
        assert code == 0
        assert doc["alexiewicz"] == "1/4" and doc["l1"] == "1/4" and doc["sup"] == "1"
        assert doc["variation"] == "2"

    def test_alternating(self, capsys):
        code, out, _ = run(capsys, "norm", "--gallery", "alternating", "--n", "4")
        assert code == 0 and json.loads(out)["variation"] == "0"

    def test_zero(self, capsys):
        code, out, _ = run(capsys, "norm", "--zero")
        doc = json.loads(out)
        assert code == 0
        assert all(doc[k] == "0" for k in ("alexiewicz", "l1", "sup", "variation", "integral"))

    def test_float_mode(self, capsys):
        _, out, _ = run(capsys, "norm", "--gallery", "typewriter", "--n", "5", "--mode", "float")
        assert json.loads(out)["alexiewicz"] == "0.25"

    def test_antiderivative(self, capsys):
        code, out, _ = run(capsys, "norm", "--gallery", "oscillatory", "--p", "2", "--q", "3")
        doc = json.loads(out)
        assert code == 0 and doc["alexiewicz_exact"] is False and doc["l1"] is None
        assert float(doc["alexiewicz"]) == pytest.approx(1.2009220, abs=1e-6)

    def test_spec_file(self, capsys, tmp_path):
        path = write_json(tmp_path / "f.json", {"kind": "step", "breakpoints": ["0", "1/2", "1"],
                                                "values": ["3", "-1"]})
        code, out, _ = run(capsys, "norm", "--spec", path)
        assert code == 0 and json.loads(out)["alexiewicz"] == "3/2"

    def test_malformed(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        assert run(capsys, "norm", "--spec", str(bad))[0] == 2
        assert run(capsys, "norm", "--spec", str(tmp_path / "missing.json"))[0] == 2
        assert run(capsys, "norm", "--gallery", "typewriter")[0] == 2
        assert run(capsys, "norm", "--gallery", "oscillatory", "--p", "1")[0] == 2
        assert run(capsys, "norm")[0] == 2
        with pytest.raises(SystemExit) as exc:
            main(["norm", "--gallery", "nonsense"])
        assert exc.value.code == 2

    def test_unbounded_without_limit(self, capsys, tmp_path):
        path = write_json(tmp_path / "f.json", {"kind": "antideriv", "family": "x^p sin(x^-q)",
                                                "p": 3, "q": 2, "base": [1, "inf"]})
        assert run(capsys, "norm", "--spec", path)[0] == 3


class TestTrend:
    def test_typewriter_pairing_bounded_by_block_width(self, capsys, tmp_path):
        code, _, _ = run(capsys, "trend", str(CONFIGS / "typewriter_pairing.json"), "--out", str(tmp_path))
        assert code == 0
        for name in ("pairing_indicator.csv", "pairing_two_piece.csv"):
            for n, v in read_csv(tmp_path / name):
                assert Fr(v) <= Fr(1, 2 ** typewriter_indices(n)[0])
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["series"]["pairing_indicator"]["verdict"]["kind"] == "converges"
        assert "summary.json" in summary["manifest"]["outputs"]

    def test_constant_sequence_gives_zeros(self, capsys, tmp_path):
        assert run(capsys, "trend", str(CONFIGS / "constant_zero.json"), "--out", str(tmp_path))[0] == 0
        files = sorted(tmp_path.glob("*.csv"))
        assert files
        for f in files:
            assert all(v == "0" for _, v in read_csv(f))

    def test_alternating_product_column(self, capsys, tmp_path):
        run(capsys, "trend", str(CONFIGS / "alternating_product.json"), "--out", str(tmp_path))
        vals = [v for _, v in read_csv(tmp_path / "alexiewicz_product_two_piece.csv")]
        assert vals == ["0", "4/3"] * 10
        vals = [v for _, v in read_csv(tmp_path / "alexiewicz_product_indicator.csv")]
        assert vals == ["0", "2"] * 10
        assert {v for _, v in read_csv(tmp_path / "product_norm_two_piece.csv")} == {"0"}

    def test_rerun_is_byte_identical(self, capsys, tmp_path):
        cfg = str(CONFIGS / "typewriter_pairing.json")
        run(capsys, "trend", cfg, "--out", str(tmp_path / "a"), "--N", "24")
        run(capsys, "trend", cfg, "--out", str(tmp_path / "b"), "--N", "24")
        a = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert a == sorted(p.name for p in (tmp_path / "b").iterdir())
        for name in a:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_stdout_without_out_dir(self, capsys):
        code, out, _ = run(capsys, "trend", "--gallery", "typewriter", "--N", "8",
                           "--family", "indicator", "--eps", "1/2")
        doc = json.loads(out)
        assert code == 0
        assert doc["series"]["l1"]["values"] == ["1", "1/2", "1/2", "1/4", "1/4", "1/4", "1/4", "1/8"]
        assert doc["manifest"]["N"] == 8

    def test_malformed_config(self, capsys, tmp_path):
        assert run(capsys, "trend", write_json(tmp_path / "c.json", {"sequence": {"id": "nope"}}))[0] == 2
        assert run(capsys, "trend", write_json(tmp_path / "c.json", {"sequence": "typewriter",
                                                                     "colour": 1}))[0] == 2
        assert run(capsys, "trend", write_json(tmp_path / "c.json", {"sequence": "typewriter",
                                                                     "eps": ["-1"]}))[0] == 2
        assert run(capsys, "trend")[0] == 2

    def test_domain_mismatch(self, capsys, tmp_path):
        cfg = {"sequence": "typewriter",
               "limit": {"kind": "step", "breakpoints": [0, 2], "values": [1]}}
        assert run(capsys, "trend", write_json(tmp_path / "c.json", cfg))[0] == 4
        cfg = {"sequence": "typewriter", "trends": ["pairing"],
               "family": [{"kind": "step", "breakpoints": [0, 2], "values": [1]}]}
        assert run(capsys, "trend", write_json(tmp_path / "c.json", cfg))[0] == 4


class TestVerify:
    def test_typewriter_t2(self, capsys):
        code, out, _ = run(capsys, "verify", "T2", "--gallery", "typewriter")
        doc = json.loads(out)
        assert code == 0 and doc["anomalies"] == [] and all(doc["conditions_hold"].values())

    def test_alternating_t5_needs_certificate(self, capsys):
        assert run(capsys, "verify", "T5", "--gallery", "alternating", "--N", "20")[0] == 5

    def test_typewriter_t4(self, capsys, tmp_path):
        code, out, _ = run(capsys, "verify", "T4", "--gallery", "typewriter", "--out", str(tmp_path))
        doc = json.loads(out)
        assert code == 0
        assert all(all(v.values()) for v in doc["conclusion_holds"].values())
        assert set(doc["conclusion_holds"]) == {"pairing", "alexiewicz_product"}
        assert json.loads((tmp_path / "verdict.json").read_text()) == doc

    def test_anomaly_exit(self, capsys, tmp_path):
        cfg = {"sequence": {"id": "constant",
                            "function": {"kind": "step", "breakpoints": [0, 1], "values": [1]}},
               "limit": "zero", "family": [{"kind": "zero"}], "N": 16}
        code, out, _ = run(capsys, "verify", "T2", "--config", write_json(tmp_path / "c.json", cfg))
        assert code == 1 and json.loads(out)["anomalies"]

    def test_schedule_flag(self):
        s = parse_schedule("1e-6,8")
        assert (s.tol, s.window) == (1e-6, 8)
        assert parse_schedule("1e-6,dyadic,0.5").window is None
        assert config_from_dict({"sequence": "typewriter", "schedule": "1e-6,4"}).schedule.window == 4


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "hkconv.cli", "norm", "--gallery", "typewriter",
                          "--n", "6"], capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["alexiewicz"] == "1/4"
