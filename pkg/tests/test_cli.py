import json
import os
import shutil
import subprocess
import sys

import pytest

from relserre.cli import JSON_KEYS, batch_rows, main
from relserre.paperdata import data_dir, load_appendix


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def appendix_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("batch") / "appendix.csv"
    lines = ["name,a1,a2,a3,a4,a6,label"]
    lines += [",".join([r.name, *map(str, r.coefficients), r.label]) for r in load_appendix()]
    path.write_text("\n".join(lines) + "\n")
    return path


def test_classify_2cs(capsys):
    code, out, _ = run(capsys, "classify", "--curve", "0,0,0,-1083,10582", "--label", "2.6.0.1")
    assert code == 0
    assert "2Cs-Serre: true" in out and "m_E = 420" in out


def test_classify_2b_json_round_trip(capsys):
    code, out, _ = run(capsys, "classify", "--curve", "1,0,1,-16,-25", "--label", "2.3.0.1", "--json")
    assert code == 0
    rec = json.loads(out)
    assert tuple(rec) == JSON_KEYS
    assert rec["is_relative_serre"] and rec["image_conductor"] == 276
    assert rec["correction_factor"] == "1/1"
    assert json.dumps(rec, indent=2, ensure_ascii=False) + "\n" == out


def test_parse_errors(capsys):
    assert run(capsys, "classify", "--curve", "0,0,0,0,0")[0] == 2
    assert run(capsys, "classify", "--curve", "1,2,x")[0] == 2
    code, _, err = run(capsys, "classify", "--curve", "315.a2", "--label", "9.9.9")
    assert code == 2 and "parse error" in err


def test_inconsistency_and_ambiguity(capsys):
    assert run(capsys, "classify", "--curve", "69.a1", "--label", "2.6.0.1")[0] == 3
    assert run(capsys, "image", "--curve", "0,0,0,1,1")[0] == 3
    assert run(capsys, "cyclicity", "--curve", "0,0,0,1,1")[0] == 3


def test_image(capsys):
    code, out, _ = run(capsys, "image", "--curve", "392.a1")
    assert code == 0
    assert "modulus: 28" in out and "order: 16128" in out and "generators:" in out
    code, out, _ = run(capsys, "image", "--curve", "315.a2", "--label", "2.6.0.1", "--json")
    rec = json.loads(out)
    assert rec["image_conductor"] == 420 and rec["index"] == 48


def test_cyclicity(capsys):
    code, out, _ = run(capsys, "cyclicity", "--curve", "392.a1", "-L", "100000")
    assert code == 0 and "correction factor: 2017/2016" in out
    code, out, _ = run(capsys, "cyclicity", "--curve", "102.a1", "--json")
    assert json.loads(out)["correction_factor"] == "78337/78336"
    code, out, _ = run(capsys, "cyclicity", "--curve", "315.a2", "--json")
    assert json.loads(out)["cyclicity_constant"]["prefactor"] == "0/1"


def test_verify_comm(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "comm")
    assert code == 0 and "(48,12,12)" in out


def test_tampered_data_exit_code(capsys, tmp_path):
    d = tmp_path / "data"
    shutil.copytree(data_dir(), d)
    text = (d / "groups.dat").read_text().replace("8.24.0.5 8 7,2,4,5;3,0,2,3;3,0,4,5", "8.24.0.5 8 7,2,4,5")
    (d / "groups.dat").write_text(text)
    before = os.environ.get("RELSERRE_DATA")
    code, _, err = run(capsys, "--data", str(d), "verify", "--suite", "sg")
    assert code == 3 and "8.24.0.5" in err
    assert os.environ.get("RELSERRE_DATA") == before


def test_batch(capsys, appendix_csv, tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    code, _, err = run(capsys, "batch", str(appendix_csv), "--out", str(out1))
    assert code == 0 and "15/7/3" in err
    assert out1.read_text().splitlines()[-1] == "summary,2Cs=15,2B=7,2Cn=3"
    run(capsys, "batch", str(appendix_csv), "--out", str(out2))
    assert out1.read_bytes() == out2.read_bytes()


def test_batch_partial_failure(appendix_csv):
    text = appendix_csv.read_text() + "broken,1,2,3\nzero,0,0,0,0,0\n"
    records, errors = batch_rows(text)
    assert len(records) == 25 and [n for n, _ in errors] == [27, 28]


def test_batch_empty(capsys, tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    code, out, _ = run(capsys, "batch", str(empty), "--json")
    assert code == 0
    assert json.loads(out) == {"rows": [], "errors": [], "summary": {"2Cs": 0, "2B": 0, "2Cn": 0}}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "relserre", "verify", "--suite", "comm"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "(48,12,12)" in proc.stdout
