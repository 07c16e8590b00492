import csv
import io
import json

import pytest

from divinv.cli import JobConfig, main
from divinv.invsolver import n2_series


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dims_json_p2(capsys):
    code, out, _ = run(capsys, "dims", "--p", "2", "--s", "1", "--n", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [row["dim_G"] for row in data["rows"]] == [1, 1, 1, 1, 1]
    assert data["series"]["total"] == 5 == data["series"]["computed_total"]
    assert all(row["dim_g"] >= row["dim_G"] >= row["dim_image"] for row in data["rows"])


def test_dims_csv_round_trip(capsys):
    code, out, _ = run(capsys, "dims", "--p", "3", "--n", "2", "--degree-max", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["r"]) for r in rows] == list(range(5))
    assert [int(r["dim_G"]) for r in rows] == n2_series(3, 1)[:5] == [1, 1, 2, 1, 2]


def test_dims_tensor_gap(capsys):
    code, out, _ = run(capsys, "dims", "--module", "tensor", "--p", "2", "--n", "2", "--r", "3",
                       "--format", "json")
    row = json.loads(out)["rows"][0]
    assert code == 0 and (row["dim_g"], row["dim_G"]) == (8, 5)


def test_dims_truncation(capsys):
    code, out, _ = run(capsys, "dims", "--p", "2", "--n", "2", "--r", "3", "--cap-basis", "3",
                       "--format", "json")
    assert code == 3
    assert json.loads(out)["rows"][0]["truncated"] is True


def test_dims_needs_range_for_non_as(capsys):
    code, _, err = run(capsys, "dims", "--module", "ds", "--p", "2")
    assert code == 2 and "error" in err


def test_basis_families(capsys):
    code, out, _ = run(capsys, "basis", "--family", "e", "--r", "3", "--n", "3", "--p", "2",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    entries = data["elements"] if isinstance(data, dict) else data
    assert len(entries) == 2
    assert all(e["invariant"] for e in entries)
    code, out, _ = run(capsys, "basis", "--family", "class", "--r", "0", "--format", "json")
    assert code == 0 and "1" in out


def test_verify_selected(capsys):
    code, out, _ = run(capsys, "verify", "trivial-constants", "inf-gap-p2-n2-r3", "--format", "json",
                       "--no-timings")
    assert code == 0
    data = json.loads(out)
    assert data["passed"] == 2 and data["failed"] == 0
    assert all("seconds" not in rep for rep in data["reports"])
    _, again, _ = run(capsys, "verify", "trivial-constants", "inf-gap-p2-n2-r3", "--format", "json",
                      "--no-timings")
    assert again == out


def test_verify_unknown_id(capsys):
    code, _, err = run(capsys, "verify", "no-such-claim")
    assert code == 2 and "no-such-claim" in err


def test_verify_failing_manifest(capsys, tmp_path):
    manifest = {"claims": [{"id": "bad", "suite": "default", "check": "n2-closed-form",
                            "params": {"p": 2, "s": 1}, "expect": {"total": 6}}]}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(manifest))
    code, out, _ = run(capsys, "verify", "--manifest", str(path), "--format", "text")
    assert code == 1 and "FAIL" in out


def test_config_validation():
    with pytest.raises(ValueError):
        JobConfig(command="dims", p=4).validate()
    with pytest.raises(ValueError):
        JobConfig(command="dims", n=0).validate()
