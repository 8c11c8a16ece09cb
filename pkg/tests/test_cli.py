from __future__ import annotations

import json
import subprocess
import sys

import pytest

from dendroid.cli import main
from dendroid.subobjects import Subobject, inner_horn
from dendroid.trees import parse_tree

from oracles import face_count


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_trees(capsys):
    code, data = run_json(capsys, "trees", "--max-vertices", "2", "--max-arity", "2")
    assert code == 0 and data["count"] == 10
    code, out, _ = run(capsys, "trees", "--max-vertices", "1", "--max-arity", "1")
    assert out.split() == ["0", "0()", "0(1)"]


def test_faces(capsys):
    code, data = run_json(capsys, "faces", "r(a(x,y),b)")
    assert code == 0 and data["count"] == face_count(parse_tree("r(a(x,y),b)"))
    kinds = [f["kind"] for f in data["faces"]]
    assert kinds.count("identity") == 1 and kinds.count("internal") == 1


@pytest.mark.parametrize("cmd,size", [("core", 5), ("boundary", 6), ("ext-boundary", 5)])
def test_subobject_commands_round_trip(capsys, cmd, size):
    code, data = run_json(capsys, cmd, "0(1(2))")
    assert code == 0
    assert len(Subobject.from_json(data)) == size


def test_horn(capsys):
    code, data = run_json(capsys, "horn", "r(a(x,y),b)", "--edge", "a")
    assert Subobject.from_json(data) == inner_horn(parse_tree("r(a(x,y),b)"), "a")
    code, _, err = run(capsys, "horn", "r(a(x,y),b)", "--edge", "x")
    assert code == 3 and "error" in err


def test_certify_and_verify(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("DENDROID_OUT_DIR", str(tmp_path))
    code, data = run_json(capsys, "certify", "0(1(2(3)))", "--out", "lin3.json")
    assert code == 0 and data["steps"] == 4
    path = tmp_path / "lin3.json"
    assert path.exists()
    code, data = run_json(capsys, "verify", str(path))
    assert code == 0 and data["ok"]

    cert = json.loads(path.read_text())
    cert["steps"] = cert["steps"][::-1]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cert))
    code, data = run_json(capsys, "verify", str(bad))
    assert code == 1 and not data["ok"]


def test_certify_from_horn_and_trivial(capsys):
    code, data = run_json(capsys, "certify", "r(a(x),b)", "--from", "horn:a")
    assert code == 0 and len(data["steps"]) == 1
    code, data = run_json(capsys, "certify", "r(a,b)")
    assert code == 0 and data["steps"] == []
    code, _, _ = run(capsys, "certify", "r(a(x),b)", "--from", "bogus")
    assert code == 3


def test_nerve_and_validate(capsys, tmp_path):
    code, data = run_json(capsys, "nerve", "@ass", "--tree", "r(a(x,y),b)")
    assert code == 0 and data["count"] == 4
    code, data = run_json(capsys, "validate", "@com")
    assert code == 0 and data["ok"]

    run(capsys, "fixtures", "--out", str(tmp_path))
    broken = json.loads((tmp_path / "ass.json").read_text())
    broken["composition"][0]["result"] = broken["composition"][1]["result"]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(broken))
    code, data = run_json(capsys, "validate", str(path))
    assert code == 1 and data["violations"]
    code, _, _ = run(capsys, "nerve", str(path), "--tree", "r(a)")
    assert code == 3


def test_checks(capsys):
    code, data = run_json(capsys, "check-segal", "--operad", "@ass", "--max-vertices", "2")
    assert code == 0 and data["ok"]
    code, data = run_json(capsys, "check-inner-kan", "--operad", "@category", "--max-vertices", "3")
    assert code == 0 and data["ok"]
    code, data = run_json(capsys, "check-normal", "--operad", "@com", "--max-vertices", "1", "--max-arity", "2")
    assert code == 1 and not data["ok"]
    code, out, _ = run(capsys, "check-normal", "--operad", "@com", "--max-vertices", "1", "--max-arity", "2")
    assert "fixed by" in out


def test_check_on_sieve(capsys, tmp_path):
    t = parse_tree("0(1(2))")
    path = tmp_path / "horn.json"
    path.write_text(json.dumps(inner_horn(t, "1").to_json()))
    code, data = run_json(capsys, "check-inner-kan", "--sieve", str(path), "--max-vertices", "2")
    assert code == 1 and not data["ok"]
    code, data = run_json(capsys, "check-segal", "--representable", "0(1(2))", "--max-vertices", "2")
    assert code == 0


def test_restrict(capsys):
    code, data = run_json(capsys, "restrict", "--operad", "@category", "--max-n", "3")
    assert code == 0 and [len(lv) for lv in data["levels"]] == [2, 5, 11, 23]


def test_tabulate_then_check(capsys, tmp_path):
    out = tmp_path / "com.json"
    code, data = run_json(
        capsys, "tabulate", "--operad", "@com", "--max-vertices", "3", "--max-arity", "3", "--out", str(out)
    )
    assert code == 0 and data["trees"] == 73
    code, data = run_json(capsys, "check-segal", "--dset", str(out), "--max-vertices", "3")
    assert code == 0 and data["ok"]
    code, _, err = run(capsys, "check-segal", "--dset", str(out), "--max-vertices", "4")
    assert code == 3 and "tabulated up to 3" in err


def test_usage_and_input_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["trees", "--max-vertices", "-1", "--max-arity", "2"])
    assert exc.value.code == 2
    assert run(capsys, "faces", "r(a")[0] == 3
    assert run(capsys, "nerve", "@nope", "--tree", "r")[0] == 3
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 3
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert run(capsys, "check-segal", "--dset", str(garbage), "--max-vertices", "1")[0] == 3


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dendroid", "trees", "--max-vertices", "0", "--max-arity", "0"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout.strip() == "0"
