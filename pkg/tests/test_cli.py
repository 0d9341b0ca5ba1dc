import json
import subprocess
import sys

import pytest

from partitionlab.cli import REPORT_FIELDS, RunReport, run

SCHEMA = {
    "command": str, "parameters": dict, "result": dict, "status": str,
    "witnesses": list, "elapsed_ms": (int, float), "tool_version": str,
}


def invoke(capsys, *argv):
    code, rep = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv, expect=0):
    code, out, err = invoke(capsys, *argv)
    assert code == expect, (out, err)
    obj = json.loads(out)
    for k, typ in SCHEMA.items():
        assert isinstance(obj[k], typ), k
    assert RunReport.from_json(out).status == obj["status"]
    assert err.startswith(f"[{obj['status']}]")
    return obj


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_schema_is_stable():
    assert REPORT_FIELDS == ("command", "parameters", "result", "status", "witnesses",
                             "elapsed_ms", "tool_version")
    with pytest.raises(ValueError):
        RunReport.from_json(json.dumps({"command": "x"}))


@pytest.mark.parametrize("argv,size", [
    (["--name", "kleitman", "--n", "6"], [41]),
    (["--name", "double", "--n", "7"], [182]),
    (["--name", "tilde", "--n", "9", "--x", "3"], [372]),
    (["--name", "example4", "--m", "2"], [56, 35, 35]),
    (["--name", "knr", "--n", "7", "--r", "3"], [99]),
    (["--name", "pseudo", "--n", "10", "--lo", "3", "--hi", "5"], [582]),
])
def test_construct(capsys, tmp_path, argv, size):
    out = tmp_path / "f.json"
    obj = report(capsys, "construct", *argv, "--out", str(out))
    assert obj["result"]["sizes"] == size
    assert out.exists()


def test_check_and_profile(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", {"n": 2, "members": [[1], [2], [1, 2]]})
    obj = report(capsys, "check", "--property", "pf", "--in", bad, expect=1)
    assert obj["witnesses"][0]["sets"] == [[1, 2], [1], [2]]
    assert obj["result"]["witness_replays"]
    obj = report(capsys, "check", "--property", "r-box", "--r", "2", "--in", bad, expect=1)
    obj = report(capsys, "check", "--property", "pseudo", "--t", "1", "--in", bad, expect=1)
    obj = report(capsys, "check", "--property", "r-pf", "--r", "2", "--in", bad, expect=1)
    obj = report(capsys, "profile", "--in", bad)
    assert obj["result"]["profiles"][0]["f"] == [0, 2, 1]

    k = tmp_path / "k.json"
    report(capsys, "construct", "--name", "example4", "--m", "2", "--out", str(k))
    report(capsys, "check", "--property", "cross-pf", "--in", str(k))
    obj = report(capsys, "check", "--property", "cross-pf", "--in", str(k), "--distinct")
    assert obj["result"]["holds"]

    star = write(tmp_path, "star.json", {"n": 4, "families": [[[1, 2], [1, 3]], [[1, 4]]]})
    report(capsys, "check", "--property", "cross-int", "--in", star)
    report(capsys, "check", "--property", "cross-int", "--in", star, "--c", "2")


def test_certify(capsys):
    obj = report(capsys, "certify", "--name", "table1", "--m", "6")
    beta = obj["result"]["coefficients"]
    assert obj["result"]["implied_bound"] == obj["result"]["expected_bound"]
    assert beta
    obj = report(capsys, "certify", "--name", "table3_pseudo", "--m", "16", "--t", "2")
    assert obj["result"]["passed"]
    report(capsys, "certify", "--name", "table1", "--m", "1", expect=2)


def test_gadget_actions(capsys, tmp_path):
    obj = report(capsys, "gadget", "--kind", "prop1", "--m", "4")
    assert obj["result"]["slots"] == 21 and obj["result"]["passed"]
    assert report(capsys, "gadget", "--kind", "prop1", "--m", "4", "rhs")["result"]["rhs"] == "2090"
    assert report(capsys, "gadget", "--kind", "3m2", "--m", "6", "constraints")["result"]["count"] == 72
    report(capsys, "gadget", "--kind", "3m", "--m", "6", "equality")
    fam = tmp_path / "e4.json"
    report(capsys, "construct", "--name", "example4", "--m", "4", "--out", str(fam))
    obj = report(capsys, "gadget", "--kind", "prop1", "--m", "4", "trace", "--family", str(fam))
    assert obj["result"]["missing_weight"] == "2090"
    report(capsys, "gadget", "--kind", "prop1", "--m", "3", expect=2)
    report(capsys, "gadget", "--kind", "prop1", "--m", "4", "trace", expect=2)


def test_search_paths(capsys):
    obj = report(capsys, "search", "mn", "--n", "4", "--threads", "1", "--witnesses", "5")
    assert obj["result"]["optimum"] == "10" and obj["result"]["optimum_count"] == 1
    obj = report(capsys, "search", "trace", "--kind", "prop1", "--m", "4", "--threads", "1")
    assert obj["result"]["optimum"] == "4189"
    obj = report(capsys, "search", "lembp", "--m", "3")
    assert obj["result"]["all_pass"]
    obj = report(capsys, "search", "trace", "--kind", "prop1", "--m", "4", "--heuristic",
                 "--iters", "500", expect=3)
    assert not obj["result"]["exceeds_bound"]
    report(capsys, "search", "trace", "--kind", "3m2", "--m", "6", "--max-nodes", "5",
           "--threads", "1", expect=3)
    report(capsys, "search", "mn", expect=2)


def test_misc_commands(capsys):
    assert report(capsys, "claim1")["result"]["max_memberships"] == 4
    assert report(capsys, "identities", "--m-max", "12")["result"]["count"] == 36


def test_export_and_import(capsys, tmp_path):
    out = tmp_path / "p.wcnf"
    obj = report(capsys, "export", "--kind", "prop1", "--m", "4", "--out", str(out))
    assert obj["result"]["vars"] == 21
    sol = report(capsys, "search", "trace", "--kind", "prop1", "--m", "4", "--threads", "1")
    ids = sol["result"]["witnesses"][0]
    (tmp_path / "sol.txt").write_text("v " + " ".join(str(i + 1) for i in ids) + "\n")
    obj = report(capsys, "export", "--kind", "prop1", "--solution", str(tmp_path / "sol.txt"),
                 "--manifest", str(out) + ".manifest.json")
    assert obj["result"]["value"] == "4189"
    report(capsys, "export", "--kind", "mn", "--n", "3", "--format", "lp", "--out", str(tmp_path / "m.lp"))
    report(capsys, "export", "--kind", "mn", "--out", str(tmp_path / "m.lp"), expect=2)


def test_json_out(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out, err = invoke(capsys, "claim1", "--json-out", str(dest))
    assert code == 0 and out == ""
    assert RunReport.from_json(dest.read_text()).command == "claim1"


def test_usage_errors(capsys):
    code, out, err = invoke(capsys, "check", "--frobnicate")
    assert code == 2 and out == "" and "usage" in err
    code, out, err = invoke(capsys, "nonsense")
    assert code == 2 and "usage" in err
    code, out, err = invoke(capsys, "check", "--property", "pf", "--in", "/no/such/file")
    assert code == 2 and json.loads(out)["status"] == "error"


def test_reports_are_deterministic(capsys):
    def strip(obj):
        obj.pop("elapsed_ms")
        obj["result"].pop("elapsed_ms", None)
        return obj
    a = strip(report(capsys, "search", "trace", "--kind", "prop1", "--m", "4", "--heuristic",
                     "--iters", "800", "--seed", "3", expect=3))
    b = strip(report(capsys, "search", "trace", "--kind", "prop1", "--m", "4", "--heuristic",
                     "--iters", "800", "--seed", "3", expect=3))
    assert a == b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "partitionlab", "claim1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["max_memberships"] == 4


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("PARTITIONLAB_THREADS", "2")
    obj = report(capsys, "search", "mn", "--n", "4")
    assert obj["result"]["optimum"] == "10"
