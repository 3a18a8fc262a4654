import json

import pytest

from adtchoice import __version__
from adtchoice.cli import main

LIST_ADT = "schema List; Sing: X; Cons: X T\n"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "list.adt").write_text(LIST_ADT)
    (tmp_path / "u.json").write_text(json.dumps({"elements": [
        {"id": "x", "attrs": {"utility": 0, "rank": 3}},
        {"id": "y", "attrs": {"utility": 1, "rank": 2}},
        {"id": "z", "attrs": {"utility": 1, "rank": 1}},
    ]}))
    (tmp_path / "u2.json").write_text(json.dumps({"elements": [{"id": "x1"}, {"id": "x2"}]}))
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_proc_run_first_list(files, capsys):
    code, out, _ = run(capsys, "proc", "run", "--schema", files / "list.adt", "--universe", files / "u2.json",
                       "--procedure", "first_list", "--term", "(Cons x1 (Sing x2))")
    assert code == 0 and out.strip() == "x1"


def test_check_sat_list_ext_falsified(files, capsys):
    code, out, _ = run(capsys, "check", "--schema", files / "list.adt", "--universe", files / "u.json",
                       "--procedure", "sat_list", "--param", "u=utility", "--param", "threshold=0.5",
                       "--property", "EXT", "--max-leaves", "4")
    assert code == 1
    assert out.startswith("EXT: Falsified") and "choice_a=y, choice_b=z" in out


def test_check_witness_pair_on_set(files, capsys):
    code, out, _ = run(capsys, "check", "--schema", files / "list.adt", "--universe", files / "u.json",
                       "--procedure", "sat_list", "--param", "u=utility", "--param", "threshold=0.5",
                       "--property", "EXT", "--max-leaves", "4", "--set", "x,y,z")
    assert code == 1
    assert "a=(Cons x (Cons y (Sing z))), b=(Cons x (Cons z (Sing y)))" in out


def test_check_holds(files, capsys):
    code, out, _ = run(capsys, "check", "--schema", "List", "--universe", files / "u.json",
                       "--procedure", "maximize", "--param", "order=rank", "--property", "EXT", "--property", "alphaE")
    assert code == 0
    assert out.splitlines() == ["EXT: HoldsUpToBudget", "alphaE: HoldsUpToBudget"]


def test_check_not_applicable_is_reported(files, capsys):
    code, out, _ = run(capsys, "check", "--schema", "List", "--universe", files / "u.json",
                       "--procedure", "first_list", "--property", "TIIA")
    assert code == 0 and "not applicable" in out


def test_enum_from_set(capsys):
    code, out, _ = run(capsys, "enum", "--schema", "List", "--set", "x1,x2", "--max-leaves", "2")
    assert code == 0
    assert out.splitlines() == ["(Cons x1 (Sing x2))", "(Cons x2 (Sing x1))"]


def test_enum_terms_reparse(files, capsys):
    _, out, _ = run(capsys, "enum", "--schema", "List", "--universe", files / "u.json", "--set", "x,z", "--max-leaves", "3")
    for term in out.splitlines():
        code, choice, _ = run(capsys, "proc", "run", "--schema", "List", "--universe", files / "u.json",
                              "--procedure", "first_list", "--term", term)
        assert code == 0 and choice.strip() == term.split()[1]


def test_enum_json_report(files, capsys):
    out_path = files / "out" / "enum.json"
    code, out, _ = run(capsys, "enum", "--schema", files / "list.adt", "--set", "x,y", "--max-leaves", "3",
                       "--out", out_path)
    assert code == 0 and out == ""
    doc = json.loads(out_path.read_text())
    assert doc["tool"] == {"name": "adtchoice", "version": __version__}
    assert doc["command"][0] == "enum"
    assert doc["inputs"]["schema"]["digest"].startswith("sha256:")
    assert doc["results"]["count"] == 8
    assert doc["results"]["counts_by_leaves"] == {"2": 2, "3": 6}
    assert "seconds" in doc["timing"]


def test_schema_check(files, capsys):
    code, out, _ = run(capsys, "schema", "check", "--schema", files / "list.adt")
    assert code == 0 and "representable=True" in out


def test_schema_check_note(tmp_path, capsys):
    p = tmp_path / "chain.adt"
    p.write_text("schema Chain\nC1: X\nC2: T\n")
    code, out, _ = run(capsys, "schema", "check", "--schema", p)
    assert code == 0 and "representable=False" in out and "note:" in out


def test_rationalize(files, capsys):
    base = ["--schema", "List", "--universe", files / "u.json", "--param", "u=utility", "--param", "threshold=0.5"]
    code, out, _ = run(capsys, "rationalize", "--procedure", "sat_list", "--kind", "function", *base)
    assert code == 1 and out.strip() == "function: none"
    code, out, _ = run(capsys, "rationalize", "--procedure", "sat_list", "--kind", "correspondence", *base)
    assert code == 0 and out.strip() == "correspondence: y~z >= x"


def test_classify_json(files, capsys):
    out_path = files / "classify.json"
    code, _, _ = run(capsys, "classify", "--schema", "List", "--universe", files / "u.json", "--procedure", "sat_list",
                     "--param", "u=utility", "--param", "threshold=0.5", "--guarantee", "sorted_by:rank:desc",
                     "--out", out_path)
    assert code == 0
    res = json.loads(out_path.read_text())["results"]
    assert res["CFI"] and res["cf_rationalizable"] and res["guarantee"] == "sorted_by:rank:desc"


def test_replicate_filter(capsys):
    code, out, _ = run(capsys, "replicate", "--filter", "extension-*")
    assert code == 0 and out.splitlines()[-1] == "1/1 cases passed"


def test_replicate_failure_exit(capsys):
    code, out, _ = run(capsys, "replicate", "--filter", "prop-ind-implies-alpha-v")
    assert code == 1 and out.startswith("FAIL")


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--bogus"],
        [],
        ["enum", "--schema", "List"],
        ["enum", "--schema", "Nope", "--set", "x"],
        ["check", "--schema", "List", "--universe", "missing.json", "--procedure", "first_list"],
        ["check", "--schema", "List", "--universe", "{u}", "--procedure", "nope"],
        ["check", "--schema", "List", "--universe", "{u}", "--procedure", "sat_list", "--param", "threshold"],
        ["check", "--schema", "List", "--universe", "{u}", "--procedure", "first_list", "--property", "BETA"],
        ["check", "--schema", "List", "--universe", "{u}", "--procedure", "first_list", "--guarantee", "sorted"],
        ["proc", "run", "--schema", "List", "--universe", "{u}", "--procedure", "first_list", "--term", "(Sing x y)"],
        ["proc", "run", "--schema", "List", "--universe", "{u}", "--procedure", "first_list", "--term", "(Sing q)"],
        ["proc", "run", "--schema", "List", "--universe", "{u}", "--procedure", "first_list"],
        ["classify", "--schema", "{bad}", "--universe", "{u}", "--procedure", "first_list"],
        ["classify", "--schema", "List", "--universe", "{badu}", "--procedure", "first_list"],
    ],
)
def test_usage_errors_exit_2(files, capsys, argv):
    (files / "bad.adt").write_text("schema Bad; C: X Y\n")
    (files / "badu.json").write_text("{not json")
    subst = {"{u}": files / "u.json", "{bad}": files / "bad.adt", "{badu}": files / "badu.json"}
    code, _, err = run(capsys, *[subst.get(a, a) for a in argv])
    assert code == 2
    assert "error" in err


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "adtchoice", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and __version__ in proc.stdout
