import json
import subprocess
import sys

import pytest

from spcompact import fixtures
from spcompact.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fixtures_list(capsys):
    code, out, _ = run(capsys, "fixtures", "list")
    assert code == 0 and all(n in out for n in fixtures.NAMES)
    code, out, _ = run(capsys, "fixtures", "list", "--json")
    assert [r["name"] for r in json.loads(out)] == fixtures.NAMES


def test_fixtures_show(capsys):
    code, out, _ = run(capsys, "fixtures", "show", "l3-basic")
    assert code == 0 and out == fixtures.text("l3-basic")
    assert run(capsys, "fixtures", "show", "nope")[0] == 2


def test_validate(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", str(fixtures.path("l3-basic")))
    assert code == 0 and out.startswith("ok: lattice L3")
    bad = tmp_path / "bad.lfs"
    bad.write_text(fixtures.text("l3-basic").replace("{x=1, y=m}", "{x=1, q=m}"))
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "line 16" in err
    broken = tmp_path / "broken.lfs"
    broken.write_text(fixtures.text("l3-basic").replace("degree {x=0, y=m} = 0",
                                                         "degree {x=0, y=m} = 1"))
    assert run(capsys, "validate", str(broken))[0] in (1, 2)
    assert run(capsys, "validate", str(tmp_path / "missing.lfs"))[0] == 2


def test_compute(capsys):
    code, out, _ = run(capsys, "compute", "beta", "L3")
    assert code == 0 and out.splitlines() == ["beta(0) = {}", "beta(m) = {0, m}", "beta(1) = {0, m, 1}"]
    code, out, _ = run(capsys, "compute", "molecules", "D4", "--json")
    assert json.loads(out) == {"molecules": ["a", "b"], "primes": ["a", "b"]}
    code, out, _ = run(capsys, "compute", "wbr", "L2", "--json")
    assert json.loads(out) == {"0": ["1"], "1": ["1"]}
    assert run(capsys, "compute", "beta", "nowhere")[0] == 2


def test_operator(capsys):
    code, out, _ = run(capsys, "operator", "tsp", "l2-tau0", "--json")
    vals = {(r["table"], r["lset"]): r["value"] for r in json.loads(out)}
    assert vals[("T", "G")] == "1" and vals[("T", "H")] == "0"
    code, out, _ = run(capsys, "operator", "tp", "l2-tau0", "--lset", "H")
    assert code == 0 and out.strip() == "TP[T](H) = 0    H = {x=0, y=1}"
    assert run(capsys, "operator", "tp", "l2-tau0", "--lset", "Q")[0] == 2


def test_check_single(capsys):
    code, out, _ = run(capsys, "check", "T3.2", "l3-basic")
    assert code == 0 and out.startswith("theorem T3.2: pass")
    code, out, _ = run(capsys, "check", "T3.2", "l3-graded")
    assert code == 1 and "counterexample (doc)" in out
    code, out, _ = run(capsys, "check", "T4.4.2", "diamond-m3", "--json")
    rep = json.loads(out)["reports"][0]
    assert code == 0 and rep["verdict"] == "refused" and rep["reason"]


def test_check_usage_errors(capsys):
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "check", "T0.0", "l3-basic")[0] == 2


def test_check_all_on_one_doc(capsys):
    code, out, _ = run(capsys, "check", "--all", "l2-tau0")
    assert code == 0 and out.rstrip().endswith("refused (seed 0)")


def test_check_all_builtin_deterministic_across_jobs(capsys):
    _, one, _ = run(capsys, "check", "--all", "--json")
    _, many, _ = run(capsys, "check", "--all", "builtin", "--json", "--jobs", "3")
    assert one == many
    payload = json.loads(one)
    assert payload["counts"]["refused"] >= 1
    assert all("wall_time" not in r for r in payload["reports"])


def test_search(capsys):
    code, out, _ = run(capsys, "search", "T5.9", "--budget", "5", "--seed", "2")
    assert code == 0 and "exhausted budget, no counterexample" in out
    code, out, _ = run(capsys, "search", "T5.9", "--mutant", "--json")
    assert code == 1 and json.loads(out)["counterexample"]["mutant"]
    assert run(capsys, "search", "T5.9", "--budget", "0")[0] == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_console_module_entry():
    proc = subprocess.run([sys.executable, "-m", "spcompact.cli", "compute", "molecules", "L3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("M(L) = {m, 1}")
