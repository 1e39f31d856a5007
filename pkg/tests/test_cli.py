import io
import re
import shutil
import subprocess
import sys

import pytest

from conftest import F_MAIN, FACT_SRC, G_SRC, I_SRC, MV_SRC, tokens
from sejc.cli import main

WS = F_MAIN + G_SRC + FACT_SRC + I_SRC + MV_SRC + "(deftest t1 (f 2 1))\n"


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def ws(tmp_path):
    path = tmp_path / "work.sej"
    path.write_text(WS, encoding="utf-8")
    return path


def test_gen_writes_typed_f(ws, tmp_path):
    code, out, _ = cli("gen", ws, "--guards", "--out", tmp_path / "java", "--tests")
    assert code == 0
    names = sorted(p.name for p in (tmp_path / "java").iterdir())
    assert names == ["Main.java", "MainEnvironment.java", "MainTests.java"]
    text = (tmp_path / "java" / "Main.java").read_text()
    want = tokens("public static Acl2Number f(Acl2Number x, Acl2Number y) "
                  "{ return binary_star(x, binary_plus(y, $N_3)); }")
    got = tokens(text)
    assert any(got[i:i + len(want)] == want for i in range(len(got)))
    assert str(tmp_path / "java" / "Main.java") in out


def test_gen_main_class(ws, tmp_path):
    code, _, _ = cli("gen", ws, "--main-class", "Demo", "--out", tmp_path)
    assert code == 0
    assert "public class Demo {" in (tmp_path / "Demo.java").read_text()
    assert (tmp_path / "DemoEnvironment.java").exists()


@pytest.mark.parametrize("fn, args, expected", [
    ("fact-tail", "5 1", "120"),
    ("f", "2 1", "8"),
    ("acl2::g", "'a 'b", "(A . B)"),
    ("i", "(int-value 2) (int-value 3)", "(int-value 13)"),
    ("two", "4", "(mv 4 SYM)"),
])
def test_run_matches_oracle(ws, fn, args, expected):
    for guards in ("--guards", "--no-guards"):
        run = cli("run", ws, guards, "-f", fn, "-a", args)
        oracle = cli("oracle", ws, guards, "-f", fn, "-a", args)
        assert run == oracle == (0, expected + "\n", "")


def test_run_without_post_passes(ws):
    assert cli("run", ws, "--no-post", "-f", "fact-tail", "-a", "6 1")[1] == "720\n"


def test_check_reports_agreement(ws):
    code, out, err = cli("check", ws, "--fuzz", "20", "--seed", "3")
    assert code == 0, err
    m = re.fullmatch(r"calls: (\d+)  agree: (\d+)  disagree: 0  skipped: (\d+)\n", out)
    assert m and m.group(1) == m.group(2) and int(m.group(1)) > 0


def test_diagnostics(tmp_path):
    cases = {
        "(defun f (x": 2,
        "(defun f (x) (nosuch x))": 2,
        "(defun f (x) (+ x 1))\n(function-type-main f (:ainteger) (:astring))": 3,
        F_MAIN + "(function-type-other f (:ainteger :arational) (:arational))\n"
                 "(function-type-other f (:arational :ainteger) (:arational))\n": 3,
    }
    phases = [r"read error: .*bad0\.sej:1:1", r"frontend error: .*bad1\.sej:1:1",
              r"directive error: .*bad2\.sej:1:1", r"pre-translation error: .*bad3\.sej:\d+:1"]
    for k, ((src, want), phase) in enumerate(zip(cases.items(), phases)):
        path = tmp_path / f"bad{k}.sej"
        path.write_text(src)
        code, out, err = cli("gen", path, "--out", tmp_path)
        assert code == want and out == ""
        assert re.match(r"sejc: " + phase, err), err


def test_glb_footnote_exit(tmp_path):
    path = tmp_path / "glb.sej"
    path.write_text(F_MAIN + "(function-type-other f (:ainteger :arational) (:arational))\n"
                             "(function-type-other f (:arational :ainteger) (:arational))\n")
    code, _, err = cli("gen", path, "--out", tmp_path)
    assert code == 3 and "(:ainteger :ainteger)" in err
    path.write_text(path.read_text() + "(function-type-other f (:ainteger :ainteger) (:ainteger))\n")
    assert cli("gen", path, "--out", tmp_path)[0] == 0


@pytest.mark.parametrize("argv", [
    [], ["bogus"], ["gen"], ["run", "x.sej"], ["gen", "nosuch.sej"],
])
def test_usage_errors(argv):
    code, out, err = cli(*argv)
    assert code == 1 and out == "" and err.startswith("sejc: ")


def test_usage_errors_with_workspace(ws, tmp_path):
    assert cli("gen", ws, "--deep", "--out", tmp_path)[0] == 1
    assert cli("run", ws, "-f", "nosuch", "-a", "1")[0] == 1
    assert cli("run", ws, "-f", "f", "-a", "1")[0] == 1
    assert cli("check", ws, "--fuzz", "many")[0] == 1


def test_runtime_failure_exit(ws):
    # no signature of the typed f accepts a symbol
    code, _, err = cli("run", ws, "-f", "f", "-a", "'a 1")
    assert code == 4 and err.startswith("sejc: target-evaluator error")


def test_javac_flag(ws, tmp_path):
    code, _, err = cli("gen", ws, "--javac", "--out", tmp_path)
    if shutil.which("javac") is None:
        assert code == 0 and "javac not found" in err
    else:
        assert code in (0, 4)


def test_module_entry_point(ws):
    proc = subprocess.run([sys.executable, "-m", "sejc", "oracle", str(ws), "-f", "f", "-a", "2 1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "8\n"
