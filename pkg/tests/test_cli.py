import io
import subprocess
import sys

import pytest

from mmlcost.cli import TABLE_COLUMNS, fmt, format_plain, run, tabled_header
from mmlcost.coder import cost_program

from _helpers import prog

PROGRAM = "even(0).\neven(s(s(X))) :- even(X).\n"
EVIDENCE = "3 # even(0).\n2 # even(s(s(0))).\n"


def call(args, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(args, stdin, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def test_plain_output(files):
    code, out, _ = call([files("p.pl", PROGRAM), "--examples=" + files("e.pl", EVIDENCE)])
    assert code == 0
    assert "Total cost:" in out
    assert "Cost of 2 rules: 2.51929 bits" in out
    assert "Cost of examples: 9.01595 bits (5 examples)" in out
    assert "of  1 predicates [even/1]" in out


def test_cartesian_product(files):
    p1, p2 = files("p1.pl", PROGRAM), files("p2.pl", "even(0).\n")
    e1, e2 = files("e1.pl", "even(0).\n"), files("e2.pl", EVIDENCE)
    kb1, kb2 = files("kb1.pl", "unused(a).\n"), files("kb2.pl", "other(b).\n")
    code, out, _ = call([p1, p2, f"--examples={e1},{e2}", f"--kb={kb1},{kb2}"])
    assert code == 0
    assert out.count("Total cost:") == 4
    titles = [line for line in out.splitlines() if line.startswith(("/", "<"))]
    assert titles == [f"{p1} + {e1} + {kb1} + {kb2}", f"{p1} + {e2} + {kb1} + {kb2}",
                      f"{p2} + {e1} + {kb1} + {kb2}", f"{p2} + {e2} + {kb1} + {kb2}"]
    code, again, _ = call([p1, f"--examples={e1}", f"--examples={e2}", f"--kb={kb1}",
                           f"--kb={kb2}", p2])
    assert again == out


def test_flag_order_independence(files):
    p, e = files("p.pl", PROGRAM), files("e.pl", EVIDENCE)
    a = call([p, "--numbers", "--examples=" + e, "--tabled"])
    b = call(["--tabled", "--examples=" + e, p, "--numbers"])
    assert a == b


def test_tabled(files):
    code, out, _ = call([files("prg.pl", PROGRAM), "--examples=" + files("ex.pl", EVIDENCE),
                         "--tabled"])
    header, row = out.splitlines()
    assert header == (";name;Total;Program;CRule;CLexicon;NP;NF;CHeads;CBodies;CVars;CProb;"
                      "CExamples;CKnowledgeBase;Predicates;FunctionSymbols;")
    assert header == tabled_header()
    cells = row.split(";")[1:-1]
    assert len(cells) == len(TABLE_COLUMNS) == 15
    assert cells[0] == "prg+ex"
    assert cells[3] == "2.51929"
    assert cells[10] == "0.00000"
    assert cells[13] == "[even/1]" and cells[14] == "[s/1]"


def test_stdin():
    code, out, _ = call(["--"], "p(0,1).\np(_,_).\n")
    assert code == 0
    assert out.count("Total cost:") == 1
    assert "Cost of 2 rules" in out


def test_debug(files):
    code, out, _ = call([files("p.pl", PROGRAM), "--examples=" + files("e.pl", EVIDENCE),
                         "--debug"])
    assert code == 0
    assert "-- #2 rule cost: Header:3.00000 Body:3.51929 Vars:0.00000" in out
    assert "-- example even(0): times=3 probability=0.50000" in out


def test_five_rule_line():
    b = cost_program(prog("p(a). p(b). p(c). p(d). p(e)."))
    assert "Cost of 5 rules: 5.33789 bits" in format_plain("x", b)


def test_formatting():
    assert fmt(0.0) == "0.00000"
    assert fmt(-0.0) == "0.00000"
    assert fmt(2.5, 0) == "2"
    assert fmt(0.125, 2) == "0.12"
    assert fmt(1 / 3, 3) == "0.333"


@pytest.mark.parametrize("program,evidence,extra,code", [
    (None, None, [], 2),
    (PROGRAM, None, ["--rulesprob=bogus"], 2),
    (PROGRAM, None, ["--maxrecursion=0"], 2),
    (PROGRAM, "even(s(0)).\n", ["--warnings=on"], 5),
    (PROGRAM, "even(0) :- true.\n", [], 6),
    (PROGRAM, "1.5 # even(0).\n", [], 7),
    ("even(0\n", None, [], 8),
    ("0.7 :: p(a).\n0.3 :: p(b).\np(c).\n", None, [], 9),
    ("3 # p(a).\n", None, [], 12),
    (PROGRAM, "0.5 :: even(0).\n", [], 12),
    ("p(X) :- p(X).\n", None, [], 15),
    ("0.8 :: p(a).\n0.7 :: p(b).\n", None, ["--normalize=off", "--rulesprob=all"], 16),
    (PROGRAM, None, ["--normalize=off"], 17),
    (PROGRAM, ":- even(0).\n", [], 18),
    (PROGRAM, "even(X).\n", [], 4),
])
def test_exit_codes(files, program, evidence, extra, code):
    args = list(extra)
    if program is not None:
        args.append(files("p.pl", program))
    if evidence is not None:
        args.append("--examples=" + files("e.pl", evidence))
    assert call(args)[0] == code


def test_kb_conflict_exit_code(files):
    args = [files("p.pl", "p(a).\n"), "--kb=" + files("kb.pl", "p(b).\n")]
    assert call(args)[0] == 14


def test_unreadable_file():
    assert call(["/nonexistent/file.pl"])[0] == 1


def test_uncovered_is_a_warning_by_default(files):
    code, out, err = call([files("p.pl", PROGRAM), "--examples=" + files("e.pl", "even(s(0)).\n")])
    assert code == 0
    assert "not covered" in err
    assert "partial" in out


def test_dialect_notice(files):
    code, _, err = call([files("p.pl", PROGRAM), "--dialect=sicstus"])
    assert code == 0 and "ignored" in err


def test_compare(files):
    code, out, _ = call([files("p.pl", "p(a). p(b)."), "--examples=" + files("e.pl", "p(a)."),
                         "--compare=ec,mc,pc"])
    assert code == 0
    assert "Coder MC" in out and "Coder PC" in out and "Coder EC" in out


def test_console_entry_point(files):
    r = subprocess.run([sys.executable, "-m", "mmlcost", files("p.pl", PROGRAM), "--tabled"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.startswith(";name;Total;")
