import json

import pytest

from smallspan.charpoly import IntPoly
from smallspan.grow import GrowConfig, grow_all
from smallspan.matrix import HermitianGraph
from smallspan.report import (
    EXIT_DATA,
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_USAGE,
    MISSING,
    P_ELUSIVE,
    TABLE1,
    cli_main,
    realises,
    self_check,
    table_markdown,
)
from smallspan.templates import build_template

from conftest import FIXTURES


def run(capsys, *argv):
    code = cli_main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_table_fixture_shape():
    assert sorted(TABLE1) == [-11, -7, -3, -2, -1, 2, 3, 5]
    assert sum(len(v) for v in TABLE1.values()) == 56
    assert [TABLE1[d][0] for d in sorted(TABLE1)] == [2, 2, 2, 4, 2, 3, 2, 2]
    assert TABLE1[-1] == (2, 8, 16, 10, 6, 3, 3)
    assert TABLE1[-3] == (2, 3, 10, 9, 14, 2, 3)
    assert TABLE1[3] == (2, 0, 0, 0, 0, 0, 0)
    assert TABLE1[-7][6] == 2


def test_markdown_flags_mismatch():
    obs = dict(TABLE1)
    obs[5] = (2, 4, 10, 2, 0, 0, 0)
    md = table_markdown(obs)
    assert "**2** (expected 1)" in md and md.count("expected") == 1


def test_missing_polys_are_small_span():
    self_check()
    assert len(MISSING.cosine) == 3 and len(MISSING.noncosine) == 3


def test_realises_uses_equivalence():
    g = build_template("Sec4_c")
    assert realises(g, P_ELUSIVE * IntPoly.from_high([1, 1]))
    assert realises(g.negated().shifted(1), P_ELUSIVE * IntPoly.from_high([1, 1]))
    assert not realises(build_template("Sec4_a"), P_ELUSIVE)


def test_span_cli(capsys):
    code, out, _ = run(capsys, "span", str(FIXTURES / "frakC8.json"))
    assert code == EXIT_OK and out == "window: yes, span: <4, cyclotomic: no"


def test_charpoly_cli(capsys):
    code, out, _ = run(capsys, "charpoly", str(FIXTURES / "sec4_graph_a.json"))
    assert code == EXIT_OK and out == "x^6 - 7x^4 + 14x^2 - 7"


def test_template_cli(capsys):
    code, out, _ = run(capsys, "template", "check", "--family", "P", "--params", "3..30", "--ring", "-2")
    assert code == EXIT_OK and out.splitlines()[-1] == "det(A+2I)=4 for all n"
    code, out, _ = run(capsys, "template", "check", "--params", "X4:2,3", "--ring", "-1")
    assert code == EXIT_OK and "verified" in out
    code, _, err = run(capsys, "template", "check", "--family", "Q", "--params", "4", "--ring", "-2")
    assert code == EXIT_USAGE and "not defined" in err


def test_equiv_cli(capsys, tmp_path):
    # char poly of this one is not even, so the sign flip is forced
    g = build_template("Sec4_c")
    (tmp_path / "g.json").write_text(g.dumps())
    h = g.permuted([6, 5, 4, 3, 2, 1, 0]).negated().shifted(1)
    (tmp_path / "h.json").write_text(h.dumps())
    code, out, _ = run(capsys, "equiv", str(tmp_path / "g.json"), str(tmp_path / "h.json"))
    assert code == EXIT_OK and "eps=-1" in out and "c=1" in out
    code, out, _ = run(capsys, "equiv", str(FIXTURES / "sec4_graph_a.json"), str(tmp_path / "h.json"))
    assert code == EXIT_MISMATCH and out == "not equivalent"


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "nonsense")[0] == EXIT_USAGE
    assert run(capsys, "span", str(tmp_path / "missing.json"))[0] == EXIT_DATA
    bad = tmp_path / "bad.json"
    bad.write_text('{"d": -1, "n": 2, "entries": [[[0,0]]]}')
    code, _, err = run(capsys, "charpoly", str(bad))
    assert code == EXIT_DATA and "bad.json" in err
    assert run(capsys, "verify", "table1", "--in", str(tmp_path))[0] == EXIT_DATA


def test_enumerate_cli_and_partial_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--d", "-11", "--max-n", "3", "--out", str(tmp_path))
    assert code == EXIT_OK and "d=-11 n=3" in out
    summary = (tmp_path / "d-11" / "summary.csv").read_text().splitlines()
    assert summary[0] == "d,n,classes_total,classes_nonrational,maximal_nonrational"
    # resume into a new directory, one more level
    code, out, _ = run(capsys, "enumerate", "--d", "-11", "--max-n", "4", "--resume", str(tmp_path), "--out", str(tmp_path / "more"))
    assert code == EXIT_OK and "n=4" in out
    lines = [l for l in (tmp_path / "d-11" / "n3" / "classes.jsonl").read_text().splitlines()]
    assert all(json.loads(l)["n"] == 3 for l in lines)
