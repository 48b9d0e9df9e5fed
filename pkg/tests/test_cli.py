import pytest

from otearley import presets
from otearley.cli import main


@pytest.fixture
def files(tmp_path):
    ww = tmp_path / "ww.mcfg"
    ww.write_text(presets.TOTAL_REDUPLICATION_GRAMMAR)
    machine = tmp_path / "final0.wfsa"
    machine.write_text(presets.FINAL_ZERO_PENALTY_AUTOMATON)
    table = tmp_path / "cv.tiers"
    table.write_text(presets.CV_REDUPLICATION_TABLE)
    return {"ww": str(ww), "machine": str(machine), "table": str(table),
            "dir": tmp_path}


def test_intersect_writes_pruned_grammar(files, capsys):
    assert main(["intersect", "-g", files["ww"], "-a", files["machine"]]) == 0
    out = capsys.readouterr().out
    assert out == (
        "%start S\n"
        "S -> A.0 A.1\n"
        "A -> (1 , 1)\n"
        "A -> (0 A.0 , 0 A.1)\n"
        "A -> (1 A.0 , 1 A.1)\n"
    )


def test_intersect_annotated_and_dump(files, capsys):
    assert main(["intersect", "-g", files["ww"], "-a", files["machine"],
                 "--annotated", "--dump-chart"]) == 0
    captured = capsys.readouterr()
    assert "%start S(1,2)" in captured.out
    assert "A(1,1)(1,2) -> (1 , 1)" in captured.out
    assert "column 1" in captured.err
    assert "success items: [(2, 9)]" in captured.err


def test_intersect_output_file(files, capsys):
    out_path = files["dir"] / "out.mcfg"
    assert main(["intersect", "-g", files["ww"], "-a", files["machine"],
                 "-o", str(out_path)]) == 0
    assert capsys.readouterr().out == ""
    assert out_path.read_text().startswith("%start S\n")


def test_empty_result_uses_empty_marker_and_exit_zero(files, tmp_path, capsys):
    odd = tmp_path / "odd.wfsa"
    odd.write_text("%start 0\n%final 3\n0 0 0 1\n1 1 0 2\n2 0 0 3\n")
    assert main(["intersect", "-g", files["ww"], "-a", str(odd)]) == 0
    assert capsys.readouterr().out == "%start S\n%empty\n"


def test_eval_chains_constraints(files, tmp_path, capsys):
    ones = tmp_path / "ones.wfsa"
    ones.write_text("%start 1\n%final 1\n1 0 0 1\n1 1 1 1\n")
    assert main(["eval", "-g", files["ww"], "-c", files["machine"],
                 "-c", str(ones)]) == 0
    captured = capsys.readouterr()
    # the first-ranked machine is nondeterministic, which eval reports
    assert "warning: constraint 0" in captured.err
    assert "%start S" in captured.out


def test_enumerate_grammar(files, capsys):
    assert main(["enumerate", "-g", files["ww"], "--max-len", "4"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["0 0\t0", "1 1\t0",
                   "0 0 0 0\t0", "0 1 0 1\t0", "1 0 1 0\t0", "1 1 1 1\t0"]


def test_enumerate_automaton(files, capsys):
    assert main(["enumerate", "-a", files["machine"], "--max-len", "1"]) == 0
    assert capsys.readouterr().out == "0\t1\n1\t0\n"


def test_enumerate_requires_exactly_one_input(files, capsys):
    assert main(["enumerate", "--max-len", "3"]) == 1
    assert main(["enumerate", "-g", files["ww"], "-a", files["machine"],
                 "--max-len", "3"]) == 1


def test_gen_redup_output_parses(files, capsys):
    assert main(["gen-redup", "--tiers", "C,V"]) == 0
    from otearley import parse_grammar, gen_redup_grammar
    out = capsys.readouterr().out
    assert parse_grammar(out) == gen_redup_grammar(["C", "V"], "red-first")


def test_gen_redup_base_first(files, capsys):
    assert main(["gen-redup", "--tiers", "C", "--direction", "base-first"]) == 0
    assert "RRE.0)" in capsys.readouterr().out


def test_encode_decode_pipe(files, capsys, monkeypatch, tmp_path):
    assert main(["encode", files["table"]]) == 0
    flat = capsys.readouterr().out.strip()
    assert len(flat) == 11 * 13
    flat_file = tmp_path / "flat.txt"
    flat_file.write_text(flat + "\n")
    assert main(["decode", "--tiers", "C,V", str(flat_file)]) == 0
    assert capsys.readouterr().out == presets.CV_REDUPLICATION_TABLE


def test_malformed_grammar_exits_nonzero(tmp_path, files, capsys):
    bad = tmp_path / "bad.mcfg"
    bad.write_text("%start S\nS => a\n")
    assert main(["intersect", "-g", str(bad), "-a", files["machine"]]) == 1
    assert "error:" in capsys.readouterr().err


def test_missing_file_exits_nonzero(files, capsys):
    assert main(["intersect", "-g", "/nonexistent.mcfg",
                 "-a", files["machine"]]) == 1
    assert "error:" in capsys.readouterr().err
