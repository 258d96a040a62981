import json
from pathlib import Path

import pytest

from effectlayers.cli import main

SPEC = str(Path(__file__).resolve().parent.parent / "specs" / "probnetkat.layers")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    @pytest.mark.parametrize(
        "program, stage, expected",
        [
            ("a;c (+)[1/2] b;c", None, "⟨⟨ac⟩⟩: 1/2, ⟨⟨bc⟩⟩: 1/2"),
            ("(a + b);c", "1", "{ac, bc}"),
            ("a;abort", "1", "{}"),
            ("a;(b;c)", "0", "abc"),
            ("skip", "0", "ε"),
            ("a + a", "1", "{a}"),
        ],
    )
    def test_programs(self, capsys, program, stage, expected):
        argv = ["eval", SPEC, "-e", program]
        if stage is not None:
            argv += ["--stage", stage]
        code, out, _ = run(capsys, *argv)
        assert code == 0
        assert out.strip() == expected

    def test_json_report(self, capsys, tmp_path):
        out_path = tmp_path / "eval.json"
        code, out, _ = run(
            capsys, "eval", SPEC, "-e", "a;abort", "--stage", "1",
            "--json", str(out_path),
        )
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert doc["kind"] == "eval"
        assert doc["value"] == "{}" == out.strip()

    def test_unbound_atom_exits_3(self, capsys):
        code, _, err = run(capsys, "eval", SPEC, "-e", "z;a")
        assert code == 3
        assert "unbound atom" in err

    def test_op_not_yet_available_exits_3(self, capsys):
        code, _, err = run(capsys, "eval", SPEC, "-e", "a + b", "--stage", "0")
        assert code == 3
        assert "error" in err


class TestCheck:
    def test_reports_drops_and_exits_1(self, capsys, tmp_path):
        out_path = tmp_path / "check.json"
        code, out, _ = run(capsys, "check", SPEC, "--json", str(out_path))
        assert code == 1
        assert "idem(+)" in out
        doc = json.loads(out_path.read_text())
        dropped = {
            d.split(":")[0] for stage in doc["stages"] for d in stage["dropped"]
        }
        assert dropped == {"idem(+)", "distrib-right(;,+)", "distrib-left(;,+)"}

    def test_json_round_trips(self, capsys, tmp_path):
        from effectlayers.reports import ReportDocument

        out_path = tmp_path / "check.json"
        run(capsys, "check", SPEC, "--json", str(out_path))
        text = out_path.read_text()
        doc = ReportDocument.from_json(text)
        assert doc.to_json() + "\n" == text


class TestInputErrors:
    def test_missing_file_exits_3(self, capsys):
        code, _, err = run(capsys, "check", "/nonexistent.layers")
        assert code == 3 and "error" in err

    def test_parse_error_is_located(self, capsys, tmp_path):
        bad = tmp_path / "bad.layers"
        bad.write_text("atoms a;\nlayer l {\n  op ;\n}\n")
        code, _, err = run(capsys, "check", str(bad))
        assert code == 3
        assert "3:" in err  # line of the offending token

    def test_bad_bounds_file_exits_3(self, capsys, tmp_path):
        bounds = tmp_path / "bounds.json"
        bounds.write_text('{"prob_grid": ["1/3"]}')
        code, _, err = run(capsys, "check", SPEC, "--bounds", str(bounds))
        assert code == 3 and "error" in err

    def test_bounds_override(self, capsys, tmp_path):
        bounds = tmp_path / "bounds.json"
        bounds.write_text(
            '{"max_word_len": 1, "max_set_size": 2, "prob_grid": ["0", "1/2", "1"]}'
        )
        code, out, _ = run(
            capsys, "eval", SPEC, "-e", "a + b", "--stage", "1",
            "--bounds", str(bounds),
        )
        assert code == 0 and out.strip() == "{a, b}"
