"""End-to-end command tests plus unit coverage for report encoding and DOT
rendering: exit codes, report layout, byte-stable output, seed handling."""

import json
import os
from fractions import Fraction

import pytest

from stratakit import cli, report
from stratakit.dot import dot_graph

from conftest import spec_path, spec_text

EXAMPLE = str(spec_path("example"))
Z2_LINE = str(spec_path("z2_line"))

REPORT_KEYS = {"schema", "command", "classes", "strata", "pieces", "lattices", "checks"}


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def corrupted_example(tmp_path):
    # same document, torus weight doubled: a different action whose class
    # list no longer matches the bundled expectation
    doc = json.loads(spec_text("example"))
    doc["torus"]["weights"] = [[2]]
    path = tmp_path / "corrupted.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


class TestLattice:
    def test_summary(self, capsys):
        code, out, err = run(["lattice", EXAMPLE], capsys)
        assert code == 0
        assert err == ""
        assert "classes: 4" in out
        assert "principal: 1" in out
        assert "1 < S1" in out and "1 < Z2" in out
        assert "S1 < G" in out and "Z2 < G" in out

    def test_report_layout(self, tmp_path, capsys):
        out_path = tmp_path / "lattice.json"
        code, _, _ = run(["lattice", EXAMPLE, "--out", str(out_path)], capsys)
        assert code == 0
        doc = json.loads(out_path.read_text(encoding="utf-8"))
        assert set(doc) == REPORT_KEYS
        assert doc["schema"] == 1
        assert doc["command"] == "lattice"
        assert sorted(doc["classes"]) == ["1", "G", "S1", "Z2"]
        assert doc["classes"]["S1"]["torus_dim"] == 1
        assert doc["strata"]["1"]["dim_stratum"] == 3
        assert doc["lattices"]["isotropy"]["principal"] == "1"
        assert doc["pieces"] == {}


class TestReduce:
    def test_summary(self, capsys):
        code, out, err = run(["reduce", EXAMPLE], capsys)
        assert code == 0
        assert err == ""
        assert "pieces: 9" in out
        assert "C_1: dim 4, ambient 4, rank 4, symplectic" in out
        assert "S_G->Z2: dim 1, ambient 2, rank 0, Lagrangian" in out
        assert "edges: 12" in out
        assert "open dense: C_1" in out
        assert "refinement: finer=True strict=True" in out

    def test_report_layout(self, tmp_path, capsys):
        out_path = tmp_path / "reduce.json"
        code, _, _ = run(["reduce", EXAMPLE, "--out", str(out_path)], capsys)
        assert code == 0
        doc = json.loads(out_path.read_text(encoding="utf-8"))
        assert set(doc) == REPORT_KEYS
        assert set(doc["lattices"]) == {
            "isotropy", "symplectic", "coisotropic",
            "secondary:1", "secondary:Z2", "secondary:S1", "secondary:G",
        }
        assert len(doc["pieces"]) == 9
        piece = doc["pieces"]["S_G->1"]
        assert piece == {
            "upper": "G", "lower": "1", "kind": "seam",
            "dim_W": 2, "dim_V": 4, "rank": 0,
            "classification": "Lagrangian",
        }
        coiso = doc["lattices"]["coisotropic"]
        assert len(coiso["edges"]) == 12
        assert coiso["open_dense"] == "C_1"
        assert doc["checks"]["coisotropy_identity"] == {"ok": True}
        assert doc["checks"]["refinement"] == {"finer": True, "strict": True}

    def test_byte_identical_reruns(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(["reduce", EXAMPLE, "--out", str(a)], capsys)
        run(["reduce", EXAMPLE, "--out", str(b)], capsys)
        assert a.read_bytes() == b.read_bytes()


class TestVerify:
    def test_passes_on_example(self, capsys):
        code, out, _ = run(["verify", EXAMPLE, "--samples", "300"], capsys)
        assert code == 0
        assert "fiber down-sets: ok (4 witnesses)" in out
        assert "expected classes: ok" in out
        assert "relations: max residual" in out
        assert "piece regions: 9/9 ok" in out

    def test_skips_absent_sections(self, capsys):
        code, out, _ = run(["verify", Z2_LINE, "--samples", "200"], capsys)
        assert code == 0
        assert "relations: skipped" in out
        assert "piece regions: skipped" in out

    def test_corrupted_action_fails(self, tmp_path, capsys):
        bad = corrupted_example(tmp_path)
        out_path = tmp_path / "verify.json"
        code, out, err = run(
            ["verify", bad, "--samples", "200", "--out", str(out_path)], capsys
        )
        assert code == 5
        assert "expected classes: FAIL" in out
        assert "error: failed checks: expected_classes" in err
        # report still lands, carrying the failed check
        doc = json.loads(out_path.read_text(encoding="utf-8"))
        assert doc["checks"]["expected_classes"]["ok"] is False
        assert doc["checks"]["piece_regions"] == "skipped"

    def test_report_layout(self, tmp_path, capsys):
        out_path = tmp_path / "verify.json"
        code, _, _ = run(
            ["verify", EXAMPLE, "--samples", "200", "--out", str(out_path)], capsys
        )
        assert code == 0
        doc = json.loads(out_path.read_text(encoding="utf-8"))
        assert set(doc) == REPORT_KEYS
        assert doc["command"] == "verify"
        fiber = doc["checks"]["fiber_down_sets"]
        assert sorted(fiber) == ["1", "G", "S1", "Z2"]
        assert fiber["Z2"]["expected"] == ["1", "Z2"]
        assert all(entry["ok"] for entry in fiber.values())
        assert doc["checks"]["relations"]["ok"] is True
        assert doc["checks"]["piece_regions"]["ok"] is True


class TestExportDot:
    def test_coisotropic_to_stdout(self, capsys):
        code, out, _ = run(["export-dot", EXAMPLE], capsys)
        assert code == 0
        assert out.startswith('digraph "coisotropic" {\n')
        assert out.endswith("}\n")
        assert '  "C_1" [dim=4];' in out
        assert '  "S_G->1" -> "S_Z2->1";' in out
        assert out.count(" -> ") == 12

    def test_secondary_golden(self, capsys):
        code, out, _ = run(["export-dot", EXAMPLE, "--which", "secondary:1"], capsys)
        assert code == 0
        assert out == (
            'digraph "secondary:1" {\n'
            '  "C_1" [dim=4];\n'
            '  "S_G->1" [dim=2];\n'
            '  "S_S1->1" [dim=3];\n'
            '  "S_Z2->1" [dim=3];\n'
            '  "S_G->1" -> "S_S1->1";\n'
            '  "S_G->1" -> "S_Z2->1";\n'
            '  "S_S1->1" -> "C_1";\n'
            '  "S_Z2->1" -> "C_1";\n'
            "}\n"
        )

    def test_symplectic(self, capsys):
        code, out, _ = run(["export-dot", EXAMPLE, "--which", "symplectic"], capsys)
        assert code == 0
        assert 'digraph "symplectic" {' in out
        assert '  "P0_(1)" [dim=4];' in out
        assert '  "P0_(G)" -> "P0_(S1)";' in out

    @pytest.mark.parametrize("which", ["symplectic", "coisotropic", "secondary:Z2"])
    def test_file_output_stable(self, which, tmp_path, capsys):
        a, b = tmp_path / "a.dot", tmp_path / "b.dot"
        for path in (a, b):
            code, out, _ = run(
                ["export-dot", EXAMPLE, "--which", which, "--out", str(path)], capsys
            )
            assert code == 0
            assert out == ""
        assert a.read_bytes() == b.read_bytes()
        assert a.read_text(encoding="utf-8").startswith('digraph "%s" {' % which)


class TestFailureModes:
    def test_missing_file(self, capsys):
        code, _, err = run(["lattice", "/nonexistent/action.json"], capsys)
        assert code == 1
        assert err.startswith("error:")

    def test_malformed_document(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        code, _, err = run(["lattice", str(bad)], capsys)
        assert code == 1
        assert "error:" in err

    def test_unknown_dot_kind(self, capsys):
        code, _, err = run(["export-dot", EXAMPLE, "--which", "nope"], capsys)
        assert code == 1
        assert "--which" in err

    def test_unknown_secondary_class(self, capsys):
        code, _, err = run(["export-dot", EXAMPLE, "--which", "secondary:D4"], capsys)
        assert code == 1
        assert "D4" in err

    def test_bad_samples(self, capsys):
        code, _, err = run(["verify", EXAMPLE, "--samples", "0"], capsys)
        assert code == 1
        assert "--samples" in err

    def test_bad_tol(self, capsys):
        code, _, err = run(["verify", EXAMPLE, "--tol", "0"], capsys)
        assert code == 1
        assert "--tol" in err

    def test_unwritable_out_leaves_nothing(self, tmp_path, capsys):
        target = tmp_path / "missing-dir" / "out.json"
        code, _, err = run(["reduce", EXAMPLE, "--out", str(target)], capsys)
        assert code == 1
        assert "error:" in err
        assert list(tmp_path.iterdir()) == []


class TestSeedHandling:
    def test_env_seed_matches_flag(self, tmp_path, capsys, monkeypatch):
        flagged = tmp_path / "flag.json"
        run(["lattice", EXAMPLE, "--seed", "7", "--out", str(flagged)], capsys)
        monkeypatch.setenv("STRATAKIT_SEED", "7")
        env_only = tmp_path / "env.json"
        run(["lattice", EXAMPLE, "--out", str(env_only)], capsys)
        assert flagged.read_bytes() == env_only.read_bytes()

    def test_flag_beats_env(self, tmp_path, capsys, monkeypatch):
        flagged = tmp_path / "flag.json"
        run(["lattice", EXAMPLE, "--seed", "7", "--out", str(flagged)], capsys)
        monkeypatch.setenv("STRATAKIT_SEED", "99")
        both = tmp_path / "both.json"
        run(["lattice", EXAMPLE, "--seed", "7", "--out", str(both)], capsys)
        assert flagged.read_bytes() == both.read_bytes()

    def test_env_seed_must_be_integer(self, capsys, monkeypatch):
        monkeypatch.setenv("STRATAKIT_SEED", "not-a-number")
        code, _, err = run(["lattice", EXAMPLE], capsys)
        assert code == 1
        assert "STRATAKIT_SEED" in err


class TestReportEncoding:
    def test_fractions(self):
        assert report.encode(Fraction(3, 1)) == 3
        assert report.encode(Fraction(-2, 7)) == "-2/7"
        assert report.encode((Fraction(1, 2), 0, 1.5)) == ["1/2", 0, 1.5]

    def test_nested_containers(self):
        doc = {"a": {1, 3, 2}, "b": {"c": (Fraction(5, 4),)}, "d": None}
        assert report.encode(doc) == {"a": [1, 2, 3], "b": {"c": ["5/4"]}, "d": None}

    def test_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            report.encode(object())

    def test_render_is_sorted_and_newline_terminated(self):
        text = report.render({"b": 1, "a": 2})
        assert text == '{\n  "a": 2,\n  "b": 1\n}\n'

    def test_write_text_replaces_atomically(self, tmp_path):
        target = tmp_path / "out.txt"
        target.write_text("old", encoding="utf-8")
        report.write_text("new", str(target))
        assert target.read_text(encoding="utf-8") == "new"
        leftovers = [p for p in os.listdir(tmp_path) if p.startswith(".tmp-")]
        assert leftovers == []


class TestDotRendering:
    def test_label_quoting(self):
        class Node:
            label = 'a"b\\c'
            dim = 1

        class Latt:
            kind = "k"
            nodes = (Node(),)
            edges = ()

        text = dot_graph(Latt())
        assert '"a\\"b\\\\c" [dim=1];' in text
