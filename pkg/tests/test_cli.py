from arcflex.cli import EXIT_FAILURE, EXIT_INVALID, EXIT_OK, main
from arcflex.examples import make_collinear_chain, make_fourbar, make_triangle
from arcflex.io import read_path, write_framework
from contextlib import redirect_stderr, redirect_stdout
import io
import json
import os
import tempfile
import unittest


def run(argv):
    """Run the command line, return exit code, stdout and stderr."""

    stdout = io.StringIO()
    stderr = io.StringIO()
    with redirect_stdout(stdout), redirect_stderr(stderr):
        code = main(argv)
    return code, stdout.getvalue(), stderr.getvalue()


class CliTestCase(unittest.TestCase):

    def setUp(self):

        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)

    def path(self, name):
        return os.path.join(self.directory.name, name)

    def framework_file(self, framework, name="framework.json"):

        framework_path = self.path(name)
        write_framework(framework, framework_path)
        return framework_path

    def json_file(self, description, name="framework.json"):

        framework_path = self.path(name)
        with open(framework_path, 'w') as f:
            json.dump(description, f)
        return framework_path


class TestValidate(CliTestCase):

    def test_triangle(self):

        code, stdout, _ = run(
            ["validate", self.framework_file(make_triangle())])

        assert code == EXIT_OK
        assert "valid, 3 vertices, 3 edges, 2 pinned" in stdout

    def test_unknown_vertex(self):

        description = make_collinear_chain().describe()
        description["edges"].append({"u": "B", "v": "Z"})

        code, _, stderr = run(["validate", self.json_file(description)])

        assert code == EXIT_INVALID
        assert "invalid:" in stderr
        assert "B-Z" in stderr

    def test_insufficient_pins(self):

        description = {
            "dimension": 2,
            "vertices": [
                {"id": "A", "coords": [0, 0]},
                {"id": "B", "coords": [1, 0]}
            ],
            "edges": [{"u": "A", "v": "B"}]
        }

        code, _, stderr = run(["validate", self.json_file(description)])

        assert code == EXIT_INVALID
        assert "insufficient pins" in stderr

    def test_not_json(self):

        framework_path = self.path("broken.json")
        with open(framework_path, 'w') as f:
            f.write("{\"dimension\": 2,")

        code, _, _ = run(["validate", framework_path])

        assert code == EXIT_INVALID

    def test_missing_file(self):

        code, _, stderr = run(["validate", self.path("missing.json")])

        assert code == EXIT_FAILURE
        assert stderr.startswith("error:")


class TestAnalyze(CliTestCase):

    def test_chain(self):

        code, stdout, _ = run(
            ["analyze", self.framework_file(make_collinear_chain())])
        report = json.loads(stdout)

        assert code == EXIT_OK
        assert list(report)[:2] == ["tool", "input_sha256"]
        assert report["rigidity"]["flex_dimension"] == 1
        assert report["rigidity"]["stress_dimension"] == 1
        assert report["verdicts"]["1"]["verdict"] == "flexible"
        assert report["verdicts"]["2"]["verdict"] == "rigid"
        assert "1" in report["witness_paths"]

    def test_triangle(self):

        code, stdout, _ = run(
            ["analyze", "--max-order", "3",
             self.framework_file(make_triangle())])
        report = json.loads(stdout)

        assert code == EXIT_OK
        assert [report["verdicts"][n]["verdict"] for n in "123"] == \
            ["rigid"] * 3
        assert report["witness_paths"] == {}
        assert report["traced_paths"] == {}

    def test_traced_paths(self):

        code, stdout, _ = run([
            "analyze", "--steps", "20", self.framework_file(make_fourbar())])
        traced = json.loads(stdout)["traced_paths"]

        assert code == EXIT_OK
        assert sorted(traced) == ["minus", "plus"]
        for path in traced.values():
            assert path["samples"] == 21
            assert path["estimate"]["floor_hit"] is True
            assert path["classification"]["2"] == "witnesses_flexibility"

    def test_chain_does_not_trace(self):

        code, stdout, _ = run(
            ["analyze", self.framework_file(make_collinear_chain())])
        traced = json.loads(stdout)["traced_paths"]

        assert code == EXIT_OK
        assert sorted(traced) == ["minus", "plus"]
        for path in traced.values():
            assert path["truncated"] is True
            assert path["estimate"] is None

    def test_deterministic(self):

        framework_path = self.framework_file(make_fourbar())

        _, first, _ = run(["--seed", "3", "analyze", framework_path])
        _, second, _ = run(["--seed", "3", "analyze", framework_path])

        assert first == second


class TestTrace(CliTestCase):

    def test_fourbar(self):

        output = self.path("fourbar.csv")
        code, stdout, _ = run([
            "trace", self.framework_file(make_fourbar()),
            "--direction", "0", "--output", output])

        assert code == EXIT_OK
        header, rows = read_path(output)
        assert header == ["t", "s", "max_abs_D", "B.x", "B.y", "C.x", "C.y"]
        assert len(rows) == 101
        assert max(row[2] for row in rows) <= 1e-10

        report = json.loads(stdout)
        assert report["branch_count"] == 1
        assert report["branches"]["plus"]["samples"] == 101

    def test_both_directions(self):

        code, stdout, _ = run([
            "trace", self.framework_file(make_fourbar()),
            "--steps", "10", "--output", self.path("fourbar.csv")])

        assert code == EXIT_OK
        assert json.loads(stdout)["branch_count"] == 2
        assert os.path.exists(self.path("fourbar.plus.csv"))
        assert os.path.exists(self.path("fourbar.minus.csv"))

    def test_triangle(self):

        code, _, stderr = run([
            "trace", self.framework_file(make_triangle()),
            "--output", self.path("triangle.csv")])

        assert code == EXIT_FAILURE
        assert "no flex direction" in stderr
        assert not os.path.exists(self.path("triangle.csv"))


class TestOrder(CliTestCase):

    def test_from_flex(self):

        code, stdout, _ = run([
            "order", self.framework_file(make_collinear_chain()),
            "--from-flex", "1"])
        report = json.loads(stdout)

        assert code == EXIT_OK
        assert abs(report["estimate"]["slope"] - 2.0) < 0.05
        assert report["classification"]["1"] == "witnesses_flexibility"
        assert report["classification"]["2"] == "does_not_witness"

    def test_from_rigid_flex(self):

        code, _, stderr = run([
            "order", self.framework_file(make_collinear_chain()),
            "--from-flex", "2"])

        assert code == EXIT_FAILURE
        assert "no flex direction" in stderr

    def test_from_trace(self):

        code, stdout, _ = run([
            "order", self.framework_file(make_fourbar()), "--from-trace",
            "--steps", "30"])
        report = json.loads(stdout)

        assert code == EXIT_OK
        assert report["estimate"]["floor_hit"] is True
        assert report["estimate"]["slope"] is None
        assert set(report["classification"].values()) == \
            {"witnesses_flexibility"}

    def test_synthetic(self):

        code, stdout, _ = run(["order", "--synthetic-exponent", "3.5"])
        report = json.loads(stdout)

        assert code == EXIT_OK
        assert abs(report["estimate"]["slope"] - 3.5) <= 0.02
        assert report["classification"]["3"] == "witnesses_flexibility"
        assert report["classification"]["4"] == "does_not_witness"


class TestCuspDemo(CliTestCase):

    def test_positive_a(self):

        code, _, stderr = run([
            "cusp-demo", "--a-positive", "--output-dir", self.path("")])

        assert code == EXIT_FAILURE
        assert "stage 'solve' failed" in stderr
        assert "a < 0" in stderr

    def test_report(self):

        code, stdout, _ = run([
            "cusp-demo", "--steps", "20", "--output-dir", self.path("")])
        report = json.loads(stdout)

        assert code == EXIT_OK
        assert [report["verdicts"][n]["verdict"] for n in "123"] == \
            ["flexible", "flexible", "rigid"]
        for name in ("plus", "minus"):
            assert report["relations"][name]["max_residual"] <= 1e-8
            assert report["branches"][name]["initial_height_change"] < 0
            assert report["branches"][name]["max_residual"] <= 1e-10
            assert os.path.exists(self.path(f"cusp-{name}.csv"))

    def test_unit_bar(self):

        code, stdout, _ = run([
            "cusp-demo", "--with-unit-bar", "--steps", "10",
            "--output-dir", self.path("")])
        solutions = json.loads(stdout)["solutions"]

        assert code == EXIT_OK
        assert solutions["plus"]["L"] == 1.0
        assert abs(solutions["plus"]["b_bar"] - solutions["plus"]["b"] - 3.0) \
            < 1e-12

    def test_deterministic(self):

        argv = ["cusp-demo", "--steps", "10", "--output-dir", self.path("")]

        _, first, _ = run(argv)
        with open(self.path("cusp-plus.csv"), 'rb') as f:
            first_csv = f.read()
        _, second, _ = run(argv)
        with open(self.path("cusp-plus.csv"), 'rb') as f:
            second_csv = f.read()

        assert first == second
        assert first_csv == second_csv
