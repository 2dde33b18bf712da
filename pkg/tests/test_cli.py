import json
import shutil
import subprocess
import sys

from grcohom import cli

PLANE = {"generators": [[1, 0], [0, 1]]}
EVEN = {"generators": [[2, 0], [1, 1], [0, 2]]}
WORKED = [
    {"face_generators": [], "degree": [0, 0]},
    {"face_generators": [[2, 0]], "degree": [0, 1]},
    {"face_generators": [[0, 2]], "degree": [0, 0]},
    {"face_generators": [[2, 0]], "degree": [0, -1]},
    {"face_generators": [[0, 2]], "degree": [-2, 0]},
]


def run(tmp_path, capsys, command, problem, *flags):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(problem))
    code = cli.main([command, str(path), *flags])
    out = capsys.readouterr()
    return code, out.out, out.err


def payload(tmp_path, capsys, command, problem, *flags):
    code, out, err = run(tmp_path, capsys, command, problem, *flags)
    assert code == 0, err
    return json.loads(out)


class TestResolve:
    def test_xy(self, tmp_path, capsys):
        env = payload(tmp_path, capsys, "resolve", {"semigroup": PLANE, "module": {"monomials": [[1, 1]]}}, "--stages", "2")
        stages = env["payload"]["irreducible"]["stages"]
        assert [[s["face"] for s in st] for st in stages] == [[[0], [1]], [[0, 1]]]
        assert all(s["degree"] == [0, 0] for st in stages for s in st)
        assert all(isinstance(x, str) and "/" in x for x in env["payload"]["irreducible"]["maps"][0]["entries"][0])

    def test_ring_single_stage(self, tmp_path, capsys):
        env = payload(tmp_path, capsys, "resolve", {"semigroup": PLANE, "module": {"ring": True}}, "--stages", "1")
        irr = env["payload"]["irreducible"]
        assert len(irr["stages"]) == 1 and irr["maps"] == []

    def test_residue_shift(self, tmp_path, capsys):
        env = payload(tmp_path, capsys, "resolve", {"semigroup": PLANE, "module": {"residue_field": True}}, "--stages", "2")
        assert env["payload"]["injective"]["shift"] == [1, 1]

    def test_general_presentation(self, tmp_path, capsys):
        module = {
            "generators": [{"degree": [0, 0]}],
            "relations": [[{"c": "1/1", "gen": 0, "mon": [1, 0]}], [{"c": "1", "gen": 0, "mon": [0, 1]}]],
        }
        env = payload(tmp_path, capsys, "resolve", {"semigroup": PLANE, "module": module}, "--stages", "1")
        assert env["payload"]["irreducible"]["stages"] == [[{"face": [0, 1], "degree": [0, 0]}]]


class TestLocalCohomology:
    def test_top(self, tmp_path, capsys):
        env = payload(tmp_path, capsys, "localcoh", {"semigroup": PLANE, "module": {"ring": True}, "ideal": "maximal"}, "--index", "2")
        (entry,) = env["payload"]["cohomology"]
        nonzero = [h for h in entry["hilbert"] if h["dim"]]
        assert len(nonzero) == 1 and nonzero[0]["dim"] == 1
        cons = nonzero[0]["regions"][0]["constraints"]
        assert {"functional": [1, 0], "bound": "-1/1", "sense": "le"} in cons
        assert {"functional": [0, 1], "bound": "-1/1", "sense": "le"} in cons

    def test_zero_partitions(self, tmp_path, capsys):
        env = payload(tmp_path, capsys, "localcoh", {"semigroup": PLANE, "module": {"ring": True}, "ideal": {"monomials": [[1, 0]]}}, "--index", "0")
        assert all(h["dim"] == 0 for h in env["payload"]["cohomology"][0]["hilbert"])
        env = payload(tmp_path, capsys, "localcoh", {"semigroup": PLANE, "module": {"ring": True}, "ideal": "maximal"}, "--index", "3")
        assert all(h["dim"] == 0 for h in env["payload"]["cohomology"][0]["hilbert"])

    def test_range(self, tmp_path, capsys):
        env = payload(tmp_path, capsys, "localcoh", {"semigroup": PLANE, "module": {"ring": True}, "ideal": "maximal"}, "--range", "0..2")
        assert [e["index"] for e in env["payload"]["cohomology"]] == [0, 1, 2]

    def test_unsaturated_exit_4(self, tmp_path, capsys):
        problem = {"semigroup": {"generators": [[2], [3]]}, "module": {"ring": True}, "ideal": "maximal"}
        code, _, err = run(tmp_path, capsys, "localcoh", problem, "--index", "0")
        assert code == 4 and "NotSaturated" in err


class TestSectors:
    def test_worked_example(self, tmp_path, capsys):
        env = payload(tmp_path, capsys, "sectors", {"semigroup": EVEN, "summands": WORKED})
        sectors = env["payload"]["sectors"]
        a = next(k for k, s in enumerate(sectors) if s["index"] == [0, 1, 2])
        b = next(k for k, s in enumerate(sectors) if s["index"] == [1, 2])
        assert [a, b] not in env["payload"]["comparable"]
        assert sectors[a]["dim"] == 3 and sectors[b]["dim"] == 2
        assert env["relattice"] is not None

    def test_two_sector_poset(self, tmp_path, capsys):
        summands = [{"face": [0, 1], "degree": [0, 0]}, {"face": [], "degree": [0, 0]}]
        env = payload(tmp_path, capsys, "sectors", {"semigroup": PLANE, "summands": summands})
        idx = [s["index"] for s in env["payload"]["sectors"]]
        assert sorted(idx, key=len) == [[1], [0, 1]]
        off_diagonal = [p for p in env["payload"]["comparable"] if p[0] != p[1]]
        assert len(off_diagonal) == 1

    def test_whole_lattice(self, tmp_path, capsys):
        env = payload(tmp_path, capsys, "sectors", {"semigroup": PLANE, "summands": [{"face": [], "degree": [0, 0]}]})
        assert len(env["payload"]["sectors"]) == 1


class TestOracle:
    def test_top(self, tmp_path, capsys):
        problem = {"semigroup": PLANE, "module": {"ring": True}, "ideal": "maximal", "params": {"oracle_box": 3}}
        env = payload(tmp_path, capsys, "oracle", problem, "--index", "2")
        dims = env["payload"]["oracle"][0]["dims"]
        for key, d in dims.items():
            x, y = json.loads(key)
            assert d == (1 if x <= -1 and y <= -1 else 0)

    def test_torsion(self, tmp_path, capsys):
        problem = {"semigroup": PLANE, "module": {"monomials": [[2, 0], [1, 1]]}, "ideal": "maximal", "params": {"oracle_box": 3}}
        env = payload(tmp_path, capsys, "oracle", problem, "--index", "0")
        dims = env["payload"]["oracle"][0]["dims"]
        assert {k: v for k, v in dims.items() if v} == {"[1,0]": 1}


class TestPlot:
    def test_worked_example_svg(self, tmp_path, capsys):
        code, out, _ = run(tmp_path, capsys, "plot", {"semigroup": EVEN, "summands": WORKED})
        assert code == 0 and out.startswith("<svg") and "data-sector" in out

    def test_zero_partition_background_only(self, tmp_path, capsys):
        problem = {"semigroup": PLANE, "module": {"ring": True}, "ideal": "maximal"}
        code, out, _ = run(tmp_path, capsys, "plot", problem, "--index", "0")
        assert code == 0 and "data-sector" not in out

    def test_top_quadrant(self, tmp_path, capsys):
        problem = {"semigroup": PLANE, "module": {"ring": True}, "ideal": "maximal"}
        code, out, _ = run(tmp_path, capsys, "plot", problem, "--index", "2")
        assert code == 0 and out.count("data-sector") == 1 and out.count("<polygon") == 25

    def test_wrong_dimension_exit_6(self, tmp_path, capsys):
        problem = {"semigroup": {"generators": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}, "summands": [{"face": [0, 1, 2], "degree": [0, 0, 0]}]}
        code, _, _ = run(tmp_path, capsys, "plot", problem)
        assert code == 6


class TestEnvelope:
    def test_schema_errors_exit_2(self, tmp_path, capsys):
        assert run(tmp_path, capsys, "resolve", {"semigroup": PLANE})[0] == 2
        assert run(tmp_path, capsys, "resolve", {"semigroup": {"generators": [[1, 0], [0]]}, "module": {"ring": True}})[0] == 2
        assert run(tmp_path, capsys, "resolve", {"semigroup": PLANE, "module": {"ring": True}, "schema": 99})[0] == 2
        module = {"generators": [{"degree": [0, 0]}], "relations": [[{"c": "1", "gen": 3, "mon": [0, 0]}]]}
        assert run(tmp_path, capsys, "resolve", {"semigroup": PLANE, "module": module})[0] == 2
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert cli.main(["resolve", str(path)]) == 2

    def test_deterministic(self, tmp_path, capsys):
        problem = {"semigroup": EVEN, "summands": WORKED}
        first = run(tmp_path, capsys, "sectors", problem)[1]
        second = run(tmp_path, capsys, "sectors", problem)[1]
        assert first == second

    def test_round_trip_echo(self, tmp_path, capsys):
        problem = {"semigroup": PLANE, "module": {"monomials": [[1, 1]]}, "params": {"stages": 2}}
        env = payload(tmp_path, capsys, "resolve", problem)
        assert env["problem"] == problem
        assert env["engine_version"] and env["command"] == "resolve"
        assert "timing" not in env

    def test_flags_recorded(self, tmp_path, capsys):
        env = payload(tmp_path, capsys, "resolve", {"semigroup": PLANE, "module": {"ring": True}}, "--stages", "1", "--box", "8", "--timing")
        assert env["problem"]["params"] == {"stages": 1, "box": 8}
        assert env["timing"]["seconds"] >= 0

    def test_original_coordinates(self, tmp_path, capsys):
        env = payload(tmp_path, capsys, "resolve", {"semigroup": EVEN, "module": {"monomials": [[2, 0], [1, 1], [0, 2]]}}, "--stages", "1")
        assert env["relattice"] is not None
        assert env["payload"]["irreducible"]["stages"][0] == [{"face": [0, 1], "degree": [0, 0]}]

    def test_finite_field(self, tmp_path, capsys):
        env = payload(tmp_path, capsys, "resolve", {"semigroup": PLANE, "module": {"monomials": [[1, 1]]}}, "--field", "p:7")
        assert env["payload"]["irreducible"]["stages"][1] == [{"face": [0, 1], "degree": [0, 0]}]

    def test_text_and_out(self, tmp_path, capsys):
        out = tmp_path / "result.txt"
        code, stdout, _ = run(tmp_path, capsys, "resolve", {"semigroup": PLANE, "module": {"ring": True}}, "--format", "text", "--out", str(out))
        assert code == 0 and stdout == ""
        assert out.read_text().startswith("command: resolve")

    def test_console_script(self, tmp_path):
        exe = shutil.which("grcohom")
        cmd = [exe] if exe else [sys.executable, "-m", "grcohom"]
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"semigroup": PLANE, "module": {"ring": True}}))
        done = subprocess.run(cmd + ["resolve", str(path), "--stages", "1"], capture_output=True, text=True)
        assert done.returncode == 0 and json.loads(done.stdout)["command"] == "resolve"
