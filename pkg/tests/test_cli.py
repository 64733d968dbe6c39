import json
import subprocess
import sys

import pytest

from medianbv import io
from medianbv.cli import fmt, main
from medianbv.errors import InvalidInput
from medianbv.structures import Structure

TRIOD = {"kind": "tree", "n": 4, "edges": [[0, 3], [1, 3], [2, 3]], "labels": ["a", "b", "c", "m"]}


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return {
        "triod": write("triod.json", TRIOD),
        "f": write("f.json", {"values": [1, 0, 1, 1]}),
        "grid": write("grid.json", {"kind": "grid", "width": 2, "height": 3}),
        "chi": write("chi.json", {"values": [0, 1, 0, 1, 0, 1]}),
        "chain2": write("chain2.json", {"kind": "chain", "n": 2}),
        "chimap": write("chimap.json", {"map": [0, 1, 0, 1, 0, 1]}),
        "star": write("star.json", {"kind": "star", "n": 4}),
        "hubmap": write("hubmap.json", {"map": [1, 0, 0, 0]}),
        "indiscrete": write("ind.json", {"n": 2, "opens": [[], [0, 1]]}),
        "f01": write("f01.json", {"values": [0, 1]}),
        "one": write("one.json", {"kind": "chain", "n": 1}),
        "fs": write("fs.json", {"functions": [[0], [1], [0], [1], [0]], "range": [0, 1]}),
        "bad": write("bad.json", {"kind": "tree", "n": 3, "edges": [[0, 1]]}),
        "garbage": str(tmp_path / "garbage.json"),
        "write": write,
    }


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestVariationCommands:
    def test_var(self, files, capsys):
        assert run(capsys, "var", files["triod"], files["f"]) == (0, "1\n", "")

    def test_var_relaxed(self, files, capsys):
        code, out, _ = run(capsys, "var", files["triod"], files["f"], "--sigma", "a,b,c", "--relaxed")
        assert (code, out) == (0, "2\n")

    def test_var_not_subalgebra(self, files, capsys):
        code, _, err = run(capsys, "var", files["triod"], files["f"], "--sigma", "a", "b", "c")
        assert code == 2 and "not a subalgebra" in err and "[0, 1, 2]" in err

    def test_var_verbose(self, files, capsys):
        code, out, _ = run(capsys, "var", files["triod"], files["f"], "-v")
        assert out.splitlines()[1] == "witness: {a, b, c, m}"

    def test_grid_var(self, files, capsys):
        assert run(capsys, "var", files["grid"], files["chi"])[1] == "3\n"

    def test_linvar(self, files, capsys):
        assert run(capsys, "linvar", files["triod"], files["f"])[1] == "1\n"

    def test_restricted(self, files, capsys):
        assert run(capsys, "restricted-var", files["triod"], files["f"], "--in", "b", "m")[1] == "1\n"

    def test_limit_probe(self, capsys):
        code, out, _ = run(capsys, "limit-probe", "star", "hub", "--max", "5")
        assert code == 0
        assert out.splitlines()[-2:] == ["strictly increasing: yes", "trend: diverging"]


class TestStructureCommands:
    def test_check_grid(self, files, capsys):
        code, out, _ = run(capsys, "check", files["grid"])
        assert code == 0
        assert "pretree axioms: FAIL" in out and "median pretree: no" in out

    def test_median_interval_hull_span(self, files, capsys):
        assert run(capsys, "median", files["triod"], "a", "b", "c")[1] == "m\n"
        assert run(capsys, "interval", files["triod"], "a", "b")[1] == "{a, b, m}\n"
        assert run(capsys, "hull", files["triod"], "a", "b", "c")[1] == "{a, b, c, m}\n"
        assert run(capsys, "span", files["grid"], "0,0", "2,1")[1] == "{0,0, 2,1}\n"

    def test_gaps(self, files, capsys):
        assert run(capsys, "gaps", files["triod"])[1] == "a m\nb m\nc m\n"
        assert run(capsys, "gaps", files["triod"], "a", "b")[1] == "a b\n"

    def test_monotone(self, files, capsys):
        assert run(capsys, "monotone", files["grid"], files["chain2"], files["chimap"])[:2] == (0, "monotone\n")
        assert run(capsys, "monotone", files["star"], files["chain2"], files["hubmap"])[:2] == (1, "not monotone\n")

    def test_shadow_and_topology(self, files, capsys):
        assert run(capsys, "shadow", files["star"], "0", "1")[1] == "{0, 2, 3}\n"
        out = run(capsys, "topology", files["star"])[1].splitlines()
        assert len(out) == 16 and out[0] == "[]" and out[-1] == "[0, 1, 2, 3]"


class TestTopologyCommands:
    def test_fragmented(self, files, capsys):
        assert run(capsys, "fragmented", files["indiscrete"], files["f01"])[:2] == (1, "not fragmented\n")
        assert run(capsys, "fragmented", files["triod"], files["f"])[:2] == (0, "fragmented\n")

    def test_witness(self, files, capsys):
        out = run(capsys, "witness", files["indiscrete"], files["f01"])[1]
        assert out == "Y: {0, 1}\nalpha: 0.25\nbeta: 0.75\n"
        assert run(capsys, "witness", files["triod"], files["f"])[1] == "none\n"


class TestHelly:
    def test_finite(self, files, capsys):
        out = run(capsys, "helly", files["one"], files["fs"], "--eps", "0.5")[1]
        assert out == "indices: 0 2 4\neps: 0.5\nlimit: 0.25\n"

    def test_diagonal(self, files, capsys):
        code, out, _ = run(capsys, "helly", files["one"], files["fs"], "--eps", "0.5", "0.25", "--depth", "2")
        assert code == 0 and out.startswith("indices: 0 2\n")

    def test_exhausted(self, files, capsys):
        code, _, err = run(capsys, "helly", files["one"], files["fs"], "--eps", "0.5", "0.25", "0.1", "0.05", "--depth", "4")
        assert code == 2 and "final class" in err


class TestErrors:
    def test_missing_file(self, files, capsys):
        assert run(capsys, "var", files["garbage"], files["f"])[0] == 2

    def test_malformed_json(self, files, capsys):
        with open(files["garbage"], "w") as fh:
            fh.write("{not json")
        code, _, err = run(capsys, "check", files["garbage"])
        assert code == 2 and "malformed JSON" in err

    def test_invalid_structure(self, files, capsys):
        assert run(capsys, "check", files["bad"])[0] == 2

    def test_unknown_point(self, files, capsys):
        assert run(capsys, "median", files["triod"], "a", "b", "z")[0] == 2

    def test_size_cap(self, files, capsys, monkeypatch):
        monkeypatch.setenv("MEDIAN_BV_SIZE_CAPS", "shadow=3")
        code, _, err = run(capsys, "topology", files["triod"])
        assert code == 2 and "too large for exhaustive check" in err

    def test_wrong_length_function(self, files, capsys):
        assert run(capsys, "var", files["grid"], files["f"])[0] == 2

    def test_argparse_errors_exit_2(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["var"])
        assert err.value.code == 2


class TestProptest:
    def test_suite_passes(self, capsys):
        code, out, _ = run(capsys, "proptest", "--suite", "fixtures", "--seed", "3", "--trials", "5")
        assert code == 0 and out.splitlines()[-1].endswith("properties passed")

    def test_unknown_suite(self, capsys):
        assert run(capsys, "proptest", "--suite", "nope")[0] == 2

    def test_deterministic(self, capsys):
        a = run(capsys, "proptest", "--suite", "inequalities", "--seed", "1", "--trials", "10")
        b = run(capsys, "proptest", "--suite", "inequalities", "--seed", "1", "--trials", "10")
        assert a == b


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "medianbv", "var", files["triod"], files["f"]],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout == "1\n"


def test_float_format():
    assert fmt(1 / 3) == "0.333333333"
    assert fmt(2.0) == "2"
    assert fmt(1 - 2.0 ** -11) == "0.999511719"


class TestIO:
    @pytest.mark.parametrize("s", [
        Structure.chain(3), Structure.star(4), Structure.grid(2, 3),
        Structure.tree(4, [(0, 3), (1, 3), (2, 3)], labels="abcm"), Structure.chain(2).to_table(),
    ])
    def test_round_trip(self, s):
        back = io.structure_from_dict(json.loads(json.dumps(io.structure_to_dict(s))))
        assert back.kind == s.kind and (back.median_array == s.median_array).all()
        assert back.labels == s.labels

    def test_points(self):
        g = Structure.grid(2, 3)
        assert io.parse_points(g, ["2,1", "0"]) == [5, 0]
        t = io.structure_from_dict(TRIOD)
        assert io.parse_points(t, ["a,b", "m", "1"]) == [0, 1, 3, 1]
        with pytest.raises(InvalidInput):
            io.parse_point(t, "1,2")
        with pytest.raises(InvalidInput):
            io.parse_point(g, "5,5")

    def test_bad_documents(self):
        with pytest.raises(InvalidInput):
            io.structure_from_dict({"kind": "blob", "n": 2})
        with pytest.raises(InvalidInput):
            io.structure_from_dict({"kind": "chain", "n": "2"})
        with pytest.raises(InvalidInput):
            io.structure_from_dict({"kind": "grid", "width": 2, "height": 2, "n": 5})
        with pytest.raises(InvalidInput):
            io.function_from_dict({"values": [1, "x"]})
        with pytest.raises(InvalidInput):
            io.function_from_dict({"values": [1], "range": [0]})
        with pytest.raises(InvalidInput):
            io.topology_from_dict({"n": 2, "opens": [[], [0, 5]]})
        with pytest.raises(InvalidInput):
            io.functions_from_dict({"functions": []})

    def test_function_range(self):
        f = io.function_from_dict({"values": [0.5, "0.25"], "range": [0, 1]})
        assert f.values == (0.5, 0.25) and f.range == (0.0, 1.0)
