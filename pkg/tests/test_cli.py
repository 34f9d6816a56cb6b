import json
import shutil
import subprocess
import sys

import pytest

from sheafrig import __version__
from sheafrig.cli import main
from sheafrig.graphs import Multigraph, complete_graph

from conftest import triangle


def dump(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def files(tmp_path):
    c4 = Multigraph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    return {
        "tri": dump(tmp_path / "tri.json", triangle().to_json()),
        "k4": dump(tmp_path / "k4.json", complete_graph(4).to_json()),
        "c4": dump(tmp_path / "c4.json", c4.to_json()),
        "fw": dump(tmp_path / "fw.json", {"graph": triangle().to_json(), "dim": 2,
                                          "positions": {"0": [0, 0], "1": [4, 0], "2": [1, 3]}}),
        "k3equal": dump(tmp_path / "k3.json", {"graph": triangle().to_json(), "n": 3,
                                                "subspaces": {str(v): [[1, 0, 0]] for v in range(3)}}),
        "dir": tmp_path,
    }


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["-o", str(out)])
    return code, (json.loads(out.read_text()) if code == 0 and out.exists() else None)


def test_analyze_framework(files):
    code, rep = run(["analyze", "--framework", files["fw"], "--model", "euclidean", "--d", "2"], files["dir"])
    assert code == 0
    r = rep["result"]
    assert (r["h0"], r["h1"], r["minimally_rigid"]) == (3, 0, True)
    assert rep["version"] == __version__ and len(rep["config_hash"]) == 16


def test_analyze_spec(files):
    code, rep = run(["analyze", "--spec", files["k3equal"]], files["dir"])
    assert code == 0 and rep["result"]["h0"] == 2


def test_sparsity(files):
    code, rep = run(["sparsity", "--graph", files["k4"], "--d", "2", "--l", "3"], files["dir"])
    assert code == 0 and rep["result"]["sparse"] is False and sorted(rep["result"]["witness"]) == [0, 1, 2, 3]
    code, brute = run(["sparsity", "--graph", files["k4"], "--d", "2", "--l", "3", "--brute"], files["dir"], "b.json")
    assert brute["result"]["sparse"] is False


def test_maintheorem(files):
    code, rep = run(["maintheorem", "--graph", files["c4"], "--n", "3", "--trials", "20", "--seed", "7"], files["dir"])
    assert code == 0 and rep["result"]["agrees"] is True and rep["seed"] == 7


def test_generate(files):
    code, rep = run(["generate", "--n", "4", "--vertices", "5", "--seed", "1"], files["dir"])
    assert code == 0
    assert len(rep["result"]["graph"]["edges"]) == 11 and len(rep["result"]["moves"]) == 3


def test_extend_graph_and_sheaf(files, tmp_path):
    moves = dump(tmp_path / "moves.json", [{"d": 2, "k": 0, "deleted_edges": [], "new_vertex": 3,
                                            "attach_vertices": [0, 1]}])
    code, rep = run(["extend", "--graph", files["tri"], "--moves", moves], tmp_path)
    assert code == 0 and len(rep["result"]["graph"]["edges"]) == 5
    code, ind = run(["independent", "--graph", files["tri"], "--n", "3", "--seed", "2"], tmp_path, "ind.json")
    assert code == 0 and ind["result"]["found"]
    spec = dump(tmp_path / "spec.json", ind["result"]["spec"])
    code, ext = run(["extend", "--spec", spec, "--moves", moves, "--seed", "3"], tmp_path, "ext.json")
    assert code == 0 and ext["result"]["after"]["h1"] == 0
    assert main(["extend", "--spec", spec, "--moves", moves]) == 2  # seed required


def test_parallel(files):
    code, rep = run(["parallel", "--graph", files["tri"], "--n", "3", "--seed", "1"], files["dir"])
    assert code == 0 and rep["result"]["agrees"] is True


def test_dot(files, capsys):
    assert main(["dot", "--graph", files["tri"], "--incidence"]) == 0
    assert capsys.readouterr().out.count("--") == 6


def test_reports_are_byte_identical(files, tmp_path):
    argv = ["maintheorem", "--graph", files["c4"], "--n", "3", "--trials", "5", "--seed", "11"]
    main(argv + ["-o", str(tmp_path / "a.json")])
    main(argv + ["-o", str(tmp_path / "b.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_config_hash_ignores_location(files, tmp_path):
    copy = tmp_path / "sub"
    copy.mkdir()
    other = shutil.copy(files["c4"], copy / "renamed.json")
    _, a = run(["sparsity", "--graph", files["c4"], "--d", "2", "--l", "3"], tmp_path, "a.json")
    _, b = run(["sparsity", "--graph", str(other), "--d", "2", "--l", "3"], tmp_path, "b.json")
    _, c = run(["sparsity", "--graph", files["c4"], "--d", "2", "--l", "2"], tmp_path, "c.json")
    assert a["config_hash"] == b["config_hash"] != c["config_hash"]


def test_exit_codes(files, tmp_path):
    assert main(["analyze", "--spec", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["sparsity", "--graph", str(bad), "--d", "2", "--l", "3"]) == 2
    assert main(["sparsity", "--graph", files["tri"], "--d", "2", "--l", "9"]) == 2
    wrong = dump(tmp_path / "wrong.json", {"edges": [[0, 5]], "vertices": [0, 1]})
    assert main(["sparsity", "--graph", wrong, "--d", "2", "--l", "3"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--n", "3"])
    assert exc.value.code == 2


def test_console_script(files):
    exe = shutil.which("sheafrig")
    cmd = [exe] if exe else [sys.executable, "-m", "sheafrig.cli"]
    proc = subprocess.run(cmd + ["sparsity", "--graph", files["tri"], "--d", "2", "--l", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["tight"] is True
