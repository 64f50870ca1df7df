from __future__ import annotations

import json
import subprocess
import sys

import pytest

from uflpmc import io
from uflpmc.battery import corpus
from uflpmc.cli import main


def write(path, doc) -> str:
    path.write_text(json.dumps(doc))
    return str(path)


THREE = {
    "n": 3,
    "costs": [2, 1, 0],
    "profits": [[1, 3, 5], [2, 3, 4]],
    "facility_matroids": [],
    "client_matroids": [{"kind": "uniform", "ground": [3], "rank": 1}],
}


def test_solve_brute(tmp_path, capsys):
    inst = write(tmp_path / "i.json", THREE)
    assert main(["solve", inst, "--route", "brute"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "profit 3"
    sol = json.loads(out.split("\n", 1)[1])
    assert sol["profit"] == 3 and sol["C"] == [3]


@pytest.mark.parametrize("route", ["auto", "uniform", "linear"])
def test_solve_routes_and_verify(tmp_path, capsys, route):
    inst = write(tmp_path / "i.json", THREE)
    out = str(tmp_path / "s.json")
    assert main(["solve", inst, "--route", route, "-o", out]) == 0
    assert "profit 3" in capsys.readouterr().out
    assert main(["verify", inst, out]) == 0
    assert "ok: profit 3" in capsys.readouterr().out


def test_tampered_solution_rejected(tmp_path, capsys):
    inst = write(tmp_path / "i.json", THREE)
    sol = write(tmp_path / "s.json", {"A": [1], "C": [3], "profit": 99, "assignment": [[3, 1]]})
    assert main(["verify", inst, sol]) != 0
    assert "profit mismatch" in capsys.readouterr().out


def test_stc_generate_then_solve(tmp_path, capsys):
    path = str(tmp_path / "stc.json")
    assert main(["generate", "stc", "--edges", "a-b,b-c", "--community", "a,b,c", "--r", "1", "-o", path]) == 0
    assert main(["solve", path]) == 1
    out = capsys.readouterr().out
    assert "no" in out.splitlines()


def test_stc_without_community_says_yes(tmp_path, capsys):
    path = str(tmp_path / "stc.json")
    assert main(["generate", "stc", "--edges", "a-b,b-c", "--r", "1", "-o", path]) == 0
    assert main(["solve", path]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "yes" in lines and any(l.startswith("weak edges:") for l in lines)


def test_generate_maxcover_and_clique(tmp_path, capsys):
    mc = str(tmp_path / "mc.json")
    assert main(["generate", "maxcover", "--elements", "1,2,3", "--sets", "1,2;2,3", "--budget", "1",
                 "--client-rank", "2", "-o", mc]) == 0
    assert main(["solve", mc]) == 0
    assert "profit 2" in capsys.readouterr().out
    cq = str(tmp_path / "cq.json")
    assert main(["generate", "clique", "--edges", "a-b,b-c,a-c", "--k", "3", "-o", cq]) == 0
    assert main(["solve", cq]) == 0
    captured = capsys.readouterr()
    assert "profit 3" in captured.out and "brute force" in captured.err


def test_input_error_exit_code(tmp_path, capsys):
    bad = write(tmp_path / "bad.json", {"n": 3, "costs": [0, 0], "profits": []})
    assert main(["solve", bad]) == 2
    missing = write(tmp_path / "m.json", {"n": 1, "costs": [-1], "profits": []})
    assert main(["solve", missing]) == 2
    assert "input error" in capsys.readouterr().err


def test_missing_client_bound(tmp_path, capsys):
    inst = write(tmp_path / "i.json", {"n": 2, "costs": [0, 0], "profits": [[1, 2, 3]]})
    assert main(["solve", inst]) == 2
    assert main(["solve", inst, "--max-clients", "1"]) == 0
    assert "profit 3" in capsys.readouterr().out


def test_spmc_solve(tmp_path, capsys):
    doc = {
        "universe": 4,
        "matroids": [{"kind": "uniform", "ground": [1, 2, 3, 4], "rank": 2}],
        "family": [{"set": [1], "weight": 3}, {"set": [2], "weight": 1}, {"set": [3, 4], "weight": 5}],
        "alpha": 2,
    }
    assert main(["spmc", "solve", write(tmp_path / "p.json", doc)]) == 0
    assert "total weight 4" in capsys.readouterr().out
    doc["alpha"] = 3
    assert main(["spmc", "solve", write(tmp_path / "q.json", doc)]) == 1
    assert "infeasible" in capsys.readouterr().out


def test_verify_rep(tmp_path, capsys):
    doc = {
        "matroids": [{"kind": "uniform", "ground": [1, 2, 3], "rank": 2}],
        "family": [{"set": [1], "weight": 1}, {"set": [2], "weight": 2}, {"set": [3], "weight": 3}],
        "candidate": [{"set": [3], "weight": 3}, {"set": [2], "weight": 2}],
        "q": 1,
    }
    assert main(["verify-rep", write(tmp_path / "r.json", doc)]) == 0
    doc["candidate"] = []
    assert main(["verify-rep", write(tmp_path / "e.json", doc)]) == 1
    assert "fail" in capsys.readouterr().out


def test_solve_is_deterministic(tmp_path, capsys):
    name, inst = corpus(0)[3]
    path = tmp_path / f"{name}.json"
    path.write_text(io.dumps(io.instance_to_json(inst)))
    outs = []
    for i in range(2):
        out = tmp_path / f"s{i}.json"
        main(["solve", str(path), "--seed", "7", "-o", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "uflpmc", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "selfcheck" in proc.stdout


def test_selfcheck(capsys):
    assert main(["selfcheck"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 9


def test_stc_from_json_file(tmp_path, capsys):
    graph = write(tmp_path / "g.json", {"edges": [["a", "b"], ["b", "c"]], "communities": [["a", "b", "c"]], "r": 1})
    out = str(tmp_path / "stc.json")
    assert main(["generate", "stc", "--input", graph, "-o", out]) == 0
    assert main(["solve", out]) == 1
    assert main(["generate", "stc", "--edges", "a-b"]) == 2
