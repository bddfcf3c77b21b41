import json

import pytest

from bvtn.bd_algebra import expand
from bvtn.bv_core import compute_bd, validate_nodes
from bvtn.cli import run


@pytest.fixture
def nodes_file(tmp_path):
    path = tmp_path / "nodes.txt"
    path.write_text("0.25 0.5\n")
    return str(path)


def test_bd_text(nodes_file, capsys):
    assert run(["bd", "--nodes", nodes_file, "--degree", "1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("M =")
    assert "0.75" in out and "0.333333333333333" in out and "0.666666666666667" in out


def test_bd_json_round_trip(nodes_file, tmp_path, capsys):
    assert run(["bd", "--nodes", nodes_file, "--degree", "1", "--format", "json"]) == 0
    bd_path = tmp_path / "bd.json"
    bd_path.write_text(capsys.readouterr().out)

    assert run(["expand", "--bd", str(bd_path), "--format", "json"]) == 0
    rebuilt = json.loads(capsys.readouterr().out)["A"]
    assert rebuilt == expand(compute_bd(validate_nodes([0.25, 0.5]), 1)).tolist()


def test_solve_partition_of_unity(nodes_file, capsys):
    assert run(["solve", "--nodes", nodes_file, "--degree", "1", "--rhs", "1 1"]) == 0
    assert capsys.readouterr().out.strip() == "1 1"


def test_solve_rhs_file(nodes_file, tmp_path, capsys):
    rhs = tmp_path / "b.txt"
    rhs.write_text("1\n0\n")
    assert run(["solve", "--nodes", nodes_file, "--rhs-file", str(rhs), "--format", "json"]) == 0
    x = json.loads(capsys.readouterr().out)["x"]
    assert x == pytest.approx([2.0, -2.0], rel=1e-14)


def test_eig_json(nodes_file, capsys):
    assert run(["eig", "--nodes", nodes_file, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["values"] == pytest.approx([1.0, 0.25], rel=1e-15)
    assert payload["stabilized"] is True
    assert payload["achieved_bits"] >= 106


def test_svd_text_reports_bits(nodes_file, capsys):
    assert run(["svd", "--nodes", nodes_file, "--start-bits", "64"]) == 0
    assert "achieved_bits =" in capsys.readouterr().out


def test_lsq_text(tmp_path, capsys):
    path = tmp_path / "nodes.txt"
    path.write_text("1/4 1/2 3/4")
    assert run(["lsq", "--nodes", str(path), "--degree", "1", "--rhs", "1 0 0"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "c = 1.33333333333333 -0.666666666666667"
    assert out[1] == "r = 0.166666666666667 -0.333333333333333 0.166666666666667"
    assert out[2] == "||r||_2 = 0.408248290463863"


def test_qr_json(nodes_file, capsys):
    assert run(["qr", "--nodes", nodes_file, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["q"]) == 2 and len(payload["r"]) == 2


def test_cond(nodes_file, capsys):
    assert run(["cond", "--nodes", nodes_file, "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["kappa2"] == pytest.approx(4.2656, rel=1e-4)


def test_library_error_exits_one(tmp_path):
    path = tmp_path / "nodes.txt"
    path.write_text("0.5 0.25")
    assert run(["bd", "--nodes", str(path)]) == 1


def test_rectangular_solve_exits_one(tmp_path):
    path = tmp_path / "nodes.txt"
    path.write_text("0.25 0.5 0.75")
    assert run(["solve", "--nodes", str(path), "--degree", "1", "--rhs", "1 1 1"]) == 1


def test_precision_exhausted_exits_one(nodes_file):
    assert run(["eig", "--nodes", nodes_file, "--start-bits", "106", "--max-bits", "106"]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["bd", "--nodes", "does-not-exist.txt"],
        ["solve", "--nodes", "NODES", "--rhs", "1 x"],
        ["solve", "--nodes", "NODES"],
        ["eig", "--nodes", "NODES", "--start-bits", "8"],
        ["bd", "--nodes", "NODES", "--degree", "-1"],
        ["bd", "--nodes", "NODES", "--format", "xml"],
        ["frobnicate"],
    ],
)
def test_malformed_input_exits_two(argv, nodes_file):
    argv = [nodes_file if a == "NODES" else a for a in argv]
    assert run(argv) == 2


def test_bad_node_token(tmp_path):
    path = tmp_path / "nodes.txt"
    path.write_text("0.25 half")
    assert run(["bd", "--nodes", str(path)]) == 2


def test_env_max_bits(nodes_file, monkeypatch):
    monkeypatch.setenv("BVTN_MAX_BITS", "106")
    assert run(["eig", "--nodes", nodes_file]) == 1
