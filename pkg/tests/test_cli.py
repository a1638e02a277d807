import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from syncgames import cli
from syncgames import games as G
from syncgames import io as sio
from syncgames import strategies as S


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def as_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


# -- io ----------------------------------------------------------------------


def test_bundled_files_present():
    names = sio.bundled_names()
    for n in ("chsh.json", "example67.json", "cycle5_nonsym.json", "c5.json", "k5.json", "seyed2.json"):
        assert n in names


@pytest.mark.parametrize("obj", [
    G.example67_game(),
    G.cycle_xor_game(5, 0.9),
])
def test_xor_roundtrip(obj):
    back = sio.parse_xor(json.loads(sio.dumps(sio.xor_to_json(obj))))
    assert np.array_equal(back.f, obj.f) and np.allclose(back.prior.pi, obj.prior.pi)


def test_game_and_graph_roundtrip():
    inst = G.seyed_game(2)
    back = sio.parse_game(json.loads(sio.dumps(sio.game_to_json(inst))))
    assert back.game == inst.game
    g = G.complete_graph(4)
    assert sio.parse_graph(sio.graph_to_json(g)) == g


def test_game_without_prior_is_uniform():
    obj = {"n_a": 1, "n_b": 2, "k_a": 2, "k_b": 2, "win": [[0, 1, 0, 0]]}
    inst = sio.parse_game(obj)
    assert np.allclose(inst.prior.pi, 0.5)
    assert inst.game.winning_set() == [(0, 1, 0, 0)]


def test_pvm_roundtrip_complex():
    fam = S.random_pvm(np.random.default_rng(0), 2, 2, 3)
    back = sio.parse_pvm(json.loads(sio.dumps(sio.pvm_to_json(fam))))
    assert np.allclose(back.e, fam.e)


@pytest.mark.parametrize("obj", [
    [],
    {"n": 2},
    {"n": 2, "f": [[0, 1]], "pi": [[0.5, 0.5]]},
    {"n": "2", "f": [[0]], "pi": [[1]]},
])
def test_parse_errors(obj):
    with pytest.raises(sio.ParseError):
        sio.parse_xor(obj)


def test_graph_parse_errors():
    with pytest.raises(sio.ParseError):
        sio.parse_graph({"n": 3, "edges": [[0, 1, 2]]})
    with pytest.raises(ValueError):
        sio.parse_graph({"n": 3, "edges": [[0, 1], [1, 0]]})


# -- commands ----------------------------------------------------------------


def test_classical_chsh_sync(capsys):
    code, out = as_json(capsys, "classical", "chsh.json", "--sync")
    assert code == 0 and out["sync_local_value"] == 0.75


@pytest.mark.parametrize("sync,expected", [(True, 0.75), (False, 1.0)])
def test_classical_seyed(capsys, sync, expected):
    args = ["classical", "seyed2.json"] + (["--sync"] if sync else [])
    code, out = as_json(capsys, *args)
    assert code == 0
    assert out["sync_local_value" if sync else "local_value"] == expected


def test_classical_cap(capsys):
    code, _, err = run(capsys, "classical", "seyed2.json", "--sync", "--cap", "10")
    assert code == cli.EXIT_CAP and "cap" in err


@pytest.mark.parametrize("name,key,expected", [
    ("example67.json", "bias_sync", 4 / 7),
    ("cycle5_nonsym.json", "omega", 0.975528258),
    ("cycle5_nonsym.json", "omega_sync", 0.952254249),
    ("chsh.json", "omega", 0.853553391),
    ("chsh.json", "omega_sync", 0.75),
])
def test_xor_command(capsys, name, key, expected):
    code, out = as_json(capsys, "xor", name)
    assert code == 0 and out["certified"]
    assert out[key] == pytest.approx(expected, abs=1e-6)
    assert out["omega_lower"] <= out["omega_upper"] + 1e-12


def test_xor_uncertified_exit_code(capsys, tmp_path):
    path = tmp_path / "c11.json"
    path.write_text(sio.dumps(sio.xor_to_json(G.cycle_xor_game(11))))
    code, out, err = run(capsys, "xor", str(path), "--tol-gap", "-1", "--format", "json")
    assert code == cli.EXIT_UNCERTIFIED
    res = json.loads(out)
    assert res["certified"] is False
    assert res["omega_lower"] <= res["omega_upper"]
    assert "warning" in err


def test_cut_commands(capsys):
    code, out = as_json(capsys, "cut", "c5.json", "--c", "2")
    assert code == 0 and out["cut"] == 4
    code, out = as_json(capsys, "cut", "c5.json", "--c", "2", "--quantum")
    assert out["cut_q"] == pytest.approx(4.5225425, abs=1e-6)
    code, out = as_json(capsys, "cut", "k5.json", "--c", "2", "--quantum")
    assert out["cut_q"] == pytest.approx(6.25, abs=1e-6)
    assert out["graph_corr_half"] == pytest.approx(3.75, abs=1e-6)


def test_cut_quantum_needs_two_colours(capsys):
    code, _, _ = run(capsys, "cut", "k5.json", "--c", "3", "--quantum")
    assert code == cli.EXIT_UNSUPPORTED


def test_cycle_table_csv(capsys):
    code, out, _ = run(capsys, "cycle-table", "--n-max", "7", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["n"] for r in rows] == ["3", "5", "7"]
    assert float(rows[0]["omega_sync_closed"]) == 0.875
    for r in rows:
        assert float(r["omega_delta"]) <= 1e-6 and float(r["omega_sync_delta"]) <= 1e-6
    # 17 significant digits
    assert len(rows[1]["omega_sdp"].replace("0.", "", 1)) >= 15


@pytest.mark.parametrize("pvm,code,field", [
    ("chsh_pvm_constant.json", 0, None),
    ("chsh_pvm_45deg.json", 1, "first_order_residual"),
])
def test_check_pvm_chsh(capsys, pvm, code, field):
    rc, out = as_json(capsys, "check-pvm", "chsh.json", pvm)
    assert rc == code
    if field:
        assert out[field] == pytest.approx(0.5)


def test_check_pvm_perfect_coloring(capsys):
    rc, out = as_json(capsys, "check-pvm", "c6_coloring.json", "c6_pvm_coloring.json")
    assert rc == 0 and out["povm_conditions"] is True


def test_check_pvm_invalid_family(capsys, tmp_path):
    bad = {"n": 1, "k": 2, "m": 1, "matrices": [[[[[0.5, 0.0]]], [[[0.5, 0.0]]]]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    rc, _, err = run(capsys, "check-pvm", "chsh.json", str(path))
    assert rc == cli.EXIT_INVALID and "projection" in err


def test_parse_error_exit_codes(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert run(capsys, "xor", str(path))[0] == cli.EXIT_PARSE
    assert run(capsys, "xor", "does-not-exist.json")[0] == cli.EXIT_PARSE
    assert run(capsys, "nonsense")[0] == cli.EXIT_PARSE


def test_unnormalised_prior_is_invalid_object(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text(json.dumps({"n": 1, "f": [[0]], "pi": [[0.5]]}))
    assert run(capsys, "xor", str(path))[0] == cli.EXIT_INVALID


def test_crosscheck_kn(capsys):
    rc, out = as_json(capsys, "crosscheck-kn", "--n", "5", "--c", "3")
    assert rc == 0 and out["discrepancy"] is True and out["brute_force"] == pytest.approx(0.8)


def test_generate_roundtrip(capsys, tmp_path):
    rc, out, _ = run(capsys, "generate", "cycle-xor", "--n", "7")
    path = tmp_path / "c7.json"
    path.write_text(out)
    rc, res = as_json(capsys, "xor", str(path))
    assert res["omega_sync"] == pytest.approx(0.5 + 0.5 * np.cos(np.pi / 14) ** 2, abs=1e-6)


def test_quiet_prints_nothing(capsys):
    code, out, err = run(capsys, "xor", "chsh.json", "--quiet")
    assert code == 0 and out == "" and err == ""


@pytest.mark.parametrize("fmt", ["table", "json", "csv"])
def test_output_is_deterministic(capsys, fmt):
    first = run(capsys, "xor", "example67.json", "--format", fmt)[1]
    second = run(capsys, "xor", "example67.json", "--format", fmt)[1]
    assert first == second


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "syncgames", "classical", "chsh.json", "--sync"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "0.75" in res.stdout
