import json

import pytest

from torushodge import cli


def run(capsys, argv):
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_orbits_csv(capsys):
    code, out, _ = run(capsys, ["orbits", "cyclic3", "--box", "1"])
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln]
    assert lines[0] == "representative,finite,size"
    assert len(lines) == 12  # header + 11 orbits


def test_orbits_json_is_deterministic(capsys):
    _, out1, _ = run(capsys, ["orbits", "kt4", "--box", "1", "--json"])
    _, out2, _ = run(capsys, ["orbits", "kt4", "--box", "1", "--json"])
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["count"] == 15


def test_hodge_targets(capsys):
    code, out, _ = run(capsys, ["hodge", "kt4", "--target", "h21bc", "--d", "1", "--rho", "1"])
    assert code == 0 and out.startswith("h21_BC = 4")
    code, out, _ = run(capsys, ["hodge", "kt4", "--target", "h21bc", "--d", "1", "--rho", "0.5"])
    assert code == 0 and out.startswith("h21_BC = 2")
    code, out, _ = run(capsys, ["hodge", "kt4", "--target", "h11bc"])
    assert code == 0 and out.startswith("h11_BC = 3")


def test_hodge_json(capsys):
    code, out, _ = run(
        capsys, ["hodge", "kt4", "--target", "h12bc", "--d", "1", "--rho", "1", "--json"]
    )
    assert code == 0
    assert json.loads(out)["value"] == 4


def test_hodge_unknown_target_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["hodge", "kt4", "--target", "h99"])
    assert exc.value.code == 2


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2


def test_decompose_infinite_mode(capsys):
    code, out, _ = run(capsys, ["decompose", "kt4", "--mode", "0,0,1"])
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "ode"
    assert len(payload["matrix"]) == 2


def test_decompose_finite_mode(capsys):
    code, out, _ = run(capsys, ["decompose", "cyclic3", "--mode", "1,0,0"])
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "recurrence"
    assert payload["orbit_length"] == 3
    assert "transfer" in payload


def test_decompose_bad_mode_length(capsys):
    code, _, err = run(capsys, ["decompose", "kt4", "--mode", "1,2"])
    assert code == 1
    assert "components" in err


def test_frame_check_passes_builtin(capsys):
    for name in ("kt4", "cyclic3"):
        code, out, _ = run(capsys, ["frame-check", name])
        assert code == 0
        assert "FAIL" not in out
        assert out.count("PASS") == 6


def test_frame_check_names_corrupted_structure(capsys, tmp_path):
    bad = {
        "name": "kt4",
        "n": 3,
        "monodromy": [[1, 0, 0], [0, 1, 0], [0, 1, 1]],
        "complex_dim": 2,
        "structure": {"dphi1": [["1", [2, -2]]], "dphi2": [["1", [1, -1]]]},
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, _, err = run(capsys, ["frame-check", str(path)])
    assert code == 1
    assert "d^2" in err


def test_missing_config_path(capsys):
    code, _, err = run(capsys, ["orbits", "/nonexistent/config.json"])
    assert code == 1
    assert "cannot load config" in err


def test_modes_scan_cyclic3(capsys):
    code, out, _ = run(capsys, ["modes", "cyclic3", "--box", "1", "--K", "80"])
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln]
    assert lines[0] == "mode,classification,dimension,exponents"
    assert len(lines) == 12
    dims = {}
    for ln in lines[1:]:
        mode, classification, dim, _ = ln.split(",", 3)
        dims[mode] = (classification, dim)
    assert dims["0 0 0"] == ("finite/decoupled", "1")
    assert all(c.startswith("finite/") for c, _ in dims.values())
