import json

import numpy as np
import pytest

from prointerp.cli import main
from prointerp.matrix_kit import format_matrix_text, matrix_to_json
from prointerp.pro import ProRealization, eval_matrix


def write_json(path, m):
    path.write_text(json.dumps(matrix_to_json(np.asarray(m, dtype=float))))
    return str(path)


def write_text(path, m):
    path.write_text(format_matrix_text(np.asarray(m, dtype=float)))
    return str(path)


@pytest.fixture
def pair(tmp_path):
    a = write_json(tmp_path / "a.json", np.diag([1.0, 2.0]))
    b = write_text(tmp_path / "b.txt", np.diag([2.0, 3.0]))
    return a, b


def test_solve_exit_codes(tmp_path, pair):
    a, b = pair
    assert main(["solve", a, b]) == 0
    bad = write_json(tmp_path / "bad.json", np.diag([1.0, 3.0]))
    assert main(["solve", a, bad]) == 2
    low = write_json(tmp_path / "low.json", np.diag([2.0, 1.0]))
    assert main(["solve", a, low]) == 3
    rot = write_json(tmp_path / "rot.json", [[0.0, 1.0], [-1.0, 0.0]])
    eye = write_json(tmp_path / "eye.json", np.eye(2))
    assert main(["solve", rot, eye]) == 4
    noncomm = write_json(tmp_path / "nc.json", [[1.0, 1.0], [0.0, 1.0]])
    assert main(["solve", a, noncomm]) == 4


def test_solve_json_output(capsys, pair):
    a, b = pair
    assert main(["solve", a, b, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "solved"
    assert report["m"] == 2
    realization = ProRealization.from_json(report["realization"])
    np.testing.assert_allclose(
        eval_matrix(realization, np.diag([1.0, 2.0])), np.diag([2.0, 3.0]), atol=1e-8
    )


def test_solve_text_output_mentions_status_and_residuals(capsys, pair):
    a, b = pair
    main(["solve", a, b])
    out = capsys.readouterr().out
    assert "status: solved" in out
    assert "interpolation residual" in out
    assert "m: 2" in out


def test_solve_output_is_reproducible(capsys, pair):
    a, b = pair
    main(["solve", a, b, "--json"])
    first = capsys.readouterr().out
    main(["solve", a, b, "--json"])
    second = capsys.readouterr().out
    assert first == second


def test_hill_command(capsys, tmp_path, pair):
    a, b = pair
    assert main(["hill", a, b, "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["m"] == 2 and obj["m_max"] == 2
    assert obj["completely_positive"] is True
    w = np.array(obj["hill_eigenvalues"])
    assert (w > 0).all()

    bad = write_json(tmp_path / "bad.json", np.diag([1.0, 3.0]))
    assert main(["hill", a, bad, "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["completely_positive"] is False
    assert min(obj["hill_eigenvalues"]) < 0


def test_order_command(capsys, tmp_path):
    a = write_json(tmp_path / "a.json", np.diag([1.0, 2.0]))
    good = write_json(tmp_path / "good.json", np.diag([2.0, 3.0]))
    assert main(["order", a, good, "--json", "--trials", "200"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["violated"] is False and obj["trials"] == 200

    bad = write_json(tmp_path / "bad.json", np.diag([1.0, 3.0]))
    assert main(["order", a, bad, "--json", "--threads", "2"]) == 2
    obj = json.loads(capsys.readouterr().out)
    assert obj["violated"] is True
    assert obj["witness"] is not None


def test_eval_command(capsys, tmp_path):
    f = ProRealization.from_state_space(
        np.array([3.0, 3.0]), np.array([[0.0, np.sqrt(8.0)], [-np.sqrt(8.0), 0.0]])
    )
    fpath = tmp_path / "f.json"
    fpath.write_text(json.dumps(f.to_json()))
    point = write_json(tmp_path / "p.json", np.diag([1.0, 2.0]))
    assert main(["eval", str(fpath), point, "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    value = np.array(out["data"]).reshape(out["rows"], out["cols"])
    np.testing.assert_allclose(value, np.diag([2.0, 3.0]), atol=1e-10)


def test_verify_command(capsys, tmp_path, pair):
    a, b = pair
    f = ProRealization.from_state_space(
        np.array([3.0, 3.0]), np.array([[0.0, np.sqrt(8.0)], [-np.sqrt(8.0), 0.0]])
    )
    fpath = tmp_path / "f.json"
    fpath.write_text(json.dumps(f.to_json()))
    assert main(["verify", str(fpath), a, b, "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["ok"] is True and obj["residual"] < 1e-10

    off = write_json(tmp_path / "off.json", np.diag([2.0, 3.1]))
    assert main(["verify", str(fpath), a, off, "--json"]) == 2
    obj = json.loads(capsys.readouterr().out)
    assert obj["ok"] is False
    assert obj["residual"] == pytest.approx(0.1, rel=1e-6)
    # loosening the residual tolerance flips the verdict
    assert main(["verify", str(fpath), a, off, "--tol-residual", "0.5"]) == 0


def test_bicommutant_command(capsys, tmp_path):
    jordan = write_json(tmp_path / "j.json", [[1.0, 1.0], [0.0, 1.0]])
    assert main(["bicommutant", jordan, "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["n"] == 2 and obj["m_max"] == 2
    assert len(obj["basis"]) == 2


def test_tolerance_flags_reach_the_solver(tmp_path, pair):
    a, _ = pair
    bad = write_json(tmp_path / "bad.json", np.diag([1.0, 3.0]))
    # with a huge psd floor the negative eigenvalue is inside the ambiguous
    # band, so the solver reports numerical_failure instead of infeasible
    assert main(["solve", a, bad, "--tol-psd", "0.5"]) == 1


def test_io_failures_exit_1(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    ok = write_json(tmp_path / "ok.json", np.eye(2))
    assert main(["solve", missing, ok]) == 1
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    assert main(["solve", str(garbled), ok]) == 1
    err = capsys.readouterr().err
    assert err.strip() != ""


def test_text_matrix_input_round_trip(capsys, tmp_path):
    a = write_text(tmp_path / "a.txt", [[2.0]])
    b = write_text(tmp_path / "b.txt", [[3.0]])
    assert main(["solve", a, b, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "solved"
    assert report["realization"]["m"] == 1
