import json

import numpy as np
import pytest

from ppt_means.cli import main
from ppt_means.jsonio import block_from_json, block_to_json, matrix_from_json, matrix_to_json
from ppt_means import Block2x2, InvalidInput


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_json_roundtrip():
    a = np.array([[1.0, 2j], [3.0, 4.0]])
    assert np.array_equal(matrix_from_json(matrix_to_json(a)), a)
    assert "im" not in matrix_to_json(np.eye(2))
    rect = matrix_from_json(matrix_to_json(np.ones((2, 3))))
    assert rect.shape == (2, 3)
    blk = Block2x2(np.eye(2), a, 2 * np.eye(2))
    back = block_from_json(json.loads(json.dumps(block_to_json(blk))))
    assert np.array_equal(back.X, blk.X)


@pytest.mark.parametrize(
    "obj, field",
    [
        ({"re": [[1]]}, "matrix.n"),
        ({"n": 2, "re": [[1, 2]]}, "matrix.re"),
        ({"n": 1, "re": [["a"]]}, "matrix.re"),
        ({"n": 1, "re": [[1]], "im": [[None]]}, "matrix.im"),
        ({"n": 0, "re": []}, "matrix.n"),
        ({"n": 1}, "matrix.re"),
    ],
)
def test_json_errors_name_field(obj, field):
    with pytest.raises(InvalidInput, match=field.replace(".", r"\.")):
        matrix_from_json(obj)


def test_block_json_errors():
    with pytest.raises(InvalidInput, match=r"block\.X"):
        block_from_json({"A": {"n": 1, "re": [[1]]}, "B": {"n": 1, "re": [[1]]}})
    with pytest.raises(InvalidInput, match=r"block\.B\.re"):
        block_from_json({"A": {"n": 1, "re": [[1]]}, "B": {"n": 1, "re": 3}, "X": {"n": 1, "re": [[0]]}})


def test_classify_cli(tmp_path, capsys):
    path = _write(tmp_path, "t.json", {"n": 2, "re": [[0, 2], [1, 0]]})
    assert main(["classify", path]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["alpha"] == 0.5 and rec["beta"] == 2.0
    assert rec["is_semi_hyponormal"] is False


def test_classify_bad_input(tmp_path, capsys):
    path = _write(tmp_path, "t.json", {"n": 2, "re": [[0, 2], [1]]})
    assert main(["classify", path]) == 2
    assert "matrix.re" in capsys.readouterr().err
    bad = tmp_path / "x.json"
    bad.write_text("{not json")
    assert main(["classify", str(bad)]) == 2
    assert main(["classify", str(tmp_path / "missing.json")]) == 2


def test_check_cli(capsys):
    assert main(["check", "--id", "C7", "--n", "3", "--trials", "20", "--seed", "42"]) == 0
    r = json.loads(capsys.readouterr().out)
    assert r["check_id"] == "C7" and r["violations"] == []


def test_check_cli_violation_exit(tmp_path):
    out = tmp_path / "r.json"
    assert main(["check", "--id", "C21", "--n", "3", "--trials", "40", "--seed", "42", "--out", str(out)]) == 1
    assert json.loads(out.read_text())["violations"]


def test_usage_errors(capsys):
    assert main(["check", "--id", "NOPE"]) == 2
    assert main(["check", "--id", "C1", "--n", "0"]) == 2
    assert main(["check", "--id", "C1", "--t", "2"]) == 2
    assert main(["frobnicate"]) == 2
    assert main([]) == 2


def test_seed_env(monkeypatch, capsys):
    monkeypatch.setenv("PPT_MEANS_SEED", "17")
    assert main(["check", "--id", "C5", "--trials", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 17
    monkeypatch.setenv("PPT_MEANS_SEED", "seventeen")
    assert main(["check", "--id", "C5", "--trials", "2"]) == 2


def test_check_all_table_and_zero_trials(capsys):
    assert main(["check-all", "--trials", "0"]) == 0
    assert json.loads(capsys.readouterr().out) == []
    assert main(["check-all", "--trials", "2", "--n", "2", "--format", "table"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 25 and lines[1].startswith("C1 ")


def test_byte_stable(capsys):
    args = ["check", "--id", "C10", "--n", "2", "--trials", "5", "--seed", "3"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_decompose_cli(tmp_path, capsys):
    blk = {
        "A": {"n": 2, "re": [[2, 0], [0, 2]]},
        "B": {"n": 2, "re": [[2, 0], [0, 2]]},
        "X": {"n": 2, "re": [[1, 0.5], [0, 1]]},
    }
    assert main(["decompose", _write(tmp_path, "b.json", blk)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["two_term"]["residual"] <= 1e-9
    assert out["isometry"]["residual"] <= 1e-9
    blk["X"]["re"] = [[5, 0], [0, 0]]
    assert main(["decompose", _write(tmp_path, "c.json", blk)]) == 2
    assert "positive semidefinite" in capsys.readouterr().err


def test_decompose_non_ppt(tmp_path, capsys):
    half = 0.5
    blk = {
        "A": {"n": 2, "re": [[half, 0], [0, 0]]},
        "B": {"n": 2, "re": [[0, 0], [0, half]]},
        "X": {"n": 2, "re": [[0, 0], [half, 0]]},
    }
    assert main(["decompose", _write(tmp_path, "bell.json", blk)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ppt"]["is_ppt"] is False and out["isometry"] is None


def test_controls_cli(capsys):
    assert main(["controls"]) == 0
    assert json.loads(capsys.readouterr().out)["violations"] == []
