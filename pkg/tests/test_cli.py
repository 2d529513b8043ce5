import json
import math

import numpy as np
import pytest

from eofkit.cli import main
from eofkit.fileio import parse_config_text, read_state, state_to_dict, write_state
from eofkit.eof import ConfigError
from eofkit.qstate import maximally_mixed, product_vector, singlet
from eofkit.separability import tiles_upb_state


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def without_wall_time(payload):
    reports = payload if isinstance(payload, list) else [payload]
    for rep in reports:
        rep.pop("wall_time")
    return reports


def test_compute_singlet_file(tmp_path, capsys):
    path = tmp_path / "singlet.json"
    write_state(singlet().projector(), path)
    code, out, _ = run(capsys, "compute", path, "--restarts", 4)
    rep = json.loads(out)
    assert code == 0
    assert rep["eof_value"] == pytest.approx(math.log(2), abs=1e-6)
    assert rep["oracle"]["wootters_eof"] == pytest.approx(math.log(2), abs=1e-12)
    assert list(rep)[-1] == "wall_time"


def test_compute_mixed_file(tmp_path, capsys):
    path = tmp_path / "mixed.json"
    write_state(maximally_mixed((2, 2)), path)
    code, out, _ = run(capsys, "compute", path, "--restarts", 4, "--emit-witness")
    rep = json.loads(out)
    assert code == 0
    assert rep["eof_value"] <= 1e-6
    assert rep["separability"]["ppt"] is True
    assert len(rep["witness"]["weights"]) == rep["witness_size"]


def test_bad_trace_exits_2(tmp_path, capsys):
    doc = state_to_dict(maximally_mixed((2, 2)))
    doc["matrix"] = [[0.9 * re, im] for re, im in doc["matrix"]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, err = run(capsys, "compute", path)
    assert code == 2 and out == ""
    assert "TraceNotOne" in err


def test_missing_file_exits_2(tmp_path, capsys):
    assert run(capsys, "check", tmp_path / "nope.json")[0] == 2


def test_bad_config_exits_3(tmp_path, capsys):
    path = tmp_path / "s.json"
    write_state(singlet().projector(), path)
    assert run(capsys, "compute", path, "--restarts", 0)[0] == 3
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("restarts = 2\ncolour = blue\n")
    assert run(capsys, "compute", path, "--config", cfg)[0] == 3


def test_unknown_demo_exits_4(capsys):
    code, out, err = run(capsys, "demo", "nope")
    assert code == 4 and out == ""
    assert "unknown demo" in err


@pytest.mark.parametrize(
    "state, ppt, conclusive",
    [
        (singlet().projector(), False, True),
        (product_vector([1, 1j], [0.6, 0.8]).projector(), True, True),
        (tiles_upb_state(), True, False),
    ],
)
def test_check(tmp_path, capsys, state, ppt, conclusive):
    path = tmp_path / "s.json"
    write_state(state, path)
    code, out, _ = run(capsys, "check", path)
    verdict = json.loads(out)
    assert code == 0
    assert verdict["ppt"] is ppt and verdict["conclusive"] is conclusive


@pytest.mark.parametrize("name", ["singlet", "werner", "tiles", "random"])
def test_export_roundtrip(tmp_path, capsys, name):
    from eofkit.cli import named_state

    path = tmp_path / f"{name}.json"
    assert run(capsys, "export", name, path, "--p", 0.3, "--seed", 5)[0] == 0
    back = read_state(path)
    assert np.max(np.abs(back.matrix - named_state(name, p=0.3, seed=5).matrix)) <= 1e-15


def test_config_file_and_flag_override(tmp_path, capsys):
    text = "# search settings\nrestarts = 3\nseed: 11\nobjective_tolerance = 1e-9\n"
    assert parse_config_text(text) == {"restarts": 3, "seed": 11, "objective_tolerance": 1e-9}
    with pytest.raises(ConfigError):
        parse_config_text("restarts = many")
    cfg = tmp_path / "run.cfg"
    cfg.write_text(text)
    code, out, _ = run(capsys, "demo", "singlet", "--config", cfg, "--seed", 4)
    rep = json.loads(out)[0]
    assert code == 0
    assert rep["config"]["restarts"] == 3 and rep["config"]["seed"] == 4


def test_reports_are_deterministic(tmp_path, capsys):
    path = tmp_path / "r.json"
    write_state(tiles_upb_state(), path)
    first = run(capsys, "compute", path, "--restarts", 3, "--seed", 9)[1]
    second = run(capsys, "compute", path, "--restarts", 3, "--seed", 9)[1]
    assert json.dumps(without_wall_time(json.loads(first))) == json.dumps(without_wall_time(json.loads(second)))
