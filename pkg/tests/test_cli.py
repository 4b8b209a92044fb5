import json
import subprocess
import sys

import numpy as np
import pytest

from gelspec import data_path
from gelspec.cli import COMMANDS, RunConfig, main, render, run
from gelspec.errors import SchemaError
from gelspec.linalg import matrix_to_json


def cli(capsys, *args):
    status = main(list(args))
    out = capsys.readouterr().out
    return status, out


def report(capsys, *args):
    status, out = cli(capsys, *args)
    return status, json.loads(out)


def test_sections_ks_on_mermin_peres(capsys):
    status, rep = report(capsys, "sections", "ks", "--input", data_path("mermin_peres.json"))
    assert status == 0
    assert rep["section_count"] == 0 and rep["explored_nodes"] > 0 and rep["obstructed"]


def test_spectrum_opens_counts(capsys):
    status, rep = report(capsys, "spectrum", "opens", "--input", data_path("m2_two.json"))
    assert status == 0 and rep["opens"] == 17 and rep["points"] == 5


def test_frame_too_large_exits_3(capsys):
    status, rep = report(capsys, "spectrum", "opens", "--input", data_path("ten_m4.json"))
    assert status == 3 and rep["error"]["code"] == "FrameTooLarge"
    status, rep = report(capsys, "spectrum", "opens", "--input", data_path("m2_two.json"), "--max-opens", "10")
    assert status == 3 and rep["error"]["code"] == "FrameTooLarge"


def test_spectrum_build(capsys):
    status, rep = report(capsys, "spectrum", "build", "--input", data_path("m4_chain.json"))
    assert status == 0 and rep["points"] == 10 and len(rep["pi"]) == 10
    assert {c["label"] for c in rep["contexts"]} == {"C1", "C12|34", "C1|2|34", "Cdiag"}


def test_frame_commands(capsys):
    path = data_path("m2_chain.json")
    _, rep = report(capsys, "frame", "heyting", "--input", path)
    assert rep["opens"] == 5 and not rep["boolean"] and rep["nonboolean_witness"] is not None
    n = rep["opens"]
    assert len(rep["implies"]) == n and all(len(row) == n for row in rep["implies"])
    _, rep = report(capsys, "frame", "points", "--input", path)
    assert rep["frame_points"] == rep["points"] == 3
    _, rep = report(capsys, "frame", "sober", "--input", path)
    assert rep["sober"] and rep["method"] == "frame"
    _, rep = report(capsys, "frame", "sober", "--input", data_path("cabello18.json"))
    assert rep["sober"] and rep["method"] == "principal" and rep["points"] == 73


def test_sections_find_and_cap(capsys):
    _, rep = report(capsys, "sections", "find", "--input", data_path("m2_two.json"))
    assert rep["section_count"] == 4 and not rep["capped"]
    _, rep = report(capsys, "sections", "find", "--input", data_path("ten_m4.json"), "--max-sections", "10")
    assert rep["section_count"] == 10 and rep["capped"]


def test_transform_eval(capsys, tmp_path):
    obs = tmp_path / "a.json"
    obs.write_text(json.dumps(matrix_to_json(np.diag([1.0, 1, 0, 0]))))
    status, rep = report(
        capsys, "transform", "eval", "--input", data_path("m4_chain.json"), "--context", "C12|34", "--observable", str(obs)
    )
    assert status == 0
    assert sorted(v["re"] for v in rep["values"]) == [0.0, 1.0]
    inline = json.dumps(matrix_to_json(np.eye(4)))
    _, rep = report(capsys, "transform", "eval", "--input", data_path("m4_chain.json"), "--context", "Cdiag", "--observable", inline)
    assert [v["re"] for v in rep["values"]] == [1.0] * 4
    status, rep = report(capsys, "transform", "eval", "--input", data_path("m4_chain.json"), "--context", "nope", "--observable", inline)
    assert status == 2 and rep["error"]["code"] == "ContextMissing"
    status, rep = report(
        capsys, "transform", "eval", "--input", data_path("m4_chain.json"), "--context", "C12|34", "--observable", inline.replace("1.0", "2.0", 1)
    )
    assert status == 2 and rep["error"]["code"] == "NotInContext"


def test_space_commands(capsys, tmp_path):
    _, rep = report(capsys, "space", "hausdorffify", "--input", data_path("mermin_peres.json"))
    assert rep["points"] == 1 and rep["input_points"] == 43
    space = tmp_path / "space.json"
    space.write_text(json.dumps({"points": ["a", "b", "c"], "opens": [[0, 1]]}))
    _, rep = report(capsys, "space", "soberify", "--input", str(space))
    assert rep["input_points"] == 3 and rep["points"] == 2
    _, rep = report(capsys, "space", "hausdorffify", "--input", str(space))
    assert rep["points"] == 1
    _, rep = report(capsys, "space", "soberify", "--input", data_path("m2_two.json"))
    assert rep["points"] == 5


@pytest.mark.parametrize(
    "content, code",
    [("{not json", "ParseError"), ("[1, 2]", "SchemaError"), ('{"dim": 2}', "SchemaError"), ('{"points": "x"}', "SchemaError")],
)
def test_error_objects(capsys, tmp_path, content, code):
    bad = tmp_path / "bad.json"
    bad.write_text(content)
    cmd = ["space", "soberify"] if "points" in content else ["spectrum", "build"]
    status, rep = report(capsys, *cmd, "--input", str(bad))
    assert status == 2 and rep["error"]["code"] == code and rep["error"]["message"]


def test_missing_file(capsys, tmp_path):
    status, rep = report(capsys, "spectrum", "build", "--input", str(tmp_path / "missing.json"))
    assert status == 2 and rep["error"]["code"] == "ParseError"


def test_not_self_adjoint_input(capsys, tmp_path):
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"dim": 2, "contexts": [{"observable": {"dim": 2, "re": [0, 1, 0, 0]}}]}))
    status, rep = report(capsys, "spectrum", "build", "--input", str(f))
    assert status == 2 and rep["error"]["code"] == "NotSelfAdjoint"


def test_tolerance_flag(capsys, tmp_path):
    f = tmp_path / "c.json"
    eps = 1e-7
    f.write_text(json.dumps({"dim": 2, "contexts": [{"observable": {"dim": 2, "re": [1, eps, 0, -1]}}]}))
    status, rep = report(capsys, "spectrum", "build", "--input", str(f))
    assert status == 2
    status, rep = report(capsys, "spectrum", "build", "--input", str(f), "--tolerance", "1e-6")
    assert status == 0 and rep["points"] == 3
    status, rep = report(capsys, "spectrum", "build", "--input", str(f), "--tolerance", "0.5")
    assert status == 2 and rep["error"]["code"] == "SchemaError"


def test_meet_close_flag(capsys, tmp_path):
    f = tmp_path / "c.json"
    obj = json.load(open(data_path("cabello18.json")))
    obj["meet_close"] = False
    f.write_text(json.dumps(obj))
    _, rep = report(capsys, "spectrum", "build", "--input", str(f))
    assert len(rep["contexts"]) == 10
    _, rep = report(capsys, "spectrum", "build", "--input", str(f), "--meet-close")
    assert len(rep["contexts"]) == 28


def test_output_file_and_text_format(capsys, tmp_path):
    out = tmp_path / "r.json"
    status, printed = cli(capsys, "sections", "ks", "--input", data_path("m2_two.json"), "--output", str(out))
    assert status == 0 and printed == ""
    assert json.loads(out.read_text())["section_count"] == 4
    _, text = cli(capsys, "sections", "ks", "--input", data_path("m2_two.json"), "--format", "text")
    assert "section_count: 4" in text
    _, text = cli(capsys, "spectrum", "opens", "--input", data_path("ten_m4.json"), "--format", "text")
    assert text.startswith("error [FrameTooLarge]")


@pytest.mark.parametrize("group, action", [(g, a) for g, acts in COMMANDS.items() for a in acts if g != "transform"])
def test_reports_are_byte_identical(group, action):
    cfg = RunConfig(input=data_path("m2_two.json"), command=f"{group} {action}")
    first = render(run(cfg)[1], "json")
    second = render(run(cfg)[1], "json")
    assert first == second
    assert json.loads(first)["command"] == f"{group} {action}"


def test_run_config_validation():
    with pytest.raises(SchemaError):
        RunConfig(input="x", command="spectrum build", max_opens=0).validate()
    with pytest.raises(SchemaError):
        RunConfig(input="x", command="frame nope").validate()
    assert run(RunConfig(input="x", command="spectrum build", max_sections=-1))[0] == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gelspec.cli", "spectrum", "opens", "--input", data_path("m2_chain.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["opens"] == 5
    proc = subprocess.run(
        [sys.executable, "-m", "gelspec.cli", "spectrum", "opens", "--input", data_path("ten_m4.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 3
