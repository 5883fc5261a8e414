import json

import pytest

from ncdeform import cli
from ncdeform.deform import NCDeformation
from ncdeform.suites import run_suite


def _run(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = cli.main(args + ["--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None), out


def test_parse_base_detects_order():
    R = cli.parse_base("k[t]/(t^4)")
    assert R.order == 3 and R.dim == 4
    R2 = cli.parse_base("k[t, s]/(t^2, s^2)")
    assert R2.order == 2 and R2.dim == 4
    assert cli.parse_base("k").dim == 1
    assert cli.parse_base("k[t]", order=2).dim == 3
    with pytest.raises(ValueError):
        cli.parse_base("k[t]/(t*s)")
    with pytest.raises(ValueError):
        cli.parse_base("k[t]", max_order=4)


def test_thread_cap_validation():
    assert cli.thread_cap({}) == 1
    assert cli.thread_cap({"NCDEF_THREADS": "4"}) == 4
    for bad in ("0", "-2", "many"):
        with pytest.raises(SystemExit):
            cli.thread_cap({"NCDEF_THREADS": bad})


def test_cohomology_command(tmp_path):
    code, data, _ = _run(["cohomology", "--variety", "proj(2)"], tmp_path)
    assert code == 0
    assert data["T1"] == {"twisted": 10, "untwisted": 10}
    assert data["T2"] == {"twisted": 0, "untwisted": 0}
    assert data["table"]["1"]["0"] == 8


def test_lift_moyal_and_roundtrip(tmp_path):
    code, data, _ = _run(["lift", "--in", "builtin:moyal", "--base", "k[t]/(t^4)"], tmp_path)
    assert code == 0 and data["status"] == "ok"
    D = NCDeformation.from_json(data["deformation"])
    D.check()
    assert sorted(data["deformation"]["mult"]["A"]) == ["t", "t^2", "t^3"]
    src = tmp_path / "d.json"
    src.write_text(json.dumps(data["deformation"]))
    code, again, _ = _run(["lift", "--in", str(src), "--base", "k[t]/(t^5)"], tmp_path, "again.json")
    assert code == 0 and len(again["steps"]) == 1


def test_lift_obstructed_exit_code(tmp_path):
    code, data, _ = _run(["lift", "--in", "builtin:obstructed", "--base", "k[t]/(t^3)"], tmp_path)
    assert code == cli.EXIT_OBSTRUCTED
    assert data["status"] == "obstructed"
    assert data["report"]["stage"] == "xi30"
    assert data["report"]["classes"]["xi30"]["type"] == "H^0(wedge^3 T)"


def test_lift_trivial_stays_trivial(tmp_path):
    code, data, _ = _run(["lift", "--in", "builtin:trivial:proj(1)", "--base", "k[t]/(t^3)"], tmp_path)
    assert code == 0
    assert data["deformation"]["mult"] == {"0": {}, "01": {}, "1": {}}


def test_lift_with_tangent_choice(tmp_path):
    choice = tmp_path / "choice.json"
    choice.write_text(json.dumps({"bivectors": {"0": {"A": [[[0, 1], [1, 0], "1"]]}}}))
    code, data, _ = _run(["lift", "--in", "builtin:trivial:affine(2)", "--base", "k[t]/(t^2)",
                          "--choices", str(choice)], tmp_path)
    assert code == 0
    assert data["deformation"]["mult"]["A"]["t"]["terms"]


def test_verify_pass_and_mutation(tmp_path):
    code, data, _ = _run(["verify", "--suite", "sn-extension", "--seed", "7"], tmp_path)
    assert code == 0 and data["ok"]
    code, data, _ = _run(["verify", "--suite", "lemma-df", "--seed", "1", "--mutate", "2"], tmp_path, "m.json")
    assert code == 1 and not data["ok"]
    assert data["counterexample"]["where"]["tuple"]


def test_verify_lemma_df_passes():
    res = run_suite("lemma-df", seed=1, trials=6, twisted_trials=1)
    assert res.ok


def test_outputs_are_deterministic(tmp_path):
    _, _, a = _run(["hull", "--variety", "affine(3)", "--cap", "1", "--order", "2"], tmp_path, "a.json")
    _, _, b = _run(["hull", "--variety", "affine(3)", "--cap", "1", "--order", "2"], tmp_path, "b.json")
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert len(data["parameters"]) == 12 and len(data["relations"]) == 4


def test_hull_infinite_dimensional_is_an_error(tmp_path, capsys):
    code, _, _ = _run(["hull", "--variety", "affine(2)"], tmp_path)
    assert code == 1
    assert "cap" in capsys.readouterr().err


def test_characteristic_warning(tmp_path, capsys):
    code, _, _ = _run(["--p", "3", "lift", "--in", "builtin:trivial:affine(1)", "--base", "k[t]/(t^4)"], tmp_path)
    assert code == 0
    assert "characteristic 3" in capsys.readouterr().err
