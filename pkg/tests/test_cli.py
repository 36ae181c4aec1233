import json
import subprocess
import sys

import pytest

from cartan235.cli import main
from cartan235.group import dilation_map, translation_map
from cartan235.maps import PolyMap
from cartan235.poly import variables

x1, x2, y, z1, z2 = variables()


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)

    d2 = dilation_map(2)
    return {
        "dilation": write("dil.json", d2.to_json()),
        "dilation_noinv": write("dil_f.json", {"components": d2.f.to_json()}),
        "dilation_inv": write("dil_g.json", {"components": d2.g.to_json()}),
        "translation": write("tr.json", translation_map((1, 0, "1/2", 0, "-1/12")).to_json()),
        "shear": write("shear.json", {
            "components": PolyMap((x1, x2, y, z1 + y, z2)).to_json(),
            "inverse": PolyMap((x1, x2, y, z1 - y, z2)).to_json()}),
        "wrong_inverse": write("bad_inv.json", {
            "components": d2.f.to_json(), "inverse": dilation_map(3).g.to_json()}),
        "garbage": write("garbage.json", {"nope": 1}),
        "abelian": write("ab.json", {"dim": 2, "weights": [1, 1], "brackets": []}),
        "jacobi": write("jac.json", {"dim": 3, "weights": [1, 1, 2], "brackets": [
            {"i": 0, "j": 1, "result": [0, 0, 1]}, {"i": 0, "j": 2, "result": [0, 0, 1]}]}),
    }


def run(capsys, *argv):
    code = main(["--format", "json", *argv]) if argv[0] != "--format" else main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


@pytest.mark.parametrize("target", ["group", "frame", "coframe", "bch", "dilation"])
def test_verify(capsys, target):
    code, rep = run(capsys, "verify", target)
    assert code == 0
    assert rep["status"] == "pass"
    assert rep["command"] == f"verify {target}"
    assert set(rep) == {"command", "status", "details", "timing_seconds"}


def test_verify_seed_is_reproducible(capsys):
    a = run(capsys, "verify", "group", "--samples", "4", "--seed", "3")[1]["details"]
    b = run(capsys, "verify", "group", "--samples", "4", "--seed", "3")[1]["details"]
    assert a == b


def test_contact_check_dilation(capsys, files):
    code, rep = run(capsys, "contact-check", files["dilation"])
    assert code == 0
    assert rep["details"]["pansu_matrix"][3] == "[0, 0, 0, 8, 0]"
    assert rep["details"]["det_equals_JH5"] is True


def test_contact_check_separate_inverse(capsys, files):
    code, _ = run(capsys, "contact-check", files["dilation_noinv"], "--inverse", files["dilation_inv"])
    assert code == 0


def test_contact_check_shear(capsys, files):
    code, rep = run(capsys, "contact-check", files["shear"])
    assert code == 1
    assert rep["status"] == "fail"
    assert rep["details"]["witness_entry"] == [4, 1]
    assert rep["details"]["residual"] == "-1/2*x2"


@pytest.mark.parametrize("key", ["dilation_noinv", "wrong_inverse", "garbage"])
def test_contact_check_usage_errors(capsys, files, key):
    code, rep = run(capsys, "contact-check", files[key])
    assert code == 2
    assert rep["status"] == "error"


def test_numeric(capsys, files):
    code, rep = run(capsys, "contact-check", files["translation"], "--numeric",
                    "--point", "1,0,1/2,0,-1/12")
    assert code == 0
    assert rep["details"]["reference"] == "exact"
    code2, rep2 = run(capsys, "pansu-numeric", files["translation"], "--point", "1,0,1/2,0,-1/12")
    assert code2 == 0 and rep2["details"]["errors"] == rep["details"]["errors"]


def test_numeric_without_inverse_uses_successive(capsys, files):
    code, rep = run(capsys, "pansu-numeric", files["dilation_noinv"])
    assert code == 0
    assert rep["details"]["reference"] == "successive"


def test_numeric_shear_fails(capsys, files):
    code, _ = run(capsys, "pansu-numeric", files["shear"], "--point", "0.3,0.2,0.1,0,0")
    assert code == 1


@pytest.mark.parametrize("args", [["--radii", "0.01,0.1"], ["--point", "1,2"], ["--radii", "a,b"]])
def test_numeric_bad_args(capsys, files, args):
    code, _ = run(capsys, "pansu-numeric", files["translation"], *args)
    assert code == 2


def test_symmetries(capsys):
    code, rep = run(capsys, "symmetries", "--max-wdeg", "0")
    assert code == 0 and rep["details"]["dimension"] == 2
    code, rep = run(capsys, "symmetries", "--max-wdeg", "6", "--structure", "--diagnostics")
    assert code == 0
    assert rep["details"]["dimension"] == 14
    assert rep["details"]["grading"] == {"-3": 2, "-2": 1, "-1": 2, "0": 4, "1": 2, "2": 1, "3": 2}
    assert rep["details"]["diagnostics"]["killing_nondegenerate"] is True
    assert rep["details"]["structure_constants"]
    assert run(capsys, "symmetries", "--max-wdeg", "-1")[0] == 2


def test_prolong(capsys, files):
    code, rep = run(capsys, "prolong", "cartan", "--max-level", "5")
    assert code == 0
    assert rep["details"]["level_dimensions"] == [4, 2, 1, 2, 0, 0]
    assert rep["details"]["verdict"] == "rigid"
    code, rep = run(capsys, "prolong", files["abelian"], "--max-level", "4")
    assert code == 0 and rep["status"] == "undetermined"
    code, rep = run(capsys, "prolong", files["jacobi"])
    assert code == 2
    assert "Jacobi" in rep["error"] or "layer" in rep["error"]
    assert run(capsys, "prolong", "/no/such/file.json")[0] == 2


def test_induce(capsys, files):
    code, rep = run(capsys, "induce", files["dilation"], "--direction", "X1")
    assert code == 0
    assert rep["details"]["field"]["Z1"] == "8"
    code, rep = run(capsys, "induce", files["shear"], "--direction", "X2")
    assert code == 1


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_text_format_and_env(capsys, monkeypatch):
    assert main(["verify", "bch"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("verify bch: PASS")
    monkeypatch.setenv("CARTAN235_FORMAT", "json")
    assert main(["verify", "bch"]) == 0
    assert json.loads(capsys.readouterr().out)["status"] == "pass"


def test_text_and_json_carry_the_same_content(capsys, files):
    main(["--format", "json", "contact-check", files["shear"]])
    rep = json.loads(capsys.readouterr().out)
    main(["--format", "text", "contact-check", files["shear"]])
    text = capsys.readouterr().out
    for key, value in rep["details"].items():
        assert key in text
    assert "(4, 1)" in text and "-1/2*x2" in text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cartan235", "verify", "bch"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
