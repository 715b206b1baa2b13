import json

import pytest

from ariththeta.cli import RunConfig, ConfigError, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_theta_identity_lattice(capsys):
    code, out, _ = run(capsys, "theta", "--d", "-4", "--gram", "[[1]]", "--prec", "5")
    assert code == 0
    coeffs = {t: c["rat"] for t, c in json.loads(out)["coeffs"]}
    assert coeffs == {"0": "1", "1": "4", "2": "4", "4": "4", "5": "8"}


def test_theta_deterministic(capsys):
    a = run(capsys, "theta", "--gram", "[[1, 0], [0, 2]]", "--prec", "6")[1]
    b = run(capsys, "theta", "--gram", "[[1, 0], [0, 2]]", "--prec", "6")[1]
    assert a == b


def test_theta_not_definite(capsys):
    code, _, err = run(capsys, "theta", "--gram", "[[1, 0], [0, -1]]")
    assert code == 2 and "error" in err


def test_theta_prec_zero(capsys):
    code, out, _ = run(capsys, "theta", "--prec", "0")
    assert code == 0
    assert json.loads(out)["coeffs"] == [["0", json.loads(out)["coeffs"][0][1]]]


@pytest.mark.parametrize("argv", [["theta", "--prec", "-1"], ["theta", "--d", "-12"],
                                  ["theta", "--digits", "8"], ["nosuch"]])
def test_bad_input_exit_code(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nd = -3\nprec = 3\n")
    code, out, _ = run(capsys, "theta", "--config", str(cfg))
    assert code == 0
    obj = json.loads(out)
    assert obj["prec"] == 3
    code, out, _ = run(capsys, "theta", "--config", str(cfg), "--prec", "4")
    assert json.loads(out)["prec"] == 4
    # x^2 + xy + y^2 represents 1 six times
    assert dict((t, c["rat"]) for t, c in obj["coeffs"])["1"] == "6"


def test_config_file_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "theta", "--config", str(cfg))[0] == 2
    cfg.write_text("prec = many\n")
    assert run(capsys, "theta", "--config", str(cfg))[0] == 2
    assert run(capsys, "theta", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_run_config_validate():
    assert RunConfig().validate().d == -4
    with pytest.raises(ConfigError):
        RunConfig(n=5).validate()
    with pytest.raises(ConfigError):
        RunConfig(suites=["nosuch"]).validate()


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "out.json"
    assert run(capsys, "bconst", "--output", str(dest))[0] == 0
    assert dest.read_text().strip() == "-1 - 2 log 2"


def test_verify_pass_and_unknown(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "b-constant")
    assert code == 0
    assert json.loads(out)["status"] == "pass"
    assert run(capsys, "verify", "--suite", "nosuch")[0] == 2


def test_local_whittaker_inert(capsys):
    code, out, _ = run(capsys, "local-whittaker", "--p", "3", "--t", "27")
    assert code == 0
    obj = json.loads(out)
    assert obj["kind"] == "inert"
    assert obj["value0"] == "0"
    assert obj["deriv0"]["logs"] == {"3": "16/3"}
    # deriv0 / mu is the Gross multiplicity (v + 1)/2 = 2
    assert obj["mu"] == "8/3"


def test_local_whittaker_bad_prime(capsys):
    assert run(capsys, "local-whittaker", "--p", "4", "--t", "1")[0] == 2


def test_green(capsys):
    code, out, _ = run(capsys, "green", "--t", "2")
    assert code == 0
    obj = json.loads(out)
    assert obj["Q"].startswith("0.6931471805599453")
    assert obj["P"].startswith("0.6931471805599453")
    assert run(capsys, "green", "--t", "1")[0] == 2


def test_bconst_json(capsys):
    code, out, _ = run(capsys, "bconst", "--n", "2", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["text"] == "1/2 - 2 log 2"
    assert obj["closed_form_agrees"] is False


def test_eisenstein_modes(capsys):
    code, out, _ = run(capsys, "eisenstein", "--prec", "5")
    assert code == 0
    assert [t for t, _ in json.loads(out)["coeffs"]] == ["0", "1", "2", "4", "5"]
    code, out, _ = run(capsys, "eisenstein", "--prec", "5", "--incoherent")
    assert [t for t, _ in json.loads(out)["coeffs"]] == ["0"]
    code, out, _ = run(capsys, "eisenstein", "--prec", "3", "--derivative")
    assert code == 0
    assert json.loads(out)["coeffs"][0][0] == "1"
    assert run(capsys, "eisenstein", "--flip", "5", "--incoherent")[0] == 2
