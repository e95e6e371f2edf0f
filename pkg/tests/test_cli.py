import json
from pathlib import Path

import pytest

from twpair import cli, oracle
from twpair.config import ConfigError, RunConfig, parse_psi, read_mapping, rep_from_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(*argv):
    return cli.run(list(argv))


def test_colorings_trefoil_abelian():
    code, text = run("colorings", "--fixture", "trefoil_abelian")
    assert code == 0
    assert "red dim (over base field): 2" in text


def test_zero_module_gives_zeros():
    code, text = run("colorings", "--rep", str(CONFIGS / "zero_module.json"), "--format", "json")
    assert code == 0
    out = json.loads(text)
    assert (out["module_dim"], out["full_dim"], out["red_dim"]) == (0, 0, 0)


def test_oracle_check_trefoil_z3():
    code, text = run("oracle-check", "--fixture", "trefoil_z3")
    assert code == 0
    assert text == "OK 9 colorings, Q agreement 81/81"


def test_oracle_check_symbolic_uses_cocycles():
    code, text = run("oracle-check", "--fixture", "fig8_case2", "--format", "json")
    assert code == 0
    out = json.loads(text)
    assert out["cocycles"]["H1_rel"] == out["red_dim"]


def test_mismatch_exit_code(monkeypatch):
    monkeypatch.setattr(oracle, "kernel_size", lambda d, f: 10)
    code, text = run("oracle-check", "--fixture", "trefoil_z3")
    assert code == cli.EXIT_MISMATCH
    assert text.startswith("MISMATCH 9 colorings")


def test_hopf_pairing_is_zero():
    for comp in ("1", "2"):
        code, text = run("pair", "--rep", str(CONFIGS / "hopf_sl2_f7.json"), "--basis", "coefficient",
                         "--component", comp, "--format", "json")
        assert code == 0
        assert all(e == "0" for row in json.loads(text)["gram"] for e in row)


def test_case2_gram_on_printed_basis_is_identity():
    code, text = run("pair", "--fixture", "fig8_case2", "--basis", "printed", "--format", "json")
    assert code == 0
    assert json.loads(text)["gram"] == [["1", "0"], ["0", "1"]]


def test_alexander_outputs():
    code, text = run("alexander", "--rep", str(CONFIGS / "unknot_abelian.json"))
    assert code == 0 and text.splitlines()[0] == "1"
    code, text = run("alexander", "--fixture", "trefoil_abelian", "--format", "json")
    out = json.loads(text)
    assert out["elementary_divisors"] == ["t^2 - t + 1"]
    assert {"delta", "elementary_divisors", "pairing"} <= set(out)


def test_alexander_elliptic_family():
    from twpair import repcatalog as rc
    from twpair.alexander import associates

    code, text = run("alexander", "--fixture", "fig8_elliptic_s2", "--format", "json")
    assert code == 0
    fa = rc.fixture("fig8_elliptic_s2").alexander_rep
    assert associates(fa.ring.convert(json.loads(text)["delta"]), fa.ring.convert("t^2 - 5*t + 1"))


def test_twisted_pair_reports_nonsingular_gram():
    code, text = run("twisted-pair", "--fixture", "fig8_elliptic_s2", "--format", "json")
    assert code == 0
    out = json.loads(text)
    assert out["nonsingular"] and out["adj_rank"] == 4


def test_invariant_counts():
    code, text = run("invariant", "--fixture", "trefoil_z3", "--format", "json")
    assert code == 0
    out = json.loads(text)
    assert out["colorings"] == 9 and sum(out["state_sums"].values()) == 9


@pytest.mark.parametrize("argv", [
    ["colorings", "--fixture", "nope"],
    ["colorings"],
    ["colorings", "--knot", "nope", "--rep", "x.json"],
    ["colorings", "--rep", "/nonexistent.json"],
    ["pair", "--fixture", "trefoil_z3", "--component", "2"],
    ["pair", "--fixture", "trefoil_z3", "--component", "0"],
    ["pair", "--fixture", "trefoil_z3", "--psi", "nope"],
    ["alexander", "--fixture", "trefoil_z3"],
])
def test_config_errors_exit_2(argv):
    code, _ = run(*argv)
    assert code == cli.EXIT_CONFIG


def test_unsupported_ring_exit_3():
    code, text = run("pair", "--fixture", "hopf_symbolic")
    assert code == cli.EXIT_UNSUPPORTED
    assert text.startswith("unsupported ring")


def test_unknown_keys_rejected(tmp_path):
    bad = tmp_path / "run.json"
    bad.write_text(json.dumps({"fixture": "trefoil_z3", "colour": "red"}))
    assert run("--config", str(bad), "colorings")[0] == cli.EXIT_CONFIG
    rep = json.loads((CONFIGS / "trefoil_z3.json").read_text())
    rep["extra"] = 1
    path = tmp_path / "rep.json"
    path.write_text(json.dumps(rep))
    assert run("colorings", "--rep", str(path))[0] == cli.EXIT_CONFIG


def test_toml_run_config_and_flag_override():
    code, text = run("--config", str(CONFIGS / "run_trefoil_pair.toml"), "pair")
    assert code == 0 and json.loads(text)["component"] == 1
    code, text = run("--config", str(CONFIGS / "run_trefoil_pair.toml"), "pair", "--format", "text")
    assert code == 0 and text.startswith("component 1")


@pytest.mark.parametrize("argv", [
    ["colorings", "--fixture", "fig8_elliptic"],
    ["pair", "--fixture", "trefoil_sl2"],
    ["alexander", "--fixture", "fig8_elliptic_s2"],
])
def test_json_is_stable_and_parses(argv):
    from twpair import repcatalog as rc

    first = run(*argv, "--format", "json")
    second = run(*argv, "--format", "json")
    assert first == second and first[0] == 0
    ring = rc.fixture(argv[2]).rep.ring
    out = json.loads(first[1])
    strings = [e for row in out.get("gram", []) for e in row] + [e for v in out.get("red_basis", []) for e in v]
    for s in strings:
        assert str(ring.convert(s)) == s


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig("nope", fixture="x").validate()
    with pytest.raises(ConfigError):
        RunConfig("pair", knot="trefoil", pd="x.pd", fixture="x").validate()
    with pytest.raises(ConfigError):
        RunConfig("pair", rep="a.json", fixture="x").validate()
    with pytest.raises(ConfigError):
        RunConfig("pair", fixture="x", format="xml").validate()
    assert RunConfig.from_mapping({"command": "pair", "fixture": "x"}).component == 1


def test_rep_config_errors(tmp_path):
    good = json.loads((CONFIGS / "trefoil_z3.json").read_text())
    with pytest.raises(ConfigError):
        rep_from_config({k: v for k, v in good.items() if k != "generators"})
    with pytest.raises(ConfigError):
        rep_from_config({**good, "dimension": 2})
    with pytest.raises(ConfigError):
        rep_from_config({k: v for k, v in good.items() if k != "knot"})
    broken = tmp_path / "x.toml"
    broken.write_text("not = [valid")
    with pytest.raises(ConfigError):
        read_mapping(broken)


def test_psi_parsing():
    assert parse_psi(None) is None
    assert parse_psi("det2").kind == "det2"
    assert parse_psi('{"kind": "custom", "matrix": [["1", "0"], ["0", "2"]]}').matrix == (("1", "0"), ("0", "2"))
    with pytest.raises(ConfigError):
        parse_psi("{oops")


def test_pd_file_input(tmp_path):
    pd = tmp_path / "trefoil.pd"
    pd.write_text("X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]")
    rep = {"ring": {"base": "GF(3)"}, "dimension": 1, "generators": {"1": [["-1"]], "2": [["-1"]], "3": [["-1"]]}}
    path = tmp_path / "rep.json"
    path.write_text(json.dumps(rep))
    code, text = run("oracle-check", "--pd", str(pd), "--rep", str(path))
    assert code == 0 and text.startswith("OK 9 colorings")


def test_main_prints(capsys):
    assert cli.main(["oracle-check", "--fixture", "fig8_z3"]) == 0
    assert "OK 3 colorings" in capsys.readouterr().out
