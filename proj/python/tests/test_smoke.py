import pytest

import svir


def test_bracket_examples():
    assert svir.bracket("L[2]", "L[-2]") == "-4*L[0] + 1/2*C"
    assert svir.bracket("Y[1/2]", "Y[5/2]") == "2*M[3]"
    assert svir.bracket("Y[1]", "Y[2]", sector="0") == "M[3]"


def test_parity_error_is_value_error():
    with pytest.raises(ValueError):
        svir.bracket("Y[1]", "L[0]")


def test_act():
    assert svir.act("SV-Aab", "a=1/3,b=2", "Y[1/2]", "x[0]") == "7/3*x[1/2]"
    assert svir.act("SV-A2", "alpha=1", "L[2]", "x[-2]") == "-6*x[0]"


def test_verify_family():
    assert svir.verify_family("SV-Bab", "a=2/7,b=-5/3")["violations"] == []
    bad = svir.verify_family("SV-Aab", "a=1/3,b=2,f0=1,d0=1", window=4, genrange=1)
    assert bad["violations"]


def test_solve_ansatz():
    r = svir.solve_ansatz("1/7", "1/3", "5/6")
    assert r["stage1"]["nullity"] == 2
    assert r["patterns_span_nullspace"]
    assert svir.solve_ansatz("1/7", "1/3", "1/3")["stage1"]["nullity"] == 0
    assert not svir.solve_ansatz("1/7", "1/3", "5/6", f0=1, d0=1)["stage3"]["consistent"]


def test_deformation():
    assert svir.deformation("1.1")["verdict"] == "infeasible"
    assert svir.deformation("1.2")["verdict"] == "feasible-with-zero"


def test_run_matches_cli_contract():
    code, out, err = svir.run(["bracket", "L[1]", "L[-1]"])
    assert code == 0 and "-2*L[0]" in out and err == ""
    code, _, err = svir.run(["bracket", "Y[1]", "L[-1]"])
    assert code == 2 and "error" in err


def test_ledger_hash():
    h = svir.typo_ledger_hash()
    assert len(h) == 16 and h == svir.typo_ledger_hash()
