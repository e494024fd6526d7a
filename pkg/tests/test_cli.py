import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from almostcomplex.cli import main
from almostcomplex.io import load_structure
from oracles import matmul, nijenhuis_by_brackets, symbolic_jet

GOLDEN = Path(__file__).parent / "golden"
GAUGE = GOLDEN / "gauge_n2_d2_s0.json"
PULLBACK = GOLDEN / "pullback_n2_d3_s0.json"
POINT = "1,-1/2,2,1/3"


def write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def constant_file(tmp_path):
    return write(tmp_path / "j0.json", {"n": 2, "S": [["0", "0", "-1", "0"], ["0", "0", "0", "-1"],
                                                      ["1", "0", "0", "0"], ["0", "1", "0", "0"]]})


@pytest.fixture
def identity_file(tmp_path):
    return write(tmp_path / "id.json", {"n": 1, "S": [["1", "0"], ["0", "1"]]})


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_check(constant_file, identity_file, capsys):
    assert run(["check", constant_file], capsys)[0] == 0
    code, out = run(["check", identity_file], capsys)
    assert code == 1 and "(S^2 + I)[1,1]" in out.out
    assert run(["check", str(GAUGE)], capsys)[0] == 0
    assert run(["check", str(PULLBACK)], capsys)[0] == 0


def test_bad_input_exit_2(tmp_path, capsys):
    assert run(["check", str(tmp_path / "missing.json")], capsys)[0] == 2
    bad = write(tmp_path / "bad.json", {"n": 1, "S": [["x1 +", "0"], ["0", "1"]]})
    assert run(["check", bad], capsys)[0] == 2
    arity = write(tmp_path / "arity.json", {"n": 2, "S": [["0"]]})
    assert run(["check", arity], capsys)[0] == 2
    assert run(["omega", str(GAUGE), "--at", "1,2"], capsys)[0] == 2
    assert run(["omega", str(GAUGE)], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2
    assert run(["gen", "--kind", "gauge", "--n", "0"], capsys)[0] == 2
    assert run(["gen", "--kind", "gauge", "--n", "1", "--degree", "-1"], capsys)[0] == 2
    assert run(["spencer", "--n", "0"], capsys)[0] == 2


def test_invalid_structure_exit_1(identity_file, capsys):
    assert run(["omega", identity_file, "--at", "0,0"], capsys)[0] == 1
    assert run(["nijenhuis", identity_file, "--symbolic"], capsys)[0] == 1


def test_jet(capsys):
    code, out = run(["jet", str(GAUGE), "--at", POINT], capsys)
    assert code == 0
    data = json.loads(out.out)
    u, du = symbolic_jet(load_structure(GAUGE).S, [Fraction(x) for x in POINT.split(",")])
    assert data["u"] == [[str(x) for x in r] for r in u]
    assert data["du"] == [[[str(x) for x in r] for r in m] for m in du]


def test_constant_tensors_zero(constant_file, capsys):
    for cmd in ("omega", "nijenhuis"):
        code, out = run([cmd, constant_file, "--at", "1,2,3,4"], capsys)
        assert code == 0 and json.loads(out.out)["components"] == {}
        code, out = run([cmd, constant_file, "--symbolic"], capsys)
        assert json.loads(out.out)["components"] == {}


def test_pullback_nijenhuis_symbolic_zero(capsys):
    code, out = run(["nijenhuis", str(PULLBACK), "--symbolic"], capsys)
    assert code == 0 and json.loads(out.out)["components"] == {}


def test_pullback_omega_symbolic(capsys):
    # reported as printed; the closed form does not vanish on this transported structure
    code, out = run(["omega", str(PULLBACK), "--symbolic"], capsys)
    assert code == 0
    assert json.loads(out.out)["components"] != {}


def _omega_oracle(S, p):
    u, du = symbolic_jet(S, p)
    d = len(u)
    P = [matmul(du[j], u) for j in range(d)]
    return {f"{i + 1},{j + 1},{k + 1}": (P[j][i][k] - P[k][i][j]) / 2
            for i in range(d) for j in range(d) for k in range(j + 1, d)}


def test_gauge_golden_values(tmp_path, capsys):
    p = [Fraction(x) for x in POINT.split(",")]
    S = load_structure(GAUGE).S
    for cmd, golden in (("omega", "gauge_omega_at.json"), ("nijenhuis", "gauge_nijenhuis_at.json")):
        out = tmp_path / f"{cmd}.json"
        assert main([cmd, str(GAUGE), "--at", POINT, "--out", str(out)]) == 0
        assert out.read_text() == (GOLDEN / golden).read_text()
        comps = json.loads(out.read_text())["components"]
        assert comps
        if cmd == "omega":
            ref = _omega_oracle(S, p)
        else:
            N = nijenhuis_by_brackets(S)
            ref = {f"{i + 1},{j + 1},{k + 1}": 2 * N[i][j][k].evaluate(p)
                   for i in range(4) for j in range(4) for k in range(j + 1, 4)}
        assert {k: Fraction(v) for k, v in comps.items()} == {k: v for k, v in ref.items() if v}


def test_spencer(capsys):
    code, out = run(["spencer", "--n", "1"], capsys)
    data = json.loads(out.out)
    assert code == 0 and (data["dim_g"], data["dim_g1"], data["dim_H02"]) == (2, 2, 0)
    data = json.loads(run(["spencer", "--n", "2"], capsys)[1].out)
    assert data["dim_g"] == 8 and data["dim_H02"] > 0
    data = json.loads(run(["spencer", "--n", "3"], capsys)[1].out)
    assert data == json.loads((GOLDEN / "spencer_n3.json").read_text())
    code, out = run(["spencer", "--n", "2", "--theta0", str(GAUGE), "--at", POINT], capsys)
    assert code == 0 and json.loads(out.out)["dim_H02"] == 4


def test_spencer_bad_theta0(identity_file, capsys):
    assert run(["spencer", "--n", "1", "--theta0", identity_file, "--at", "0,0"], capsys)[0] == 2
    assert run(["spencer", "--n", "2", "--theta0", identity_file, "--at", "0,0"], capsys)[0] == 2
    assert run(["spencer", "--n", "2", "--theta0", str(GAUGE)], capsys)[0] == 2


def test_naturality(tmp_path, constant_file, capsys):
    ident = write(tmp_path / "id.diffeo.json", {"n": 2, "f": ["x1", "x2", "x3", "x4"], "f_inv": ["x1", "x2", "x3", "x4"]})
    assert run(["naturality", str(GAUGE), "--diffeo", ident, "--at", POINT], capsys)[0] == 0
    linear = write(tmp_path / "lin.json", {"n": 2, "f": ["x1 + 2*x3", "x2", "x3", "-x4"],
                                           "f_inv": ["x1 - 2*x3", "x2", "x3", "-x4"]})
    assert run(["naturality", str(GAUGE), "--diffeo", linear, "--at", POINT], capsys)[0] == 0
    corrupted = write(tmp_path / "bad.json", {"n": 2, "f": ["x1 + x2^2", "x2", "x3", "x4"],
                                              "f_inv": ["x1 + x2^2", "x2", "x3", "x4"]})
    assert run(["naturality", str(GAUGE), "--diffeo", corrupted, "--at", POINT], capsys)[0] == 2
    no_inverse = write(tmp_path / "noinv.json", {"n": 2, "f": ["x1 + x2^2", "x2", "x3", "x4"]})
    assert run(["naturality", str(GAUGE), "--diffeo", no_inverse, "--at", POINT], capsys)[0] == 2
    singular = write(tmp_path / "sing.json", {"n": 2, "f": ["x1", "x2", "x3", "x4 + x4^2"]})
    assert run(["naturality", constant_file, "--diffeo", singular, "--at", "0,0,0,-1/2"], capsys)[0] == 2


def test_naturality_quadratic_shear_reports_violation(constant_file, capsys):
    shear = str(GOLDEN / "pullback_n2_d3_s0.diffeo.json")
    code, out = run(["naturality", constant_file, "--diffeo", shear, "--at", "1,0,1,0"], capsys)
    assert code == 1 and out.out.strip() == "violated"


def test_integrability(constant_file, capsys):
    code, out = run(["integrability", constant_file, "--samples", "2"], capsys)
    data = json.loads(out.out)
    assert code == 0 and data["omega_identically_zero"] and data["nijenhuis_identically_zero"]
    code, out = run(["integrability", str(GAUGE), "--samples", "3", "--seed", "1"], capsys)
    data = json.loads(out.out)
    assert code == 0 and not data["omega_identically_zero"] and not data["nijenhuis_identically_zero"]
    # the transported structure has N = 0 but a nonvanishing closed-form omega: flags disagree
    code, out = run(["integrability", str(PULLBACK), "--samples", "2"], capsys)
    data = json.loads(out.out)
    assert code == 1 and data["nijenhuis_identically_zero"] and not data["omega_identically_zero"]
    assert run(["integrability", constant_file, "--samples", "0"], capsys)[0] == 2


def test_gen(tmp_path, capsys):
    out = tmp_path / "c.json"
    assert main(["gen", "--kind", "constant", "--n", "2", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["S"] == [["0", "0", "-1", "0"], ["0", "0", "0", "-1"],
                                                ["1", "0", "0", "0"], ["0", "1", "0", "0"]]
    g = tmp_path / "g.json"
    assert main(["gen", "--kind", "gauge", "--n", "2", "--degree", "2", "--seed", "0", "--out", str(g)]) == 0
    assert g.read_text() == GAUGE.read_text()
    assert main(["check", str(g)]) == 0
    pb = tmp_path / "pb.json"
    assert main(["gen", "--kind", "pullback", "--n", "2", "--degree", "3", "--seed", "0", "--out", str(pb)]) == 0
    assert pb.read_text() == PULLBACK.read_text()
    assert (tmp_path / "pb.diffeo.json").read_text() == (GOLDEN / "pullback_n2_d3_s0.diffeo.json").read_text()
    assert main(["check", str(pb)]) == 0
    capsys.readouterr()


def test_deterministic_subprocess(tmp_path):
    def go(name):
        target = tmp_path / name
        subprocess.run([sys.executable, "-m", "almostcomplex.cli", "gen", "--kind", "gauge", "--n", "1",
                        "--degree", "3", "--seed", "42", "--out", str(target)], check=True)
        report = subprocess.run([sys.executable, "-m", "almostcomplex.cli", "integrability", str(target),
                                 "--samples", "4", "--seed", "3"], capture_output=True, text=True)
        return target.read_bytes(), report.stdout, report.returncode

    assert go("a.json") == go("b.json")
