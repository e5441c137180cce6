import json
import subprocess
import sys

import pytest

from spinsurg.cli import cmd_classify, cmd_equiv, cmd_invariants, cmd_spins, main, run
from spinsurg.intmat import GAMMA8


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return _write


def _json(argv):
    code, text = run(["--json"] + argv)
    assert code == 0
    return json.loads(text)


def test_spins(write):
    rep = cmd_spins(write("a.json", {"matrix": [[2]]}))
    assert rep["count"] == 2 and rep["spin_structures"] == [[0], [1]]
    assert cmd_spins(write("b.json", {"matrix": [[0] * 3] * 3}))["count"] == 8
    assert cmd_spins(write("c.json", {"matrix": GAMMA8.tolist()}))["count"] == 1
    assert cmd_spins("@torus3")["count"] == 8


def test_invariants(write):
    rep = cmd_invariants(write("a.json", {"matrix": [[2]], "spin": [0]}))
    assert rep["betti1"] == 0 and rep["torsion"] == [2] and rep["linking_form"] == [["1/2"]]
    assert rep["phi"] == ["3/4"] and rep["gauss_brown"] == 7 and rep["rochlin_mod8"] == 1
    assert cmd_invariants(write("b.json", {"matrix": [[2]], "spin": [1]}))["rochlin_mod8"] == 7
    rep = cmd_invariants(write("c.json", {"name": "S3", "matrix": []}))
    assert rep["betti1"] == 0 and rep["torsion"] == [] and "rochlin_mod8" not in rep
    assert cmd_invariants("@s3")["rochlin_mod8"] == 0


def test_equiv(write):
    rep = cmd_equiv("@poincare", "@s3", "spin")
    assert rep["equivalent"] is True
    a = write("a.json", {"matrix": [[2]], "spin": [0]})
    b = write("b.json", {"matrix": [[2]], "spin": [1]})
    rep = cmd_equiv(a, b, "spin")
    assert rep["equivalent"] is False and rep["comparison"]["rochlin_mod8"] == [1, 7]
    rep = cmd_equiv(write("c.json", {"matrix": [[3]]}), write("d.json", {"matrix": [[-3]]}), "unspun")
    assert rep["equivalent"] is False
    h4 = [[0] * 8 for _ in range(8)]
    for k in range(0, 8, 2):
        h4[k][k + 1] = h4[k + 1][k] = 1
    assert cmd_equiv("@poincare", write("h.json", {"matrix": h4}), "stable-even")["equivalent"] is True


def test_move(write, tmp_path):
    out = _json(["move", write("a.json", {"matrix": [[0]], "spin": [0]}), "y", "--linkings", "1", "--framing", "0"])
    assert out["matrix"] == [[0, 1, 0], [1, 0, 1], [0, 1, 0]] and out["spin"] == [0, 0, 0]
    out = _json(["move", "@s3", "blow-up", "--sign", "1"])
    assert out["matrix"] == [[1]] and out["spin"] == [1]
    out = _json(["move", write("b.json", {"matrix": [[1, 0], [0, 1]], "spin": [1, 1]}), "slide", "1", "2"])
    assert out["matrix"] == [[1, 1], [1, 2]] and out["spin"] == [0, 1]
    target = tmp_path / "moved.json"
    assert main(["move", "@rp3", "-o", str(target), "stabilize-gamma8"]) == 0
    assert json.loads(target.read_text())["matrix"][1][1] == 2


def test_moves_close_the_format(write, tmp_path):
    path = "@rp3"
    moves = [["y", "--linkings", "1", "--framing", "1"], ["blow-up", "--sign", "-1"], ["slide", "1", "2"],
             ["reverse", "--index", "2"], ["stabilize-h"], ["blow-down", "--index", "4"], ["stabilize-gamma8"]]
    start = cmd_invariants("@rp3")
    for k, move in enumerate(moves):
        target = tmp_path / f"m{k}.json"
        assert main(["move", path, "-o", str(target)] + move) == 0
        path = str(target)
        for cmd in (["spins"], ["invariants"], ["classify"]):
            assert run(cmd + [path])[0] == 0
        assert cmd_equiv("@rp3", path, "spin")["equivalent"] is True
        assert cmd_invariants(path)["rochlin_mod8"] == start["rochlin_mod8"]


def test_classify(write):
    rep = cmd_classify(write("a.json", {"group": [2], "gram": [["1/2"]]}))
    assert rep["primary_parts"][0]["kk_invariants"] == [{"k": 1, "r": 1, "sigma": "inf"}]
    rep = cmd_classify(write("b.json", {"group": [4], "gram": [["1/4"]]}))
    kk = rep["primary_parts"][0]["kk_invariants"]
    assert kk[1] == {"k": 2, "r": 1, "sigma": "inf"}
    assert rep["primary_parts"][0]["wall_psi"]["q"] == ["1/4"]
    rep = cmd_classify(write("c.json", {"group": [2, 2], "gram": [["0", "1/2"], ["1/2", "0"]]}))
    assert rep["primary_parts"][0]["kk_invariants"] == [{"k": 1, "r": 2, "sigma": 0}]
    rep = cmd_classify(write("d.json", {"group": [6], "gram": [["1/6"]], "q": ["1/12"]}))
    assert [p["prime"] for p in rep["primary_parts"]] == [2, 3]
    assert rep["gauss_brown"] is not None
    assert cmd_classify("@lens3")["primary_parts"][0]["prime"] == 3


def test_json_round_trip(write):
    for argv in (["spins", "@torus3"], ["invariants", "@rp3"], ["equiv", "@rp3", "@lens3", "--mode", "unspun"],
                 ["classify", "@rp3"], ["invariants", "@poincare"]):
        code, text = run(argv + ["--json"])
        assert code == 0
        report = json.loads(text)
        assert json.loads(json.dumps(report)) == report
        assert "provenance" in report


def test_exit_codes(write, capsys):
    assert run(["spins", write("bad.json", "{not json")])[0] == 1
    assert run(["spins", write("float.json", {"matrix": [[1.5]]})])[0] == 1
    assert run(["spins", write("keys.json", {"matrix": [[1]], "extra": 1})])[0] == 1
    assert run(["spins", "@nosuch"])[0] == 1
    assert run(["spins", str(write("x", "{}")) + ".missing"])[0] == 1
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run(["equiv", "@s3"])
    assert exc.value.code == 1
    assert run(["spins", write("asym.json", {"matrix": [[1, 2], [3, 4]]})])[0] == 2
    assert run(["invariants", write("nochar.json", {"matrix": [[3]], "spin": [0]})])[0] == 2
    assert run(["move", "@rp3", "blow-down", "--index", "1"])[0] == 2
    assert run(["equiv", write("unspun.json", {"matrix": [[2]]}), "@rp3"])[0] == 2
    assert run(["equiv", "@lens3", "@lens3", "--mode", "stable-even"])[0] == 2
    assert run(["classify", write("deg.json", {"group": [2], "gram": [["0"]]})])[0] == 2
    big = 2 ** 13 + 1
    assert run(["classify", write("big.json", {"group": [big, big], "gram": [[f"1/{big}", "0"], ["0", f"1/{big}"]]})])[0] == 3
    err = capsys.readouterr().err
    assert "precondition" in err and "size cap" in err


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "spinsurg.cli", "spins", "--json", "@rp3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == 2
    proc = subprocess.run([sys.executable, "-m", "spinsurg.cli", "invariants", "@rp3"], capture_output=True, text=True)
    assert "rochlin_mod8: 1" in proc.stdout
