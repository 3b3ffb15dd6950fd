import json
from pathlib import Path

import pytest

from tropj.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(autouse=True)
def _cache(inv):
    # share the session cache so commands never rebuild
    return inv


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_tropicalize(capsys, tmp_path):
    assert run(capsys, "tropicalize", DATA / "worked_example.json")[:2] == (0, "cycle length = 5\n")
    assert run(capsys, "tropicalize", DATA / "flat.json")[1] == "no cycle; length = 0\n"
    assert run(capsys, "tropicalize", DATA / "fold.json")[1] == "generalized cycle length = 2\n"


def test_outputs_are_byte_identical(capsys, tmp_path):
    paths = []
    for k in range(2):
        svg, js = tmp_path / f"c{k}.svg", tmp_path / f"c{k}.json"
        run(capsys, "tropicalize", DATA / "worked_example.json", "--svg", svg, "--json", js, "--ascii")
        paths.append((svg.read_bytes(), js.read_bytes()))
    assert paths[0] == paths[1]
    body = json.loads(paths[0][1])
    assert body["cycle"]["length"] == "5" and body["cycle"]["hasCycle"] is True


def test_jval(capsys):
    code, out, _ = run(capsys, "jval", DATA / "worked_example.json")
    assert code == 0
    assert out.splitlines() == ["val_u(A) = 0", "val_u(Delta) = 5", "val_u(j) = -5"]
    code, out, _ = run(capsys, "jval", DATA / "weierstrass_trivial.json")
    assert code == 0 and "val(j(f)) = 0" in out.splitlines()


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "jval", DATA / "nodal.json")[0] == 2
    assert run(capsys, "jval", DATA / "coarse.json")[0] == 3
    bad = tmp_path / "bad.json"
    for text in ("[1, 2]", "{\"u00\": 0}", "[0, 1, 1, 1, 1, 1, 1, 1, 1, 0.5]", "not json",
                 "[0, \"inf\", 1, 1, 1, 1, 1, 1, 1, 1]"):
        bad.write_text(text)
        assert run(capsys, "tropicalize", bad)[0] == 1, text
    assert run(capsys, "tropicalize", tmp_path / "missing.json")[0] == 1
    assert run(capsys, "verify", "--samples", 0)[0] == 1
    assert run(capsys, "shift-experiment", "--b", "-1")[0] == 1


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--samples", 1, "--pin-example")
    assert code == 0 and out == "1/1 samples satisfy -val_u(j) = cycle length\n"
    assert run(capsys, "verify", "--samples", 50, "--seed", 3)[0] == 0


def test_rays(capsys):
    code, out, _ = run(capsys, "rays", "--catalog")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 11 and not any("MISMATCH" in l for l in lines)
    assert any(l.startswith("lift[(0, 1)]") and "no cycle" in l for l in lines)
    assert run(capsys, "rays", "--catalog")[1] == out


@pytest.mark.parametrize("b,length,switch", [("2", "cycle length = 5", "equals"),
                                             ("1", "cycle length = 5", "differs from"),
                                             ("2/3", "cycle length = 14/3", "differs from")])
def test_shift_experiment(capsys, b, length, switch):
    code, out, _ = run(capsys, "shift-experiment", "--b", b)
    assert code == 0
    assert length in out.splitlines() and f"subdivision {switch} the one for b = 2" in out
    assert "val(j(f)) = -5" in out


def test_build_invariants(capsys):
    code, out, _ = run(capsys, "build-invariants")
    assert code == 0 and out.startswith("S: 25 terms, A: 1607 terms, Delta: 2040 terms")
