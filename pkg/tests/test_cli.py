import json

import pytest

from fpt.cli import main

SQUARE = "kind polytope-v dim 2\nvertex 0 0\nvertex 1 0\nvertex 0 1\nvertex 1 1\n"
SHEARED = "kind polytope-v dim 2\nvertex 0 0\nvertex 1 0\nvertex 1 1\nvertex 2 1\n"
BAD_TRIANGLE = "kind polytope-v dim 2\nvertex 0 0\nvertex 2 0\nvertex 0 1\n"
SEGMENT_H = "kind polytope-h dim 1\nineq 1 : 0\nineq -1 : -1\n"


@pytest.fixture
def files(tmp_path):
    def put(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return put


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def tsv(out):
    return dict(line.split("\t", 1) for line in out.splitlines())


def test_check_polytope(capsys, files):
    code, out, _ = run(capsys, "check", files("sq.txt", SQUARE))
    kv = tsv(out)
    assert code == 0 and kv["delzant"] == "true" and kv["vertices"] == "4"
    code, out, _ = run(capsys, "check", files("t.txt", BAD_TRIANGLE))
    assert code == 1 and tsv(out)["delzant"] == "false" and "witness.det" in tsv(out)


def test_check_json_and_batch_order(capsys, files):
    a, b = files("a.txt", SQUARE), files("b.txt", BAD_TRIANGLE)
    code, out, _ = run(capsys, "check", "--json", a)
    assert code == 0 and json.loads(out)["ok"] is True
    code, out, _ = run(capsys, "--json", "check", b, a, b)
    got = json.loads(out)
    assert code == 1 and [g["file"] for g in got] == [b, a, b]
    first = out
    assert run(capsys, "--json", "check", b, a, b)[1] == first
    code, out, _ = run(capsys, "check", a, files("bad.txt", "kind nope dim 1\n"))
    assert code == 2 and "error\tsyntax" in out


def test_lift_then_weights(capsys, files, tmp_path):
    seg = files("seg.txt", SEGMENT_H)
    out_path = str(tmp_path / "lift.txt")
    code, out, _ = run(capsys, "lift", seg, "-o", out_path)
    assert code == 0 and tsv(out)["integral_iso"] == "true"
    code, out, _ = run(capsys, "weights", out_path)
    assert code == 0 and all(line.split("\t")[-1] == "1" for line in out.splitlines())
    code, out, _ = run(capsys, "lift", seg)
    assert out.startswith("kind framed dim")


def test_iso(capsys, files):
    code, out, _ = run(capsys, "iso", files("a.txt", SQUARE), files("b.txt", SHEARED))
    kv = out.splitlines()
    assert code == 0 and kv[0] == "isomorphic\ttrue"
    assert any(line.startswith("map.translation") for line in kv)
    code, out, _ = run(capsys, "iso", files("c.txt", SQUARE), files("d.txt", BAD_TRIANGLE))
    assert code == 1 and out == "isomorphic\tfalse\n"


def test_qpq_morita_and_witness(capsys, files, tmp_path):
    paths = {}
    for key, (a, p, q) in {"q1": ("1", 2, 1), "q2": ("1", 2, 3), "q3": ("1", 3, 1)}.items():
        paths[key] = str(tmp_path / f"{key}.txt")
        assert run(capsys, "qpq", "-a", a, "-p", str(p), "-q", str(q), "-o", paths[key])[0] == 0
    wit = str(tmp_path / "w.txt")
    code, out, _ = run(capsys, "morita", paths["q1"], paths["q2"], "--witness", wit)
    kv = tsv(out)
    assert code == 0 and kv["verdict"] == "equivalent" and kv["reason"] == "weights"
    assert open(wit).read().startswith("kind framed")
    code, out, _ = run(capsys, "morita", paths["q1"], paths["q3"])
    assert code == 1 and tsv(out)["verdict"] == "inequivalent"
    code, out, _ = run(capsys, "--json", "morita", paths["q1"], paths["q3"])
    assert json.loads(out)["reason"] == "weights"


def test_crossed_product_failure_is_single_line(capsys, tmp_path):
    a, b = str(tmp_path / "a.txt"), str(tmp_path / "b.txt")
    run(capsys, "qpq", "-a", "1", "-p", "1", "-q", "0", "-o", a)
    run(capsys, "qpq", "-a", "1", "-p", "2", "-q", "1", "-o", b)
    code, out, err = run(capsys, "crossed-product", a, b)
    assert code == 2 and out == ""
    assert err.startswith("error: crossed-product: ") and err.count("\n") == 1


def test_local_model_and_degree(capsys, files, tmp_path):
    q = str(tmp_path / "q.txt")
    run(capsys, "qpq", "-a", "1", "-p", "2", "-q", "1", "-o", q)
    code, out, _ = run(capsys, "local-model", q, "--face", "vertex:0")
    assert code == 0 and "transversal\ttrue" in out and "corank\t1" in out
    code, out, err = run(capsys, "local-model", q, "--face", "nonsense")
    assert code == 2 and err.startswith("error: face: ")
    code, out, _ = run(capsys, "degree", files("s.txt", SQUARE))
    assert code == 0 and tsv(out)["degree"] == "0"
    irr = files("i.txt", "kind polytope-v dim 2\nvertex 0 0\nvertex 1 sqrt(2)\n")
    assert tsv(run(capsys, "degree", irr)[1])["degree"] == "1"


def test_render(capsys, files, tmp_path):
    svg = tmp_path / "q.svg"
    q = str(tmp_path / "q.txt")
    run(capsys, "qpq", "-a", "1", "-p", "2", "-q", "1", "-o", q)
    code, _, _ = run(capsys, "render", q, "-o", str(svg))
    assert code == 0 and "<svg" in svg.read_text()
    cube = files("c.txt", "kind polytope-v dim 3\nvertex 0 0 0\nvertex 1 0 0\nvertex 0 1 0\nvertex 0 0 1\n")
    code, _, err = run(capsys, "render", cube, "-o", str(svg))
    assert code == 2 and err.startswith("error: render: ")
    assert run(capsys, "render", cube, "-o", str(svg), "--project", "0,2")[0] == 0


def test_error_codes(capsys, files, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "missing.txt"))
    assert code == 2 and err.startswith("error: io: ")
    bad = files("m.txt", "kind polytope-v dim 1\nvertex sqrt(2)\nvertex sqrt(3)\n")
    code, _, err = run(capsys, "check", bad)
    assert code == 2 and "radicand" in err and err.count("\n") == 1
    code, _, err = run(capsys, "weights", files("s.txt", SQUARE))
    assert code == 2 and err.startswith("error: kind: ")
