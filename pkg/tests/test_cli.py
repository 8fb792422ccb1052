import json

import numpy as np
import pytest

from ybekit import io
from ybekit import rmatrix as rm
from ybekit.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_solution_cyclic(tmp_path, capsys):
    p = tmp_path / "c3.json"
    code, out, _ = run(capsys, "build", "solution", "cyclic", "--n", 3, "-o", p)
    assert code == 0
    S, doc = io.load(p)
    assert S(0, 0) == (1, 2)
    assert doc["origin"]["how"] == "cyclic"


def test_build_matrix_example(tmp_path, capsys):
    p = tmp_path / "a1.json"
    assert run(capsys, "build", "matrix", "example", "--name", "A1", "-o", p)[0] == 0
    M, _ = io.load(p)
    assert np.array_equal(M, io.golden_matrix("householder_A1"))


def test_build_brace_from_ring(tmp_path, capsys):
    p = tmp_path / "b.json"
    code, out, _ = run(capsys, "build", "brace", "from-ring", "--ring", "truncpoly", "--p", 2, "--deg", 3, "-o", p)
    assert code == 0 and "order 4" in out
    assert run(capsys, "verify", p)[0] == 0


@pytest.mark.parametrize("argv", [
    ["build", "solution", "flip", "--n", "3"],
    ["build", "solution", "hura5"],
    ["build", "ring", "multiples", "--m", "2", "--modulus", "8"],
    ["build", "weights", "cyclic_g", "--g", "1,2,3"],
    ["build", "weights", "hura5_g", "--g", "1,2,2,3"],
    ["build", "matrix", "example", "--name", "A2"],
    ["build", "brace", "trivial", "--n", "3"],
])
def test_every_build_verifies_and_is_byte_stable(tmp_path, capsys, argv):
    p = tmp_path / "obj.json"
    assert run(capsys, *argv, "-o", p)[0] == 0
    text = p.read_text()
    assert run(capsys, "verify", p)[0] == 0
    obj, doc = io.load(p)
    q = tmp_path / "again.json"
    io.dump(obj, q, doc.get("origin"))
    assert q.read_text() == text


def test_verify_flip_report(tmp_path, capsys):
    p = tmp_path / "f.json"
    run(capsys, "build", "solution", "flip", "--n", 3, "-o", p)
    code, out, _ = run(capsys, "verify", p)
    assert code == 0 and "braid_ok involutive nondeg" in out
    code, out, _ = run(capsys, "verify", p, "--json")
    assert json.loads(out)["involutive"] is True


def test_verify_failing_matrix(tmp_path, capsys):
    X = rm.counterexample_x()
    p = tmp_path / "xx.json"
    io.dump(rm.hadamard(X, X), p)
    code, out, _ = run(capsys, "verify", p)
    assert code == 1 and "residual" in out


def test_verify_truncated_file(tmp_path, capsys):
    p = tmp_path / "t.json"
    run(capsys, "build", "solution", "flip", "--n", 2, "-o", p)
    p.write_text(p.read_text()[:20])
    code, _, err = run(capsys, "verify", p)
    assert code == 2 and "error" in err


def test_verify_cocycle_with_solution(tmp_path, capsys):
    s, w = tmp_path / "s.json", tmp_path / "w.json"
    run(capsys, "build", "solution", "cyclic", "--n", 3, "-o", s)
    run(capsys, "build", "weights", "cyclic_g", "--g", "1,2,1", "-o", w)
    assert run(capsys, "verify", w, "--solution", s)[0] == 0
    D, _ = io.load(w)
    d = D.d.copy()
    d[0, 1] = 9
    from ybekit.weights import WeightSystem
    io.dump(WeightSystem(d), w)
    assert run(capsys, "verify", w, "--solution", s)[0] == 1


def test_bad_tolerance_env(tmp_path, capsys, monkeypatch):
    p = tmp_path / "f.json"
    run(capsys, "build", "solution", "flip", "--n", 2, "-o", p)
    monkeypatch.setenv("YBE_TOL", "loose")
    assert run(capsys, "verify", p)[0] == 2
    monkeypatch.setenv("YBE_TOL", "1e-6")
    assert run(capsys, "verify", p)[0] == 0


def test_unknown_command_is_input_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_analyze(tmp_path, capsys):
    c5, h = tmp_path / "c5.json", tmp_path / "h.json"
    run(capsys, "build", "solution", "cyclic", "--n", 5, "-o", c5)
    run(capsys, "build", "solution", "hura5", "-o", h)
    code, out, _ = run(capsys, "analyze", "orbits", c5)
    assert code == 0 and out.startswith("1 orbit, indecomposable")
    assert run(capsys, "analyze", "mpl", h)[1].strip() == "mpl 2"
    code, out, _ = run(capsys, "analyze", "permgroup", h, "--json")
    assert json.loads(out) == {"order": 4, "nilpotent": True, "ok": True}


def test_analyze_svd_with_figure(tmp_path, capsys):
    a = tmp_path / "a.json"
    d = np.array([3, -1, 2j, 0.5, 7, 1, 1, 4, 6])
    io.dump(rm.a_of_d(d), a)
    fig = tmp_path / "s.png"
    code, out, _ = run(capsys, "analyze", "svd", a, "--figure", fig, "--json")
    assert code == 0 and fig.stat().st_size > 0
    s = json.loads(out)["singular_values"]
    assert np.allclose(s, np.sort(np.abs(d))[::-1], atol=1e-12)


def test_analyze_kind_mismatch(tmp_path, capsys):
    p = tmp_path / "m.json"
    io.dump(np.eye(4), p)
    assert run(capsys, "analyze", "orbits", p)[0] == 2


def test_analyze_triviality(tmp_path, capsys):
    s, w = tmp_path / "s.json", tmp_path / "w.json"
    run(capsys, "build", "solution", "cyclic", "--n", 3, "-o", s)
    run(capsys, "build", "weights", "cyclic_g", "--g", "1,2,1", "-o", w)
    code, out, _ = run(capsys, "analyze", "triviality", s, "--weights", w)
    assert code == 0 and out.strip() == "non-trivial"
    run(capsys, "build", "weights", "constant", "--n", 3, "--value", "2", "-o", w)
    code, out, _ = run(capsys, "analyze", "triviality", s, "--weights", w, "--json")
    assert json.loads(out)["trivial"] is True


def test_analyze_classify(tmp_path, capsys):
    m, out_sol = tmp_path / "m.json", tmp_path / "sol.json"
    io.dump(rm.cyclic_unit_matrix(3), m)
    code, out, _ = run(capsys, "analyze", "classify", m, "--out", out_sol)
    assert code == 0 and "accepted=True" in out
    S, _ = io.load(out_sol)
    assert S.n == 3


def test_transform_similarity(tmp_path, capsys):
    a1, y = tmp_path / "a1.json", tmp_path / "y.json"
    run(capsys, "build", "matrix", "example", "--name", "A1", "-o", a1)
    assert run(capsys, "transform", "similarity", "--p", "vandermonde3", a1, "-o", y)[0] == 0
    Y, doc = io.load(y)
    assert np.max(np.abs(Y - rm.a_of_d([-1] + [1] * 8))) < 1e-9
    assert doc["origin"]["direction"] == "inverse"


def test_transform_hadamard_and_kron(tmp_path, capsys):
    from ybekit.solutions import builtin_solution
    from ybekit.weights import cyclic_g
    S = builtin_solution("cyclic", 3)
    a, b, h, k = (tmp_path / f"{n}.json" for n in "abhk")
    io.dump(rm.monomial_from_bvst(S, cyclic_g([2, 3, 5])), a)
    io.dump(rm.monomial_from_bvst(S, cyclic_g([1, 1j, -1])), b)
    assert run(capsys, "transform", "hadamard", a, b, "-o", h)[0] == 0
    H, _ = io.load(h)
    assert np.allclose(H, rm.monomial_from_bvst(S, cyclic_g([2, 3j, -5])))
    x = tmp_path / "x.json"
    io.dump(rm.counterexample_x(), x)
    assert run(capsys, "transform", "hadamard", x, x)[0] == 2
    assert run(capsys, "transform", "kron", a, b, "-o", k)[0] == 0
    assert io.load(k)[0].shape == (81, 81)


def test_transform_retract_and_lift(tmp_path, capsys):
    f, q, w, lw = (tmp_path / f"{n}.json" for n in ("f", "q", "w", "lw"))
    run(capsys, "build", "solution", "flip", "--n", 3, "-o", f)
    assert run(capsys, "transform", "retract", f, "-o", q)[0] == 0
    Q, doc = io.load(q)
    assert Q.n == 1 and doc["origin"]["class_map"] == [0, 0, 0]
    run(capsys, "build", "weights", "constant", "--n", 1, "--value", "3", "-o", w)
    assert run(capsys, "transform", "lift-weights", f, w, "--quotient", q, "-o", lw)[0] == 0
    assert np.allclose(io.load(lw)[0].d, 3)
    assert run(capsys, "transform", "lift-weights", f, w)[0] == 2


def test_transform_i_retract(tmp_path, capsys):
    b, s, q = tmp_path / "b.json", tmp_path / "s.json", tmp_path / "q.json"
    run(capsys, "build", "brace", "from-ring", "--p", 2, "--deg", 4, "-o", b)
    run(capsys, "build", "solution", "one-generator", b, "--x", 1, "-o", s)
    assert run(capsys, "transform", "i-retract", b, s, "--left-power", 3, "-o", q)[0] == 0
    assert io.load(q)[0].n == 2
    assert run(capsys, "transform", "i-retract", b, s, "--ideal", "0,1")[0] == 2


def test_transform_gmap(tmp_path, capsys):
    from ybekit.solutions import builtin_solution
    from ybekit.weights import cyclic_g
    a, g = tmp_path / "a.json", tmp_path / "g.json"
    io.dump(rm.monomial_from_bvst(builtin_solution("cyclic", 3), cyclic_g([2, 3j, 5])), a)
    assert run(capsys, "transform", "gmap", a, "--power", 2, "--conj", "-o", g)[0] == 0
    G, _ = io.load(g)
    assert np.allclose(G, rm.monomial_from_bvst(builtin_solution("cyclic", 3), cyclic_g([4, -9, 25])))
    assert run(capsys, "verify", g)[0] == 0


def test_nontrivial_weights_through_cli(tmp_path, capsys):
    b, s, w = tmp_path / "b.json", tmp_path / "s.json", tmp_path / "w.json"
    run(capsys, "build", "brace", "from-ring", "--p", 2, "--deg", 4, "-o", b)
    run(capsys, "build", "solution", "one-generator", b, "--x", 1, "-o", s)
    assert run(capsys, "build", "weights", "nontrivial", s, "-o", w)[0] == 2
    assert run(capsys, "build", "weights", "nontrivial", s, "--brace", b, "--x", 1, "-o", w)[0] == 0
    code, out, _ = run(capsys, "analyze", "triviality", s, "--weights", w)
    assert out.strip() == "non-trivial"


def test_example_all(tmp_path, capsys):
    code, out, _ = run(capsys, "example", "all", "--out-dir", tmp_path)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 10 and all(line.split("\t")[1] == "PASS" for line in lines)
    assert (tmp_path / "A1.png").exists() and (tmp_path / "A_of_d.svd.png").exists()
    M, doc = io.load(tmp_path / "hura5.json")
    assert np.array_equal(M, io.golden_matrix("hura5_block", {"a": 2, "b": 3, "c": 5}))


def test_example_with_symbols(capsys):
    code, out, _ = run(capsys, "example", "cyclic4", "--set", "a=1+1j", "--json", "--no-figures")
    assert code == 0 and json.loads(out)[0]["golden"] is True
