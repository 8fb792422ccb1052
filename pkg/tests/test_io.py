import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ybekit import io
from ybekit.algebra import make_truncated_polynomial_ring
from ybekit.solutions import PartitionedSet, builtin_solution
from ybekit.weights import cyclic_g

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def roundtrip(obj):
    text = io.canonical_dumps(io.to_json(obj))
    back, _ = io.loads(text)
    return text, back


def test_brace_and_ring_roundtrip(f2x3):
    text, back = roundtrip(f2x3)
    assert (back.add == f2x3.add).all() and (back.circ == f2x3.circ).all()
    assert back.labels == f2x3.labels
    R = make_truncated_polynomial_ring(3, 2)
    text, back = roundtrip(R)
    assert (back.mul == R.mul).all()


def test_solution_weights_partition_roundtrip():
    S = builtin_solution("hura5")
    assert roundtrip(S)[1] == S
    D = cyclic_g([1 + 2j, -0.1, 3e-5j])
    assert np.array_equal(roundtrip(D)[1].d, D.d)
    P = PartitionedSet.of(5, [[0, 3], [1]])
    assert roundtrip(P)[1].as_sets() == P.as_sets()


def test_solution_json_layout():
    doc = io.to_json(builtin_solution("cyclic", 3))
    assert doc["kind"] == "solution" and doc["n"] == 3
    assert doc["r"][0] == [1, 2]


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=12))
def test_matrix_roundtrip_is_byte_stable(vals):
    M = np.array([complex(a, b) for a, b in vals]).reshape(1, -1)
    text, back = roundtrip(M)
    assert np.array_equal(back, M)
    assert io.canonical_dumps(io.to_json(back)) == text


def test_canonical_key_order():
    text = io.canonical_dumps({"b": 1, "a": [0.1, 2.0]})
    assert text == '{"a":[0.1,2.0],"b":1}\n'


def test_origin_kept(tmp_path):
    p = tmp_path / "s.json"
    io.dump(builtin_solution("flip", 2), p, {"command": "test"})
    obj, doc = io.load(p)
    assert doc["origin"] == {"command": "test"}


@pytest.mark.parametrize("text", [
    "{", "[]", '{"kind":"mystery"}', '{"kind":"brace","order":2,"add":[[0,1],[1,0]]}',
    '{"kind":"solution","n":2,"r":[[0,0]]}', '{"kind":"matrix","rows":1,"cols":2,"entries":[[1,0]]}',
    '{"kind":"weights","n":1,"d":[[0,0]]}', '{"kind":"ring","order":2,"add":"x","mul":[[0,0],[0,0]]}',
    '{"kind":"partition","n":3,"classes":[[0,1],[1]]}',
])
def test_schema_errors(text):
    with pytest.raises(io.SchemaError):
        io.loads(text)


def test_missing_file(tmp_path):
    with pytest.raises(io.SchemaError):
        io.load(tmp_path / "absent.json")


def test_goldens_carry_exact_rationals():
    names = io.golden_names()
    assert {"householder_A1", "alphaB_betaE_A2", "A_of_d", "C_dagger", "counterexample_X"} <= set(names)
    for name in names:
        doc = io.load_golden(name)
        if "rational" in doc:
            M = io.golden_matrix(name)
            exact = np.array([float(Fraction(q)) for q in doc["rational"]]).reshape(M.shape)
            assert np.array_equal(M.real, exact) and not M.imag.any()
    doc = io.load_golden("alphaB_betaE_A2")
    assert set(doc["rational"]) == {"7/9", "-2/9"}


def test_symbolic_golden_needs_symbols():
    with pytest.raises(KeyError):
        io.golden_matrix("cyclic3", {"a": 1})
    with pytest.raises(KeyError):
        io.load_golden("no_such_golden")


def test_golden_files_are_canonical():
    from importlib import resources
    for name in io.golden_names():
        raw = (resources.files("ybekit.golden") / f"{name}.json").read_text()
        assert json.loads(raw)["kind"] in ("matrix", "symbolic_matrix")


def test_negative_zero_survives():
    M = np.array([[complex(0.0, -0.0), complex(-0.0, 1.0)]])
    text, back = roundtrip(M)
    assert io.canonical_dumps(io.to_json(back)) == text
    assert "-0.0" in text
