import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import rng
from ybekit import rmatrix as rm
from ybekit.io import golden_matrix, load_golden
from ybekit.linalg import penrose_check, pinv, singular_values
from ybekit.solutions import SetSolution, builtin_solution
from ybekit.weights import WeightSystem, cyclic_g, hura5_g, verify_cocycle

W = [rm.omega(k) for k in range(4)]


def sympy_qybe(X, n):
    X = sympy.Matrix(X)
    I = sympy.eye(n)
    A, B = sympy.kronecker_product(X, I), sympy.kronecker_product(I, X)
    return sympy.simplify(A * B * A - B * A * B) == sympy.zeros(n ** 3, n ** 3)


# ---- kernels -------------------------------------------------------------------------

def test_kron_examples():
    assert np.array_equal(rm.kron(np.eye(2), np.eye(2)), np.eye(4))
    e1, e2 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    K = rm.kron(e1, e2)
    assert K[1, 1] == 1 and np.count_nonzero(K) == 1


@given(st.integers(0, 10_000))
def test_kron_mixed_product(seed):
    gen = rng(seed)
    A, B, C, D = (gen.normal(size=(2, 2)) + 1j * gen.normal(size=(2, 2)) for _ in range(4))
    assert np.allclose(rm.kron(A, B) @ rm.kron(C, D), rm.kron(A @ C, B @ D))
    assert np.allclose(rm.kron(A, B, C), np.kron(np.kron(A, B), C))


def test_qybe_examples():
    assert rm.qybe_check(np.eye(9), 3) == (True, 0.0)
    X = rm.counterexample_x()
    assert rm.qybe_check(X, 2)[0]
    assert sympy_qybe(X.real.astype(int), 2)
    ok, res = rm.qybe_check(rm.hadamard(X, X), 2)
    assert not ok and res > 0.1
    assert not sympy_qybe((X.real * X.real).astype(int), 2)


def test_qybe_dimension_errors():
    with pytest.raises(ValueError):
        rm.qybe_check(np.eye(5))
    with pytest.raises(ValueError):
        rm.qybe_check(np.eye(9), 2)


def test_r_matrix_tests():
    C = rm.idempotent_c()
    X = rm.kron(C, np.eye(4))
    assert rm.qybe_check(X, 4)[0]
    assert not rm.is_r_matrix(X, 4)
    assert rm.is_r_matrix(np.eye(4))
    assert rm.is_r_matrix(rm.householder_a1(3))
    assert rm.is_unitary(rm.householder_a1(3))
    assert not rm.is_unitary(rm.a_of_d(range(1, 10)))


# ---- monomial matrices -----------------------------------------------------------------

def test_monomial_layout_cyclic3():
    a, b, c = 2.0, 3.0, 5.0
    M = rm.monomial_from_bvst(builtin_solution("cyclic", 3), cyclic_g([c, b, a]))
    G = golden_matrix("cyclic3", {"a": a, "b": b, "c": c})
    assert np.array_equal(M, G)
    assert np.count_nonzero(M, axis=0).tolist() == [1] * 9


def test_decode_roundtrip_and_identity():
    S, D = builtin_solution("hura5"), hura5_g([[2, 1j], [1j, -3]])
    pat = rm.decode_monomial(rm.monomial_from_bvst(S, D))
    assert pat.solution() == S and np.array_equal(pat.weights().d, D.d)
    pat = rm.decode_monomial(np.eye(4))
    assert np.array_equal(pat.perm, np.arange(4)) and np.all(pat.values == 1)


def test_decode_rejects_counterexample():
    with pytest.raises(rm.NotMonomialError) as err:
        rm.decode_monomial(rm.counterexample_x())
    assert err.value.column == 1


@given(st.integers(0, 10_000), st.sampled_from(["flip", "cyclic", "hura5"]))
def test_decode_inverts_assembly(seed, kind):
    S = builtin_solution(kind, None if kind == "hura5" else 3)
    gen = rng(seed)
    D = WeightSystem(gen.normal(size=(S.n, S.n)) + 3 + 1j * gen.normal(size=(S.n, S.n)))
    pat = rm.decode_monomial(rm.monomial_from_bvst(S, D))
    assert pat.solution() == S
    assert np.array_equal(pat.weights().d, D.d)


@given(st.integers(0, 10_000), st.sampled_from(["cyclic", "hura5"]))
def test_singular_values_are_weight_moduli(seed, kind):
    S = builtin_solution(kind, 3 if kind == "cyclic" else None)
    gen = rng(seed)
    D = WeightSystem(np.exp(gen.normal(size=(S.n, S.n)) + 1j * gen.uniform(0, 6, size=(S.n, S.n))))
    s = singular_values(rm.monomial_from_bvst(S, D))
    assert np.allclose(s, np.sort(np.abs(D.d).ravel())[::-1], atol=1e-9)


def test_hadamard_examples():
    S = builtin_solution("cyclic", 3)
    A = rm.monomial_from_bvst(S, cyclic_g([2, 3, 5]))
    B = rm.monomial_from_bvst(S, cyclic_g([7, 11, 13]))
    ones = (np.abs(A) > 0).astype(float)
    assert np.array_equal(rm.hadamard(A, ones), A)
    H = rm.hadamard_rmatrix(A, B)
    assert np.array_equal(H, rm.monomial_from_bvst(S, cyclic_g([14, 33, 65])))
    assert rm.qybe_check(H, 3)[0]
    X = rm.counterexample_x()
    with pytest.raises(rm.NotMonomialError):
        rm.hadamard_rmatrix(X, X)
    with pytest.raises(ValueError, match="supports differ"):
        rm.hadamard_rmatrix(A, rm.flip_matrix(3))


@given(st.integers(0, 10_000))
def test_hadamard_of_braided_monomials_braids(seed):
    gen = rng(seed)
    S = builtin_solution("hura5")
    g1, g2 = gen.uniform(1, 3, size=3), gen.uniform(1, 3, size=3)
    A = rm.monomial_from_bvst(S, hura5_g([[g1[0], g1[1]], [g1[1], g1[2]]]))
    B = rm.monomial_from_bvst(S, hura5_g([[g2[0], g2[1]], [g2[1], g2[2]]]))
    assert rm.qybe_check(rm.hadamard_rmatrix(A, B), 4)[0]


def test_multiplicative_maps():
    S = builtin_solution("cyclic", 3)
    A = rm.monomial_from_bvst(S, cyclic_g([2, 3j, 5]))
    assert np.array_equal(rm.apply_multiplicative_map(A, rm.MultiplicativeMap()), A)
    sq = rm.apply_multiplicative_map(A, rm.MultiplicativeMap(power=2))
    assert np.allclose(sq, rm.monomial_from_bvst(S, cyclic_g([4, -9, 25])))
    assert rm.qybe_check(sq, 3)[0]
    U = rm.monomial_from_bvst(S, cyclic_g([1j, W[1], -1]))
    cj = rm.apply_multiplicative_map(U, rm.MultiplicativeMap(conjugate=True))
    assert np.array_equal(cj, U.conj()) and rm.qybe_check(cj, 3)[0]
    G = rm.MultiplicativeMap(power=-1).then(rm.MultiplicativeMap(power=3, conjugate=True))
    assert G.power == -3 and G.conjugate
    assert np.isclose(G(2 + 1j), np.conj((2 + 1j) ** -3))
    with pytest.raises(rm.NotMonomialError):
        rm.apply_multiplicative_map(rm.counterexample_x(), G)


def test_kron_pair_examples():
    C = rm.idempotent_c()
    assert rm.kron_pair_criterion(C, np.eye(4))
    C2 = np.array([[1.0, 1.0], [0.0, 0.0]])
    assert rm.kron_pair_criterion(C2, np.eye(2))
    with pytest.raises(ValueError):
        rm.kron_pair_criterion(np.eye(2), np.eye(3))


@given(st.integers(0, 10_000), st.sampled_from([2, 3]), st.booleans())
def test_kron_pair_criterion_equals_qybe(seed, n, structured):
    gen = rng(seed)
    if structured:
        # commuting pairs satisfy the criterion, so the agreement is tested both ways
        C = gen.normal(size=(n, n))
        D = np.eye(n) * gen.normal() if seed % 2 else C @ C
    else:
        C, D = gen.normal(size=(n, n)), gen.normal(size=(n, n))
    assert rm.kron_pair_criterion(C, D) == rm.qybe_check(rm.kron(C, D), n)[0]


# ---- pseudo-inverse example -------------------------------------------------------------

def test_idempotent_pinv():
    C = rm.idempotent_c()
    assert np.array_equal(C @ C, C)
    printed = golden_matrix("C_dagger")
    exact = sympy.Matrix(C.real.astype(int)).pinv()
    assert exact == sympy.Rational(1, 3) * sympy.Matrix([[2, -1, 0, 0], [-1, 1, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0]])
    assert np.max(np.abs(pinv(C) - printed)) < 1e-12
    assert np.allclose(np.array(exact, dtype=float), printed.real, atol=1e-15)
    X = rm.kron(C, np.eye(4))
    assert rm.qybe_check(X, 4)[0]
    Xp = pinv(X)
    assert penrose_check(X, Xp)
    assert not rm.qybe_check(Xp, 4)[0]


# ---- classification -----------------------------------------------------------------------

def test_classify_examples():
    rep, S = rm.classify_involutive_matrix(rm.flip_matrix(3), 3)
    assert rep.accepted and S == builtin_solution("flip", 3)
    rep, S = rm.classify_involutive_matrix(rm.cyclic_unit_matrix(3))
    assert rep.accepted and S == builtin_solution("cyclic", 3)
    N = 4
    perm = np.arange(N)
    perm[[0, 1, 2]] = [1, 2, 0]
    rep, S = rm.permutation_matrix_report(perm, 2)
    assert not rep.symmetric and S is None
    with pytest.raises(ValueError):
        rm.classify_involutive_matrix(rm.householder_a1(2))


def test_classify_reports_qybe_separately():
    # symmetric involutive permutation with one 1 per block that does not braid
    rep, sol = rm.permutation_matrix_report([0, 3, 2, 1], 2)
    assert rep.permutation and rep.symmetric and rep.blocks and rep.squares_to_identity
    assert not rep.qybe and not rep.accepted and sol is None


def test_classify_agrees_with_matrix_products():
    gen = rng(6)
    for _ in range(200):
        perm = gen.permutation(9)
        A = np.zeros((9, 9))
        A[perm, np.arange(9)] = 1
        rep, _ = rm.classify_involutive_matrix(A)
        assert rep.qybe == (rm.qybe_residual(A) == 0)
        assert rep.squares_to_identity == np.array_equal(A @ A, np.eye(9))


# ---- parametrized equation -------------------------------------------------------------------

def test_parametrized_examples():
    F = rm.flip_matrix(2)
    assert rm.parametrized_ybe_check(F, 1.0)
    assert rm.parametrized_ybe_check(F, 0.0)
    assert rm.parametrized_ybe_check(rm.cyclic_unit_matrix(3), 0.7 + 1j)
    with pytest.raises(ValueError, match="identity"):
        rm.parametrized_ybe_check(rm.monomial_from_bvst(builtin_solution("cyclic", 2), cyclic_g([1, 2])))


def test_parametrized_residual_detects_non_involution():
    # a braided matrix with A^2 != I makes the polynomial identity fail
    A = rm.monomial_from_bvst(builtin_solution("cyclic", 2), cyclic_g([1, 2]))
    assert rm.parametrized_ybe_residual(A, 1.0) > 0.1


# ---- printed builders -----------------------------------------------------------------------------

def exact_golden(name):
    doc = load_golden(name)
    return np.array([float(Fraction(q)) for q in doc["rational"]]).reshape(doc["rows"], doc["cols"])


def test_householder_layout():
    A1 = rm.build_example("householder_A1", n=3)
    assert np.array_equal(A1, golden_matrix("householder_A1"))
    vals = set(np.round(A1.real * 9).astype(int).ravel().tolist())
    assert vals == {7, -2}
    assert np.array_equal(A1.real, exact_golden("householder_A1"))


def test_alpha_beta_layout():
    A2 = rm.build_example("alphaB_betaE")
    assert np.array_equal(A2, golden_matrix("alphaB_betaE_A2"))
    assert rm.is_unitary(A2) and rm.qybe_check(A2, 3)[0]
    lit = rm.alpha_b_beta_e(literal=True)
    assert rm.qybe_check(lit, 3)[0] and not rm.is_unitary(lit)


def test_a_of_d():
    d = np.arange(1, 10) * (1 + 0.5j)
    A = rm.build_example("A_of_d", d=d)
    assert np.array_equal(A, golden_matrix("A_of_d", {f"d{i}": d[i - 1] for i in range(1, 10)}))
    assert rm.qybe_check(A, 3)[0]
    assert np.allclose(singular_values(A), np.sort(np.abs(d))[::-1], atol=1e-12)
    with pytest.raises(ValueError):
        rm.a_of_d([1, 0, 1, 1])
    with pytest.raises(ValueError):
        rm.a_of_d([1, 2, 3])
    with pytest.raises(ValueError):
        rm.build_example("nope")


def test_vandermonde():
    P = rm.vandermonde_p(3)
    assert np.allclose(P[1], [1, W[2], W[1]])
    assert np.allclose(P.conj().T @ P, 3 * np.eye(3))


def test_similarities():
    P = rm.vandermonde_p(3)
    for name, A in (("A1", rm.householder_a1(3)), ("A2", rm.alpha_b_beta_e())):
        B = rm.inverse_similarity(P, A)
        assert np.max(np.abs(B - rm.a_of_d(rm.expected_similarity_d(name)))) < 1e-9
    X = rm.householder_a1(3)
    assert np.allclose(rm.conjugate_similarity(np.eye(3), X), X)
    with pytest.raises(ValueError):
        rm.conjugate_similarity(np.ones((3, 3)), X)


def test_cocycle_matrix_equivalence_on_random_tables():
    gen = rng(12)
    S = builtin_solution("cyclic", 3)
    for _ in range(30):
        D = WeightSystem(np.exp(gen.normal(size=(3, 3))))
        assert verify_cocycle(S, D) == rm.qybe_check(rm.monomial_from_bvst(S, D), 3)[0]


def test_involutive_solution_matrix_squares_to_identity():
    for S in (builtin_solution("flip", 3), builtin_solution("cyclic", 4), builtin_solution("hura5")):
        A = rm.involutive_solution_matrix(S)
        assert np.array_equal(A @ A, np.eye(S.n ** 2))
    with pytest.raises(ValueError):
        rm.involutive_solution_matrix(SetSolution.from_function(2, lambda x, y: ((y + 1) % 2, x)))
