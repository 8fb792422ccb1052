"""Dense complex matrix kernels for the matrix Yang-Baxter equation.

Matrices are plain ``numpy`` complex arrays.  Basis vectors of
``V (x) V`` are ordered lexicographically: pair ``(i, j)`` is index
``i*n + j``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import reduce
from math import isqrt

import numpy as np

from ybekit.linalg import pinv, penrose_check, pivoted_elimination, singular_values  # noqa: F401
from ybekit.solutions import SetSolution, builtin_solution, solution_properties
from ybekit.weights import WeightSystem

TOL = 1e-9
SUPPORT_EPS = 1e-12


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {A.shape}")
    return A


def kron(*mats) -> np.ndarray:
    return reduce(np.kron, (as_matrix(m) for m in mats))


def hadamard(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    return A * B


def base_dim(X) -> int:
    N = as_matrix(X).shape[0]
    n = isqrt(N)
    if X.shape != (N, N) or n * n != N:
        raise ValueError(f"matrix of shape {X.shape} is not n^2 x n^2")
    return n


def qybe_residual(X, n: int | None = None) -> float:
    """Max entry of ``(X(x)I)(I(x)X)(X(x)I) - (I(x)X)(X(x)I)(I(x)X)``."""
    X = as_matrix(X)
    nn = base_dim(X)
    if n is not None and n != nn:
        raise ValueError(f"matrix is {X.shape[0]}x{X.shape[0]}, not {n * n}x{n * n}")
    I = np.eye(nn)
    X1, X2 = np.kron(X, I), np.kron(I, X)
    return float(np.max(np.abs(X1 @ X2 @ X1 - X2 @ X1 @ X2)))


def qybe_check(X, n: int | None = None, tol: float = TOL) -> tuple[bool, float]:
    res = qybe_residual(X, n)
    return res <= tol, res


def is_nonsingular(A, tol: float = TOL) -> bool:
    return pivoted_elimination(A, tol)[0]


def is_r_matrix(X, n: int | None = None, tol: float = TOL) -> bool:
    return qybe_check(X, n, tol)[0] and is_nonsingular(X, tol)


def is_unitary(A, tol: float = TOL) -> bool:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    return float(np.max(np.abs(A.conj().T @ A - np.eye(A.shape[0])))) <= tol


def kron_pair_criterion(C, D, tol: float = TOL) -> bool:
    """``C^2 (x) DCD (x) D == C (x) CDC (x) D^2``, equivalent to QYBE for ``C (x) D``."""
    C, D = as_matrix(C), as_matrix(D)
    if C.shape != D.shape or C.shape[0] != C.shape[1]:
        raise ValueError("C and D must be square of equal size")
    lhs = kron(C @ C, D @ C @ D, D)
    rhs = kron(C, C @ D @ C, D @ D)
    return float(np.max(np.abs(lhs - rhs))) <= tol


def conjugate_similarity(P, X) -> np.ndarray:
    """``(P (x) P) X (P (x) P)^-1``."""
    P, X = as_matrix(P), as_matrix(X)
    if not is_nonsingular(P, SUPPORT_EPS):
        raise ValueError("P is singular")
    if X.shape[0] != P.shape[0] ** 2:
        raise ValueError("X must be n^2 x n^2 for n x n P")
    PP = np.kron(P, P)
    return PP @ X @ np.linalg.inv(PP)


@dataclass(frozen=True)
class MonomialPattern:
    """Column ``p`` has its single non-zero ``values[p]`` in row ``perm[p]``."""

    n: int
    perm: np.ndarray
    values: np.ndarray

    def solution(self) -> SetSolution:
        n = self.n
        k, l = np.divmod(self.perm, n)
        return SetSolution(np.stack([k, l], axis=-1).reshape(n, n, 2))

    def weights(self) -> WeightSystem:
        return WeightSystem(self.values.reshape(self.n, self.n))


class NotMonomialError(ValueError):
    def __init__(self, column: int, reason: str):
        super().__init__(f"not monomial: column {column} {reason}")
        self.column = column


def monomial_from_bvst(S: SetSolution, D: WeightSystem) -> np.ndarray:
    """Column ``(i,j)`` holds ``d_(i,j)`` in row ``r(i,j)``."""
    if S.n != D.n:
        raise ValueError(f"solution has {S.n} points but weights have {D.n}")
    N = S.n ** 2
    M = np.zeros((N, N), dtype=np.complex128)
    M[S.pair_perm, np.arange(N)] = D.d.reshape(-1)
    return M


def decode_monomial(A, eps: float = SUPPORT_EPS) -> MonomialPattern:
    A = as_matrix(A)
    n = base_dim(A)
    nz = np.abs(A) > eps
    per_col = nz.sum(axis=0)
    bad = np.flatnonzero(per_col != 1)
    if bad.size:
        c = int(bad[0])
        raise NotMonomialError(c, f"has {per_col[c]} non-zero entries")
    perm = np.argmax(nz, axis=0)
    per_row = nz.sum(axis=1)
    bad = np.flatnonzero(per_row != 1)
    if bad.size:
        c = int(np.flatnonzero(nz[bad[0]])[0]) if per_row[bad[0]] else int(bad[0])
        raise NotMonomialError(c, f"shares row {bad[0]} with another column")
    values = A[perm, np.arange(A.shape[1])]
    return MonomialPattern(n, perm, values)


def hadamard_rmatrix(A, B) -> np.ndarray:
    """Entrywise product of two monomial R-matrices with the same permutation support."""
    pa, pb = decode_monomial(A), decode_monomial(B)
    if not np.array_equal(pa.perm, pb.perm):
        raise ValueError("supports differ")
    return hadamard(A, B)


@dataclass(frozen=True)
class MultiplicativeMap:
    """``z -> z**power``, followed by complex conjugation when ``conjugate``."""

    power: int = 1
    conjugate: bool = False

    def __call__(self, z):
        w = np.asarray(z, dtype=np.complex128) ** self.power
        return np.conj(w) if self.conjugate else w

    def then(self, other: MultiplicativeMap) -> MultiplicativeMap:
        """``other`` applied after ``self``."""
        return MultiplicativeMap(self.power * other.power, self.conjugate != other.conjugate)


def apply_multiplicative_map(A, G: MultiplicativeMap) -> np.ndarray:
    """``G`` on the non-zero entries of a monomial matrix; zeros stay zero."""
    A = as_matrix(A)
    decode_monomial(A)
    out = np.zeros_like(A)
    nz = np.abs(A) > SUPPORT_EPS
    out[nz] = G(A[nz])
    return out


@dataclass(frozen=True)
class InvolutiveReport:
    qybe: bool
    permutation: bool
    symmetric: bool
    squares_to_identity: bool
    blocks: bool

    @property
    def accepted(self) -> bool:
        return self.qybe and self.permutation and self.symmetric and self.blocks


def classify_involutive_matrix(A, n: int | None = None) -> tuple[InvolutiveReport, SetSolution | None]:
    """Check each matrix condition for an involutive non-degenerate solution separately.

    Conditions: the QYBE, permutation matrix, symmetric, ``A^2 = I``, and
    every ``n x n`` block holds exactly one 1.  When the QYBE, permutation,
    symmetry and the block condition hold, the decoded solution is returned.
    """
    A = as_matrix(A)
    nn = base_dim(A)
    if n is not None and n != nn:
        raise ValueError(f"matrix is not {n * n}x{n * n}")
    n = nn
    R = A.real
    if np.any(A.imag != 0) or not np.all((R == 0) | (R == 1)):
        raise ValueError("matrix entries must be 0 or 1")
    ones = R == 1
    N = n * n
    permutation = bool((ones.sum(axis=0) == 1).all() and (ones.sum(axis=1) == 1).all())
    symmetric = bool((ones == ones.T).all())
    blocks = bool((ones.reshape(n, n, n, n).sum(axis=(1, 3)) == 1).all())
    if permutation:
        # compose column -> row maps instead of multiplying matrices
        perm = np.argmax(ones, axis=0)
        squares = bool((perm[perm] == np.arange(N)).all())
        qybe = _permutation_braids(perm, n)
    else:
        squares = bool(np.array_equal(R @ R, np.eye(N)))
        qybe = qybe_residual(R) == 0.0  # 0/1 entries keep float products exact
    report = InvolutiveReport(qybe, permutation, symmetric, squares, blocks)
    if not report.accepted:
        return report, None
    return report, decode_monomial(A).solution()


def _permutation_braids(perm: np.ndarray, n: int) -> bool:
    """Braid relation for the permutation matrix sending basis ``p`` to ``perm[p]``."""
    t = np.arange(n ** 3)

    def first(v):  # X (x) I
        h, c = np.divmod(v, n)
        return perm[h] * n + c

    def second(v):  # I (x) X
        a, t = np.divmod(v, n * n)
        return a * n * n + perm[t]

    return bool(np.array_equal(first(second(first(t))), second(first(second(t)))))


def permutation_matrix_report(perm, n: int) -> tuple[InvolutiveReport, SetSolution | None]:
    """:func:`classify_involutive_matrix` for the 0/1 matrix with ``A[perm[p], p] = 1``."""
    N = n * n
    A = np.zeros((N, N))
    A[np.asarray(perm), np.arange(N)] = 1
    return classify_involutive_matrix(A, n)


def _poly_mul(P: dict, Q: dict) -> dict:
    out: dict = {}
    for (a, b), X in P.items():
        for (c, d), Y in Q.items():
            key = (a + c, b + d)
            out[key] = out.get(key, 0) + X @ Y
    return out


def parametrized_ybe_residual(A, alpha: complex = 1.0, n: int | None = None) -> float:
    """Largest coefficient mismatch for ``R(x) = I + alpha x A``.

    Both sides of
    ``(R(x)(x)I)(I(x)R(x+y))(R(y)(x)I) = (I(x)R(y))(R(x+y)(x)I)(I(x)R(x))``
    are expanded as polynomials in ``x, y`` with matrix coefficients.
    """
    A = as_matrix(A)
    nn = base_dim(A)
    if n is not None and n != nn:
        raise ValueError(f"matrix is not {n * n}x{n * n}")
    n = nn
    I1, I3 = np.eye(n), np.eye(n ** 3)
    L, Rt = alpha * np.kron(A, I1), alpha * np.kron(I1, A)

    def R_of(M, x: int, y: int) -> dict:
        # I + M*(x-coefficient * x + y-coefficient * y)
        out = {(0, 0): I3}
        if x:
            out[(1, 0)] = x * M
        if y:
            out[(0, 1)] = y * M
        return out

    lhs = reduce(_poly_mul, [R_of(L, 1, 0), R_of(Rt, 1, 1), R_of(L, 0, 1)])
    rhs = reduce(_poly_mul, [R_of(Rt, 0, 1), R_of(L, 1, 1), R_of(Rt, 1, 0)])
    zero = np.zeros_like(I3)
    return max(float(np.max(np.abs(lhs.get(k, zero) - rhs.get(k, zero)))) for k in set(lhs) | set(rhs))


def parametrized_ybe_check(A, alpha: complex = 1.0, n: int | None = None, tol: float = TOL) -> bool:
    A = as_matrix(A)
    ok, _ = qybe_check(A, n, tol)
    if not ok:
        raise ValueError("A does not satisfy the QYBE")
    if float(np.max(np.abs(A @ A - np.eye(A.shape[0])))) > tol:
        raise ValueError("A^2 is not the identity")
    return parametrized_ybe_residual(A, alpha, n) <= tol


# ---- builders for the printed matrices -------------------------------------

def flip_matrix(n: int) -> np.ndarray:
    return monomial_from_bvst(builtin_solution("flip", n), WeightSystem.constant(n))


def a_of_d(d) -> np.ndarray:
    """``diag(d) F`` with ``F`` the flip permutation: row ``(i,j)`` holds ``d_(i,j)`` in column ``(j,i)``."""
    d = np.asarray(d, dtype=np.complex128)
    n = isqrt(d.size)
    if n * n != d.size:
        raise ValueError("d must have n^2 entries")
    if np.any(np.abs(d) <= SUPPORT_EPS):
        raise ValueError("A(d) needs non-zero d")
    return np.diag(d) @ flip_matrix(n)


def householder_a1(n: int) -> np.ndarray:
    """``H F`` with ``H = I - (2/n^2) e e^T``; equals ``F - (2/n^2) E``."""
    N = n * n
    H = np.eye(N) - (2.0 / N) * np.ones((N, N))
    return (H @ flip_matrix(n)).astype(np.complex128)


def vandermonde_p(n: int = 3) -> np.ndarray:
    """``P[k, j] = w^(k*(n-j))`` with ``w = exp(2 pi i / n)``; columns list roots ``w^n, ..., w^1``."""
    k = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    return np.exp(2j * np.pi * ((k * (n - j)) % n) / n)


def cyclic_unit_matrix(n: int) -> np.ndarray:
    return monomial_from_bvst(builtin_solution("cyclic", n), WeightSystem.constant(n))


def alpha_b_beta_e(n: int = 3, alpha: complex = -2 / 9, beta: complex = 7 / 9, literal: bool = False) -> np.ndarray:
    """Cyclic unit matrix ``B`` mixed with the all-ones ``E``.

    By default entries on the support of ``B`` are ``beta`` and all others
    ``alpha``, i.e. ``(beta - alpha) B + alpha E``; for the defaults this is
    the printed unitary matrix.  ``literal=True`` returns ``alpha B + beta E``.
    """
    B = cyclic_unit_matrix(n)
    E = np.ones_like(B)
    if literal:
        return alpha * B + beta * E
    return (beta - alpha) * B + alpha * E


def idempotent_c() -> np.ndarray:
    return np.array([[1, 0, 1, 1], [0, 1, 1, 2], [0, 0, 0, 0], [0, 0, 0, 0]], dtype=np.complex128)


def counterexample_x() -> np.ndarray:
    return np.array([[1, 0, 0, 0], [0, -3, 2, 0], [0, 2, 0, 0], [0, 0, 0, 1]], dtype=np.complex128)


def build_example(kind: str, **params) -> np.ndarray:
    if kind == "A_of_d":
        d = params.get("d")
        if d is None:
            n = params.get("n", 3)
            d = np.arange(n * n, 0, -1, dtype=float)
        return a_of_d(d)
    if kind == "householder_A1":
        return householder_a1(params.get("n", 3))
    if kind == "vandermonde_P":
        return vandermonde_p(params.get("n", 3))
    if kind == "alphaB_betaE":
        return alpha_b_beta_e(params.get("n", 3), params.get("alpha", -2 / 9),
                              params.get("beta", 7 / 9), params.get("literal", False))
    if kind == "idempotent_C":
        return idempotent_c()
    if kind == "counterexample_X":
        return counterexample_x()
    raise ValueError(f"unknown example {kind!r}")


def omega(k: int = 1, n: int = 3) -> complex:
    return cmath.exp(2j * cmath.pi * k / n)


def expected_similarity_d(which: str) -> np.ndarray:
    """Diagonal-flip weights that the Vandermonde similarity produces."""
    w1, w2, w3 = omega(1), omega(2), omega(3)
    if which == "A1":
        return np.array([-1] + [1] * 8, dtype=np.complex128)
    if which == "A2":
        return np.array([-w3, w2, w1, w1, w3, w2, w2, w1, w3])
    raise ValueError(which)


def inverse_similarity(P, X) -> np.ndarray:
    """``(P (x) P)^-1 X (P (x) P)``."""
    return conjugate_similarity(np.linalg.inv(as_matrix(P)), X)


def monomial_is_braided(S: SetSolution, D: WeightSystem, tol: float = TOL) -> bool:
    return qybe_check(monomial_from_bvst(S, D), S.n, tol)[0]


def involutive_solution_matrix(S: SetSolution) -> np.ndarray:
    props = solution_properties(S)
    if not (props.involutive and props.nondegenerate):
        raise ValueError("solution must be involutive and non-degenerate")
    return monomial_from_bvst(S, WeightSystem.constant(S.n))
