"""Small dense kernels: Hermitian Jacobi eigensolver, SVD, pseudo-inverse, pivoted elimination."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 100


class ConvergenceError(ArithmeticError):
    def __init__(self, msg: str, residual: float):
        super().__init__(f"{msg} (off-diagonal residual {residual:.3e})")
        self.residual = residual


def _offdiag(G: np.ndarray) -> float:
    # subtracting the diagonal from the full norm cancels badly near convergence
    off = G - np.diag(np.diag(G))
    return float(np.linalg.norm(off))


def hermitian_eig(G, tol: float = OFFDIAG_TOL, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a Hermitian matrix by cyclic Jacobi.

    Returns ``(w, V)`` with ``G = V diag(w) V^H``, eigenvalues descending.
    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||G||_F)``.
    """
    G = np.array(G, dtype=np.complex128)
    n = G.shape[0]
    if G.shape != (n, n):
        raise ValueError("matrix must be square")
    G = (G + G.conj().T) / 2
    V = np.eye(n, dtype=np.complex128)
    bound = tol * max(1.0, float(np.linalg.norm(G)))
    for _ in range(max_sweeps):
        if _offdiag(G) <= bound:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = G[p, q]
                ag = abs(g)
                if ag <= 1e-300:
                    continue
                J = _jacobi_rotation(G[p, p].real, G[q, q].real, g)
                idx = [p, q]
                G[:, idx] = G[:, idx] @ J
                G[idx, :] = J.conj().T @ G[idx, :]
                G[q, p] = G[p, q] = 0.0
                V[:, idx] = V[:, idx] @ J
    else:
        res = _offdiag(G)
        if res > bound:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", res)
    w = np.real(np.diag(G))
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


@dataclass(frozen=True)
class SVD:
    U: np.ndarray  # columns for the retained singular values
    s: np.ndarray  # all singular values, descending
    V: np.ndarray  # all right singular vectors
    rank: int


def _jacobi_rotation(app: float, aqq: float, g: complex) -> np.ndarray:
    """2x2 unitary ``J`` with ``J^H [[app, g], [conj g, aqq]] J`` diagonal."""
    ag = abs(g)
    phase = g / ag
    theta = (aqq - app) / (2 * ag)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(1.0, theta))
    c = 1.0 / np.hypot(1.0, t)
    s = t * c
    return np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]], dtype=np.complex128)


def svd(A, rcond: float = 1e-12, tol: float = OFFDIAG_TOL, max_sweeps: int = MAX_SWEEPS) -> SVD:
    """SVD by cyclic Jacobi on the Gram matrix ``A^H A``, applied implicitly.

    Each rotation is the one that annihilates a Gram entry
    ``a_p^H a_q``; it is applied to the columns of ``A`` rather than to
    the Gram matrix, which keeps small singular values accurate.  Sweeps
    stop when every ``|a_p^H a_q| <= tol * ||a_p|| ||a_q||``.  Singular
    values with ``s <= rcond * s_max`` count as zero.
    """
    W = np.array(A, dtype=np.complex128)
    if W.ndim != 2:
        raise ValueError("expected a matrix")
    n = W.shape[1]
    V = np.eye(n, dtype=np.complex128)
    worst = 0.0
    for _ in range(max_sweeps):
        worst = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                cols = W[:, [p, q]]
                app = float(np.vdot(cols[:, 0], cols[:, 0]).real)
                aqq = float(np.vdot(cols[:, 1], cols[:, 1]).real)
                g = complex(np.vdot(cols[:, 0], cols[:, 1]))
                scale = np.sqrt(app * aqq)
                if scale == 0.0 or abs(g) <= tol * scale:
                    continue
                worst = max(worst, abs(g) / scale)
                J = _jacobi_rotation(app, aqq, g)
                W[:, [p, q]] = cols @ J
                V[:, [p, q]] = V[:, [p, q]] @ J
        if worst == 0.0:
            break
    else:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", worst)
    s = np.linalg.norm(W, axis=0)
    order = np.argsort(-s, kind="stable")
    s, W, V = s[order], W[:, order], V[:, order]
    cut = rcond * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cut)) if s.size and s[0] > 0 else 0
    return SVD(W[:, :rank] / s[:rank], s, V, rank)


def singular_values(A) -> np.ndarray:
    return svd(A).s


def pinv(A, rcond: float = 1e-12) -> np.ndarray:
    """Moore-Penrose inverse ``V_r diag(1/s_r) U_r^H``."""
    f = svd(A, rcond)
    r = f.rank
    return (f.V[:, :r] / f.s[:r]) @ f.U.conj().T


def penrose_residuals(A, Ap) -> tuple[float, float, float, float]:
    """Max-entry residuals of the four Penrose identities."""
    A = np.asarray(A, dtype=np.complex128)
    Ap = np.asarray(Ap, dtype=np.complex128)
    AAp, ApA = A @ Ap, Ap @ A

    def m(X):
        return float(np.max(np.abs(X))) if X.size else 0.0

    return (m(AAp @ A - A), m(ApA @ Ap - Ap), m(AAp - AAp.conj().T), m(ApA - ApA.conj().T))


def penrose_check(A, Ap, tol: float = 1e-9) -> bool:
    return max(penrose_residuals(A, Ap)) <= tol


def pivoted_elimination(A, tol: float = 1e-9) -> tuple[bool, float]:
    """Gaussian elimination with partial pivoting.

    Returns ``(nonsingular, |det|)``; a pivot of modulus ``<= tol``
    marks the matrix singular.
    """
    M = np.array(A, dtype=np.complex128)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("matrix must be square")
    det = 1.0
    ok = True
    for k in range(n):
        p = k + int(np.argmax(np.abs(M[k:, k])))
        piv = M[p, k]
        if abs(piv) <= tol:
            ok = False
            det = 0.0
            continue
        if p != k:
            M[[k, p]] = M[[p, k]]
        det *= abs(piv)
        M[k + 1:, k:] -= np.outer(M[k + 1:, k] / piv, M[k, k:])
    return ok, det
