"""Weight systems ``D = {d_(x,y)}`` on set-theoretic solutions.

The deformed map is ``r^D(x (x) y) = d_(x,y) * (sigma_x(y) (x) tau_y(x))``.
It satisfies the braid relation exactly when ``D`` passes
:func:`verify_cocycle`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ybekit.algebra import FiniteBrace, is_ideal, nilpotency_chains, restrict_brace
from ybekit.intlin import row_echelon
from ybekit.solutions import (
    PartitionedSet,
    SetSolution,
    builtin_solution,
    i_retraction,
    one_generator_solution,
    orbits,
    solution_properties,
)

TOL = 1e-9
ZERO_EPS = 1e-12


class WeightSystem:
    """Complex table ``d[x, y]`` of non-zero weights."""

    def __init__(self, d, eps: float = ZERO_EPS):
        arr = np.array(d, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError(f"d must be a non-empty square table, got shape {arr.shape}")
        small = np.argwhere(np.abs(arr) <= eps)
        if small.size:
            x, y = small[0]
            raise ValueError(f"zero weight at ({x}, {y})")
        arr.setflags(write=False)
        self.d = arr

    @classmethod
    def constant(cls, n: int, value: complex = 1.0) -> WeightSystem:
        return cls(np.full((n, n), value, dtype=np.complex128))

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def __call__(self, x: int, y: int) -> complex:
        return complex(self.d[x, y])

    def __repr__(self):
        return f"WeightSystem(n={self.n})"


@dataclass(frozen=True)
class TrivialityWitness:
    alpha: np.ndarray
    c: complex

    def weights(self, S: SetSolution) -> WeightSystem:
        """``d_(x,y) = c * a_x * a_y / (a_sigma * a_tau)``."""
        a = self.alpha
        return WeightSystem(self.c * a[:, None] * a[None, :] / (a[S.left] * a[S.right]))

    def residual(self, S: SetSolution, D: WeightSystem) -> float:
        return float(np.max(np.abs(self.weights(S).d - D.d)))

    def rescaled(self, k: complex) -> TrivialityWitness:
        return TrivialityWitness(self.alpha * k, self.c)


def _check_dims(S: SetSolution, D: WeightSystem):
    if S.n != D.n:
        raise ValueError(f"solution has {S.n} points but weights have {D.n}")


def _close(a, b, tol):
    return np.abs(a - b) <= tol * np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))


def cocycle_defect(S: SetSolution, D: WeightSystem, tol: float = TOL) -> tuple[int, int, int] | None:
    """First triple ``(x, y, z)`` violating the six-factor identity, or None."""
    _check_dims(S, D)
    if not solution_properties(S).nondegenerate:
        raise ValueError("solution is degenerate")
    n, f = S.n, D.d
    L, R = S.left, S.right  # L[x, y] = sigma_x(y) = ^x y,  R[x, y] = tau_y(x) = x^y
    i = np.arange(n)
    x, y, z = np.meshgrid(i, i, i, indexing="ij")
    xy = R[x, y]
    lhs = f[x, y] * f[xy, z] * f[L[x, y], L[xy, z]]
    yz = L[y, z]
    rhs = f[y, z] * f[x, yz] * f[R[x, yz], R[y, z]]
    bad = ~_close(lhs, rhs, tol)
    if bad.any():
        return tuple(int(v) for v in np.argwhere(bad)[0])
    return None


def verify_cocycle(S: SetSolution, D: WeightSystem, tol: float = TOL) -> bool:
    return cocycle_defect(S, D, tol) is None


def exponent_matrix(S: SetSolution) -> list[list[int]]:
    """Rows indexed by pairs ``x*n + y``; columns ``a_0..a_{n-1}, c``.

    Row ``(x, y)`` encodes ``c * a_x * a_y / (a_sigma_x(y) * a_tau_y(x))``.
    """
    n = S.n
    rows = []
    for x in range(n):
        for y in range(n):
            e = [0] * (n + 1)
            e[x] += 1
            e[y] += 1
            e[int(S.left[x, y])] -= 1
            e[int(S.right[x, y])] -= 1
            e[n] = 1
            rows.append(e)
    return rows


def _log_rhs(U_row, logs):
    return sum(u * l for u, l in zip(U_row, logs) if u)


def triviality_witness(S: SetSolution, D: WeightSystem, tol: float = TOL) -> TrivialityWitness | None:
    """Witness ``(alpha, c)`` when ``D`` is trivial, else None.

    Non-zero complex numbers form a divisible group, so the multiplicative
    system is solvable iff every integer left-kernel relation of the
    exponent matrix evaluates to 1 on the weights.
    """
    if not verify_cocycle(S, D, tol):
        raise ValueError("weights fail the cocycle identity")
    n = S.n
    M = exponent_matrix(S)
    H, U, pivots = row_echelon(M)
    logs = [cmath.log(v) for v in D.d.reshape(-1)]
    for row in U[len(pivots):]:
        scale = max(1, sum(abs(u) for u in row))
        if abs(cmath.exp(_log_rhs(row, logs)) - 1) > tol * scale:
            return None
    z = [0j] * (n + 1)  # logs of the unknowns; free ones stay at log 1 = 0
    for k in reversed(range(len(pivots))):
        c = pivots[k]
        acc = _log_rhs(U[k], logs) - sum(H[k][j] * z[j] for j in range(c + 1, n + 1) if H[k][j])
        z[c] = acc / H[k][c]
    w = TrivialityWitness(np.exp(np.array(z[:n])), complex(cmath.exp(z[n])))
    # the kernel test above is exact up to rounding; the residual guards the float path
    if w.residual(S, D) > tol * max(1.0, float(np.max(np.abs(D.d)))) * 1e3:
        raise ArithmeticError("witness reconstruction lost precision")
    return w


def is_trivial(S: SetSolution, D: WeightSystem, tol: float = TOL) -> bool:
    return triviality_witness(S, D, tol) is not None


def pair_products(S: SetSolution, D: WeightSystem) -> np.ndarray:
    """``d_(x,y) * d_r(x,y)`` for every pair."""
    _check_dims(S, D)
    return D.d * D.d[S.left, S.right]


def lemma_trivial_check(S: SetSolution, D: WeightSystem, tol: float = TOL) -> bool:
    """True iff ``d_(x,y) * d_r(x,y)`` takes one value, as it must for trivial ``D``."""
    if not solution_properties(S).involutive:
        raise ValueError("solution is not involutive")
    p = pair_products(S, D).reshape(-1)
    return bool(_close(p, p[0], tol).all())


def invariance_defect(S: SetSolution, f) -> tuple[int, int, int, int] | None:
    """First ``(identity, x, y, z)`` breaking the three invariance identities, or None.

    ``f(x,y) = f(x^(^y z), y^z)``, ``f(x^y, z) = f(x, ^y z)``,
    ``f(^x y, ^(x^y) z) = f(y, z)``.
    """
    f = np.asarray(f, dtype=np.complex128)
    n = S.n
    L, R = S.left, S.right
    i = np.arange(n)
    x, y, z = np.meshgrid(i, i, i, indexing="ij")
    checks = [
        (f[x, y], f[R[x, L[y, z]], R[y, z]]),
        (f[R[x, y], z], f[x, L[y, z]]),
        (f[L[x, y], L[R[x, y], z]], f[y, z]),
    ]
    for k, (a, b) in enumerate(checks):
        bad = ~_close(a, b, TOL)
        if bad.any():
            return (k,) + tuple(int(v) for v in np.argwhere(bad)[0])
    return None


def invariance_weights(S: SetSolution, f) -> WeightSystem:
    bad = invariance_defect(S, f)
    if bad is not None:
        k, x, y, z = bad
        raise ValueError(f"invariance identity {k + 1} fails at ({x}, {y}, {z})")
    return WeightSystem(f)


def orbit_weights(S: SetSolution, classes: PartitionedSet, alpha) -> WeightSystem:
    """``d_(x,y) = alpha[i][j]`` for ``x`` in class ``i`` and ``y`` in class ``j``."""
    alpha = np.asarray(alpha, dtype=np.complex128)
    k = len(classes.classes)
    if alpha.shape != (k, k):
        raise ValueError(f"alpha must be {k}x{k}")
    if classes.covered() != tuple(range(S.n)):
        raise ValueError("classes do not cover the solution")
    cls = np.empty(S.n, dtype=np.int64)
    for i, c in enumerate(classes.classes):
        cls[list(c)] = i
    ci, cj = np.meshgrid(cls, cls, indexing="ij")
    if not (np.array_equal(cls[S.left], cj) and np.array_equal(cls[S.right], ci)):
        x, y = np.argwhere((cls[S.left] != cj) | (cls[S.right] != ci))[0]
        raise ValueError(f"r({x}, {y}) does not map (X_i, X_j) to (X_j, X_i)")
    return WeightSystem(alpha[ci, cj])


def cyclic_g(g: Sequence[complex]) -> WeightSystem:
    """``d_(i,j) = g((i - j) mod n)`` over ``builtin_solution('cyclic', len(g))``."""
    g = np.asarray(g, dtype=np.complex128)
    n = len(g)
    i = np.arange(n)
    return WeightSystem(g[(i[:, None] - i[None, :]) % n])


def hura5_g(g) -> WeightSystem:
    """``f([i,j],[m,k]) = g(i+j+k, m+j+k)`` with ``[i,j]`` stored as ``2*i + j``."""
    g = np.asarray(g, dtype=np.complex128)
    if g.shape != (2, 2):
        raise ValueError("hura5 weights need a 2x2 table g")
    if abs(g[1, 0] - g[0, 1]) > TOL:
        raise ValueError("hura5 weights need g(1,0) = g(0,1)")
    d = np.empty((4, 4), dtype=np.complex128)
    for u in range(4):
        i, j = divmod(u, 2)
        for v in range(4):
            m, k = divmod(v, 2)
            d[u, v] = g[(i + j + k) % 2, (m + j + k) % 2]
    return WeightSystem(d)


def builtin_weights(kind: str, params) -> WeightSystem:
    if kind == "cyclic_g":
        return cyclic_g(params)
    if kind == "hura5_g":
        return hura5_g(params)
    raise ValueError(f"unknown weight kind {kind!r}")


def lift_weights(S: SetSolution, class_map, Dq: WeightSystem, Sq: SetSolution | None = None) -> WeightSystem:
    """``d'_(x,y) = d_([x],[y])``; checked against the cocycle identity on ``S``."""
    cm = np.asarray(class_map, dtype=np.int64)
    if cm.shape != (S.n,):
        raise ValueError("class map must have one entry per point")
    if cm.min() < 0 or set(cm.tolist()) != set(range(Dq.n)):
        raise ValueError("class map is not onto the quotient")
    if Sq is not None:
        if not np.array_equal(cm[S.r], Sq.r[cm[:, None], cm[None, :]]):
            raise ValueError("class map is inconsistent with the quotient solution")
    D = WeightSystem(Dq.d[np.ix_(cm, cm)])
    if not verify_cocycle(S, D):
        raise ValueError("lifted weights fail the cocycle identity")
    return D


def match_cyclic(S: SetSolution) -> np.ndarray | None:
    """Relabeling ``p`` with ``p[r(x, y)] = cyclic(p[x], p[y])``, or None."""
    n = S.n
    C = builtin_solution("cyclic", n)
    sig = S.left[0]
    p = np.full(n, -1, dtype=np.int64)
    a = 0
    for k in range(n):
        if p[a] >= 0:
            return None
        p[a] = k
        a = int(sig[a])
    if np.array_equal(p[S.r], C.r[p[:, None], p[None, :]]):
        return p
    return None


def _nontrivial_g(m: int) -> list[complex]:
    # products d * d_r over pairs are g(k) g(2 - k); k = 1 gives g(1)^2 = 4,
    # k = 0 gives g(0) g(2) = 1 (or g(0)^2 = 1 when m = 2)
    return [1.0, 2.0] + [1.0] * (m - 2)


def _cyclic_lift(S: SetSolution) -> WeightSystem | None:
    p = match_cyclic(S)
    if p is None or S.n < 2:
        return None
    return WeightSystem(cyclic_g(_nontrivial_g(S.n)).d[np.ix_(p, p)])


def construct_nontrivial_bvst(S: SetSolution, presentation: tuple[FiniteBrace, int] | None = None) -> WeightSystem:
    """Non-trivial weights on an involutive non-degenerate solution.

    Decomposable: orbit weights with ``alpha[0][1] = 2`` and all else 1.
    Indecomposable: ``S`` itself matches a cyclic solution, or
    ``presentation = (B, x)`` gives the one-generator brace behind ``S``;
    then ``S`` is retracted by ``I = A.A^2 + A^2.A`` onto a cyclic
    solution whose non-trivial weights are lifted back.
    """
    props = solution_properties(S)
    if not (props.braid_ok and props.involutive and props.nondegenerate):
        raise ValueError("solution must be involutive and non-degenerate")
    part, indecomposable = orbits(S)
    if not indecomposable:
        k = len(part.classes)
        alpha = np.ones((k, k), dtype=np.complex128)
        alpha[0, 1] = 2.0
        D = orbit_weights(S, part, alpha)
    else:
        D = _cyclic_lift(S)
        if D is None:
            if presentation is None:
                raise ValueError("indecomposable solution needs its brace presentation (B, x)")
            D = _lift_through_ideal(S, *presentation)
    if is_trivial(S, D):
        raise ArithmeticError("constructed weights turned out trivial")
    return D


def one_generator_ideal(A: FiniteBrace) -> frozenset[int]:
    """``A.A^2 + A^2.A`` as a set of elements."""
    A1 = A.everything()
    A2 = A.span(A.product_set(A1, A1))
    return A.span(A.product_set(A1, A2).members | A.product_set(A2, A1).members).members


def _lift_through_ideal(S: SetSolution, B: FiniteBrace, x: int) -> WeightSystem:
    Ax, X, S1 = one_generator_solution(B, x)
    if S.points is None or S1.points != S.points or S1 != S:
        raise ValueError("solution is not the one-generator solution of (B, x)")
    A, elems = restrict_brace(B, Ax)
    chains = nilpotency_chains(A)
    if not (chains.left.vanishes and chains.right.vanishes):
        raise ValueError("A(x) must be left and right nilpotent")
    where = {e: k for k, e in enumerate(elems)}
    SA = SetSolution(S.r, [where[p] for p in S.points])
    I = one_generator_ideal(A)
    if not is_ideal(A, I):
        raise ValueError("A.A^2 + A^2.A is not an ideal")
    Q, cm = i_retraction(A, I, SA)
    Dq = _cyclic_lift(Q)
    if Dq is None:
        raise ValueError(f"quotient of size {Q.n} is not a cyclic solution")
    return lift_weights(SA, cm, Dq, Q)
