"""Exact integer row reduction with a unimodular transform."""

from __future__ import annotations

import math


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def row_echelon(M: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Integer echelon form ``H = U M`` with ``U`` unimodular.

    Returns ``(H, U, pivots)`` where ``pivots[k]`` is the column of the
    leading entry of row ``k``.  Rows past ``len(pivots)`` are zero, so the
    matching rows of ``U`` span the integer left kernel of ``M``.
    """
    m = len(M)
    ncol = len(M[0]) if m else 0
    H = [list(map(int, row)) for row in M]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    pivots: list[int] = []
    r = 0
    for c in range(ncol):
        if r == m:
            break
        for i in range(r + 1, m):
            b = H[i][c]
            if b == 0:
                continue
            a = H[r][c]
            g, s, t = _xgcd(a, b)
            ag, bg = a // g, b // g
            for T in (H, U):
                Rr, Ri = T[r], T[i]
                T[r] = [s * x + t * y for x, y in zip(Rr, Ri)]
                T[i] = [-bg * x + ag * y for x, y in zip(Rr, Ri)]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        pivots.append(c)
        r += 1
    return H, U, pivots


def left_kernel(M: list[list[int]]) -> list[list[int]]:
    """Integer basis of ``{v : v M = 0}``, each vector made primitive."""
    H, U, pivots = row_echelon(M)
    out = []
    for row in U[len(pivots):]:
        g = math.gcd(*row) if row else 1
        out.append([x // g for x in row] if g > 1 else row)
    return out
