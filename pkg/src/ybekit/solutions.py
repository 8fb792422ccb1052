"""Set-theoretic solutions ``r(x, y) = (sigma_x(y), tau_y(x))`` stored as pair tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ybekit.algebra import (
    BraceSubset,
    FiniteBrace,
    generated_subbrace,
    is_ideal,
    nilpotency_chains,
)


class SetSolution:
    """A map on ``X x X`` for ``X = {0..n-1}``.

    ``r[x, y] = (sigma_x(y), tau_y(x))``.  The map need not be bijective,
    involutive or non-degenerate; use :func:`solution_properties`.
    ``points`` optionally records the brace element behind each index.
    """

    def __init__(self, r, points: Sequence[int] | None = None):
        arr = np.array(r, dtype=np.int64)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != 2:
            raise ValueError(f"r must have shape (n, n, 2), got {arr.shape}")
        n = arr.shape[0]
        if n == 0 or arr.min() < 0 or arr.max() >= n:
            raise ValueError(f"r has entries outside 0..{n - 1}")
        arr.setflags(write=False)
        self.r = arr
        self.points = tuple(int(p) for p in points) if points is not None else None
        if self.points is not None and len(self.points) != n:
            raise ValueError("points must list one brace element per index")

    @classmethod
    def from_function(cls, n: int, fn, points=None) -> SetSolution:
        return cls([[fn(x, y) for y in range(n)] for x in range(n)], points)

    @property
    def n(self) -> int:
        return self.r.shape[0]

    @property
    def left(self) -> np.ndarray:
        """``left[x, y] = sigma_x(y)``."""
        return self.r[..., 0]

    @property
    def right(self) -> np.ndarray:
        """``right[x, y] = tau_y(x)``."""
        return self.r[..., 1]

    def sigma(self, x: int) -> np.ndarray:
        return self.r[x, :, 0]

    def tau(self, y: int) -> np.ndarray:
        return self.r[:, y, 1]

    @cached_property
    def pair_perm(self) -> np.ndarray:
        """``pair_perm[x*n + y] = k*n + l`` where ``r(x, y) = (k, l)``."""
        p = (self.r[..., 0] * self.n + self.r[..., 1]).reshape(-1)
        p.setflags(write=False)
        return p

    def is_bijective(self) -> bool:
        return np.unique(self.pair_perm).size == self.n ** 2

    def __call__(self, x: int, y: int) -> tuple[int, int]:
        k, l = self.r[x, y]
        return int(k), int(l)

    def __eq__(self, other):
        return isinstance(other, SetSolution) and np.array_equal(self.r, other.r)

    def __hash__(self):
        return hash(self.r.tobytes())

    def __repr__(self):
        return f"SetSolution(n={self.n})"


@dataclass(frozen=True)
class SolutionProperties:
    braid_ok: bool
    involutive: bool
    left_nondeg: bool
    right_nondeg: bool

    @property
    def nondegenerate(self) -> bool:
        return self.left_nondeg and self.right_nondeg


@dataclass(frozen=True)
class PartitionedSet:
    n: int
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = [x for c in self.classes for x in c]
        if len(seen) != len(set(seen)):
            raise ValueError("classes overlap")
        if any(not 0 <= x < self.n for x in seen):
            raise ValueError("class member out of range")

    @classmethod
    def of(cls, n: int, classes: Iterable[Iterable[int]]) -> PartitionedSet:
        return cls(n, tuple(tuple(sorted(int(x) for x in c)) for c in classes))

    def covered(self) -> tuple[int, ...]:
        return tuple(sorted(x for c in self.classes for x in c))

    def class_of(self) -> dict[int, int]:
        return {x: i for i, c in enumerate(self.classes) for x in c}

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(c) for c in self.classes}


def ybe_violation(S: SetSolution) -> tuple[int, int, int] | None:
    """First triple where ``r1 r2 r1`` and ``r2 r1 r2`` differ, or None."""
    if not S.is_bijective():
        raise ValueError("r is not a bijection on pairs")
    n = S.n
    L, Rt = S.left, S.right
    i = np.arange(n)
    x, y, z = np.meshgrid(i, i, i, indexing="ij")
    # r1 r2 r1 applied right to left: r1, then r2, then r1
    a, b = L[x, y], Rt[x, y]
    b2, c2 = L[b, z], Rt[b, z]
    a3, b3 = L[a, b2], Rt[a, b2]
    lhs = (a3, b3, c2)
    # r2, r1, r2
    y1, z1 = L[y, z], Rt[y, z]
    x2, y2 = L[x, y1], Rt[x, y1]
    y3, z3 = L[y2, z1], Rt[y2, z1]
    rhs = (x2, y3, z3)
    bad = (lhs[0] != rhs[0]) | (lhs[1] != rhs[1]) | (lhs[2] != rhs[2])
    if bad.any():
        return tuple(int(v) for v in np.argwhere(bad)[0])
    return None


def verify_set_ybe(S: SetSolution) -> bool:
    return ybe_violation(S) is None


def _all_perms(rows: np.ndarray) -> bool:
    n = rows.shape[1]
    return bool((np.sort(rows, axis=1) == np.arange(n)).all())


def solution_properties(S: SetSolution) -> SolutionProperties:
    n = S.n
    flat = S.pair_perm
    involutive = bool((flat[flat] == np.arange(n * n)).all())
    braid_ok = S.is_bijective() and verify_set_ybe(S)
    return SolutionProperties(
        braid_ok=braid_ok,
        involutive=involutive,
        left_nondeg=_all_perms(S.right.T),  # row y of right.T is tau_y
        right_nondeg=_all_perms(S.left),
    )


def _require_inv_nondeg(S: SetSolution):
    props = solution_properties(S)
    if not (props.involutive and props.nondegenerate):
        raise ValueError("solution must be involutive and non-degenerate")


def builtin_solution(kind: str, n: int | None = None) -> SetSolution:
    """``flip``: ``(y, x)``; ``cyclic``: ``(y+1, x-1) mod n``; ``hura5`` on pairs over Z/2.

    ``hura5`` labels ``[i, j]`` as ``2*i + j`` and maps
    ``([i,j],[m,k]) -> ([m+1, k+m+i], [i+1, j+i+m])``.
    """
    if kind == "flip":
        if not n or n < 1:
            raise ValueError("flip needs n >= 1")
        return SetSolution.from_function(n, lambda x, y: (y, x))
    if kind == "cyclic":
        if not n or n < 1:
            raise ValueError("cyclic needs n >= 1")
        return SetSolution.from_function(n, lambda x, y: ((y + 1) % n, (x - 1) % n))
    if kind == "hura5":
        if n not in (None, 4):
            raise ValueError("hura5 is defined only for n = 4")

        def r(u, v):
            i, j = divmod(u, 2)
            m, k = divmod(v, 2)
            first = 2 * ((m + 1) % 2) + (k + m + i) % 2
            second = 2 * ((i + 1) % 2) + (j + i + m) % 2
            return first, second

        return SetSolution.from_function(4, r)
    raise ValueError(f"unknown solution kind {kind!r}")


def yb_map_from_brace(B: FiniteBrace) -> SetSolution:
    """``r(x, y) = (x.y + y, z.x + x)`` with ``z`` the circle inverse of ``x.y + y``."""
    add, star = B.add, B.star
    i = np.arange(B.order)
    u = add[star, i[None, :]]  # u[x, y] = x.y + y
    z = B.inv[u]
    v = add[star[z, i[:, None]], i[:, None]]
    return SetSolution(np.stack([u, v], axis=-1), points=range(B.order))


def restrict_solution(S: SetSolution, X: Iterable[int]) -> SetSolution:
    """Restriction to ``X`` (indices of ``S``), re-indexed in increasing order."""
    X = sorted(set(int(x) for x in X))
    pos = {x: k for k, x in enumerate(X)}
    table = []
    for x in X:
        row = []
        for y in X:
            k, l = S(x, y)
            if k not in pos or l not in pos:
                raise ValueError(f"r({x}, {y}) = ({k}, {l}) leaves the subset")
            row.append((pos[k], pos[l]))
        table.append(row)
    points = [S.points[x] for x in X] if S.points is not None else X
    return SetSolution(table, points)


def restrict_to_brace_elements(S: SetSolution, elems: Iterable[int]) -> SetSolution:
    """Restriction of a solution carrying ``points`` to the given brace elements."""
    if S.points is None:
        raise ValueError("solution carries no brace elements")
    where = {p: k for k, p in enumerate(S.points)}
    return restrict_solution(S, [where[e] for e in elems])


def orbits(S: SetSolution) -> tuple[PartitionedSet, bool]:
    """Orbits under all ``sigma_x`` and ``tau_x``; returns (partition, indecomposable)."""
    n = S.n
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for x in range(n):
        for y in range(n):
            union(y, int(S.r[x, y, 0]))  # y ~ sigma_x(y)
            union(x, int(S.r[x, y, 1]))  # x ~ tau_y(x)
    groups: dict[int, list[int]] = {}
    for a in range(n):
        groups.setdefault(find(a), []).append(a)
    part = PartitionedSet.of(n, sorted(groups.values()))
    return part, len(part.classes) == 1


def _quotient_solution(S: SetSolution, class_map: np.ndarray, k: int) -> SetSolution:
    table = np.full((k, k, 2), -1, dtype=np.int64)
    cm = class_map
    for x in range(S.n):
        for y in range(S.n):
            img = (cm[S.r[x, y, 0]], cm[S.r[x, y, 1]])
            cur = table[cm[x], cm[y]]
            if cur[0] < 0:
                table[cm[x], cm[y]] = img
            elif tuple(cur) != img:
                raise ValueError(f"induced map is not well defined at classes "
                                 f"({cm[x]}, {cm[y]})")
    return SetSolution(table)


def retraction(S: SetSolution) -> tuple[SetSolution, np.ndarray]:
    """Identify ``x ~ y`` when ``sigma_x = sigma_y``; classes numbered by first member."""
    _require_inv_nondeg(S)
    keys: dict[bytes, int] = {}
    class_map = np.empty(S.n, dtype=np.int64)
    for x in range(S.n):
        class_map[x] = keys.setdefault(S.sigma(x).tobytes(), len(keys))
    return _quotient_solution(S, class_map, len(keys)), class_map


def multipermutation_level(S: SetSolution) -> int | None:
    """Number of retractions needed to reach one point; None if they stall above one."""
    _require_inv_nondeg(S)
    level = 0
    while S.n > 1:
        R, _ = retraction(S)
        if R.n == S.n:
            return None
        S = R
        level += 1
    return level


def _check_restriction(B: FiniteBrace, S: SetSolution):
    if S.points is None:
        raise ValueError("solution carries no brace elements")
    full = yb_map_from_brace(B)
    pts = np.array(S.points)
    expected = full.r[np.ix_(pts, pts)]
    got = pts[S.r]
    if not np.array_equal(expected, got):
        x, y = np.argwhere((expected != got).any(axis=-1))[0]
        raise ValueError(f"solution is not the brace map restricted at ({x}, {y})")


def i_retraction(B: FiniteBrace, I: BraceSubset | Iterable[int], S: SetSolution) -> tuple[SetSolution, np.ndarray]:
    """Quotient of a brace sub-solution by the cosets ``x + I``.

    ``S.points`` must give the brace element behind each index.  The
    returned class map sends indices of ``S`` to quotient indices.
    """
    members = frozenset(I.members if isinstance(I, BraceSubset) else I)
    if not is_ideal(B, members):
        raise ValueError("I is not an ideal")
    _check_restriction(B, S)
    ideal = np.array(sorted(members))
    coset_key: dict[frozenset, int] = {}
    class_map = np.empty(S.n, dtype=np.int64)
    for k, x in enumerate(S.points):
        coset = frozenset(B.add[x, ideal].tolist())
        class_map[k] = coset_key.setdefault(coset, len(coset_key))
    return _quotient_solution(S, class_map, len(coset_key)), class_map


def one_generator_orbit(B: FiniteBrace, x: int, over: Iterable[int] | None = None) -> BraceSubset:
    """``{x + a.x : a in over}``; ``over`` defaults to the whole brace."""
    over = range(B.order) if over is None else list(over)
    return B.subset({int(B.add[x, B.star[a, x]]) for a in over})


def one_generator_solution(B: FiniteBrace, x: int) -> tuple[BraceSubset, BraceSubset, SetSolution]:
    """Sub-brace ``A(x)``, the set ``X = {x + a.x : a in A(x)}`` and the solution on ``X``."""
    Ax = generated_subbrace(B, x)
    X = one_generator_orbit(B, x, Ax)
    S = restrict_to_brace_elements(yb_map_from_brace(B), X)
    return Ax, X, S


def check_theorem_567(B: FiniteBrace, X: BraceSubset | Iterable[int], x: int) -> bool:
    """True iff ``X = {x + a.x : a in B}`` and every element of ``B`` is a sum of elements of ``X``."""
    members = frozenset(X.members if isinstance(X, BraceSubset) else X)
    if members != one_generator_orbit(B, x).members:
        return False
    return len(B.span(members)) == B.order


def _check_invariant(S: SetSolution, classes: Sequence[Sequence[int]]):
    cls = {x: i for i, c in enumerate(classes) for x in c}
    for x, i in cls.items():
        for y, j in cls.items():
            k, l = S(x, y)
            if cls.get(k) != j or cls.get(l) != i:
                raise ValueError(f"r({x}, {y}) = ({k}, {l}) breaks r(X_{i}, X_{j}) = (X_{j}, X_{i})")


def _additive_order(B: FiniteBrace, a: int) -> int:
    k, s = 1, a
    while s != 0:
        s = int(B.add[s, a])
        k += 1
    return k


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while n > 1:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    return out


def invariant_partition(kind: str, B: FiniteBrace) -> tuple[BraceSubset, PartitionedSet]:
    """Subsets ``X_i`` of ``B`` with ``r(X_i, X_j) = (X_j, X_i)`` under the brace map.

    ``orbit_Q``: the distinct sets ``{b + a.b : a in B}``.
    ``graded``: ``A^i minus A^(i+1)`` along the left chain.
    ``coset``: ``b + A^(i+1)`` for ``b`` in ``A^i`` but not ``A^(i+1)``.
    ``sylow``: non-zero elements of each Sylow subgroup of ``(B, +)``.
    The partition is over brace elements; invariance is checked before returning.
    """
    if kind == "orbit_Q":
        classes = {one_generator_orbit(B, b).members for b in range(B.order)}
        classes = sorted(classes, key=min)
    elif kind in ("graded", "coset"):
        left = nilpotency_chains(B).left
        if not left.vanishes:
            raise ValueError(f"{kind} partition needs a left nilpotent brace")
        terms = [left.term(i) for i in range(1, left.vanish_index + 1)]
        if kind == "graded":
            classes = [terms[i] - terms[i + 1] for i in range(len(terms) - 1)]
        else:
            found = set()
            for i in range(len(terms) - 1):
                nxt = np.array(sorted(terms[i + 1]))
                for b in terms[i] - terms[i + 1]:
                    found.add(frozenset(B.add[b, nxt].tolist()))
            classes = sorted(found, key=min)
        classes = [c for c in classes if c]
    elif kind == "sylow":
        orders = {a: _additive_order(B, a) for a in range(B.order)}
        classes = []
        for p in _prime_factors(B.order):
            part = frozenset(a for a, o in orders.items()
                             if a != 0 and _p_exponent(o, p) >= 1)
            if part:
                classes.append(part)
    else:
        raise ValueError(f"unknown partition kind {kind!r}")
    full = yb_map_from_brace(B)
    _check_invariant(full, [sorted(c) for c in classes])
    X = B.subset(set().union(*classes)) if classes else B.subset([])
    return X, PartitionedSet.of(B.order, classes)


def _p_exponent(o: int, p: int) -> int:
    """Exponent ``e`` with ``o == p**e``, or -1 when ``o`` is not a power of ``p``."""
    e = 0
    while o % p == 0:
        o //= p
        e += 1
    return e if o == 1 else -1


def partition_on_solution(S: SetSolution, part: PartitionedSet) -> PartitionedSet:
    """Translate a partition of brace elements to the indices of ``S``."""
    where = {p: k for k, p in enumerate(S.points)}
    return PartitionedSet.of(S.n, [[where[x] for x in c] for c in part.classes])


@dataclass(frozen=True)
class PermutationGroup:
    elements: frozenset[tuple[int, ...]] = field(repr=False)
    is_nilpotent: bool

    @property
    def order(self) -> int:
        return len(self.elements)


def _compose(p, q):
    """``p after q``."""
    return tuple(p[i] for i in q)


def _inverse(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def _generate(gens, identity, max_order):
    members = {identity}
    frontier = [identity]
    gens = list(gens)
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _compose(s, g)
                if h not in members:
                    members.add(h)
                    nxt.append(h)
                    if len(members) > max_order:
                        raise ValueError(f"group order exceeds {max_order}")
        frontier = nxt
    return frozenset(members)


def permutation_group(S: SetSolution, max_order: int = 10 ** 6) -> PermutationGroup:
    """Group generated by the ``sigma_x``; nilpotency via the lower central series."""
    if not solution_properties(S).right_nondeg:
        raise ValueError("solution is not right non-degenerate")
    identity = tuple(range(S.n))
    gens = {tuple(int(v) for v in S.sigma(x)) for x in range(S.n)}
    G = _generate(gens, identity, max_order)
    term = G
    while len(term) > 1:
        comms = {_compose(_compose(_inverse(a), _inverse(g)), _compose(a, g))
                 for a in term for g in gens}
        # [term, G] is normal; generating by commutators with generators of G suffices
        # only after normal closure, so close under conjugation by G's generators too
        nxt = _generate(comms, identity, max_order)
        nxt = _normal_closure(nxt, gens, identity, max_order)
        if nxt == term:
            return PermutationGroup(G, False)
        term = nxt
    return PermutationGroup(G, True)


def _normal_closure(H, gens, identity, max_order):
    while True:
        conj = {_compose(_compose(g, h), _inverse(g)) for h in H for g in gens}
        if conj <= H:
            return H
        H = _generate(set(H) | conj, identity, max_order)
