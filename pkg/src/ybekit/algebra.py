"""Finite rings and left braces stored as explicit operation tables.

Elements are the integers ``0..N-1``; ``0`` is the additive identity and, in a
brace, also the identity of the circle group.  The star product is
``a . b = a o b - a - b``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np


def _table(t, name: str) -> np.ndarray:
    arr = np.array(t, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} table must be square, got shape {arr.shape}")
    n = arr.shape[0]
    if n == 0:
        raise ValueError(f"{name} table is empty")
    if arr.min() < 0 or arr.max() >= n:
        raise ValueError(f"{name} table has entries outside 0..{n - 1}")
    arr.setflags(write=False)
    return arr


def _inverse_of(table: np.ndarray) -> np.ndarray:
    """Two-sided inverses with respect to identity 0, by table scan."""
    n = table.shape[0]
    inv = np.full(n, -1, dtype=np.int64)
    for a in range(n):
        hits = np.flatnonzero(table[a] == 0)
        for b in hits:
            if table[b, a] == 0:
                inv[a] = b
                break
    if (inv < 0).any():
        raise ValueError(f"element {int(np.argmin(inv))} has no inverse")
    inv.setflags(write=False)
    return inv


def _closure(add: np.ndarray, elems: Iterable[int]) -> frozenset[int]:
    """Additive subgroup generated by ``elems``."""
    members = {0, *(int(e) for e in elems)}
    frontier = list(members)
    while frontier:
        cur = np.fromiter(members, dtype=np.int64)
        new = set(np.unique(add[np.ix_(np.array(frontier), cur)]).tolist()) - members
        members |= new
        frontier = list(new)
    return frozenset(members)


class FiniteRing:
    """Associative ring (not necessarily unital) given by ``add`` and ``mul`` tables."""

    def __init__(self, add, mul, labels: Sequence[str] | None = None):
        self.add = _table(add, "add")
        self.mul = _table(mul, "mul")
        if self.add.shape != self.mul.shape:
            raise ValueError("add and mul tables differ in size")
        self.labels = tuple(labels) if labels is not None else None

    @property
    def order(self) -> int:
        return self.add.shape[0]

    @cached_property
    def neg(self) -> np.ndarray:
        return _inverse_of(self.add)

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def power_chain(self) -> list[frozenset[int]]:
        """``R, R^2, R^3, ...`` up to the first repeated term."""
        everything = frozenset(range(self.order))
        chain = [everything]
        while True:
            prev = chain[-1]
            prods = self.mul[np.ix_(np.array(sorted(everything)), np.array(sorted(prev)))]
            nxt = _closure(self.add, np.unique(prods))
            if nxt == prev:
                return chain
            chain.append(nxt)

    def nilpotency_class(self) -> int | None:
        """Smallest ``k`` with ``R^k = 0``, or None if the ring is not nilpotent."""
        chain = self.power_chain()
        if chain[-1] == frozenset({0}):
            return len(chain)
        return None

    def __repr__(self):
        return f"FiniteRing(order={self.order})"


def verify_ring(R: FiniteRing) -> list[tuple[str, tuple[int, ...]]]:
    """First violating witness of each ring axiom; empty list means a ring."""
    add, mul = R.add, R.mul
    out = _group_violations(add, "add", commutative=True)
    n = R.order
    i = np.arange(n)
    a, b, c = i[:, None, None], i[None, :, None], i[None, None, :]
    checks = {
        "mul.associative": mul[mul[a, b], c] == mul[a, mul[b, c]],
        "mul.left_distributive": mul[a, add[b, c]] == add[mul[a, b], mul[a, c]],
        "mul.right_distributive": mul[add[a, b], c] == add[mul[a, c], mul[b, c]],
    }
    for name, ok in checks.items():
        if not ok.all():
            out.append((name, tuple(int(v) for v in np.argwhere(~ok)[0])))
    return out


class FiniteBrace:
    """Left brace with addition table ``add`` and circle table ``circ``.

    Tables are not validated here; use :func:`verify_brace`.
    """

    def __init__(self, add, circ, labels: Sequence[str] | None = None):
        self.add = _table(add, "add")
        self.circ = _table(circ, "circ")
        if self.add.shape != self.circ.shape:
            raise ValueError("add and circ tables differ in size")
        self.labels = tuple(labels) if labels is not None else None

    @property
    def order(self) -> int:
        return self.add.shape[0]

    @cached_property
    def neg(self) -> np.ndarray:
        return _inverse_of(self.add)

    @cached_property
    def inv(self) -> np.ndarray:
        """Circle-group inverses."""
        return _inverse_of(self.circ)

    @cached_property
    def star(self) -> np.ndarray:
        """Full table of ``a . b = a o b - a - b``."""
        i = np.arange(self.order)
        s = self.add[self.add[self.circ, self.neg[i][:, None]], self.neg[i][None, :]]
        s.setflags(write=False)
        return s

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def element(self, label: str) -> int:
        if not self.labels:
            return int(label)
        return self.labels.index(label)

    def everything(self) -> BraceSubset:
        return BraceSubset(self, frozenset(range(self.order)))

    def subset(self, members: Iterable[int]) -> BraceSubset:
        return BraceSubset(self, frozenset(int(m) for m in members))

    def span(self, elems: Iterable[int]) -> BraceSubset:
        """Additive subgroup generated by ``elems``."""
        return BraceSubset(self, _closure(self.add, elems))

    def product_set(self, left: Iterable[int], right: Iterable[int]) -> BraceSubset:
        """Finite sums of star products ``l . r``."""
        L = np.array(sorted(left), dtype=np.int64)
        Rr = np.array(sorted(right), dtype=np.int64)
        if L.size == 0 or Rr.size == 0:
            return self.subset([0])
        return self.span(np.unique(self.star[np.ix_(L, Rr)]))

    def __repr__(self):
        return f"FiniteBrace(order={self.order})"


@dataclass(frozen=True)
class BraceSubset:
    parent: FiniteBrace = field(compare=False, repr=False)
    members: frozenset[int]

    def __post_init__(self):
        bad = [m for m in self.members if not 0 <= m < self.parent.order]
        if bad:
            raise ValueError(f"elements {bad} are not in the brace")

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, a):
        return a in self.members

    def labels(self) -> list[str]:
        return [self.parent.label(m) for m in self]


@dataclass(frozen=True)
class ChainReport:
    """Terms of a radical chain; ``chain[i - 1]`` is the ``i``-th term.

    ``vanish_index`` is the (1-based) index of the first zero term.
    """

    chain: tuple[frozenset[int], ...]
    vanishes: bool
    vanish_index: int | None

    def term(self, i: int) -> frozenset[int]:
        if i <= len(self.chain):
            return self.chain[i - 1]
        # past the computed range the chain has stabilised
        return self.chain[-1]


@dataclass(frozen=True)
class NilpotencyChains:
    left: ChainReport
    right: ChainReport
    strong: ChainReport


@dataclass
class BraceReport:
    is_brace: bool
    violations: list[tuple[str, tuple[int, ...]]]


def _group_violations(T: np.ndarray, name: str, commutative: bool) -> list:
    out = []
    n = T.shape[0]
    i = np.arange(n)
    if not ((T[0] == i).all() and (T[:, 0] == i).all()):
        bad = int(np.flatnonzero((T[0] != i) | (T[:, 0] != i))[0])
        out.append((f"{name}.identity", (bad,)))
    a, b, c = i[:, None, None], i[None, :, None], i[None, None, :]
    ok = T[T[a, b], c] == T[a, T[b, c]]
    if not ok.all():
        out.append((f"{name}.associative", tuple(int(v) for v in np.argwhere(~ok)[0])))
    has_inv = ((T == 0) & (T.T == 0)).any(axis=1)
    if not has_inv.all():
        out.append((f"{name}.inverse", (int(np.flatnonzero(~has_inv)[0]),)))
    if commutative and not (T == T.T).all():
        out.append((f"{name}.commutative", tuple(int(v) for v in np.argwhere(T != T.T)[0])))
    return out


def verify_brace(add, circ) -> BraceReport:
    """Check the left brace axioms, reporting the first failure of each."""
    add = _table(add, "add")
    circ = _table(circ, "circ")
    if add.shape != circ.shape:
        raise ValueError(f"table sizes differ: {add.shape} vs {circ.shape}")
    violations = _group_violations(add, "add", commutative=True)
    violations += _group_violations(circ, "circ", commutative=False)
    i = np.arange(add.shape[0])
    a, b, c = i[:, None, None], i[None, :, None], i[None, None, :]
    ok = add[circ[a, add[b, c]], a] == add[circ[a, b], circ[a, c]]
    if not ok.all():
        violations.append(("compatibility", tuple(int(v) for v in np.argwhere(~ok)[0])))
    return BraceReport(not violations, violations)


def verify_skew_brace(add, circ) -> bool:
    """Skew brace axioms; the additive group may be non-abelian."""
    add = _table(add, "add")
    circ = _table(circ, "circ")
    if add.shape != circ.shape:
        raise ValueError(f"table sizes differ: {add.shape} vs {circ.shape}")
    if _group_violations(add, "add", False) or _group_violations(circ, "circ", False):
        return False
    neg = _inverse_of(add)
    i = np.arange(add.shape[0])
    a, b, c = i[:, None, None], i[None, :, None], i[None, None, :]
    lhs = circ[a, add[b, c]]
    rhs = add[add[circ[a, b], neg[a]], circ[a, c]]
    return bool((lhs == rhs).all())


def brace_from_nilpotent_ring(R: FiniteRing) -> FiniteBrace:
    """The brace of a nilpotent ring: same addition, ``a o b = a + b + ab``."""
    problems = verify_ring(R)
    if problems:
        raise ValueError(f"not a ring: {problems[0]}")
    if R.nilpotency_class() is None:
        raise ValueError("ring is not nilpotent: its power chain does not reach 0")
    circ = R.add[R.add, R.mul]
    return FiniteBrace(R.add, circ, R.labels)


def star_product(B: FiniteBrace, a: int, b: int) -> int:
    return int(B.star[a, b])


def socle(B: FiniteBrace) -> BraceSubset:
    return B.subset(np.flatnonzero((B.star == 0).all(axis=1)))


def is_ideal(B: FiniteBrace, S: BraceSubset | Iterable[int]) -> bool:
    """Additive subgroup with ``z . x`` and ``x . z`` in it for all ``z``."""
    members = frozenset(S.members if isinstance(S, BraceSubset) else S)
    if 0 not in members:
        return False
    m = np.array(sorted(members))
    everything = np.arange(B.order)
    for block in (B.add[np.ix_(m, m)], B.neg[m], B.star[np.ix_(everything, m)],
                  B.star[np.ix_(m, everything)]):
        if not set(np.unique(block).tolist()) <= members:
            return False
    return True


def quotient_brace(B: FiniteBrace, I: BraceSubset | Iterable[int]) -> tuple[FiniteBrace, np.ndarray]:
    """Brace of additive cosets ``a + I``; cosets are numbered by smallest member."""
    members = frozenset(I.members if isinstance(I, BraceSubset) else I)
    if not is_ideal(B, members):
        raise ValueError("subset is not an ideal")
    ideal = np.array(sorted(members))
    class_map = np.full(B.order, -1, dtype=np.int64)
    reps = []
    for a in range(B.order):
        if class_map[a] < 0:
            class_map[B.add[a, ideal]] = len(reps)
            reps.append(a)
    k = len(reps)
    add = np.full((k, k), -1, dtype=np.int64)
    circ = np.full((k, k), -1, dtype=np.int64)
    for table, out in ((B.add, add), (B.circ, circ)):
        induced = class_map[table]
        for i in range(k):
            for j in range(k):
                vals = np.unique(induced[np.ix_(class_map == i, class_map == j)])
                if vals.size != 1:
                    raise ValueError("induced operation is not well defined")
                out[i, j] = vals[0]
    labels = [B.label(r) + "+I" for r in reps] if B.labels else None
    class_map.setflags(write=False)
    return FiniteBrace(add, circ, labels), class_map


def _chain(B: FiniteBrace, step, limit: int) -> ChainReport:
    zero = frozenset({0})
    terms = [frozenset(range(B.order))]
    while terms[-1] != zero and len(terms) < limit:
        nxt = step(terms)
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    vanishes = terms[-1] == zero
    return ChainReport(tuple(terms), vanishes, len(terms) if vanishes else None)


def nilpotency_chains(B: FiniteBrace) -> NilpotencyChains:
    """Left ``A^{i+1} = A.A^i``, right ``A^{(i+1)} = A^{(i)}.A`` and strong chains."""
    everything = range(B.order)
    limit = B.order + 2

    def strong(terms):
        n = len(terms)
        s = set()
        for i in range(1, n + 1):
            s |= B.product_set(terms[i - 1], terms[n - i]).members
        return B.span(s).members

    return NilpotencyChains(
        left=_chain(B, lambda t: B.product_set(everything, t[-1]).members, limit),
        right=_chain(B, lambda t: B.product_set(t[-1], everything).members, limit),
        strong=_chain(B, strong, limit),
    )


def generated_subbrace(B: FiniteBrace, gens: int | Iterable[int]) -> BraceSubset:
    """Smallest subset containing ``gens`` and closed under ``+`` and ``o``."""
    if isinstance(gens, (int, np.integer)):
        gens = [gens]
    members = {0, *(int(g) for g in gens)}
    frontier = set(members)
    while frontier:
        cur = np.array(sorted(members))
        fr = np.array(sorted(frontier))
        new = set()
        for T in (B.add, B.circ):
            new.update(np.unique(T[np.ix_(fr, cur)]).tolist())
            new.update(np.unique(T[np.ix_(cur, fr)]).tolist())
        frontier = new - members
        members |= frontier
    return B.subset(members)


def restrict_brace(B: FiniteBrace, S: BraceSubset | Iterable[int]) -> tuple[FiniteBrace, tuple[int, ...]]:
    """Materialise a sub-brace on its own indices; returns it with the embedding."""
    elems = tuple(sorted(S.members if isinstance(S, BraceSubset) else S))
    pos = {e: k for k, e in enumerate(elems)}
    if elems[0] != 0:
        raise ValueError("a sub-brace must contain 0")
    idx = np.array(elems)
    try:
        add = np.vectorize(pos.__getitem__)(B.add[np.ix_(idx, idx)])
        circ = np.vectorize(pos.__getitem__)(B.circ[np.ix_(idx, idx)])
    except KeyError as exc:
        raise ValueError(f"subset is not closed: {exc.args[0]} escapes") from None
    labels = [B.label(e) for e in elems] if B.labels else None
    return FiniteBrace(add, circ, labels), elems


def circle_subgroups(B: FiniteBrace) -> list[frozenset[int]]:
    """All subgroups of ``(B, o)``, by joining cyclic subgroups until nothing new appears."""

    def closure(gens):
        members = {0, *gens}
        while True:
            cur = np.array(sorted(members))
            nxt = members | set(np.unique(B.circ[np.ix_(cur, cur)]).tolist())
            if nxt == members:
                return frozenset(members)
            members = nxt

    cyclic = {closure([a]) for a in range(B.order)}
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for H in frontier:
            for C in cyclic:
                if not C <= H:
                    J = closure(H | C)
                    if J not in found:
                        new.add(J)
        found |= new
        frontier = new
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _factor_map(N: FiniteBrace, Bsub, Csub) -> dict[int, tuple[int, int]]:
    factors: dict[int, list[tuple[int, int]]] = {}
    for b in Bsub:
        for c in Csub:
            factors.setdefault(int(N.circ[b, c]), []).append((b, c))
    bad = [a for a in range(N.order) if len(factors.get(a, [])) != 1]
    if bad:
        a = bad[0]
        raise ValueError(f"factorisation is not exact: element {a} has "
                         f"{len(factors.get(a, []))} factorisations")
    return {a: f[0] for a, f in factors.items()}


def exact_factorizations(N: FiniteBrace) -> Iterator[tuple[frozenset[int], frozenset[int]]]:
    """Pairs of subgroups ``(B, C)`` of ``(N, o)`` with ``N = B o C`` exactly."""
    subs = circle_subgroups(N)
    for Bs, Cs in itertools.product(subs, repeat=2):
        if len(Bs) * len(Cs) != N.order or Bs & Cs != {0}:
            continue
        products = {int(N.circ[b, c]) for b in Bs for c in Cs}
        if len(products) == N.order:
            yield Bs, Cs


def brace_from_exact_factorization(N: FiniteBrace, Bsub: Iterable[int], Csub: Iterable[int]) -> FiniteBrace:
    """Brace ``(N, +, .)`` with ``a . a' = b o a' o c`` where ``a = b o c``.

    ``N`` should be the brace of a nilpotent ring; the compatibility law
    depends on ``o`` being affine in each argument.
    """
    Bsub, Csub = sorted(set(Bsub)), sorted(set(Csub))
    factors = _factor_map(N, Bsub, Csub)
    odot = np.empty_like(N.circ)
    for a in range(N.order):
        b, c = factors[a]
        odot[a] = N.circ[N.circ[b], c]
    return FiniteBrace(N.add, odot, N.labels)


def check_sum_formula(B: FiniteBrace, a: int, b: int, c: int, s: int | None = None) -> bool:
    """Compare ``(a+b).c`` with the expansion through ``d_i, d_i'`` valid in right nilpotent braces."""
    if s is None:
        right = nilpotency_chains(B).right
        if not right.vanishes:
            raise ValueError("brace is not right nilpotent")
        s = right.vanish_index
    add, star, neg = B.add, B.star, B.neg
    d, dp = a, b
    total = add[star[a, c], star[b, c]]
    for i in range(2 * s + 1):
        term = add[star[star[dp, d], c], neg[star[dp, star[d, c]]]]
        total = add[total, term if i % 2 else neg[term]]
        d, dp = add[d, dp], star[dp, d]
    return bool(star[add[a, b], c] == total)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def _poly_label(coeffs: Sequence[int]) -> str:
    parts = []
    for k, a in enumerate(coeffs, start=1):
        if a == 0:
            continue
        mono = "x" if k == 1 else f"x^{k}"
        parts.append(mono if a == 1 else f"{a}{mono}")
    return "+".join(parts) or "0"


def make_truncated_polynomial_ring(p: int, n: int) -> FiniteRing:
    """Polynomials ``a_1 x + ... + a_{n-1} x^{n-1}`` over ``F_p`` with ``x^n = 0``.

    The element with coefficients ``(a_1, ..., a_{n-1})`` has index
    ``sum a_k p^(k-1)``; so ``x`` is 1 and ``x^2`` is ``p``.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 2:
        raise ValueError("degree bound n must be at least 2")
    m = n - 1
    elems = list(itertools.product(range(p), repeat=m))
    elems = [tuple(reversed(e)) for e in elems]  # little-endian coefficients
    index = {e: sum(a * p ** k for k, a in enumerate(e)) for e in elems}
    N = len(elems)
    add = np.zeros((N, N), dtype=np.int64)
    mul = np.zeros((N, N), dtype=np.int64)
    for e in elems:
        for f in elems:
            s = tuple((x + y) % p for x, y in zip(e, f))
            prod = [0] * m
            for i, x in enumerate(e):
                for j, y in enumerate(f):
                    deg = (i + 1) + (j + 1)
                    if deg < n:
                        prod[deg - 1] = (prod[deg - 1] + x * y) % p
            add[index[e], index[f]] = index[s]
            mul[index[e], index[f]] = index[tuple(prod)]
    labels = [None] * N
    for e in elems:
        labels[index[e]] = _poly_label(e)
    return FiniteRing(add, mul, labels)


def multiples_ring(m: int, modulus: int) -> FiniteRing:
    """The subring ``mZ / modulus Z``; index ``k`` stands for ``k*m``."""
    if m <= 0 or modulus % m:
        raise ValueError("m must divide the modulus")
    N = modulus // m
    k = np.arange(N)
    add = (k[:, None] + k[None, :]) % N
    mul = (k[:, None] * k[None, :] * m) % N
    return FiniteRing(add, mul, [str(int(v) * m) for v in k])


def zero_ring(n: int) -> FiniteRing:
    """Cyclic group ``Z/n`` with all products zero."""
    k = np.arange(n)
    return FiniteRing((k[:, None] + k[None, :]) % n, np.zeros((n, n), dtype=np.int64))


def upper_triangular_ring(p: int, k: int) -> FiniteRing:
    """Strictly upper triangular ``k x k`` matrices over ``F_p``."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    slots = [(i, j) for i in range(k) for j in range(i + 1, k)]
    mats = []
    for digits in itertools.product(range(p), repeat=len(slots)):
        M = np.zeros((k, k), dtype=np.int64)
        for (i, j), v in zip(slots, reversed(digits)):
            M[i, j] = v
        mats.append(M)

    def index(M):
        return sum(int(M[i, j]) * p ** s for s, (i, j) in enumerate(slots))

    mats.sort(key=index)
    N = len(mats)
    add = np.zeros((N, N), dtype=np.int64)
    mul = np.zeros((N, N), dtype=np.int64)
    for a, A in enumerate(mats):
        for b, Bm in enumerate(mats):
            add[a, b] = index((A + Bm) % p)
            mul[a, b] = index((A @ Bm) % p)
    return FiniteRing(add, mul)


def direct_product_ring(R: FiniteRing, S: FiniteRing) -> FiniteRing:
    """``R x S`` with pair ``(r, s)`` at index ``r * |S| + s``."""
    m = S.order

    def combine(T, U):
        return (T[:, None, :, None] * m + U[None, :, None, :]).reshape(R.order * m, R.order * m)

    labels = None
    if R.labels or S.labels:
        labels = [f"({R.label(r)},{S.label(s)})" for r in range(R.order) for s in range(m)]
    return FiniteRing(combine(R.add, S.add), combine(R.mul, S.mul), labels)


def trivial_brace(n: int) -> FiniteBrace:
    """``Z/n`` with ``a o b = a + b``."""
    return brace_from_nilpotent_ring(zero_ring(n))


def small_braces(max_order: int = 8) -> list[tuple[str, FiniteBrace]]:
    """Named braces of order at most ``max_order`` built from the ring constructors above,
    plus the braces obtained from exact factorisations of non-abelian circle groups."""
    rings: list[tuple[str, FiniteRing]] = [(f"zero({n})", zero_ring(n)) for n in range(1, 9)]
    rings.append(("zero(2)x zero(2)", direct_product_ring(zero_ring(2), zero_ring(2))))
    for p in (2, 3, 5, 7):
        for n in range(2, 6):
            if p ** (n - 1) <= max_order:
                rings.append((f"truncpoly(p={p},n={n})", make_truncated_polynomial_ring(p, n)))
    for e in range(2, 5):
        rings.append((f"2Z/{2 ** e}Z", multiples_ring(2, 2 ** e)))
    rings.append(("3Z/9Z", multiples_ring(3, 9)))
    rings.append(("UT3(F2)", upper_triangular_ring(2, 3)))
    f2x3 = make_truncated_polynomial_ring(2, 3)
    rings.append(("truncpoly(2,3) x zero(2)", direct_product_ring(f2x3, zero_ring(2))))
    rings.append(("2Z/8Z x zero(2)", direct_product_ring(multiples_ring(2, 8), zero_ring(2))))
    out = [(name, brace_from_nilpotent_ring(R)) for name, R in rings if R.order <= max_order]
    seen_tables = set()
    for name, N in list(out):
        if (N.circ == N.circ.T).all():
            continue
        for k, (Bs, Cs) in enumerate(exact_factorizations(N)):
            br = brace_from_exact_factorization(N, Bs, Cs)
            key = br.circ.tobytes()
            if (br.circ != N.circ).any() and key not in seen_tables:
                seen_tables.add(key)
                out.append((f"{name} factorised #{k}", br))
    return out
