"""Named example objects reproduced by ``ybekit example``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ybekit import rmatrix as rm
from ybekit.io import golden_matrix, load_golden
from ybekit.solutions import SetSolution, builtin_solution, orbits
from ybekit.weights import WeightSystem, cyclic_g, hura5_g, orbit_weights

DEFAULT_SYMBOLS = {"a": 2.0, "b": 3.0, "c": 5.0, "d": 7.0}

# r on {0, 1, 2} with orbits {0, 1} and {2}
TWO_ORBIT3 = [[(1, 1), (0, 1), (2, 0)],
              [(1, 0), (0, 0), (2, 1)],
              [(0, 2), (1, 2), (2, 2)]]


@dataclass
class Example:
    name: str
    matrix: np.ndarray
    golden: str | None = None
    symbols: dict = field(default_factory=dict)
    solution: SetSolution | None = None
    weights: WeightSystem | None = None
    note: str = ""

    def golden_matrix(self) -> np.ndarray | None:
        if self.golden is None:
            return None
        doc = load_golden(self.golden)
        syms = {s: self.symbols[s] for s in doc.get("symbols", [])}
        return golden_matrix(self.golden, syms)


def _sym(symbols, *names):
    merged = {**DEFAULT_SYMBOLS, **(symbols or {})}
    return {k: merged[k] for k in names}


def build(name: str, symbols: dict | None = None) -> Example:
    if name == "A1":
        return Example(name, rm.householder_a1(3), "householder_A1", note="reflection times flip")
    if name == "A2":
        return Example(name, rm.alpha_b_beta_e(), "alphaB_betaE_A2", note="cyclic(3) pattern mixed with all-ones")
    if name == "A_of_d":
        d = [(symbols or {}).get(f"d{i}", float(10 - i)) for i in range(1, 10)]
        syms = {f"d{i}": d[i - 1] for i in range(1, 10)}
        return Example(name, rm.a_of_d(d), "A_of_d", syms, note="prescribed singular values")
    if name == "vandermonde_P":
        return Example(name, rm.vandermonde_p(3), note="cube roots of unity")
    if name == "idempotent_C":
        return Example(name, rm.idempotent_c(), "idempotent_C", note="C^2 = C")
    if name == "counterexample_X":
        return Example(name, rm.counterexample_x(), "counterexample_X", note="R-matrix whose square entries are not")
    if name == "cyclic3":
        s = _sym(symbols, "a", "b", "c")
        S, D = builtin_solution("cyclic", 3), cyclic_g([s["c"], s["b"], s["a"]])
        return Example(name, rm.monomial_from_bvst(S, D), "cyclic3", s, S, D, "d_(i,j) = g(i-j), g = (c, b, a)")
    if name == "cyclic4":
        s = _sym(symbols, "a", "b", "c", "d")
        S, D = builtin_solution("cyclic", 4), cyclic_g([s["c"], s["d"], s["a"], s["b"]])
        return Example(name, rm.monomial_from_bvst(S, D), "cyclic4_block", s, S, D, "g = (c, d, a, b)")
    if name == "hura5":
        s = _sym(symbols, "a", "b", "c")
        S, D = builtin_solution("hura5"), hura5_g([[s["b"], s["c"]], [s["c"], s["a"]]])
        return Example(name, rm.monomial_from_bvst(S, D), "hura5_block", s, S, D,
                       "g(0,0) = b, g(0,1) = g(1,0) = c, g(1,1) = a")
    if name == "two_orbit3":
        s = _sym(symbols, "a", "b", "c", "d")
        S = SetSolution(TWO_ORBIT3)
        part, _ = orbits(S)
        D = orbit_weights(S, part, [[s["a"], s["c"]], [s["b"], s["d"]]])
        return Example(name, rm.monomial_from_bvst(S, D), "two_orbit3", s, S, D, "orbit weights on {0,1} and {2}")
    raise KeyError(name)


NAMES = ("A1", "A2", "A_of_d", "vandermonde_P", "idempotent_C", "counterexample_X",
         "cyclic3", "cyclic4", "hura5", "two_orbit3")
