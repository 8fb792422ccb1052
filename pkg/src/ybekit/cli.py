"""Command line entry point: ``ybekit {build,verify,analyze,transform,example}``.

Exit codes: 0 all checks pass, 1 a verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from ybekit import algebra as alg
from ybekit import examples as ex
from ybekit import rmatrix as rm
from ybekit import solutions as sol
from ybekit import weights as wts
from ybekit.io import SchemaError, canonical_dumps, load, to_json
from ybekit.linalg import singular_values

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def default_tol() -> float:
    raw = os.environ.get("YBE_TOL")
    if raw is None:
        return 1e-9
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"YBE_TOL={raw!r} is not a number")


# ---- helpers ----------------------------------------------------------------

def _load(path, kind: str | tuple[str, ...] | None = None):
    if path is None:
        raise InputError(f"missing input {kind or 'object'} file")
    obj, doc = load(path)
    kinds = (kind,) if isinstance(kind, str) else kind
    if kinds and doc["kind"] not in kinds:
        raise InputError(f"{path}: expected {' or '.join(kinds)}, got {doc['kind']}")
    return obj, doc


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise InputError(f"not a complex number: {text!r}")


def _complex_list(text: str) -> list[complex]:
    return [_complex(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"not a list of integers: {text!r}")


def _symbols(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise InputError(f"--set expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = _complex(v)
    return out


def _fmt(z) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-12:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _emit(args, obj, origin: dict, summary: str) -> int:
    text = canonical_dumps(to_json(obj, origin))
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc}")
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    return EXIT_OK


def _report(args, data: dict, lines: list[str], ok: bool) -> int:
    if args.json:
        print(json.dumps({**data, "ok": ok}, sort_keys=True, default=_json_default))
    else:
        for line in lines:
            print(line)
    return EXIT_OK if ok else EXIT_FAIL


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (complex, np.complexfloating)):
        return [float(o.real), float(o.imag)]
    if isinstance(o, np.ndarray):
        return [_json_default(v) if isinstance(v, (complex, np.complexfloating)) else v for v in o.tolist()]
    raise TypeError(type(o).__name__)


# ---- build --------------------------------------------------------------------

def _ring_from_args(a) -> alg.FiniteRing:
    if a.ring == "truncpoly":
        return alg.make_truncated_polynomial_ring(a.p, a.deg)
    if a.ring == "multiples":
        return alg.multiples_ring(a.m, a.modulus)
    if a.ring == "zero":
        return alg.zero_ring(a.n)
    if a.ring == "ut":
        return alg.upper_triangular_ring(a.p, a.deg)
    raise InputError(f"unknown ring {a.ring!r}")


def cmd_build(a) -> int:
    what, how = a.kind, a.how
    origin = {"command": "build", "kind": what, "how": how}
    if what == "ring":
        a.ring = how
        R = _ring_from_args(a)
        return _emit(a, R, origin, f"ring {how} of order {R.order}")
    if what == "brace":
        if how == "from-ring":
            R = _ring_from_args(a)
            B = alg.brace_from_nilpotent_ring(R)
            origin["ring"] = a.ring
        elif how == "trivial":
            B = alg.trivial_brace(a.n)
        else:
            raise InputError(f"unknown brace construction {how!r}")
        return _emit(a, B, origin, f"brace of order {B.order}")
    if what == "solution":
        if how in ("cyclic", "flip", "hura5"):
            S = sol.builtin_solution(how, a.n)
        elif how == "two_orbit3":
            S = sol.SetSolution(ex.TWO_ORBIT3)
        elif how == "from-brace":
            B, _ = _load(a.input, "brace")
            S = sol.yb_map_from_brace(B)
        elif how == "one-generator":
            B, _ = _load(a.input, "brace")
            _, _, S = sol.one_generator_solution(B, a.x)
            origin["generator"] = a.x
        else:
            raise InputError(f"unknown solution {how!r}")
        return _emit(a, S, origin, f"solution {how} on {S.n} points")
    if what == "weights":
        if how == "cyclic_g":
            D = wts.cyclic_g(_complex_list(a.g))
        elif how == "hura5_g":
            g = _complex_list(a.g)
            if len(g) != 4:
                raise InputError("hura5_g takes g(0,0),g(0,1),g(1,0),g(1,1)")
            D = wts.hura5_g(np.reshape(g, (2, 2)))
        elif how == "constant":
            D = wts.WeightSystem.constant(a.n, _complex(a.value))
        elif how == "orbit":
            S, _ = _load(a.input, "solution")
            part, _ = sol.orbits(S)
            rows = [_complex_list(r) for r in a.alpha.split(";")]
            D = wts.orbit_weights(S, part, rows)
        elif how == "nontrivial":
            S, _ = _load(a.input, "solution")
            pres = None
            if a.brace:
                B, _ = _load(a.brace, "brace")
                pres = (B, a.x)
            D = wts.construct_nontrivial_bvst(S, pres)
        else:
            raise InputError(f"unknown weights {how!r}")
        if a.g:
            origin["g"] = a.g
        return _emit(a, D, origin, f"weights on {D.n} points")
    if what == "matrix":
        if how == "example":
            try:
                M = ex.build(a.name, _symbols(a.set)).matrix
            except KeyError:
                raise InputError(f"unknown example {a.name!r}; choose from {', '.join(ex.NAMES)}")
            origin["name"] = a.name
        elif how == "monomial":
            S, _ = _load(a.input, "solution")
            D, _ = _load(a.weights, "weights")
            M = rm.monomial_from_bvst(S, D)
        else:
            raise InputError(f"unknown matrix construction {how!r}")
        return _emit(a, M, origin, f"matrix {M.shape[0]}x{M.shape[1]}")
    if what == "partition":
        if how == "orbits":
            S, _ = _load(a.input, "solution")
            P, _ = sol.orbits(S)
        elif how == "invariant":
            B, _ = _load(a.input, "brace")
            _, P = sol.invariant_partition(a.partition_kind, B)
        else:
            raise InputError(f"unknown partition {how!r}")
        return _emit(a, P, origin, f"partition into {len(P.classes)} classes")
    raise InputError(f"unknown kind {what!r}")


# ---- verify -------------------------------------------------------------------

def cmd_verify(a) -> int:
    obj, doc = _load(a.path)
    kind, tol = doc["kind"], a.tol
    if kind == "brace":
        rep = alg.verify_brace(obj.add, obj.circ)
        names = sorted({v[0] for v in rep.violations})
        lines = ["brace ok" if rep.is_brace else "brace FAILED: " + ", ".join(names)]
        return _report(a, {"kind": kind, "violations": names}, lines, rep.is_brace)
    if kind == "ring":
        bad = alg.verify_ring(obj)
        names = sorted({v[0] for v in bad})
        nil = obj.nilpotency_class() if not bad else None
        lines = ["ring ok" if not bad else "ring FAILED: " + ", ".join(names),
                 f"nilpotency class {nil}" if nil is not None else "not nilpotent"]
        return _report(a, {"kind": kind, "violations": names, "nilpotency_class": nil}, lines, not bad)
    if kind == "solution":
        props = sol.solution_properties(obj)
        flags = {"bijective": obj.is_bijective(), "braid_ok": props.braid_ok, "involutive": props.involutive,
                 "left_nondeg": props.left_nondeg, "right_nondeg": props.right_nondeg}
        shown = [k for k in ("braid_ok", "involutive") if flags[k]]
        if props.nondegenerate:
            shown.append("nondeg")
        missing = [k for k, v in flags.items() if not v]
        lines = [" ".join(shown) if shown else "no properties hold"]
        if missing:
            lines.append("fails: " + " ".join(missing))
        return _report(a, {"kind": kind, **flags}, lines, props.braid_ok)
    if kind == "weights":
        if not a.solution:
            return _report(a, {"kind": kind}, [f"weights on {obj.n} points, all non-zero"], True)
        S, _ = _load(a.solution, "solution")
        bad = wts.cocycle_defect(S, obj, tol)
        lines = ["cocycle ok" if bad is None else f"cocycle FAILED at triple {bad}"]
        return _report(a, {"kind": kind, "defect": bad}, lines, bad is None)
    if kind == "matrix":
        ok, res = rm.qybe_check(obj, None, tol)
        nonsing = rm.is_nonsingular(obj, tol)
        lines = [f"qybe {'ok' if ok else 'FAILED'} residual {res:.3e}",
                 f"nonsingular {nonsing}; R-matrix {ok and nonsing}"]
        return _report(a, {"kind": kind, "qybe": ok, "residual": res, "nonsingular": nonsing}, lines, ok)
    if kind == "partition":
        if a.solution:
            S, _ = _load(a.solution, "solution")
            try:
                sol._check_invariant(S, obj.classes)
                ok, msg = True, "partition is invariant"
            except ValueError as exc:
                ok, msg = False, f"partition FAILED: {exc}"
        else:
            ok, msg = True, f"{len(obj.classes)} disjoint classes"
        return _report(a, {"kind": kind}, [msg], ok)
    raise InputError(f"cannot verify kind {kind!r}")


# ---- analyze ------------------------------------------------------------------

def cmd_analyze(a) -> int:
    what = a.what
    if what in ("orbits", "mpl", "permgroup", "triviality"):
        S, _ = _load(a.path, "solution")
    if what == "orbits":
        P, ind = sol.orbits(S)
        k = len(P.classes)
        lines = [f"{k} orbit{'s' if k != 1 else ''}, {'indecomposable' if ind else 'decomposable'}"]
        lines += [" ".join(map(str, c)) for c in P.classes]
        return _report(a, {"orbits": [list(c) for c in P.classes], "indecomposable": ind}, lines, True)
    if what == "mpl":
        level = sol.multipermutation_level(S)
        return _report(a, {"mpl": level}, [f"mpl {level if level is not None else 'infinite'}"], True)
    if what == "permgroup":
        G = sol.permutation_group(S)
        return _report(a, {"order": G.order, "nilpotent": G.is_nilpotent},
                       [f"order {G.order}, {'nilpotent' if G.is_nilpotent else 'not nilpotent'}"], True)
    if what == "triviality":
        if not a.weights:
            raise InputError("triviality needs --weights")
        D, _ = _load(a.weights, "weights")
        w = wts.triviality_witness(S, D, a.tol)
        lines = ["trivial" if w else "non-trivial"]
        data = {"trivial": w is not None}
        if w is not None:
            lines.append("c " + _fmt(w.c))
            lines.append("alpha " + " ".join(_fmt(v) for v in w.alpha))
            data.update(c=w.c, alpha=w.alpha)
        return _report(a, data, lines, True)
    M, _ = _load(a.path, "matrix")
    if what == "svd":
        s = singular_values(M)
        if a.figure:
            from ybekit.plotting import singular_values_figure
            singular_values_figure(s, a.figure, title=f"singular values of {Path(a.path).name}")
        lines = ["\t".join(f"{v:.12g}" for v in s)]
        return _report(a, {"singular_values": s.tolist()}, lines, True)
    if what == "classify":
        rep, S = rm.classify_involutive_matrix(M)
        fields = ("qybe", "permutation", "symmetric", "squares_to_identity", "blocks")
        lines = [" ".join(f"{f}={getattr(rep, f)}" for f in fields), f"accepted={rep.accepted}"]
        data = {f: getattr(rep, f) for f in fields}
        data["accepted"] = rep.accepted
        if S is not None:
            data["solution"] = to_json(S)
            if a.out:
                Path(a.out).write_text(canonical_dumps(to_json(S, {"command": "analyze classify"})))
        return _report(a, data, lines, rep.accepted)
    raise InputError(f"unknown analysis {what!r}")


# ---- transform ----------------------------------------------------------------

def cmd_transform(a) -> int:
    op, ins = a.op, a.inputs
    origin = {"command": "transform", "op": op, "inputs": [str(p) for p in ins]}

    def need(k):
        if len(ins) != k:
            raise InputError(f"{op} takes {k} input file{'s' if k > 1 else ''}")

    if op in ("kron", "hadamard"):
        need(2)
        A, _ = _load(ins[0], "matrix")
        B, _ = _load(ins[1], "matrix")
        if op == "kron":
            M = rm.kron(A, B)
        else:
            M = rm.hadamard(A, B) if a.plain else rm.hadamard_rmatrix(A, B)
        return _emit(a, M, origin, f"{op} {M.shape[0]}x{M.shape[1]}")
    if op == "similarity":
        need(1)
        X, _ = _load(ins[0], "matrix")
        if a.p == "vandermonde3":
            P = rm.vandermonde_p(3)
        elif a.p:
            P, _ = _load(a.p, "matrix")
        else:
            raise InputError("similarity needs --p")
        M = rm.conjugate_similarity(P, X) if a.forward else rm.inverse_similarity(P, X)
        origin["p"] = a.p
        origin["direction"] = "forward" if a.forward else "inverse"
        return _emit(a, M, origin, f"similarity {'(PxP) X (PxP)^-1' if a.forward else '(PxP)^-1 X (PxP)'}")
    if op == "retract":
        need(1)
        S, _ = _load(ins[0], "solution")
        Q, cm = sol.retraction(S)
        origin["class_map"] = cm.tolist()
        return _emit(a, Q, origin, f"retraction: {S.n} -> {Q.n} points")
    if op == "i-retract":
        need(2)
        B, _ = _load(ins[0], "brace")
        S, _ = _load(ins[1], "solution")
        if a.ideal is not None:
            I = _int_list(a.ideal)
        elif a.left_power:
            I = alg.nilpotency_chains(B).left.term(a.left_power)
        else:
            raise InputError("i-retract needs --ideal or --left-power")
        Q, cm = sol.i_retraction(B, I, S)
        origin["class_map"] = cm.tolist()
        origin["ideal"] = sorted(int(x) for x in I)
        return _emit(a, Q, origin, f"I-retraction: {S.n} -> {Q.n} points")
    if op == "lift-weights":
        need(2)
        S, _ = _load(ins[0], "solution")
        Dq, _ = _load(ins[1], "weights")
        if not a.quotient:
            raise InputError("lift-weights needs --quotient (a retract output carrying origin.class_map)")
        Q, qdoc = _load(a.quotient, "solution")
        cm = (qdoc.get("origin") or {}).get("class_map")
        if cm is None:
            raise InputError(f"{a.quotient} has no origin.class_map")
        D = wts.lift_weights(S, cm, Dq, Q)
        return _emit(a, D, origin, f"lifted weights on {D.n} points")
    if op == "gmap":
        need(1)
        A, _ = _load(ins[0], "matrix")
        G = rm.MultiplicativeMap(a.power, a.conj)
        origin["map"] = {"power": a.power, "conjugate": a.conj}
        M = rm.apply_multiplicative_map(A, G)
        return _emit(a, M, origin, f"z -> {'conj ' if a.conj else ''}z^{a.power}")
    raise InputError(f"unknown transform {op!r}")


# ---- example ------------------------------------------------------------------

def _example_checks(e: ex.Example, tol: float) -> dict:
    out: dict = {}
    G = e.golden_matrix()
    if G is not None:
        out["golden"] = bool(np.array_equal(G, e.matrix))
    M = e.matrix
    if e.name == "idempotent_C":
        X = rm.kron(M, np.eye(4))
        out["qybe"], out["residual"] = rm.qybe_check(X, tol=tol)
        out["pinv_qybe"] = rm.qybe_check(rm.pinv(X), tol=tol)[0]
    elif e.name == "vandermonde_P":
        out["PhP"] = bool(np.allclose(M.conj().T @ M, 3 * np.eye(3), atol=tol))
    else:
        out["qybe"], out["residual"] = rm.qybe_check(M, tol=tol)
        out["r_matrix"] = rm.is_r_matrix(M, tol=tol)
        out["unitary"] = rm.is_unitary(M, tol)
    if e.name == "counterexample_X":
        out["hadamard_square_qybe"] = rm.qybe_check(rm.hadamard(M, M), tol=tol)[0]
    if e.name in ("A1", "A2"):
        Y = rm.inverse_similarity(rm.vandermonde_p(3), M)
        out["similar_to_A_of_d"] = bool(np.max(np.abs(Y - rm.a_of_d(rm.expected_similarity_d(e.name)))) <= tol)
    if e.solution is not None:
        out["cocycle"] = wts.verify_cocycle(e.solution, e.weights, tol)
    return out


# checks whose expected value is False
_EXPECTED_FALSE = {"pinv_qybe", "hadamard_square_qybe"}


def _example_ok(name: str, checks: dict) -> bool:
    for k, v in checks.items():
        if k in ("residual", "unitary", "r_matrix"):
            continue
        if bool(v) != (k not in _EXPECTED_FALSE):
            return False
    return True


def cmd_example(a) -> int:
    names = ex.NAMES if a.name == "all" else [a.name]
    syms = _symbols(a.set)
    outdir = Path(a.out_dir) if a.out_dir else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    rows, all_ok = [], True
    for name in names:
        try:
            e = ex.build(name, syms)
        except KeyError:
            raise InputError(f"unknown example {name!r}; choose from all, {', '.join(ex.NAMES)}")
        checks = _example_checks(e, a.tol)
        ok = _example_ok(name, checks)
        all_ok &= ok
        rows.append({"name": name, "ok": ok, **checks})
        if outdir:
            origin = {"command": "example", "name": name, "note": e.note}
            if e.symbols:
                origin["symbols"] = {k: _fmt(v) for k, v in e.symbols.items()}
            (outdir / f"{name}.json").write_text(canonical_dumps(to_json(e.matrix, origin)))
            if e.solution is not None:
                (outdir / f"{name}.solution.json").write_text(canonical_dumps(to_json(e.solution, origin)))
                (outdir / f"{name}.weights.json").write_text(canonical_dumps(to_json(e.weights, origin)))
            if not a.no_figures:
                from ybekit.plotting import matrix_figure, singular_values_figure
                matrix_figure(e.matrix, outdir / f"{name}.png", title=name)
                if name == "A_of_d":
                    d = np.abs(np.diag(e.matrix @ rm.flip_matrix(3)))
                    singular_values_figure(singular_values(e.matrix), outdir / f"{name}.svd.png",
                                           title="A(d) singular values", reference=d)
    if a.json:
        print(json.dumps(rows, sort_keys=True, default=_json_default))
    else:
        for r in rows:
            fields = [f"{k}={_fmt(v) if isinstance(v, float) and k == 'residual' else v}"
                      for k, v in r.items() if k not in ("name", "ok")]
            print("\t".join([r["name"], "PASS" if r["ok"] else "FAIL"] + fields))
    return EXIT_OK if all_ok else EXIT_FAIL


# ---- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="numeric tolerance (default $YBE_TOL or 1e-9)")
    common.add_argument("--json", action="store_true", help="machine-readable report")

    p = argparse.ArgumentParser(prog="ybekit", description="Braces, set-theoretic solutions and R-matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="construct an object file")
    b.add_argument("kind", choices=["brace", "ring", "solution", "weights", "matrix", "partition"])
    b.add_argument("how", help="construction, e.g. from-ring, cyclic, cyclic_g, example, orbits")
    b.add_argument("input", nargs="?", help="input object file for constructions that need one")
    b.add_argument("--out", "-o", help="output file (default: standard output)")
    b.add_argument("--ring", default="truncpoly", choices=["truncpoly", "multiples", "zero", "ut"])
    b.add_argument("--p", type=int, default=2)
    b.add_argument("--deg", type=int, default=3)
    b.add_argument("--m", type=int, default=2)
    b.add_argument("--modulus", type=int, default=8)
    b.add_argument("--n", type=int)
    b.add_argument("--x", type=int, default=1, help="generator element")
    b.add_argument("--g", help="comma-separated complex weights")
    b.add_argument("--value", default="1")
    b.add_argument("--alpha", help="class-pair weights, rows separated by ';'")
    b.add_argument("--brace", help="brace file presenting an indecomposable solution")
    b.add_argument("--weights", help="weights file (matrix monomial)")
    b.add_argument("--name", help="example name (matrix example)")
    b.add_argument("--set", action="append", help="symbol value for an example, e.g. a=2")
    b.add_argument("--partition-kind", default="orbit_Q", choices=["orbit_Q", "graded", "coset", "sylow"])
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", parents=[common], help="check an object file")
    v.add_argument("path")
    v.add_argument("--solution", help="solution file for weights or partition checks")
    v.set_defaults(func=cmd_verify)

    an = sub.add_parser("analyze", parents=[common], help="structural analysis")
    an.add_argument("what", choices=["orbits", "mpl", "svd", "triviality", "classify", "permgroup"])
    an.add_argument("path")
    an.add_argument("--weights", help="weights file for triviality")
    an.add_argument("--figure", help="write a figure (svd)")
    an.add_argument("--out", help="write the decoded solution (classify)")
    an.set_defaults(func=cmd_analyze)

    t = sub.add_parser("transform", parents=[common], help="derive a new object file")
    t.add_argument("op", choices=["kron", "hadamard", "similarity", "retract", "i-retract", "lift-weights", "gmap"])
    t.add_argument("inputs", nargs="+")
    t.add_argument("--out", "-o")
    t.add_argument("--p", help="vandermonde3 or a matrix file")
    t.add_argument("--forward", action="store_true", help="similarity as (PxP) X (PxP)^-1")
    t.add_argument("--plain", action="store_true", help="hadamard without the monomial support check")
    t.add_argument("--ideal", help="comma-separated ideal elements")
    t.add_argument("--left-power", type=int, help="use the left chain term A^k as the ideal")
    t.add_argument("--quotient", help="retract output with origin.class_map")
    t.add_argument("--power", type=int, default=1)
    t.add_argument("--conj", action="store_true")
    t.set_defaults(func=cmd_transform)

    e = sub.add_parser("example", parents=[common], help="reproduce the printed matrices")
    e.add_argument("name", choices=("all",) + ex.NAMES)
    e.add_argument("--out-dir", help="write JSON files and PNG figures here")
    e.add_argument("--no-figures", action="store_true")
    e.add_argument("--set", action="append", help="symbol value, e.g. a=2")
    e.set_defaults(func=cmd_example)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.tol is None:
            args.tol = default_tol()
        return args.func(args)
    except (InputError, SchemaError, KeyError, ValueError, ArithmeticError) as exc:
        # precondition and schema failures alike are input errors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
