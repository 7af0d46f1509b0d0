"""Command-line front end.

Subcommands:
    norm       compute one of the six norms of a matrix file
    factorize  construct a norm-optimal factorization
    verify     uniqueness / duality / cross-identity checks
    selftest   run the built-in golden fixtures

Exit codes: 0 success, 2 parse error, 3 solver failure, 4 invalid flag
combination, 5 precondition violation (e.g. non-self-adjoint input),
6 verification failure.  Reports are JSON (schema 1) or plain text and are
deterministic for a fixed input, flags and seed (up to the wall_time
field).  The seed falls back to the SCHURFACT_SEED environment variable.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import duality, elementary, factorizations, io, norms
from .cutting import CutIterationCap
from .elementary import GridTooLarge
from .factorizations import NotSelfAdjoint
from .feasibility import BracketInvalid
from .norms import SolverFailure

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SOLVER = 3
EXIT_FLAGS = 4
EXIT_PRECONDITION = 5
EXIT_VERIFY = 6

DEFAULT_TOLS = {"tol_feas": 1e-8, "tol_bisect": 1e-7, "tol_factor": 1e-5}


class FlagError(ValueError):
    pass


def _seed_from(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SCHURFACT_SEED")
    return int(env) if env else 0


def _digest(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _jsonify(obj):
    if isinstance(obj, np.ndarray):
        if obj.ndim == 1:
            obj = obj.reshape(1, -1)
        return io.matrix_to_json_dict(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(_jsonify(report), sort_keys=True))
        return
    def walk(d, indent=0):
        for k, v in d.items():
            if isinstance(v, dict):
                print(" " * indent + f"{k}:")
                walk(v, indent + 2)
            elif isinstance(v, np.ndarray):
                print(" " * indent + f"{k}:")
                for row in np.atleast_2d(v):
                    print(" " * (indent + 2)
                          + "  ".join(io.format_complex(complex(z)) for z in row))
            else:
                print(" " * indent + f"{k}: {v}")
    walk(report)


def _base_report(args, command: str) -> dict:
    return {
        "schema": 1,
        "command": command,
        "input": _digest(args.file),
        "parameters": {**DEFAULT_TOLS, "seed": _seed_from(args)},
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_norm(args) -> int:
    X = io.read_matrix(args.file)
    report = _base_report(args, "norm")
    if args.tol is not None:
        report["parameters"]["tol_bisect"] = args.tol
    kind = args.kind
    kwargs = {}
    if kind in ("S", "cbB", "T") and args.tol is not None:
        kwargs["tol_bisect"] = args.tol
    if kind in ("F", "B"):
        if args.heuristic:
            kwargs["certified"] = False
            kwargs["seed"] = _seed_from(args)
        else:
            try:
                rep = norms.norm(X, kind, certified=True, **kwargs)
            except GridTooLarge as exc:
                raise FlagError(
                    f"--kind {kind} is not certifiable at this size; pass --heuristic"
                ) from exc
            else:
                report["result"] = _norm_result(rep)
                report["wall_time"] = time.time()
                _emit(report, args.format)
                return EXIT_OK
    rep = norms.norm(X, kind, **kwargs)
    report["result"] = _norm_result(rep)
    report["wall_time"] = time.time()
    _emit(report, args.format)
    return EXIT_OK


def _norm_result(rep: norms.NormReport) -> dict:
    residuals = {
        k: v for k, v in rep.residuals.items()
        if isinstance(v, (int, float, bool, np.floating, np.integer, np.bool_))
    }
    return {"kind": rep.kind, "value": rep.value, "method": rep.method,
            "residuals": residuals}


_FACTORIZE = {
    "cb-op": lambda X: _record(factorizations.cb_operator_factorization(X),
                               ("A", "xi"), value_field="value"),
    "cb-bilinear": lambda X: _record(factorizations.cb_bilinear_factorization(X),
                                     ("eta", "B", "xi"), value_field="value"),
    "elementary-schur": lambda X: _record(factorizations.elementary_schur(X),
                                          ("L", "R"), value_field="value"),
    "schur": lambda X: _record(factorizations.schur_factorization(X),
                               ("F", "W", "G"), value_field="s"),
    "selfadjoint-schur": lambda X: _record(factorizations.selfadjoint_schur(X),
                                           ("G", "S"), value_field="s"),
    "bilinear-schur": lambda X: _record(factorizations.bilinear_schur_factorization(X),
                                        ("T", "W", "G"), value_field="value"),
}


def _record(fact, names, value_field):
    out = {"factors": {name: getattr(fact, name) for name in names},
           "value": float(getattr(fact, value_field))}
    X = fact.reconstruct()
    out["reconstruction"] = X
    return fact, out


def cmd_factorize(args) -> int:
    X = io.read_matrix(args.file)
    report = _base_report(args, "factorize")
    if args.kind == "fcg":
        scale = norms.schur_norm(X).value if np.any(X) else 0.0
        if scale == 0.0:
            raise FlagError("fcg factorization needs a nonzero matrix")
        F, C, G = factorizations.normalized_fcg(X / scale)
        out = {"factors": {"F": F, "C": C, "G": G}, "value": 1.0,
               "scale": scale, "reconstruction": scale * F @ C @ G}
        fact = None
    else:
        fact, out = _FACTORIZE[args.kind](X)
    recon = out.pop("reconstruction")
    scale = max(float(np.abs(X).max(initial=0.0)), 1e-300)
    out["residuals"] = {
        "reconstruction_error": float(np.abs(recon - X).max()) / scale
    }
    report["result"] = out
    report["wall_time"] = time.time()
    _emit(report, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    X = io.read_matrix(args.file)
    report = _base_report(args, "verify")
    seed = _seed_from(args)
    checks = []
    ok = True
    if args.kind == "uniqueness":
        v = factorizations.verify_uniqueness(
            X, args.target, restarts=args.restarts, seed=seed
        )
        passed = v.verdict in ("consistent", "precondition-fails")
        note = ("precondition-fails, non-uniqueness allowed"
                if v.verdict == "precondition-fails" else v.verdict)
        checks.append({"check": f"uniqueness[{args.target}]", "passed": passed,
                       "verdict": note, "max_deviation": v.max_deviation})
        ok = ok and passed
    elif args.kind == "duality":
        for mode in ("cbB_vs_S", "cbF_vs_T"):
            w = duality.find_witness(X, mode, seed=seed)
            target_kind, ball = duality.DUALITY_PAIRS[mode]
            bound = norms.norm(X, target_kind).value * w.dual_norm_bound
            passed = w.pairing <= bound + 1e-6 * max(bound, 1.0)
            checks.append({"check": f"polar[{mode}]", "passed": passed,
                           "pairing": w.pairing, "bound": bound,
                           "witness_gap": w.certified_gap})
            ok = ok and passed
    elif args.kind == "identities":
        cbf = norms.cbf_norm(X).value
        cbb_gram = norms.cbb_norm(X.conj().T @ X).value
        gap = abs(cbf**2 - cbb_gram) / max(cbb_gram, 1e-300)
        passed = gap <= 1e-6
        checks.append({"check": "cbF^2 == cbB(X*X)", "passed": passed,
                       "relative_gap": gap})
        ok = ok and passed
    if args.inject_failure:
        checks.append({"check": "injected-failure", "passed": False})
        ok = False
    report["result"] = {"checks": checks, "all_passed": ok}
    report["wall_time"] = time.time()
    _emit(report, args.format)
    return EXIT_OK if ok else EXIT_VERIFY


def _dft(n: int) -> np.ndarray:
    w = np.exp(2j * np.pi / n)
    grid = np.arange(n)
    return w ** np.outer(grid, grid) / np.sqrt(n)


def cmd_selftest(args) -> int:
    seed = args.seed if args.seed is not None else int(os.environ.get("SCHURFACT_SEED") or 0)
    sizes = args.sizes or [2, 3]
    checks = []

    def check(name, got, want, tol=1e-6):
        passed = abs(got - want) <= tol * max(abs(want), 1.0)
        checks.append({"check": name, "passed": passed,
                       "got": float(got), "want": float(want)})

    for n in sizes:
        U = _dft(n)
        check(f"dft{n}.S", norms.schur_norm(U).value, 1.0)
        check(f"dft{n}.cbB", norms.cbb_norm(U).value, float(n))
        check(f"dft{n}.cbF", norms.cbf_norm(U).value, np.sqrt(n))
        check(f"dft{n}.T", norms.t_norm(U).value, np.sqrt(n))
        sf = factorizations.schur_factorization(U)
        check(f"dft{n}.schur.recon",
              float(np.abs(sf.reconstruct() - U).max()), 0.0, tol=1e-6)
    D = np.diag([1.0, 0.25j])
    es = factorizations.elementary_schur(D)
    check("diag(1,i/4).S", es.value, 1.0)
    v = factorizations.verify_uniqueness(D, "schur", restarts=3, seed=seed)
    checks.append({"check": "diag(1,i/4).schur-precondition",
                   "passed": v.precondition_holds is False})
    if args.inject_failure:
        checks.append({"check": "injected-failure", "passed": False})
    ok = all(c["passed"] for c in checks)
    report = {
        "schema": 1,
        "command": "selftest",
        "input": None,
        "parameters": {**DEFAULT_TOLS, "seed": seed, "sizes": sizes},
        "result": {"checks": checks, "all_passed": ok},
        "wall_time": time.time(),
    }
    _emit(report, args.format)
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cbnorms",
                                description="matrix factorization norms")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, with_file=True):
        if with_file:
            sp.add_argument("file", help="matrix file (.json or .csv)")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--format", choices=("json", "text"), default="json")

    sp = sub.add_parser("norm", help="compute a norm")
    common(sp)
    sp.add_argument("--kind", required=True,
                    choices=("F", "cbF", "B", "cbB", "S", "T"))
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--heuristic", action="store_true",
                    help="allow uncertified torus search for F/B")
    sp.set_defaults(fn=cmd_norm)

    sp = sub.add_parser("factorize", help="construct an optimal factorization")
    common(sp)
    sp.add_argument("--kind", required=True,
                    choices=tuple(_FACTORIZE) + ("fcg",))
    sp.set_defaults(fn=cmd_factorize)

    sp = sub.add_parser("verify", help="uniqueness/duality/identity checks")
    common(sp)
    sp.add_argument("--kind", required=True,
                    choices=("uniqueness", "duality", "identities"))
    sp.add_argument("--target", default="cbB",
                    choices=("cbF", "cbB", "bilinearSchur", "schur"),
                    help="factorization kind for uniqueness checks")
    sp.add_argument("--restarts", type=int, default=5)
    sp.add_argument("--inject-failure", action="store_true",
                    help=argparse.SUPPRESS)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("selftest", help="run built-in golden fixtures")
    common(sp, with_file=False)
    sp.add_argument("--sizes", type=int, nargs="*", default=None)
    sp.add_argument("--inject-failure", action="store_true",
                    help=argparse.SUPPRESS)
    sp.set_defaults(fn=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (io.MatrixParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CutIterationCap, SolverFailure, BracketInvalid) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except FlagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except NotSelfAdjoint as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
