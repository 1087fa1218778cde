"""Command line entry point.

``katzflat run PROBLEM.json`` validates a connection, computes its flat
frame and trivialization, runs the projector checks and prints a JSON
report.  ``katzflat gen`` writes a seeded corpus of gauge problems together
with their known frames.

Exit codes: 0 all checks pass, 1 some check failed, 2 malformed input or
unusable path, 3 connection not integrable, 4 internal inconsistency.
"""

import argparse
import json
import os
import random
import sys

from . import cartier, limits, oracle
from ._rational import rational_str
from .connection import Connection, NonIntegrableError, SeriesMatrix, curvature
from .connection import ModuleVector
from .parser import ParseError, parse_series
from .series import TruncatedSeries

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_NON_INTEGRABLE = 3
EXIT_INCONSISTENT = 4


class ProblemError(ValueError):
    """Malformed problem file; ``where`` locates the offending field."""

    def __init__(self, message, where=None, offset=None):
        self.where = where
        self.offset = offset
        text = message if where is None else f"{where}: {message}"
        super().__init__(text)


# -- problem files ----------------------------------------------------------


def _int_field(data, key, minimum):
    value = data.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ProblemError(f"must be an integer >= {minimum}", key)
    return value


def _parse(text, n, d, where):
    if not isinstance(text, str):
        raise ProblemError("polynomial entries must be strings", where)
    try:
        return parse_series(text, n, d)
    except ParseError as exc:
        raise ProblemError(str(exc), where, exc.offset) from None


def load_problem(data):
    """Turn decoded JSON into ``(coeffs, vectors, tower)``.

    ``coeffs`` is a list of SeriesMatrix (not yet checked for integrability)
    and ``vectors`` a dict of named ModuleVector.
    """
    if not isinstance(data, dict):
        raise ProblemError("problem must be a JSON object")
    n = _int_field(data, "n_vars", 1)
    r = _int_field(data, "rank", 1)
    d = _int_field(data, "trunc_order", 1)
    mats = data.get("matrices")
    if not isinstance(mats, list) or len(mats) != n:
        raise ProblemError(f"expected a list of {n} matrices", "matrices")
    coeffs = []
    for a, mat in enumerate(mats, start=1):
        if not isinstance(mat, list) or len(mat) != r:
            raise ProblemError(f"expected {r} rows", f"matrices[{a}]")
        rows = []
        for i, row in enumerate(mat):
            if not isinstance(row, list) or len(row) != r:
                raise ProblemError(f"expected {r} entries", f"matrices[{a}][{i}]")
            rows.append([_parse(t, n, d, f"matrices[{a}][{i}][{j}]") for j, t in enumerate(row)])
        coeffs.append(SeriesMatrix(rows))
    vectors = {}
    raw_vectors = data.get("vectors", {}) or {}
    if not isinstance(raw_vectors, dict):
        raise ProblemError("must be an object of name -> list of polynomials", "vectors")
    for name, entries in raw_vectors.items():
        if not isinstance(entries, list) or len(entries) != r:
            raise ProblemError(f"expected {r} entries", f"vectors[{name}]")
        vectors[name] = ModuleVector(
            _parse(t, n, d, f"vectors[{name}][{k}]") for k, t in enumerate(entries)
        )
    tower = data.get("tower", False)
    if not isinstance(tower, bool):
        raise ProblemError("must be true or false", "tower")
    return coeffs, vectors, tower


def problem_to_json(C, vectors=None, tower=False):
    return {
        "n_vars": C.n_vars,
        "rank": C.rank,
        "trunc_order": C.trunc_order,
        "matrices": [a.format() for a in C.coeffs],
        "vectors": {name: v.format() for name, v in (vectors or {}).items()},
        "tower": tower,
    }


# -- run --------------------------------------------------------------------


def _integrability_failure(coeffs):
    n = len(coeffs)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            hit = curvature(coeffs, i, j).first_nonzero()
            if hit is not None:
                return NonIntegrableError(i, j, *hit)
    return None


def _certificate_json(name, cert):
    return {
        "vector": name,
        "level": cert.level,
        "multi_index": list(cert.multi_index),
        "witness_values": [rational_str(v) for v in cert.witness_values],
        "nonzero_position": cert.nonzero_position,
        "witness_vector": [rational_str(v) for v in cert.witness_vector],
    }


def _scalar_probe(C):
    # f(0) = 2 and every variable present, so both sides of the rule are nontrivial
    f = TruncatedSeries.constant(2, C.n_vars, C.trunc_order)
    for i in range(1, C.n_vars + 1):
        f = f + TruncatedSeries.variable(i, C.n_vars, C.trunc_order)
    return f


def run_checks(C, vectors, tower=False, certify=()):
    """All checks for a validated connection; returns the report body."""
    frame = cartier.flat_basis(C)
    G = frame.matrix()
    d = C.trunc_order
    probes = {f"e{k + 1}": C.basis_vector(k) for k in range(C.rank)}
    probes.update(vectors)
    f = _scalar_probe(C)

    checks = {}
    checks["oracle_equivalence"] = frame == oracle.solve_flat(C)
    checks["trivialization"] = all(
        (G.partial(i) + C.matrix(i) @ G).truncate(d - 1).is_zero()
        for i in range(1, C.n_vars + 1)
    ) and G.eval_at_zero() == [[int(i == j) for j in range(C.rank)] for i in range(C.rank)]
    checks["idempotence"] = all(cartier.idempotence_check(C, m) for m in probes.values())
    checks["scalar_rule"] = all(
        cartier.project_scalar_rule_check(C, f, m) for m in probes.values()
    )
    ideal = [m * TruncatedSeries.variable(i, C.n_vars, d)
             for m in probes.values() for i in range(1, C.n_vars + 1)]
    checks["kernel"] = all(cartier.kernel_check(C, m) for m in list(probes.values()) + ideal)
    checks["image_flat"] = all(cartier.is_flat(C, cartier.project(C, m)) for m in probes.values())
    checks["nakayama_round_trip"] = all(
        cartier.recombine(frame, cartier.nakayama_expand(frame, m)).equal_at(m, d)
        for m in probes.values()
    )
    if tower:
        checks["tower_compatibility"] = C.n_vars < 2 or all(
            limits.tower_compatibility(C, m) for m in probes.values()
        )

    certificates = []
    for name in certify:
        m = vectors[name]
        coeffs = cartier.nakayama_expand(frame, m)
        try:
            cert = cartier.independence_certificate(C, frame.sections, coeffs)
        except ValueError as exc:
            certificates.append({"vector": name, "error": str(exc)})
            checks[f"certificate:{name}"] = False
            continue
        certificates.append(_certificate_json(name, cert))
        checks[f"certificate:{name}"] = True

    return {
        "flat_frame": [b.format() for b in frame.sections],
        "trivialization": G.format(),
        "checks": checks,
        "certificates": certificates,
    }


def run_problem(data, tower=None, certify=()):
    """Report dict and exit code for decoded problem JSON."""
    report = {"integrability": None, "flat_frame": None, "trivialization": None,
              "checks": {}, "certificates": []}
    try:
        coeffs, vectors, file_tower = load_problem(data)
        missing = [name for name in certify if name not in vectors]
        if missing:
            raise ProblemError(f"unknown vector(s) {', '.join(missing)}", "--certify")
    except ProblemError as exc:
        report["error"] = {"kind": "parse", "message": str(exc), "where": exc.where,
                           "offset": exc.offset}
        return report, EXIT_INPUT
    except (ValueError, IndexError) as exc:
        report["error"] = {"kind": "parse", "message": str(exc), "where": None, "offset": None}
        return report, EXIT_INPUT

    failure = _integrability_failure(coeffs)
    if failure is not None:
        report["integrability"] = {
            "status": "fail",
            "i": failure.i,
            "j": failure.j,
            "row": failure.row,
            "col": failure.col,
            "entry": failure.entry.format(),
        }
        return report, EXIT_NON_INTEGRABLE
    report["integrability"] = {"status": "pass"}
    C = Connection(coeffs, check=False)

    try:
        report.update(run_checks(C, vectors, tower if tower is not None else file_tower, certify))
    except cartier.InconsistencyError as exc:
        report["error"] = {"kind": "inconsistency", "message": str(exc)}
        return report, EXIT_INCONSISTENT
    code = EXIT_OK if all(report["checks"].values()) else EXIT_CHECK_FAILED
    return report, code


def cmd_run(args):
    try:
        with open(args.problem, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read {args.problem}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except json.JSONDecodeError as exc:
        report = {"error": {"kind": "parse", "message": exc.msg, "where": "json",
                            "offset": exc.pos}}
        _emit(report, args.out)
        print(f"error: {args.problem}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    certify = [n for chunk in args.certify for n in chunk.split(",") if n]
    report, code = run_problem(data, tower=True if args.tower else None, certify=certify)
    report["problem"] = args.problem
    report["exit_code"] = code
    _emit(report, args.out)
    if code == EXIT_INPUT:
        print(f"error: {report['error']['message']}", file=sys.stderr)
    elif code == EXIT_NON_INTEGRABLE:
        w = report["integrability"]
        print(f"error: not integrable, curvature ({w['i']},{w['j']}) entry "
              f"[{w['row']}][{w['col']}] = {w['entry']}", file=sys.stderr)
    elif code == EXIT_INCONSISTENT:
        print(f"error: internal inconsistency: {report['error']['message']}", file=sys.stderr)
    return code


def _emit(report, out):
    text = json.dumps(report, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- gen --------------------------------------------------------------------


def generate_corpus(n, r, d, seed, count, directory, coefficient_bound=5):
    """Write ``problem_XXX.json`` / ``expected_XXX.json`` pairs; returns the paths."""
    os.makedirs(directory, exist_ok=True)
    seeds = random.Random(seed)
    written = []
    for k in range(count):
        sub_seed = seeds.getrandbits(32)
        prob = oracle.generate_problem(n, r, d, sub_seed, coefficient_bound)
        rng = random.Random(sub_seed)
        vectors = {"v": oracle.random_vector(prob.connection, rng, coefficient_bound, 0.5)}
        ppath = os.path.join(directory, f"problem_{k:03d}.json")
        epath = os.path.join(directory, f"expected_{k:03d}.json")
        with open(ppath, "w", encoding="utf-8") as fh:
            json.dump(problem_to_json(prob.connection, vectors), fh, indent=2)
            fh.write("\n")
        with open(epath, "w", encoding="utf-8") as fh:
            json.dump({"seed": sub_seed, "known_frame": prob.known_frame.format()}, fh, indent=2)
            fh.write("\n")
        written.append((ppath, epath))
    return written


def cmd_gen(args):
    for name in ("nvars", "rank", "degree", "count"):
        if getattr(args, name) < 1:
            print(f"error: --{name} must be positive", file=sys.stderr)
            return EXIT_INPUT
    try:
        written = generate_corpus(args.nvars, args.rank, args.degree, args.seed, args.count,
                                  args.dir, args.bound)
    except OSError as exc:
        print(f"error: cannot write corpus to {args.dir}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for ppath, _ in written:
        print(ppath)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="katzflat", description="Flat sections of integrable connections, computed exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="validate a problem file and report flat sections")
    run.add_argument("problem")
    run.add_argument("--tower", action="store_true", help="check compatibility down to level 1")
    run.add_argument("--certify", action="append", default=[], metavar="NAMES",
                     help="comma-separated vector names to certify nonzero")
    run.add_argument("--out", help="write the report here instead of stdout")
    run.set_defaults(func=cmd_run)

    gen = sub.add_parser("gen", help="write a seeded corpus of gauge problems")
    gen.add_argument("--nvars", type=int, required=True)
    gen.add_argument("--rank", type=int, required=True)
    gen.add_argument("--degree", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--bound", type=int, default=5, help="coefficient bound (default 5)")
    gen.add_argument("--dir", required=True)
    gen.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
