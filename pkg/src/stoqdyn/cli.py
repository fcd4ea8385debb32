"""Command-line front end.

Exit codes: 0 on success, 1 on input errors (unreadable or malformed files,
caps exceeded), 2 when ``reproduce`` finds a result that differs from the
registered expectation.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time

import numpy as np

from . import fixtures
from .dynamics import (
    NoMatrixForm,
    ProbabilityDynamics,
    decomposing_map_matrix,
    is_decomposable,
    is_divisible,
    is_linear,
    is_time_homogeneous_dynamics,
)
from .errors import GridNotDifferenceClosed, InputError, StoqdynError
from .implementation import (
    family_implements,
    is_transition_constant,
    markov_implementation,
    markov_product_family,
    non_markov_family,
    non_markov_implementation,
    solution,
    transition_constant_family,
)
from .io import (
    dump_ancilla,
    dump_family,
    dump_measure,
    dumps,
    encode_matrix,
    encode_vector,
    jsonable,
    load_dynamics,
    load_family,
    load_measure,
    read_json,
    schema_text,
)
from .measure import is_markovian, is_time_homogeneous, marginal_vector
from .quantum import (
    UnitaryFamily,
    interference_discrepancy,
    quantum_decomposition_check,
    random_state,
    random_unitary_family,
    rotation,
)
from .scalar import parse_scalar
from .simplex import DEFAULT_GRID_DENOMINATOR
from .statistical import realize_family_as_ancilla, realize_linear_as_stochastic, realize_stochastic_as_ancilla

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2
QUANTUM_DEMOS = ("rotation", "interference", "random-decomposition")


def seed_from_env(default: int = 0) -> int:
    raw = os.environ.get("STOQDYN_SEED")
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"STOQDYN_SEED must be an integer, got {raw!r}") from None


def _parse_vector(text: str) -> tuple:
    try:
        return tuple(parse_scalar(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"bad probability vector {text!r}: {exc}") from None


def _pair_key(k) -> str:
    return f"{k[0]}->{k[1]}"


# subcommands -------------------------------------------------------------------

def cmd_analyze(args) -> tuple:
    dyn = load_dynamics(read_json(args.input))
    G = args.grid_denominator
    lin = is_linear(dyn, G)
    dec = is_decomposable(dyn, G)
    report = {
        "kind": "dynamics-analysis",
        "matrix_layout": "columns",
        "grid": list(dyn.grid),
        "n": dyn.n,
        "linear": {"holds": lin.holds, "witness": lin.witness, "checked_on_grid": lin.on_grid},
        "decomposable": {"holds": dec.holds, "witness": dec.witness, "checked_on_grid": dec.on_grid},
    }
    if dec.holds and dyn.is_matrix_family:
        maps = {}
        for tp, t in dec.data:
            m = decomposing_map_matrix(dyn.repr, t, tp)
            if isinstance(m, NoMatrixForm):
                maps[_pair_key((tp, t))] = {"range_basis": m.range_basis, "images": m.images}
            else:
                maps[_pair_key((tp, t))] = {"matrix": encode_matrix(m)}
        report["decomposable"]["maps"] = maps
    div = is_divisible(dyn)
    report["divisible"] = {
        "holds": div.divisible if lin.holds else None,
        "pairs": {
            _pair_key(k): {
                "status": p.status,
                "factor": encode_matrix(p.factor) if p.factor is not None else None,
                "certificate": p.certificate,
            }
            for k, p in div.pairs.items()
        },
    }
    try:
        th = is_time_homogeneous_dynamics(dyn, G)
        report["time_homogeneous"] = {"holds": th.holds, "witness": th.witness}
    except GridNotDifferenceClosed as exc:
        report["time_homogeneous"] = {"holds": None, "reason": str(exc)}
    return report, EXIT_OK


def _measure_report(mu) -> dict:
    mk = is_markovian(mu)
    out = {
        "grid": list(mu.grid),
        "n": mu.n,
        "marginals": {str(t): encode_vector(marginal_vector(mu, t)) for t in mu.grid},
        "markovian": {"holds": mk.holds, "witness": mk.witness},
    }
    if mk.holds:
        try:
            th = is_time_homogeneous(mu)
            out["time_homogeneous"] = {"holds": th.holds, "witness": th.witness}
        except GridNotDifferenceClosed as exc:
            out["time_homogeneous"] = {"holds": None, "reason": str(exc)}
    return out


def cmd_check(args) -> tuple:
    obj = read_json(args.input)
    if isinstance(obj, dict) and "members" in obj:
        fam = load_family(obj)
        tc = is_transition_constant(fam)
        report = {
            "kind": "process-check",
            "object": "family",
            "matrix_layout": "columns",
            "members": len(fam.members),
            "transition_constant": {"holds": tc.holds, "witness": tc.witness},
            "all_markovian": all(is_markovian(mu).holds for mu in fam.members.values()),
        }
        if tc.holds and not isinstance(tc.data, tuple):
            report["transition_constant"]["matrices"] = [encode_matrix(m) for m in tc.data.matrices]
        if args.dynamics:
            report["implements"] = family_implements(fam, load_dynamics(read_json(args.dynamics)))
        return report, EXIT_OK
    mu = load_measure(obj)
    report = {"kind": "process-check", "object": "measure", **_measure_report(mu)}
    if args.dynamics:
        dyn = load_dynamics(read_json(args.dynamics))
        p0 = marginal_vector(mu, 0)
        report["implements"] = [marginal_vector(mu, t) for t in mu.grid] == list(solution(dyn, p0))
    return report, EXIT_OK


def cmd_implement(args) -> tuple:
    dyn = load_dynamics(read_json(args.input))
    G = args.grid_denominator
    if args.p0 is not None:
        traj = solution(dyn, _parse_vector(args.p0))
        if args.transition_constant:
            fam = transition_constant_family(_require_matrix_family(dyn), G)
            mu = fam.member(traj[0])
        elif args.markov:
            mu = markov_implementation(traj, dyn.grid)
        else:
            mu = non_markov_implementation(traj, dyn.grid)
        mk = is_markovian(mu)
        return {"kind": "implement", "measure": dump_measure(mu),
                "markovian": {"holds": mk.holds, "witness": mk.witness}}, EXIT_OK
    if args.transition_constant:
        fam = transition_constant_family(_require_matrix_family(dyn), G)
    elif args.markov:
        fam = markov_product_family(dyn, G)
    else:
        fam = non_markov_family(dyn, G)
    return {"kind": "implement", "family": dump_family(fam),
            "implements": family_implements(fam, dyn)}, EXIT_OK


def _require_matrix_family(dyn: ProbabilityDynamics):
    if dyn.is_matrix_family:
        return dyn.repr
    lin = is_linear(dyn)
    if not lin.holds:
        raise InputError("the transition-constant construction needs a linear dynamics")
    return lin.data


def cmd_realize(args) -> tuple:
    obj = read_json(args.input)
    if isinstance(obj, dict) and "members" in obj:
        if args.stochastic:
            raise InputError("--stochastic expects a dynamics file")
        fam = load_family(obj)
        SA, initials = realize_family_as_ancilla(fam)
        return {"kind": "realize-ancilla", "ancilla": dump_ancilla(SA),
                "initials": [{"p0": encode_vector(p0), "joint": encode_vector(pi.entries)}
                             for p0, pi in initials.items()]}, EXIT_OK
    fam = _require_matrix_family(load_dynamics(obj))
    S = realize_linear_as_stochastic(fam)
    procs = [dump_measure(mu) for mu in S.processes]
    if args.stochastic:
        return {"kind": "realize-stochastic", "processes": procs}, EXIT_OK
    SA, lam = realize_stochastic_as_ancilla(S)
    return {"kind": "realize-ancilla", "processes": procs, "ancilla": dump_ancilla(SA, lam)}, EXIT_OK


def _demo_rotation() -> dict:
    U = fixtures.rotation_unitaries()
    rows = []
    for t in U.grid:
        for tp in U.grid:
            if tp > t:
                continue
            d = interference_discrepancy(U, t, tp)
            rows.append({
                "t": t, "t_prime": tp,
                "schur_relative": d.schur_relative,
                "decomposition": d.decomposition,
                "discrepancy": d.discrepancy,
                "cross_terms": d.cross_terms,
                "cross_terms_agree": d.agrees,
                "commutes": d.commutes,
            })
    return {"unitaries": {str(t): U.at(t) for t in U.grid}, "pairs": rows}


def _demo_interference() -> dict:
    from .quantum import born_trajectory, quantum_linearity_violation

    U = UnitaryFamily((0, 1), (np.eye(2, dtype=complex), rotation(math.pi / 4)))
    s = 1 / math.sqrt(2)
    psi, e1, e2 = np.array([s, s]), np.array([1.0, 0.0]), np.array([0.0, 1.0])
    recs = quantum_linearity_violation(U, 0.5, e1, e2, psi)
    return {
        "born_psi": born_trajectory(psi, U),
        "records": [{"t": r.t, "violation": r.violation, "difference": r.difference,
                     "cross_terms": r.cross_terms, "agrees": r.agrees} for r in recs],
    }


def _demo_random(seed: int, draws: int = 100) -> dict:
    rng = np.random.default_rng(seed)
    ok = 0
    for _ in range(draws):
        d = int(rng.integers(2, 4))
        U = random_unitary_family(d, 3, rng)
        psi = random_state(d, rng)
        ok += all(quantum_decomposition_check(U, psi, t, tp) for t in U.grid for tp in U.grid if tp <= t)
    return {"seed": seed, "draws": draws, "passed": ok}


def cmd_quantum(args) -> tuple:
    if args.demo == "rotation":
        body = _demo_rotation()
    elif args.demo == "interference":
        body = _demo_interference()
    else:
        body = _demo_random(seed_from_env())
    return {"kind": "quantum-demo", "demo": args.demo, **body}, EXIT_OK


def cmd_reproduce(args) -> tuple:
    if args.all == (args.id is not None):
        raise InputError("give exactly one of a fixture id or --all")
    ids = sorted(fixtures.FIXTURES) if args.all else [args.id]
    reports = [fixtures.get(i).report() for i in ids]
    ok = all(r["ok"] for r in reports)
    return {"kind": "reproduce", "ok": ok, "fixtures": reports}, EXIT_OK if ok else EXIT_MISMATCH


# output ------------------------------------------------------------------------

def render_table(report: dict) -> str:
    if report.get("kind") == "reproduce":
        lines = []
        for r in report["fixtures"]:
            lines.append(f"{'PASS' if r['ok'] else 'FAIL'}  {r['id']:<24} {r['summary']}")
            for c in r["checks"]:
                if not c["ok"]:
                    lines.append(f"      mismatch: {c['name']}: expected {c['expected']}, got {c['actual']}")
        return "\n".join(lines)
    plain = jsonable(report)
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict) and v:
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        else:
            lines.append(f"{prefix:<40} {v}")

    walk("", plain)
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--table", action="store_true", help="human-readable rendering")
    common.add_argument("--no-timing", action="store_true", help="omit wall-clock timing from the report")

    p = argparse.ArgumentParser(prog="stoqdyn", description="Finite probability dynamics and stochastic process toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="linearity, decomposability, divisibility of a dynamics file")
    a.add_argument("input")
    a.add_argument("--grid-denominator", type=int, default=DEFAULT_GRID_DENOMINATOR)
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("check", parents=[common], help="Markov and transition-constancy checks on a measure or family")
    c.add_argument("input")
    c.add_argument("--dynamics", help="also test the implementation relation against this dynamics file")
    c.set_defaults(func=cmd_check)

    im = sub.add_parser("implement", parents=[common], help="build an implementing process or family")
    g = im.add_mutually_exclusive_group(required=True)
    g.add_argument("--markov", action="store_true")
    g.add_argument("--non-markov", action="store_true")
    g.add_argument("--transition-constant", action="store_true")
    im.add_argument("input")
    im.add_argument("--p0", help="comma-separated initial vector, e.g. 1/2,1/2; omit to build a whole family")
    im.add_argument("--grid-denominator", type=int, default=DEFAULT_GRID_DENOMINATOR)
    im.set_defaults(func=cmd_implement)

    r = sub.add_parser("realize", parents=[common], help="system-ancilla or stochastic realization")
    g = r.add_mutually_exclusive_group(required=True)
    g.add_argument("--ancilla", action="store_true")
    g.add_argument("--stochastic", action="store_true")
    r.add_argument("input")
    r.set_defaults(func=cmd_realize)

    q = sub.add_parser("quantum", parents=[common], help="quantum probability demos")
    q.add_argument("--demo", required=True, choices=QUANTUM_DEMOS)
    q.set_defaults(func=cmd_quantum)

    rp = sub.add_parser("reproduce", parents=[common], help="run registered worked examples")
    rp.add_argument("id", nargs="?", help="one of: " + ", ".join(sorted(fixtures.FIXTURES)))
    rp.add_argument("--all", action="store_true")
    rp.set_defaults(func=cmd_reproduce)

    s = sub.add_parser("schema", help="print the JSON schema of a file format")
    s.add_argument("name")
    s.set_defaults(func=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors are input errors; 2 is reserved for reproduce mismatches
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        if args.command == "schema":
            sys.stdout.write(schema_text(args.name) + "\n")
            return EXIT_OK
        start = time.perf_counter()
        report, code = args.func(args)
        if not args.no_timing:
            report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
        text = render_table(report) if args.table else dumps(report)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        else:
            sys.stdout.write(text + "\n")
        return code
    except StoqdynError as exc:
        print(f"stoqdyn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"stoqdyn: cannot write report: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
