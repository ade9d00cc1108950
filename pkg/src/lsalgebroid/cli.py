"""Command-line front end.

Exit codes: 0 every check passed, 1 some check failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .algebroid import LIE, check_left_symmetric, check_lie_algebroid
from .bialgebroid import BialgebroidCandidate, check_bialgebroid, s_bracket
from .calculus import identity_suite
from .corpus import random_solution_H, search_point_algebras
from .errors import AlgebroidError, InvalidStructure
from .hessian import FlatConnection, hessian_metric, hessian_pipeline, parse_potential
from .presymplectic import (
    PreSymplecticStructure,
    check_dirac,
    check_manin,
    check_presymplectic,
    mc_check,
)
from .report import Report
from .sampling import rng_for
from .scalar import DEFAULT_MAX_DEGREE, Base
from .serialize import (
    SCHEMA_VERSION,
    algebroid_from_json,
    algebroid_to_json,
    christoffel_from_json,
    dumps,
    presymplectic_from_json,
    presymplectic_to_json,
    read_json,
    subbundle_from_json,
    symmetric_from_json,
    symmetric_to_json,
)

MAX_SEARCH_DIM = 4


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    timings: bool = False

    def add_input(self, label, path):
        data = Path(path).read_bytes() if Path(path).is_file() else b""
        self.inputs.append({"name": label, "path": str(path), "sha256": hashlib.sha256(data).hexdigest()})

    def run(self, fn, *args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        self.checks.append((report, (time.perf_counter() - start) * 1000.0))
        return report

    @property
    def passed(self):
        return all(r.passed for r, _ in self.checks)

    def to_dict(self):
        checks = []
        for report, ms in self.checks:
            d = report.to_dict()
            if self.timings:
                d["elapsed_ms"] = round(ms, 3)
            checks.append(d)
        doc = {
            "$schema_version": SCHEMA_VERSION,
            "tool": "lsalgebroid",
            "version": __version__,
            "command": self.command,
            "inputs": self.inputs,
            "parameters": self.parameters,
            "checks": checks,
            "passed": self.passed,
        }
        doc.update(self.extra)
        return doc

    def to_text(self):
        lines = [f"lsalgebroid {__version__} {self.command}"]
        for item in self.inputs:
            lines.append(f"  input {item['name']}: {item['path']} sha256={item['sha256'][:16]}")
        for report, ms in self.checks:
            lines.extend(report.lines())
            if self.timings:
                lines.append(f"  ({ms:.1f} ms)")
        for key, value in self.extra.items():
            if key == "catalog":
                lines.append(f"catalog: {len(value)} instance(s)")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


# -- loading ----------------------------------------------------------------------


def _load_algebroid(run, label, path, args):
    run.add_input(label, path)
    return algebroid_from_json(read_json(path), args.max_degree)


def _load_pair(run, args):
    A = _load_algebroid(run, "A", args.A, args)
    Astar = _load_algebroid(run, "Astar", args.Astar, args)
    if A.dual:
        raise UsageError("the first structure must live on A (\"dual\": false)")
    return BialgebroidCandidate(A, Astar.replace(dual=True))


def _load_presymplectic(run, path, args):
    run.add_input("E", path)
    return presymplectic_from_json(read_json(path), where=Path(path).parent, max_degree=args.max_degree)


def _load_subbundle(run, label, path, E):
    run.add_input(label, path)
    return subbundle_from_json(read_json(path), E.base, E.size)


def _checked(fn, *args, **kwargs):
    """Turn precondition failures that carry a report into failed checks."""
    def wrapped():
        try:
            return fn(*args, **kwargs)
        except InvalidStructure as exc:
            if exc.report is None:
                raise
            return exc.report
    return wrapped


# -- commands ---------------------------------------------------------------------


def cmd_check_lsa(run, args):
    alg = _load_algebroid(run, "structure", args.file, args)
    if alg.kind == LIE:
        run.run(check_lie_algebroid, alg)
        return
    if run.run(check_left_symmetric, alg):
        run.run(identity_suite, alg, trials=args.trials, seed=args.seed)


def cmd_identities(run, args):
    alg = _load_algebroid(run, "structure", args.file, args)
    if alg.kind == LIE:
        raise UsageError("the identity suite needs a left-symmetric structure")
    run.run(identity_suite, alg, trials=args.trials, seed=args.seed)


def cmd_check_bialgebroid(run, args):
    cand = _load_pair(run, args)
    run.run(_checked(check_bialgebroid, cand, trials=args.trials, seed=args.seed))


def cmd_double(run, args):
    cand = _load_pair(run, args)
    bi = run.run(_checked(check_bialgebroid, cand, trials=args.trials, seed=args.seed))
    if not bi:
        return
    E = PreSymplecticStructure.from_bialgebroid(cand)
    run.run(check_presymplectic, E, trials=args.trials, seed=args.seed)
    if args.output:
        Path(args.output).write_text(dumps(presymplectic_to_json(E)), encoding="utf-8")
        run.extra["output"] = str(args.output)


def cmd_dirac(run, args):
    E = _load_presymplectic(run, args.E, args)
    F = _load_subbundle(run, "F", args.F, E)
    run.run(check_dirac, E, F)


def cmd_manin(run, args):
    E = _load_presymplectic(run, args.E, args)
    L1 = _load_subbundle(run, "L1", args.L1, E)
    L2 = _load_subbundle(run, "L2", args.L2, E)
    run.run(check_manin, E, L1, L2)


def cmd_mc(run, args):
    cand = _load_pair(run, args)
    run.add_input("H", args.H)
    H = symmetric_from_json(read_json(args.H), cand.base)
    run.run(mc_check, cand, H)


def cmd_hessian(run, args):
    variables = [v.strip() for v in args.vars.split(",") if v.strip()]
    base, phi = parse_potential(args.potential, variables)
    base = Base(base.variables, (), args.max_degree)
    phi = phi.lift(base)
    run.parameters["potential"] = args.potential
    run.parameters["vars"] = variables
    if args.christoffel:
        run.add_input("christoffel", args.christoffel)
        conn = FlatConnection(base, christoffel_from_json(read_json(args.christoffel), base))
    else:
        conn = FlatConnection.coordinate(base)
    g = hessian_metric(phi, conn)
    run.extra["metric"] = [[str(a) for a in row] for row in g.matrix]
    run.run(_checked(hessian_pipeline, conn, g, trials=args.trials, seed=args.seed))


def cmd_search(run, args):
    if args.dim < 1:
        raise UsageError("--dim must be positive")
    if args.dim > MAX_SEARCH_DIM and not args.force:
        raise UsageError(f"--dim above {MAX_SEARCH_DIM} needs --force")
    run.parameters.update(dim=args.dim, density=args.density, count=args.count, mc=args.mc)
    found = search_point_algebras(args.dim, args.density, args.count, seed=args.seed)
    catalog = []
    checks = []
    rng = rng_for(args.seed, "search-mc")
    for n, alg in enumerate(found):
        entry = {"structure": algebroid_to_json(alg)}
        rep = check_left_symmetric(alg)
        checks.append(Report(f"instance {n + 1}", rep.passed, rep.witness, {}, rep.children))
        if args.mc:
            H = random_solution_H(alg, rng)
            if H is not None:
                ok = s_bracket(alg, H).is_zero
                checks.append(Report.ok(f"instance {n + 1} [[H,H]] = 0") if ok else
                              Report.fail(f"instance {n + 1} [[H,H]] = 0", ["H"], "nonzero"))
                entry["H"] = symmetric_to_json(H)
        catalog.append(entry)
    run.run(lambda: Report.combine("search", checks, found=len(found)))
    doc = {"$schema_version": SCHEMA_VERSION, "catalog": catalog}
    if args.output:
        Path(args.output).write_text(dumps(doc), encoding="utf-8")
        run.extra["output"] = str(args.output)
    run.extra["catalog"] = catalog


COMMANDS = {
    "check-lsa": cmd_check_lsa,
    "check-bialgebroid": cmd_check_bialgebroid,
    "double": cmd_double,
    "dirac": cmd_dirac,
    "manin": cmd_manin,
    "mc": cmd_mc,
    "hessian": cmd_hessian,
    "identities": cmd_identities,
    "search": cmd_search,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--trials", type=int, default=25, help="random samples per check (default 25)")
    common.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    common.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE,
                        help="bound on numerator/denominator degree")
    common.add_argument("--timings", action="store_true", help="include elapsed times (not byte-stable)")

    parser = argparse.ArgumentParser(prog="lsalgebroid", description="Exact checks for left-symmetric algebroids.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-lsa", parents=[common], help="left-symmetry and the identity suite")
    p.add_argument("file")
    p = sub.add_parser("identities", parents=[common], help="run the identity suite")
    p.add_argument("file")
    for name, text in (("check-bialgebroid", "compatibility of a pair (A, A*)"),
                       ("double", "build and check the double of a pair")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("A")
        p.add_argument("Astar")
        if name == "double":
            p.add_argument("-o", "--output", help="write the pre-symplectic structure here")
    p = sub.add_parser("dirac", parents=[common], help="Dirac structure check")
    p.add_argument("E")
    p.add_argument("F")
    p = sub.add_parser("manin", parents=[common], help="Manin triple check")
    p.add_argument("E")
    p.add_argument("L1")
    p.add_argument("L2")
    p = sub.add_parser("mc", parents=[common], help="Maurer-Cartan criterion for a symmetric H")
    p.add_argument("A")
    p.add_argument("Astar")
    p.add_argument("H")
    p = sub.add_parser("hessian", parents=[common], help="pseudo-Hessian pipeline for a potential")
    p.add_argument("--potential", required=True)
    p.add_argument("--vars", required=True, help="comma-separated base variables")
    p.add_argument("--christoffel", help="JSON file of Christoffel symbols")
    p = sub.add_parser("search", parents=[common], help="random search for constant structures")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--mc", action="store_true", help="also find H with [[H, H]] = 0")
    p.add_argument("--force", action="store_true", help=f"allow --dim above {MAX_SEARCH_DIM}")
    p.add_argument("-o", "--output", help="write the catalog here")
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    run = RunReport(args.command, parameters={"seed": args.seed, "trials": args.trials,
                                              "max_degree": args.max_degree}, timings=args.timings)
    try:
        COMMANDS[args.command](run, args)
    except (AlgebroidError, UsageError, ValueError) as exc:
        print(f"lsalgebroid {args.command}: {exc}", file=stderr)
        return 2
    stdout.write(dumps(run.to_dict()) if args.json else run.to_text())
    return 0 if run.passed else 1


if __name__ == "__main__":
    sys.exit(main())
