"""Command-line frontend: one JSON report per query on stdout.

Every report carries the command, its inputs, the outputs, a short list of
the facts it relies on and a pass/fail line for each embedded check.  The
exit code is 0 exactly when every check passed.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from . import matinv, moves, orbits
from .exponents import exponents, generalized_exponents_phi
from .rootsys import RootDatum, RootSystemError, build_from_string, height

log = logging.getLogger("nilgen")


@dataclass
class Report:
    command: str
    inputs: dict
    outputs: Any = None
    provenance: list[str] = field(default_factory=list)
    checks: list[tuple[str, bool]] = field(default_factory=list)

    def check(self, name: str, ok: bool) -> bool:
        self.checks.append((name, bool(ok)))
        return ok

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "provenance": self.provenance,
            "checks": [{"name": n, "passed": ok} for n, ok in self.checks],
            "passed": self.passed,
        }


def parse_indices(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(sorted(int(x) for x in text.split(",") if x.strip()))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad index list {text!r}") from exc


def parse_weight(text: str, datum: RootDatum) -> tuple[int, ...]:
    """`a3` is the simple root alpha_3; otherwise comma-separated simple-root coordinates."""
    t = text.strip().lower()
    if t.startswith("a") and t[1:].isdigit():
        i = int(t[1:])
        if i not in datum.simple_roots:
            raise argparse.ArgumentTypeError(f"no simple root {text} in {datum.rtype}")
        return datum.simple(i)
    try:
        w = tuple(int(x) for x in t.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad weight {text!r}") from exc
    if len(w) != datum.rank:
        raise argparse.ArgumentTypeError(f"weight {text!r} needs {datum.rank} coordinates")
    return w


def _theta(args, datum: RootDatum) -> tuple[int, ...]:
    if getattr(args, "theta_class", None):
        return orbits.theta_for_label(args.theta_class, datum)
    if not args.theta:
        raise argparse.ArgumentTypeError("give --theta or --theta-class")
    return parse_indices(args.theta)


# ---------------------------------------------------------------------------
# commands


def cmd_exponents(args) -> list[Report]:
    datum = build_from_string(args.type)
    rep = Report("exponents", {"type": str(datum.rtype)}, provenance=["exponents as dual partition of root heights"])
    ex = exponents(datum)
    phi = generalized_exponents_phi(datum)
    rep.outputs = {"exponents": ex, "phi_exponents": phi}
    short = datum.short_positive_roots()
    rep.check("sum of exponents = number of positive roots", sum(ex) == len(datum.positive_roots))
    rep.check("sum of phi-exponents = number of short positive roots", sum(phi) == len(short))
    rep.check("largest exponent = height of highest root", max(ex) == max(height(r) for r in datum.positive_roots))
    rep.check("largest phi-exponent = height of dominant short root", max(phi) == max(height(r) for r in short))
    return [rep]


def cmd_classify(args) -> list[Report]:
    datum = build_from_string(args.type)
    theta = _theta(args, datum)
    rep = Report("classify", {"type": str(datum.rtype), "theta": list(theta)})
    rep.provenance = ["family via phi-exponent against phi(h)/2", "Richardson dimension dim g - n - 2s"]
    orbit = orbits.richardson_orbit(theta, datum)
    fam = orbits.classify_family(theta, datum)
    dim_h = orbits.orbit_dimension_from_h(orbit.weighted_dynkin, datum)
    rep.outputs = {
        "orbit": orbit.label,
        "family": fam,
        "m_theta": orbits.m_theta(theta, datum),
        "weighted_dynkin": list(orbit.weighted_dynkin),
        "phi_h": orbits.phi_of_h(orbit, datum),
        "dimension": orbits.richardson_dimension(theta, datum),
        **orbit.to_json(),
    }
    rep.check("orbit dimension from h = dim g - n - 2s", dim_h == orbits.richardson_dimension(theta, datum))
    return [rep]


def cmd_generators(args) -> list[Report]:
    datum = build_from_string(args.type)
    theta = _theta(args, datum)
    rep = Report("generators", {"type": str(datum.rtype), "theta": list(theta)})
    rep.provenance = ["minimal generators: copies of V_phi plus the first n-s fundamental invariants"]
    spec = orbits.generator_spec(theta, datum)
    out = spec.to_json()
    out["invariants"] = [f"d{i}" for i in spec.invariant_indices]
    rep.outputs = out
    flags = orbits.vanishing_copies(theta, datum)
    rep.check("flagged copies count = s", sum(f.flagged for f in flags) == len(theta))
    rep.check("number of invariants = n - s", len(spec.invariant_degrees) == datum.rank - len(theta))
    return [rep]


def cmd_rewrite(args) -> list[Report]:
    datum = build_from_string(args.type)
    omega = parse_indices(args.omega)
    weight = parse_weight(args.weight, datum)
    state = moves.initial_state(omega, weight, args.initial_shift)
    rep = Report(
        "rewrite",
        {"type": str(datum.rtype), "omega": list(omega), "lambda": list(weight), "initial_shift": args.initial_shift},
        provenance=["moves A1, A2, A2Zero, A3 with lowest admissible index first"],
    )
    out = moves.normalize(state, datum)
    rep.outputs = {
        "status": out.status,
        "final": out.final.to_json(),
        "obstruction": out.obstruction,
        "trace": [m.to_json() for m in out.trace],
    }
    rep.check("rewrite reaches phi", out.normalized)
    if out.normalized:
        outcomes = moves.branch_outcomes(state, datum)
        rep.check("every move order gives the same shift and Omega-class", len(outcomes) == 1)
    return [rep]


def cmd_covariants(args) -> list[Report]:
    datum = build_from_string(args.type)
    rep = Report(
        "covariants",
        {"type": str(datum.rtype)},
        provenance=["reverse normalisation from -phi", "closed list of Omega without covariants"],
    )
    rows = []
    for omega in moves.admissible_omegas(datum):
        res = moves.covariant_exists(omega, datum)
        listed = moves.listed_exception(omega, datum)
        rows.append(
            {
                "omega": list(omega),
                "exists": res.exists,
                "degree": res.degree,
                "end_root": res.end_root,
                "obstruction": res.obstruction,
            }
        )
        rep.check(f"omega={list(omega)} matches listed exceptions", res.exists != listed)
    rep.outputs = rows
    return [rep]


def cmd_verify(args) -> list[Report]:
    datum = build_from_string(args.type)
    theta = _theta(args, datum)
    rep = Report(
        "verify",
        {"type": str(datum.rtype), "theta": list(theta), "seed": args.seed},
        provenance=["vanishing of V_phi copies at a Jordan representative", "Euler identity for the circle product"],
    )
    orbit = orbits.richardson_orbit(theta, datum)
    orbits.check_orbit(orbit, datum)
    spec = orbits.generator_spec(theta, datum)
    out: dict[str, Any] = {"orbit": orbit.label, "v_degrees": list(spec.v_degrees)}
    if datum.rtype.family not in "ABCD":
        flags = orbits.vanishing_copies(theta, datum)
        out["flagged"] = [f.degree for f in flags if f.flagged]
        rep.check("flagged copies count = s", len(out["flagged"]) == len(theta))
        rep.outputs = out
        return [rep]
    checks = matinv.verify_orbit(theta, datum)
    out["copies"] = [
        {"degree": c.degree, "realization": c.realization, "flagged": c.flagged, "vanishes": c.vanishes} for c in checks
    ]
    for c in checks:
        rep.check(f"{c.realization} (degree {c.degree}) vanishes iff flagged", c.agrees)
    mrep = matinv.orbit_rep(theta, datum)
    out["partition"] = list(mrep.partition)
    if orbit.very_even_tag:
        sign = matinv.very_even_check(mrep).sign
        out["very_even_sign"] = sign
        rep.check("very even sign follows the tag", sign == (1 if orbit.very_even_tag == 1 else -1))
    rng = random.Random(args.seed)
    real = mrep.realization
    points = [real.random_element(rng) for _ in range(args.points)]
    euler_ok = all(matinv.euler_check(a, b, m, real).holds for m in points for a, b in ((1, 1), (2, 1), (1, 2)))
    rep.check("Euler identity at random points", euler_ok)
    rep.outputs = out
    return [rep]


def cmd_pfaffian(args) -> list[Report]:
    with open(args.input) as fh:
        rows = json.load(fh)
    m = matinv.from_json_matrix(rows)
    if args.size is not None and m.shape != (args.size, args.size):
        raise matinv.MatrixError(f"matrix is {m.shape[0]}x{m.shape[1]}, expected size {args.size}")
    rep = Report("pfaffian", {"input": args.input, "size": m.shape[0]}, provenance=["Pf^2 = det"])
    value = matinv.pfaffian(m, check=False)
    det = matinv.to_fraction(m.det())
    rep.outputs = {"pfaffian": str(value), "determinant": str(det)}
    rep.check("Pf^2 = det", value * value == det)
    return [rep]


# ---------------------------------------------------------------------------
# output and entry point


def _format_table(rep: Report) -> str:
    lines = [f"== {rep.command} {json.dumps(rep.inputs)}"]
    outputs = rep.outputs
    if isinstance(outputs, dict):
        for k, v in outputs.items():
            lines.append(f"  {k:<18} {json.dumps(v)}")
    elif isinstance(outputs, list):
        for row in outputs:
            lines.append("  " + json.dumps(row))
    for name, ok in rep.checks:
        lines.append(f"  [{'PASS' if ok else 'FAIL'}] {name}")
    return "\n".join(lines)


COMMANDS: dict[str, Callable[[argparse.Namespace], list[Report]]] = {
    "exponents": cmd_exponents,
    "classify": cmd_classify,
    "generators": cmd_generators,
    "rewrite": cmd_rewrite,
    "covariants": cmd_covariants,
    "verify": cmd_verify,
    "pfaffian": cmd_pfaffian,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilgen", description=__doc__.splitlines()[0])
    parser.add_argument("--table", action="store_true", help="human-readable output instead of JSON lines")
    parser.add_argument("-v", "--verbose", action="store_true")
    # the same flags after the subcommand; SUPPRESS keeps them from resetting the top-level values
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--table", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponents", parents=[common], help="exponents and generalized phi-exponents")
    p.add_argument("type")

    for name, helptext in (("classify", "orbit and family of O_Theta"), ("generators", "minimal generator data")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("type")
        p.add_argument("--theta", help="comma-separated simple root indices")
        p.add_argument("--theta-class", help="Bala-Carter label of an exceptional orbit")

    p = sub.add_parser("rewrite", parents=[common], help="normalise H_Omega(lambda)[shift] to phi")
    p.add_argument("type")
    p.add_argument("--omega", default="", help="comma-separated simple root indices")
    p.add_argument("--lambda", dest="weight", required=True, help="a<i> for a simple root, or coordinates")
    p.add_argument("--initial-shift", type=int, default=0)

    p = sub.add_parser("covariants", parents=[common], help="existence table of covariants of weight phi")
    p.add_argument("type")

    p = sub.add_parser("verify", parents=[common], help="matrix checks for a classical orbit")
    p.add_argument("type")
    p.add_argument("--theta")
    p.add_argument("--theta-class")
    p.add_argument("--seed", type=int, default=matinv.default_seed())
    p.add_argument("--points", type=int, default=3, help="random points for the Euler identity")

    p = sub.add_parser("pfaffian", parents=[common], help="exact Pfaffian of a JSON matrix of rational strings")
    p.add_argument("--size", type=int)
    p.add_argument("--input", required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        reports = COMMANDS[args.command](args)
    except (argparse.ArgumentTypeError, RootSystemError, orbits.OrbitError, moves.MoveError, matinv.MatrixError) as exc:
        print(f"nilgen {args.command}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"nilgen {args.command}: {exc}", file=sys.stderr)
        return 2
    for rep in reports:
        print(_format_table(rep) if args.table else json.dumps(rep.to_json(), sort_keys=True))
        for name, ok in rep.checks:
            if not ok:
                log.error("check failed: %s", name)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
