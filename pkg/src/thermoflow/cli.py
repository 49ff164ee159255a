"""Command-line front end.

Exit status: 0 on success, 1 on a domain error, 2 on a parse or usage error.
Set ``THERMOFLOW_LOG`` to ``quiet`` (default), ``info`` or ``debug`` for
diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import logging
import os
import sys
from dataclasses import dataclass, field

from . import perturbation, pressure as pr, suspension as sus
from .errors import ParseError, ThermoflowError
from .model import ModelFile, format_word, read_model
from .potential import LcPotential
from .verify import LIMITATION, run_suite

log = logging.getLogger("thermoflow")

LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class Report:
    command: str
    digest: str
    results: list[tuple[str, float]] = field(default_factory=list)
    residuals: list[tuple[str, float, float]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    status: str = "ok"

    def add(self, name: str, value: float):
        self.results.append((name, float(value)))

    def check(self, name: str, achieved: float, tol: float):
        self.residuals.append((name, float(achieved), float(tol)))

    @property
    def passed(self) -> bool:
        return all(a <= t for _, a, t in self.residuals)

    def render(self) -> str:
        out = ["thermoflow report", f"command: {self.command}", f"inputs: sha256:{self.digest}"]
        out.append("results:")
        out += [f"  {name} = {fmt(v)}" for name, v in self.results]
        if self.residuals:
            out.append("residuals:")
            for name, a, t in self.residuals:
                verdict = "pass" if a <= t else "FAIL"
                out.append(f"  {name}: {fmt(a)} <= {fmt(t)} {verdict}")
        out += [f"note: {n}" for n in self.notes]
        out.append(f"status: {self.status}")
        return "\n".join(out) + "\n"

    def write_csv(self, path: str):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["name", "value"])
            for name, v in self.results:
                w.writerow([name, fmt(v)])


def _pick(table: dict, name: str | None, kind: str, default=None):
    if name is not None:
        if name not in table:
            raise ThermoflowError(f"no {kind} named {name!r} in the model")
        return table[name]
    if len(table) == 1:
        return next(iter(table.values()))
    if default is not None:
        return default
    raise ThermoflowError(f"model has {len(table)} {kind} blocks; choose one with --{kind}")


def _word(model: ModelFile, w) -> str:
    return format_word(tuple(int(s) for s in w), model.sft.n)


def _measure_results(report: Report, model: ModelFile, mu: pr.MarkovMeasure, prefix: str):
    for state, p in zip(mu.states, mu.pi):
        report.add(f"{prefix}pi[{_word(model, state)}]", p)
    for i, j in zip(*mu.trans.nonzero()):
        report.add(f"{prefix}trans[{_word(model, mu.states[i])}->{_word(model, mu.states[j])}]", mu.trans[i, j])


def cmd_entropy(args, model, report):
    report.add("h_sigma", pr.topological_entropy(model.sft))


def cmd_pressure(args, model, report):
    p = _pick(model.potentials, args.potential, "potential")
    res = pr.pressure(p)
    report.add("pressure", res.value)
    report.add("lambda", res.lam)
    report.check("eigen_residual", res.residual, pr.RESIDUAL_TOL)


def cmd_equilibrium(args, model, report):
    p = _pick(model.potentials, args.potential, "potential")
    res = pr.pressure(p)
    mu = pr.equilibrium(p, res)
    h, integral = pr.entropy(mu), pr.integrate(p, mu)
    report.add("pressure", res.value)
    report.add("entropy", h)
    report.add("integral", integral)
    for s, m in enumerate(pr.symbol_marginal(mu)):
        report.add(f"symbol[{s + 1}]", m)
    _measure_results(report, model, mu, "")
    report.check("equilibrium_identity", abs(h + integral - res.value), 1e-10)


def _bowen(report: Report, sol, name: str):
    report.add(name, sol.t_star)
    report.add("bracket_lo", sol.bracket[0])
    report.add("bracket_hi", sol.bracket[1])
    report.add("iterations", sol.iterations)
    report.check("bowen_residual", sol.residual, 1e-10)


def cmd_flow_entropy(args, model, report):
    roof = _pick(model.roofs, args.roof, "roof")
    _bowen(report, sus.flow_entropy(roof), "h_flow")


def cmd_flow_pressure(args, model, report):
    roof = _pick(model.roofs, args.roof, "roof")
    g = _pick(model.fibers, args.fiber, "fiber")
    _bowen(report, sus.flow_pressure(g, roof), "p_flow")


def cmd_mme(args, model, report):
    roof = _pick(model.roofs, args.roof, "roof")
    h = sus.flow_entropy(roof).t_star
    nu = sus.flow_mme(roof)
    report.add("h_flow", h)
    report.add("normalizer", nu.normalizer)
    report.add("abramov_entropy", sus.abramov_entropy(nu))
    _measure_results(report, model, nu.base, "base.")
    report.check("abramov_vs_bowen", abs(sus.abramov_entropy(nu) - h), sus.MME_TOL)


def _phi(args, model):
    p = _pick(model.potentials, args.potential, "potential")
    return perturbation.normalize_lemma1(p) if args.normalize else p


def _perturbation(report: Report, model: ModelFile, rep, kind: str):
    report.add(f"{rep.preserved_name}_before", rep.before)
    report.add(f"{rep.preserved_name}_after", rep.after)
    report.add("distance", rep.distance)
    for k, v in rep.info.items():
        report.add(k, v)
    out = rep.output
    if kind == "roof":
        for w, v in out.items():
            report.add(f"roof[{_word(model, w)}]", v)
    else:
        for w, cs in out.items():
            for d, c in enumerate(cs):
                report.add(f"fiber[{_word(model, w)}][{d}]", c)
    for name, (a, t) in rep.residuals.items():
        report.check(name, a, t)


def cmd_perturb_roof(args, model, report):
    roof = _pick(model.roofs, args.roof, "roof")
    rep = perturbation.perturb_roof(roof, _phi(args, model))
    report.add("ratio_distance", sus.reparam_distance(roof, rep.output)[1])
    _perturbation(report, model, rep, "roof")


def cmd_perturb_fiber(args, model, report):
    roof = _pick(model.roofs, args.roof, "roof")
    g = _pick(model.fibers, args.fiber, "fiber")
    rep = perturbation.perturb_fiber(g, roof, _phi(args, model), args.epsilon)
    _perturbation(report, model, rep, "fiber")


def cmd_almost_eq(args, model, report):
    p = _pick(model.potentials, args.potential, "potential", default=LcPotential.zero(model.sft))
    value = pr.pressure(p).value
    mus = perturbation.almost_equilibria(p, args.epsilon, args.count, args.seed)
    report.add("pressure", value)
    for i, mu in enumerate(mus):
        margin = perturbation.a_margin(p, mu, args.epsilon, value)
        report.add(f"mu{i}.entropy", pr.entropy(mu))
        report.add(f"mu{i}.margin", margin)
        _measure_results(report, model, mu, f"mu{i}.")
        report.check(f"mu{i}.margin_shortfall", perturbation.A_MARGIN - margin, 0.0)


def cmd_verify(args, model, report):
    results = run_suite(args.seed)
    for r in results:
        report.notes.append(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
        report.check(r.name, 0.0 if r.passed else 1.0, 0.0)
    report.add("checks", len(results))
    report.add("passed", sum(r.passed for r in results))
    report.notes.append(LIMITATION)


COMMANDS = {
    "entropy": cmd_entropy,
    "pressure": cmd_pressure,
    "equilibrium": cmd_equilibrium,
    "flow-entropy": cmd_flow_entropy,
    "flow-pressure": cmd_flow_pressure,
    "mme": cmd_mme,
    "perturb-roof": cmd_perturb_roof,
    "perturb-fiber": cmd_perturb_fiber,
    "almost-eq": cmd_almost_eq,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thermoflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("model", nargs="?" if name == "verify" else None, help="model file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--csv", metavar="PATH")
        if name in ("pressure", "equilibrium", "perturb-roof", "perturb-fiber", "almost-eq"):
            p.add_argument("--potential", metavar="NAME")
        if name in ("flow-entropy", "flow-pressure", "mme", "perturb-roof", "perturb-fiber"):
            p.add_argument("--roof", metavar="NAME")
        if name in ("flow-pressure", "perturb-fiber"):
            p.add_argument("--fiber", metavar="NAME")
        if name in ("perturb-roof", "perturb-fiber"):
            p.add_argument("--normalize", action="store_true", help="replace the potential f by P(f) - f first")
        if name in ("perturb-fiber", "almost-eq"):
            p.add_argument("--epsilon", type=float, default=0.01)
        if name == "almost-eq":
            p.add_argument("--count", type=int, default=5)
    return parser


def _echo(argv: list[str]) -> str:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--csv":
            skip = True
            continue
        if a.startswith("--csv="):
            continue
        out.append(a)
    return " ".join(out)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    level = LOG_LEVELS.get(os.environ.get("THERMOFLOW_LOG", "quiet"), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        model = read_model(args.model) if args.model else None
        canonical = model.to_text() if model else ""
        digest = hashlib.sha256((canonical + "\0" + _echo(argv)).encode()).hexdigest()
        report = Report(_echo(argv), digest)
        if model is None and args.command != "verify":
            raise ThermoflowError("a model file is required")
        COMMANDS[args.command](args, model, report)
    except ParseError as exc:
        print(f"thermoflow: parse error: {exc}", file=sys.stderr)
        return 2
    except (ThermoflowError, OSError) as exc:
        print(f"thermoflow: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    report.status = "ok" if report.passed else "failed"
    sys.stdout.write(report.render())
    if args.csv:
        report.write_csv(args.csv)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
