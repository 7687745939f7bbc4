"""``fitcalc`` command line: ``run`` a problem file or ``emit`` a cross-check script."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from .emit import DIALECTS, emit_crosscheck
from .errors import BudgetExceeded, FitcalcError, ParseError
from .germ import FitcalcWarning
from .ideals import Ideal
from .pipeline import (METHODS, consistency_report, double_point_ideal, fitting1_from_unfolding,
                       fitting1_grauert_remmert, fitting_tower_theorem2, image_ideal)
from .presentation import fitting_from_presentation, presentation_matrix
from .problem import TASKS, ProblemSpec, load_problem

EXIT_OK, EXIT_PARSE, EXIT_COMPUTE, EXIT_BUDGET = 0, 2, 3, 4

log = logging.getLogger("fitcalc")


class Report:
    """Ordered collection of labelled ideals plus free-form sections."""

    def __init__(self, spec: ProblemSpec):
        self.spec = spec
        self.germ = spec.germ()
        self.ideals: list[tuple[str, Ideal]] = []
        self.sections: list[tuple[str, list[str]]] = []
        self.data: dict = {}
        self.warnings: list[str] = []

    def add_ideal(self, label: str, I: Ideal) -> None:
        self.ideals.append((label, I))

    def text(self) -> str:
        f = self.germ
        out = [
            f"# fitcalc report{': ' + self.spec.name if self.spec.name else ''}",
            f"source: {', '.join(f.source.vars)} weights {', '.join(map(str, f.source.weights))}",
            f"target: {', '.join(f.target.vars)} weights {', '.join(map(str, f.target.weights))}",
            f"map: {f.describe()}",
        ]
        for label, I in self.ideals:
            out.append("")
            out.append(f"[{label}]")
            gens = I.reduced_gens()
            out.extend(g.to_str() for g in gens) if gens else out.append("0")
        for title, body in self.sections:
            out.append("")
            out.append(f"[{title}]")
            out.extend(body)
        if self.warnings:
            out.append("")
            out.append("[warnings]")
            out.extend(self.warnings)
        return "\n".join(out) + "\n"

    def structured(self) -> dict:
        f = self.germ
        return {
            "name": self.spec.name,
            "source": {"vars": list(f.source.vars), "weights": list(f.source.weights)},
            "target": {"vars": list(f.target.vars), "weights": list(f.target.weights)},
            "components": [c.to_str() for c in f.components],
            "ideals": [{"label": label, "generators": [g.to_str() for g in I.reduced_gens()]}
                       for label, I in self.ideals],
            **self.data,
            "warnings": self.warnings,
        }


def execute(spec: ProblemSpec, tasks: list[str] | None = None, budget: int | None = None) -> Report:
    """Run the requested tasks; raises :class:`FitcalcError` subclasses on hard errors."""
    tasks = tasks or spec.tasks
    budget = budget if budget is not None else spec.budget
    report = Report(spec)
    f = report.germ
    F = spec.unfolded_germ()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", FitcalcWarning)
        h = image_ideal(f, budget=budget)
        T = h.ring
        fit1 = None
        if "image" in tasks:
            report.add_ideal("Fitt_0[elimination]", Ideal(T, [h]))
        if "fitting1" in tasks or "tower" in tasks:
            fit1 = fitting1_grauert_remmert(f, image=h, budget=budget)
        if "fitting1" in tasks:
            report.add_ideal("Fitt_1[grauert_remmert]", fit1)
            if F is not None:
                report.add_ideal("Fitt_1[theorem1]", fitting1_from_unfolding(f, F, budget=budget))
        if "tower" in tasks:
            tower = fitting_tower_theorem2(f, fit1=fit1, image=h, budget=budget)
            for k, I in enumerate(tower):
                report.add_ideal(f"Fitt_{k}[theorem2_tower]", I)
        if "presentation" in tasks:
            P = presentation_matrix(f, image=h, budget=budget)
            body = [f"size: {P.size}",
                    "basis: " + ", ".join(p.to_str() for p in P.basis.polynomials()),
                    f"validated: {str(P.validated).lower()}"]
            body += P.lam.format("caret").splitlines()
            report.sections.append(("presentation", body))
            report.data["presentation"] = {
                "size": P.size, "validated": P.validated,
                "basis": [p.to_str() for p in P.basis.polynomials()],
                "lambda": [[e.to_str() for e in row] for row in P.lam.to_rows()],
            }
            if P.validated:
                for k in range(P.size + 1):
                    report.add_ideal(f"Fitt_{k}[minors]", fitting_from_presentation(P, k))
        if "double-points" in tasks:
            report.add_ideal("D2[double_points]", double_point_ideal(f))
        if "consistency" in tasks:
            methods = [m for m in METHODS if m != "theorem1" or F is not None or f.is_weighted_homogeneous()]
            cr = consistency_report(f, methods, unfolding=F, budget=budget)
            run = cr.methods_run
            rows = [" ".join([" " * 16] + [m[:16].ljust(16) for m in run])]
            for a in run:
                cells = []
                for b in run:
                    v = cr.consistency.get((a, b))
                    cells.append(("-" if v is None else str(v).lower()).ljust(16))
                rows.append(" ".join([a[:16].ljust(16)] + cells))
            body = [f"methods: {', '.join(run)}", f"all_equal: {str(cr.all_consistent()).lower()}"]
            body += rows
            body += [f"failed {k}: {v}" for k, v in sorted(cr.errors.items())]
            report.sections.append(("consistency", body))
            report.data["consistency"] = {
                "methods": run,
                "all_equal": cr.all_consistent(),
                "matrix": {a: {b: cr.consistency.get((a, b)) for b in run} for a in run},
                "errors": dict(sorted(cr.errors.items())),
            }
            report.warnings.extend(cr.warnings)
    for w in caught:
        report.warnings.append(str(w.message))
    report.warnings = list(dict.fromkeys(report.warnings))
    return report


def _cmd_run(args) -> int:
    spec = load_problem(args.file)
    tasks = args.task or None
    if tasks:
        bad = [t for t in tasks if t not in TASKS]
        if bad:
            raise ParseError(f"unknown task {bad[0]!r}")
    fmt = args.format or spec.format
    report = execute(spec, tasks, args.budget)
    text = report.text()
    structured = json.dumps(report.structured(), indent=2, sort_keys=True) + "\n"
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = spec.name or "report"
        (out / f"{stem}.txt").write_text(text, encoding="utf-8")
        (out / f"{stem}.json").write_text(structured, encoding="utf-8")
    sys.stdout.write(text if fmt == "text" else structured)
    return EXIT_OK


def _cmd_emit(args) -> int:
    spec = load_problem(args.file)
    sys.stdout.write(emit_crosscheck(spec, args.dialect))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fitcalc",
                                description="Fitting ideals of finite map germs C^n -> C^(n+1).")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run the tasks of a problem file")
    r.add_argument("file")
    r.add_argument("--task", action="append", choices=TASKS,
                   help="override the file's task list (repeatable)")
    r.add_argument("--budget", type=int, help="reduction-step budget per Groebner computation")
    r.add_argument("--format", choices=("text", "structured"))
    r.add_argument("--out-dir", help="also write <name>.txt and <name>.json here")
    r.set_defaults(func=_cmd_run)

    e = sub.add_parser("emit", help="print a cross-check script for an external CAS")
    e.add_argument("file")
    e.add_argument("--dialect", required=True, choices=DIALECTS)
    e.set_defaults(func=_cmd_emit)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"fitcalc: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"fitcalc: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FitcalcError as exc:
        print(f"fitcalc: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
